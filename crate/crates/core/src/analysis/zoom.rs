//! Zoomed branches, the comparison maps `F_n`, and norm distances.

use std::cell::RefCell;
use std::sync::Arc;

use serde::Serialize;

use crate::combinatorics::Letter;
use crate::error::{Error, Result};
use crate::induction::{compose_along, InductionState};
use crate::maps::Giem;
use crate::quadrature::integrate_with_breaks;

/// Grid sizes accepted by experiments.
pub const GRID_SIZES: [usize; 3] = [1025, 4097, 8193];
pub const DEFAULT_GRID: usize = 4097;
/// Zoomed endpoints must land on 0 and 1 within this.
pub const ENDPOINT_TOL: f64 = 1e-10;
/// Relative mismatch allowed between the computed and expected image of a branch.
const ONTO_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
enum Source {
    Return {
        f: Arc<Giem>,
        state: Arc<InductionState>,
        letter: Letter,
        x0: f64,
        len: f64,
        y0: f64,
        ylen: f64,
    },
    Moebius {
        m: f64,
    },
}

/// Where a zoomed map came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub level: Option<usize>,
    pub letter: Option<String>,
    pub interval: (f64, f64),
}

/// A map of `[0, 1]` onto itself sampled on a uniform grid, with an evaluator
/// for off-grid queries.
#[derive(Debug, Clone)]
pub struct ZoomedMap {
    pub values: Vec<f64>,
    pub d1: Vec<f64>,
    pub provenance: Provenance,
    /// Points of `[0, 1]` where the second derivative may be singular.
    pub kinks: Vec<f64>,
    source: Source,
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    let h = 1.0 / (n - 1) as f64;
    (0..n).map(move |k| if k == n - 1 { 1.0 } else { k as f64 * h })
}

/// Maps `f` over `xs` on all available cores, preserving order.
pub(crate) fn par_map<T: Send, F: Fn(f64) -> T + Sync>(xs: &[f64], f: F) -> Vec<T> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(16);
    if workers == 1 || xs.len() < 64 {
        return xs.iter().map(|&x| f(x)).collect();
    }
    let chunk = xs.len().div_ceil(workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = xs.chunks(chunk).map(|c| s.spawn(|| c.iter().map(|&x| f(x)).collect::<Vec<T>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

impl ZoomedMap {
    fn sample(source: Source, provenance: Provenance, kinks: Vec<f64>, nodes: usize) -> Result<Self> {
        if nodes < 3 {
            return Err(Error::InvalidArgument(format!("grid of {nodes} nodes is too small")));
        }
        let mut z = ZoomedMap { values: Vec::new(), d1: Vec::new(), provenance, kinks, source };
        let ts: Vec<f64> = grid(nodes).collect();
        let jets = par_map(&ts, |t| z.jet(t));
        for j in jets {
            let (v, d, _) = j?;
            z.values.push(v);
            z.d1.push(d);
        }
        let (v0, v1) = (z.values[0], z.values[nodes - 1]);
        if v0.abs() > ENDPOINT_TOL || (v1 - 1.0).abs() > ENDPOINT_TOL {
            return Err(Error::InvalidArgument(format!("zoomed endpoints {v0}, {v1} are not 0 and 1")));
        }
        if z.values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("zoomed samples are not increasing".into()));
        }
        Ok(z)
    }

    pub fn nodes(&self) -> usize {
        self.values.len()
    }

    /// Value, first and second derivative at `t ∈ [0, 1]`.
    pub fn jet(&self, t: f64) -> Result<(f64, f64, f64)> {
        match &self.source {
            Source::Moebius { m } => Ok(moebius_jet(*m, t)),
            Source::Return { f, state, letter, x0, len, y0, ylen } => {
                let x = if t >= 1.0 { x0 + len } else { x0 + t * len };
                let j = compose_along(f, &state.words[*letter], x)?;
                Ok(((j.value - y0) / ylen, j.d1 * len / ylen, j.d2 * len * len / ylen))
            }
        }
    }

    /// The same map on a grid of `nodes` points.
    pub fn resample(&self, nodes: usize) -> Result<Self> {
        ZoomedMap::sample(self.source.clone(), self.provenance.clone(), self.kinks.clone(), nodes)
    }
}

/// `F(x) = xm / (1 + x(m−1))` with its first two derivatives.
pub fn moebius_jet(m: f64, x: f64) -> (f64, f64, f64) {
    let den = 1.0 + x * (m - 1.0);
    (x * m / den, m / (den * den), -2.0 * m * (m - 1.0) / (den * den * den))
}

/// `F_n` for parameter `m`, sampled on `nodes` points.
pub fn moebius_f(m: f64, nodes: usize) -> Result<ZoomedMap> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::InvalidArgument(format!("Moebius parameter {m} must be positive")));
    }
    let provenance = Provenance { level: None, letter: None, interval: (0.0, 1.0) };
    ZoomedMap::sample(Source::Moebius { m }, provenance, Vec::new(), nodes)
}

/// Points of `I⁽ⁿ⁾_α` whose orbit before returning hits a kink of `f`.
fn pulled_back_kinks(f: &Giem, state: &InductionState, a: Letter) -> Vec<f64> {
    if f.kinks().is_empty() {
        return Vec::new();
    }
    let letters = state.words[a].to_vec();
    let mut out = Vec::new();
    let (mut lo, mut hi) = (state.start[a], state.end(a));
    for (i, &b) in letters.iter().enumerate() {
        let br = f.branch(b);
        if let Some(k) = br.kink() {
            if k > lo && k < hi {
                let mut x = k;
                for &c in letters[..i].iter().rev() {
                    x = f.branch(c).inverse(x);
                }
                out.push(x);
            }
        }
        lo = br.value(lo);
        hi = br.value(hi);
    }
    out.sort_by(f64::total_cmp);
    out
}

/// `Z(Rⁿf|I⁽ⁿ⁾_α)`: the return-map branch of `α` conjugated by affine maps
/// onto `[0, 1]` at both ends.
pub fn zoom(f: &Giem, state: &InductionState, a: Letter, nodes: usize) -> Result<ZoomedMap> {
    let x0 = state.start[a];
    let len = state.len[a];
    let word = &state.words[a];
    let y0 = compose_along(f, word, x0)?.value;
    let y1 = compose_along(f, word, x0 + len)?.value;
    let (ey0, eylen) = (state.image_start[a], state.image_len(a));
    let scale = state.domain_len.max(f64::MIN_POSITIVE);
    if ((y0 - ey0).abs() + (y1 - ey0 - eylen).abs()) / scale > ONTO_TOL {
        return Err(Error::InvalidArgument(format!(
            "branch {} at level {} maps onto [{y0}, {y1}], expected [{ey0}, {}]",
            state.pair.symbol(a),
            state.level,
            ey0 + eylen
        )));
    }
    let ylen = y1 - y0;
    let kinks = pulled_back_kinks(f, state, a).into_iter().map(|x| (x - x0) / len).collect();
    let provenance = Provenance {
        level: Some(state.level),
        letter: Some(state.pair.symbol(a).to_string()),
        interval: (x0, x0 + len),
    };
    let source = Source::Return {
        f: Arc::new(f.clone()),
        state: Arc::new(state.clone()),
        letter: a,
        x0,
        len,
        y0,
        ylen,
    };
    ZoomedMap::sample(source, provenance, kinks, nodes)
}

fn check_grids(a: &ZoomedMap, b: &ZoomedMap) -> Result<()> {
    if a.nodes() != b.nodes() {
        return Err(Error::Dimension(format!("grids of {} and {} nodes", a.nodes(), b.nodes())));
    }
    Ok(())
}

/// Refines a grid maximum of `|g|` by evaluating at the vertex of the parabola
/// through the maximizer and its neighbours.
fn refine_max(samples: &[f64], g: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let n = samples.len();
    let (k, &best) = samples
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty grid");
    if k == 0 || k == n - 1 {
        return Ok(best);
    }
    let (l, c, r) = (samples[k - 1], samples[k], samples[k + 1]);
    let den = l - 2.0 * c + r;
    if den >= 0.0 {
        return Ok(best);
    }
    let h = 1.0 / (n - 1) as f64;
    let shift = (0.5 * (l - r) / den).clamp(-1.0, 1.0);
    let t = (k as f64 + shift) * h;
    Ok(best.max(g(t)?.abs()))
}

/// `max|a − b| + max|Da − Db|` over the grid, each refined near its maximizer.
pub fn c1_distance(a: &ZoomedMap, b: &ZoomedMap) -> Result<f64> {
    check_grids(a, b)?;
    let dv: Vec<f64> = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).collect();
    let dd: Vec<f64> = a.d1.iter().zip(&b.d1).map(|(x, y)| (x - y).abs()).collect();
    let v = refine_max(&dv, |t| Ok(a.jet(t)?.0 - b.jet(t)?.0))?;
    let d = refine_max(&dd, |t| Ok(a.jet(t)?.1 - b.jet(t)?.1))?;
    Ok(v + d)
}

/// `c1_distance` on the given grid and on a finer one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCheck {
    pub coarse: f64,
    pub fine: f64,
    pub relative_gap: f64,
}

impl GridCheck {
    /// Agreement within 2%, or both at round-off level.
    pub fn agrees(&self) -> bool {
        self.relative_gap <= 0.02 || self.coarse.max(self.fine) < 1e-12
    }
}

pub fn c1_grid_check(a: &ZoomedMap, b: &ZoomedMap, fine_nodes: usize) -> Result<GridCheck> {
    let coarse = c1_distance(a, b)?;
    let fine = c1_distance(&a.resample(fine_nodes)?, &b.resample(fine_nodes)?)?;
    let relative_gap = (coarse - fine).abs() / coarse.max(fine).max(f64::MIN_POSITIVE);
    Ok(GridCheck { coarse, fine, relative_gap })
}

/// Quadrature tolerance of [`l1_second_derivative_distance`].
pub const L1_TOL: f64 = 1e-9;

/// `∫₀¹ |D²a − D²b|`, split at the kinks of both maps.
pub fn l1_second_derivative_distance(a: &ZoomedMap, b: &ZoomedMap) -> Result<f64> {
    let mut breaks: Vec<f64> = a.kinks.iter().chain(&b.kinks).copied().filter(|&t| t > 0.0 && t < 1.0).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let failure = RefCell::new(None);
    let value = integrate_with_breaks(
        |t| match (a.jet(t), b.jet(t)) {
            (Ok(x), Ok(y)) => (x.2 - y.2).abs(),
            (Err(e), _) | (_, Err(e)) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        0.0,
        1.0,
        &breaks,
        L1_TOL,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::Pair;
    use crate::maps::{make_affine_iem, make_standard_iem, Shape};

    #[test]
    fn moebius_examples() {
        let f = moebius_f(2.0, 1025).unwrap();
        assert!((f.jet(0.5).unwrap().0 - 2.0 / 3.0).abs() < 1e-15);
        let (_, d0, _) = moebius_jet(2.0, 0.0);
        let (_, d1, _) = moebius_jet(2.0, 1.0);
        assert_eq!((d0, d1), (2.0, 0.5));
        let id = moebius_f(1.0, 1025).unwrap();
        assert!(id.values.iter().enumerate().all(|(k, v)| (v - k as f64 / 1024.0).abs() < 1e-15));
        assert!(moebius_f(0.0, 1025).is_err());
    }

    #[test]
    fn zoom_of_affine_is_identity() {
        let f = make_affine_iem(&Pair::rotation(), &[0.4, 0.6], &[0.3, (1.0 - 0.4 * 0.3f64.exp()).ln() - 0.6f64.ln()]).unwrap();
        let s = InductionState::initial(&f);
        let id = moebius_f(1.0, 1025).unwrap();
        for a in 0..2 {
            let z = zoom(&f, &s, a, 1025).unwrap();
            assert!(c1_distance(&z, &id).unwrap() < 1e-12);
            assert!(l1_second_derivative_distance(&z, &id).unwrap() < 1e-12);
        }
    }

    #[test]
    fn zoom_of_moebius_branch() {
        let shapes = [Shape::moebius(1.7).unwrap(), Shape::Linear];
        let f = Giem::new(Pair::rotation(), &[0.3, 0.7], &[0.5, 0.5], &shapes).unwrap();
        let z = zoom(&f, &InductionState::initial(&f), 0, 1025).unwrap();
        let m = moebius_f(1.7, 1025).unwrap();
        assert!(c1_distance(&z, &m).unwrap() < 1e-12);
    }

    #[test]
    fn distances() {
        let id = moebius_f(1.0, 4097).unwrap();
        let near = moebius_f(1.0 + 1e-6, 4097).unwrap();
        assert!(c1_distance(&id, &near).unwrap() < 1e-5);
        assert_eq!(c1_distance(&id, &id).unwrap(), 0.0);
        let two = moebius_f(2.0, 1025).unwrap();
        let l1 = l1_second_derivative_distance(&id.resample(1025).unwrap(), &two).unwrap();
        assert!((l1 - 1.5).abs() < 1e-9, "{l1}");
        assert!(c1_distance(&id, &two).is_err());
    }

    #[test]
    fn c1_distance_refines_between_nodes() {
        let a = moebius_f(1.5, 1025).unwrap();
        let b = moebius_f(1.0, 1025).unwrap();
        // |F − id| peaks at x = 1/(1+√m)
        let m: f64 = 1.5;
        let x = 1.0 / (1.0 + m.sqrt());
        let peak = x * m / (1.0 + x * (m - 1.0)) - x;
        let check = c1_grid_check(&a, &b, 8193).unwrap();
        assert!(check.agrees());
        assert!((check.coarse - (peak + (m - 1.0))).abs() < 1e-9);
    }

    #[test]
    fn standard_return_maps_zoom_to_identity() {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let f = make_standard_iem(&Pair::rotation(), &[g, 1.0 - g]).unwrap();
        let r = crate::induction::renormalize(&f, 8).into_result().unwrap();
        let id = moebius_f(1.0, 1025).unwrap();
        for a in 0..2 {
            let z = zoom(&f, &r[8], a, 1025).unwrap();
            assert!(c1_distance(&z, &id).unwrap() < 1e-9);
        }
    }
}
