//! Generalized interval exchange maps on `[0, 1)`.

mod def;
mod shape;

pub use def::{BranchDef, MapDef, Num, TuneDef};
pub use shape::{Branch, PowerKink, Shape};

use serde::Serialize;

use crate::combinatorics::{omega_matrix, Letter, MoveType, Pair};
use crate::error::{Error, Result};
use crate::linalg::big_to_f64;
use crate::quadrature::integrate_with_breaks;
use crate::scalar::Scalar;

/// Tolerance on `Σ λ_α = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Tolerance on `Σ |f(I_α)| = 1`.
pub const TILING_TOL: f64 = 1e-10;

/// A g.i.e.m.: one [`Branch`] per letter, domains ordered by `π₀` and images
/// by `π₁`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Giem {
    pair: Pair,
    branches: Vec<Branch>,
}

fn cumulative(order: &[Letter], lens: &[f64]) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); lens.len()];
    let mut x = 0.0;
    for (k, &a) in order.iter().enumerate() {
        let end = if k + 1 == order.len() { 1.0 } else { x + lens[a] };
        out[a] = (x, end);
        x = end;
    }
    out
}

impl Giem {
    /// Builds a map from domain lengths, image lengths and shapes, all
    /// indexed by letter.
    pub fn new(pair: Pair, lengths: &[f64], image_lengths: &[f64], shapes: &[Shape]) -> Result<Self> {
        let d = pair.d();
        if lengths.len() != d || image_lengths.len() != d || shapes.len() != d {
            return Err(Error::Dimension(format!("expected {d} lengths and shapes")));
        }
        if lengths.iter().chain(image_lengths).any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidMap("lengths must be positive".into()));
        }
        let sum: f64 = lengths.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Normalization(sum));
        }
        let image_sum: f64 = image_lengths.iter().sum();
        if (image_sum - 1.0).abs() > TILING_TOL {
            return Err(Error::IncompatibleSlopes(image_sum));
        }
        let dom = cumulative(&pair.row(MoveType::Zero), lengths);
        let img = cumulative(&pair.row(MoveType::One), image_lengths);
        let branches = (0..d)
            .map(|a| Branch::new(dom[a].0, dom[a].1, img[a].0, img[a].1, shapes[a]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Giem { pair, branches })
    }

    pub fn pair(&self) -> &Pair {
        &self.pair
    }

    pub fn d(&self) -> usize {
        self.pair.d()
    }

    pub fn branch(&self, a: Letter) -> &Branch {
        &self.branches[a]
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.branches.iter().map(Branch::len).collect()
    }

    pub fn image_lengths(&self) -> Vec<f64> {
        self.branches.iter().map(Branch::image_len).collect()
    }

    pub fn shapes(&self) -> Vec<Shape> {
        self.branches.iter().map(|b| b.shape).collect()
    }

    /// Letter whose interval contains `x`, if `x ∈ [0, 1)`.
    pub fn letter_at(&self, x: f64) -> Option<Letter> {
        if !(0.0..1.0).contains(&x) {
            return None;
        }
        self.branches.iter().position(|b| x >= b.a && x < b.b)
    }

    pub fn eval<S: Scalar>(&self, x: S) -> Result<S> {
        let xf = x.to_f64();
        let a = self.letter_at(xf).ok_or(Error::Domain { x: xf, start: 0.0, end: 1.0 })?;
        Ok(self.branches[a].value(x))
    }

    pub fn inverse<S: Scalar>(&self, y: S) -> Result<S> {
        let yf = y.to_f64();
        let a = self
            .branches
            .iter()
            .position(|b| yf >= b.u && yf < b.v)
            .ok_or(Error::Domain { x: yf, start: 0.0, end: 1.0 })?;
        Ok(self.branches[a].inverse(y))
    }

    /// Points of `[0, 1)` where some branch has a singular second derivative.
    pub fn kinks(&self) -> Vec<f64> {
        self.branches.iter().filter_map(Branch::kink).collect()
    }

    /// Whether every branch is affine.
    pub fn is_affine(&self) -> bool {
        self.branches.iter().all(|b| matches!(b.shape, Shape::Linear))
    }

    /// Left endpoints `∂I_α`, by letter.
    pub fn endpoints(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.a).collect()
    }

    /// `(ln Df(x⁻), ln Df(x⁺))`, reading `x⁻` at `0` as `1⁻`.
    pub fn one_sided_log_derivatives(&self, x: f64) -> Result<(f64, f64)> {
        let right = self
            .letter_at(x)
            .ok_or(Error::Domain { x, start: 0.0, end: 1.0 })?;
        let left = if x == 0.0 {
            self.pair.letter_at(MoveType::Zero, self.d())
        } else {
            self.branches
                .iter()
                .position(|b| x > b.a && x <= b.b)
                .expect("x > 0 lies in the closure of some interval")
        };
        let lb = &self.branches[left];
        let rb = &self.branches[right];
        let xl = if x == 0.0 { lb.b } else { x };
        Ok((lb.ln_d1(xl), rb.ln_d1(x)))
    }
}

/// Log-derivative jump at a partition endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BreakData {
    pub point: f64,
    pub amplitude: f64,
}

/// `ln Df(x⁻) − ln Df(x⁺)` at a left endpoint `∂I_α`; at `0` the left limit
/// is taken at `1⁻`, as on the circle.
pub fn break_amplitude(f: &Giem, point: f64) -> Result<BreakData> {
    if !f.branches.iter().any(|b| b.a == point) {
        return Err(Error::NotABreakPoint(point));
    }
    let (l, r) = f.one_sided_log_derivatives(point)?;
    Ok(BreakData { point, amplitude: l - r })
}

/// Break data at every left endpoint, in domain order.
pub fn break_points(f: &Giem) -> Vec<BreakData> {
    f.pair
        .row(MoveType::Zero)
        .iter()
        .map(|&a| break_amplitude(f, f.branches[a].a).expect("endpoint"))
        .collect()
}

/// `ω_α = Σ_{π₁(β)<π₁(α)} λ_β − Σ_{π₀(β)<π₀(α)} λ_β`.
pub fn translation_vector(pair: &Pair, lengths: &[f64]) -> Vec<f64> {
    let d = pair.d();
    (0..d)
        .map(|a| {
            let below: f64 = (0..d).filter(|&b| pair.pi1(b) < pair.pi1(a)).map(|b| lengths[b]).sum();
            let before: f64 = (0..d).filter(|&b| pair.pi0(b) < pair.pi0(a)).map(|b| lengths[b]).sum();
            below - before
        })
        .collect()
}

/// `Ω_π λ` in floating point.
pub fn omega_apply(pair: &Pair, v: &[f64]) -> Vec<f64> {
    let o = omega_matrix(pair);
    (0..pair.d())
        .map(|i| (0..pair.d()).map(|j| big_to_f64(&o[(i, j)]) * v[j]).sum())
        .collect()
}

pub fn make_standard_iem(pair: &Pair, lengths: &[f64]) -> Result<Giem> {
    let shapes = vec![Shape::Linear; pair.d()];
    Giem::new(pair.clone(), lengths, lengths, &shapes)
}

/// Affine i.e.m. with slopes `exp(ω⁰_α)`.
pub fn make_affine_iem(pair: &Pair, lengths: &[f64], log_slopes: &[f64]) -> Result<Giem> {
    if log_slopes.len() != pair.d() {
        return Err(Error::Dimension(format!("expected {} slopes", pair.d())));
    }
    let images: Vec<f64> = lengths.iter().zip(log_slopes).map(|(l, w)| l * w.exp()).collect();
    let shapes = vec![Shape::Linear; pair.d()];
    Giem::new(pair.clone(), lengths, &images, &shapes)
}

/// `Σ_α ∫_{I_α} f''/f'` from the closed forms.
pub fn mean_nonlinearity(f: &Giem) -> f64 {
    f.branches.iter().map(|b| b.shape.total_nonlinearity()).sum()
}

/// [`mean_nonlinearity`] by adaptive quadrature, split at the kinks.
pub fn mean_nonlinearity_quadrature(f: &Giem, tol: f64) -> Result<f64> {
    let per = tol / f.d() as f64;
    f.branches
        .iter()
        .map(|b| {
            let kinks: Vec<f64> = b.kink().into_iter().collect();
            integrate_with_breaks(|x| b.d2(x) / b.d1(x), b.a, b.b, &kinks, per)
        })
        .sum()
}

/// Endpoint collision found by [`keane_check`]: `f^m(∂I_α) = ∂I_β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Connection {
    pub m: usize,
    pub alpha: Letter,
    pub beta: Letter,
}

/// Distance below which an orbit point counts as hitting an endpoint.
pub const KEANE_TOL: f64 = 1e-12;

/// Iterates all left endpoints `depth` times; `None` means no connection was
/// seen. Hits on `∂I_β` with `π₀(β) = 1` are exempt.
pub fn keane_check(f: &Giem, depth: usize) -> Option<Connection> {
    let d = f.d();
    let targets: Vec<(Letter, f64)> = (0..d)
        .filter(|&b| f.pair.pi0(b) != 1)
        .map(|b| (b, f.branches[b].a))
        .collect();
    let mut orbit: Vec<f64> = f.endpoints();
    for m in 1..=depth {
        for alpha in 0..d {
            let x = orbit[alpha].clamp(0.0, 1.0 - f64::EPSILON);
            let y = f.eval(x).expect("orbit stays in [0, 1)");
            orbit[alpha] = y;
            if let Some(&(beta, _)) = targets.iter().find(|(_, e)| (y - e).abs() < KEANE_TOL) {
                return Some(Connection { m, alpha, beta });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    fn golden_lengths() -> Vec<f64> {
        vec![2.0 - phi(), phi() - 1.0]
    }

    fn p321() -> Pair {
        Pair::from_monodromy(&[3, 2, 1]).unwrap()
    }

    #[test]
    fn translation_vector_examples() {
        let w = translation_vector(&Pair::rotation(), &golden_lengths());
        assert!((w[0] - (phi() - 1.0)).abs() < 1e-15);
        assert!((w[1] + (2.0 - phi())).abs() < 1e-15);
        let lam = [0.2, 0.3, 0.5];
        let w = translation_vector(&p321(), &lam);
        for (x, y) in w.iter().zip([0.8, 0.3, -0.5]) {
            assert!((x - y).abs() < 1e-15);
        }
        let o = omega_apply(&p321(), &lam);
        assert!(w.iter().zip(&o).all(|(x, y)| (x - y).abs() < 1e-14));
    }

    #[test]
    fn standard_iem_examples() {
        let f = make_standard_iem(&Pair::rotation(), &golden_lengths()).unwrap();
        assert!((f.eval(0.0f64).unwrap() - (phi() - 1.0)).abs() < 1e-15);
        let g = make_standard_iem(&p321(), &[0.2, 0.3, 0.5]).unwrap();
        for (x, y) in [(0.0, 0.8), (0.2, 0.5), (0.5, 0.0)] {
            assert!((g.eval(x).unwrap() - y).abs() < 1e-15);
        }
        assert_eq!(
            make_standard_iem(&Pair::rotation(), &[0.5, 0.6]),
            Err(Error::Normalization(1.1))
        );
        assert_eq!(mean_nonlinearity(&g), 0.0);
    }

    #[test]
    fn affine_iem_examples() {
        let lam = golden_lengths();
        let f = make_affine_iem(&Pair::rotation(), &lam, &[0.0, 0.0]).unwrap();
        assert_eq!(f, make_standard_iem(&Pair::rotation(), &lam).unwrap());
        let t = 0.1f64;
        let s = ((1.0 - lam[0] * t.exp()) / lam[1]).ln();
        let g = make_affine_iem(&Pair::rotation(), &lam, &[t, s]).unwrap();
        let b = break_amplitude(&g, lam[0]).unwrap();
        assert!((b.amplitude - (t - s)).abs() < 1e-14);
        assert!(matches!(
            make_affine_iem(&Pair::rotation(), &lam, &[t, s + 0.1]),
            Err(Error::IncompatibleSlopes(_))
        ));
    }

    #[test]
    fn single_moebius_branch_nonlinearity() {
        // a one-letter map is not an i.e.m.; the branch itself carries the claim
        let m = 1.3f64;
        let b = Branch::new(0.0, 1.0, 0.0, 1.0, Shape::moebius(m).unwrap()).unwrap();
        assert!((b.nonlinearity(0.0, 1.0) + 2.0 * m.ln()).abs() < 1e-15);
    }

    #[test]
    fn quadrature_agrees_with_closed_form() {
        let shapes = [Shape::moebius(1.4).unwrap(), Shape::power_kink(0.4, 0.6, 0.7).unwrap()];
        let f = Giem::new(Pair::rotation(), &[0.3, 0.7], &[0.45, 0.55], &shapes).unwrap();
        let q = mean_nonlinearity_quadrature(&f, 1e-10).unwrap();
        assert!((q - mean_nonlinearity(&f)).abs() < 1e-9);
    }

    #[test]
    fn break_examples() {
        let f = make_standard_iem(&p321(), &[0.2, 0.3, 0.5]).unwrap();
        for b in break_points(&f) {
            assert!(b.amplitude.abs() < 1e-15);
        }
        assert_eq!(break_amplitude(&f, 0.1), Err(Error::NotABreakPoint(0.1)));
        let shapes = [Shape::Linear, Shape::power_kink(0.5, 0.5, 0.0).unwrap()];
        let g = Giem::new(Pair::rotation(), &[0.5, 0.5], &[0.5, 0.5], &shapes).unwrap();
        assert!(break_points(&g).iter().all(|b| b.amplitude.abs() < 1e-15));
    }

    #[test]
    fn zero_mean_breaks_cancel() {
        let m = 1.3f64;
        let shapes = [Shape::moebius(m).unwrap(), Shape::moebius(1.0 / m).unwrap()];
        let f = Giem::new(Pair::rotation(), &[0.4, 0.6], &[0.55, 0.45], &shapes).unwrap();
        assert!(mean_nonlinearity(&f).abs() < 1e-15);
        let b = break_points(&f);
        assert!((b[0].amplitude + b[1].amplitude).abs() < 1e-14);
    }

    #[test]
    fn keane_examples() {
        let f = make_standard_iem(&Pair::rotation(), &golden_lengths()).unwrap();
        assert_eq!(keane_check(&f, 10_000), None);
        let r = make_standard_iem(&Pair::rotation(), &[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        // 0 ↦ 1/3 ↦ 2/3 = ∂I_B
        assert_eq!(keane_check(&r, 10), Some(Connection { m: 2, alpha: 0, beta: 1 }));
    }
}
