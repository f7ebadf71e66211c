//! `renormalize` and `cocycle`.

use std::path::Path;

use num_bigint::BigInt;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::output::{write_json, Table};
use crate::analysis::central_ladder;
use crate::cocycle::{
    canonical_unstable_vector, central_space_limit, check_theta_omega, growth_estimate, matrix_strings,
    quasi_isometry_ratio, stable_subspace_approx, theta_matrix, CocyclePath, Growth, GrowthDirection, StableApprox,
};
use crate::combinatorics::{rauzy_class, MoveType, Pair, RauzyPath};
use crate::error::{Error, Result};
use crate::induction::{fmt17, renormalize_precision, InductionState, StateExport};
use crate::tuning::parse_pattern;

/// Words longer than this are exported as `null`.
pub const WORDS_CAP: u64 = 4096;

#[derive(Debug, Clone, Serialize)]
pub struct RenormalizeReport {
    pub levels: usize,
    pub requested: usize,
    pub stopped: Option<String>,
}

fn lengths_table(states: &[InductionState]) -> Table {
    let mut t = Table::new(&["n", "alpha", "quantity", "value"]);
    for s in states {
        for a in 0..s.d() {
            let sym = s.pair.symbol(a).to_string();
            for (q, v) in [
                ("start", fmt17(s.start[a])),
                ("length", fmt17(s.len[a])),
                ("image_start", fmt17(s.image_start[a])),
                ("return_time", s.q[a].to_string()),
            ] {
                t.push(vec![s.level.to_string(), sym.clone(), q.into(), v]);
            }
        }
        t.push(vec![s.level.to_string(), String::new(), "domain_length".into(), fmt17(s.domain_len)]);
    }
    t
}

fn types_table(states: &[InductionState]) -> Table {
    let mut t = Table::new(&["n", "type", "winner", "loser"]);
    if let Some(last) = states.last() {
        for (n, s) in last.history.steps().iter().enumerate() {
            t.push(vec![
                n.to_string(),
                s.eps.index().to_string(),
                s.pair.symbol(s.winner).to_string(),
                s.pair.symbol(s.loser).to_string(),
            ]);
        }
    }
    t
}

/// Dumps levels `0..=depth`. On a connection the levels reached are still
/// written before the error is returned.
pub fn cmd_renormalize(cfg: &ExperimentConfig, out: &Path) -> Result<RenormalizeReport> {
    let f = cfg.map()?;
    let r = renormalize_precision(&f, cfg.depth, cfg.precision);
    let exports: Vec<StateExport> = r.states.iter().map(|s| s.export(WORDS_CAP)).collect();
    write_json(out, "states.json", &exports)?;
    lengths_table(&r.states).write(out, "lengths.csv")?;
    types_table(&r.states).write(out, "types.csv")?;
    match r.stopped {
        Some(e) => Err(e),
        None => Ok(RenormalizeReport { levels: r.states.len(), requested: cfg.depth, stopped: None }),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Identities {
    /// `det Θ = 1` and `Θ Ω Θᵀ = Ω′` at every step of the path.
    pub path_steps: bool,
    /// The same on every edge of the start pair's Rauzy class.
    pub class_edges: bool,
    pub class_edge_count: usize,
    /// `q⁽ⁿ⁾ = Θ_{0,n−1}(1, …, 1)ᵀ`; absent without a map.
    pub return_times: Option<bool>,
}

impl Identities {
    pub fn all(&self) -> bool {
        self.path_steps && self.class_edges && self.return_times != Some(false)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralReport {
    pub dim: usize,
    pub ladder: Vec<usize>,
    pub increments: Vec<f64>,
    pub accepted: bool,
    /// Exact vectors `k + Ψk` as rational strings.
    pub basis: Vec<Vec<String>>,
    pub quasi_isometry_ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CocycleReport {
    pub pair: Pair,
    pub moves: Vec<u8>,
    pub products: Vec<Vec<Vec<String>>>,
    pub identities: Identities,
    pub forward_growth: std::result::Result<Growth, String>,
    pub backward_growth: std::result::Result<Growth, String>,
    pub stable: std::result::Result<StableApprox, String>,
    pub central: std::result::Result<CentralReport, String>,
}

/// Path from the config: the renormalization path of `map`, or `moves`
/// repeated to `depth` from `pair`.
pub fn config_path(cfg: &ExperimentConfig) -> Result<(RauzyPath, Vec<InductionState>)> {
    if cfg.map.is_some() {
        let f = cfg.map()?;
        let states = renormalize_precision(&f, cfg.depth, cfg.precision).into_result()?;
        let path = states.last().expect("level 0").history.clone();
        return Ok((path, states));
    }
    let pair = cfg.pair.clone().unwrap_or_else(Pair::rotation);
    let pattern = parse_pattern(cfg.moves.as_deref().unwrap_or("golden"))?;
    let moves: Vec<MoveType> = pattern.into_iter().cycle().take(cfg.depth).collect();
    Ok((RauzyPath::from_moves(pair, &moves), Vec::new()))
}

pub fn class_identities(pair: &Pair) -> Result<(bool, usize)> {
    let class = rauzy_class(pair)?;
    let ok = class.edges.iter().all(|&(v, eps, _)| {
        let p = &class.vertices[v];
        theta_matrix(p, eps).matrix.det() == BigInt::from(1) && check_theta_omega(p, eps)
    });
    Ok((ok, class.edges.len()))
}

pub fn return_time_identity(cocycle: &CocyclePath, states: &[InductionState]) -> bool {
    states.iter().all(|s| {
        let q: Vec<BigInt> = s.q.iter().map(|x| BigInt::from(x.clone())).collect();
        q == cocycle.return_times(s.level)
    })
}

fn central_report(path: &RauzyPath, cocycle: &CocyclePath) -> Result<CentralReport> {
    let d = cocycle.d();
    if d == cocycle.omega(0).rank() {
        return Ok(CentralReport {
            dim: 0,
            ladder: Vec::new(),
            increments: Vec::new(),
            accepted: true,
            basis: Vec::new(),
            quasi_isometry_ratio: None,
        });
    }
    let limit = central_space_limit(path, &central_ladder(path))?;
    let vectors = limit.graph_vectors(path.start());
    let qi = vectors.first().map(|v| quasi_isometry_ratio(cocycle, v, cocycle.len()));
    Ok(CentralReport {
        dim: limit.last().basis.dim(),
        ladder: limit.ladder.clone(),
        increments: limit.increments.clone(),
        accepted: limit.accepted,
        basis: vectors.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect(),
        quasi_isometry_ratio: qi,
    })
}

/// Exact products, identity checks, growth and subspace estimates along a path.
pub fn cocycle_report(path: &RauzyPath, states: &[InductionState]) -> Result<CocycleReport> {
    let cocycle = CocyclePath::new(path);
    let (class_ok, edges) = class_identities(path.start())?;
    let identities = Identities {
        path_steps: cocycle.identities_hold(),
        class_edges: class_ok,
        class_edge_count: edges,
        return_times: (!states.is_empty()).then(|| return_time_identity(&cocycle, states)),
    };
    let d = cocycle.d();
    let u0 = canonical_unstable_vector(path.start());
    let s_end = cocycle.omega(cocycle.len()).mul_vec_f64(&vec![1.0; d]);
    let text = |e: Error| e.to_string();
    Ok(CocycleReport {
        pair: path.start().clone(),
        moves: path.moves().iter().map(|m| m.index() as u8).collect(),
        products: (0..=cocycle.len()).map(|n| matrix_strings(cocycle.product(n))).collect(),
        forward_growth: growth_estimate(&cocycle, &u0, GrowthDirection::ForwardUnstable).map_err(text),
        backward_growth: growth_estimate(&cocycle, &s_end, GrowthDirection::BackwardStable).map_err(text),
        stable: stable_subspace_approx(&cocycle, 20.min(cocycle.len())).map_err(text),
        central: central_report(path, &cocycle).map_err(text),
        identities,
    })
}

fn growth_table(r: &CocycleReport) -> Table {
    let mut t = Table::new(&["n", "alpha", "quantity", "value"]);
    for (name, g) in [("forward_norm", &r.forward_growth), ("backward_norm", &r.backward_growth)] {
        if let Ok(g) = g {
            for (n, v) in g.norms.iter().enumerate() {
                t.push(vec![n.to_string(), String::new(), name.into(), fmt17(*v)]);
            }
        }
    }
    t
}

/// Writes `theta_products.json` and `growth.csv`; a failed identity is
/// reported as [`Error::IdentityViolation`] after the files are written.
pub fn cmd_cocycle(cfg: &ExperimentConfig, out: &Path) -> Result<CocycleReport> {
    let (path, states) = config_path(cfg)?;
    let report = cocycle_report(&path, &states)?;
    write_json(out, "theta_products.json", &report)?;
    growth_table(&report).write(out, "growth.csv")?;
    if !report.identities.all() {
        return Err(Error::IdentityViolation(format!("{:?}", report.identities)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::MapSource;

    fn golden_cfg(depth: usize) -> ExperimentConfig {
        ExperimentConfig {
            map: Some(MapSource::Preset { preset: "golden-standard".into() }),
            depth,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn golden_types_alternate() {
        let dir = tempfile::tempdir().unwrap();
        let rep = cmd_renormalize(&golden_cfg(10), dir.path()).unwrap();
        assert_eq!(rep.levels, 11);
        let types = std::fs::read_to_string(dir.path().join("types.csv")).unwrap();
        let col: Vec<&str> = types.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
        assert_eq!(col, ["0", "1", "0", "1", "0", "1", "0", "1", "0", "1"]);
    }

    #[test]
    fn rational_rotation_hits_a_connection() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig {
            map: Some(MapSource::Preset { preset: "rational-rotation".into() }),
            depth: 10,
            ..ExperimentConfig::default()
        };
        let err = cmd_renormalize(&cfg, dir.path()).unwrap_err();
        assert!(matches!(err, Error::Connection { .. }), "{err}");
        assert!(dir.path().join("states.json").exists());
    }

    #[test]
    fn golden_cocycle() {
        let dir = tempfile::tempdir().unwrap();
        let rep = cmd_cocycle(&golden_cfg(20), dir.path()).unwrap();
        assert_eq!(rep.identities.return_times, Some(true));
        let mu = rep.forward_growth.as_ref().unwrap().rate;
        assert!((mu - 1.618).abs() < 0.07, "{mu}");
        assert_eq!(rep.central.as_ref().unwrap().dim, 0);
    }

    #[test]
    fn three_interval_class_edges() {
        let (ok, edges) = class_identities(&Pair::from_monodromy(&[3, 2, 1]).unwrap()).unwrap();
        assert!(ok);
        assert_eq!(edges, 6);
    }
}
