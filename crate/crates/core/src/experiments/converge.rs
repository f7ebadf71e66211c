//! `converge`: per-level distances, residuals and their trend statistics.

use std::path::Path;

use serde::Serialize;

use super::config::{Compare, ExperimentConfig};
use super::output::{write_json, Table};
use crate::analysis::{
    affine_model, c1_distance, c1_grid_check, l1_second_derivative_distance, l_vector, level_distance, m_n_coefficient,
    moebius_f, pseudo_orbit_residual, slope_vector, zoom, GridCheck, Trend,
};
use crate::cocycle::theta_matrix;
use crate::error::{Error, Result};
use crate::induction::{fmt17, renormalize_precision, InductionState};
use crate::maps::Giem;
use crate::scalar::Precision;

/// Fine grid used for the grid-convergence check.
pub const FINE_GRID: usize = 8193;
/// Levels whose residuals `ε_n` are recorded.
pub const RESIDUAL_DEPTH: usize = 20;
/// Required drop of the last value against the early maximum.
pub const DROP_RATIO: f64 = 0.2;

#[derive(Debug, Clone, Serialize)]
pub struct Series {
    pub name: String,
    pub levels: Vec<usize>,
    pub values: Vec<f64>,
    pub trend: Trend,
    /// `a_N / max(a_1, a_2, a_3)`.
    pub drop: f64,
}

impl Series {
    pub fn new(name: &str, levels: Vec<usize>, values: Vec<f64>) -> Self {
        let trend = Trend::of(&levels, &values);
        let early = values.iter().take(3).copied().fold(0.0, f64::max);
        let drop = values.last().copied().unwrap_or(0.0) / early.max(f64::MIN_POSITIVE);
        Series { name: name.into(), levels, values, trend, drop }
    }

    pub fn drops(&self) -> bool {
        self.drop < DROP_RATIO
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergeReport {
    pub compare: Compare,
    pub depth: usize,
    pub grid: usize,
    pub series: Vec<Series>,
    pub grid_check: Option<GridCheck>,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub rows: Table,
}

impl ConvergeReport {
    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn check(&mut self, name: &str, pass: bool) {
        self.checks.push(Check { name: name.into(), pass });
    }
}

fn states(f: &Giem, depth: usize, precision: Precision) -> Result<Vec<InductionState>> {
    renormalize_precision(f, depth, precision).into_result()
}

fn row(t: &mut Table, n: usize, alpha: &str, quantity: &str, value: String) {
    t.push(vec![n.to_string(), alpha.into(), quantity.into(), value]);
}

/// `‖ε_n‖` for `n < len(states) − 1`, with `L` and `ε` rows.
fn residual_series(f: &Giem, st: &[InductionState], label: &str, rows: &mut Table) -> Result<Vec<f64>> {
    let ls = st.iter().map(|s| l_vector(f, s)).collect::<Result<Vec<_>>>()?;
    let steps = st.last().expect("level 0").history.steps().to_vec();
    let mut out = Vec::new();
    for n in 0..st.len() - 1 {
        let th = theta_matrix(&st[n].pair, steps[n].eps).matrix;
        let (eps, norm) = pseudo_orbit_residual(&ls[n].values, &ls[n + 1].values, &th)?;
        for (a, (l, e)) in ls[n].values.iter().zip(&eps).enumerate() {
            let sym = st[n].pair.symbol(a);
            row(rows, n, sym, &format!("L{label}"), fmt17(*l));
            row(rows, n, sym, &format!("residual{label}"), fmt17(*e));
        }
        out.push(norm);
    }
    Ok(out)
}

fn levels(depth: usize) -> Vec<usize> {
    (1..=depth).collect()
}

fn converge_moebius(cfg: &ExperimentConfig, rep: &mut ConvergeReport) -> Result<()> {
    let f = cfg.map()?;
    let st = states(&f, cfg.depth.max(RESIDUAL_DEPTH + 1), cfg.precision)?;
    let (mut c1, mut l1) = (Vec::new(), Vec::new());
    let mut last_pair = None;
    for n in 1..=cfg.depth {
        let (mut c, mut l) = (0.0f64, 0.0f64);
        for a in 0..f.d() {
            let sym = st[n].pair.symbol(a).to_string();
            let z = zoom(&f, &st[n], a, cfg.grid)?;
            let m = m_n_coefficient(&f, &st[n], a);
            let fm = moebius_f(m, cfg.grid)?;
            let dc = c1_distance(&z, &fm)?;
            let dl = l1_second_derivative_distance(&z, &fm)?;
            row(&mut rep.rows, n, &sym, "m", fmt17(m));
            row(&mut rep.rows, n, &sym, "c1", fmt17(dc));
            row(&mut rep.rows, n, &sym, "l1_second", fmt17(dl));
            c = c.max(dc);
            l = l.max(dl);
            if n == cfg.depth && a == 0 {
                last_pair = Some((z, fm));
            }
        }
        c1.push(c);
        l1.push(l);
    }
    if let Some((z, fm)) = last_pair {
        rep.grid_check = Some(c1_grid_check(&z, &fm, FINE_GRID)?);
    }
    let eps = residual_series(&f, &st[..=RESIDUAL_DEPTH + 1], "", &mut rep.rows)?;
    let c1 = Series::new("c1", levels(cfg.depth), c1);
    let l1 = Series::new("l1_second", levels(cfg.depth), l1);
    rep.check("c1 slope < 0", c1.trend.decays());
    rep.check("c1 final drop", c1.drops());
    rep.check("l1_second slope < 0", l1.trend.decays());
    rep.check("l1_second final drop", l1.drops());
    rep.series.extend([c1, l1, Series::new("residual", (0..eps.len()).collect(), eps)]);
    Ok(())
}

/// Depth used to build the affine model; deeper than the compared levels so
/// the slope vector settles.
pub fn model_depth(depth: usize) -> usize {
    (2 * depth).clamp(30, 40)
}

fn converge_affine(cfg: &ExperimentConfig, rep: &mut ConvergeReport) -> Result<()> {
    let f = cfg.map()?;
    let deep = model_depth(cfg.depth);
    let st = states(&f, deep, cfg.precision)?;
    let path = st.last().expect("level 0").history.clone();
    let sv = slope_vector(&f, &st, deep - 5)?;
    if !sv.converged {
        rep.notes.push("slope vector did not settle; model built from the last iterate".into());
    }
    let model = affine_model(&path, &sv.omega, deep)?;
    rep.notes.push(format!("model slopes {:?}, {} of {} steps matched", model.log_slopes, model.matched, deep));
    let sa = states(&model.map, cfg.depth, cfg.precision)?;
    let (mut c1, mut zeta, mut l1) = (Vec::new(), Vec::new(), Vec::new());
    for n in 1..=cfg.depth {
        let d = level_distance(&f, &st[n], &model.map, &sa[n], cfg.grid)?;
        row(&mut rep.rows, n, "", "c1", fmt17(d.c1()));
        row(&mut rep.rows, n, "", "zoomed_c1", fmt17(d.zoomed_c1));
        row(&mut rep.rows, n, "", "partition_gap", fmt17(d.partition_gap));
        row(&mut rep.rows, n, "", "image_gap", fmt17(d.image_gap));
        row(&mut rep.rows, n, "", "l1_second", fmt17(d.l1_second));
        c1.push(d.c1());
        zeta.push(d.partition_gap);
        l1.push(d.l1_second);
    }
    let c1 = Series::new("c1", levels(cfg.depth), c1);
    let zeta = Series::new("partition_gap", levels(cfg.depth), zeta);
    rep.check("c1 slope < 0", c1.trend.decays());
    rep.check("partition_gap slope < 0", zeta.trend.decays());
    rep.check("partition_gap squares bounded", zeta.trend.l2.bounded());
    rep.series.extend([c1, zeta, Series::new("l1_second", levels(cfg.depth), l1)]);
    Ok(())
}

fn converge_pair(cfg: &ExperimentConfig, rep: &mut ConvergeReport) -> Result<()> {
    let f = cfg.map()?;
    let g = cfg.other_map()?;
    let deep = cfg.depth.max(RESIDUAL_DEPTH + 1);
    let sf = states(&f, deep, cfg.precision)?;
    let sg = states(&g, deep, cfg.precision)?;
    if sf.last().map(|s| s.history.moves()) != sg.last().map(|s| s.history.moves()) {
        return Err(Error::InvalidArgument("the two maps follow different renormalization paths".into()));
    }
    let (mut c1, mut l1) = (Vec::new(), Vec::new());
    for n in 1..=cfg.depth {
        let d = level_distance(&f, &sf[n], &g, &sg[n], cfg.grid)?;
        row(&mut rep.rows, n, "", "c1", fmt17(d.c1()));
        row(&mut rep.rows, n, "", "zoomed_c1", fmt17(d.zoomed_c1));
        row(&mut rep.rows, n, "", "partition_gap", fmt17(d.partition_gap));
        row(&mut rep.rows, n, "", "l1_second", fmt17(d.l1_second));
        c1.push(d.c1());
        l1.push(d.l1_second);
    }
    let c1 = Series::new("c1", levels(cfg.depth), c1);
    let l1 = Series::new("l1_second", levels(cfg.depth), l1);
    rep.check("c1 slope < 0", c1.trend.decays());
    rep.check("c1 squares bounded", c1.trend.l2.bounded());
    rep.series.extend([c1, l1]);
    for (label, map, st) in [("_f", &f, &sf), ("_g", &g, &sg)] {
        let eps = residual_series(map, &st[..=RESIDUAL_DEPTH + 1], label, &mut rep.rows)?;
        let s = Series::new(&format!("residual{label}"), (0..eps.len()).collect(), eps);
        rep.check(&format!("residual{label} squares bounded"), s.trend.l2.bounded());
        rep.series.push(s);
    }
    Ok(())
}

/// Runs the comparison without writing anything.
pub fn converge_report(cfg: &ExperimentConfig) -> Result<ConvergeReport> {
    if cfg.depth < 3 {
        return Err(Error::InvalidArgument("converge needs depth ≥ 3 for a trend".into()));
    }
    let mut rep = ConvergeReport {
        compare: cfg.compare,
        depth: cfg.depth,
        grid: cfg.grid,
        series: Vec::new(),
        grid_check: None,
        notes: Vec::new(),
        checks: Vec::new(),
        rows: Table::new(&["n", "alpha", "quantity", "value"]),
    };
    match cfg.compare {
        Compare::Moebius => converge_moebius(cfg, &mut rep)?,
        Compare::AffineModel => converge_affine(cfg, &mut rep)?,
        Compare::Pair => converge_pair(cfg, &mut rep)?,
    }
    Ok(rep)
}

/// Writes `converge.csv` and `converge.json`.
pub fn cmd_converge(cfg: &ExperimentConfig, out: &Path) -> Result<ConvergeReport> {
    let rep = converge_report(cfg)?;
    rep.rows.write(out, "converge.csv")?;
    write_json(out, "converge.json", &rep)?;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::MapSource;

    #[test]
    fn affine_map_against_its_model() {
        let cfg = ExperimentConfig {
            map: Some(MapSource::Preset { preset: "golden-standard".into() }),
            compare: Compare::AffineModel,
            depth: 8,
            grid: 1025,
            ..ExperimentConfig::default()
        };
        let rep = converge_report(&cfg).unwrap();
        let c1 = rep.series("c1").unwrap();
        assert!(c1.values.iter().all(|&v| v < 1e-9), "{:?}", c1.values);
    }

    #[test]
    fn standard_map_residuals_vanish() {
        let cfg = ExperimentConfig {
            map: Some(MapSource::Preset { preset: "golden-standard".into() }),
            depth: 5,
            grid: 1025,
            ..ExperimentConfig::default()
        };
        let rep = converge_report(&cfg).unwrap();
        assert!(rep.series("residual").unwrap().values.iter().all(|&v| v < 1e-9));
        assert!(rep.series("c1").unwrap().values.iter().all(|&v| v < 1e-9));
    }
}
