//! `selftest`: exact identities, the smoothing-sequence battery and the
//! first-return oracle on seeded random maps.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::commands::{class_identities, return_time_identity};
use super::desk::golden_standard;
use super::random::random_genus_one_map;
use crate::analysis::l2_smoothing_sequences;
use crate::cocycle::CocyclePath;
use crate::combinatorics::Pair;
use crate::error::Result;
use crate::induction::{brute_force_first_return, renormalize, InductionState};

pub const BATTERY_SIZE: usize = 1000;
pub const BATTERY_MAX_LEN: usize = 512;
pub const BATTERY_LAMBDAS: [f64; 3] = [0.3, 0.5, 0.9];
pub const ORACLE_MAPS: usize = 20;
pub const ORACLE_LEVEL: usize = 8;
pub const ORACLE_POINTS: usize = 100;
pub const ORACLE_TOL: f64 = 1e-9;
pub const Q_DEPTH: usize = 25;

#[derive(Debug, Clone, Serialize)]
pub struct SelfCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<SelfCheck>,
}

impl SelftestReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&SelfCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per check and a final summary.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(s, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let _ = writeln!(s, "selftest seed {}: {passed}/{} checks passed", self.seed, self.checks.len());
        s
    }
}

fn class_check(monodromy: &[usize]) -> Result<SelfCheck> {
    let pair = Pair::from_monodromy(monodromy)?;
    let (ok, edges) = class_identities(&pair)?;
    Ok(SelfCheck {
        name: format!("theta-omega identity, class of {monodromy:?}"),
        pass: ok,
        detail: format!("{edges} edges"),
    })
}

fn q_check(name: &str, f: &crate::maps::Giem) -> SelfCheck {
    let r = renormalize(f, Q_DEPTH);
    let levels = r.states.len() - 1;
    let cocycle = CocyclePath::new(r.path());
    let ok = return_time_identity(&cocycle, &r.states);
    SelfCheck {
        name: format!("return-time identity, {name}"),
        pass: ok && levels == Q_DEPTH,
        detail: format!("{levels} levels"),
    }
}

/// Random positive prefix with a decaying envelope.
fn random_prefix(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let len = rng.gen_range(1..=BATTERY_MAX_LEN);
    let decay: f64 = rng.gen_range(0.5..1.5);
    (1..=len).map(|j| rng.gen_range(1e-6..1.0) * (j as f64).powf(-decay)).collect()
}

/// Σx², Σz² against `(1−λ)⁻² Σr²`, and `y ≤ x`. The sequences are carried
/// past the prefix until `λ^k` falls below `1e-18`.
pub fn smoothing_battery(seed: u64) -> Result<SelfCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for i in 0..BATTERY_SIZE {
        let lambda = BATTERY_LAMBDAS[i % BATTERY_LAMBDAS.len()];
        let r = random_prefix(&mut rng);
        let tail = (18.0 * std::f64::consts::LN_10 / -lambda.ln()).ceil() as usize;
        let s = l2_smoothing_sequences(&r, lambda, r.len() + tail)?;
        if !s.holds() {
            violations += 1;
        }
        worst = worst.max(s.sum_x2.max(s.sum_z2) / s.bound);
    }
    Ok(SelfCheck {
        name: "smoothing-sequence battery".into(),
        pass: violations == 0,
        detail: format!("{BATTERY_SIZE} prefixes, {violations} violations, max ratio {worst:.6}"),
    })
}

/// Outcome of comparing `Rⁿf` with iterated `f` on one map.
#[derive(Debug, Clone, Serialize)]
pub struct OracleOutcome {
    pub d: usize,
    pub level: usize,
    pub points: usize,
    pub max_error: f64,
    pub time_mismatches: usize,
}

pub fn oracle_on_state(f: &crate::maps::Giem, state: &InductionState, points: usize, rng: &mut ChaCha8Rng) -> Result<OracleOutcome> {
    let mut max_error: f64 = 0.0;
    let mut time_mismatches = 0;
    for _ in 0..points {
        let a = rng.gen_range(0..state.d());
        let u: f64 = rng.gen_range(1e-6..1.0 - 1e-6);
        let x = state.start[a] + u * state.len[a];
        let y = state.eval_return_map(f, a, x, 0)?;
        let cap = state.q[a].to_string().parse::<u64>().unwrap_or(u64::MAX).saturating_mul(2).max(16);
        let (z, k) = brute_force_first_return(f, state.domain_len, x, cap)?;
        max_error = max_error.max((y - z).abs());
        if state.q[a] != k.into() {
            time_mismatches += 1;
        }
    }
    Ok(OracleOutcome { d: state.d(), level: state.level, points, max_error, time_mismatches })
}

pub fn oracle_check(seed: u64) -> Result<SelfCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6f72_6163_6c65);
    let mut worst: f64 = 0.0;
    let mut mismatches = 0;
    let mut failures = Vec::new();
    for i in 0..ORACLE_MAPS {
        let d = 2 + i % 3;
        let f = random_genus_one_map(d, seed.wrapping_add(i as u64))?;
        let r = renormalize(&f, ORACLE_LEVEL);
        let state = r.last();
        let o = oracle_on_state(&f, state, ORACLE_POINTS, &mut rng)?;
        worst = worst.max(o.max_error);
        mismatches += o.time_mismatches;
        if o.level < ORACLE_LEVEL || o.max_error > ORACLE_TOL || o.time_mismatches > 0 {
            failures.push(i);
        }
    }
    Ok(SelfCheck {
        name: "first-return oracle".into(),
        pass: failures.is_empty(),
        detail: format!(
            "{ORACLE_MAPS} maps at level {ORACLE_LEVEL}, max error {worst:.3e}, {mismatches} return-time mismatches, failing maps {failures:?}"
        ),
    })
}

pub fn run_selftest(seed: u64) -> Result<SelftestReport> {
    let mut checks = vec![class_check(&[2, 1])?, class_check(&[3, 2, 1])?, class_check(&[4, 3, 2, 1])?];
    checks.push(q_check("golden rotation", &golden_standard()?));
    checks.push(q_check("seeded three-interval map", &random_genus_one_map(3, seed)?));
    checks.push(smoothing_battery(seed)?);
    checks.push(oracle_check(seed)?);
    Ok(SelftestReport { seed, checks })
}
