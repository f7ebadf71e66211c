//! Acceptance criteria, one PASS/FAIL line each.
//!
//! The process fails if any criterion fails, except those listed in
//! `KNOWN_DEGENERATE`, which are still reported as FAIL.

use std::time::{Duration, Instant};

use rauzy_lab::analysis::{central_ladder, l_vector, pseudo_orbit_residual};
use rauzy_lab::cocycle::{
    canonical_unstable_vector, central_space_limit, growth_estimate, periodic_central_space, quasi_isometry_ratio,
    theta_matrix, CocyclePath, GrowthDirection,
};
use rauzy_lab::combinatorics::{MoveType, Pair, RauzyPath};
use rauzy_lab::experiments::commands::{class_identities, return_time_identity};
use rauzy_lab::experiments::config::{Compare, ExperimentConfig, MapSource};
use rauzy_lab::experiments::converge::converge_report;
use rauzy_lab::experiments::desk::{golden_standard, GOLDEN_M};
use rauzy_lab::experiments::random::random_genus_one_map;
use rauzy_lab::experiments::selftest::{oracle_check, smoothing_battery};
use clap::Parser;
use rauzy_lab::experiments::cli;
use rauzy_lab::induction::renormalize;
use rauzy_lab::maps::{make_affine_iem, Giem};
use rauzy_lab::Result;

const SEED: u64 = 20240611;
const KNOWN_DEGENERATE: [u32; 1] = [6];

type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
    limit: Option<Duration>,
}

fn outcome(pass: bool, detail: String, limit_secs: Option<u64>) -> Result<Outcome> {
    Ok(Outcome { pass, detail, limit: limit_secs.map(Duration::from_secs) })
}

fn alternating(first: MoveType, n: usize) -> Vec<MoveType> {
    (0..n).map(|i| if i % 2 == 0 { first } else { first.other() }).collect()
}

fn c1() -> Result<Outcome> {
    let mut details = Vec::new();
    let mut ok = true;
    for m in [vec![2, 1], vec![3, 2, 1]] {
        let (pass, edges) = class_identities(&Pair::from_monodromy(&m)?)?;
        ok &= pass;
        details.push(format!("{m:?}: {edges} edges"));
    }
    outcome(ok, details.join(", "), Some(1))
}

fn c2() -> Result<Outcome> {
    let golden = renormalize(&golden_standard()?, 25);
    let d3 = renormalize(&random_genus_one_map(3, SEED)?, 25);
    let mut ok = true;
    for r in [&golden, &d3] {
        ok &= r.states.len() == 26 && return_time_identity(&CocyclePath::new(r.path()), &r.states);
    }
    let fib: Vec<(u64, u64)> = vec![(1, 1), (2, 1), (2, 3), (5, 3), (5, 8)];
    let got: Vec<(u64, u64)> = golden.states[..5]
        .iter()
        .map(|s| (s.q[0].to_string().parse().unwrap(), s.q[1].to_string().parse().unwrap()))
        .collect();
    ok &= got == fib;
    outcome(ok, format!("golden q {got:?}, d=3 pair {}", d3.states[0].pair), Some(1))
}

fn c3() -> Result<Outcome> {
    let c = oracle_check(SEED)?;
    outcome(c.pass, c.detail, Some(30))
}

fn c4() -> Result<Outcome> {
    let pair = Pair::rotation();
    let golden = CocyclePath::from_moves(&pair, &alternating(MoveType::Zero, 20));
    let u0 = canonical_unstable_vector(&pair);
    let fwd = growth_estimate(&golden, &u0, GrowthDirection::ForwardUnstable)?.rate;
    let s_end = golden.omega(20).mul_vec_f64(&[1.0, 1.0]);
    let bwd = growth_estimate(&golden, &s_end, GrowthDirection::BackwardStable)?.rate;
    let constant = CocyclePath::from_moves(&pair, &[MoveType::Zero; 20]);
    let ctl = growth_estimate(&constant, &u0, GrowthDirection::ForwardUnstable)?.rate;
    let band = |x: f64| (1.55..=1.70).contains(&x);
    outcome(
        band(fwd) && band(bwd) && ctl < 1.1,
        format!("forward {fwd:.4}, backward {bwd:.4}, constant-type {ctl:.4}"),
        Some(1),
    )
}

fn c5() -> Result<Outcome> {
    let d2 = CocyclePath::from_moves(&Pair::rotation(), &alternating(MoveType::Zero, 2));
    let e2 = periodic_central_space(&d2)?;
    let p3 = Pair::from_monodromy(&[3, 2, 1])?;
    let loop3 = CocyclePath::from_moves(&p3, &alternating(MoveType::One, 6));
    let e3 = periodic_central_space(&loop3)?;
    let period = loop3.product(loop3.len()).to_rational();
    let fixed = e3.exact.iter().all(|v| period.mul_vec(v) == *v);
    let path = RauzyPath::from_moves(p3.clone(), &alternating(MoveType::One, 30));
    let ladder = central_ladder(&path);
    let limit = central_space_limit(&path, &ladder)?;
    let long = CocyclePath::new(&path);
    let qi = limit
        .graph_vectors(&p3)
        .iter()
        .map(|v| quasi_isometry_ratio(&long, v, 30))
        .fold(0.0, f64::max);
    outcome(
        e2.basis.dim() == 0 && e3.basis.dim() == 1 && fixed && qi <= 10.0,
        format!(
            "d=2 dim {}, d=3 dim {} (period {} exact identity {fixed}), ladder {ladder:?}, quasi-isometry ratio {qi:.3}",
            e2.basis.dim(),
            e3.basis.dim(),
            e3.period
        ),
        Some(5),
    )
}

fn cfg(map: &str, compare: Compare) -> ExperimentConfig {
    ExperimentConfig {
        map: Some(MapSource::Preset { preset: map.into() }),
        other: Some(MapSource::Preset { preset: "ko-g".into() }),
        compare,
        depth: 15,
        grid: 4097,
        ..ExperimentConfig::default()
    }
}

fn series_text(r: &rauzy_lab::experiments::ConvergeReport, names: &[&str]) -> String {
    names
        .iter()
        .filter_map(|n| r.series(n))
        .map(|s| format!("{} slope {:.3} drop {:.3e} l2 {}", s.name, s.trend.slope, s.drop, s.trend.l2.bounded()))
        .collect::<Vec<_>>()
        .join("; ")
}

fn c6() -> Result<Outcome> {
    let r = converge_report(&cfg("golden-moebius", Compare::Moebius))?;
    let c1 = r.series("c1").expect("c1 series");
    let peak = c1.values.iter().fold(0.0f64, |a, &b| a.max(b));
    outcome(
        r.pass(),
        format!(
            "m = {GOLDEN_M}: {}; max a_n {peak:.2e} (Mobius branches renormalize to Mobius maps exactly, so a_n is round-off)",
            series_text(&r, &["c1", "l1_second"])
        ),
        Some(120),
    )
}

fn c6_supplementary() -> Result<Outcome> {
    let r = converge_report(&cfg("ko-f", Compare::Moebius))?;
    outcome(r.pass(), format!("kinked zero-mean map: {}", series_text(&r, &["c1", "l1_second"])), Some(120))
}

fn c7() -> Result<Outcome> {
    let r = converge_report(&cfg("golden-moebius", Compare::AffineModel))?;
    outcome(r.pass(), series_text(&r, &["c1", "partition_gap"]), Some(180))
}

fn c8_c9() -> Result<(Outcome, Outcome)> {
    let r = converge_report(&cfg("ko-f", Compare::Pair))?;
    let c1 = r.series("c1").expect("c1 series");
    let o8 = outcome(c1.trend.decays() && c1.trend.l2.bounded(), series_text(&r, &["c1", "l1_second"]), Some(180))?;
    let resid_ok = ["residual_f", "residual_g"].iter().all(|n| r.series(n).is_some_and(|s| s.trend.l2.bounded()));
    let (affine_max, affine_levels) = affine_residuals()?;
    let o9 = outcome(
        resid_ok && affine_max <= 1e-9,
        format!("{}; affine max |eps_n| {affine_max:.2e} over {affine_levels} levels", series_text(&r, &["residual_f", "residual_g"])),
        None,
    )?;
    Ok((o8, o9))
}

fn affine_residuals() -> Result<(f64, usize)> {
    let lam = [0.3, 0.45, 0.25];
    let w: [f64; 3] = [0.2, -0.1, 0.0];
    let s: f64 = lam.iter().zip(&w).map(|(l, w)| l * w.exp()).sum();
    let w: Vec<f64> = w.iter().map(|x| x - s.ln()).collect();
    let maps: Vec<Giem> = vec![golden_standard()?, make_affine_iem(&Pair::from_monodromy(&[3, 2, 1])?, &lam, &w)?];
    let mut worst: f64 = 0.0;
    let mut levels = 0;
    for f in &maps {
        let st = renormalize(f, 21).into_result()?;
        let steps = st[21].history.steps().to_vec();
        for n in 0..20 {
            let a = l_vector(f, &st[n])?;
            let b = l_vector(f, &st[n + 1])?;
            let th = theta_matrix(&st[n].pair, steps[n].eps).matrix;
            worst = worst.max(pseudo_orbit_residual(&a.values, &b.values, &th)?.1);
            levels += 1;
        }
    }
    Ok((worst, levels))
}

fn c10() -> Result<Outcome> {
    let c = smoothing_battery(SEED)?;
    outcome(c.pass, c.detail, Some(5))
}

fn c11() -> Result<Outcome> {
    let dirs = [tempfile::tempdir()?, tempfile::tempdir()?];
    let mut texts = Vec::new();
    for d in &dirs {
        let out = d.path().to_string_lossy().to_string();
        let args = cli::Cli::try_parse_from(["rauzy-lab", "selftest", "--seed", &SEED.to_string(), "--out", &out])
            .map_err(|e| rauzy_lab::Error::InvalidArgument(e.to_string()))?;
        texts.push(cli::execute(&args)?);
    }
    let mut same = texts[0] == texts[1];
    for name in ["selftest.txt", "selftest.json"] {
        let a = std::fs::read(dirs[0].path().join(name))?;
        let b = std::fs::read(dirs[1].path().join(name))?;
        same &= a == b && !a.is_empty();
    }
    outcome(same, format!("stdout and files identical across two runs: {same}"), None)
}

fn report(id: &str, elapsed: Duration, result: Result<Outcome>, failures: &mut Vec<String>) {
    let (pass, detail) = match result {
        Ok(o) => {
            let in_time = o.limit.is_none_or(|l| elapsed <= l);
            let detail = if in_time { o.detail } else { format!("{} (over the time limit)", o.detail) };
            (o.pass && in_time, detail)
        }
        Err(e) => (false, format!("error: {e}")),
    };
    println!("{} {id} [{:.2} s] {detail}", if pass { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    if !pass {
        failures.push(id.to_string());
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn main() {
    let mut failures = Vec::new();
    let single: [(&str, Criterion); 8] = [
        ("1", c1),
        ("2", c2),
        ("3", c3),
        ("4", c4),
        ("5", c5),
        ("6", c6),
        ("6-supplementary", c6_supplementary),
        ("7", c7),
    ];
    for (id, f) in single {
        let (r, dt) = timed(f);
        report(id, dt, r, &mut failures);
    }
    let (r, dt) = timed(c8_c9);
    match r {
        Ok((o8, o9)) => {
            report("8", dt, Ok(o8), &mut failures);
            report("9", dt, Ok(o9), &mut failures);
        }
        Err(e) => {
            report("8", dt, Err(e.clone()), &mut failures);
            report("9", dt, Err(e), &mut failures);
        }
    }
    for (id, f) in [("10", c10 as fn() -> Result<Outcome>), ("11", c11)] {
        let (r, dt) = timed(f);
        report(id, dt, r, &mut failures);
    }
    let blocking: Vec<&String> =
        failures.iter().filter(|id| !KNOWN_DEGENERATE.iter().any(|k| k.to_string() == **id)).collect();
    println!("{} criteria failed: {failures:?}; blocking: {blocking:?}", failures.len());
    if !blocking.is_empty() {
        std::process::exit(1);
    }
}
