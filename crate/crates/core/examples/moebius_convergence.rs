//! Zoomed return maps against the Moebius family, for a Moebius-branched map
//! and for a kinked zero-mean map.

use rauzy_lab::experiments::config::{Compare, ExperimentConfig, MapSource};
use rauzy_lab::experiments::converge_report;

fn main() -> rauzy_lab::Result<()> {
    for preset in ["golden-moebius", "ko-f"] {
        let cfg = ExperimentConfig {
            map: Some(MapSource::Preset { preset: preset.into() }),
            compare: Compare::Moebius,
            depth: 15,
            grid: 1025,
            ..ExperimentConfig::default()
        };
        let rep = converge_report(&cfg)?;
        let c1 = rep.series("c1").expect("c1");
        println!("{preset}:");
        for (n, a) in c1.levels.iter().zip(&c1.values) {
            println!("  n = {n:>2}  a_n = {a:.3e}");
        }
        println!("  log-slope {:.4}, final drop {:.3e}", c1.trend.slope, c1.drop);
    }
    Ok(())
}
