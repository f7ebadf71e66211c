//! JSON map definitions.

use serde::{Deserialize, Serialize};

use super::{Giem, Shape};
use crate::combinatorics::Pair;
use crate::error::{Error, Result};
use crate::tuning;

/// A number written either as a decimal string or as a JSON number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Text(String),
    Value(f64),
}

impl Num {
    pub fn value(&self) -> Result<f64> {
        match self {
            Num::Value(v) => Ok(*v),
            Num::Text(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidMap(format!("`{s}` is not a decimal number"))),
        }
    }

    fn is_auto(&self) -> bool {
        matches!(self, Num::Text(s) if s.trim() == "auto")
    }
}

impl From<f64> for Num {
    fn from(v: f64) -> Self {
        Num::Text(format!("{v}"))
    }
}

fn values(v: &[Num]) -> Result<Vec<f64>> {
    v.iter().map(Num::value).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BranchDef {
    #[serde(alias = "linear")]
    Affine,
    Moebius { m: Num },
    /// `amplitude` may be `"auto"`: chosen so the whole map has zero mean
    /// nonlinearity.
    PowerKink { c: Num, beta: Num, amplitude: Num },
}

/// Tunes the lengths of a two-interval map so that its renormalization
/// types follow `pattern` (repeated), e.g. `"01"` for the golden path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneDef {
    #[serde(default = "golden")]
    pub pattern: String,
    /// Ratio `K` of the image/domain scale of `A` to that of `B`.
    #[serde(default)]
    pub odds: Option<Num>,
    /// Number of renormalization types to match.
    #[serde(default)]
    pub depth: Option<usize>,
}

fn golden() -> String {
    "01".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapDef {
    pub pair: Pair,
    #[serde(default)]
    pub lengths: Option<Vec<Num>>,
    #[serde(default)]
    pub image_lengths: Option<Vec<Num>>,
    /// Affine log-slopes `ω⁰`; images become `e^{ω⁰_α} λ_α`.
    #[serde(default)]
    pub log_slopes: Option<Vec<Num>>,
    /// Defaults to all affine.
    #[serde(default)]
    pub branches: Option<Vec<BranchDef>>,
    #[serde(default)]
    pub tune: Option<TuneDef>,
}

impl MapDef {
    pub fn shapes(&self) -> Result<Vec<Shape>> {
        let d = self.pair.d();
        let defs = match &self.branches {
            Some(b) if b.len() != d => {
                return Err(Error::Dimension(format!("expected {d} branches, got {}", b.len())))
            }
            Some(b) => b.clone(),
            None => vec![BranchDef::Affine; d],
        };
        let mut shapes = Vec::with_capacity(d);
        let mut auto = None;
        for (i, b) in defs.iter().enumerate() {
            let s = match b {
                BranchDef::Affine => Shape::Linear,
                BranchDef::Moebius { m } => Shape::moebius(m.value()?)?,
                BranchDef::PowerKink { c, beta, amplitude } => {
                    let amp = if amplitude.is_auto() {
                        if auto.replace(i).is_some() {
                            return Err(Error::InvalidMap(
                                "at most one amplitude may be \"auto\"".into(),
                            ));
                        }
                        0.0
                    } else {
                        amplitude.value()?
                    };
                    Shape::power_kink(c.value()?, beta.value()?, amp)?
                }
            };
            shapes.push(s);
        }
        if let Some(i) = auto {
            let rest: f64 = shapes.iter().map(Shape::total_nonlinearity).sum();
            let Shape::PowerKink(pk) = shapes[i] else { unreachable!() };
            // s(1) − s(0) = (1−c)^β + c^β
            let span = (1.0 - pk.c).powf(pk.beta) + pk.c.powf(pk.beta);
            shapes[i] = Shape::power_kink(pk.c, pk.beta, -rest / span)?;
        }
        Ok(shapes)
    }

    pub fn build(&self) -> Result<Giem> {
        let shapes = self.shapes()?;
        if let Some(t) = &self.tune {
            let odds = t.odds.as_ref().map(Num::value).transpose()?.unwrap_or(1.0);
            let pattern = tuning::parse_pattern(&t.pattern)?;
            let depth = t.depth.unwrap_or(tuning::DEFAULT_DEPTH);
            return Ok(tuning::tune_two_interval(&self.pair, &shapes, odds, &pattern, depth)?.map);
        }
        let lengths = values(
            self.lengths
                .as_deref()
                .ok_or_else(|| Error::InvalidMap("`lengths` is required without `tune`".into()))?,
        )?;
        let images = match (&self.image_lengths, &self.log_slopes) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidMap(
                    "give at most one of `image_lengths` and `log_slopes`".into(),
                ))
            }
            (Some(im), None) => values(im)?,
            (None, Some(w)) => values(w)?
                .iter()
                .zip(&lengths)
                .map(|(w, l)| w.exp() * l)
                .collect(),
            (None, None) => lengths.clone(),
        };
        Giem::new(self.pair.clone(), &lengths, &images, &shapes)
    }

    /// Definition reproducing a built map (lengths written out in full).
    pub fn from_map(f: &Giem, branches: Option<Vec<BranchDef>>) -> Self {
        MapDef {
            pair: f.pair().clone(),
            lengths: Some(f.lengths().into_iter().map(Num::from).collect()),
            image_lengths: Some(f.image_lengths().into_iter().map(Num::from).collect()),
            log_slopes: None,
            branches,
            tune: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::mean_nonlinearity;

    #[test]
    fn parses_strings_and_numbers() {
        let json = r#"{
            "pair": {"alphabet": ["A", "B"], "pi0": [1, 2], "pi1": [2, 1]},
            "lengths": ["0.4", 0.6],
            "branches": [{"kind": "moebius", "m": "1.3"}, {"kind": "affine"}]
        }"#;
        let def: MapDef = serde_json::from_str(json).unwrap();
        let f = def.build().unwrap();
        assert_eq!(f.lengths(), vec![0.4, 0.6]);
        assert_eq!(f.shapes()[0], Shape::Moebius { m: 1.3 });
    }

    #[test]
    fn auto_amplitude_gives_zero_mean() {
        let json = r#"{
            "pair": {"alphabet": ["A", "B"], "pi0": [1, 2], "pi1": [2, 1]},
            "lengths": ["0.4", "0.6"],
            "branches": [
                {"kind": "moebius", "m": "1.3"},
                {"kind": "power_kink", "c": "0.4", "beta": "0.6", "amplitude": "auto"}
            ]
        }"#;
        let def: MapDef = serde_json::from_str(json).unwrap();
        let f = def.build().unwrap();
        assert!(mean_nonlinearity(&f).abs() < 1e-14);
    }

    #[test]
    fn log_slopes_set_images() {
        let def = MapDef {
            pair: Pair::rotation(),
            lengths: Some(vec![Num::from(0.5), Num::from(0.5)]),
            image_lengths: None,
            log_slopes: Some(vec![Num::from(0.2f64), Num::from((2.0 - 0.2f64.exp()).ln())]),
            branches: None,
            tune: None,
        };
        let f = def.build().unwrap();
        assert!(f.is_affine());
        assert!((f.image_lengths()[0] - 0.5 * 0.2f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_numbers() {
        assert!(Num::Text("1,5".into()).value().is_err());
    }
}
