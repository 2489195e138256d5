//! Shape generators and experiment drivers: inequality ensembles, the
//! perturbation sweep around the regular polygon and the tentacle series.

mod experiments;
mod generators;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use experiments::{
    ratio_variation, sweep_perturbation, sweep_perturbation_with, tentacle_series,
    tentacle_series_with, verify_ensemble, verify_ensemble_with, EnsembleConfig, EnsembleReport,
    SweepRow, TentacleRow, TentacleSeries, Violations, TENTACLE_BOUND_LIMIT,
};
pub use generators::{
    convex_hull, item_seed, perturb_eps_max, perturb_ngon, random_convex_ngon, splitmix64,
    tentacle_area, tentacle_polygon,
};

/// Deficits at or below this are too small for a meaningful ratio.
pub const DEGENERATE_DEFICIT: f64 = 1e-12;

/// A ratio with the deficit in the denominator. Serialized as a number, or
/// the string `"degenerate"` when the deficit is below [`DEGENERATE_DEFICIT`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Value(f64),
    Degenerate,
}

impl Ratio {
    pub fn of(numerator: f64, deficit: f64) -> Ratio {
        if deficit <= DEGENERATE_DEFICIT {
            Ratio::Degenerate
        } else {
            Ratio::Value(numerator / deficit)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Ratio::Value(v) => Some(v),
            Ratio::Degenerate => None,
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Value(v) => write!(f, "{v:.16e}"),
            Ratio::Degenerate => f.write_str("degenerate"),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Ratio::Value(v) => s.serialize_f64(*v),
            Ratio::Degenerate => s.serialize_str("degenerate"),
        }
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Tag(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(Ratio::Value(v)),
            Repr::Tag(t) if t == "degenerate" => Ok(Ratio::Degenerate),
            Repr::Tag(t) => Err(serde::de::Error::custom(format!(
                "unexpected ratio marker `{t}`"
            ))),
        }
    }
}

/// Both sides of the stability inequalities for one shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityRecord {
    pub id: String,
    pub n: usize,
    /// `√|Ω| h(Ω) - h(Ω₀)`.
    pub deficit: f64,
    pub hd_aligned: f64,
    pub l1_aligned: f64,
    pub diameter: f64,
    /// `hd² / deficit`.
    pub ratio_hd: Ratio,
    /// `l1² / deficit`.
    pub ratio_l1: Ratio,
    pub cheeger_regular: bool,
}
