//! Per-state summary and the four-way classification used by every front end.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::BellDiagonalState;
use crate::steering_three::{s3_lower_bound, s3_search, steerable_by_three_sufficient, S3Config};
use crate::steering_two::{chsh_max, normalized_steering, steerable_by_two, steering_measure};

/// Restarts used by [`report`] when the three-measurement estimate is requested.
pub const DEFAULT_S3_RESTARTS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SteeringClass {
    #[serde(rename = "separable")]
    Separable,
    #[serde(rename = "entangled-unsteerable2-uncertified3")]
    Uncertified3,
    #[serde(rename = "entangled-unsteerable2-steerable3")]
    Steerable3,
    #[serde(rename = "steerable2")]
    Steerable2,
}

impl SteeringClass {
    pub const ALL: [SteeringClass; 4] = [
        SteeringClass::Separable,
        SteeringClass::Uncertified3,
        SteeringClass::Steerable3,
        SteeringClass::Steerable2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SteeringClass::Separable => "separable",
            SteeringClass::Uncertified3 => "entangled-unsteerable2-uncertified3",
            SteeringClass::Steerable3 => "entangled-unsteerable2-steerable3",
            SteeringClass::Steerable2 => "steerable2",
        }
    }
}

impl fmt::Display for SteeringClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SteeringClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SteeringClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("unknown class {s:?}"),
            })
    }
}

/// Separable, then steerable by two, then certified for three, else uncertified.
pub fn classify(s: &BellDiagonalState) -> SteeringClass {
    if s.is_separable() {
        SteeringClass::Separable
    } else if steerable_by_two(s) {
        SteeringClass::Steerable2
    } else if steerable_by_three_sufficient(s) {
        SteeringClass::Steerable3
    } else {
        SteeringClass::Uncertified3
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteeringReport {
    pub t: [f64; 3],
    pub probabilities: [f64; 4],
    pub concurrence: f64,
    pub s: f64,
    pub chsh: f64,
    pub normalized_s: f64,
    pub volume: f64,
    pub frobenius: f64,
    pub s3_lower: f64,
    pub s3_estimate: Option<f64>,
    pub class: SteeringClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: u64,
    pub report: SteeringReport,
}

/// Builds the full report; `with_s3_estimate` runs the (slow) restarted search
/// for the three-measurement value with [`DEFAULT_S3_RESTARTS`] starts.
pub fn report(s: &BellDiagonalState, with_s3_estimate: bool, seed: u64) -> Result<SteeringReport> {
    let s3_estimate = if with_s3_estimate {
        Some(s3_search(s, &S3Config::new(DEFAULT_S3_RESTARTS, seed))?.value)
    } else {
        None
    };
    Ok(SteeringReport {
        t: s.t().to_array(),
        probabilities: s.probabilities(),
        concurrence: s.concurrence(),
        s: steering_measure(s),
        chsh: chsh_max(s),
        normalized_s: normalized_steering(s),
        volume: s.ellipsoid_volume(),
        frobenius: s.frobenius_norm(),
        s3_lower: s3_lower_bound(s),
        s3_estimate,
        class: classify(s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::SQRT_2;

    fn werner(f: f64) -> BellDiagonalState {
        BellDiagonalState::werner(f).unwrap()
    }

    #[test]
    fn werner_classes() {
        assert_eq!(classify(&werner(0.6)), SteeringClass::Uncertified3);
        assert_eq!(classify(&werner(0.7)), SteeringClass::Steerable3);
        assert_eq!(classify(&werner(0.75)), SteeringClass::Steerable3);
        assert_eq!(classify(&werner(0.85)), SteeringClass::Steerable2);
        assert_eq!(classify(&werner(0.5)), SteeringClass::Separable);
        let r = report(&werner(0.6), false, 0).unwrap();
        assert_abs_diff_eq!(r.s, 2.0 * SQRT_2 / 3.0 * 1.4, epsilon = 1e-14);
        assert_abs_diff_eq!(r.frobenius, 1.4 / 3f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn singlet_report() {
        let r = report(&BellDiagonalState::singlet(), false, 0).unwrap();
        assert_eq!(r.concurrence, 1.0);
        assert_abs_diff_eq!(r.s, 2.0 * SQRT_2, epsilon = 1e-15);
        assert_eq!(r.volume, 1.0);
        assert_abs_diff_eq!(r.frobenius, 3f64.sqrt(), epsilon = 1e-15);
        assert_eq!(r.class, SteeringClass::Steerable2);
        assert_eq!(r.s3_estimate, None);
    }

    #[test]
    fn mixed_report_is_all_zero() {
        let r = report(&BellDiagonalState::maximally_mixed(), true, 0).unwrap();
        for v in [r.concurrence, r.s, r.chsh, r.normalized_s, r.volume, r.frobenius, r.s3_lower] {
            assert_eq!(v, 0.0);
        }
        assert_eq!(r.s3_estimate, Some(0.0));
        assert_eq!(r.class, SteeringClass::Separable);
    }

    #[test]
    fn class_names_round_trip() {
        for c in SteeringClass::ALL {
            assert_eq!(c.as_str().parse::<SteeringClass>().unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{c}\""));
        }
        assert!("steerable9".parse::<SteeringClass>().is_err());
    }
}
