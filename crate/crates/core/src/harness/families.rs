//! Werner and edge family sweeps, and bisection of the Werner class boundaries.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::report::{report, SteeringReport};
use crate::state::BellDiagonalState;
use crate::steering_three::steerable_by_three_sufficient;
use crate::steering_two::steerable_by_two;

pub const BISECT_TOL: f64 = 1e-9;
pub const BISECT_MAX_ITER: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Werner,
    Edge,
}

impl Family {
    pub fn state(self, x: f64) -> Result<BellDiagonalState> {
        match self {
            Family::Werner => BellDiagonalState::werner(x),
            Family::Edge => BellDiagonalState::edge(x),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Werner => "werner",
            Family::Edge => "edge",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "werner" => Ok(Family::Werner),
            "edge" => Ok(Family::Edge),
            _ => Err(Error::Parse {
                line: 0,
                msg: format!("unknown family {s:?}"),
            }),
        }
    }
}

/// Parameter values `from, from + step, ...` up to `to` (inclusive up to
/// roundoff), each paired with its report.
pub fn sweep_family(family: Family, from: f64, to: f64, step: f64) -> Result<Vec<(f64, SteeringReport)>> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::OutOfRange {
            what: "step",
            value: step,
            range: "(0, inf)",
        });
    }
    for (what, v) in [("from", from), ("to", to)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange {
                what,
                value: v,
                range: "[0, 1]",
            });
        }
    }
    if to < from {
        return Err(Error::OutOfRange {
            what: "to",
            value: to,
            range: "[from, 1]",
        });
    }
    let count = ((to - from) / step + 1e-9).floor() as u64 + 1;
    (0..count)
        .map(|k| {
            let x = (from + k as f64 * step).min(to);
            Ok((x, report(&family.state(x)?, false, 0)?))
        })
        .collect()
}

/// Smallest parameter in `[lo, hi]` at which `pred` turns true, assuming it is
/// false at `lo`, true at `hi` and monotone in between.
pub fn bisect<F: FnMut(f64) -> bool>(mut lo: f64, mut hi: f64, mut pred: F) -> f64 {
    for _ in 0..BISECT_MAX_ITER {
        if hi - lo <= BISECT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WernerThresholds {
    pub entangled: f64,
    pub certified3: f64,
    pub steerable2: f64,
}

/// Werner parameters where the classification changes.
pub fn werner_thresholds() -> WernerThresholds {
    let w = |f: f64| BellDiagonalState::werner(f).expect("f stays inside [1/4, 1]");
    WernerThresholds {
        entangled: bisect(0.25, 1.0, |f| !w(f).is_separable()),
        certified3: bisect(0.25, 1.0, |f| steerable_by_three_sufficient(&w(f))),
        steerable2: bisect(0.25, 1.0, |f| steerable_by_two(&w(f))),
    }
}
