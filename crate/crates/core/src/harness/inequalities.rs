//! Monte Carlo verification of the bounds tying `S`, `|T|_F`, `C` and `V`
//! together, plus exact saturation checks on the Werner and edge families.
//!
//! Every bound is stored one-sided as `lhs <= rhs` with signed slack
//! `lhs - rhs`; a sample violates it when the slack exceeds
//! [`VIOLATION_TOL`].

use std::f64::consts::SQRT_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::harness::report::{classify, SteeringClass};
use crate::harness::sampling::sample_state;
use crate::state::BellDiagonalState;
use crate::steering_two::steering_measure;

pub const VIOLATION_TOL: f64 = 1e-9;
pub const SATURATION_TOL: f64 = 1e-10;

/// Which samples a bound applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    All,
    Entangled,
    /// Concurrence above `(3 - sqrt 2)/(2 sqrt 2)`.
    HighConcurrence,
    Unsteerable2,
    Uncertified3,
    Separable,
}

#[derive(Clone, Copy, Debug)]
pub struct Bound {
    pub name: &'static str,
    pub scope: Scope,
    pub slack: fn(&Measures) -> f64,
}

/// The scalar measures every bound is written in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measures {
    pub c: f64,
    pub s: f64,
    pub v: f64,
    pub frob: f64,
    pub class: SteeringClass,
}

impl Measures {
    pub fn of(st: &BellDiagonalState) -> Self {
        Measures {
            c: st.concurrence(),
            s: steering_measure(st),
            v: st.ellipsoid_volume(),
            frob: st.frobenius_norm(),
            class: classify(st),
        }
    }

    fn in_scope(&self, scope: Scope) -> bool {
        match scope {
            Scope::All => true,
            Scope::Entangled => self.c > 0.0,
            Scope::HighConcurrence => self.c > high_concurrence(),
            Scope::Unsteerable2 => self.class != SteeringClass::Steerable2,
            Scope::Uncertified3 => matches!(self.class, SteeringClass::Separable | SteeringClass::Uncertified3),
            Scope::Separable => self.class == SteeringClass::Separable,
        }
    }
}

fn high_concurrence() -> f64 {
    (3.0 - SQRT_2) / (2.0 * SQRT_2)
}

/// The ten one-sided halves of the five two-sided bounds.
pub const BOUNDS: [Bound; 10] = [
    Bound {
        name: "S >= (2 sqrt2/3)(1+2C)",
        scope: Scope::Entangled,
        slack: |m| 2.0 * SQRT_2 / 3.0 * (1.0 + 2.0 * m.c) - m.s,
    },
    Bound {
        name: "S <= 2 sqrt(1+C^2)",
        scope: Scope::All,
        slack: |m| m.s - 2.0 * (1.0 + m.c * m.c).sqrt(),
    },
    Bound {
        name: "V >= C^2",
        scope: Scope::All,
        slack: |m| m.c * m.c - m.v,
    },
    Bound {
        name: "V <= ((1+2C)/3)^3",
        scope: Scope::All,
        slack: |m| m.v - ((1.0 + 2.0 * m.c) / 3.0).powi(3),
    },
    Bound {
        name: "S >= 2 sqrt2 V^(1/3)",
        scope: Scope::All,
        slack: |m| 2.0 * SQRT_2 * m.v.cbrt() - m.s,
    },
    Bound {
        name: "S <= 2 sqrt(1+V)",
        scope: Scope::All,
        slack: |m| m.s - 2.0 * (1.0 + m.v).sqrt(),
    },
    Bound {
        name: "|T|_F >= (1+2C)/sqrt3",
        scope: Scope::Entangled,
        slack: |m| (1.0 + 2.0 * m.c) / 3f64.sqrt() - m.frob,
    },
    Bound {
        name: "|T|_F <= sqrt(1+2C^2)",
        scope: Scope::All,
        slack: |m| m.frob - (1.0 + 2.0 * m.c * m.c).sqrt(),
    },
    Bound {
        name: "|T|_F >= sqrt3 V^(1/3)",
        scope: Scope::All,
        slack: |m| 3f64.sqrt() * m.v.cbrt() - m.frob,
    },
    Bound {
        name: "|T|_F <= sqrt(1+2V)",
        scope: Scope::All,
        slack: |m| m.frob - (1.0 + 2.0 * m.v).sqrt(),
    },
];

/// Consequences for the classification regions.
pub const DERIVED: [Bound; 5] = [
    Bound {
        name: "C > (3-sqrt2)/(2 sqrt2) => S > 2",
        scope: Scope::HighConcurrence,
        slack: |m| 2.0 - m.s,
    },
    Bound {
        name: "unsteerable2 => V <= 1/(2 sqrt2)",
        scope: Scope::Unsteerable2,
        slack: |m| m.v - 1.0 / (2.0 * SQRT_2),
    },
    Bound {
        name: "uncertified3 => C <= (sqrt3-1)/2",
        scope: Scope::Uncertified3,
        slack: |m| m.c - (3f64.sqrt() - 1.0) / 2.0,
    },
    Bound {
        name: "uncertified3 => V <= 1/(3 sqrt3)",
        scope: Scope::Uncertified3,
        slack: |m| m.v - 1.0 / (3.0 * 3f64.sqrt()),
    },
    Bound {
        name: "separable => V <= 1/27",
        scope: Scope::Separable,
        slack: |m| m.v - 1.0 / 27.0,
    },
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub scope: Scope,
    /// Samples the bound applied to.
    pub samples: u64,
    /// Largest `lhs - rhs`; `None` when no sample was in scope.
    pub max_slack: Option<f64>,
    pub worst_index: Option<u64>,
    pub worst_t: Option<[f64; 3]>,
}

impl BoundCheck {
    pub fn violated(&self) -> bool {
        self.max_slack.is_some_and(|s| s > VIOLATION_TOL)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SaturationCheck {
    pub family: &'static str,
    pub bound: &'static str,
    pub max_gap: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityReport {
    pub n: u64,
    pub seed: u64,
    pub bounds: Vec<BoundCheck>,
    pub derived: Vec<BoundCheck>,
    pub saturation: Vec<SaturationCheck>,
}

impl InequalityReport {
    pub fn violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.bounds.iter().chain(&self.derived).filter(|b| b.violated())
    }

    pub fn saturation_failures(&self) -> impl Iterator<Item = &SaturationCheck> {
        self.saturation.iter().filter(|c| !c.passed)
    }

    pub fn all_passed(&self) -> bool {
        self.violations().next().is_none() && self.saturation_failures().next().is_none()
    }

    /// Check by name, searching the bounds and the derived consequences.
    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.bounds.iter().chain(&self.derived).find(|b| b.name == name)
    }
}

#[derive(Clone, Copy)]
struct Worst {
    samples: u64,
    slack: f64,
    index: u64,
}

const EMPTY: Worst = Worst {
    samples: 0,
    slack: f64::NEG_INFINITY,
    index: u64::MAX,
};

fn merge(a: Worst, b: Worst) -> Worst {
    let better = if b.slack > a.slack || (b.slack == a.slack && b.index < a.index) {
        b
    } else {
        a
    };
    Worst {
        samples: a.samples + b.samples,
        ..better
    }
}

const NB: usize = BOUNDS.len() + DERIVED.len();

fn all_bounds() -> impl Iterator<Item = &'static Bound> {
    BOUNDS.iter().chain(DERIVED.iter())
}

/// Evaluates every bound on samples `0..n` and runs the family saturation
/// checks. Worker partitioning does not affect the result.
pub fn verify_inequalities(n: u64, seed: u64) -> InequalityReport {
    let worst = (0..n)
        .into_par_iter()
        .fold(
            || [EMPTY; NB],
            |mut acc, i| {
                let m = Measures::of(&sample_state(seed, i));
                for (w, b) in acc.iter_mut().zip(all_bounds()) {
                    if m.in_scope(b.scope) {
                        let here = Worst {
                            samples: 1,
                            slack: (b.slack)(&m),
                            index: i,
                        };
                        *w = merge(*w, here);
                    }
                }
                acc
            },
        )
        .reduce(|| [EMPTY; NB], |a, b| std::array::from_fn(|k| merge(a[k], b[k])));

    let checks: Vec<BoundCheck> = all_bounds()
        .zip(worst)
        .map(|(b, w)| {
            let hit = w.samples > 0;
            BoundCheck {
                name: b.name,
                scope: b.scope,
                samples: w.samples,
                max_slack: hit.then_some(w.slack),
                worst_index: hit.then_some(w.index),
                worst_t: hit.then(|| sample_state(seed, w.index).t().to_array()),
            }
        })
        .collect();
    let (bounds, derived) = checks.split_at(BOUNDS.len());
    InequalityReport {
        n,
        seed,
        bounds: bounds.to_vec(),
        derived: derived.to_vec(),
        saturation: saturation_checks(),
    }
}

/// Werner states with `f >= 1/2` saturate the lower bounds and `V <= ((1+2C)/3)^3`;
/// edge states saturate the upper bounds and `V >= C^2`.
pub fn saturation_checks() -> Vec<SaturationCheck> {
    const WERNER: [usize; 5] = [0, 3, 4, 6, 8];
    const EDGE: [usize; 5] = [1, 2, 5, 7, 9];
    let grid = |k: usize| k as f64 / 1000.0;
    let werner: Vec<Measures> = (0..=1000)
        .map(|k| Measures::of(&BellDiagonalState::werner(0.5 + 0.5 * grid(k)).unwrap()))
        .collect();
    let edge: Vec<Measures> = (0..=1000)
        .map(|k| Measures::of(&BellDiagonalState::edge(0.5 + 0.5 * grid(k)).unwrap()))
        .collect();
    let mut out = Vec::new();
    for (family, members, which) in [("werner", &werner, WERNER), ("edge", &edge, EDGE)] {
        for k in which {
            let b = &BOUNDS[k];
            let max_gap = members
                .iter()
                .map(|m| (b.slack)(m).abs())
                .fold(0.0, f64::max);
            out.push(SaturationCheck {
                family,
                bound: b.name,
                max_gap,
                passed: max_gap <= SATURATION_TOL,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_examples() {
        let edge = Measures::of(&BellDiagonalState::edge(0.8).unwrap());
        assert!((edge.c - 0.6).abs() < 1e-15);
        assert!((BOUNDS[1].slack)(&edge).abs() < 1e-15);
        let w = Measures::of(&BellDiagonalState::werner(0.9).unwrap());
        assert!((w.v - 2.6f64.powi(3) / 27.0).abs() < 1e-15);
        assert!((w.v - 0.650_962_962_962_963).abs() < 1e-12);
        assert!((BOUNDS[3].slack)(&w).abs() < 1e-15);
    }

    #[test]
    fn saturation_passes() {
        for c in saturation_checks() {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn small_run_is_clean_and_deterministic() {
        let a = verify_inequalities(5000, 4);
        assert!(a.all_passed(), "{a:#?}");
        assert_eq!(a, verify_inequalities(5000, 4));
        assert_eq!(a.check("S <= 2 sqrt(1+C^2)").unwrap().samples, 5000);
        let entangled = a.check("S >= (2 sqrt2/3)(1+2C)").unwrap().samples;
        assert!(entangled > 0 && entangled < 5000);
    }

    #[test]
    fn violation_is_detected() {
        let m = Measures {
            c: 0.0,
            s: 2.5,
            v: 0.0,
            frob: 0.0,
            class: SteeringClass::Separable,
        };
        assert!((BOUNDS[1].slack)(&m) > VIOLATION_TOL);
    }
}
