//! Classification heat maps on axis-aligned slices of the tetrahedron.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::report::{classify, SteeringClass};
use crate::linalg::Vec3;
use crate::state::{bell_weights, BellDiagonalState, TOL_STATE};

pub const MIN_RESOLUTION: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    T1,
    T2,
    T3,
}

impl Axis {
    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.index() + 1)
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t1" => Ok(Axis::T1),
            "t2" => Ok(Axis::T2),
            "t3" => Ok(Axis::T3),
            _ => Err(Error::Parse {
                line: 0,
                msg: format!("unknown axis {s:?}"),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum RegionLabel {
    Invalid,
    Class(SteeringClass),
}

impl RegionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::Invalid => "invalid",
            RegionLabel::Class(c) => c.as_str(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionCell {
    /// Raw (uncanonicalized) correlation triple of the grid node.
    pub t: [f64; 3],
    pub label: RegionLabel,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionSlice {
    pub axis: Axis,
    pub value: f64,
    pub resolution: usize,
    /// Row-major over the two free axes, each sampled on `linspace(-1, 1, resolution)`.
    pub cells: Vec<RegionCell>,
}

fn node(k: usize, n: usize) -> f64 {
    -1.0 + 2.0 * k as f64 / (n - 1) as f64
}

pub fn region_slice(axis: Axis, value: f64, resolution: usize) -> Result<RegionSlice> {
    if value.is_nan() || value.abs() > 1.0 {
        return Err(Error::OutOfRange {
            what: "slice value",
            value,
            range: "[-1, 1]",
        });
    }
    if resolution < MIN_RESOLUTION {
        return Err(Error::OutOfRange {
            what: "resolution",
            value: resolution as f64,
            range: "[16, inf)",
        });
    }
    let fixed = axis.index();
    let free: Vec<usize> = (0..3).filter(|&k| k != fixed).collect();
    let mut cells = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            let mut t = [0.0; 3];
            t[fixed] = value;
            t[free[0]] = node(i, resolution);
            t[free[1]] = node(j, resolution);
            let inside = bell_weights(Vec3::from_array(t)).iter().all(|&p| p >= -TOL_STATE);
            let label = if inside {
                let s = BellDiagonalState::from_t(t[0], t[1], t[2])?;
                RegionLabel::Class(classify(&s))
            } else {
                RegionLabel::Invalid
            };
            cells.push(RegionCell { t, label });
        }
    }
    Ok(RegionSlice {
        axis,
        value,
        resolution,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equatorial_slice_is_the_separable_octahedron() {
        let slice = region_slice(Axis::T3, 0.0, 41).unwrap();
        for c in &slice.cells {
            let [a, b, _] = c.t;
            if c.label != RegionLabel::Invalid {
                assert!(a.abs() + b.abs() <= 1.0 + 1e-12);
                assert_eq!(c.label, RegionLabel::Class(SteeringClass::Separable));
            }
            if c.label == RegionLabel::Class(SteeringClass::Steerable2) {
                assert!(a * a + b * b > 1.0);
            }
        }
    }

    #[test]
    fn top_face_is_an_edge() {
        for v in [1.0, -1.0] {
            let slice = region_slice(Axis::T3, v, 16).unwrap();
            let valid: Vec<_> = slice.cells.iter().filter(|c| c.label != RegionLabel::Invalid).collect();
            assert_eq!(valid.len(), 16, "value {v}");
            for c in valid {
                let [a, b, _] = c.t;
                assert!((a + v * b).abs() < 1e-12);
                assert_eq!(c.label, RegionLabel::Class(SteeringClass::Steerable2));
            }
        }
    }

    #[test]
    fn off_center_slice_has_every_class() {
        let slice = region_slice(Axis::T1, -0.6, 81).unwrap();
        for class in SteeringClass::ALL {
            assert!(slice.cells.iter().any(|c| c.label == RegionLabel::Class(class)), "{class}");
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(region_slice(Axis::T1, 1.5, 32).is_err());
        assert!(region_slice(Axis::T1, 0.0, 15).is_err());
        assert!(region_slice(Axis::T1, f64::NAN, 32).is_err());
    }
}
