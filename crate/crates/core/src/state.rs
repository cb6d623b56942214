//! Bell-diagonal two-qubit states.
//!
//! A state is stored through its correlation triple in canonical form
//! `t1 >= t2 >= |t3|`, with the sign of `det T` carried by `t3`. Any
//! Bell-diagonal state is locally equivalent to exactly one canonical triple,
//! and every measure in this crate is a function of that triple alone.
//!
//! The Bell basis is `|b_{mu nu}> = (|0,nu> + (-1)^mu |1,1+nu>)/sqrt 2`, whose
//! correlation matrices are `diag((-1)^mu, -(-1)^(mu+nu), (-1)^nu)`; `|b_11>`
//! is the singlet.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{svd3, Mat3, Vec3};

/// Slack allowed on the tetrahedron faces and on `|t_i| <= 1`.
pub const TOL_STATE: f64 = 1e-12;

/// Bell-basis labels in storage order.
pub const BELL_LABELS: [&str; 4] = ["00", "01", "10", "11"];

/// Correlation triple of `|b_{mu nu}>`, indexed as [`BELL_LABELS`].
pub const BELL_VERTICES: [Vec3; 4] = [
    Vec3::new(1.0, -1.0, 1.0),
    Vec3::new(1.0, 1.0, -1.0),
    Vec3::new(-1.0, 1.0, 1.0),
    Vec3::new(-1.0, -1.0, -1.0),
];

/// Weights `(p00, p01, p10, p11)` of the Bell mixture with correlation triple `t`.
pub fn bell_weights(t: Vec3) -> [f64; 4] {
    [
        0.25 * (1.0 + t.x - t.y + t.z),
        0.25 * (1.0 + t.x + t.y - t.z),
        0.25 * (1.0 - t.x + t.y + t.z),
        0.25 * (1.0 - t.x - t.y - t.z),
    ]
}

fn validate_triple(t: Vec3) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::NonFinite("correlation triple"));
    }
    for (index, value) in t.to_array().into_iter().enumerate() {
        if value.abs() > 1.0 + TOL_STATE {
            return Err(Error::CorrelationOutOfRange {
                index: index + 1,
                value,
            });
        }
    }
    for (label, value) in BELL_LABELS.into_iter().zip(bell_weights(t)) {
        if value < -TOL_STATE {
            return Err(Error::InvalidState { label, value });
        }
    }
    Ok(())
}

/// Sorts magnitudes descending and moves the sign of the product onto the
/// smallest entry. Permutations and paired sign flips are local rotations.
fn canonicalize(t: Vec3) -> Vec3 {
    let mut a = t.abs().to_array();
    a.sort_by(|x, y| y.total_cmp(x));
    let negative = t.x * t.y * t.z < 0.0;
    let t3 = if negative { -a[2] } else { a[2] };
    // clamp the float noise within TOL_STATE back onto the cube
    Vec3::new(a[0].min(1.0), a[1].min(1.0), t3.clamp(-1.0, 1.0) + 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellDiagonalState {
    t: Vec3,
    raw: Option<Mat3>,
}

impl BellDiagonalState {
    /// State with diagonal correlation matrix `diag(t1, t2, t3)`.
    pub fn from_t(t1: f64, t2: f64, t3: f64) -> Result<Self> {
        let t = Vec3::new(t1, t2, t3);
        validate_triple(t)?;
        Ok(BellDiagonalState {
            t: canonicalize(t),
            raw: Some(Mat3::diag(t)),
        })
    }

    /// Mixture `sum p_{mu nu} |b_{mu nu}><b_{mu nu}|`. Inputs summing to one
    /// within `1e-9` are renormalized.
    pub fn from_probabilities(p00: f64, p01: f64, p10: f64, p11: f64) -> Result<Self> {
        let p = [p00, p01, p10, p11];
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("probability"));
        }
        for (label, value) in BELL_LABELS.into_iter().zip(p) {
            if value < 0.0 {
                return Err(Error::InvalidState { label, value });
            }
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::OutOfRange {
                what: "probability sum",
                value: total,
                range: "1 +/- 1e-9",
            });
        }
        let t = BELL_VERTICES
            .iter()
            .zip(p)
            .fold(Vec3::ZERO, |acc, (v, w)| acc + *v * (w / total));
        Self::from_t(t.x, t.y, t.z)
    }

    /// State with a general correlation matrix (zero local Bloch vectors).
    /// Matrices whose canonical triple leaves the tetrahedron are rejected.
    pub fn from_correlation_matrix(t: &Mat3) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::NonFinite("correlation matrix"));
        }
        let svd = svd3(t);
        let triple = Vec3::new(svd.s[0], svd.s[1], svd.sign * svd.s[2]);
        validate_triple(triple)?;
        Ok(BellDiagonalState {
            t: canonicalize(triple),
            raw: Some(*t),
        })
    }

    /// Werner state `f |b_11><b_11| + (1-f)/3 (I - |b_11><b_11|)`.
    pub fn werner(f: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::OutOfRange {
                what: "Werner weight f",
                value: f,
                range: "[0, 1]",
            });
        }
        let c = (1.0 - 4.0 * f) / 3.0;
        Self::from_t(c, c, c)
    }

    /// Edge state `p |b_11><b_11| + (1-p) |b_10><b_10|` with `p` replaced
    /// by `max(p, 1-p)`.
    pub fn edge(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange {
                what: "edge weight p",
                value: p,
                range: "[0, 1]",
            });
        }
        let p = p.max(1.0 - p);
        Self::from_probabilities(0.0, 0.0, 1.0 - p, p)
    }

    pub fn singlet() -> Self {
        Self::from_t(-1.0, -1.0, -1.0).expect("singlet is a valid state")
    }

    pub fn maximally_mixed() -> Self {
        Self::from_t(0.0, 0.0, 0.0).expect("origin is a valid state")
    }

    /// Canonical correlation triple `(t1, t2, t3)`, `t1 >= t2 >= |t3|`.
    pub fn t(&self) -> Vec3 {
        self.t
    }

    /// Correlation matrix as supplied at construction.
    pub fn raw_correlation(&self) -> Option<&Mat3> {
        self.raw.as_ref()
    }

    /// Canonical (diagonal) correlation matrix.
    pub fn correlation_matrix(&self) -> Mat3 {
        Mat3::diag(self.t)
    }

    /// Bell weights `(p00, p01, p10, p11)` of the canonical representative,
    /// clamped at zero.
    pub fn probabilities(&self) -> [f64; 4] {
        bell_weights(self.t).map(|p| p.max(0.0))
    }

    pub fn spectrum(&self) -> Spectrum4 {
        let mut p = self.probabilities();
        p.sort_by(f64::total_cmp);
        Spectrum4 { p }
    }

    pub fn max_eigenvalue(&self) -> f64 {
        // canonical ordering puts the largest weight at p01
        self.probabilities().into_iter().fold(0.0, f64::max)
    }

    /// `max(0, 2 p_max - 1)`.
    pub fn concurrence(&self) -> f64 {
        (2.0 * self.max_eigenvalue() - 1.0).clamp(0.0, 1.0)
    }

    pub fn is_separable(&self) -> bool {
        self.max_eigenvalue() <= 0.5 + TOL_STATE
    }

    /// Normalized steering-ellipsoid volume `|det T|`.
    pub fn ellipsoid_volume(&self) -> f64 {
        (self.t.x * self.t.y * self.t.z).abs()
    }

    /// Squared Frobenius norm; shares its summation order with the
    /// two-measurement eigenvalue sum so the two compare consistently.
    pub fn frobenius_norm_squared(&self) -> f64 {
        let t = self.t;
        (t.x * t.x + t.y * t.y) + t.z * t.z
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_squared().sqrt()
    }

    /// Eigenvalues of `T T^T` in nonincreasing order.
    pub fn ttt_eigenvalues(&self) -> [f64; 3] {
        let t = self.t;
        [t.x * t.x, t.y * t.y, t.z * t.z]
    }

    /// Bob's noisy observable induced by Alice measuring along `e`, in the
    /// canonical frame: `r = T^T e`.
    pub fn steering_equivalent(&self, e: Vec3) -> Result<NoisyObservable> {
        let norm = e.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnit { norm });
        }
        Ok(NoisyObservable::unchecked(self.observable_for(e)))
    }

    /// `T^T e` without the unit-norm check.
    pub(crate) fn observable_for(&self, e: Vec3) -> Vec3 {
        Vec3::new(self.t.x * e.x, self.t.y * e.y, self.t.z * e.z)
    }
}

/// Unbiased noisy binary qubit observable `B_{+-} = (I +- r.sigma)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisyObservable {
    pub r: Vec3,
}

impl NoisyObservable {
    pub fn new(r: Vec3) -> Result<Self> {
        if !r.is_finite() {
            return Err(Error::NonFinite("Bloch vector"));
        }
        let norm = r.norm();
        if norm > 1.0 + 1e-12 {
            return Err(Error::NotAnObservable { norm });
        }
        Ok(NoisyObservable { r })
    }

    pub(crate) fn unchecked(r: Vec3) -> Self {
        NoisyObservable { r }
    }
}

/// Eigenvalues of a Bell-diagonal density operator, nondecreasing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum4 {
    pub p: [f64; 4],
}

impl Spectrum4 {
    pub fn min(&self) -> f64 {
        self.p[0]
    }

    pub fn max(&self) -> f64 {
        self.p[3]
    }
}
