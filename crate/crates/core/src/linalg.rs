//! Fixed-size real linear algebra on 3-vectors and 3x3 matrices.
//!
//! Only what the steering computations need: vector arithmetic, a Jacobi
//! eigendecomposition for symmetric matrices and a one-sided Jacobi SVD.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for eigen/SVD residual checks.
pub const TOL_EIG: f64 = 1e-10;
/// Symmetry tolerance accepted by [`eig_sym3`].
pub const TOL_SYM: f64 = 1e-12;

const JACOBI_MAX_SWEEPS: usize = 64;

/// A point or direction in Bloch space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Unit vector from polar angle `theta` (from +z) and azimuth `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Vec3::new(st * cp, st * sp, ct)
    }

    /// Inverse of [`Vec3::from_spherical`] for a nonzero vector.
    pub fn to_spherical(self) -> (f64, f64) {
        let n = self.norm();
        let theta = (self.z / n).clamp(-1.0, 1.0).acos();
        let phi = self.y.atan2(self.x);
        (theta, phi)
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Returns `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0).then(|| self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn abs(self) -> Vec3 {
        Vec3::new(self.x.abs(), self.y.abs(), self.z.abs())
    }

    /// Any unit vector orthogonal to `self` (which must be nonzero).
    pub fn any_orthogonal(self) -> Vec3 {
        let a = self.abs();
        let helper = if a.x <= a.y && a.x <= a.z {
            Vec3::X
        } else if a.y <= a.z {
            Vec3::Y
        } else {
            Vec3::Z
        };
        self.cross(helper).normalized().unwrap_or(Vec3::X)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

/// Row-major 3x3 real matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat3 {
    pub m: [[f64; 3]; 3],
}

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3 {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };
    pub const ZERO: Mat3 = Mat3 { m: [[0.0; 3]; 3] };

    pub const fn new(m: [[f64; 3]; 3]) -> Self {
        Mat3 { m }
    }

    pub fn diag(d: Vec3) -> Self {
        Mat3::new([[d.x, 0.0, 0.0], [0.0, d.y, 0.0], [0.0, 0.0, d.z]])
    }

    pub fn from_cols(c0: Vec3, c1: Vec3, c2: Vec3) -> Self {
        Mat3::new([[c0.x, c1.x, c2.x], [c0.y, c1.y, c2.y], [c0.z, c1.z, c2.z]])
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3::new(self.m[0][j], self.m[1][j], self.m[2][j])
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3::from_array(self.m[i])
    }

    fn set_col(&mut self, j: usize, v: Vec3) {
        self.m[0][j] = v.x;
        self.m[1][j] = v.y;
        self.m[2][j] = v.z;
    }

    pub fn transpose(&self) -> Mat3 {
        let mut out = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = self.m[j][i];
            }
        }
        out
    }

    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        Vec3::new(self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v))
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }

    pub fn scale(&self, k: f64) -> Mat3 {
        let mut out = *self;
        out.m.iter_mut().flatten().for_each(|v| *v *= k);
        out
    }

    pub fn sub(&self, o: &Mat3) -> Mat3 {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] -= o.m[i][j];
            }
        }
        out
    }

    /// Outer product `a b^T`.
    pub fn outer(a: Vec3, b: Vec3) -> Mat3 {
        Mat3::new([
            (b * a.x).to_array(),
            (b * a.y).to_array(),
            (b * a.z).to_array(),
        ])
    }

    /// Largest absolute deviation from symmetry.
    pub fn asymmetry(&self) -> f64 {
        let m = &self.m;
        (m[0][1] - m[1][0])
            .abs()
            .max((m[0][2] - m[2][0]).abs())
            .max((m[1][2] - m[2][1]).abs())
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut out = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = (0..3).map(|k| self.m[i][k] * o.m[k][j]).sum();
            }
        }
        out
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] += o.m[i][j];
            }
        }
        out
    }
}

/// Spectral decomposition of a symmetric 3x3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymEig3 {
    /// Nonincreasing.
    pub values: [f64; 3],
    /// Orthonormal, `vectors[i]` belongs to `values[i]`.
    pub vectors: [Vec3; 3],
}

impl SymEig3 {
    pub fn reconstruct(&self) -> Mat3 {
        (0..3).fold(Mat3::ZERO, |acc, i| {
            acc + Mat3::outer(self.vectors[i], self.vectors[i]).scale(self.values[i])
        })
    }
}

/// Flips `v` so that its first component with magnitude above `1e-12` is positive.
fn canonical_sign(v: Vec3) -> Vec3 {
    for c in v.to_array() {
        if c.abs() > 1e-12 {
            return if c < 0.0 { -v } else { v };
        }
    }
    v
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Eigenvalues come back nonincreasing, eigenvectors carry the
/// first-nonzero-component-positive sign convention.
pub fn eig_sym3(mat: &Mat3) -> Result<SymEig3> {
    if !mat.is_finite() {
        return Err(Error::NonFinite("matrix"));
    }
    let scale = mat.frobenius_norm().max(1.0);
    let asym = mat.asymmetry();
    if asym > TOL_SYM * scale {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    // symmetrize away any residual within tolerance
    let mut a = mat.m;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let avg = 0.5 * (a[i][j] + a[j][i]);
            a[i][j] = avg;
            a[j][i] = avg;
        }
    }
    let mut v = Mat3::IDENTITY.m;
    let stop = 1e-3 * f64::EPSILON * mat.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = a[0][1].abs() + a[0][2].abs() + a[1][2].abs();
        if off <= stop {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a[p][q];
            if apq == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            // A <- J^T A J
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            a[p][q] = 0.0;
            a[q][p] = 0.0;
            for row in v.iter_mut() {
                let vkp = row[p];
                let vkq = row[q];
                row[p] = c * vkp - s * vkq;
                row[q] = s * vkp + c * vkq;
            }
        }
    }

    let vm = Mat3::new(v);
    let mut pairs: [(f64, Vec3); 3] = [
        (a[0][0], vm.col(0)),
        (a[1][1], vm.col(1)),
        (a[2][2], vm.col(2)),
    ];
    pairs.sort_by(|l, r| r.0.total_cmp(&l.0));
    Ok(SymEig3 {
        values: [pairs[0].0, pairs[1].0, pairs[2].0],
        vectors: [
            canonical_sign(pairs[0].1),
            canonical_sign(pairs[1].1),
            canonical_sign(pairs[2].1),
        ],
    })
}

/// Singular value decomposition `T = sign * U diag(s) V^T`.
///
/// `U` and `V` are proper rotations and `s` is nonnegative, so the sign of
/// `det T` cannot live in either factor; it is carried by `sign` instead.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Svd3 {
    pub u: Mat3,
    /// Nonincreasing, nonnegative.
    pub s: [f64; 3],
    pub v: Mat3,
    /// `+1.0` or `-1.0`; `+1.0` whenever `T` is singular.
    pub sign: f64,
}

impl Svd3 {
    pub fn reconstruct(&self) -> Mat3 {
        (self.u * Mat3::diag(Vec3::from_array(self.s)) * self.v.transpose()).scale(self.sign)
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd3(t: &Mat3) -> Svd3 {
    let scale = t.frobenius_norm();
    if scale == 0.0 || !scale.is_finite() {
        return Svd3 {
            u: Mat3::IDENTITY,
            s: [0.0; 3],
            v: Mat3::IDENTITY,
            sign: 1.0,
        };
    }
    let mut a = *t;
    let mut v = Mat3::IDENTITY;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let cp = a.col(p);
            let cq = a.col(q);
            let alpha = cp.norm_squared();
            let beta = cq.norm_squared();
            let gamma = cp.dot(cq);
            if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                continue;
            }
            rotated = true;
            let zeta = (beta - alpha) / (2.0 * gamma);
            let tt = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
            let c = 1.0 / (1.0 + tt * tt).sqrt();
            let s = c * tt;
            a.set_col(p, cp * c - cq * s);
            a.set_col(q, cp * s + cq * c);
            let vp = v.col(p);
            let vq = v.col(q);
            v.set_col(p, vp * c - vq * s);
            v.set_col(q, vp * s + vq * c);
        }
        if !rotated {
            break;
        }
    }

    let mut cols: [(f64, Vec3, Vec3); 3] = [0, 1, 2].map(|j| {
        let c = a.col(j);
        (c.norm(), c, v.col(j))
    });
    cols.sort_by(|l, r| r.0.total_cmp(&l.0));
    let s = [cols[0].0, cols[1].0, cols[2].0];
    let negligible = |x: f64| x <= 1e-14 * s[0];

    let u0 = cols[0].1 * (1.0 / s[0]);
    let u1 = if negligible(s[1]) {
        u0.any_orthogonal()
    } else {
        // re-orthogonalize against u0 for tiny singular values
        let raw = cols[1].1 * (1.0 / s[1]);
        (raw - u0 * u0.dot(raw)).normalized().unwrap_or_else(|| u0.any_orthogonal())
    };
    let cross = u0.cross(u1);
    let u2 = if negligible(s[2]) {
        cross
    } else {
        let raw = cols[2].1 * (1.0 / s[2]);
        if raw.dot(cross) >= 0.0 {
            cross
        } else {
            -cross
        }
    };
    let s = s.map(|x| if negligible(x) { 0.0 } else { x });

    let mut u = Mat3::from_cols(u0, u1, u2);
    let mut vm = Mat3::from_cols(cols[0].2, cols[1].2, cols[2].2);
    if vm.det() < 0.0 {
        vm.set_col(2, -vm.col(2));
        u.set_col(2, -u.col(2));
    }
    let mut sign = 1.0;
    if u.det() < 0.0 {
        if s[2] == 0.0 {
            u.set_col(2, -u.col(2));
        } else {
            u = u.scale(-1.0);
            sign = -1.0;
        }
    }
    Svd3 { u, s, v: vm, sign }
}

/// Solves `m x = b` by Cramer's rule; `None` when `m` is numerically singular.
pub(crate) fn solve3(m: &Mat3, b: Vec3) -> Option<Vec3> {
    let det = m.det();
    let scale = m.frobenius_norm();
    if det.is_nan() || det.abs() <= 1e-14 * scale * scale * scale {
        return None;
    }
    let c0 = m.col(0);
    let c1 = m.col(1);
    let c2 = m.col(2);
    let inv = 1.0 / det;
    Some(Vec3::new(
        Mat3::from_cols(b, c1, c2).det() * inv,
        Mat3::from_cols(c0, b, c2).det() * inv,
        Mat3::from_cols(c0, c1, b).det() * inv,
    ))
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;
    use rand::Rng;

    /// Haar-ish random rotation from a normalized quaternion.
    pub fn random_rotation<R: Rng>(rng: &mut R) -> Mat3 {
        loop {
            let q: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let n2: f64 = q.iter().map(|c| c * c).sum();
            if n2 > 1e-6 && n2 <= 1.0 {
                let n = n2.sqrt();
                let [w, x, y, z] = q.map(|c| c / n);
                return Mat3::new([
                    [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
                    [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
                    [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
                ]);
            }
        }
    }

    pub fn random_matrix<R: Rng>(rng: &mut R) -> Mat3 {
        Mat3::new(std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0))))
    }

    pub fn max_abs(m: &Mat3) -> f64 {
        m.m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::test_util::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_orthogonal(m: &Mat3) {
        let err = max_abs(&(m.transpose() * *m).sub(&Mat3::IDENTITY));
        assert!(err < 1e-10, "not orthogonal: {err}");
    }

    #[test]
    fn identity_eigenvalues() {
        let e = eig_sym3(&Mat3::IDENTITY).unwrap();
        assert_eq!(e.values, [1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_eigenpairs_are_axes() {
        let e = eig_sym3(&Mat3::diag(Vec3::new(1.0, 4.0, 0.0))).unwrap();
        assert_eq!(e.values, [4.0, 1.0, 0.0]);
        assert_eq!(e.vectors, [Vec3::Y, Vec3::X, Vec3::Z]);
    }

    #[test]
    fn rejects_asymmetric() {
        let mut m = Mat3::IDENTITY;
        m.m[0][1] = 1e-6;
        assert!(matches!(eig_sym3(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn random_symmetric_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let a = random_matrix(&mut rng);
            let m = a + a.transpose();
            let e = eig_sym3(&m).unwrap();
            assert!(e.values[0] >= e.values[1] && e.values[1] >= e.values[2]);
            let err = max_abs(&e.reconstruct().sub(&m));
            assert!(err < 1e-10, "reconstruction error {err}");
            for i in 0..3 {
                let res = m.mul_vec(e.vectors[i]) - e.vectors[i] * e.values[i];
                assert!(res.norm() < TOL_EIG);
                for j in 0..3 {
                    let d = e.vectors[i].dot(e.vectors[j]);
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((d - want).abs() < TOL_EIG);
                }
            }
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let r = random_rotation(&mut rng);
        let m = r * Mat3::diag(Vec3::new(2.0, 2.0, -1.0)) * r.transpose();
        let e = eig_sym3(&m).unwrap();
        assert!((e.values[0] - 2.0).abs() < 1e-12);
        assert!((e.values[1] - 2.0).abs() < 1e-12);
        assert!((e.values[2] + 1.0).abs() < 1e-12);
        assert!(max_abs(&e.reconstruct().sub(&m)) < 1e-12);
    }

    #[test]
    fn svd_of_signed_orthogonal() {
        let t = Mat3::diag(Vec3::new(1.0, -1.0, 1.0));
        let d = svd3(&t);
        assert_eq!(d.s, [1.0, 1.0, 1.0]);
        assert_eq!(d.sign, -1.0);
        assert!(max_abs(&d.reconstruct().sub(&t)) < 1e-12);
    }

    #[test]
    fn svd_of_zero() {
        let d = svd3(&Mat3::ZERO);
        assert_eq!(d.s, [0.0; 3]);
        assert_eq!(d.u, Mat3::IDENTITY);
    }

    #[test]
    fn svd_random_matches_eig() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..2_000 {
            let t = random_matrix(&mut rng);
            let d = svd3(&t);
            assert!(max_abs(&d.reconstruct().sub(&t)) < 1e-10);
            assert_orthogonal(&d.u);
            assert_orthogonal(&d.v);
            assert!((d.u.det() - 1.0).abs() < 1e-10);
            assert!((d.v.det() - 1.0).abs() < 1e-10);
            assert_eq!(d.sign, t.det().signum());
            let e = eig_sym3(&(t * t.transpose())).unwrap();
            for i in 0..3 {
                assert!((d.s[i] - e.values[i].max(0.0).sqrt()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn svd_rank_deficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for diag in [[0.7, 0.2, 0.0], [0.5, 0.0, 0.0], [0.3, 0.3, 0.0]] {
            let r1 = random_rotation(&mut rng);
            let r2 = random_rotation(&mut rng);
            let t = r1 * Mat3::diag(Vec3::from_array(diag)) * r2.transpose();
            let d = svd3(&t);
            assert_eq!(d.sign, 1.0);
            assert!(max_abs(&d.reconstruct().sub(&t)) < 1e-10);
            assert_orthogonal(&d.u);
            assert!((d.u.det() - 1.0).abs() < 1e-10);
            for i in 0..3 {
                assert!((d.s[i] - diag[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn solve_recovers() {
        let m = Mat3::new([[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]]);
        let x = Vec3::new(1.0, -2.0, 0.5);
        let got = solve3(&m, m.mul_vec(x)).unwrap();
        assert!((got - x).norm() < 1e-14);
        assert!(solve3(&Mat3::ZERO, x).is_none());
    }
}
