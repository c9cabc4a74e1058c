use std::ops::{Add, Mul};

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute margin used by the Sylvester test for strict definiteness.
pub const DEFINITENESS_MARGIN: f64 = 1e-12;

/// Relative asymmetry tolerated by [`is_negative_definite`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Dense 3×3 real matrix, row-major: `m.0[i][j]` is row `i`, column `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Matrix3(pub [[f64; 3]; 3]);

impl Matrix3 {
    pub const ZERO: Matrix3 = Matrix3([[0.0; 3]; 3]);
    pub const IDENTITY: Matrix3 = Matrix3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn diag(d: [f64; 3]) -> Self {
        Matrix3([[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]])
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Matrix3(std::array::from_fn(|i| std::array::from_fn(|j| m[j][i])))
    }

    pub fn scale(&self, k: f64) -> Self {
        Matrix3(self.0.map(|row| row.map(|x| x * k)))
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Determinant of the principal 2×2 submatrix on rows/columns `i < j`.
    pub fn minor2(&self, i: usize, j: usize) -> f64 {
        self.0[i][i] * self.0[j][j] - self.0[i][j] * self.0[j][i]
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// `m·D + D·mᵀ` for `D = diag(d)`; symmetric by construction.
    pub fn lyapunov_sum(&self, d: [f64; 3]) -> Self {
        let m = &self.0;
        Matrix3(std::array::from_fn(|i| {
            std::array::from_fn(|j| m[i][j] * d[j] + m[j][i] * d[i])
        }))
    }

    /// `x·M·xᵀ` for a row vector `x`.
    pub fn quadratic_form(&self, x: [f64; 3]) -> f64 {
        let mut acc = 0.0;
        for (i, row) in self.0.iter().enumerate() {
            for (j, mij) in row.iter().enumerate() {
                acc += x[i] * mij * x[j];
            }
        }
        acc
    }

    /// Eigenvalues of a symmetric matrix, ascending (trigonometric closed form).
    pub fn symmetric_eigenvalues(&self) -> [f64; 3] {
        let m = &self.0;
        let p1 = m[0][1].powi(2) + m[0][2].powi(2) + m[1][2].powi(2);
        if p1 == 0.0 {
            let mut e = [m[0][0], m[1][1], m[2][2]];
            e.sort_by(f64::total_cmp);
            return e;
        }
        let q = self.trace() / 3.0;
        let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        let b = (*self + Matrix3::IDENTITY.scale(-q)).scale(1.0 / p);
        let r = (b.det() / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let largest = q + 2.0 * p * phi.cos();
        let smallest = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
        let middle = 3.0 * q - largest - smallest;
        [smallest, middle, largest]
    }
}

impl Add for Matrix3 {
    type Output = Matrix3;

    fn add(self, rhs: Matrix3) -> Matrix3 {
        Matrix3(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])
        }))
    }
}

impl Mul for Matrix3 {
    type Output = Matrix3;

    fn mul(self, rhs: Matrix3) -> Matrix3 {
        Matrix3(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
        }))
    }
}

/// All seven principal minors of a 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinorSet {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m12: f64,
    pub m13: f64,
    pub m23: f64,
    pub m123: f64,
}

impl MinorSet {
    pub fn of(m: &Matrix3) -> Self {
        MinorSet {
            m1: m.get(0, 0),
            m2: m.get(1, 1),
            m3: m.get(2, 2),
            m12: m.minor2(0, 1),
            m13: m.minor2(0, 2),
            m23: m.minor2(1, 2),
            m123: m.det(),
        }
    }

    /// `(−1)^j · M` for each minor of order `j`, in the order m1, m2, m3, m12, m13, m23, m123.
    pub fn signed(&self) -> [f64; 7] {
        [
            -self.m1, -self.m2, -self.m3, self.m12, self.m13, self.m23, -self.m123,
        ]
    }

    pub fn all_signed_positive(&self) -> bool {
        self.signed().iter().all(|x| *x > 0.0)
    }

    /// Signed minors all non-negative with at least one positive of each order.
    pub fn in_class_p0_plus(&self) -> bool {
        let s = self.signed();
        s.iter().all(|x| *x >= 0.0)
            && s[..3].iter().any(|x| *x > 0.0)
            && s[3..6].iter().any(|x| *x > 0.0)
            && s[6] > 0.0
    }
}

/// Principal minors of `m` and whether every signed minor is strictly positive.
pub fn signed_principal_minors(m: &Matrix3) -> (MinorSet, bool) {
    let minors = MinorSet::of(m);
    (minors, minors.all_signed_positive())
}

/// Membership in class P (all signed principal minors strictly positive).
pub fn is_class_p(m: &Matrix3) -> bool {
    signed_principal_minors(m).1
}

/// Sylvester test: leading minors satisfy `Δ1 < 0`, `Δ2 > 0`, `Δ3 < 0` with
/// [`DEFINITENESS_MARGIN`].
pub fn is_negative_definite(sym: &Matrix3) -> Result<bool> {
    let scale = sym.max_abs().max(1.0);
    let asymmetry = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| (sym.get(i, j) - sym.get(j, i)).abs())
        .fold(0.0_f64, f64::max);
    if asymmetry.is_nan() || asymmetry > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let d1 = sym.get(0, 0);
    let d2 = sym.minor2(0, 1);
    let d3 = sym.det();
    Ok(d1 < -DEFINITENESS_MARGIN && d2 > DEFINITENESS_MARGIN && d3 < -DEFINITENESS_MARGIN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_minors_of_identities() {
        let (minors, ok) = signed_principal_minors(&Matrix3::IDENTITY.scale(-1.0));
        assert!(ok);
        assert!(minors.signed().iter().all(|x| *x == 1.0));
        let (minors, ok) = signed_principal_minors(&Matrix3::IDENTITY);
        assert!(!ok);
        assert_eq!(&minors.signed()[..3], &[-1.0, -1.0, -1.0]);
    }

    #[test]
    fn class_p_edge_cases() {
        assert!(is_class_p(&Matrix3::IDENTITY.scale(-1.0)));
        assert!(!is_class_p(&Matrix3::ZERO));
        assert!(!is_class_p(&Matrix3::diag([1.0, -1.0, -1.0])));
    }

    #[test]
    fn sylvester_examples() {
        assert!(is_negative_definite(&Matrix3::IDENTITY.scale(-1.0)).unwrap());
        assert!(!is_negative_definite(&Matrix3::diag([-1.0, -1.0, 0.0])).unwrap());
        let skew = Matrix3([[-1.0, 0.5, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]);
        assert!(matches!(
            is_negative_definite(&skew),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn eigenvalues_of_known_matrix() {
        // [[2,1,0],[1,2,0],[0,0,5]] has eigenvalues 1, 3, 5
        let m = Matrix3([[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]]);
        let e = m.symmetric_eigenvalues();
        for (x, y) in e.iter().zip([1.0, 3.0, 5.0]) {
            assert!((x - y).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn lyapunov_sum_is_md_plus_dmt() {
        let m = Matrix3([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 10.0]]);
        let d = [0.5, 2.0, 3.0];
        let expected = m * Matrix3::diag(d) + Matrix3::diag(d) * m.transpose();
        assert_eq!(m.lyapunov_sum(d), expected);
    }
}
