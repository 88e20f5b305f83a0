use std::fmt;
use std::ops::{Add, Mul, Sub};

use super::gaussian::GaussianRational;
use super::laurent::LaurentPoly;

/// A 2×2 matrix of Laurent polynomials, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Mat2 {
    pub e: [[LaurentPoly; 2]; 2],
}

impl Mat2 {
    pub fn new(a: LaurentPoly, b: LaurentPoly, c: LaurentPoly, d: LaurentPoly) -> Self {
        Mat2 { e: [[a, b], [c, d]] }
    }

    pub fn identity() -> Self {
        Self::diag(LaurentPoly::one(), LaurentPoly::one())
    }

    pub fn zero() -> Self {
        Mat2::default()
    }

    pub fn diag(a: LaurentPoly, d: LaurentPoly) -> Self {
        Self::new(a, LaurentPoly::zero(), LaurentPoly::zero(), d)
    }

    /// `diag(z^a, z^b)`.
    pub fn diag_z(a: i64, b: i64) -> Self {
        Self::diag(LaurentPoly::zu(a, 0), LaurentPoly::zu(b, 0))
    }

    /// `[[z^j1, q], [0, z^j2]]`.
    pub fn upper(j1: i64, q: LaurentPoly, j2: i64) -> Self {
        Self::new(LaurentPoly::zu(j1, 0), q, LaurentPoly::zero(), LaurentPoly::zu(j2, 0))
    }

    /// Parses four entries in row-major order.
    pub fn parse(entries: [&str; 4]) -> Result<Self, super::AlgebraError> {
        Ok(Self::new(
            LaurentPoly::parse(entries[0])?,
            LaurentPoly::parse(entries[1])?,
            LaurentPoly::parse(entries[2])?,
            LaurentPoly::parse(entries[3])?,
        ))
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.e[r][c]
    }

    pub fn entries(&self) -> impl Iterator<Item = &LaurentPoly> {
        self.e.iter().flatten()
    }

    pub fn map<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&LaurentPoly) -> LaurentPoly,
    {
        Mat2 {
            e: [
                [f(&self.e[0][0]), f(&self.e[0][1])],
                [f(&self.e[1][0]), f(&self.e[1][1])],
            ],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries().all(LaurentPoly::is_zero)
    }

    pub fn det(&self) -> LaurentPoly {
        &self.e[0][0] * &self.e[1][1] - &self.e[0][1] * &self.e[1][0]
    }

    /// `[[d, −b], [−c, a]]`, so that `M · adj(M) = det(M) · I`.
    pub fn adjugate(&self) -> Self {
        Mat2::new(
            self.e[1][1].clone(),
            -&self.e[0][1],
            -&self.e[1][0],
            self.e[0][0].clone(),
        )
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, f: &LaurentPoly) -> Self {
        self.map(|p| p * f)
    }

    pub fn truncate_u(&self, order: u32) -> Self {
        self.map(|p| p.truncate_u(order))
    }

    pub fn at_u_zero(&self) -> Self {
        self.map(LaurentPoly::at_u_zero)
    }

    pub fn u_coefficient(&self, i: u32) -> Self {
        self.map(|p| p.u_coefficient(i))
    }

    pub fn mul_trunc(&self, rhs: &Mat2, order: u32) -> Self {
        let mut out = Mat2::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.e[r][c] = self.e[r][0].mul_trunc(&rhs.e[0][c], order)
                    + self.e[r][1].mul_trunc(&rhs.e[1][c], order);
            }
        }
        out
    }

    /// Exact inverse when the determinant is a nonzero monomial `c z^d u^0`.
    pub fn inverse_laurent(&self) -> Option<Self> {
        let (c, d, u) = self.det().as_monomial()?;
        if u != 0 {
            return None;
        }
        let inv_det = LaurentPoly::monomial(c.inv()?, -d, 0);
        Some(self.adjugate().scale_poly(&inv_det))
    }

    /// Inverse in the jet ring modulo `u^{order+1}`; needs a determinant whose
    /// `u⁰` part is a nonzero monomial.
    pub fn jet_inverse(&self, order: u32) -> Option<Self> {
        let inv_det = self.det().jet_inverse(order)?;
        Some(self.adjugate().map(|p| p.mul_trunc(&inv_det, order)))
    }

    pub fn max_u(&self) -> Option<u32> {
        self.entries().filter_map(LaurentPoly::max_u).max()
    }

    pub fn max_z(&self) -> Option<i64> {
        self.entries().filter_map(LaurentPoly::max_z).max()
    }

    pub fn min_z(&self) -> Option<i64> {
        self.entries().filter_map(LaurentPoly::min_z).min()
    }

    /// Largest `|e_z|` over all entries.
    pub fn max_abs_z(&self) -> i64 {
        self.entries()
            .flat_map(|p| p.terms().map(|(m, _)| m.z.abs()))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1]
        )
    }
}

impl<'a> Mul<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: &'a Mat2) -> Mat2 {
        let mut out = Mat2::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.e[r][c] = &self.e[r][0] * &rhs.e[0][c] + &self.e[r][1] * &rhs.e[1][c];
            }
        }
        out
    }
}

impl<'a> Add<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn add(self, rhs: &'a Mat2) -> Mat2 {
        let mut out = self.clone();
        for r in 0..2 {
            for c in 0..2 {
                out.e[r][c] = &self.e[r][c] + &rhs.e[r][c];
            }
        }
        out
    }
}

impl<'a> Sub<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: &'a Mat2) -> Mat2 {
        let mut out = self.clone();
        for r in 0..2 {
            for c in 0..2 {
                out.e[r][c] = &self.e[r][c] - &rhs.e[r][c];
            }
        }
        out
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        &self * &rhs
    }
}
