//! Transition matrices of rank-2 bundles on the two-chart space.
//!
//! Gauge convention used throughout the crate: `T' = H_V · T · H_U⁻¹`, with
//! `H_U` holomorphic on `U` and `H_V` holomorphic on `V`.

use std::fmt;

use crate::algebra::{GaussianRational, LaurentPoly, Mat2};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransitionError {
    #[error("determinant {0} is not a unit c·z^d on the overlap")]
    NotInvertibleOnOverlap(LaurentPoly),
    #[error("blow-down degree k must be at least 1")]
    InvalidDegree,
}

/// Splitting pair `(j1, j2)` with `j1 ≥ j2`; labels `O(j1) ⊕ O(j2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplittingType {
    pub j1: i64,
    pub j2: i64,
}

impl SplittingType {
    /// Orders the pair so that `j1 ≥ j2`.
    pub fn new(a: i64, b: i64) -> Self {
        SplittingType { j1: a.max(b), j2: a.min(b) }
    }

    /// `O(j) ⊕ O(−j)`.
    pub fn symmetric(j: i64) -> Self {
        Self::new(j, -j)
    }

    pub fn degree(&self) -> i64 {
        self.j1 + self.j2
    }

    pub fn diagonal(&self) -> Mat2 {
        Mat2::diag_z(self.j1, self.j2)
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.j1, self.j2)
    }
}

/// A validated transition matrix from `U` to `V` with `det = c·z^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    k: u32,
    m: Mat2,
    det_coeff: GaussianRational,
    det_degree: i64,
}

impl TransitionMatrix {
    pub fn validate(m: Mat2, k: u32) -> Result<Self, TransitionError> {
        if k == 0 {
            return Err(TransitionError::InvalidDegree);
        }
        let det = m.det();
        match det.as_monomial() {
            Some((c, d, 0)) => Ok(TransitionMatrix { k, m, det_coeff: c, det_degree: d }),
            _ => Err(TransitionError::NotInvertibleOnOverlap(det)),
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn into_matrix(self) -> Mat2 {
        self.m
    }

    /// `(c, d)` with `det = c·z^d`.
    pub fn det_unit(&self) -> (&GaussianRational, i64) {
        (&self.det_coeff, self.det_degree)
    }

    pub fn det_degree(&self) -> i64 {
        self.det_degree
    }

    /// Restriction to the zero section `ℓ = {u = 0}`.
    pub fn restrict_to_ell(&self) -> Mat2 {
        self.m.at_u_zero()
    }

    pub fn max_u(&self) -> u32 {
        self.m.max_u().unwrap_or(0)
    }

    /// `H_V · T · H_U⁻¹` for exactly invertible gauges (det constant).
    pub fn gauge(&self, h_u: &Mat2, h_v: &Mat2) -> Option<Self> {
        let h_u_inv = h_u.inverse_laurent()?;
        Self::validate(&(h_v * &self.m) * &h_u_inv, self.k).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validate_examples() {
        let t = TransitionMatrix::validate(Mat2::diag_z(2, -2), 1).unwrap();
        assert_eq!(t.det_unit(), (&GaussianRational::one(), 0));

        let bad = Mat2::parse(["z", "u", "u", "z"]).unwrap();
        assert_eq!(
            TransitionMatrix::validate(bad, 1),
            Err(TransitionError::NotInvertibleOnOverlap(LaurentPoly::parse("z^2 - u^2").unwrap()))
        );

        let m = Mat2::parse(["z^2", "u", "0", "z^-2"]).unwrap();
        let t = TransitionMatrix::validate(m, 1).unwrap();
        assert_eq!(t.det_unit(), (&GaussianRational::one(), 0));

        // det = u: a monomial, but it vanishes on ℓ
        let deg = Mat2::parse(["u", "0", "0", "1"]).unwrap();
        assert!(TransitionMatrix::validate(deg, 1).is_err());
        assert!(TransitionMatrix::validate(Mat2::zero(), 1).is_err());
        assert_eq!(
            TransitionMatrix::validate(Mat2::identity(), 0),
            Err(TransitionError::InvalidDegree)
        );
    }

    #[test]
    fn restriction_examples() {
        let t = TransitionMatrix::validate(Mat2::parse(["z^2", "u + z", "0", "z^-2"]).unwrap(), 1)
            .unwrap();
        assert_eq!(t.restrict_to_ell(), Mat2::parse(["z^2", "z", "0", "z^-2"]).unwrap());

        let canonical = Mat2::upper(3, LaurentPoly::parse("u + z*u + 2*z^2*u^3").unwrap(), -3);
        let t = TransitionMatrix::validate(canonical, 1).unwrap();
        assert_eq!(t.restrict_to_ell(), Mat2::diag_z(3, -3));

        let t = TransitionMatrix::validate(Mat2::diag_z(1, -1), 1).unwrap();
        assert_eq!(t.restrict_to_ell(), Mat2::diag_z(1, -1));
    }

    #[test]
    fn validate_is_idempotent() {
        let m = Mat2::parse(["z^3", "z*u - u^2", "0", "5*z^-1"]).unwrap();
        let once = TransitionMatrix::validate(m, 2).unwrap();
        let twice = TransitionMatrix::validate(once.matrix().clone(), 2).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn restriction_commutes_with_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = random_mat(&mut rng, -3, 3, 3);
            let b = random_mat(&mut rng, -3, 3, 3);
            assert_eq!((&a * &b).at_u_zero(), &a.at_u_zero() * &b.at_u_zero());
        }
    }

    #[test]
    fn det_degree_is_gauge_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let k = 1 + (rand::Rng::gen_range(&mut rng, 0..2u32));
            let t = TransitionMatrix::validate(
                Mat2::upper(2, random_poly(&mut rng, -3, 4, 2), -1),
                k,
            )
            .unwrap();
            let (h_u, h_v) = random_gauge_pair(&mut rng, k, 2, 2);
            let g = t.gauge(&h_u, &h_v).expect("gauge stays valid");
            assert_eq!(g.det_degree(), t.det_degree());
        }
    }
}
