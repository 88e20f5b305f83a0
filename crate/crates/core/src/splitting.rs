//! Splitting type of a rank-2 bundle on `ℓ ≅ P¹` and its constructive
//! Birkhoff factorization.
//!
//! A transition matrix `M(z)` on `ℓ` is gauge-equivalent to
//! `diag(z^{j1}, z^{j2})`. Two independent routes compute `(j1, j2)`:
//!
//! * [`h_dim`] counts pairs `(s_U, s_V)` of polynomial 2-vectors with
//!   `s_V(ξ) = z^n · M · s_U(z)`; for a diagonal matrix this is
//!   `Σᵢ max(0, 1 − n − jᵢ)`, so `j2 = −max{n : h_dim(M, n) > 0}`.
//! * [`birkhoff_factorize`] assembles frames out of those sections and
//!   returns `(H_U, H_V)` with `H_V · M · H_U⁻¹ = diag(z^{j1}, z^{j2})`.

use std::collections::BTreeMap;

use crate::algebra::linalg::{nullspace, SparseRow};
use crate::algebra::{GaussianRational, LaurentPoly, Mat2, Monomial};
use crate::charts::{mat_holomorphic_u, mat_holomorphic_v};
use crate::transition::SplittingType;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplittingError {
    #[error("matrix depends on u; restrict to the zero section first")]
    DependsOnU,
    #[error("determinant {0} is not of the form c·z^d")]
    NotInvertible(LaurentPoly),
    #[error("no sections found within the twist window |n| <= {0}")]
    SearchExhausted(i64),
    #[error("Birkhoff factorization failed: {0}")]
    FactorizationFailed(String),
}

/// A basis of the global sections of the twisted bundle, recorded by their
/// `U`-side vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSpace {
    pub twist: i64,
    pub basis: Vec<[LaurentPoly; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BirkhoffFactorization {
    pub h_u: Mat2,
    pub h_v: Mat2,
    pub split: SplittingType,
}

impl BirkhoffFactorization {
    /// Re-checks `H_V · M · H_U⁻¹ = diag(z^{j1}, z^{j2})` and the chart and
    /// determinant conditions.
    pub fn verify(&self, m: &Mat2) -> bool {
        let constant_det = |h: &Mat2| h.det().as_constant().is_some_and(|c| !c.is_zero());
        if !constant_det(&self.h_u) || !constant_det(&self.h_v) {
            return false;
        }
        if !mat_holomorphic_u(&self.h_u) || !mat_holomorphic_v(&self.h_v, 1) {
            return false;
        }
        if self.h_u.max_u().is_some_and(|u| u > 0) || self.h_v.max_u().is_some_and(|u| u > 0) {
            return false;
        }
        let Some(h_u_inv) = self.h_u.inverse_laurent() else { return false };
        &(&self.h_v * m) * &h_u_inv == self.split.diagonal()
    }
}

fn det_unit(m: &Mat2) -> Result<(GaussianRational, i64), SplittingError> {
    if m.max_u().is_some_and(|u| u > 0) {
        return Err(SplittingError::DependsOnU);
    }
    let det = m.det();
    match det.as_monomial() {
        Some((c, d, 0)) => Ok((c, d)),
        _ => Err(SplittingError::NotInvertible(det)),
    }
}

/// Basis of sections of twist `n`.
///
/// Any solution has `s_U = z^{-n} M⁻¹ s_V` with `s_V` polynomial in `ξ`, so
/// `deg s_U ≤ max_z(adj M) − d − n`; the linear system below is therefore
/// complete.
pub fn sections(m: &Mat2, n: i64) -> Result<SectionSpace, SplittingError> {
    let (_, d) = det_unit(m)?;
    let adj_max = m.adjugate().max_z().unwrap_or(i64::MIN / 4);
    let bound = adj_max - d - n;
    if bound < 0 {
        return Ok(SectionSpace { twist: n, basis: Vec::new() });
    }
    let width = (bound + 1) as usize;
    let col = |comp: usize, a: i64| comp * width + a as usize;

    // rows keyed by (component, exponent); only positive exponents constrain
    let mut rows: BTreeMap<(usize, i64), SparseRow> = BTreeMap::new();
    for r in 0..2 {
        for c in 0..2 {
            for (mono, coef) in m.get(r, c).terms() {
                for a in 0..=bound {
                    let e = mono.z + a + n;
                    if e > 0 {
                        let row = rows.entry((r, e)).or_default();
                        let entry = row.entry(col(c, a)).or_default();
                        *entry += coef;
                    }
                }
            }
        }
    }
    let basis = nullspace(2 * width, rows.into_values())
        .into_iter()
        .map(|v| {
            let mut s = [LaurentPoly::zero(), LaurentPoly::zero()];
            for (idx, coef) in v {
                let comp = idx / width;
                let a = (idx % width) as i64;
                s[comp].add_term(Monomial::new(a, 0), &coef);
            }
            s
        })
        .collect();
    Ok(SectionSpace { twist: n, basis })
}

/// Dimension of the section space of twist `n`.
pub fn h_dim(m: &Mat2, n: i64) -> Result<usize, SplittingError> {
    Ok(sections(m, n)?.basis.len())
}

/// Closed form of [`h_dim`] for `diag(z^{j1}, z^{j2})`.
pub fn h_dim_split(split: SplittingType, n: i64) -> usize {
    [split.j1, split.j2].iter().map(|&j| (1 - n - j).max(0) as usize).sum()
}

/// Largest twist examined: `max |e_z| + 2`.
pub fn twist_bound(m: &Mat2) -> i64 {
    m.max_abs_z() + 2
}

pub fn splitting_type(m: &Mat2) -> Result<SplittingType, SplittingError> {
    let (_, d) = det_unit(m)?;
    let bound = twist_bound(m);
    for n in (-bound..=bound).rev() {
        if h_dim(m, n)? > 0 {
            let j2 = -n;
            return Ok(SplittingType::new(d - j2, j2));
        }
    }
    Err(SplittingError::SearchExhausted(bound))
}

fn column_matrix(c1: &[LaurentPoly; 2], c2: &[LaurentPoly; 2]) -> Mat2 {
    Mat2::new(c1[0].clone(), c2[0].clone(), c1[1].clone(), c2[1].clone())
}

/// Factors `M = H_V⁻¹ · diag(z^{j1}, z^{j2}) · H_U`.
///
/// The columns of `H_U⁻¹` are sections of twists `−j1` and `−j2`; any pair
/// with nonzero frame determinant works because that determinant is both a
/// polynomial in `z` and (up to the constant `c`) a polynomial in `ξ`.
pub fn birkhoff_factorize(m: &Mat2) -> Result<BirkhoffFactorization, SplittingError> {
    let (c, _) = det_unit(m)?;
    let split = splitting_type(m)?;
    let low = sections(m, -split.j2)?;
    let high = sections(m, -split.j1)?;
    let mut frame = None;
    'outer: for h2 in &low.basis {
        for h1 in &high.basis {
            let f = column_matrix(h1, h2);
            if let Some(det) = f.det().as_constant() {
                if !det.is_zero() {
                    // normalise to det = 1
                    let inv = det.inv().expect("nonzero");
                    let h1 = [h1[0].scale(&inv), h1[1].scale(&inv)];
                    frame = Some((h1, h2.clone()));
                    break 'outer;
                }
            }
        }
    }
    let (h1, h2) = frame.ok_or_else(|| {
        SplittingError::FactorizationFailed(format!("no invertible frame for splitting {split}"))
    })?;
    let h_u_inv = column_matrix(&h1, &h2);
    let shift = |h: &[LaurentPoly; 2], j: i64| {
        let v0 = (m.get(0, 0) * &h[0] + m.get(0, 1) * &h[1]).shift(-j, 0);
        let v1 = (m.get(1, 0) * &h[0] + m.get(1, 1) * &h[1]).shift(-j, 0);
        [v0, v1]
    };
    let h_v_inv = column_matrix(&shift(&h1, split.j1), &shift(&h2, split.j2));
    let h_u = h_u_inv.inverse_laurent().ok_or_else(|| {
        SplittingError::FactorizationFailed("frame on U is not invertible".into())
    })?;
    let h_v = h_v_inv.inverse_laurent().ok_or_else(|| {
        SplittingError::FactorizationFailed("frame on V is not invertible".into())
    })?;
    let fac = BirkhoffFactorization { h_u, h_v, split };
    debug_assert!(!c.is_zero());
    if !fac.verify(m) {
        return Err(SplittingError::FactorizationFailed(
            "product identity did not verify".into(),
        ));
    }
    Ok(fac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::random_gauge_pair_on_ell;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(e: [&str; 4]) -> Mat2 {
        Mat2::parse(e).unwrap()
    }

    /// Brute force: all pairs (s_U, s_V) with bounded degrees, counted by
    /// solving the full linear system with both sides as unknowns.
    fn h_dim_brute(mat: &Mat2, n: i64, deg: i64) -> usize {
        // unknowns: s_U coefficients a_{c,0..deg}, s_V coefficients b_{r,0..deg} (in ξ)
        let w = (deg + 1) as usize;
        let ncols = 4 * w;
        let mut rows: BTreeMap<(usize, i64), SparseRow> = BTreeMap::new();
        for r in 0..2 {
            for c in 0..2 {
                for (mono, coef) in mat.get(r, c).terms() {
                    for a in 0..=deg {
                        let e = mono.z + a + n;
                        *rows.entry((r, e)).or_default().entry(c * w + a as usize).or_default() +=
                            coef;
                    }
                }
            }
            for b in 0..=deg {
                *rows.entry((r, -b)).or_default().entry(2 * w + r * w + b as usize).or_default() -=
                    &GaussianRational::one();
            }
        }
        nullspace(ncols, rows.into_values()).len()
    }

    #[test]
    fn h_dim_examples() {
        assert_eq!(h_dim(&Mat2::diag_z(2, -2), 0).unwrap(), 3);
        assert_eq!(h_dim(&m(["z", "1", "0", "z^-1"]), 0).unwrap(), 2);
        assert_eq!(h_dim(&Mat2::identity(), 1).unwrap(), 0);
    }

    #[test]
    fn h_dim_matches_brute_force() {
        let cases = [
            m(["z", "1", "0", "z^-1"]),
            m(["z^3", "z", "0", "z^-3"]),
            m(["z^2", "z^-1 + 3", "0", "z^-1"]),
            Mat2::diag_z(4, -1),
        ];
        for mat in &cases {
            for n in -6..=6 {
                assert_eq!(h_dim(mat, n).unwrap(), h_dim_brute(mat, n, 14), "{mat} n={n}");
            }
        }
    }

    #[test]
    fn h_dim_closed_form_on_diagonals() {
        for j1 in -4..=4 {
            for j2 in -4..=j1 {
                let split = SplittingType::new(j1, j2);
                for n in -8..=8 {
                    assert_eq!(h_dim(&split.diagonal(), n).unwrap(), h_dim_split(split, n));
                }
            }
        }
    }

    #[test]
    fn splitting_examples() {
        for j in 0..=6 {
            assert_eq!(
                splitting_type(&Mat2::diag_z(j, -j)).unwrap(),
                SplittingType::symmetric(j)
            );
        }
        assert_eq!(splitting_type(&m(["z", "1", "0", "z^-1"])).unwrap(), SplittingType::new(0, 0));
        assert_eq!(
            splitting_type(&m(["z^3", "z", "0", "z^-3"])).unwrap(),
            SplittingType::new(1, -1)
        );
    }

    #[test]
    fn splitting_rejects_bad_input() {
        assert!(matches!(
            splitting_type(&m(["z", "u", "0", "1"])),
            Err(SplittingError::DependsOnU)
        ));
        assert!(matches!(
            splitting_type(&m(["z", "1", "1", "z"])),
            Err(SplittingError::NotInvertible(_))
        ));
    }

    #[test]
    fn factorization_examples() {
        let f = birkhoff_factorize(&Mat2::diag_z(2, -2)).unwrap();
        assert_eq!((f.h_u, f.h_v), (Mat2::identity(), Mat2::identity()));

        let f = birkhoff_factorize(&m(["z", "1", "0", "z^-1"])).unwrap();
        assert_eq!(f.split, SplittingType::new(0, 0));
        assert_eq!(f.h_u, m(["1", "0", "z", "1"]));
        // H_V⁻¹ = [[0, 1], [−1, ξ]]
        assert_eq!(f.h_v.inverse_laurent().unwrap(), m(["0", "1", "-1", "z^-1"]));
    }

    #[test]
    fn scramble_and_recover() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (h_u, h_v) = random_gauge_pair_on_ell(&mut rng, 2);
            let scrambled =
                &(&h_v.inverse_laurent().unwrap() * &Mat2::diag_z(3, -1)) * &h_u;
            let f = birkhoff_factorize(&scrambled).unwrap();
            assert_eq!(f.split, SplittingType::new(3, -1));
            assert!(f.verify(&scrambled));
        }
    }

    #[test]
    fn h_dim_is_monotone_and_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let (h_u, h_v) = random_gauge_pair_on_ell(&mut rng, 2);
            let mat = &(&h_v * &Mat2::diag_z(2, -1)) * &h_u.inverse_laurent().unwrap();
            let split = splitting_type(&mat).unwrap();
            assert_eq!(split.degree(), 1);
            let mut prev = usize::MAX;
            for n in -6..=6 {
                let h = h_dim(&mat, n).unwrap();
                assert!(h <= prev);
                assert_eq!(h, h_dim_split(split, n));
                prev = h;
            }
        }
    }
}
