//! Canonical forms `[[z^{j1}, p], [0, z^{j2}]]`.
//!
//! With the gauge convention `T' = H_V · T · H_U⁻¹`, an off-diagonal
//! monomial `z^l u^i` can be absorbed into a `U`-side unipotent when
//! `l ≥ j1` and into a `V`-side unipotent when `l ≤ k·i + j2`. What survives
//! is the monomial window `{(i, l) : i ≥ 1, k·i + j2 + 1 ≤ l ≤ j1 − 1}`.

use std::collections::BTreeMap;

use crate::algebra::{GaussianRational, LaurentPoly, Mat2, Monomial};
use crate::certificate::{CertificateError, CongruenceOrder, GaugeCertificate};
use crate::splitting::{birkhoff_factorize, SplittingError};
use crate::transition::{SplittingType, TransitionMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CanonicalError {
    #[error("matrix is not upper triangular with monomial diagonal z^j1, z^j2 (j1 >= j2)")]
    NotSieveShape,
    #[error("monomial z^{0} with i = 0 cannot be removed; the diagonal is not the splitting type")]
    SplittingMismatch(i64),
    #[error("coefficient at (i={0}, l={1}) lies outside the window")]
    OutsideWindow(u32, i64),
    #[error(transparent)]
    Splitting(#[from] SplittingError),
    #[error("internal certificate check failed: {0}")]
    Certificate(#[from] CertificateError),
}

/// The pairs `(i, l)` with `i ≥ 1` and `k·i + j2 + 1 ≤ l ≤ j1 − 1`, ordered
/// by `i` and then `l`.
pub fn monomial_window(j1: i64, j2: i64, k: u32) -> Vec<(u32, i64)> {
    let k = i64::from(k.max(1));
    let mut out = Vec::new();
    let mut i = 1i64;
    while k * i + j2 + 1 <= j1 - 1 {
        for l in (k * i + j2 + 1)..=(j1 - 1) {
            out.push((i as u32, l));
        }
        i += 1;
    }
    out
}

pub fn param_space_dim(j1: i64, j2: i64, k: u32) -> usize {
    monomial_window(j1, j2, k).len()
}

/// Largest `u`-degree occurring in the window: `⌊(j1 − j2 − 2)/k⌋`, or 0.
pub fn window_depth(j1: i64, j2: i64, k: u32) -> u32 {
    let span = j1 - j2 - 2;
    if span < 0 {
        0
    } else {
        (span / i64::from(k.max(1))) as u32
    }
}

pub fn in_window(split: SplittingType, k: u32, i: u32, l: i64) -> bool {
    i >= 1 && i64::from(k) * i64::from(i) + split.j2 < l && l < split.j1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    k: u32,
    split: SplittingType,
    coeffs: BTreeMap<(u32, i64), GaussianRational>,
}

impl CanonicalForm {
    pub fn new(
        k: u32,
        split: SplittingType,
        coeffs: impl IntoIterator<Item = ((u32, i64), GaussianRational)>,
    ) -> Result<Self, CanonicalError> {
        let mut map = BTreeMap::new();
        for ((i, l), c) in coeffs {
            if !in_window(split, k, i, l) {
                return Err(CanonicalError::OutsideWindow(i, l));
            }
            if !c.is_zero() {
                map.insert((i, l), c);
            }
        }
        Ok(CanonicalForm { k, split, coeffs: map })
    }

    /// Reads `p` as a polynomial `Σ p_{il} z^l u^i`.
    pub fn from_poly(k: u32, split: SplittingType, p: &LaurentPoly) -> Result<Self, CanonicalError> {
        Self::new(k, split, p.terms().map(|(m, c)| ((m.u, m.z), c.clone())))
    }

    /// Coordinates in [`monomial_window`] order.
    pub fn from_window_vector(
        k: u32,
        split: SplittingType,
        w: &[GaussianRational],
    ) -> Result<Self, CanonicalError> {
        let window = monomial_window(split.j1, split.j2, k);
        assert_eq!(window.len(), w.len(), "window vector has the wrong length");
        Self::new(k, split, window.into_iter().zip(w.iter().cloned()))
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn split(&self) -> SplittingType {
        self.split
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, i64), GaussianRational> {
        &self.coeffs
    }

    pub fn window_vector(&self) -> Vec<GaussianRational> {
        monomial_window(self.split.j1, self.split.j2, self.k)
            .into_iter()
            .map(|key| self.coeffs.get(&key).cloned().unwrap_or_else(GaussianRational::zero))
            .collect()
    }

    pub fn p(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.coeffs.iter().map(|(&(i, l), c)| (Monomial::new(l, i), c.clone())),
        )
    }

    pub fn is_split(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::upper(self.split.j1, self.p(), self.split.j2)
    }

    pub fn transition(&self) -> TransitionMatrix {
        TransitionMatrix::validate(self.matrix(), self.k).expect("triangular with unit diagonal")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub form: CanonicalForm,
    pub certificate: GaugeCertificate,
}

fn sieve_shape(m: &Mat2) -> Option<(i64, i64)> {
    if !m.get(1, 0).is_zero() {
        return None;
    }
    let (c1, j1, u1) = m.get(0, 0).as_monomial()?;
    let (c2, j2, u2) = m.get(1, 1).as_monomial()?;
    (c1.is_one() && c2.is_one() && u1 == 0 && u2 == 0 && j1 >= j2).then_some((j1, j2))
}

/// Splits `q` into the `U`-absorbable part, the `V`-absorbable part and the
/// kept part.
fn sieve_split(q: &LaurentPoly, split: SplittingType, k: u32) -> (LaurentPoly, LaurentPoly, LaurentPoly) {
    let mut to_u = LaurentPoly::zero();
    let mut to_v = LaurentPoly::zero();
    let mut kept = LaurentPoly::zero();
    for (m, c) in q.terms() {
        if m.z >= split.j1 {
            to_u.add_term(*m, c);
        } else if m.z <= i64::from(k) * i64::from(m.u) + split.j2 {
            to_v.add_term(*m, c);
        } else {
            kept.add_term(*m, c);
        }
    }
    (to_u, to_v, kept)
}

fn unipotent_upper(x: LaurentPoly) -> Mat2 {
    Mat2::new(LaurentPoly::one(), x, LaurentPoly::zero(), LaurentPoly::one())
}

fn unipotent_lower(x: LaurentPoly) -> Mat2 {
    Mat2::new(LaurentPoly::one(), LaurentPoly::zero(), x, LaurentPoly::one())
}

/// Removes every off-diagonal monomial outside the window of
/// `[[z^{j1}, q], [0, z^{j2}]]` with two exact unipotent gauges.
pub fn sieve_reduce(t: &TransitionMatrix) -> Result<Reduction, CanonicalError> {
    let m = t.matrix();
    let (j1, j2) = sieve_shape(m).ok_or(CanonicalError::NotSieveShape)?;
    let split = SplittingType::new(j1, j2);
    let k = t.k();
    let (to_u, to_v, kept) = sieve_split(m.get(0, 1), split, k);
    if let Some((mono, _)) = kept.terms().find(|(m, _)| m.u == 0) {
        return Err(CanonicalError::SplittingMismatch(mono.z));
    }
    let h_u = unipotent_upper(to_u.shift(-j1, 0));
    let h_v = unipotent_upper(-to_v.shift(-j2, 0));
    let form = CanonicalForm::from_poly(k, split, &kept)?;
    let certificate = GaugeCertificate { k, h_u, h_v, order: CongruenceOrder::Exact };
    certificate.verify(m, &form.matrix())?;
    Ok(Reduction { form, certificate })
}

/// Jet order used by [`full_reduce`] when no override is given.
pub fn default_umax(t: &TransitionMatrix, split: SplittingType) -> u32 {
    window_depth(split.j1, split.j2, t.k()).max(t.max_u())
}

/// Reduces an arbitrary validated transition matrix to canonical form.
///
/// Step A diagonalizes `T|_{u=0}` by a Birkhoff factorization. Step B removes,
/// order by order in `u`, the lower-left entry, the diagonal perturbation and
/// the removable upper-right monomials, recording window monomials as `p`.
/// The certificate holds modulo `u^{N+1}` with `N = umax` (or the default),
/// and is promoted to exact when the exact identity happens to hold.
pub fn full_reduce(t: &TransitionMatrix, umax: Option<u32>) -> Result<Reduction, CanonicalError> {
    let k = t.k();
    let fac = birkhoff_factorize(&t.restrict_to_ell())?;
    let split = fac.split;
    let n = umax.unwrap_or_else(|| default_umax(t, split));
    let (j1, j2) = (split.j1, split.j2);

    let h_u_inv = fac.h_u.inverse_laurent().expect("constant determinant");
    let mut cur = (&(&fac.h_v * t.matrix()) * &h_u_inv).truncate_u(n);
    let mut cert_u = fac.h_u.clone();
    let mut cert_v = fac.h_v.clone();
    let mut kept = LaurentPoly::zero();

    let apply = |cur: &mut Mat2, g_u: Mat2, g_v: Mat2, cert_u: &mut Mat2, cert_v: &mut Mat2| {
        let g_u_inv = g_u.jet_inverse(n).expect("jet unit");
        *cur = g_v.mul_trunc(cur, n).mul_trunc(&g_u_inv, n);
        *cert_u = g_u.mul_trunc(cert_u, n);
        *cert_v = g_v.mul_trunc(cert_v, n);
    };

    for r in 1..=n {
        // lower-left
        let x21 = cur.get(1, 0).u_coefficient(r);
        if !x21.is_zero() {
            let alpha = x21.filter(|m| m.z >= j2).shift(-j2, r);
            let beta = -x21.filter(|m| m.z < j2).shift(-j1, r);
            apply(&mut cur, unipotent_lower(alpha), unipotent_lower(beta), &mut cert_u, &mut cert_v);
        }
        // diagonal: the (1,1) perturbation is split between the two charts,
        // and the (2,2) one follows from the determinant
        let x11 = cur.get(0, 0).u_coefficient(r);
        if !x11.is_zero() {
            let f = x11.shift(-j1, 0);
            let f_u = f.filter(|m| m.z >= 0).shift(0, r);
            let f_v = f.filter(|m| m.z < 0).shift(0, r);
            let one = LaurentPoly::one();
            let a = &one + &f_u;
            let b = &one + &f_v;
            let g_u = Mat2::diag(a.clone(), a.jet_inverse(n).expect("unit"));
            let g_v = Mat2::diag(b.jet_inverse(n).expect("unit"), b);
            apply(&mut cur, g_u, g_v, &mut cert_u, &mut cert_v);
        }
        // upper-right
        let x12 = cur.get(0, 1).u_coefficient(r).shift(0, r);
        let (to_u, to_v, window) = sieve_split(&x12, split, k);
        if !to_u.is_zero() || !to_v.is_zero() {
            let g_u = unipotent_upper(to_u.shift(-j1, 0));
            let g_v = unipotent_upper(-to_v.shift(-j2, 0));
            apply(&mut cur, g_u, g_v, &mut cert_u, &mut cert_v);
        }
        kept = &kept + &window;
        debug_assert!(cur.get(1, 0).u_coefficient(r).is_zero());
        debug_assert!(cur.get(0, 0).u_coefficient(r).is_zero());
        debug_assert!(cur.get(1, 1).u_coefficient(r).is_zero());
    }

    let form = CanonicalForm::from_poly(k, split, &kept)?;
    let target = form.matrix();
    let exact = GaugeCertificate { k, h_u: cert_u.clone(), h_v: cert_v.clone(), order: CongruenceOrder::Exact };
    if exact.verify(t.matrix(), &target).is_ok() {
        return Ok(Reduction { form, certificate: exact });
    }
    let certificate = GaugeCertificate { k, h_u: cert_u, h_v: cert_v, order: CongruenceOrder::UpTo(n) };
    certificate.verify(t.matrix(), &target)?;
    Ok(Reduction { form, certificate })
}
