//! Isomorphism oracle for local bundles.
//!
//! Solves `H_V · T = T' · H_U` for `H_U` holomorphic on `U`, modulo
//! `u^{N+1}`, by linear algebra on coefficient vectors: `H_U` is the unknown
//! and `H_V := T' · H_U · T⁻¹` is required to be holomorphic on `V`. An
//! isomorphism exists iff some solution has invertible `u⁰` part, and
//! `det H_U|_{u=0}` is a constant, so this is a quadratic form on the
//! solution space.
//!
//! By default both inputs are first brought to canonical form by
//! [`full_reduce`], the small canonical system is solved, and the three
//! certificates are composed; the result is verified against the original
//! matrices. [`IsoStrategy::Direct`] solves the system on the inputs as given.

use std::collections::BTreeMap;

use crate::algebra::linalg::{nullspace, Echelon, SparseRow};
use crate::algebra::{GaussianRational, LaurentPoly, Mat2, Monomial};
use crate::canonical::{full_reduce, window_depth, CanonicalError};
use crate::certificate::{CongruenceOrder, GaugeCertificate};
use crate::charts::monomial_holomorphic_v;
use crate::splitting::{splitting_type, SplittingError};
use crate::transition::TransitionMatrix;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IsoStrategy {
    #[default]
    Reduced,
    Direct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoBounds {
    /// Jet order `N`; defaults to the window depth or the largest `u`-degree.
    pub umax: Option<u32>,
    /// Cap on the `z`-degree slack of `H_U`; the default is the complete bound.
    pub zbound: Option<i64>,
    /// Re-run a negative answer at `N + 2`.
    pub stability: bool,
    pub strategy: IsoStrategy,
}

impl Default for IsoBounds {
    fn default() -> Self {
        IsoBounds { umax: None, zbound: None, stability: true, strategy: IsoStrategy::Reduced }
    }
}

impl IsoBounds {
    pub fn direct() -> Self {
        IsoBounds { strategy: IsoStrategy::Direct, ..IsoBounds::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    Isomorphic(GaugeCertificate),
    Distinct { certified: bool },
    Inconclusive,
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, IsoVerdict::Distinct { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsoError {
    #[error("blow-down degrees differ ({0} vs {1})")]
    DegreeMismatch(u32, u32),
    #[error(transparent)]
    Splitting(#[from] SplittingError),
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
    #[error("internal: candidate isomorphism failed verification")]
    CertificateFailed,
}

/// Solutions `H_U` of the bounded linear system, with the bounds used.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub order: u32,
    pub zspan: i64,
    /// Whether `zspan` is the provably sufficient bound.
    pub complete: bool,
    pub basis: Vec<Mat2>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn inverse(t: &TransitionMatrix) -> Mat2 {
    t.matrix().inverse_laurent().expect("validated determinant is a unit")
}

/// Jet order used when no override is given.
pub fn default_order(t: &TransitionMatrix, t2: &TransitionMatrix) -> Result<u32, IsoError> {
    let split = splitting_type(&t.restrict_to_ell())?;
    Ok(window_depth(split.j1, split.j2, t.k()).max(t.max_u()).max(t2.max_u()))
}

/// All `H_U` (mod `u^{N+1}`) with `T' · H_U · T⁻¹` holomorphic on `V`.
///
/// The `u^i` coefficient of `H_U = T'⁻¹ · H_V · T` has `z`-degree at most
/// `max_z(T'⁻¹) + k·i + max_z(T)`, so that slack is complete.
pub fn hom_space(
    t: &TransitionMatrix,
    t2: &TransitionMatrix,
    order: u32,
    zcap: Option<i64>,
) -> HomSpace {
    let k = t.k();
    let t_inv = inverse(t);
    let t2_inv = inverse(t2);
    let full = t2_inv.max_z().unwrap_or(0) + t.matrix().max_z().unwrap_or(0);
    let zspan = zcap.map_or(full, |c| c.min(full));
    let complete = zspan >= full;

    let mut unknowns: Vec<(usize, usize, Monomial)> = Vec::new();
    for r in 0..2 {
        for c in 0..2 {
            for i in 0..=order {
                let top = zspan + i64::from(k) * i64::from(i);
                for a in 0..=top {
                    unknowns.push((r, c, Monomial::new(a, i)));
                }
            }
        }
    }

    // products T'[a][r] · T⁻¹[c][b]
    let mut prod = BTreeMap::new();
    for a in 0..2 {
        for r in 0..2 {
            for c in 0..2 {
                for b in 0..2 {
                    let p = t2.matrix().get(a, r).mul_trunc(t_inv.get(c, b), order);
                    prod.insert((a, r, c, b), p);
                }
            }
        }
    }

    let mut rows: BTreeMap<(usize, usize, Monomial), SparseRow> = BTreeMap::new();
    for (idx, &(r, c, m)) in unknowns.iter().enumerate() {
        for a in 0..2 {
            for b in 0..2 {
                for (pm, coef) in prod[&(a, r, c, b)].terms() {
                    let mono = Monomial::new(pm.z + m.z, pm.u + m.u);
                    if mono.u > order || monomial_holomorphic_v(&mono, k) {
                        continue;
                    }
                    *rows.entry((a, b, mono)).or_default().entry(idx).or_default() += coef;
                }
            }
        }
    }

    let basis = nullspace(unknowns.len(), rows.into_values())
        .into_iter()
        .map(|v| {
            let mut h = Mat2::zero();
            for (idx, coef) in v {
                let (r, c, m) = unknowns[idx];
                h.e[r][c].add_term(m, &coef);
            }
            h
        })
        .collect();
    HomSpace { order, zspan, complete, basis }
}

fn det_constant(h: &Mat2) -> Option<GaussianRational> {
    h.at_u_zero().det().as_constant().filter(|c| !c.is_zero())
}

/// An element of the span with invertible `u⁰` part, if one exists.
///
/// `q(v) = det(Σ vₐ Pₐ)` with `Pₐ = Hₐ|_{u=0}` is a quadratic form; it
/// vanishes identically iff `q(eₐ) = 0` and the polarizations
/// `q(eₐ + e_b) − q(eₐ) − q(e_b)` vanish on a basis of the `Pₐ`.
pub fn find_invertible(basis: &[Mat2]) -> Option<Mat2> {
    let mut index: BTreeMap<(usize, i64), usize> = BTreeMap::new();
    let mut ech = Echelon::new(usize::MAX / 2);
    let mut chosen: Vec<(usize, Mat2)> = Vec::new();
    for (a, h) in basis.iter().enumerate() {
        let p = h.at_u_zero();
        if p.is_zero() {
            continue;
        }
        let mut row = SparseRow::new();
        for (e, poly) in p.entries().enumerate() {
            for (m, c) in poly.terms() {
                let next = index.len();
                let col = *index.entry((e, m.z)).or_insert(next);
                row.insert(col, c.clone());
            }
        }
        if ech.insert(row) {
            chosen.push((a, p));
        }
    }
    for (a, p) in &chosen {
        if det_constant(p).is_some() {
            return Some(basis[*a].clone());
        }
    }
    for (x, (a, pa)) in chosen.iter().enumerate() {
        for (b, pb) in &chosen[x + 1..] {
            if det_constant(&(pa + pb)).is_some() {
                return Some(&basis[*a] + &basis[*b]);
            }
        }
    }
    None
}

/// Builds and verifies the certificate for a solution `h_u`.
fn certify(
    t: &TransitionMatrix,
    t2: &TransitionMatrix,
    h_u: Mat2,
    order: u32,
) -> Result<GaugeCertificate, IsoError> {
    let h_v = t2.matrix().mul_trunc(&h_u, order).mul_trunc(&inverse(t), order);
    let k = t.k();
    let exact = GaugeCertificate { k, h_u: h_u.clone(), h_v: h_v.clone(), order: CongruenceOrder::Exact };
    if exact.verify(t.matrix(), t2.matrix()).is_ok() {
        return Ok(exact);
    }
    let cert = GaugeCertificate { k, h_u, h_v, order: CongruenceOrder::UpTo(order) };
    cert.verify(t.matrix(), t2.matrix()).map_err(|_| IsoError::CertificateFailed)?;
    Ok(cert)
}

/// Decides whether `T` and `T'` define isomorphic bundles near `ℓ`.
///
/// Differing determinant degrees or splitting types give a certified
/// `Distinct` immediately. Otherwise the hom space is solved at order `N`;
/// a negative answer is certified when the `z` bound is complete, and is
/// re-checked at order `N + 2` when `bounds.stability` is set.
pub fn are_isomorphic(
    t: &TransitionMatrix,
    t2: &TransitionMatrix,
    bounds: IsoBounds,
) -> Result<IsoVerdict, IsoError> {
    if t.k() != t2.k() {
        return Err(IsoError::DegreeMismatch(t.k(), t2.k()));
    }
    if t.det_degree() != t2.det_degree() {
        return Ok(IsoVerdict::Distinct { certified: true });
    }
    if splitting_type(&t.restrict_to_ell())? != splitting_type(&t2.restrict_to_ell())? {
        return Ok(IsoVerdict::Distinct { certified: true });
    }
    let order = match bounds.umax {
        Some(n) => n,
        None => default_order(t, t2)?,
    };
    match bounds.strategy {
        IsoStrategy::Direct => solve(t, t2, order, bounds),
        IsoStrategy::Reduced => {
            let r1 = full_reduce(t, Some(order))?;
            let r2 = full_reduce(t2, Some(order))?;
            let (c1, c2) = (r1.form.transition(), r2.form.transition());
            match solve(&c1, &c2, order, bounds)? {
                IsoVerdict::Isomorphic(mid) => {
                    let back = r2.certificate.inverse().ok_or(IsoError::CertificateFailed)?;
                    let cert = r1.certificate.then(&mid).then(&back);
                    cert.verify(t.matrix(), t2.matrix()).map_err(|_| IsoError::CertificateFailed)?;
                    Ok(IsoVerdict::Isomorphic(cert))
                }
                other => Ok(other),
            }
        }
    }
}

fn solve(
    t: &TransitionMatrix,
    t2: &TransitionMatrix,
    order: u32,
    bounds: IsoBounds,
) -> Result<IsoVerdict, IsoError> {
    let hs = hom_space(t, t2, order, bounds.zbound);
    if let Some(h_u) = find_invertible(&hs.basis) {
        return Ok(IsoVerdict::Isomorphic(certify(t, t2, h_u, order)?));
    }
    if !hs.complete {
        return Ok(IsoVerdict::Inconclusive);
    }
    if !bounds.stability {
        return Ok(IsoVerdict::Distinct { certified: false });
    }
    let deeper = IsoBounds { stability: false, ..bounds };
    match solve(t, t2, order + 2, deeper)? {
        IsoVerdict::Distinct { .. } => Ok(IsoVerdict::Distinct { certified: true }),
        other => Ok(other),
    }
}

/// Dimension of the jet endomorphism space of `T` at the default order.
pub fn endomorphism_dim(t: &TransitionMatrix) -> Result<usize, IsoError> {
    let order = default_order(t, t)?;
    Ok(hom_space(t, t, order, None).dim())
}

/// Convenience wrapper: `T = [[z^{j1}, p], [0, z^{j2}]]`.
pub fn upper_transition(j1: i64, p: LaurentPoly, j2: i64, k: u32) -> TransitionMatrix {
    TransitionMatrix::validate(Mat2::upper(j1, p, j2), k).expect("unit diagonal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_gauge_pair, random_nonzero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s).unwrap()
    }

    fn iso(a: &TransitionMatrix, b: &TransitionMatrix) -> IsoVerdict {
        are_isomorphic(a, b, IsoBounds::default()).unwrap()
    }

    #[test]
    fn scaling_is_an_isomorphism() {
        let base = p("u + 2*z*u - z*u^2");
        for lambda in [2, -3, 7] {
            let a = upper_transition(2, base.clone(), -2, 1);
            let b = upper_transition(2, base.scale(&GaussianRational::from_int(lambda)), -2, 1);
            assert!(iso(&a, &b).is_isomorphic());
        }
    }

    #[test]
    fn split_versus_nonsplit() {
        let a = upper_transition(2, LaurentPoly::zero(), -2, 1);
        let b = upper_transition(2, p("u"), -2, 1);
        assert_eq!(iso(&a, &b), IsoVerdict::Distinct { certified: true });
        // the endomorphism spaces already differ
        assert_ne!(endomorphism_dim(&a).unwrap(), endomorphism_dim(&b).unwrap());
    }

    #[test]
    fn factorization_example_is_trivial() {
        let a = TransitionMatrix::validate(Mat2::parse(["z", "1", "0", "z^-1"]).unwrap(), 1).unwrap();
        let b = TransitionMatrix::validate(Mat2::identity(), 1).unwrap();
        assert!(iso(&a, &b).is_isomorphic());
    }

    #[test]
    fn different_splitting_is_distinct() {
        let a = TransitionMatrix::validate(Mat2::diag_z(1, -1), 1).unwrap();
        let b = TransitionMatrix::validate(Mat2::identity(), 1).unwrap();
        assert_eq!(iso(&a, &b), IsoVerdict::Distinct { certified: true });
    }

    #[test]
    fn capped_bounds_are_inconclusive_without_witness() {
        let a = upper_transition(2, LaurentPoly::zero(), -2, 1);
        let b = upper_transition(2, p("u"), -2, 1);
        let bounds = IsoBounds { zbound: Some(0), ..IsoBounds::default() };
        assert_eq!(are_isomorphic(&a, &b, bounds).unwrap(), IsoVerdict::Inconclusive);
    }

    #[test]
    fn equivalence_relation_on_gauge_orbits() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let q = LaurentPoly::from_terms([
                (Monomial::new(0, 1), random_nonzero(&mut rng)),
                (Monomial::new(1, 1), random_nonzero(&mut rng)),
                (Monomial::new(1, 2), random_nonzero(&mut rng)),
            ]);
            let t = upper_transition(2, q, -2, 1);
            let mut orbit = Vec::new();
            for _ in 0..2 {
                let (h_u, h_v) = random_gauge_pair(&mut rng, 1, 1, 1);
                let g = t.gauge(&h_u, &h_v).unwrap();
                orbit.push(g);
            }
            let (a, b) = (&orbit[0], &orbit[1]);
            let IsoVerdict::Isomorphic(c1) = iso(&t, a) else { panic!("t ~ a") };
            let IsoVerdict::Isomorphic(c2) = iso(a, b) else { panic!("a ~ b") };
            assert!(iso(&t, &t).is_isomorphic());
            // symmetry and transitivity through the certificates themselves
            let order = c1.order.min(c2.order).finite().unwrap_or(4);
            c1.truncated(order).inverse().unwrap().verify(a.matrix(), t.matrix()).unwrap();
            c1.then(&c2).verify(t.matrix(), b.matrix()).unwrap();
            let _ = rng.gen::<u8>();
        }
    }
}
