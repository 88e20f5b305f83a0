//! The two coordinate charts of the total space of `O(−k)` over `P¹`.
//!
//! `U = {(z, u)}` and `V = {(ξ, v)}` glue along `z ≠ 0` by
//! `(ξ, v) = (z⁻¹, z^k u)`; `k = 1` is the blow-up of the plane at a point.
//! Polynomials in `(ξ, v)` reuse [`LaurentPoly`], reading its `z`-slot as the
//! `ξ`-exponent and its `u`-slot as the `v`-exponent.

use crate::algebra::{LaurentPoly, Mat2, Monomial};

/// A Laurent polynomial in `(z, u)` together with the blow-down degree `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartExpr {
    k: u32,
    body: LaurentPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("blow-down degree k must be at least 1")]
pub struct InvalidDegree;

impl ChartExpr {
    pub fn new(k: u32, body: LaurentPoly) -> Result<Self, InvalidDegree> {
        if k == 0 {
            return Err(InvalidDegree);
        }
        Ok(ChartExpr { k, body })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn body(&self) -> &LaurentPoly {
        &self.body
    }

    pub fn to_other_chart(&self) -> LaurentPoly {
        to_v_coords(&self.body, self.k)
    }

    pub fn is_holomorphic_u(&self) -> bool {
        is_holomorphic_u(&self.body)
    }

    pub fn is_holomorphic_v(&self) -> bool {
        is_holomorphic_v(&self.body, self.k)
    }
}

/// `z^l u^i ↦ ξ^{k·i − l} v^i`.
pub fn to_v_coords(f: &LaurentPoly, k: u32) -> LaurentPoly {
    f.map_monomials(|m| Monomial::new(i64::from(k) * i64::from(m.u) - m.z, m.u))
}

/// Inverse of [`to_v_coords`]: `ξ^a v^b ↦ z^{k·b − a} u^b`.
pub fn from_v_coords(f: &LaurentPoly, k: u32) -> LaurentPoly {
    f.map_monomials(|m| Monomial::new(i64::from(k) * i64::from(m.u) - m.z, m.u))
}

/// Whether `z^l u^i` is holomorphic on `U`.
pub fn monomial_holomorphic_u(m: &Monomial) -> bool {
    m.z >= 0
}

/// Whether `z^l u^i` is holomorphic on `V`, i.e. `l ≤ k·i`.
pub fn monomial_holomorphic_v(m: &Monomial, k: u32) -> bool {
    m.z <= i64::from(k) * i64::from(m.u)
}

pub fn is_holomorphic_u(f: &LaurentPoly) -> bool {
    f.terms().all(|(m, _)| monomial_holomorphic_u(m))
}

pub fn is_holomorphic_v(f: &LaurentPoly, k: u32) -> bool {
    f.terms().all(|(m, _)| monomial_holomorphic_v(m, k))
}

/// Holomorphic on both charts, i.e. every monomial has `0 ≤ l ≤ k·i`.
pub fn is_global(f: &LaurentPoly, k: u32) -> bool {
    is_holomorphic_u(f) && is_holomorphic_v(f, k)
}

pub fn mat_holomorphic_u(m: &Mat2) -> bool {
    m.entries().all(is_holomorphic_u)
}

pub fn mat_holomorphic_v(m: &Mat2, k: u32) -> bool {
    m.entries().all(|p| is_holomorphic_v(p, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s).unwrap()
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(to_v_coords(&p("z"), 1), p("z^-1")); // ξ⁻¹
        assert_eq!(to_v_coords(&p("z*u"), 1), p("u")); // v
        assert_eq!(to_v_coords(&p("z^2*u"), 1), p("z^-1*u")); // ξ⁻¹v
        assert_eq!(from_v_coords(&p("z^-1*u"), 1), p("z^2*u"));
        assert_eq!(to_v_coords(&p("z^-1*u^2"), 1), p("z^3*u^2")); // ξ³v²
        assert_eq!(to_v_coords(&p("z*u"), 3), p("z^2*u"));
    }

    #[test]
    fn holomorphicity_examples() {
        let a = ChartExpr::new(1, p("z^2*u")).unwrap();
        assert!(a.is_holomorphic_u());
        assert!(!a.is_holomorphic_v());
        let b = ChartExpr::new(1, p("z^-1*u^2")).unwrap();
        assert!(b.is_holomorphic_v());
        assert!(!b.is_holomorphic_u());
        let one = ChartExpr::new(1, LaurentPoly::one()).unwrap();
        assert!(one.is_holomorphic_u() && one.is_holomorphic_v());
        assert_eq!(ChartExpr::new(0, LaurentPoly::one()), Err(InvalidDegree));
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i64..7, 0u32..4, -5i64..6), 0..6).prop_map(|ts| {
            LaurentPoly::from_terms(
                ts.into_iter()
                    .map(|(z, u, c)| (Monomial::new(z, u), crate::algebra::GaussianRational::from_int(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn round_trip(f in arb_poly(), k in 1u32..4) {
            prop_assert_eq!(from_v_coords(&to_v_coords(&f, k), k), f.clone());
            prop_assert_eq!(to_v_coords(&from_v_coords(&f, k), k), f);
        }

        #[test]
        fn multiplicative(f in arb_poly(), g in arb_poly(), k in 1u32..4) {
            prop_assert_eq!(to_v_coords(&(&f * &g), k), &to_v_coords(&f, k) * &to_v_coords(&g, k));
        }

        #[test]
        fn global_functions_by_enumeration(f in arb_poly(), k in 1u32..4) {
            let expected = f.terms().all(|(m, _)| 0 <= m.z && m.z <= i64::from(k) * i64::from(m.u));
            prop_assert_eq!(is_global(&f, k), expected);
            // V-holomorphic means nonnegative ξ-exponents after substitution
            let v = to_v_coords(&f, k);
            prop_assert_eq!(is_holomorphic_v(&f, k), v.terms().all(|(m, _)| m.z >= 0));
        }
    }
}
