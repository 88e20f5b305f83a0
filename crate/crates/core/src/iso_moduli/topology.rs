//! The non-Hausdorff topology on `M₂ = P¹ ∪ {q₁, q₂}`.
//!
//! Basic open sets are `U`, `{q₁} ∪ U` and `{q₁, q₂} ∪ U` for nonempty open
//! `U ⊆ P¹`; here `U` ranges over chordal discs with rational radius. This
//! family is not closed under intersection (two sets `{q₁} ∪ U` with disjoint
//! `U` meet in `{q₁}`), so it is used as a generator of neighborhood filters
//! rather than as a basis in the strict sense.

use num_traits::{One, Zero};

use crate::algebra::{GaussianRational, Rational};
use crate::iso_moduli::moduli::{ModuliJ2Point, ProjectivePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpecialSet {
    None,
    Q1,
    Q1Q2,
}

impl SpecialSet {
    fn contains(self, x: &ModuliJ2Point) -> bool {
        matches!(
            (self, x),
            (SpecialSet::Q1 | SpecialSet::Q1Q2, ModuliJ2Point::Q1) | (SpecialSet::Q1Q2, ModuliJ2Point::Q2)
        )
    }

    fn meets(self, other: SpecialSet) -> bool {
        self != SpecialSet::None && other != SpecialSet::None
    }
}

/// Open chordal disc `{x : d(center, x) < radius}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disc {
    pub center: ProjectivePoint,
    pub radius: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicOpen {
    pub specials: SpecialSet,
    pub disc: Disc,
}

/// Squared chordal distance on the Riemann sphere:
/// `|a − b|² / ((1 + |a|²)(1 + |b|²))`, and `1 / (1 + |a|²)` to `∞`.
pub fn chordal_sq(a: &ProjectivePoint, b: &ProjectivePoint) -> Rational {
    use ProjectivePoint::*;
    match (a, b) {
        (Infinity, Infinity) => Rational::zero(),
        (Finite(x), Infinity) | (Infinity, Finite(x)) => {
            Rational::one() / (Rational::one() + x.norm_sqr())
        }
        (Finite(x), Finite(y)) => {
            let diff: GaussianRational = x - y;
            diff.norm_sqr() / ((Rational::one() + x.norm_sqr()) * (Rational::one() + y.norm_sqr()))
        }
    }
}

impl BasicOpen {
    pub fn contains(&self, x: &ModuliJ2Point) -> bool {
        match x {
            ModuliJ2Point::Generic(t) => {
                chordal_sq(&self.disc.center, t) < &self.disc.radius * &self.disc.radius
            }
            special => self.specials.contains(special),
        }
    }

    /// Sufficient test: no common special point and `d(c₁, c₂) ≥ r₁ + r₂`.
    pub fn disjoint_from(&self, other: &BasicOpen) -> bool {
        if self.specials.meets(other.specials) {
            return false;
        }
        let sum = &self.disc.radius + &other.disc.radius;
        chordal_sq(&self.disc.center, &other.disc.center) >= &sum * &sum
    }
}

/// Centers used for the discs of special neighborhoods: `∞`, then Gaussian
/// rationals of growing height.
pub fn centers() -> impl Iterator<Item = ProjectivePoint> {
    std::iter::once(ProjectivePoint::Infinity).chain((0i64..).flat_map(|h| {
        let mut out = Vec::new();
        for re in -h..=h {
            for im in -h..=h {
                if re.abs().max(im.abs()) == h {
                    out.push(ProjectivePoint::Finite(GaussianRational::from_parts(re, 1, im, 1)));
                }
            }
        }
        out
    }))
}

fn radius(level: u32) -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(2u8).pow(level))
}

/// Generator of basic neighborhoods of `x`, by level `e = 0, 1, …` with
/// radius `2^{−e}`. For a special point, level `e` uses the first `e + 1`
/// centers.
pub fn neighborhoods(x: &ModuliJ2Point) -> impl Iterator<Item = BasicOpen> + '_ {
    (0u32..).flat_map(move |e| level(x, e))
}

fn level(x: &ModuliJ2Point, e: u32) -> Vec<BasicOpen> {
    let r = radius(e);
    match x {
        ModuliJ2Point::Generic(t) => {
            vec![BasicOpen { specials: SpecialSet::None, disc: Disc { center: t.clone(), radius: r } }]
        }
        ModuliJ2Point::Q1 | ModuliJ2Point::Q2 => {
            let specials = if *x == ModuliJ2Point::Q1 { SpecialSet::Q1 } else { SpecialSet::Q1Q2 };
            centers()
                .take(e as usize + 1)
                .map(|c| BasicOpen { specials, disc: Disc { center: c, radius: r.clone() } })
                .collect()
        }
    }
}

/// Largest generator level examined by [`are_separated`].
pub const MAX_LEVEL: u32 = 64;

/// Whether `x` and `y` have disjoint basic neighborhoods.
///
/// Every neighborhood of either special point contains `q₁`, so `q₁` and
/// `q₂` are never separated; otherwise the generators are searched level by
/// level up to [`MAX_LEVEL`].
pub fn are_separated(x: &ModuliJ2Point, y: &ModuliJ2Point) -> bool {
    if x == y {
        return false;
    }
    let special = |p: &ModuliJ2Point| !matches!(p, ModuliJ2Point::Generic(_));
    if special(x) && special(y) {
        return false;
    }
    for e in 0..=MAX_LEVEL {
        let nx = level(x, e);
        let ny = level(y, e);
        if nx.iter().any(|a| ny.iter().any(|b| a.disjoint_from(b))) {
            return true;
        }
    }
    false
}
