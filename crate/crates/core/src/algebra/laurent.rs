//! Sparse bivariate Laurent polynomials: integer exponents in `z`, nonnegative
//! exponents in `u`, Gaussian-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gaussian::{parse_rational, GaussianRational};
use super::AlgebraError;

/// Exponent pair of a monomial `z^z · u^u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub z: i64,
    pub u: u32,
}

impl Monomial {
    pub fn new(z: i64, u: u32) -> Self {
        Monomial { z, u }
    }
}

/// `Σ c_{l,i} z^l u^i` with finitely many nonzero coefficients.
///
/// Zero coefficients are never stored, so the zero polynomial has an empty
/// term map and structural equality is mathematical equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(GaussianRational::from_int(n))
    }

    pub fn monomial(c: GaussianRational, z: i64, u: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(z, u), c);
        }
        LaurentPoly { terms }
    }

    /// The monic monomial `z^z u^u`.
    pub fn zu(z: i64, u: u32) -> Self {
        Self::monomial(GaussianRational::one(), z, u)
    }

    pub fn z() -> Self {
        Self::zu(1, 0)
    }

    pub fn u() -> Self {
        Self::zu(0, 1)
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, GaussianRational)>,
    {
        let mut p = LaurentPoly::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending `(z, u)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, GaussianRational)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, z: i64, u: u32) -> GaussianRational {
        self.terms.get(&Monomial::new(z, u)).cloned().unwrap_or_default()
    }

    pub fn min_z(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.z).min()
    }

    pub fn max_z(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.z).max()
    }

    pub fn max_u(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.u).max()
    }

    pub fn min_u(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.u).min()
    }

    /// `Some((c, z, u))` when the polynomial is a single nonzero monomial.
    pub fn as_monomial(&self) -> Option<(GaussianRational, i64, u32)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        Some((c.clone(), m.z, m.u))
    }

    /// `Some(c)` when the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                (m.z == 0 && m.u == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    /// Multiplication by `z^dz u^du`.
    pub fn shift(&self, dz: i64, du: u32) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.z + dz, m.u + du), c.clone()))
                .collect(),
        }
    }

    /// Drops every term with `u`-exponent above `order`.
    pub fn truncate_u(&self, order: u32) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.u <= order)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Coefficient of `u^i`, as a polynomial in `z` alone.
    pub fn u_coefficient(&self, i: u32) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.u == i)
                .map(|(m, c)| (Monomial::new(m.z, 0), c.clone()))
                .collect(),
        }
    }

    /// Substitution `u = 0`.
    pub fn at_u_zero(&self) -> Self {
        self.u_coefficient(0)
    }

    pub fn filter<F>(&self, mut keep: F) -> Self
    where
        F: FnMut(&Monomial) -> bool,
    {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Reindexes every monomial; colliding images are summed.
    pub fn map_monomials<F>(&self, mut f: F) -> Self
    where
        F: FnMut(Monomial) -> Monomial,
    {
        LaurentPoly::from_terms(self.terms.iter().map(|(m, c)| (f(*m), c.clone())))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = LaurentPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Product truncated at `u`-order `order`.
    pub fn mul_trunc(&self, rhs: &LaurentPoly, order: u32) -> Self {
        let mut out = LaurentPoly::zero();
        for (ma, ca) in &self.terms {
            if ma.u > order {
                continue;
            }
            for (mb, cb) in &rhs.terms {
                if ma.u + mb.u > order {
                    continue;
                }
                out.add_term(Monomial::new(ma.z + mb.z, ma.u + mb.u), &(ca * cb));
            }
        }
        out
    }

    /// Inverse in the jet ring `R[u]/(u^{order+1})`, where `R` is the ring of
    /// Laurent polynomials in `z`.
    ///
    /// Requires the `u⁰` part to be a nonzero monomial `c z^e`; then the
    /// inverse is `c⁻¹ z^{-e} Σ (−g)^n` with `g = (f − c z^e)/(c z^e)`.
    pub fn jet_inverse(&self, order: u32) -> Option<Self> {
        let (c, e, _) = self.at_u_zero().as_monomial()?;
        let lead_inv = LaurentPoly::monomial(c.inv()?, -e, 0);
        let g = (&self.truncate_u(order) * &lead_inv) - LaurentPoly::one();
        let neg_g = -g;
        let mut acc = LaurentPoly::one();
        let mut power = LaurentPoly::one();
        for _ in 0..order {
            power = power.mul_trunc(&neg_g, order);
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Some(acc.mul_trunc(&lead_inv, order))
    }

    /// Exact evaluation at `(z0, u0)`.
    pub fn evaluate(
        &self,
        z0: &GaussianRational,
        u0: &GaussianRational,
    ) -> Result<GaussianRational, AlgebraError> {
        let z_inv = if z0.is_zero() {
            if self.min_z().is_some_and(|m| m < 0) {
                return Err(AlgebraError::PoleAtZero);
            }
            None
        } else {
            z0.inv()
        };
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let zp = if m.z >= 0 {
                z0.pow(m.z as u32)
            } else {
                z_inv.as_ref().expect("checked above").pow(m.z.unsigned_abs() as u32)
            };
            acc += &(c * &zp * u0.pow(m.u));
        }
        Ok(acc)
    }

    /// Parses expressions such as `"z^3*u + u - 2*z^-2*u^2 + (1/2+3i)*z"`.
    pub fn parse(src: &str) -> Result<Self, AlgebraError> {
        parse_poly(src)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            let neg_real = c.is_real() && c.re < num_traits::Zero::zero();
            let mag = if neg_real { -c } else { c.clone() };
            if !mag.is_real() {
                factors.push(format!("({mag})"));
            } else if !mag.is_one() || (m.z == 0 && m.u == 0) {
                factors.push(mag.to_string());
            }
            match m.z {
                0 => {}
                1 => factors.push("z".into()),
                e => factors.push(format!("z^{e}")),
            }
            match m.u {
                0 => {}
                1 => factors.push("u".into()),
                e => factors.push(format!("u^{e}")),
            }
            let body = factors.join("*");
            match (k, neg_real) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(Monomial::new(ma.z + mb.z, ma.u + mb.u), &(ca * cb));
            }
        }
        out
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &'a LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.clone().neg()
    }
}

// --- text parser -------------------------------------------------------------

fn parse_poly(src: &str) -> Result<LaurentPoly, AlgebraError> {
    let err = |msg: &str| AlgebraError::Parse(format!("{msg} in `{src}`"));
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty expression"));
    }
    // split at top-level + and - (not inside parentheses, not after '^')
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut negative = false;
    let chars: Vec<char> = s.chars().collect();
    for (idx, &ch) in chars.iter().enumerate() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(err("unbalanced parentheses"));
                }
                cur.push(ch);
            }
            '+' | '-' if depth == 0 && !(idx > 0 && chars[idx - 1] == '^') => {
                if !cur.is_empty() {
                    pieces.push((negative, std::mem::take(&mut cur)));
                } else if idx != 0 {
                    return Err(err("dangling sign"));
                }
                negative = ch == '-';
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err(err("unbalanced parentheses"));
    }
    if cur.is_empty() {
        return Err(err("trailing sign"));
    }
    pieces.push((negative, cur));

    let mut out = LaurentPoly::zero();
    for (neg, piece) in pieces {
        let mut coeff = GaussianRational::one();
        let (mut ez, mut eu) = (0i64, 0u32);
        for factor in piece.split('*') {
            if factor.is_empty() {
                return Err(err("empty factor"));
            }
            if let Some(inner) = factor.strip_prefix('(').and_then(|f| f.strip_suffix(')')) {
                coeff = &coeff * &parse_gaussian(inner).ok_or_else(|| err("bad coefficient"))?;
            } else if factor == "i" {
                coeff = &coeff * &GaussianRational::i();
            } else if let Some(rest) = factor.strip_prefix('z') {
                ez += parse_exponent(rest).ok_or_else(|| err("bad z exponent"))?;
            } else if let Some(rest) = factor.strip_prefix('u') {
                let e = parse_exponent(rest).ok_or_else(|| err("bad u exponent"))?;
                if e < 0 {
                    return Err(AlgebraError::NegativeUExponent);
                }
                eu += e as u32;
            } else if let Some(stripped) = factor.strip_suffix('i') {
                let r = parse_rational(stripped).map_err(|_| err("bad coefficient"))?;
                coeff = &coeff * &GaussianRational::new(num_traits::Zero::zero(), r);
            } else {
                let r = parse_rational(factor).map_err(|_| err("bad coefficient"))?;
                coeff = &coeff * &GaussianRational::real(r);
            }
        }
        if neg {
            coeff = -coeff;
        }
        out.add_term(Monomial::new(ez, eu), &coeff);
    }
    Ok(out)
}

fn parse_exponent(rest: &str) -> Option<i64> {
    if rest.is_empty() {
        return Some(1);
    }
    rest.strip_prefix('^')?.parse().ok()
}

fn parse_gaussian(s: &str) -> Option<GaussianRational> {
    let p = parse_poly(s).ok()?;
    p.as_constant()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s).unwrap()
    }

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn distributivity_example() {
        // (z + u)·z⁻¹ = 1 + z⁻¹u
        assert_eq!(&p("z + u") * &p("z^-1"), p("1 + z^-1*u"));
    }

    #[test]
    fn zero_has_empty_map() {
        let a = p("z^2*u - 3");
        let d = &a - &a;
        assert!(d.is_zero());
        assert_eq!(d.len(), 0);
        assert_eq!(d.max_z(), None);
    }

    #[test]
    fn degree_accessors() {
        let a = p("z^-3*u^2 + 4*z^5 + u^7");
        assert_eq!(a.min_z(), Some(-3));
        assert_eq!(a.max_z(), Some(5));
        assert_eq!(a.max_u(), Some(7));
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(p("z^-1*u").evaluate(&g(2), &g(4)).unwrap(), g(2));
        assert_eq!(p("z^-1").evaluate(&g(0), &g(0)), Err(AlgebraError::PoleAtZero));
        assert_eq!(
            p("1 + z*u").evaluate(&g(3), &GaussianRational::from_ratio(1, 3)).unwrap(),
            g(2)
        );
        assert_eq!(p("z^2 + u").evaluate(&g(0), &g(5)).unwrap(), g(5));
    }

    #[test]
    fn parse_and_display_agree() {
        for s in ["z^3*u + u - 2*z^-2*u^2", "(1/2+3i)*z - i*u", "(-2i)*u^3", "0", "-1", "7/3*z^-1"] {
            let a = p(s);
            assert_eq!(p(&a.to_string()), a, "{s} -> {a}");
        }
        assert!(LaurentPoly::parse("u^-1").is_err());
        assert!(LaurentPoly::parse("z +").is_err());
        assert!(LaurentPoly::parse("w").is_err());
    }

    #[test]
    fn jet_inverse_of_unit() {
        let f = p("2*z^3 + z*u + z^-4*u^2");
        let order = 5;
        let inv = f.jet_inverse(order).unwrap();
        assert_eq!(f.mul_trunc(&inv, order), LaurentPoly::one());
        assert!(p("z + 1").jet_inverse(3).is_none());
        assert!(p("u").jet_inverse(3).is_none());
    }
}
