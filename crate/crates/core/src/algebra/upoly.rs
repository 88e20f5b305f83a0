//! Univariate polynomials over `Q` with Sturm-sequence real root isolation.

use num_traits::{One, Signed, Zero};

use super::gaussian::Rational;

/// Dense coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

/// Where a real root of a polynomial was located.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootLocation {
    Exact(Rational),
    /// Exactly one root in the open interval.
    Between(Rational, Rational),
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &UPoly) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_default();
                    let b = rhs.coeffs.get(i).cloned().unwrap_or_default();
                    a - b
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dl = d.lead().expect("division by zero polynomial").clone();
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::default(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => {
                let l = l.clone();
                Self::new(self.coeffs.iter().map(|c| c / &l).collect())
            }
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &UPoly) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Same roots, each with multiplicity one.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Standard Sturm chain `p, p', −rem(p, p'), …`.
    pub fn sturm_chain(&self) -> Vec<UPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        while !chain.last().expect("nonempty").is_zero() {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            chain.push(r.neg());
        }
        chain.pop();
        chain
    }

    fn sign_changes(chain: &[UPoly], x: &Rational) -> usize {
        let signs: Vec<i8> = chain
            .iter()
            .map(|p| {
                let v = p.eval(x);
                if v.is_zero() {
                    0
                } else if v.is_positive() {
                    1
                } else {
                    -1
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &Rational, hi: &Rational) -> usize {
        if self.is_zero() {
            panic!("zero polynomial has infinitely many roots");
        }
        let sf = self.squarefree();
        if sf.degree() == Some(0) {
            return 0;
        }
        let chain = sf.sturm_chain();
        Self::sign_changes(&chain, lo) - Self::sign_changes(&chain, hi)
    }

    /// Isolates every distinct real root in the closed interval `[lo, hi]`.
    pub fn isolate_roots(&self, lo: &Rational, hi: &Rational) -> Vec<RootLocation> {
        assert!(lo <= hi, "empty interval");
        let sf = self.squarefree();
        if sf.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let chain = sf.sturm_chain();
        let mut out = Vec::new();
        if sf.eval(lo).is_zero() {
            out.push(RootLocation::Exact(lo.clone()));
        }
        // (lo, hi] processed by bisection; open subintervals carry counts.
        let mut stack = vec![(lo.clone(), hi.clone())];
        let two = Rational::one() + Rational::one();
        let mut found = Vec::new();
        while let Some((a, b)) = stack.pop() {
            let n = Self::sign_changes(&chain, &a) - Self::sign_changes(&chain, &b);
            if n == 0 {
                continue;
            }
            if sf.eval(&b).is_zero() {
                found.push(RootLocation::Exact(b.clone()));
                if n == 1 {
                    continue;
                }
                let m = (&a + &b) / &two;
                stack.push((a, m.clone()));
                stack.push((m, b));
                continue;
            }
            if n == 1 {
                found.push(RootLocation::Between(a, b));
                continue;
            }
            let m = (&a + &b) / &two;
            stack.push((a, m.clone()));
            stack.push((m, b));
        }
        found.sort_by(|x, y| Self::loc_key(x).cmp(Self::loc_key(y)));
        found.dedup();
        out.extend(found);
        out
    }

    fn loc_key(l: &RootLocation) -> &Rational {
        match l {
            RootLocation::Exact(x) => x,
            RootLocation::Between(a, _) => a,
        }
    }
}
