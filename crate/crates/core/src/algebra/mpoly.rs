//! Sparse polynomials in a fixed number of variables `x₁..x_m`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gaussian::GaussianRational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, GaussianRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], &c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    /// The variable `x_{i+1}` (zero-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(GaussianRational::one(), e)
    }

    pub fn monomial(c: GaussianRational, exps: Vec<u32>) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, &c);
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, GaussianRational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            p.add_term(e, &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&exps) {
            Some(x) => {
                *x += c;
                x.is_zero()
            }
            None => {
                self.terms.insert(exps, c.clone());
                false
            }
        };
        if remove {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Terms of positive total degree.
    pub fn nonconstant_part(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().any(|&x| x > 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, point: &[GaussianRational]) -> GaussianRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                t = &t * &x.pow(k);
            }
            acc += &t;
        }
        acc
    }

    /// `p(t·x₁, …, t·x_m)` as a polynomial in `m + 1` variables, `t` last.
    pub fn radial(&self) -> MPoly {
        MPoly::from_terms(
            self.nvars + 1,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = e.clone();
                e2.push(e.iter().sum());
                (e2, c.clone())
            }),
        )
    }

    /// Same polynomial viewed in `nvars + extra` variables.
    pub fn extend_vars(&self, extra: usize) -> MPoly {
        MPoly::from_terms(
            self.nvars + extra,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = e.clone();
                e2.extend(std::iter::repeat_n(0, extra));
                (e2, c.clone())
            }),
        )
    }

    pub fn scale(&self, c: &GaussianRational) -> MPoly {
        MPoly::from_terms(self.nvars, self.terms.iter().map(|(e, v)| (e.clone(), v * c)))
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn det(m: &[Vec<MPoly>]) -> MPoly {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square matrix expected");
    let nvars = m[0][0].nvars();
    let cols: Vec<usize> = (0..n).collect();
    det_minor(m, 0, &cols, nvars)
}

fn det_minor(m: &[Vec<MPoly>], row: usize, cols: &[usize], nvars: usize) -> MPoly {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = MPoly::zero(nvars);
    for (k, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = &m[row][c] * &det_minor(m, row + 1, &rest, nvars);
        acc = if k % 2 == 0 { &acc + &minor } else { &acc - &minor };
    }
    acc
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg_real = c.is_real() && c.re < num_traits::Zero::zero();
            let mag = if neg_real { -c } else { c.clone() };
            let mut factors = Vec::new();
            if !mag.is_real() {
                factors.push(format!("({mag})"));
            } else if !mag.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(mag.to_string());
            }
            for (i, &d) in e.iter().enumerate() {
                match d {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{d}", i + 1)),
                }
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

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &'a MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &'a MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &'a MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&GaussianRational::from_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_radial() {
        let one = MPoly::one(2);
        let x1 = MPoly::var(2, 0);
        let x2 = MPoly::var(2, 1);
        let d = det(&[vec![one.clone(), x1.clone()], vec![x2.clone(), one.clone()]]);
        assert_eq!(d, &one - &(&x1 * &x2));
        assert!(!d.is_constant());
        assert_eq!(d.nonconstant_part(), -&(&x1 * &x2));
        // radial substitution: 1 - x1 x2 -> 1 - t^2 x1 x2
        let r = d.radial();
        let pt = [GaussianRational::from_int(1), GaussianRational::from_int(1), GaussianRational::from_int(2)];
        assert_eq!(r.eval(&pt), GaussianRational::from_int(-3));
    }

    #[test]
    fn three_by_three() {
        let c = |n: i64| MPoly::constant(1, GaussianRational::from_int(n));
        let x = MPoly::var(1, 0);
        let m = vec![
            vec![c(1), x.clone(), c(0)],
            vec![c(0), c(1), x.clone()],
            vec![c(0), c(0), c(3)],
        ];
        assert_eq!(det(&m), c(3));
    }
}
