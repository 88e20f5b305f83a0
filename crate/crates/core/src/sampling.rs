//! Seeded generators for random polynomials, gauges and window points.
//!
//! Every routine takes the RNG explicitly so results are reproducible from a
//! seed.

use rand::Rng;

use crate::algebra::{GaussianRational, LaurentPoly, Mat2, Monomial};

/// Small nonzero rational, occasionally non-integral.
pub fn random_nonzero<R: Rng>(rng: &mut R) -> GaussianRational {
    loop {
        let n = rng.gen_range(-5i64..=5);
        if n == 0 {
            continue;
        }
        let d = if rng.gen_bool(0.25) { rng.gen_range(2i64..=3) } else { 1 };
        return GaussianRational::from_ratio(n, d);
    }
}

/// A few terms with `z ∈ [zmin, zmax]`, `u ∈ [0, umax]`.
pub fn random_poly<R: Rng>(rng: &mut R, zmin: i64, zmax: i64, umax: u32) -> LaurentPoly {
    let n = rng.gen_range(0..=4);
    LaurentPoly::from_terms((0..n).map(|_| {
        (
            Monomial::new(rng.gen_range(zmin..=zmax), rng.gen_range(0..=umax)),
            random_nonzero(rng),
        )
    }))
}

pub fn random_mat<R: Rng>(rng: &mut R, zmin: i64, zmax: i64, umax: u32) -> Mat2 {
    Mat2::new(
        random_poly(rng, zmin, zmax, umax),
        random_poly(rng, zmin, zmax, umax),
        random_poly(rng, zmin, zmax, umax),
        random_poly(rng, zmin, zmax, umax),
    )
}

/// Random polynomial holomorphic on `U`: `z`-exponents in `[0, zspan]`.
pub fn random_u_holomorphic<R: Rng>(rng: &mut R, zspan: i64, umax: u32) -> LaurentPoly {
    random_poly(rng, 0, zspan, umax)
}

/// Random polynomial holomorphic on `V`: monomials `z^l u^i` with
/// `k·i − zspan ≤ l ≤ k·i`.
pub fn random_v_holomorphic<R: Rng>(rng: &mut R, k: u32, zspan: i64, umax: u32) -> LaurentPoly {
    let n = rng.gen_range(0..=4);
    LaurentPoly::from_terms((0..n).map(|_| {
        let i = rng.gen_range(0..=umax);
        let top = i64::from(k) * i64::from(i);
        (Monomial::new(rng.gen_range(top - zspan..=top), i), random_nonzero(rng))
    }))
}

fn elementary(upper: bool, x: LaurentPoly) -> Mat2 {
    if upper {
        Mat2::new(LaurentPoly::one(), x, LaurentPoly::zero(), LaurentPoly::one())
    } else {
        Mat2::new(LaurentPoly::one(), LaurentPoly::zero(), x, LaurentPoly::one())
    }
}

fn constant_diag<R: Rng>(rng: &mut R) -> Mat2 {
    Mat2::diag(
        LaurentPoly::constant(random_nonzero(rng)),
        LaurentPoly::constant(random_nonzero(rng)),
    )
}

/// Gauge pair `(H_U, H_V)` with constant nonzero determinants: each is a
/// constant diagonal times three elementary factors with chart-holomorphic
/// entries.
pub fn random_gauge_pair<R: Rng>(rng: &mut R, k: u32, zspan: i64, umax: u32) -> (Mat2, Mat2) {
    let mut h_u = constant_diag(rng);
    let mut h_v = constant_diag(rng);
    let start = rng.gen_bool(0.5);
    for step in 0..3 {
        let upper = (step % 2 == 0) == start;
        h_u = &h_u * &elementary(upper, random_u_holomorphic(rng, zspan, umax));
        h_v = &h_v * &elementary(!upper, random_v_holomorphic(rng, k, zspan, umax));
    }
    (h_u, h_v)
}

/// Like [`random_gauge_pair`] but independent of `u` (gauges on `ℓ` only).
pub fn random_gauge_pair_on_ell<R: Rng>(rng: &mut R, zspan: i64) -> (Mat2, Mat2) {
    random_gauge_pair(rng, 1, zspan, 0)
}

/// Random point of a monomial window with all coordinates nonzero.
pub fn random_window_point<R: Rng>(rng: &mut R, len: usize) -> Vec<GaussianRational> {
    (0..len).map(|_| random_nonzero(rng)).collect()
}
