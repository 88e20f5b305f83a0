//! Rank of the linearized gauge action on canonical window coordinates.
//!
//! At `T = [[z^{j1}, p], [0, z^{j2}]]` an infinitesimal gauge pair `(A, B)`
//! moves `T` by `L(A, B) = B·T − T·A` (mod `u^{N+1}`). The tangent space of
//! the orbit inside the canonical slice is `W ∩ Im L`, where `W` is the span
//! of the window directions `E₁₂ · z^l u^i`; its dimension is
//! `dim W + rank L − rank [L | W]`.
//!
//! The entries `A₁₁`, `A₁₂`, `B₁₂`, `B₂₂` only ever hit single positions
//! (`z^{j1}A₁₁`, `z^{j1}A₁₂`, `z^{j2}B₁₂`, `z^{j2}B₂₂`), so their images are
//! quotiented out with unbounded degree. The remaining four entries are cut
//! off where an unknown would own a position no other unknown reaches; such
//! an unknown has coefficient zero in any combination landing in `W`. The
//! resulting bounds are therefore complete.

use std::collections::BTreeMap;

use crate::algebra::linalg::{Echelon, SparseRow};
use crate::algebra::{GaussianRational, LaurentPoly, Monomial};
use crate::canonical::{monomial_window, window_depth, CanonicalForm};
use crate::transition::SplittingType;

/// Interns `(row, col, monomial)` positions as column indices.
#[derive(Default)]
struct Positions(BTreeMap<(usize, usize, Monomial), usize>);

impl Positions {
    fn col(&mut self, r: usize, c: usize, m: Monomial) -> usize {
        let next = self.0.len();
        *self.0.entry((r, c, m)).or_insert(next)
    }
}

struct Image<'a> {
    split: SplittingType,
    k: i64,
    n: u32,
    pos: &'a mut Positions,
    row: SparseRow,
}

impl Image<'_> {
    /// Whether a position survives the quotient by the single-position images.
    fn kept(&self, r: usize, c: usize, m: &Monomial) -> bool {
        let ki = self.k * i64::from(m.u);
        m.u <= self.n
            && match (r, c) {
                (0, 0) => m.z < self.split.j1,
                (1, 1) => m.z > ki + self.split.j2,
                (0, 1) => m.z < self.split.j1 && m.z > ki + self.split.j2,
                _ => true,
            }
    }

    fn add(&mut self, r: usize, c: usize, p: &LaurentPoly, sign: i64) {
        for (m, coef) in p.terms() {
            if !self.kept(r, c, m) {
                continue;
            }
            let col = self.pos.col(r, c, *m);
            let entry = self.row.entry(col).or_default();
            if sign > 0 {
                *entry += coef;
            } else {
                *entry -= coef;
            }
        }
    }
}

/// `dim(W ∩ Im L)` at a canonical form.
pub fn orbit_rank_at(form: &CanonicalForm) -> usize {
    let split = form.split();
    let (j1, j2) = (split.j1, split.j2);
    let k = i64::from(form.k());
    let n = window_depth(j1, j2, form.k());
    let p = form.p();
    let (pmin, pmax) = (p.min_z().unwrap_or(j1), p.max_z().unwrap_or(j2));
    let mut pos = Positions::default();
    let mut ech = Echelon::new(usize::MAX / 2);

    for i in 0..=n {
        let ki = k * i64::from(i);
        let mut insert = |f: &dyn Fn(&mut Image<'_>)| {
            let mut img = Image { split, k, n, pos: &mut pos, row: SparseRow::new() };
            f(&mut img);
            ech.insert(img.row);
        };
        // B₁₁ = z^l u^i: (1,1) += z^{j1} B₁₁, (1,2) += B₁₁ p
        for l in (pmin - j1).min(0)..=ki {
            let b = LaurentPoly::zu(l, i);
            insert(&|img| {
                img.add(0, 0, &b.shift(j1, 0), 1);
                img.add(0, 1, &(&b * &p), 1);
            });
        }
        // A₂₂ = z^a u^i: (1,2) −= p A₂₂, (2,2) −= z^{j2} A₂₂
        for a in 0..=(ki + pmax - j2).max(ki) {
            let x = LaurentPoly::zu(a, i);
            insert(&|img| {
                img.add(0, 1, &(&p * &x), -1);
                img.add(1, 1, &x.shift(j2, 0), -1);
            });
        }
        // A₂₁ = z^a u^i: (1,1) −= p A₂₁, (2,1) −= z^{j2} A₂₁
        for a in 0..=(j1 - j2 + ki) {
            let x = LaurentPoly::zu(a, i);
            insert(&|img| {
                img.add(0, 0, &(&p * &x), -1);
                img.add(1, 0, &x.shift(j2, 0), -1);
            });
        }
        // B₂₁ = z^l u^i: (2,1) += z^{j1} B₂₁, (2,2) += B₂₁ p
        for l in (j2 - j1)..=ki {
            let b = LaurentPoly::zu(l, i);
            insert(&|img| {
                img.add(1, 0, &b.shift(j1, 0), 1);
                img.add(1, 1, &(&b * &p), 1);
            });
        }
    }
    let window = monomial_window(j1, j2, form.k());
    let mut added = 0;
    for &(i, l) in &window {
        let mut row = SparseRow::new();
        row.insert(pos.col(0, 1, Monomial::new(l, i)), GaussianRational::one());
        if ech.insert(row) {
            added += 1;
        }
    }
    window.len() - added
}

/// Orbit rank at the window vector `w` of the `(j1, j2, k)` canonical form.
pub fn orbit_rank(j1: i64, j2: i64, k: u32, w: &[GaussianRational]) -> usize {
    let split = SplittingType::new(j1, j2);
    let form = CanonicalForm::from_window_vector(k, split, w).expect("vector indexed by the window");
    orbit_rank_at(&form)
}
