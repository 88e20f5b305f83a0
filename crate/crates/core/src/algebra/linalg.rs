//! Sparse exact Gaussian elimination over `Q(i)`: rank and nullspace.

use std::collections::BTreeMap;

use super::gaussian::GaussianRational;

pub type SparseRow = BTreeMap<usize, GaussianRational>;

/// Row-echelon form built incrementally. Every stored row has leading
/// coefficient 1 at its key column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, pivots: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots; returns true if it was
    /// independent (and is now stored).
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        row.retain(|_, c| !c.is_zero());
        loop {
            let Some((&col, lead)) = row.iter().next() else {
                return false;
            };
            debug_assert!(col < self.ncols, "column {col} out of range");
            match self.pivots.get(&col) {
                Some(pivot) => {
                    let f = lead.clone();
                    for (c, v) in pivot {
                        let delta = &f * v;
                        let remove = match row.get_mut(c) {
                            Some(x) => {
                                *x -= &delta;
                                x.is_zero()
                            }
                            None => {
                                row.insert(*c, -delta);
                                false
                            }
                        };
                        if remove {
                            row.remove(c);
                        }
                    }
                }
                None => {
                    let inv = lead.inv().expect("nonzero lead");
                    if !inv.is_one() {
                        for v in row.values_mut() {
                            *v *= &inv;
                        }
                    }
                    self.pivots.insert(col, row);
                    return true;
                }
            }
        }
    }

    /// Back-substitutes so that every pivot column is zero in all other rows.
    pub fn reduce(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &pc in &cols {
            let prow = self.pivots[&pc].clone();
            for (_, row) in self.pivots.range_mut(..pc) {
                let Some(f) = row.get(&pc).cloned() else { continue };
                for (c, v) in &prow {
                    let delta = &f * v;
                    let remove = match row.get_mut(c) {
                        Some(x) => {
                            *x -= &delta;
                            x.is_zero()
                        }
                        None => {
                            row.insert(*c, -delta);
                            false
                        }
                    };
                    if remove {
                        row.remove(c);
                    }
                }
            }
        }
    }

    /// Basis of the solution space of `row · x = 0` for all inserted rows,
    /// one sparse vector per free column (in ascending column order).
    pub fn nullspace(mut self) -> Vec<SparseRow> {
        self.reduce();
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if self.pivots.contains_key(&free) {
                continue;
            }
            let mut v = SparseRow::new();
            v.insert(free, GaussianRational::one());
            for (&pc, row) in self.pivots.range(..free) {
                if let Some(c) = row.get(&free) {
                    v.insert(pc, -c);
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Rank of the matrix whose rows are given.
pub fn rank<I>(ncols: usize, rows: I) -> usize
where
    I: IntoIterator<Item = SparseRow>,
{
    let mut ech = Echelon::new(ncols);
    for r in rows {
        ech.insert(r);
    }
    ech.rank()
}

pub fn nullspace<I>(ncols: usize, rows: I) -> Vec<SparseRow>
where
    I: IntoIterator<Item = SparseRow>,
{
    let mut ech = Echelon::new(ncols);
    for r in rows {
        ech.insert(r);
    }
    ech.nullspace()
}

pub fn dot(row: &SparseRow, x: &SparseRow) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for (c, v) in row {
        if let Some(w) = x.get(c) {
            acc += &(v * w);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|&(c, v)| (c, GaussianRational::from_int(v))).collect()
    }

    #[test]
    fn rank_and_kernel() {
        // x0 + 2x1 + 3x2 = 0, 2x0 + 4x1 + 6x2 = 0, x1 - x3 = 0
        let rows = vec![
            row(&[(0, 1), (1, 2), (2, 3)]),
            row(&[(0, 2), (1, 4), (2, 6)]),
            row(&[(1, 1), (3, -1)]),
        ];
        assert_eq!(rank(4, rows.clone()), 2);
        let ns = nullspace(4, rows.clone());
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                assert!(dot(r, v).is_zero());
            }
        }
    }

    #[test]
    fn full_rank_square() {
        let rows = vec![row(&[(0, 2), (1, 1)]), row(&[(0, 1), (1, 1)])];
        assert_eq!(rank(2, rows.clone()), 2);
        assert!(nullspace(2, rows).is_empty());
    }

    #[test]
    fn complex_pivots() {
        let i = GaussianRational::i();
        let one = GaussianRational::one();
        let r1: SparseRow = [(0, i.clone()), (1, one.clone())].into_iter().collect();
        let r2: SparseRow = [(0, one.clone()), (1, -&i)].into_iter().collect();
        // r2 = -i · r1
        assert_eq!(rank(2, vec![r1.clone(), r2]), 1);
        let ns = nullspace(2, vec![r1.clone()]);
        assert!(dot(&r1, &ns[0]).is_zero());
    }
}
