//! Exact row reduction over a [`Field`].

use super::field::{Field, FieldElem};

/// A subspace of `k^n` held as a reduced row echelon basis. Pivots are
/// chosen left to right, so the basis is a deterministic function of the
/// row space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonBasis {
    field: Field,
    ncols: usize,
    rows: Vec<Vec<FieldElem>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn empty(field: Field, ncols: usize) -> EchelonBasis {
        EchelonBasis { field, ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows(field: Field, ncols: usize, rows: impl IntoIterator<Item = Vec<FieldElem>>) -> EchelonBasis {
        let mut b = EchelonBasis::empty(field, ncols);
        for r in rows {
            b.insert(r);
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<FieldElem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the current basis.
    pub fn reduce(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p].clone();
                for (vi, ri) in v.iter_mut().zip(row) {
                    if !ri.is_zero() {
                        *vi = &*vi - &(&c * ri);
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        self.reduce(v).iter().all(|c| c.is_zero())
    }

    /// Adds `v` to the span; returns whether the dimension grew. The basis
    /// stays fully reduced after every insertion.
    pub fn insert(&mut self, v: Vec<FieldElem>) -> bool {
        assert_eq!(v.len(), self.ncols);
        let r = self.reduce(&v);
        let Some(p) = r.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().unwrap();
        let r: Vec<FieldElem> = r.iter().map(|c| c * &inv).collect();
        // Clear the new pivot column from the existing rows.
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (ri, vi) in row.iter_mut().zip(&r) {
                    if !vi.is_zero() {
                        *ri = &*ri - &(&c * vi);
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, r);
        true
    }
}

/// Rank of the given rows restricted to the selected columns.
pub fn rank_on_columns(field: Field, rows: &[Vec<FieldElem>], cols: &[usize]) -> usize {
    let mut basis = EchelonBasis::empty(field, cols.len());
    for r in rows {
        basis.insert(cols.iter().map(|&c| r[c].clone()).collect());
    }
    basis.dim()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(f: Field, v: &[i64]) -> Vec<FieldElem> {
        v.iter().map(|&c| f.from_i64(c)).collect()
    }

    #[test]
    fn rank_and_membership() {
        let f = Field::Rationals;
        let b = EchelonBasis::from_rows(f, 3, vec![row(f, &[1, 2, 3]), row(f, &[2, 4, 6]), row(f, &[0, 1, 1])]);
        assert_eq!(b.dim(), 2);
        assert!(b.contains(&row(f, &[1, 3, 4])));
        assert!(!b.contains(&row(f, &[0, 0, 1])));
        assert_eq!(b.pivots(), &[0, 1]);
    }

    #[test]
    fn reduced_form_is_canonical() {
        let f = Field::Prime(3);
        let a = EchelonBasis::from_rows(f, 3, vec![row(f, &[1, 1, 0]), row(f, &[0, 1, 1])]);
        let b = EchelonBasis::from_rows(f, 3, vec![row(f, &[1, 0, 2]), row(f, &[1, 2, 1])]);
        assert_eq!(a.rows(), b.rows());
    }

    #[test]
    fn column_rank() {
        let f = Field::Rationals;
        let rows = vec![row(f, &[1, 0, 1]), row(f, &[0, 1, 1])];
        assert_eq!(rank_on_columns(f, &rows, &[2]), 1);
        assert_eq!(rank_on_columns(f, &rows, &[0, 1]), 2);
        assert_eq!(rank_on_columns(f, &rows, &[]), 0);
    }
}
