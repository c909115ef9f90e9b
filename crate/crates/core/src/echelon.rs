//! Reduced row-echelon accumulation over `F_p`.

use std::collections::HashSet;

use crate::field::PrimeField;

/// A subspace of `F_p^width` kept in canonical reduced row-echelon form.
///
/// Rows are sorted by pivot column; every pivot is 1 and is the only nonzero
/// entry of its column. The form depends only on the subspace, not on the
/// insertion order.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    width: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    seen: HashSet<Vec<u32>>,
}

impl Echelon {
    pub fn new(field: PrimeField, width: usize) -> Self {
        Echelon {
            field,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            seen: HashSet::new(),
        }
    }

    pub fn from_rows(
        field: PrimeField,
        width: usize,
        rows: impl IntoIterator<Item = Vec<u32>>,
    ) -> Self {
        let mut e = Echelon::new(field, width);
        for r in rows {
            e.insert(&r);
        }
        e
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<u32>> {
        self.rows
    }

    /// `v` minus its projection onto the pivot columns.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut r = v.to_vec();
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            let c = r[col];
            if c == 0 {
                continue;
            }
            let neg = f.neg(c);
            for (x, &y) in r.iter_mut().zip(row) {
                if y != 0 {
                    *x = f.add(*x, f.mul(neg, y));
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&c| c == 0)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        debug_assert_eq!(v.len(), self.width);
        if self.is_full() || self.seen.contains(v) {
            return false;
        }
        self.seen.insert(v.to_vec());
        let f = self.field;
        let mut r = self.reduce(v);
        let Some(col) = r.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = f.inv(r[col]).expect("nonzero pivot");
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[col];
            if c == 0 {
                continue;
            }
            let neg = f.neg(c);
            for (x, &y) in row.iter_mut().zip(&r) {
                if y != 0 {
                    *x = f.add(*x, f.mul(neg, y));
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < col);
        self.rows.insert(at, r);
        self.pivots.insert(at, col);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_regardless_of_order() {
        let f = PrimeField::new(5).unwrap();
        let vs = [vec![1, 2, 3], vec![2, 4, 1], vec![0, 0, 1], vec![0, 1, 1]];
        let a = Echelon::from_rows(f, 3, vs[..3].iter().cloned());
        let b = Echelon::from_rows(f, 3, [vs[2].clone(), vs[1].clone(), vs[0].clone()]);
        assert_eq!(a.rows(), b.rows());
        assert_eq!(a.rank(), 2);
        assert!(a.contains(&[1, 2, 0]));
        assert!(!a.contains(&[0, 1, 0]));
        let c = Echelon::from_rows(f, 3, vs.iter().cloned());
        assert!(c.is_full());
    }
}
