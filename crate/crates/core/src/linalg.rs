//! Dense matrices over a [`BaseField`] and exact Gaussian elimination.

use crate::error::{Error, Result};
use crate::field::BaseField;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row vectors of width `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::WrongLength {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, field: &BaseField) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = field.add(out.get(i, j), field.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, v: &[u32], field: &BaseField) -> Vec<u32> {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = field.add(*o, field.mul(a, self.get(i, j)));
            }
        }
        out
    }

    /// Keeps the listed columns in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    /// Block-diagonal matrix from square blocks.
    pub fn block_diagonal(blocks: &[Matrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.rows;
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduced row echelon form, pivots chosen leftmost column
    /// first. Returns the pivot columns.
    pub fn rref(&mut self, field: &BaseField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            self.swap_rows(lead, p);
            let inv = field.inv(self.get(lead, col));
            for c in 0..self.cols {
                let v = field.mul(self.get(lead, c), inv);
                self.set(lead, c, v);
            }
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in 0..self.cols {
                    let v = field.sub(self.get(r, c), field.mul(factor, self.get(lead, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            lead += 1;
        }
        pivots
    }

    /// Reduced row echelon form with zero rows removed.
    pub fn row_reduced(&self, field: &BaseField) -> Self {
        let mut m = self.clone();
        let pivots = m.rref(field);
        m.data.truncate(pivots.len() * m.cols);
        m.rows = pivots.len();
        m
    }

    pub fn rank(&self, field: &BaseField) -> usize {
        self.clone().rref(field).len()
    }

    /// Basis of `{ x : self · xᵀ = 0 }`, one vector per free column in
    /// increasing column order.
    pub fn kernel(&self, field: &BaseField) -> Self {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            out.set(i, f, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(i, pc, field.neg(m.get(r, f)));
            }
        }
        out
    }

    pub fn inverse(&self, field: &BaseField) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(aug.select_columns(&cols))
    }

    /// Whether both matrices span the same row space.
    pub fn same_row_space(&self, other: &Matrix, field: &BaseField) -> bool {
        self.cols == other.cols && self.row_reduced(field) == other.row_reduced(field)
    }

    /// Calls `visit` on every vector of the row space, zero first; message
    /// digits advance with the first row fastest.
    pub fn for_each_in_span(&self, field: &BaseField, mut visit: impl FnMut(&[u32])) {
        let q = field.q() as usize;
        let multiples: Vec<Vec<Vec<u32>>> = (0..self.rows)
            .map(|r| {
                (0..q as u32)
                    .map(|a| self.row(r).iter().map(|&x| field.mul(a, x)).collect())
                    .collect()
            })
            .collect();
        let mut digits = vec![0usize; self.rows];
        let mut current = vec![0u32; self.cols];
        loop {
            visit(&current);
            let mut j = 0;
            loop {
                if j == self.rows {
                    return;
                }
                let old = digits[j];
                let new = if old + 1 == q { 0 } else { old + 1 };
                for (c, x) in current.iter_mut().enumerate() {
                    *x = field.add(field.sub(*x, multiples[j][old][c]), multiples[j][new][c]);
                }
                digits[j] = new;
                if new != 0 {
                    break;
                }
                j += 1;
            }
        }
    }
}

pub fn dot(u: &[u32], v: &[u32], field: &BaseField) -> u32 {
    u.iter()
        .zip(v)
        .fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> BaseField {
        BaseField::from_order(q).unwrap()
    }

    #[test]
    fn kernel_is_orthogonal_and_complementary() {
        let f3 = f(3);
        let m = Matrix::from_rows(4, &[vec![1, 2, 0, 1], vec![2, 1, 1, 0]]).unwrap();
        let k = m.kernel(&f3);
        assert_eq!(k.rows() + m.rank(&f3), 4);
        for r in 0..k.rows() {
            for s in 0..m.rows() {
                assert_eq!(dot(k.row(r), m.row(s), &f3), 0);
            }
        }
    }

    #[test]
    fn inverse_round_trip_over_f4() {
        let f4 = f(4);
        let m = Matrix::from_rows(2, &[vec![2, 1], vec![1, 1]]).unwrap();
        let inv = m.inverse(&f4).unwrap();
        assert!(m.mul(&inv, &f4).is_identity());
        let singular = Matrix::from_rows(2, &[vec![2, 3], vec![2, 3]]).unwrap();
        assert!(singular.inverse(&f4).is_none());
    }

    #[test]
    fn span_enumeration_visits_each_vector_once() {
        let f3 = f(3);
        let g = Matrix::from_rows(3, &[vec![1, 0, 2], vec![0, 1, 1]]).unwrap();
        let mut seen = std::collections::HashSet::new();
        g.for_each_in_span(&f3, |v| {
            assert!(seen.insert(v.to_vec()));
        });
        assert_eq!(seen.len(), 9);
        assert!(seen.contains(&vec![0, 0, 0]));
        assert!(seen.contains(&vec![2, 1, 2]));
    }

    #[test]
    fn empty_span_is_zero_vector() {
        let g = Matrix::zeros(0, 3);
        let mut count = 0;
        g.for_each_in_span(&f(2), |v| {
            assert_eq!(v, &[0, 0, 0]);
            count += 1;
        });
        assert_eq!(count, 1);
    }
}
