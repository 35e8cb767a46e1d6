//! `F_q`-linear error-block codes of type `π = [n_1][n_2]...[n_s]`.
//!
//! A vector of `F_q^n` is split into `s` consecutive blocks of widths
//! `n_1 ≥ n_2 ≥ ... ≥ n_s`; its π-weight counts the nonzero blocks.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::BaseField;
use crate::linalg::Matrix;

/// Default cap on the number of codewords enumerated for distances.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    block_sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl Partition {
    /// Rejects empty partitions, zero-width blocks, and sizes that are not
    /// sorted nonincreasing.
    pub fn new(block_sizes: Vec<usize>) -> Result<Self> {
        if block_sizes.is_empty() || block_sizes.contains(&0) {
            return Err(Error::EmptyBlock(block_sizes));
        }
        if block_sizes.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotSorted(block_sizes));
        }
        let offsets = block_sizes
            .iter()
            .scan(0, |acc, &n| {
                let start = *acc;
                *acc += n;
                Some(start)
            })
            .collect();
        Ok(Self {
            block_sizes,
            offsets,
        })
    }

    /// From `[m_1]^{l_1} [m_2]^{l_2} ...` given as `(m_j, l_j)` pairs.
    pub fn from_grouped(groups: &[(usize, usize)]) -> Result<Self> {
        let sizes = groups
            .iter()
            .flat_map(|&(m, l)| std::iter::repeat_n(m, l))
            .collect();
        Self::new(sizes)
    }

    /// Stable permutation that sorts `sizes` nonincreasing: position `i` of
    /// the sorted order holds original index `perm[i]`.
    pub fn sorting_permutation(sizes: &[usize]) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..sizes.len()).collect();
        perm.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]));
        perm
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn s(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn n(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// `(m_j, l_j)` pairs with `m_1 > m_2 > ...`.
    pub fn grouped(&self) -> Vec<(usize, usize)> {
        self.block_sizes
            .iter()
            .dedup_with_count()
            .map(|(l, &m)| (m, l))
            .collect()
    }

    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i] + self.block_sizes[i]
    }

    /// Coordinates covered by the listed blocks, in block order.
    pub fn columns_of(&self, blocks: &[usize]) -> Vec<usize> {
        blocks.iter().flat_map(|&b| self.block_range(b)).collect()
    }

    pub fn block<'a>(&self, v: &'a [u32], i: usize) -> &'a [u32] {
        &v[self.block_range(i)]
    }

    /// Number of nonzero blocks of `v`.
    pub fn pi_weight(&self, v: &[u32]) -> Result<usize> {
        if v.len() != self.n() {
            return Err(Error::WrongLength {
                expected: self.n(),
                got: v.len(),
            });
        }
        Ok(self.pi_weight_unchecked(v))
    }

    fn pi_weight_unchecked(&self, v: &[u32]) -> usize {
        (0..self.s())
            .filter(|&i| self.block(v, i).iter().any(|&x| x != 0))
            .count()
    }

    /// `n_1 + ... + n_j` for the first `j` blocks.
    pub fn leading_sum(&self, j: usize) -> usize {
        self.block_sizes[..j].iter().sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, l) in self.grouped() {
            if l == 1 {
                write!(f, "[{m}]")?;
            } else {
                write!(f, "[{m}]^{l}")?;
            }
        }
        Ok(())
    }
}

/// A linear code of type π, stored as a row-reduced generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCode {
    partition: Partition,
    field: Arc<BaseField>,
    gen: Matrix,
}

impl BlockCode {
    /// Row-reduces `rows` and drops dependent rows; the row space is kept.
    pub fn new(partition: Partition, field: Arc<BaseField>, rows: &[Vec<u32>]) -> Result<Self> {
        let n = partition.n();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::WrongLength {
                    expected: n,
                    got: row.len(),
                });
            }
            if let Some(pos) = row.iter().position(|&x| !field.contains(x)) {
                return Err(Error::AlphabetViolation {
                    value: row[pos] as u64,
                    size: field.q(),
                    position: Some(i * n + pos),
                    line: None,
                });
            }
        }
        let gen = Matrix::from_rows(n, rows)?.row_reduced(&field);
        Ok(Self {
            partition,
            field,
            gen,
        })
    }

    pub fn from_matrix(partition: Partition, field: Arc<BaseField>, gen: &Matrix) -> Result<Self> {
        Self::new(partition, field, &gen.row_vecs())
    }

    pub fn zero(partition: Partition, field: Arc<BaseField>) -> Self {
        let n = partition.n();
        Self {
            partition,
            field,
            gen: Matrix::zeros(0, n),
        }
    }

    pub fn full(partition: Partition, field: Arc<BaseField>) -> Self {
        let n = partition.n();
        Self {
            partition,
            field,
            gen: Matrix::identity(n),
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<BaseField> {
        &self.field
    }

    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    /// Number of codewords, `q^k`, if it fits.
    pub fn size(&self) -> Option<u128> {
        (self.field.q() as u128).checked_pow(self.k() as u32)
    }

    fn check_cap(&self, cap: u64) -> Result<()> {
        match self.size() {
            Some(size) if size <= cap as u128 => Ok(()),
            size => Err(Error::CapExceeded {
                size: size.unwrap_or(u128::MAX),
                cap,
            }),
        }
    }

    /// Row-space equality.
    pub fn same_code(&self, other: &BlockCode) -> bool {
        self.partition == other.partition && self.gen == other.gen
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        if v.len() != self.n() {
            return false;
        }
        let mut rows = self.gen.row_vecs();
        rows.push(v.to_vec());
        Matrix::from_rows(self.n(), &rows)
            .map(|m| m.rank(&self.field) == self.k())
            .unwrap_or(false)
    }

    /// Kernel of the generator under the Euclidean inner product, leftmost
    /// pivots first.
    pub fn parity_check(&self) -> ParityCheck {
        ParityCheck {
            partition: self.partition.clone(),
            field: self.field.clone(),
            mat: self.gen.kernel(&self.field),
        }
    }

    /// The Euclidean dual code.
    pub fn dual(&self) -> BlockCode {
        let h = self.gen.kernel(&self.field);
        BlockCode {
            partition: self.partition.clone(),
            gen: h.row_reduced(&self.field),
            field: self.field.clone(),
        }
    }

    /// Visits every codeword, zero first.
    pub fn for_each_codeword(&self, cap: u64, visit: impl FnMut(&[u32])) -> Result<()> {
        self.check_cap(cap)?;
        self.gen.for_each_in_span(&self.field, visit);
        Ok(())
    }

    pub fn codewords(&self, cap: u64) -> Result<Vec<Vec<u32>>> {
        let mut out = Vec::new();
        self.for_each_codeword(cap, |c| out.push(c.to_vec()))?;
        Ok(out)
    }

    /// Minimum π-weight over nonzero codewords by full enumeration.
    pub fn min_pi_distance(&self, cap: u64) -> Result<usize> {
        if self.k() == 0 {
            return Err(Error::ZeroCode);
        }
        let mut best = usize::MAX;
        self.for_each_codeword(cap, |c| {
            let w = self.partition.pi_weight_unchecked(c);
            if w > 0 && w < best {
                best = w;
            }
        })?;
        Ok(best)
    }

    /// Distance via the parity-check route: the smallest number of blocks
    /// whose columns of `H` are linearly dependent. Independent of
    /// [`BlockCode::min_pi_distance`]; used as a cross-check.
    pub fn min_pi_distance_by_blocks(&self) -> Result<usize> {
        if self.k() == 0 {
            return Err(Error::ZeroCode);
        }
        let h = self.parity_check();
        for t in 1..=self.partition.s() {
            for blocks in (0..self.partition.s()).combinations(t) {
                if !h.block_independence(&blocks)? {
                    return Ok(t);
                }
            }
        }
        Err(Error::Inconsistent(
            "a nonzero code must have a dependent set of parity-check blocks".into(),
        ))
    }

    /// Checks `n - k ≥ n_1 + ... + n_{d_π - 1}` and reports equality (MDS).
    pub fn singleton_report(&self, cap: u64) -> Result<CodeSingleton> {
        let d_pi = self.min_pi_distance(cap)?;
        let redundancy = self.n() - self.k();
        let rhs = self.partition.leading_sum(d_pi - 1);
        if redundancy < rhs {
            return Err(Error::BoundViolation(format!(
                "n - k = {redundancy} < {rhs} = sum of the {} largest blocks",
                d_pi - 1
            )));
        }
        Ok(CodeSingleton {
            d_pi,
            redundancy,
            rhs,
            is_mds: redundancy == rhs,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSingleton {
    pub d_pi: usize,
    /// `n - k`
    pub redundancy: usize,
    /// `n_1 + ... + n_{d_π - 1}`
    pub rhs: usize,
    pub is_mds: bool,
}

/// A parity-check matrix `H = [H_1 | ... | H_s]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheck {
    partition: Partition,
    field: Arc<BaseField>,
    mat: Matrix,
}

impl ParityCheck {
    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Whether the union of the columns of the chosen blocks is linearly
    /// independent over `F_q`.
    pub fn block_independence(&self, blocks: &[usize]) -> Result<bool> {
        let s = self.partition.s();
        if let Some(&bad) = blocks.iter().find(|&&b| b >= s) {
            return Err(Error::BadIndex { index: bad, bound: s });
        }
        let cols = self.partition.columns_of(blocks);
        if cols.is_empty() {
            return Ok(true);
        }
        let sub = self.mat.select_columns(&cols);
        Ok(sub.rank(&self.field) == cols.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Arc<BaseField> {
        Arc::new(BaseField::from_order(2).unwrap())
    }

    fn sec6() -> BlockCode {
        let rows = vec![
            vec![0, 0, 1, 1, 0, 1, 0, 1, 1, 1],
            vec![0, 1, 0, 0, 0, 1, 1, 1, 1, 0],
            vec![1, 0, 0, 1, 0, 1, 1, 0, 0, 0],
            vec![0, 0, 0, 1, 1, 1, 1, 1, 0, 1],
        ];
        BlockCode::new(Partition::new(vec![2, 2, 2, 2, 1, 1]).unwrap(), f2(), &rows).unwrap()
    }

    #[test]
    fn pi_weights() {
        let p = Partition::new(vec![3, 3, 1, 1, 1]).unwrap();
        assert_eq!(p.pi_weight(&[1, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap(), 1);
        assert_eq!(p.pi_weight(&[1, 0, 0, 0, 1, 0, 0, 0, 0]).unwrap(), 2);
        assert_eq!(p.pi_weight(&[1, 1, 1, 0, 1, 0, 1, 1, 1]).unwrap(), 5);
        assert_eq!(p.pi_weight(&[0; 9]).unwrap(), 0);
        assert!(matches!(p.pi_weight(&[0; 8]), Err(Error::WrongLength { .. })));
    }

    #[test]
    fn partition_forms() {
        let p = Partition::from_grouped(&[(3, 2), (1, 3)]).unwrap();
        assert_eq!(p.block_sizes(), &[3, 3, 1, 1, 1]);
        assert_eq!(p.grouped(), vec![(3, 2), (1, 3)]);
        assert_eq!((p.s(), p.n()), (5, 9));
        assert_eq!(p.to_string(), "[3]^2[1]^3");
        assert_eq!(Partition::new(vec![1, 2]), Err(Error::NotSorted(vec![1, 2])));
        assert_eq!(Partition::sorting_permutation(&[1, 2, 1, 3]), vec![3, 1, 0, 2]);
        assert!(Partition::new(vec![]).is_err());
    }

    #[test]
    fn make_code_ranks() {
        let p = Partition::new(vec![1; 4]).unwrap();
        let zero = BlockCode::new(p.clone(), f2(), &[vec![0; 4]]).unwrap();
        assert_eq!(zero.k(), 0);
        assert_eq!(zero.min_pi_distance(DEFAULT_ENUM_CAP), Err(Error::ZeroCode));
        let rows: Vec<Vec<u32>> = (0..4).map(|i| (0..4).map(|j| u32::from(i == j)).collect()).collect();
        let full = BlockCode::new(p.clone(), f2(), &rows).unwrap();
        assert_eq!(full.k(), 4);
        assert_eq!(full.dual().k(), 0);
        assert!(matches!(
            BlockCode::new(p, f2(), &[vec![0, 2, 0, 0]]),
            Err(Error::AlphabetViolation { value: 2, .. })
        ));
        assert_eq!(sec6().k(), 4);
    }

    #[test]
    fn worked_example_distances() {
        let c = sec6();
        assert_eq!(c.min_pi_distance(DEFAULT_ENUM_CAP).unwrap(), 4);
        let d = c.dual();
        assert_eq!(d.k(), 6);
        assert_eq!(d.min_pi_distance(DEFAULT_ENUM_CAP).unwrap(), 3);
        assert_eq!(c.min_pi_distance_by_blocks().unwrap(), 4);
        assert_eq!(d.min_pi_distance_by_blocks().unwrap(), 3);
        let report = c.singleton_report(DEFAULT_ENUM_CAP).unwrap();
        assert_eq!((report.redundancy, report.rhs, report.is_mds), (6, 6, true));
    }

    #[test]
    fn worked_example_parity_check_row_space() {
        let printed = Matrix::from_rows(
            10,
            &[
                vec![1, 0, 1, 1, 1, 0, 0, 0, 0, 0],
                vec![0, 1, 0, 1, 0, 1, 0, 0, 0, 0],
                vec![0, 1, 1, 1, 0, 0, 1, 0, 0, 0],
                vec![1, 1, 0, 1, 0, 0, 0, 1, 0, 0],
                vec![0, 1, 1, 0, 0, 0, 0, 0, 1, 0],
                vec![1, 0, 0, 1, 0, 0, 0, 0, 0, 1],
            ],
        )
        .unwrap();
        let c = sec6();
        assert!(c.dual().generator().same_row_space(&printed, c.field()));
        let h = c.parity_check();
        for pair in (0..6).combinations(2) {
            assert!(h.block_independence(&pair).unwrap(), "{pair:?}");
        }
        assert!(h.block_independence(&[]).unwrap());
        assert!(matches!(h.block_independence(&[6]), Err(Error::BadIndex { .. })));
    }

    #[test]
    fn zero_column_block_is_dependent() {
        // code whose dual has a zero column at position 0: take C containing e_0
        let p = Partition::new(vec![1, 1, 1]).unwrap();
        let c = BlockCode::new(p, f2(), &[vec![1, 0, 0], vec![0, 1, 1]]).unwrap();
        let h = c.parity_check();
        assert!(!h.block_independence(&[0]).unwrap());
        assert_eq!(c.min_pi_distance(DEFAULT_ENUM_CAP).unwrap(), 1);
    }

    #[test]
    fn repetition_code() {
        let p = Partition::new(vec![1, 1]).unwrap();
        let c = BlockCode::new(p, f2(), &[vec![1, 1]]).unwrap();
        assert_eq!(c.min_pi_distance(DEFAULT_ENUM_CAP).unwrap(), 2);
        let full = BlockCode::full(Partition::new(vec![2, 1]).unwrap(), f2());
        let r = full.singleton_report(DEFAULT_ENUM_CAP).unwrap();
        assert_eq!((r.d_pi, r.rhs, r.is_mds), (1, 0, true));
    }

    #[test]
    fn enumeration_cap() {
        let c = sec6();
        assert!(matches!(c.min_pi_distance(15), Err(Error::CapExceeded { size: 16, cap: 15 })));
    }
}
