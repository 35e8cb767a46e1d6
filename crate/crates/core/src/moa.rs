//! Mixed orthogonal arrays over `F_{q^{n_1}} × ... × F_{q^{n_s}}`.
//!
//! Columns are kept sorted so that `n_1 ≥ n_2 ≥ ... ≥ n_s`; all bound
//! formulas below index blocks in that order.

use std::collections::{HashMap, HashSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::error_block::Partition;
use crate::field::{BaseField, ExtField};
use crate::linalg::Matrix;

/// Work budget (subsets × rows) for the direct irredundancy cross-check.
pub const SUBARRAY_CHECK_BUDGET: u128 = 1_000_000;
/// Largest `M` for which the linear distance shortcut is cross-checked
/// against the pairwise definition.
pub const PAIRWISE_CROSS_CHECK_ROWS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Linearity {
    Unverified,
    VerifiedLinear,
    VerifiedNonlinear,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedArray {
    fields: Vec<ExtField>,
    rows: Vec<Vec<u32>>,
    linearity: Linearity,
    // column i was column permutation[i] of the input
    permutation: Option<Vec<usize>>,
}

impl MixedArray {
    /// Validates symbols and requires nonincreasing column degrees.
    pub fn new(fields: Vec<ExtField>, rows: Vec<Vec<u32>>) -> Result<Self> {
        let degrees: Vec<usize> = fields.iter().map(ExtField::degree).collect();
        if degrees.is_empty() || degrees.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotSorted(degrees));
        }
        if let Some(i) = fields.iter().position(|f| !same_base(f.base(), fields[0].base())) {
            return Err(Error::FieldMismatch(i));
        }
        if rows.is_empty() {
            return Err(Error::TooFewRows(0));
        }
        let s = fields.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != s {
                return Err(Error::WrongLength {
                    expected: s,
                    got: row.len(),
                });
            }
            for (c, (&x, f)) in row.iter().zip(&fields).enumerate() {
                if !f.contains(x) {
                    return Err(Error::AlphabetViolation {
                        value: x as u64,
                        size: f.order() as u64,
                        position: Some(r * s + c),
                        line: None,
                    });
                }
            }
        }
        Ok(Self {
            fields,
            rows,
            linearity: Linearity::Unverified,
            permutation: None,
        })
    }

    /// Like [`MixedArray::new`] but reorders columns by nonincreasing degree
    /// (stable) and records the permutation when it is not the identity.
    pub fn new_sorted(fields: Vec<ExtField>, rows: Vec<Vec<u32>>) -> Result<Self> {
        let degrees: Vec<usize> = fields.iter().map(ExtField::degree).collect();
        let perm = Partition::sorting_permutation(&degrees);
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return Self::new(fields, rows);
        }
        let sorted_fields = perm.iter().map(|&p| fields[p].clone()).collect();
        let mut sorted_rows = Vec::with_capacity(rows.len());
        for row in &rows {
            if row.len() != fields.len() {
                return Err(Error::WrongLength {
                    expected: fields.len(),
                    got: row.len(),
                });
            }
            sorted_rows.push(perm.iter().map(|&p| row[p]).collect());
        }
        let mut arr = Self::new(sorted_fields, sorted_rows)?;
        arr.permutation = Some(perm);
        Ok(arr)
    }

    pub fn fields(&self) -> &[ExtField] {
        &self.fields
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<u32>> {
        self.rows
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn s(&self) -> usize {
        self.fields.len()
    }

    pub fn base(&self) -> &BaseField {
        self.fields[0].base()
    }

    pub fn q(&self) -> u64 {
        self.base().q()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.fields.iter().map(ExtField::degree).collect()
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.degrees()).expect("degrees are sorted and positive")
    }

    pub fn permutation(&self) -> Option<&[usize]> {
        self.permutation.as_deref()
    }

    pub fn linearity(&self) -> Linearity {
        self.linearity
    }

    /// Rows sorted, for order-independent comparison.
    pub fn row_set(&self) -> Vec<Vec<u32>> {
        let mut rows = self.rows.clone();
        rows.sort();
        rows
    }

    pub fn has_duplicate_rows(&self) -> bool {
        let set: HashSet<&Vec<u32>> = self.rows.iter().collect();
        set.len() != self.rows.len()
    }

    /// `q^{n_{i_1} + ... + n_{i_t}}`.
    pub fn tuple_count(&self, cols: &[usize]) -> Result<u128> {
        let exp: usize = cols.iter().map(|&c| self.fields[c].degree()).sum();
        q_pow(self.q(), exp)
    }

    fn check_subset(&self, cols: &[usize]) -> Result<()> {
        let s = self.s();
        if let Some(&bad) = cols.iter().find(|&&c| c >= s) {
            return Err(Error::BadIndex { index: bad, bound: s });
        }
        if cols.iter().duplicates().next().is_some() || cols.is_empty() {
            return Err(Error::BadIndex {
                index: cols.first().copied().unwrap_or(0),
                bound: s,
            });
        }
        Ok(())
    }

    /// Index `λ` of a column subset: the common number of occurrences of
    /// every tuple in the projection, or `NotUniform` with the first two
    /// tuples (in lexicographic order) whose counts differ.
    pub fn subset_index(&self, cols: &[usize]) -> Result<u64> {
        self.check_subset(cols)?;
        let orders: Vec<u128> = cols.iter().map(|&c| self.fields[c].order() as u128).collect();
        let total = self.tuple_count(cols)?;
        let mut counts: HashMap<u128, u64> = HashMap::new();
        for row in &self.rows {
            let key = cols
                .iter()
                .zip(&orders)
                .fold(0u128, |acc, (&c, &o)| acc * o + row[c] as u128);
            *counts.entry(key).or_default() += 1;
        }
        let m = self.m() as u128;
        if total <= m && counts.len() as u128 == total {
            let first = counts[&0];
            if counts.values().all(|&c| c == first) {
                return Ok(first);
            }
        }
        let count = |k: u128| counts.get(&k).copied().unwrap_or(0);
        let c0 = count(0);
        let witness = if c0 == 0 {
            *counts.keys().min().expect("arrays have at least one row")
        } else {
            (1..total)
                .find(|&k| count(k) != c0)
                .expect("a non-uniform projection has a differing tuple")
        };
        let decode = |mut k: u128| {
            let mut tuple = vec![0u32; orders.len()];
            for (slot, &o) in tuple.iter_mut().zip(&orders).rev() {
                *slot = (k % o) as u32;
                k /= o;
            }
            tuple
        };
        Err(Error::NotUniform {
            cols: cols.to_vec(),
            first: decode(0),
            first_count: c0,
            second: decode(witness),
            second_count: count(witness),
        })
    }

    /// Indices of every `t`-subset, lexicographic, or the first failure.
    pub fn strength_evidence(&self, t: usize) -> Result<Vec<SubsetIndex>> {
        if t > self.s() {
            return Err(Error::StrengthViolation(t));
        }
        (0..self.s())
            .combinations(t)
            .filter(|c| !c.is_empty())
            .map(|cols| {
                let index = self.subset_index(&cols)?;
                Ok(SubsetIndex { cols, index })
            })
            .collect()
    }

    pub fn verify_strength(&self, t: usize) -> bool {
        t == 0 || self.strength_evidence(t).is_ok()
    }

    /// Largest `t` with [`MixedArray::verify_strength`]; strength `t`
    /// implies strength `t - 1`, so the scan stops at the first failure.
    pub fn max_strength(&self) -> usize {
        (1..=self.s())
            .take_while(|&t| self.verify_strength(t))
            .last()
            .unwrap_or(0)
    }

    /// `λ_min = M / (q^{n_1} ... q^{n_t})`, checked against the minimum of
    /// the subset indices.
    pub fn lambda_min(&self, t: usize) -> Result<u64> {
        let evidence = self
            .strength_evidence(t)
            .map_err(|_| Error::StrengthViolation(t))?;
        let lead: Vec<usize> = (0..t).collect();
        let by_formula = (self.m() as u128 / self.tuple_count(&lead)?) as u64;
        if let Some(min) = evidence.iter().map(|e| e.index).min() {
            if min != by_formula {
                return Err(Error::Inconsistent(format!(
                    "lambda_min {by_formula} from the leading blocks but {min} over all subsets"
                )));
            }
        }
        Ok(by_formula)
    }

    fn pairwise_distance(&self) -> usize {
        let mut best = usize::MAX;
        for (i, a) in self.rows.iter().enumerate() {
            for b in &self.rows[i + 1..] {
                let d = a.iter().zip(b).filter(|(x, y)| x != y).count();
                best = best.min(d);
            }
        }
        best
    }

    /// Minimum Hamming distance over pairs of rows. Duplicate rows give 0
    /// with `duplicate_rows` set.
    pub fn min_hamming_distance(&self) -> Result<HammingDistance> {
        if self.m() < 2 {
            return Err(Error::TooFewRows(self.m()));
        }
        if self.has_duplicate_rows() {
            return Ok(HammingDistance {
                value: 0,
                duplicate_rows: true,
            });
        }
        let value = if self.linearity == Linearity::VerifiedLinear {
            let by_weight = self
                .rows
                .iter()
                .map(|r| r.iter().filter(|&&x| x != 0).count())
                .filter(|&w| w > 0)
                .min()
                .expect("a linear array with two rows has a nonzero row");
            if self.m() <= PAIRWISE_CROSS_CHECK_ROWS {
                let pairwise = self.pairwise_distance();
                if pairwise != by_weight {
                    return Err(Error::Inconsistent(format!(
                        "minimum weight {by_weight} differs from pairwise distance {pairwise}"
                    )));
                }
            }
            by_weight
        } else {
            self.pairwise_distance()
        };
        Ok(HammingDistance {
            value,
            duplicate_rows: false,
        })
    }

    /// A row as a vector of `F_q^n` in polynomial-basis coordinates.
    pub fn flatten_row(&self, row: &[u32]) -> Vec<u32> {
        row.iter()
            .zip(&self.fields)
            .flat_map(|(&x, f)| f.digits(x))
            .collect()
    }

    /// Whether the rows are pairwise distinct and form an `F_q`-subspace.
    /// Distinct rows inside a span of dimension `r` form the whole span
    /// exactly when there are `q^r` of them.
    pub fn check_linearity(&self) -> bool {
        if self.has_duplicate_rows() {
            return false;
        }
        let n: usize = self.degrees().iter().sum();
        let flat: Vec<Vec<u32>> = self.rows.iter().map(|r| self.flatten_row(r)).collect();
        let rank = Matrix::from_rows(n, &flat)
            .expect("rows have uniform width")
            .rank(self.base());
        q_pow(self.q(), rank).is_ok_and(|size| size == self.m() as u128)
    }

    /// Runs [`MixedArray::check_linearity`] and records the verdict.
    pub fn verify_linearity(mut self) -> Self {
        self.linearity = if self.check_linearity() {
            Linearity::VerifiedLinear
        } else {
            Linearity::VerifiedNonlinear
        };
        self
    }

    pub(crate) fn with_linearity(mut self, linearity: Linearity) -> Self {
        self.linearity = linearity;
        self
    }

    pub fn is_linear(&self) -> bool {
        match self.linearity {
            Linearity::VerifiedLinear => true,
            Linearity::VerifiedNonlinear => false,
            Linearity::Unverified => self.check_linearity(),
        }
    }

    /// Sum of `n_i` over blocks `from..s` (zero based).
    fn tail_sum(&self, from: usize) -> usize {
        self.degrees()[from..].iter().sum()
    }

    fn head_sum(&self, to: usize) -> usize {
        self.degrees()[..to].iter().sum()
    }

    /// Bounds `Π_{i≤t} q^{n_i} ≤ M ≤ Π_{i≥d_H} q^{n_i} ≤ Π_{i≤s-d_H+1} q^{n_i}`,
    /// the Singleton defect and the MDS / almost-MDS verdicts.
    pub fn singleton_analysis(&self, t: usize) -> Result<SingletonAnalysis> {
        let lambda_min = self.lambda_min(t)?;
        let dist = self.min_hamming_distance()?;
        if dist.duplicate_rows {
            return Err(Error::DuplicateRows);
        }
        let d_h = dist.value;
        let s = self.s();
        let q = self.q();
        let m = self.m() as u128;
        let lower = q_pow(q, self.head_sum(t))?;
        let upper_exp = self.tail_sum(d_h - 1);
        let upper = q_pow(q, upper_exp)?;
        let loose = q_pow(q, self.head_sum(s - d_h + 1))?;
        if !(lower <= m && m <= upper && upper <= loose) {
            return Err(Error::BoundViolation(format!(
                "expected {lower} <= {m} <= {upper} <= {loose}"
            )));
        }
        let log_m = exact_log(q, m);
        let (defect, defect_exact) = match log_m {
            Some(e) => ((upper_exp - e) as f64, Some((upper_exp - e) as u64)),
            None => (upper_exp as f64 - (m as f64).ln() / (q as f64).ln(), None),
        };
        let is_mds = m == upper;
        let is_almost_mds = m * q as u128 == upper;
        if defect_exact.is_some() && (defect_exact == Some(0)) != is_mds {
            return Err(Error::Inconsistent("defect 0 disagrees with M = upper".into()));
        }

        let head = self.head_sum(t);
        let tail = upper_exp;
        let lambda_one = lambda_min == 1;
        if (d_h + t == s + 1 || tail == head) && is_mds != lambda_one {
            return Err(Error::Inconsistent(format!(
                "MDS = {is_mds} but lambda_min = {lambda_min} although the equivalence applies"
            )));
        }
        if head + 1 == tail && is_almost_mds != lambda_one {
            return Err(Error::Inconsistent(format!(
                "almost-MDS = {is_almost_mds} but lambda_min = {lambda_min} although the equivalence applies"
            )));
        }
        Ok(SingletonAnalysis {
            t,
            m: self.m() as u64,
            d_h,
            lower,
            upper,
            loose,
            defect,
            defect_exact,
            lambda_min,
            is_mds,
            is_almost_mds,
        })
    }

    /// Irredundancy at strength `t`: `d_H ≥ t + 1`, cross-checked against
    /// pairwise-distinct rows in every `(s - t)`-column subarray when the
    /// work fits [`SUBARRAY_CHECK_BUDGET`].
    pub fn is_irredundant(&self, t: usize) -> Result<Irredundancy> {
        if !self.verify_strength(t) {
            return Err(Error::StrengthViolation(t));
        }
        let s = self.s();
        let d_h = if self.m() >= 2 {
            Some(self.min_hamming_distance()?.value)
        } else {
            None
        };
        let by_distance = d_h.is_none_or(|d| d > t);
        let subsets = binomial(s as u128, (s - t) as u128);
        let by_subarrays = (subsets.saturating_mul(self.m() as u128) <= SUBARRAY_CHECK_BUDGET)
            .then(|| self.subarrays_distinct(s - t));
        if let Some(direct) = by_subarrays {
            if direct != by_distance {
                return Err(Error::Inconsistent(format!(
                    "d_H criterion says {by_distance}, subarray check says {direct}"
                )));
            }
        }
        let two_t_le_s = 2 * t <= s;
        let product_bound = self.head_sum(t) <= self.tail_sum(t);
        if by_distance && !(two_t_le_s && product_bound) {
            return Err(Error::Inconsistent(format!(
                "irredundant array violates 2t <= s ({two_t_le_s}) or the product bound ({product_bound})"
            )));
        }
        Ok(Irredundancy {
            t,
            d_h,
            irredundant: by_distance,
            by_subarrays,
            two_t_le_s,
            product_bound,
        })
    }

    fn subarrays_distinct(&self, width: usize) -> bool {
        (0..self.s()).combinations(width).all(|cols| {
            let mut seen = HashSet::with_capacity(self.m());
            self.rows
                .iter()
                .all(|r| seen.insert(cols.iter().map(|&c| r[c]).collect::<Vec<_>>()))
        })
    }

    /// For `t = ⌊s/2⌋` and `Σ_{j=t+1}^{2t+1} n_j = Σ_{i≤t} n_i`, an IrMOA is
    /// MDS exactly when `λ_min = 1`. When `s = 2t` block `2t + 1` does not
    /// exist and the sum runs over `t+1..s`.
    pub fn extremal_check(&self, t: usize) -> Result<ExtremalCheck> {
        let irr = self.is_irredundant(t)?;
        if !irr.irredundant {
            return Err(Error::NotIrredundant(t));
        }
        let s = self.s();
        let truncated = s == 2 * t;
        let side = self.degrees()[t.min(s)..(2 * t + 1).min(s)].iter().sum::<usize>();
        let applies = t == s / 2 && side == self.head_sum(t);
        let mut check = ExtremalCheck {
            t,
            applies,
            truncated_sum: truncated,
            is_mds: None,
            lambda_min_is_one: None,
        };
        if applies {
            let analysis = self.singleton_analysis(t)?;
            let lambda_one = analysis.lambda_min == 1;
            if analysis.is_mds != lambda_one {
                return Err(Error::Inconsistent(format!(
                    "extremal IrMOA: MDS = {} but lambda_min = {}",
                    analysis.is_mds, analysis.lambda_min
                )));
            }
            check.is_mds = Some(analysis.is_mds);
            check.lambda_min_is_one = Some(lambda_one);
        }
        Ok(check)
    }

    /// `MOA(M, s, (q^{n_1},...,q^{n_s}), t)`, or `IrMOA(...)`.
    pub fn notation(&self, t: usize, irredundant: bool) -> String {
        let q = self.q();
        let alphabets = self
            .degrees()
            .iter()
            .map(|&n| if n == 1 { q.to_string() } else { format!("{q}^{n}") })
            .join(",");
        let prefix = if irredundant { "IrMOA" } else { "MOA" };
        format!("{prefix}({}, {}, ({alphabets}), {t})", self.m(), self.s())
    }

    /// Full diagnostic at strength `t`, defaulting to the maximum strength.
    pub fn analyze(&self, t: Option<usize>) -> Result<MoaReport> {
        let t_max = self.max_strength();
        let t = t.unwrap_or(t_max);
        let indices = self.strength_evidence(t)?;
        let lambda_min = self.lambda_min(t)?;
        let linear = self.is_linear();
        let mut notes = Vec::new();
        if let Some(p) = &self.permutation {
            notes.push(format!(
                "columns reordered by nonincreasing degree; new column i is input column {}",
                p.iter().map(|c| c + 1).join(",")
            ));
        }
        let distance = if self.m() >= 2 {
            Some(self.min_hamming_distance()?)
        } else {
            notes.push("single row: minimum distance undefined".into());
            None
        };
        let duplicate_rows = distance.is_some_and(|d| d.duplicate_rows);
        if duplicate_rows {
            notes.push("duplicate rows: d_H = 0, Singleton analysis skipped".into());
        }
        let singleton = match distance {
            Some(d) if !d.duplicate_rows => Some(self.singleton_analysis(t)?),
            _ => None,
        };
        if let Some(sa) = &singleton {
            if sa.defect_exact.is_none() {
                notes.push(format!(
                    "M = {} is not a power of q; defect {:.6} is approximate and verdicts use M = upper",
                    sa.m, sa.defect
                ));
            }
        }
        let irredundancy = self.is_irredundant(t)?;
        let extremal = if irredundancy.irredundant {
            let ex = self.extremal_check(t)?;
            if ex.truncated_sum {
                notes.push(
                    "s = 2t: extremal side condition summed over blocks t+1..s".into(),
                );
            }
            Some(ex)
        } else {
            None
        };
        Ok(MoaReport {
            parameters: self.notation(t, irredundancy.irredundant),
            m: self.m() as u64,
            s: self.s(),
            q: self.q(),
            degrees: self.degrees(),
            column_permutation: self.permutation.clone(),
            linear,
            t,
            t_max,
            indices,
            lambda_min,
            d_h: distance.map(|d| d.value),
            duplicate_rows,
            singleton,
            irredundancy,
            extremal,
            notes,
        })
    }
}

fn same_base(a: &BaseField, b: &BaseField) -> bool {
    a.order() == b.order() && a.modulus() == b.modulus()
}

pub(crate) fn q_pow(q: u64, exp: usize) -> Result<u128> {
    (q as u128)
        .checked_pow(exp as u32)
        .ok_or(Error::Overflow("power of q"))
}

/// `log_q m` when `m` is an exact power of `q`.
fn exact_log(q: u64, mut m: u128) -> Option<usize> {
    let q = q as u128;
    let mut e = 0;
    while m > 1 {
        if !m.is_multiple_of(q) {
            return None;
        }
        m /= q;
        e += 1;
    }
    (m == 1).then_some(e)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Index of one column subset; columns are zero based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetIndex {
    pub cols: Vec<usize>,
    pub index: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HammingDistance {
    pub value: usize,
    pub duplicate_rows: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingletonAnalysis {
    pub t: usize,
    pub m: u64,
    pub d_h: usize,
    /// `Π_{i=1}^t q^{n_i}`
    pub lower: u128,
    /// `Π_{i=d_H}^s q^{n_i}`
    pub upper: u128,
    /// `Π_{i=1}^{s-d_H+1} q^{n_i}`
    pub loose: u128,
    pub defect: f64,
    pub defect_exact: Option<u64>,
    pub lambda_min: u64,
    pub is_mds: bool,
    pub is_almost_mds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Irredundancy {
    pub t: usize,
    pub d_h: Option<usize>,
    pub irredundant: bool,
    /// Direct check over all `(s - t)`-column subarrays, when affordable.
    pub by_subarrays: Option<bool>,
    pub two_t_le_s: bool,
    /// `Π_{i≤t} q^{n_i} ≤ Π_{i>t} q^{n_i}`
    pub product_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalCheck {
    pub t: usize,
    pub applies: bool,
    pub truncated_sum: bool,
    pub is_mds: Option<bool>,
    pub lambda_min_is_one: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoaReport {
    pub parameters: String,
    pub m: u64,
    pub s: usize,
    pub q: u64,
    pub degrees: Vec<usize>,
    pub column_permutation: Option<Vec<usize>>,
    pub linear: bool,
    pub t: usize,
    pub t_max: usize,
    pub indices: Vec<SubsetIndex>,
    pub lambda_min: u64,
    pub d_h: Option<usize>,
    pub duplicate_rows: bool,
    pub singleton: Option<SingletonAnalysis>,
    pub irredundancy: Irredundancy,
    pub extremal: Option<ExtremalCheck>,
    pub notes: Vec<String>,
}

impl fmt::Display for MixedArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{}", row.iter().join(" "))?;
        }
        Ok(())
    }
}
