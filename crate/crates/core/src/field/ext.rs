use std::fmt;
use std::sync::Arc;

use super::base::{BaseField, PrimePower};
use super::poly;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Fields up to this order get a precomputed multiplication table.
pub const TABLE_LIMIT: u64 = 256;
/// Largest extension field order supported.
pub const MAX_EXT_ORDER: u64 = 1 << 24;
/// Default cap on the field order for the self-dual basis search.
pub const SELF_DUAL_SEARCH_CAP: u64 = 4096;

/// An `F_q`-basis of an extension field together with its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    elements: Vec<u32>,
    gram: Matrix,
    is_self_dual: bool,
    // row i: polynomial-basis coordinates of element i
    change: Matrix,
    // inverse of `change`
    to_basis: Matrix,
}

impl Basis {
    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn is_self_dual(&self) -> bool {
        self.is_self_dual
    }

    pub fn is_polynomial(&self) -> bool {
        self.change.is_identity()
    }
}

/// The extension `F_{q^m} = F_q[x] / (modulus)`.
///
/// Elements are encoded as `Σ c_j q^j` where `c_j` are the coefficients of
/// the polynomial representative, so for `F_4` the labels are
/// `0, 1, α ↦ 2, α+1 ↦ 3`. The encoding never depends on the working basis;
/// the working basis only drives [`ExtField::coords`] and
/// [`ExtField::from_coords`].
#[derive(Clone)]
pub struct ExtField {
    base: Arc<BaseField>,
    degree: usize,
    modulus: Vec<u32>,
    order: u32,
    mul_table: Option<Arc<[u32]>>,
    basis: Basis,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtField({self})")
    }
}

impl fmt::Display for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pp = self.base.order();
        write!(f, "GF({}^{}, {};", pp.p(), pp.r(), self.degree)?;
        for c in &self.modulus {
            write!(f, " {c}")?;
        }
        write!(f, ")")
    }
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other) && self.basis == other.basis
    }
}

impl Eq for ExtField {}

impl ExtField {
    /// Builds `F_{q^m}` over `base`. Without an explicit modulus the first
    /// monic irreducible of degree `m` (low coefficients read as a base-`q`
    /// integer) is used. The working basis is the polynomial basis.
    pub fn new(base: Arc<BaseField>, degree: usize, modulus: Option<Vec<u32>>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::BadModulus {
                expected: 0,
                got: modulus.unwrap_or_default(),
            });
        }
        let order = base
            .q()
            .checked_pow(degree as u32)
            .filter(|&o| o <= MAX_EXT_ORDER)
            .ok_or(Error::UnsupportedField {
                q: base.q(),
                reason: "extension order above 2^24",
            })?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != degree + 1 || m[degree] != 1 || m.iter().any(|&c| !base.contains(c)) {
                    return Err(Error::BadModulus {
                        expected: degree,
                        got: m,
                    });
                }
                if !poly::is_irreducible(&base, &m) {
                    return Err(Error::NotIrreducible(m));
                }
                m
            }
            None => poly::first_irreducible(&base, degree),
        };
        let mut field = Self {
            base,
            degree,
            modulus,
            order: order as u32,
            mul_table: None,
            basis: Basis {
                elements: Vec::new(),
                gram: Matrix::zeros(0, 0),
                is_self_dual: false,
                change: Matrix::identity(degree),
                to_basis: Matrix::identity(degree),
            },
        };
        if order <= TABLE_LIMIT {
            let n = order as u32;
            let table: Vec<u32> = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .map(|(a, b)| field.mul_poly(a, b))
                .collect();
            field.mul_table = Some(table.into());
        }
        let poly_basis = field.polynomial_basis_elements();
        field.basis = field.make_basis(&poly_basis)?;
        Ok(field)
    }

    /// Convenience constructor from a prime power.
    pub fn over(base: PrimePower, degree: usize, modulus: Option<Vec<u32>>) -> Result<Self> {
        Self::new(Arc::new(BaseField::new(base)?), degree, modulus)
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<BaseField> {
        &self.base
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn contains(&self, x: u32) -> bool {
        x < self.order
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order
    }

    /// Same base field and modulus; the working basis may differ.
    pub fn same_field(&self, other: &ExtField) -> bool {
        self.base.order() == other.base.order()
            && self.base.modulus() == other.base.modulus()
            && self.modulus == other.modulus
    }

    /// Coefficients of the polynomial representative of `x`.
    pub fn digits(&self, mut x: u32) -> Vec<u32> {
        let q = self.q() as u32;
        (0..self.degree)
            .map(|_| {
                let d = x % q;
                x /= q;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        let q = self.q() as u32;
        digits.iter().rev().fold(0, |acc, &d| acc * q + d)
    }

    /// Encoding of the base-field scalar `a` embedded in the extension.
    pub fn embed(&self, a: u32) -> u32 {
        a
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| self.base.add(x, y)).collect();
        self.from_digits(&sum)
    }

    pub fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self.digits(a).iter().map(|&x| self.base.neg(x)).collect();
        self.from_digits(&d)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Multiplies by a base-field scalar coordinate-wise.
    pub fn scale(&self, a: u32, x: u32) -> u32 {
        let d: Vec<u32> = self.digits(x).iter().map(|&c| self.base.mul(a, c)).collect();
        self.from_digits(&d)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul_table {
            Some(t) => t[a as usize * self.order as usize + b as usize],
            None => self.mul_poly(a, b),
        }
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let prod = poly::mulmod(&self.base, &self.digits(a), &self.digits(b), &self.modulus);
        let mut d = prod;
        d.resize(self.degree, 0);
        self.from_digits(&d)
    }

    pub fn pow(&self, x: u32, mut e: u64) -> u32 {
        let mut result = 1;
        let mut sq = x;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        result
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, x: u32) -> Option<u32> {
        (x != 0).then(|| self.pow(x, self.order as u64 - 2))
    }

    pub fn frobenius(&self, x: u32) -> u32 {
        self.pow(x, self.q())
    }

    /// `Tr(x) = x + x^q + ... + x^{q^{m-1}}`, returned as a base-field scalar.
    pub fn trace(&self, x: u32) -> u32 {
        let mut acc = 0;
        let mut conj = x;
        for _ in 0..self.degree {
            acc = self.add(acc, conj);
            conj = self.frobenius(conj);
        }
        assert!(
            (acc as u64) < self.q(),
            "trace left the base field: {acc} in {self}"
        );
        acc
    }

    /// `1, α, ..., α^{m-1}`.
    pub fn polynomial_basis_elements(&self) -> Vec<u32> {
        let q = self.q() as u32;
        (0..self.degree as u32).map(|i| q.pow(i)).collect()
    }

    /// `M_ij = Tr(β_i β_j)`.
    pub fn gram_matrix(&self, elements: &[u32]) -> Result<Matrix> {
        if elements.len() != self.degree {
            return Err(Error::WrongLength {
                expected: self.degree,
                got: elements.len(),
            });
        }
        if let Some(&bad) = elements.iter().find(|&&x| !self.contains(x)) {
            return Err(Error::AlphabetViolation {
                value: bad as u64,
                size: self.order as u64,
                position: None,
                line: None,
            });
        }
        let m = self.degree;
        let mut gram = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                gram.set(i, j, self.trace(self.mul(elements[i], elements[j])));
            }
        }
        Ok(gram)
    }

    fn make_basis(&self, elements: &[u32]) -> Result<Basis> {
        let gram = self.gram_matrix(elements)?;
        let rows: Vec<Vec<u32>> = elements.iter().map(|&e| self.digits(e)).collect();
        let change = Matrix::from_rows(self.degree, &rows)?;
        let to_basis = change.inverse(&self.base).ok_or(Error::DependentBasis)?;
        Ok(Basis {
            elements: elements.to_vec(),
            is_self_dual: gram.is_identity(),
            gram,
            change,
            to_basis,
        })
    }

    /// The same field with a different working basis.
    pub fn with_basis(&self, elements: &[u32]) -> Result<Self> {
        let basis = self.make_basis(elements)?;
        Ok(Self {
            basis,
            ..self.clone()
        })
    }

    /// The same field with the polynomial basis as working basis.
    pub fn with_polynomial_basis(&self) -> Self {
        self.with_basis(&self.polynomial_basis_elements())
            .expect("polynomial basis is always a basis")
    }

    /// Coordinates of `x` in the working basis.
    pub fn coords(&self, x: u32) -> Vec<u32> {
        self.basis.to_basis.left_mul(&self.digits(x), &self.base)
    }

    /// Inverse of [`ExtField::coords`].
    pub fn from_coords(&self, coords: &[u32]) -> Result<u32> {
        if coords.len() != self.degree {
            return Err(Error::WrongLength {
                expected: self.degree,
                got: coords.len(),
            });
        }
        if let Some(&bad) = coords.iter().find(|&&c| !self.base.contains(c)) {
            return Err(Error::AlphabetViolation {
                value: bad as u64,
                size: self.q(),
                position: None,
                line: None,
            });
        }
        Ok(self.from_digits(&self.basis.change.left_mul(coords, &self.base)))
    }

    /// Self-dual bases exist iff `q` is even or both `q` and `m` are odd.
    pub fn self_dual_basis_exists(&self) -> bool {
        self_dual_basis_exists(self.base.order(), self.degree)
    }

    pub fn find_self_dual_basis(&self) -> Result<Option<Basis>> {
        self.find_self_dual_basis_capped(SELF_DUAL_SEARCH_CAP)
    }

    /// Depth-first search for `β_1, β_2, ...` with `Tr(β_i β_j) = δ_ij`,
    /// trying candidates in increasing encoding order at each level. The
    /// first hit is the lexicographically smallest orthonormal tuple.
    pub fn find_self_dual_basis_capped(&self, cap: u64) -> Result<Option<Basis>> {
        if !self.self_dual_basis_exists() {
            return Ok(None);
        }
        if self.order as u64 > cap {
            return Err(Error::SearchCapExceeded {
                order: self.order as u64,
                cap,
            });
        }
        let traces: Vec<u32> = self.elements().map(|x| self.trace(x)).collect();
        let unit: Vec<u32> = self
            .elements()
            .filter(|&x| traces[self.mul(x, x) as usize] == 1)
            .collect();
        let mut chosen = Vec::with_capacity(self.degree);
        if self.extend_orthonormal(&traces, &unit, &mut chosen) {
            Ok(Some(self.make_basis(&chosen)?))
        } else {
            Err(Error::Inconsistent(format!(
                "no self-dual basis found for {self} although one must exist"
            )))
        }
    }

    fn extend_orthonormal(&self, traces: &[u32], candidates: &[u32], chosen: &mut Vec<u32>) -> bool {
        if chosen.len() == self.degree {
            return true;
        }
        // a full basis needs at least degree - len more candidates
        if candidates.len() < self.degree - chosen.len() {
            return false;
        }
        for &b in candidates {
            let next: Vec<u32> = candidates
                .iter()
                .copied()
                .filter(|&y| traces[self.mul(b, y) as usize] == 0)
                .collect();
            chosen.push(b);
            if self.extend_orthonormal(traces, &next, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    /// The same field with a self-dual working basis, if one exists.
    pub fn with_self_dual_basis(&self) -> Result<Option<Self>> {
        Ok(self.find_self_dual_basis()?.map(|basis| Self {
            basis,
            ..self.clone()
        }))
    }
}

pub fn self_dual_basis_exists(q: PrimePower, degree: usize) -> bool {
    q.is_even() || degree % 2 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64, m: usize) -> ExtField {
        ExtField::over(PrimePower::from_order(q).unwrap(), m, None).unwrap()
    }

    #[test]
    fn default_moduli() {
        assert_eq!(gf(2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(gf(2, 3).modulus(), &[1, 1, 0, 1]);
        let f2 = gf(2, 1);
        assert_eq!(f2.modulus(), &[0, 1]);
        assert_eq!(f2.basis().elements(), &[1]);
        assert_eq!(f2.basis().gram().row_vecs(), vec![vec![1]]);
    }

    #[test]
    fn explicit_modulus_is_checked() {
        let pp = PrimePower::new(2, 1).unwrap();
        assert!(matches!(
            ExtField::over(pp, 2, Some(vec![1, 0, 1])),
            Err(Error::NotIrreducible(_))
        ));
        assert!(matches!(
            ExtField::over(pp, 2, Some(vec![1, 1, 0])),
            Err(Error::BadModulus { .. })
        ));
        assert!(ExtField::over(pp, 3, Some(vec![1, 0, 1, 1])).is_ok());
        assert_eq!(PrimePower::new(9, 1), Err(Error::NotPrime(9)));
    }

    #[test]
    fn trace_in_f4() {
        let f4 = gf(2, 2);
        let alpha = 2;
        assert_eq!(f4.mul(alpha, alpha), 3);
        assert_eq!(f4.trace(alpha), 1);
        assert_eq!(f4.trace(0), 0);
        let alpha2 = f4.mul(alpha, alpha);
        assert_eq!(f4.trace(f4.mul(alpha, alpha)), 1);
        assert_eq!(f4.trace(f4.mul(alpha, alpha2)), 0);
    }

    #[test]
    fn gram_matrices_in_f4() {
        let f4 = gf(2, 2);
        assert!(f4.gram_matrix(&[2, 3]).unwrap().is_identity());
        assert_eq!(f4.gram_matrix(&[1, 2]).unwrap().row_vecs(), vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(
            f4.gram_matrix(&[1]),
            Err(Error::WrongLength { expected: 2, got: 1 })
        );
    }

    #[test]
    fn self_dual_search() {
        let f4 = gf(2, 2);
        let b = f4.find_self_dual_basis().unwrap().unwrap();
        assert_eq!(b.elements(), &[2, 3]);
        assert!(b.is_self_dual());
        assert!(gf(3, 2).find_self_dual_basis().unwrap().is_none());
        let b2 = gf(2, 1).find_self_dual_basis().unwrap().unwrap();
        assert_eq!(b2.elements(), &[1]);
        for (q, m) in [(2, 3), (2, 4), (3, 3), (4, 2), (5, 1), (2, 6), (8, 2), (3, 5)] {
            let b = gf(q, m).find_self_dual_basis().unwrap().unwrap();
            assert!(b.gram().is_identity(), "F_{q}^{m}");
        }
        assert!(matches!(
            gf(2, 13).find_self_dual_basis(),
            Err(Error::SearchCapExceeded { .. })
        ));
    }

    #[test]
    fn rho_with_self_dual_basis_of_f4() {
        let f4 = gf(2, 2).with_basis(&[2, 3]).unwrap();
        assert_eq!(f4.coords(0), vec![0, 0]);
        // 1 = α + α²
        assert_eq!(f4.coords(1), vec![1, 1]);
        for x in f4.elements() {
            assert_eq!(f4.from_coords(&f4.coords(x)).unwrap(), x);
        }
        assert!(matches!(f4.from_coords(&[1]), Err(Error::WrongLength { .. })));
    }

    #[test]
    fn dependent_basis_rejected() {
        let f4 = gf(2, 2);
        assert_eq!(f4.with_basis(&[2, 2]).unwrap_err(), Error::DependentBasis);
    }

    #[test]
    fn extension_over_nonprime_base() {
        let f16 = gf(4, 2);
        assert_eq!(f16.order(), 16);
        for x in 1..16 {
            assert_eq!(f16.mul(x, f16.inv(x).unwrap()), 1);
            assert!(f16.trace(x) < 4);
        }
    }

    #[test]
    fn large_field_uses_polynomial_multiplication() {
        let f = gf(2, 10);
        assert!(f.mul_table.is_none());
        let x = 0b1011001110;
        assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
    }
}
