use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly;
use crate::error::{Error, Result};

/// Largest base field order supported; arithmetic is table driven.
pub const MAX_BASE_ORDER: u64 = 256;

/// A prime power `q = p^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    p: u64,
    r: u32,
    q: u64,
}

impl PrimePower {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::UnsupportedField {
                q: 1,
                reason: "exponent must be positive",
            });
        }
        let q = p
            .checked_pow(r)
            .ok_or(Error::Overflow("prime power p^r"))?;
        Ok(Self { p, r, q })
    }

    /// Factors `q` as `p^r`, failing if `q` is not a prime power.
    pub fn from_order(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotPrime(q));
        }
        let p = smallest_factor(q);
        let mut rest = q;
        let mut r = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            r += 1;
        }
        if rest != 1 {
            return Err(Error::UnsupportedField {
                q,
                reason: "not a prime power",
            });
        }
        Self::new(p, r)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_even(&self) -> bool {
        self.p == 2
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.r)
    }
}

fn smallest_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_factor(n) == n
}

/// The base field `F_q`, elements encoded as `Σ c_j p^j` in the polynomial
/// basis over `F_p`. All operations are table lookups.
#[derive(Clone, PartialEq, Eq)]
pub struct BaseField {
    order: PrimePower,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl fmt::Debug for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseField")
            .field("order", &self.order)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl BaseField {
    pub fn new(order: PrimePower) -> Result<Self> {
        if order.q() > MAX_BASE_ORDER {
            return Err(Error::UnsupportedField {
                q: order.q(),
                reason: "base field order above 256",
            });
        }
        let prime = Self::prime(order.p());
        if order.r() == 1 {
            return Ok(prime);
        }
        let modulus = poly::first_irreducible(&prime, order.r() as usize);
        Ok(Self::extension_of_prime(&prime, order, modulus))
    }

    pub fn from_order(q: u64) -> Result<Self> {
        Self::new(PrimePower::from_order(q)?)
    }

    fn prime(p: u64) -> Self {
        let pu = p as usize;
        let mut add = vec![0; pu * pu];
        let mut mul = vec![0; pu * pu];
        for a in 0..pu {
            for b in 0..pu {
                add[a * pu + b] = ((a + b) % pu) as u32;
                mul[a * pu + b] = ((a * b) % pu) as u32;
            }
        }
        let neg = (0..pu).map(|a| ((pu - a) % pu) as u32).collect();
        let inv = (0..pu)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..pu).find(|&b| (a * b) % pu == 1).unwrap() as u32
                }
            })
            .collect();
        Self {
            order: PrimePower { p, r: 1, q: p },
            modulus: vec![0, 1],
            add,
            mul,
            neg,
            inv,
        }
    }

    fn extension_of_prime(prime: &Self, order: PrimePower, modulus: Vec<u32>) -> Self {
        let q = order.q() as usize;
        let r = order.r() as usize;
        let p = order.p() as u32;
        let digits = |mut x: usize| {
            let mut d = Vec::with_capacity(r);
            for _ in 0..r {
                d.push((x % p as usize) as u32);
                x /= p as usize;
            }
            d
        };
        let undigits = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| prime.add(x, y)).collect();
                add[a * q + b] = undigits(&sum);
                let prod = poly::rem(prime, &poly::mul(prime, &da, &db), &modulus);
                let mut padded = prod;
                padded.resize(r, 0);
                mul[a * q + b] = undigits(&padded);
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u32)
            .collect();
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u32
                }
            })
            .collect();
        Self {
            order,
            modulus,
            add,
            mul,
            neg,
            inv,
        }
    }

    pub fn order(&self) -> PrimePower {
        self.order
    }

    pub fn q(&self) -> u64 {
        self.order.q()
    }

    /// Defining polynomial of `F_q` over `F_p` (just `x` when `r = 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn contains(&self, a: u32) -> bool {
        (a as u64) < self.q()
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q() as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q() as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q() as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_checks_primality() {
        assert_eq!(PrimePower::new(4, 1), Err(Error::NotPrime(4)));
        assert_eq!(PrimePower::new(3, 2).unwrap().q(), 9);
        assert_eq!(PrimePower::from_order(8).unwrap(), PrimePower::new(2, 3).unwrap());
        assert!(PrimePower::from_order(12).is_err());
        assert!(PrimePower::from_order(1).is_err());
    }

    #[test]
    fn base_field_axioms_small() {
        for q in [2u64, 3, 4, 5, 8, 9] {
            let f = BaseField::from_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn gf4_base_uses_first_irreducible() {
        let f = BaseField::from_order(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // α·α = α + 1
        assert_eq!(f.mul(2, 2), 3);
    }
}
