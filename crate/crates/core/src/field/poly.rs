//! Dense polynomials over a [`BaseField`], coefficients low degree first.
//! The zero polynomial is the empty vector.

use super::base::BaseField;

pub fn trim(mut f: Vec<u32>) -> Vec<u32> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn sub(field: &BaseField, f: &[u32], g: &[u32]) -> Vec<u32> {
    let len = f.len().max(g.len());
    let out = (0..len)
        .map(|i| {
            let a = f.get(i).copied().unwrap_or(0);
            let b = g.get(i).copied().unwrap_or(0);
            field.sub(a, b)
        })
        .collect();
    trim(out)
}

pub fn mul(field: &BaseField, f: &[u32], g: &[u32]) -> Vec<u32> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(a, b));
        }
    }
    trim(out)
}

/// Remainder of `f` modulo a nonzero `m`.
pub fn rem(field: &BaseField, f: &[u32], m: &[u32]) -> Vec<u32> {
    let dm = degree(m).expect("division by the zero polynomial");
    let lead_inv = field.inv(m[dm]);
    let mut r = trim(f.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let factor = field.mul(r[dr], lead_inv);
        let shift = dr - dm;
        for (i, &c) in m[..=dm].iter().enumerate() {
            r[shift + i] = field.sub(r[shift + i], field.mul(factor, c));
        }
        r = trim(r);
    }
    r
}

pub fn mulmod(field: &BaseField, f: &[u32], g: &[u32], m: &[u32]) -> Vec<u32> {
    rem(field, &mul(field, f, g), m)
}

pub fn powmod(field: &BaseField, f: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut result = rem(field, &[1], m);
    let mut sq = rem(field, f, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(field, &result, &sq, m);
        }
        sq = mulmod(field, &sq, &sq, m);
        e >>= 1;
    }
    result
}

/// Monic greatest common divisor.
pub fn gcd(field: &BaseField, f: &[u32], g: &[u32]) -> Vec<u32> {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while !b.is_empty() {
        let r = rem(field, &a, &b);
        a = b;
        b = r;
    }
    if let Some(d) = degree(&a) {
        let inv = field.inv(a[d]);
        for c in &mut a {
            *c = field.mul(*c, inv);
        }
    }
    a
}

/// Ben-Or test: a monic `f` of degree `m` is irreducible iff
/// `gcd(f, x^{q^i} - x) = 1` for every `1 ≤ i ≤ m/2`.
pub fn is_irreducible(field: &BaseField, f: &[u32]) -> bool {
    let Some(m) = degree(f) else {
        return false;
    };
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut frob = rem(field, &x, f);
    for _ in 1..=m / 2 {
        frob = powmod(field, &frob, field.q(), f);
        let g = gcd(field, f, &sub(field, &frob, &x));
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Monic polynomial of degree `m` whose low coefficients are the base-`q`
/// digits of `index`.
pub fn monic_from_index(q: u64, m: usize, mut index: u64) -> Vec<u32> {
    let mut f = Vec::with_capacity(m + 1);
    for _ in 0..m {
        f.push((index % q) as u32);
        index /= q;
    }
    f.push(1);
    f
}

/// The first monic irreducible polynomial of degree `m` when the low
/// coefficients are read as a base-`q` integer, low degree least significant.
pub fn first_irreducible(field: &BaseField, m: usize) -> Vec<u32> {
    let q = field.q();
    (0u64..)
        .map(|i| monic_from_index(q, m, i))
        .find(|f| is_irreducible(field, f))
        .expect("irreducible polynomials exist in every degree")
}
