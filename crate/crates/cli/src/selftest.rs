//! Re-derives the published example values from the fixture files.

use std::fmt::{Debug, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use moatrace::duality::{BasisPolicy, RhoContext};
use moatrace::error_block::{BlockCode, Partition, DEFAULT_ENUM_CAP};
use moatrace::field::{BaseField, ExtField, PrimePower};
use moatrace::format;
use moatrace::moa::MixedArray;
use moatrace::Result;

pub const FIXTURE_NAMES: [&str; 7] = [
    "e1.moa",
    "lh_a.moa",
    "lh_b.moa",
    "near_mds.moa",
    "sec6.moa",
    "sec6.code",
    "sec6_parity.code",
];

const EMBEDDED: [&str; 7] = [
    include_str!("../../../fixtures/e1.moa"),
    include_str!("../../../fixtures/lh_a.moa"),
    include_str!("../../../fixtures/lh_b.moa"),
    include_str!("../../../fixtures/near_mds.moa"),
    include_str!("../../../fixtures/sec6.moa"),
    include_str!("../../../fixtures/sec6.code"),
    include_str!("../../../fixtures/sec6_parity.code"),
];

pub struct Fixtures {
    texts: Vec<(String, String)>,
}

impl Fixtures {
    pub fn embedded() -> Self {
        Self {
            texts: FIXTURE_NAMES
                .iter()
                .zip(EMBEDDED)
                .map(|(n, t)| (n.to_string(), t.to_string()))
                .collect(),
        }
    }

    pub fn from_dir(dir: &Path) -> std::result::Result<Self, (PathBuf, std::io::Error)> {
        let texts = FIXTURE_NAMES
            .iter()
            .map(|n| {
                let path = dir.join(n);
                fs::read_to_string(&path).map(|t| (n.to_string(), t)).map_err(|e| (path, e))
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(Self { texts })
    }

    fn text(&self, name: &str) -> &str {
        &self.texts.iter().find(|(n, _)| n == name).expect("known fixture").1
    }

    fn moa(&self, name: &str) -> Result<MixedArray> {
        Ok(format::parse_moa(self.text(name))?.verify_linearity())
    }

    fn code(&self, name: &str) -> Result<BlockCode> {
        Ok(format::parse_code(self.text(name))?.code)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl SelftestReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            if c.pass {
                let _ = writeln!(s, "ok    {}: {}", c.name, c.got);
            } else {
                let _ = writeln!(s, "FAIL  {}: expected {}, got {}", c.name, c.expected, c.got);
            }
        }
        let _ = writeln!(s, "{} passed, {} failed", self.passed, self.failed);
        s
    }
}

struct Checker {
    checks: Vec<Check>,
}

impl Checker {
    fn eq<T: PartialEq + Debug>(&mut self, name: &str, expected: T, got: Result<T>) {
        let (got_text, pass) = match got {
            Ok(g) => (format!("{g:?}"), g == expected),
            Err(e) => (format!("error {}: {e}", e.name()), false),
        };
        self.checks.push(Check {
            name: name.to_string(),
            expected: format!("{expected:?}"),
            got: got_text,
            pass,
        });
    }
}

fn pair_index(arr: &Result<MixedArray>, a: usize, b: usize) -> Result<u64> {
    arr.as_ref().map_err(Clone::clone)?.subset_index(&[a - 1, b - 1])
}

fn with<T>(arr: &Result<MixedArray>, f: impl FnOnce(&MixedArray) -> Result<T>) -> Result<T> {
    f(arr.as_ref().map_err(Clone::clone)?)
}

fn with_code<T>(code: &Result<BlockCode>, f: impl FnOnce(&BlockCode) -> Result<T>) -> Result<T> {
    f(code.as_ref().map_err(Clone::clone)?)
}

pub fn run(fixtures: &Fixtures) -> SelftestReport {
    let mut c = Checker { checks: Vec::new() };
    field_checks(&mut c);
    partition_checks(&mut c);
    code_checks(&mut c, fixtures);
    array_checks(&mut c, fixtures);
    conversion_checks(&mut c, fixtures);
    let passed = c.checks.iter().filter(|k| k.pass).count();
    let failed = c.checks.len() - passed;
    SelftestReport {
        checks: c.checks,
        passed,
        failed,
    }
}

fn field_checks(c: &mut Checker) {
    let f4 = ExtField::over(PrimePower::new(2, 1).expect("2 is prime"), 2, None);
    // α = 2, α² = α + 1 = 3
    c.eq("F_4 Tr(α·α)", 1, f4.clone().map(|f| f.trace(f.mul(2, 2))));
    c.eq("F_4 Tr(α·α²)", 0, f4.clone().map(|f| f.trace(f.mul(2, 3))));
    c.eq(
        "F_4 basis {α, α²} is self-dual",
        true,
        f4.clone().and_then(|f| f.with_basis(&[2, 3])).map(|f| f.basis().is_self_dual()),
    );
    c.eq(
        "F_4 Gram matrix of {α, α²}",
        vec![vec![1, 0], vec![0, 1]],
        f4.clone().and_then(|f| f.gram_matrix(&[2, 3])).map(|m| m.row_vecs()),
    );
    c.eq(
        "F_4 self-dual basis found",
        true,
        f4.and_then(|f| f.find_self_dual_basis()).map(|b| b.is_some()),
    );
    c.eq(
        "F_9 over F_3 has no self-dual basis",
        None,
        ExtField::over(PrimePower::new(3, 1).expect("3 is prime"), 2, None)
            .and_then(|f| f.find_self_dual_basis())
            .map(|b| b.map(|b| b.elements().to_vec())),
    );
    let f2 = ExtField::over(PrimePower::new(2, 1).expect("2 is prime"), 1, None);
    c.eq(
        "trace inner product with all blocks of size 1 is Euclidean",
        true,
        f2.and_then(|f| RhoContext::new(vec![f.clone(), f.clone(), f]))
            .and_then(|ctx| {
                let mut ok = true;
                for a in 0..8u32 {
                    for b in 0..8u32 {
                        let va: Vec<u32> = (0..3).map(|i| (a >> i) & 1).collect();
                        let vb: Vec<u32> = (0..3).map(|i| (b >> i) & 1).collect();
                        ok &= ctx.trace_inner_product(&va, &vb)? == (a & b).count_ones() % 2;
                    }
                }
                Ok(ok)
            }),
    );
}

fn partition_checks(c: &mut Checker) {
    let p = Partition::new(vec![3, 3, 1, 1, 1]);
    c.eq(
        "π-weight of ((1,0,0),(0,0,0),0,0,0)",
        1,
        p.clone().and_then(|p| p.pi_weight(&[1, 0, 0, 0, 0, 0, 0, 0, 0])),
    );
    c.eq(
        "π-weight of ((1,1,1),(0,1,0),1,1,1)",
        5,
        p.and_then(|p| p.pi_weight(&[1, 1, 1, 0, 1, 0, 1, 1, 1])),
    );
}

fn code_checks(c: &mut Checker, fx: &Fixtures) {
    let code = fx.code("sec6.code");
    c.eq("worked code [n, k]", (10, 4), with_code(&code, |k| Ok((k.n(), k.k()))));
    c.eq(
        "worked code type",
        vec![2, 2, 2, 2, 1, 1],
        with_code(&code, |k| Ok(k.partition().block_sizes().to_vec())),
    );
    c.eq("worked code d_π", 4, with_code(&code, |k| k.min_pi_distance(DEFAULT_ENUM_CAP)));
    c.eq(
        "worked code dual d_π",
        3,
        with_code(&code, |k| k.dual().min_pi_distance(DEFAULT_ENUM_CAP)),
    );
    c.eq("worked code dual dimension", 6, with_code(&code, |k| Ok(k.dual().k())));
    let parity = fx.code("sec6_parity.code");
    c.eq(
        "worked code dual equals the printed parity-check row space",
        true,
        with_code(&code, |k| Ok(k.dual().same_code(parity.as_ref().map_err(Clone::clone)?))),
    );
    c.eq(
        "worked code Singleton (n-k, rhs, MDS)",
        (6, 6, true),
        with_code(&code, |k| {
            let s = k.singleton_report(DEFAULT_ENUM_CAP)?;
            Ok((s.redundancy, s.rhs, s.is_mds))
        }),
    );
}

fn array_checks(c: &mut Checker, fx: &Fixtures) {
    let e1 = fx.moa("e1.moa");
    c.eq(
        "e1 shape and degrees",
        (8, vec![2, 1, 1, 1, 1]),
        with(&e1, |a| Ok((a.m(), a.degrees()))),
    );
    c.eq("e1 index {2,3}", 2, pair_index(&e1, 2, 3));
    c.eq("e1 index {1,2}", 1, pair_index(&e1, 1, 2));
    c.eq(
        "e1 all pair indices",
        true,
        with(&e1, |a| {
            let mut ok = true;
            for i in 0..5 {
                for j in i + 1..5 {
                    ok &= a.subset_index(&[i, j])? == if i == 0 { 1 } else { 2 };
                }
            }
            Ok(ok)
        }),
    );
    c.eq("e1 strength 2 holds", true, with(&e1, |a| Ok(a.verify_strength(2))));
    c.eq("e1 maximum strength", 2, with(&e1, |a| Ok(a.max_strength())));
    c.eq("e1 d_H", 3, with(&e1, |a| Ok(a.min_hamming_distance()?.value)));
    c.eq("e1 linear", true, with(&e1, |a| Ok(a.is_linear())));
    c.eq(
        "e1 Singleton sandwich (lower, M, upper, loose, MDS)",
        (8, 8, 8, 16, true),
        with(&e1, |a| {
            let s = a.singleton_analysis(2)?;
            Ok((s.lower, s.m, s.upper, s.loose, s.is_mds))
        }),
    );
    c.eq(
        "e1 irredundant at t = 2",
        true,
        with(&e1, |a| Ok(a.is_irredundant(2)?.irredundant)),
    );
    c.eq(
        "e1 parameters",
        "IrMOA(8, 5, (2^2,2,2,2,2), 2)".to_string(),
        with(&e1, |a| Ok(a.notation(2, a.is_irredundant(2)?.irredundant))),
    );

    let lh_a = fx.moa("lh_a.moa");
    c.eq("Lh first index {1,2}", 1, pair_index(&lh_a, 1, 2));
    c.eq("Lh first index {1,3}", 1, pair_index(&lh_a, 1, 3));
    c.eq("Lh first index {2,3}", 2, pair_index(&lh_a, 2, 3));
    c.eq("Lh first λ_min", 1, with(&lh_a, |a| a.lambda_min(2)));
    c.eq("Lh first d_H", 1, with(&lh_a, |a| Ok(a.min_hamming_distance()?.value)));
    c.eq(
        "Lh first (M, upper, MDS)",
        (8, 16, false),
        with(&lh_a, |a| {
            let s = a.singleton_analysis(2)?;
            Ok((s.m, s.upper, s.is_mds))
        }),
    );
    c.eq(
        "Lh first irredundant at t = 2",
        false,
        with(&lh_a, |a| Ok(a.is_irredundant(2)?.irredundant)),
    );

    let lh_b = fx.moa("lh_b.moa");
    c.eq("Lh second λ_min", 2, with(&lh_b, |a| a.lambda_min(2)));
    c.eq(
        "Lh second (d_H, M, upper, MDS)",
        (1, 16, 16, true),
        with(&lh_b, |a| {
            let s = a.singleton_analysis(2)?;
            Ok((s.d_h, s.m, s.upper, s.is_mds))
        }),
    );

    let near = fx.moa("near_mds.moa");
    c.eq("nearMDS strength 3 holds", true, with(&near, |a| Ok(a.verify_strength(3))));
    c.eq("nearMDS λ_min", 1, with(&near, |a| a.lambda_min(3)));
    c.eq("nearMDS d_H", 1, with(&near, |a| Ok(a.min_hamming_distance()?.value)));
    c.eq(
        "nearMDS (defect, almost-MDS)",
        (Some(1), true),
        with(&near, |a| {
            let s = a.singleton_analysis(3)?;
            Ok((s.defect_exact, s.is_almost_mds))
        }),
    );

    let sec6 = fx.moa("sec6.moa");
    c.eq("worked array index {5,6}", 4, pair_index(&sec6, 5, 6));
    c.eq(
        "worked array pair index classes {F_4F_4, F_4F_2, F_2F_2}",
        vec![1, 2, 4],
        with(&sec6, |a| {
            let mut by_class = [Vec::new(), Vec::new(), Vec::new()];
            for i in 0..6 {
                for j in i + 1..6 {
                    let class = usize::from(i >= 4) + usize::from(j >= 4);
                    by_class[class].push(a.subset_index(&[i, j])?);
                }
            }
            Ok(by_class
                .iter()
                .map(|v| if v.iter().all(|&x| x == v[0]) { v[0] } else { 0 })
                .collect())
        }),
    );
    c.eq("worked array maximum strength", 2, with(&sec6, |a| Ok(a.max_strength())));
    c.eq("worked array linear", true, with(&sec6, |a| Ok(a.is_linear())));
    c.eq(
        "worked array irredundant at t = 2",
        true,
        with(&sec6, |a| Ok(a.is_irredundant(2)?.irredundant)),
    );
}

fn conversion_checks(c: &mut Checker, fx: &Fixtures) {
    let code = fx.code("sec6.code");
    let sec6 = fx.moa("sec6.moa");
    let poly = |k: &BlockCode| RhoContext::for_code(k, BasisPolicy::Polynomial);
    c.eq(
        "worked code preimage is the printed array",
        true,
        with_code(&code, |k| {
            let out = poly(k)?.moa_from_code(k, DEFAULT_ENUM_CAP)?;
            Ok(out.array.row_set() == sec6.as_ref().map_err(Clone::clone)?.row_set())
        }),
    );
    c.eq(
        "worked code preimage strength",
        2,
        with_code(&code, |k| Ok(poly(k)?.moa_from_code(k, DEFAULT_ENUM_CAP)?.certificate.strength)),
    );
    c.eq(
        "worked array maps back to the code",
        true,
        with(&sec6, |a| {
            let ctx = RhoContext::for_array(a, BasisPolicy::Polynomial)?;
            Ok(ctx
                .code_from_moa(a, DEFAULT_ENUM_CAP)?
                .code
                .same_code(code.as_ref().map_err(Clone::clone)?))
        }),
    );
    c.eq(
        "worked code primal preimage irredundant",
        true,
        with_code(&code, |k| {
            Ok(RhoContext::for_code(k, BasisPolicy::SelfDual)?
                .irmoa_from_code(k, false, DEFAULT_ENUM_CAP)?
                .primal
                .irredundant)
        }),
    );
    let e1 = fx.moa("e1.moa");
    c.eq(
        "e1 image code (n, k, dual d_π)",
        (6, 3, Some(3)),
        with(&e1, |a| {
            let ctx = RhoContext::for_array(a, BasisPolicy::SelfDual)?;
            let out = ctx.code_from_moa(a, DEFAULT_ENUM_CAP)?;
            Ok((out.code.n(), out.code.k(), out.certificate.dual_distance))
        }),
    );
    let f2 = Arc::new(BaseField::from_order(2).expect("2 is a prime power"));
    c.eq(
        "zero code in F_2^2 gives the single row (0, 0)",
        (vec![vec![0, 0]], 0),
        Partition::new(vec![1, 1]).and_then(|p| {
            let zero = BlockCode::zero(p, f2);
            let out = poly(&zero)?.moa_from_code(&zero, DEFAULT_ENUM_CAP)?;
            Ok((out.array.rows().to_vec(), out.certificate.strength))
        }),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_fixtures_pass() {
        let r = run(&Fixtures::embedded());
        assert_eq!(r.failed, 0, "{}", r.text());
        assert!(r.passed > 40);
    }

    #[test]
    fn broken_fixture_reports_failures() {
        let mut fx = Fixtures::embedded();
        fx.texts[0].1 = "moa q=2\ncols 1\nrow 0\nrow 1\n".into();
        let r = run(&fx);
        assert!(r.failed > 0);
        assert!(r.text().contains("FAIL  e1 shape and degrees"));
    }
}
