//! Acceptance criteria 1-9. Run with `cargo test --test acceptance`.

use std::collections::HashSet;
use std::process::ExitCode;
use std::sync::Arc;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use moatrace::duality::{BasisPolicy, RhoContext};
use moatrace::error_block::{BlockCode, Partition, DEFAULT_ENUM_CAP};
use moatrace::field::{BaseField, ExtField, PrimePower};
use moatrace::format;
use moatrace::linalg::dot;
use moatrace::moa::MixedArray;

const E1: &str = include_str!("../../../fixtures/e1.moa");
const LH_A: &str = include_str!("../../../fixtures/lh_a.moa");
const LH_B: &str = include_str!("../../../fixtures/lh_b.moa");
const NEAR_MDS: &str = include_str!("../../../fixtures/near_mds.moa");
const SEC6_MOA: &str = include_str!("../../../fixtures/sec6.moa");
const SEC6_CODE: &str = include_str!("../../../fixtures/sec6.code");

const SEED: u64 = 0x6d6f_6174_7261_6365;
const CAP: u64 = DEFAULT_ENUM_CAP;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn moa(text: &str) -> Result<MixedArray, String> {
    Ok(format::parse_moa(text).map_err(err)?.verify_linearity())
}

fn f2() -> Arc<BaseField> {
    Arc::new(BaseField::from_order(2).unwrap())
}

/// Instances shared between criteria so that the structural checks see
/// every random object.
#[derive(Default)]
struct Pool {
    arrays: Vec<MixedArray>,
    codes: Vec<BlockCode>,
}

// Direct irredundancy: every (s - t)-column projection has distinct rows.
fn irredundant_by_subarrays(arr: &MixedArray, t: usize) -> bool {
    let s = arr.s();
    if t > s {
        return false;
    }
    (0..s).combinations(s - t).all(|cols| {
        let mut seen = HashSet::new();
        arr.rows()
            .iter()
            .all(|r| seen.insert(cols.iter().map(|&c| r[c]).collect::<Vec<_>>()))
    })
}

fn hamming_min(arr: &MixedArray) -> usize {
    let rows = arr.rows();
    let mut best = usize::MAX;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            best = best.min(rows[i].iter().zip(&rows[j]).filter(|(a, b)| a != b).count());
        }
    }
    best
}

fn random_sizes(rng: &mut ChaCha8Rng, max_n: usize, max_block: usize) -> Vec<usize> {
    loop {
        let mut sizes = Vec::new();
        let mut n = 0;
        let target = rng.gen_range(2..=max_n);
        while n < target {
            let m = rng.gen_range(1..=max_block.min(target - n));
            sizes.push(m);
            n += m;
        }
        if n >= 2 {
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            return sizes;
        }
    }
}

/// Random code over F_2 with `1 ≤ k ≤ n - 1`.
fn random_proper_code(rng: &mut ChaCha8Rng, sizes: Vec<usize>) -> BlockCode {
    let n: usize = sizes.iter().sum();
    let k = rng.gen_range(1..n);
    let partition = Partition::new(sizes).unwrap();
    loop {
        let rows: Vec<Vec<u32>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect()).collect();
        let code = BlockCode::new(partition.clone(), f2(), &rows).unwrap();
        if code.k() == k {
            return code;
        }
    }
}

fn preimage(ctx: &RhoContext, code: &BlockCode) -> Result<MixedArray, String> {
    let mut rows = code
        .codewords(CAP)
        .map_err(err)?
        .iter()
        .map(|v| ctx.rho_inverse(v))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    rows.sort();
    MixedArray::new(ctx.fields().to_vec(), rows).map_err(err)
}

fn criterion_1(pool: &mut Pool) -> Outcome {
    let arr = moa(E1)?;
    ensure!(arr.m() == 8 && arr.degrees() == [2, 1, 1, 1, 1], "unexpected shape");
    ensure!(arr.verify_strength(2), "strength 2 fails");
    for (i, j) in (0..5).tuple_combinations() {
        let expected = if i == 0 { 1 } else { 2 };
        let got = arr.subset_index(&[i, j]).map_err(err)?;
        ensure!(got == expected, "index of columns {},{} is {got}", i + 1, j + 1);
    }
    let d = arr.min_hamming_distance().map_err(err)?.value;
    ensure!(d == 3, "d_H = {d}");
    let s = arr.singleton_analysis(2).map_err(err)?;
    ensure!(
        (s.lower, s.m, s.upper, s.loose) == (8, 8, 8, 16),
        "sandwich {} {} {} {}",
        s.lower,
        s.m,
        s.upper,
        s.loose
    );
    ensure!(s.is_mds, "not MDS");
    ensure!(arr.is_irredundant(2).map_err(err)?.irredundant, "not irredundant");
    ensure!(irredundant_by_subarrays(&arr, 2), "subarray check fails");
    let notation = arr.notation(2, false);
    ensure!(notation == "MOA(8, 5, (2^2,2,2,2,2), 2)", "notation {notation}");
    pool.arrays.push(arr);
    Ok("indices, d_H = 3, 8 <= 8 = 8 < 16, MDS, irredundant".into())
}

fn criterion_2(pool: &mut Pool) -> Outcome {
    let a = moa(LH_A)?;
    let idx = |arr: &MixedArray, i: usize, j: usize| arr.subset_index(&[i, j]).map_err(err);
    ensure!(idx(&a, 0, 1)? == 1 && idx(&a, 0, 2)? == 1 && idx(&a, 1, 2)? == 2, "first array indices");
    ensure!(a.lambda_min(2).map_err(err)? == 1, "first λ_min");
    let sa = a.singleton_analysis(2).map_err(err)?;
    ensure!(sa.d_h == 1, "first d_H = {}", sa.d_h);
    ensure!(!sa.is_mds && sa.m == 8 && sa.upper == 16, "first MDS verdict");

    let b = moa(LH_B)?;
    ensure!(b.lambda_min(2).map_err(err)? == 2, "second λ_min");
    let sb = b.singleton_analysis(2).map_err(err)?;
    ensure!(sb.d_h == 1, "second d_H = {}", sb.d_h);
    ensure!(sb.is_mds && sb.m == 16 && sb.upper == 16, "second MDS verdict");
    pool.arrays.extend([a, b]);
    Ok("λ_min 1 and 2, d_H = 1, 8 < 16 not MDS, 16 = 16 MDS".into())
}

fn criterion_3(pool: &mut Pool) -> Outcome {
    let arr = moa(NEAR_MDS)?;
    ensure!(arr.verify_strength(3), "strength 3 fails");
    ensure!(arr.lambda_min(3).map_err(err)? == 1, "λ_min");
    let s = arr.singleton_analysis(3).map_err(err)?;
    ensure!(s.defect_exact == Some(1), "defect {:?}", s.defect_exact);
    ensure!(s.is_almost_mds && !s.is_mds, "almost-MDS verdict");
    pool.arrays.push(arr);
    Ok("strength 3, λ_min = 1, δ = 1, almost-MDS".into())
}

fn criterion_4(pool: &mut Pool) -> Outcome {
    let code = format::parse_code(SEC6_CODE).map_err(err)?.code;
    ensure!(code.n() == 10 && code.k() == 4, "code dimensions");
    let d = code.min_pi_distance(CAP).map_err(err)?;
    let dual = code.dual();
    let dd = dual.min_pi_distance(CAP).map_err(err)?;
    ensure!(d == 4 && dd == 3, "d_π = {d}, dual d_π = {dd}");

    let ctx = RhoContext::for_code(&code, BasisPolicy::Polynomial).map_err(err)?;
    let out = ctx.moa_from_code(&code, CAP).map_err(err)?;
    let printed = format::parse_moa(SEC6_MOA).map_err(err)?;
    ensure!(out.array.row_set() == printed.row_set(), "rows differ from the printed array");
    let arr = out.array;
    ensure!(arr.max_strength() == 2, "max strength {}", arr.max_strength());
    ensure!(arr.is_irredundant(2).map_err(err)?.irredundant, "not irredundant");
    ensure!(irredundant_by_subarrays(&arr, 2), "subarray check fails");
    let mut classes = [HashSet::new(), HashSet::new(), HashSet::new()];
    for (i, j) in (0..6).tuple_combinations() {
        let class = usize::from(i >= 4) + usize::from(j >= 4);
        classes[class].insert(arr.subset_index(&[i, j]).map_err(err)?);
    }
    let table: Vec<Vec<u64>> = classes.iter().map(|c| c.iter().copied().collect()).collect();
    ensure!(table == [vec![1], vec![2], vec![4]], "index table {table:?}");
    pool.arrays.push(arr);
    pool.codes.push(code);
    Ok("d_π = 4, dual d_π = 3, 16 printed rows, strength 2, irredundant, indices 1/2/4".into())
}

fn criterion_5(rng: &mut ChaCha8Rng, pool: &mut Pool) -> Outcome {
    for case in 0..200 {
        let sizes = random_sizes(rng, 10, 3);
        let code = random_proper_code(rng, sizes.clone());
        let ctx = RhoContext::for_code(&code, BasisPolicy::SelfDual).map_err(err)?;
        let arr = preimage(&ctx, &code)?;
        let dd = code.dual().min_pi_distance(CAP).map_err(err)?;
        let t = arr.max_strength();
        ensure!(
            t + 1 == dd,
            "case {case}: type {sizes:?}, k = {}: strength {t}, dual d_π {dd}",
            code.k()
        );
        pool.arrays.push(arr);
        pool.codes.push(code);
    }
    Ok("200 codes, strength = dual d_π - 1 in every case".into())
}

fn criterion_6(rng: &mut ChaCha8Rng, pool: &mut Pool) -> Outcome {
    let mut done = 0;
    while done < 100 {
        let sizes = random_sizes(rng, 8, 3);
        let fields: Vec<ExtField> = sizes
            .iter()
            .map(|&m| ExtField::new(f2(), m, None).unwrap())
            .collect();
        let gens = rng.gen_range(1..=sizes.len().min(4));
        let gen_rows: Vec<Vec<u32>> = (0..gens)
            .map(|_| fields.iter().map(|f| rng.gen_range(0..f.order())).collect())
            .collect();
        let mut rows = HashSet::new();
        for mask in 0u32..1 << gens {
            let row: Vec<u32> = (0..fields.len())
                .map(|c| {
                    (0..gens)
                        .filter(|g| mask >> g & 1 == 1)
                        .fold(0, |acc, g| fields[c].add(acc, gen_rows[g][c]))
                })
                .collect();
            rows.insert(row);
        }
        if rows.len() < 2 {
            continue;
        }
        let rows: Vec<Vec<u32>> = rows.into_iter().sorted().collect();
        let arr = MixedArray::new(fields.clone(), rows).map_err(err)?.verify_linearity();
        ensure!(arr.is_linear(), "span is not recognised as linear");
        let ctx = RhoContext::from_fields(&fields, BasisPolicy::SelfDual).map_err(err)?;
        ensure!(ctx.is_self_dual(), "self-dual bases missing for q = 2");
        let code = ctx.rho_code(&arr).map_err(err)?;

        let d_h = arr.min_hamming_distance().map_err(err)?.value;
        let d_pi = code.min_pi_distance(CAP).map_err(err)?;
        ensure!(d_h == d_pi && d_h == hamming_min(&arr), "type {sizes:?}: d_H {d_h}, d_π {d_pi}");

        let td = ctx.trace_dual(&arr, CAP).map_err(err)?;
        let lhs: HashSet<Vec<u32>> = td
            .rows()
            .iter()
            .map(|r| ctx.rho(r))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let rhs: HashSet<Vec<u32>> = code.dual().codewords(CAP).map_err(err)?.into_iter().collect();
        ensure!(lhs == rhs, "type {sizes:?}: ρ(trace dual) differs from the dual code");
        pool.arrays.push(arr);
        pool.arrays.push(td);
        done += 1;
    }
    Ok("100 arrays, d_H = d_π and ρ(trace dual) = dual code".into())
}

fn criterion_7(pool: &Pool) -> Outcome {
    let mut checked = 0;
    for (i, arr) in pool.arrays.iter().enumerate() {
        if arr.m() < 2 {
            continue;
        }
        let t = arr.max_strength();
        let s = arr.s();
        let d_h = hamming_min(arr);
        if d_h > 0 {
            let sa = arr.singleton_analysis(t).map_err(err)?;
            ensure!(
                sa.lower <= sa.m as u128 && sa.m as u128 <= sa.upper && sa.upper <= sa.loose,
                "array {i}: sandwich {} {} {} {}",
                sa.lower,
                sa.m,
                sa.upper,
                sa.loose
            );
        }
        let irr = arr.is_irredundant(t).map_err(err)?;
        let direct = irredundant_by_subarrays(arr, t);
        ensure!(
            irr.irredundant == (d_h > t) && irr.irredundant == direct,
            "array {i}: irredundant {} but d_H = {d_h}, t = {t}, direct {direct}",
            irr.irredundant
        );
        if direct {
            let q = arr.q() as u128;
            let degrees = arr.degrees();
            let head: u128 = degrees[..t].iter().map(|&m| q.pow(m as u32)).product();
            let tail: u128 = degrees[t..].iter().map(|&m| q.pow(m as u32)).product();
            ensure!(2 * t <= s && head <= tail, "array {i}: irredundant with 2t > s or head > tail");
        }
        checked += 1;
    }
    for (i, code) in pool.codes.iter().enumerate() {
        let dual = code.dual();
        if code.k() == 0 || dual.k() == 0 {
            continue;
        }
        let d = code.min_pi_distance(CAP).map_err(err)?;
        let dd = dual.min_pi_distance(CAP).map_err(err)?;
        ensure!(d + dd <= code.n() + 2, "code {i}: d_π + dual d_π = {} > n + 2", d + dd);
        let lead = code.partition().leading_sum(d - 1);
        ensure!(code.n() - code.k() >= lead, "code {i}: Singleton bound fails");
        checked += 1;
    }
    Ok(format!("{checked} objects, zero violations"))
}

fn criterion_8(rng: &mut ChaCha8Rng, pool: &mut Pool) -> Outcome {
    for case in 0..100 {
        let sizes = random_sizes(rng, 8, 3);
        let code = random_proper_code(rng, sizes.clone());
        let dual = code.dual();
        let d = code.min_pi_distance(CAP).map_err(err)?;
        let dd = dual.min_pi_distance(CAP).map_err(err)?;
        let ctx = RhoContext::for_code(&code, BasisPolicy::SelfDual).map_err(err)?;
        ensure!(ctx.is_self_dual(), "self-dual bases missing for q = 2");

        let primal = preimage(&ctx, &code)?;
        let primal_irr = irredundant_by_subarrays(&primal, dd - 1);
        ensure!(
            primal_irr == (d >= dd),
            "case {case}: type {sizes:?}: primal irredundant {primal_irr}, d_π {d}, dual d_π {dd}"
        );
        let dual_arr = preimage(&ctx, &dual)?;
        let dual_irr = irredundant_by_subarrays(&dual_arr, d - 1);
        ensure!(
            dual_irr == (dd >= d),
            "case {case}: type {sizes:?}: dual irredundant {dual_irr}, d_π {d}, dual d_π {dd}"
        );

        let report = ctx.irmoa_from_code(&code, true, CAP).map_err(err)?;
        ensure!(
            report.primal.irredundant == primal_irr
                && report.dual.as_ref().map(|s| s.irredundant) == Some(dual_irr)
                && report.both_irredundant == Some(d == dd),
            "case {case}: library verdicts disagree"
        );
        pool.arrays.push(primal);
        pool.arrays.push(dual_arr);
        pool.codes.push(code);
    }
    Ok("100 codes, both clauses hold".into())
}

fn criterion_9() -> Outcome {
    let bases: Vec<u64> = (2..=64).filter(|&q| PrimePower::from_order(q).is_ok()).collect();
    let mut fields = 0;
    for &q in &bases {
        let mut m = 1;
        while q.pow(m as u32) <= 64 {
            let f = ExtField::over(PrimePower::from_order(q).unwrap(), m, None).map_err(err)?;
            check_field(&f).map_err(|e| format!("GF({q}^{m}): {e}"))?;
            fields += 1;
            m += 1;
        }
    }
    let f4 = ExtField::over(PrimePower::new(2, 1).unwrap(), 2, None).map_err(err)?;
    let g = f4.with_basis(&[2, 3]).map_err(err)?;
    ensure!(g.basis().is_self_dual(), "{{α, α²}} is not self-dual");
    ensure!(f4.trace(f4.mul(2, 2)) == 1 && f4.trace(f4.mul(2, 3)) == 0, "F_4 traces");
    Ok(format!("{fields} fields exhaustively, F_4 {{α, α²}} self-dual"))
}

fn check_field(f: &ExtField) -> Result<(), String> {
    let n = f.order();
    let base = f.base();
    let q = f.q() as u32;
    for a in 0..n {
        if a != 0 {
            let inv = f.inv(a).ok_or("missing inverse")?;
            ensure!(f.mul(a, inv) == 1, "inverse of {a}");
        }
        ensure!(f.add(a, f.neg(a)) == 0, "negation of {a}");
        ensure!(base.contains(f.trace(a)), "Tr({a}) outside the base");
        for c in 0..q {
            ensure!(
                f.trace(f.scale(c, a)) == base.mul(c, f.trace(a)),
                "Tr({c}·{a}) not homogeneous"
            );
        }
        for b in 0..n {
            ensure!(f.trace(f.add(a, b)) == base.add(f.trace(a), f.trace(b)), "Tr not additive");
            let ab = f.mul(a, b);
            ensure!(ab == f.mul(b, a), "commutativity");
            for c in 0..n {
                ensure!(f.mul(ab, c) == f.mul(a, f.mul(b, c)), "associativity at {a},{b},{c}");
                ensure!(
                    f.mul(a, f.add(b, c)) == f.add(ab, f.mul(a, c)),
                    "distributivity at {a},{b},{c}"
                );
            }
        }
    }
    let m = scalar(base, f.degree());
    for c in base.elements() {
        ensure!(f.trace(f.embed(c)) == base.mul(m, c), "Tr on the base subfield at {c}");
    }
    let mut bases = vec![f.with_polynomial_basis()];
    if let Some(sd) = f.with_self_dual_basis().map_err(err)? {
        ensure!(sd.basis().gram().is_identity(), "self-dual Gram is not the identity");
        bases.push(sd);
    } else {
        ensure!(!f.self_dual_basis_exists(), "self-dual basis expected but not found");
    }
    for g in &bases {
        let gram = g.basis().gram();
        for x in 0..n {
            let cx = gram.left_mul(&g.coords(x), base);
            for y in 0..n {
                ensure!(
                    f.trace(f.mul(x, y)) == dot(&cx, &g.coords(y), base),
                    "Tr({x}·{y}) differs from the Gram form"
                );
            }
        }
    }
    Ok(())
}

// m as an element of the prime subfield
fn scalar(base: &BaseField, m: usize) -> u32 {
    (0..m).fold(0, |acc, _| base.add(acc, 1))
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut pool = Pool::default();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 e1 array", criterion_1(&mut pool)),
        ("2 Lh arrays", criterion_2(&mut pool)),
        ("3 near-MDS array", criterion_3(&mut pool)),
        ("4 worked [10,4] code", criterion_4(&mut pool)),
        ("5 strength and dual distance", criterion_5(&mut rng, &mut pool)),
        ("6 distance and duality preservation", criterion_6(&mut rng, &mut pool)),
        ("8 irredundancy from codes", criterion_8(&mut rng, &mut pool)),
        ("7 bounds and structure", criterion_7(&pool)),
        ("9 field layer", criterion_9()),
    ];
    let mut failed = 0;
    let mut sorted = results;
    sorted.sort_by_key(|(name, _)| name.split(' ').next().unwrap().parse::<u32>().unwrap());
    for (name, outcome) in &sorted {
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(e) => {
                failed += 1;
                println!("criterion {name}: FAIL ({e})");
            }
        }
    }
    if failed == 0 {
        println!("all {} criteria passed", sorted.len());
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", sorted.len());
        ExitCode::FAILURE
    }
}
