//! Command-line front end for `moatrace`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use moatrace::duality::{BasisPolicy, RhoContext};
use moatrace::error_block::{BlockCode, CodeSingleton, DEFAULT_ENUM_CAP};
use moatrace::format::{self, FieldDescriptor};
use moatrace::moa::{MixedArray, MoaReport, SubsetIndex};
use moatrace::Error;

pub mod selftest;

#[derive(Debug, Parser)]
#[command(name = "moatrace", version, about = "Mixed orthogonal arrays, error-block codes and trace duality")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Bases used for the coordinate map in conversions
    #[arg(long, global = true, value_enum, default_value_t = Basis::SelfDual)]
    pub basis: Basis,

    /// Largest number of codewords or rows to enumerate
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_CAP)]
    pub cap: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Describe a field such as `GF(2^2)` or `GF(2, 3; 1 1 0 1)`
    Field { descriptor: String },
    /// π-distances and Singleton-type verdict of a code file
    CodeAnalyze { file: PathBuf },
    /// Dual of a code file
    CodeDual { file: PathBuf },
    /// Check that an array has strength t
    MoaVerify {
        file: PathBuf,
        #[arg(long)]
        t: usize,
    },
    /// Full analysis of an array, at its maximum strength unless --t is given
    MoaAnalyze {
        file: PathBuf,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Array obtained from a linear code through the coordinate map
    MoaFromCode { file: PathBuf },
    /// Trace dual of a linear array
    MoaTraceDual { file: PathBuf },
    /// Irredundancy of the arrays obtained from a code and its dual
    IrmoaFromCode {
        file: PathBuf,
        /// Fail when self-dual bases do not exist for every block
        #[arg(long)]
        require_dual: bool,
    },
    /// Re-derive the published example values from the bundled fixtures
    FixturesSelftest {
        #[arg(long)]
        fixtures_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    SelfDual,
    Poly,
}

impl From<Basis> for BasisPolicy {
    fn from(b: Basis) -> Self {
        match b {
            Basis::SelfDual => BasisPolicy::SelfDual,
            Basis::Poly => BasisPolicy::Polynomial,
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(Error),
    Verdict { report: Option<String>, message: String },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(Error::Parse {
        line: 0,
        column: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn diagnostic(e: &Error) -> String {
    format!("error: {}: {e}\n", e.name())
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Input(e)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: diagnostic(&e),
        },
        Err(Failure::Verdict { report, message }) => Outcome {
            code: 2,
            stdout: report.unwrap_or_default(),
            stderr: message,
        },
    }
}

/// Pretty JSON with sorted keys, so re-rendering parsed output is a no-op.
pub fn render_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn dispatch(cli: &Cli) -> Result<String, Failure> {
    let json = cli.format == Format::Json;
    let policy: BasisPolicy = cli.basis.into();
    match &cli.command {
        Command::Field { descriptor } => {
            let r = field_report(descriptor)?;
            Ok(if json { render_json(&r) } else { r.text() })
        }
        Command::CodeAnalyze { file } => {
            let parsed = format::parse_code(&read(file)?)?;
            let r = code_report(&parsed.code, parsed.permutation, parsed.gen_rows, cli.cap)?;
            Ok(if json { render_json(&r) } else { r.text() })
        }
        Command::CodeDual { file } => {
            let parsed = format::parse_code(&read(file)?)?;
            let dual = parsed.code.dual();
            let r = code_report(&dual, None, dual.k(), cli.cap)?;
            Ok(if json {
                render_json(&r)
            } else {
                format::write_code(&dual, &r.summary_lines())
            })
        }
        Command::MoaVerify { file, t } => {
            let arr = format::parse_moa(&read(file)?)?;
            let r = verify_report(&arr, *t)?;
            let out = if json { render_json(&r) } else { r.text() };
            if r.holds {
                Ok(out)
            } else {
                let w = r.witness.as_ref().expect("failures carry a witness");
                Err(Failure::Verdict {
                    report: Some(out),
                    message: format!("error: NotUniform: {}\n", w.describe()),
                })
            }
        }
        Command::MoaAnalyze { file, t } => {
            let arr = format::parse_moa(&read(file)?)?.verify_linearity();
            match arr.analyze(*t) {
                Ok(r) => Ok(if json { render_json(&r) } else { analysis_text(&r) }),
                Err(e @ Error::NotUniform { .. }) if t.is_some() => Err(Failure::Verdict {
                    report: None,
                    message: diagnostic(&e),
                }),
                Err(e) => Err(e.into()),
            }
        }
        Command::MoaFromCode { file } => {
            let parsed = format::parse_code(&read(file)?)?;
            let ctx = RhoContext::for_code(&parsed.code, policy)?;
            let out = ctx.moa_from_code(&parsed.code, cli.cap)?;
            let cert = &out.certificate;
            let r = ConversionReport {
                parameters: out.array.notation(cert.strength, false),
                q: out.array.q(),
                degrees: out.array.degrees(),
                bases: ctx.basis_summary(),
                block_permutation: parsed.permutation,
                strength: Some(cert.strength),
                dual_distance: cert.dual_distance,
                indices: cert.indices.clone(),
                rows: out.array.rows().to_vec(),
            };
            Ok(if json {
                render_json(&r)
            } else {
                format::write_moa(&out.array, &r.summary_lines())
            })
        }
        Command::MoaTraceDual { file } => {
            let arr = format::parse_moa(&read(file)?)?;
            let ctx = RhoContext::for_array(&arr, policy)?;
            let dual = ctx.trace_dual(&arr, cli.cap)?;
            let t = dual.max_strength();
            let indices = dual.strength_evidence(t)?;
            let r = ConversionReport {
                parameters: dual.notation(t, false),
                q: dual.q(),
                degrees: dual.degrees(),
                bases: ctx.basis_summary(),
                block_permutation: arr.permutation().map(<[usize]>::to_vec),
                strength: Some(t),
                dual_distance: None,
                indices,
                rows: dual.rows().to_vec(),
            };
            Ok(if json {
                render_json(&r)
            } else {
                format::write_moa(&dual, &r.summary_lines())
            })
        }
        Command::IrmoaFromCode { file, require_dual } => {
            let parsed = format::parse_code(&read(file)?)?;
            let ctx = RhoContext::for_code(&parsed.code, policy)?;
            let out = ctx.irmoa_from_code(&parsed.code, *require_dual, cli.cap)?;
            let side = |s: &moatrace::duality::IrmoaSide| SideReport {
                parameters: s.array.notation(s.strength, s.irredundant),
                strength: s.strength,
                d_h: s.d_h,
                irredundant: s.irredundant,
                by_subarrays: s.by_subarrays,
            };
            let mut notes = Vec::new();
            if out.dual.is_none() {
                notes.push(format!(
                    "no self-dual basis for every block (q = {}, sizes {:?}); dual side not evaluated",
                    ctx.base().q(),
                    ctx.partition().block_sizes()
                ));
            }
            let r = IrmoaReport {
                n: out.n,
                k: out.k,
                d_pi: out.d_pi,
                d_pi_dual: out.d_pi_dual,
                t1: out.t1,
                t2: out.t2,
                bases: ctx.basis_summary(),
                block_permutation: parsed.permutation,
                primal: side(&out.primal),
                dual: out.dual.as_ref().map(side),
                both_irredundant: out.both_irredundant,
                trace_dual_matches: out.trace_dual_matches,
                notes,
            };
            Ok(if json {
                render_json(&r)
            } else {
                format::write_moa(&out.primal.array, &r.summary_lines())
            })
        }
        Command::FixturesSelftest { fixtures_dir } => {
            let fixtures = match fixtures_dir {
                Some(dir) => selftest::Fixtures::from_dir(dir).map_err(|(p, e)| io_error(&p, e))?,
                None => selftest::Fixtures::embedded(),
            };
            let r = selftest::run(&fixtures);
            let out = if json { render_json(&r) } else { r.text() };
            if r.failed == 0 {
                Ok(out)
            } else {
                Err(Failure::Verdict {
                    report: Some(out),
                    message: format!("error: {} of {} self-test checks failed\n", r.failed, r.checks.len()),
                })
            }
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn one_based(cols: &[usize]) -> String {
    let inner: Vec<String> = cols.iter().map(|c| (c + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn matrix_text(rows: &[Vec<u32>], indent: &str) -> String {
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(u32::to_string).collect();
            format!("{indent}{}\n", cells.join(" "))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldReport {
    pub field: String,
    pub p: u64,
    pub r: u32,
    pub q: u64,
    pub degree: usize,
    pub order: u64,
    pub modulus: Vec<u32>,
    pub traces: Vec<u32>,
    pub polynomial_gram: Vec<Vec<u32>>,
    pub self_dual_exists: bool,
    pub self_dual_basis: Option<Vec<u32>>,
}

fn field_report(descriptor: &str) -> Result<FieldReport, Failure> {
    let d = FieldDescriptor::parse(descriptor)?;
    let f = d.ext_field()?;
    let exists = f.self_dual_basis_exists();
    let sd = if exists { f.find_self_dual_basis()? } else { None };
    Ok(FieldReport {
        field: f.to_string(),
        p: d.base.p(),
        r: d.base.r(),
        q: f.q(),
        degree: f.degree(),
        order: f.order() as u64,
        modulus: f.modulus().to_vec(),
        traces: f.elements().map(|x| f.trace(x)).collect(),
        polynomial_gram: f.basis().gram().row_vecs(),
        self_dual_exists: exists,
        self_dual_basis: sd.map(|b| b.elements().to_vec()),
    })
}

impl FieldReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.field);
        let _ = writeln!(s, "order {} over F_{} (p = {}, r = {})", self.order, self.q, self.p, self.r);
        let _ = writeln!(s, "modulus coefficients (low first): {:?}", self.modulus);
        let _ = writeln!(s, "Gram matrix of the polynomial basis:");
        s.push_str(&matrix_text(&self.polynomial_gram, "  "));
        match &self.self_dual_basis {
            Some(b) => {
                let _ = writeln!(s, "self-dual basis: {b:?}");
            }
            None => {
                let _ = writeln!(s, "self-dual basis: none (q odd and degree even)");
            }
        }
        let traces: Vec<String> = self.traces.iter().map(u32::to_string).collect();
        let _ = writeln!(s, "traces of 0..{}: {}", self.order - 1, traces.join(" "));
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeReport {
    pub q: u64,
    pub partition: String,
    pub block_sizes: Vec<usize>,
    pub block_permutation: Option<Vec<usize>>,
    pub n: usize,
    pub k: usize,
    pub dependent_rows_dropped: usize,
    pub generator: Vec<Vec<u32>>,
    pub d_pi: Option<usize>,
    pub singleton: Option<CodeSingleton>,
    pub dual_k: usize,
    pub d_pi_dual: Option<usize>,
    /// `d_π + d_π⊥ ≤ n + 2`, when both are defined
    pub distance_sum_bound: Option<bool>,
}

fn code_report(
    code: &BlockCode,
    block_permutation: Option<Vec<usize>>,
    gen_rows: usize,
    cap: u64,
) -> Result<CodeReport, Failure> {
    let dual = code.dual();
    let (d_pi, singleton) = if code.k() == 0 {
        (None, None)
    } else {
        let s = code.singleton_report(cap)?;
        let by_blocks = code.min_pi_distance_by_blocks()?;
        if by_blocks != s.d_pi {
            return Err(Error::Inconsistent(format!(
                "π-distance {} by enumeration but {by_blocks} by block independence",
                s.d_pi
            ))
            .into());
        }
        (Some(s.d_pi), Some(s))
    };
    let d_pi_dual = if dual.k() == 0 {
        None
    } else {
        Some(dual.min_pi_distance(cap)?)
    };
    let distance_sum_bound = d_pi.zip(d_pi_dual).map(|(a, b)| a + b <= code.n() + 2);
    if distance_sum_bound == Some(false) {
        return Err(Error::BoundViolation("d_π + d_π⊥ exceeds n + 2".into()).into());
    }
    Ok(CodeReport {
        q: code.field().q(),
        partition: code.partition().to_string(),
        block_sizes: code.partition().block_sizes().to_vec(),
        block_permutation,
        n: code.n(),
        k: code.k(),
        dependent_rows_dropped: gen_rows - code.k(),
        generator: code.generator().row_vecs(),
        d_pi,
        singleton,
        dual_k: dual.k(),
        d_pi_dual,
        distance_sum_bound,
    })
}

impl CodeReport {
    fn summary_lines(&self) -> Vec<String> {
        let opt = |d: Option<usize>| d.map_or("undefined".to_string(), |d| d.to_string());
        let mut v = vec![
            format!("[{}, {}] code over F_{} of type {}", self.n, self.k, self.q, self.partition),
            format!("d_pi = {}, dual d_pi = {}", opt(self.d_pi), opt(self.d_pi_dual)),
        ];
        if let Some(s) = &self.singleton {
            v.push(format!(
                "Singleton: n - k = {} >= {} (sum of the {} largest blocks), MDS: {}",
                s.redundancy,
                s.rhs,
                s.d_pi - 1,
                yes(s.is_mds)
            ));
        }
        v
    }

    fn text(&self) -> String {
        let mut s = String::new();
        for l in self.summary_lines() {
            let _ = writeln!(s, "{l}");
        }
        if let Some(p) = &self.block_permutation {
            let _ = writeln!(s, "blocks reordered: new block i is input block {}", one_based(p));
        }
        if self.dependent_rows_dropped > 0 {
            let _ = writeln!(s, "dropped {} dependent generator rows", self.dependent_rows_dropped);
        }
        if let Some(b) = self.distance_sum_bound {
            let _ = writeln!(s, "d_pi + dual d_pi <= n + 2: {}", yes(b));
        }
        let _ = writeln!(s, "dual dimension {}", self.dual_k);
        let _ = writeln!(s, "generator (reduced):");
        s.push_str(&matrix_text(&self.generator, "  "));
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub cols: Vec<usize>,
    pub first: Vec<u32>,
    pub first_count: u64,
    pub second: Vec<u32>,
    pub second_count: u64,
}

impl Witness {
    fn describe(&self) -> String {
        format!(
            "columns {}: tuple {:?} occurs {} times, {:?} occurs {} times",
            one_based(&self.cols),
            self.first,
            self.first_count,
            self.second,
            self.second_count
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    /// present when the strength holds
    pub parameters: Option<String>,
    pub m: u64,
    pub s: usize,
    pub q: u64,
    pub degrees: Vec<usize>,
    pub column_permutation: Option<Vec<usize>>,
    pub t: usize,
    pub holds: bool,
    pub indices: Vec<SubsetIndex>,
    pub lambda_min: Option<u64>,
    pub witness: Option<Witness>,
}

fn verify_report(arr: &MixedArray, t: usize) -> Result<VerifyReport, Failure> {
    if t > arr.s() {
        return Err(Error::BadIndex {
            index: t,
            bound: arr.s() + 1,
        }
        .into());
    }
    let (holds, indices, lambda_min, witness) = match arr.strength_evidence(t) {
        Ok(ix) => (true, ix, Some(arr.lambda_min(t)?), None),
        Err(Error::NotUniform {
            cols,
            first,
            first_count,
            second,
            second_count,
        }) => (
            false,
            Vec::new(),
            None,
            Some(Witness {
                cols,
                first,
                first_count,
                second,
                second_count,
            }),
        ),
        Err(e) => return Err(e.into()),
    };
    Ok(VerifyReport {
        parameters: holds.then(|| arr.notation(t, false)),
        m: arr.m() as u64,
        s: arr.s(),
        q: arr.q(),
        degrees: arr.degrees(),
        column_permutation: arr.permutation().map(<[usize]>::to_vec),
        t,
        holds,
        indices,
        lambda_min,
        witness,
    })
}

impl VerifyReport {
    fn text(&self) -> String {
        let mut s = String::new();
        match &self.parameters {
            Some(p) => {
                let _ = writeln!(s, "{p}");
            }
            None => {
                let _ = writeln!(s, "M = {}, s = {}, q = {}", self.m, self.s, self.q);
            }
        }
        if let Some(p) = &self.column_permutation {
            let _ = writeln!(s, "columns reordered: new column i is input column {}", one_based(p));
        }
        let _ = writeln!(s, "strength ≥ {}: {}", self.t, yes(self.holds));
        for ix in &self.indices {
            let _ = writeln!(s, "  index {}: {}", one_based(&ix.cols), ix.index);
        }
        if let Some(l) = self.lambda_min {
            let _ = writeln!(s, "lambda_min = {l}");
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(s, "witness: {}", w.describe());
        }
        s
    }
}

fn analysis_text(r: &MoaReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", r.parameters);
    let degrees: Vec<String> = r.degrees.iter().map(usize::to_string).collect();
    let _ = writeln!(s, "M = {}, s = {}, q = {}, degrees {}", r.m, r.s, r.q, degrees.join(" "));
    let _ = writeln!(s, "linear: {}", yes(r.linear));
    let _ = writeln!(s, "strength t = {} (maximum {})", r.t, r.t_max);
    for ix in &r.indices {
        let _ = writeln!(s, "  index {}: {}", one_based(&ix.cols), ix.index);
    }
    let _ = writeln!(s, "lambda_min = {}", r.lambda_min);
    match r.d_h {
        Some(d) => {
            let _ = writeln!(s, "d_H = {d}");
        }
        None => {
            let _ = writeln!(s, "d_H undefined");
        }
    }
    if let Some(sa) = &r.singleton {
        let _ = writeln!(
            s,
            "Singleton: {} <= M = {} <= {} <= {}",
            sa.lower, sa.m, sa.upper, sa.loose
        );
        match sa.defect_exact {
            Some(d) => {
                let _ = writeln!(s, "defect = {d}");
            }
            None => {
                let _ = writeln!(s, "defect ≈ {:.6}", sa.defect);
            }
        }
        let _ = writeln!(s, "MDS: {}", yes(sa.is_mds));
        let _ = writeln!(s, "almost-MDS: {}", yes(sa.is_almost_mds));
    }
    let irr = &r.irredundancy;
    let _ = write!(s, "irredundant at t = {}: {}", irr.t, yes(irr.irredundant));
    if let Some(b) = irr.by_subarrays {
        let _ = write!(s, " (subarray check: {})", yes(b));
    }
    s.push('\n');
    if let Some(ex) = &r.extremal {
        if ex.applies {
            let _ = writeln!(
                s,
                "extremal t = floor(s/2): MDS {} and lambda_min = 1 {}",
                yes(ex.is_mds == Some(true)),
                yes(ex.lambda_min_is_one == Some(true))
            );
        }
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversionReport {
    pub parameters: String,
    pub q: u64,
    pub degrees: Vec<usize>,
    pub bases: Vec<String>,
    pub block_permutation: Option<Vec<usize>>,
    pub strength: Option<usize>,
    pub dual_distance: Option<usize>,
    pub indices: Vec<SubsetIndex>,
    pub rows: Vec<Vec<u32>>,
}

impl ConversionReport {
    fn summary_lines(&self) -> Vec<String> {
        let mut v = vec![self.parameters.clone()];
        for (i, b) in self.bases.iter().enumerate() {
            v.push(format!("column {} basis: {b}", i + 1));
        }
        if let Some(p) = &self.block_permutation {
            v.push(format!("blocks reordered: new block i is input block {}", one_based(p)));
        }
        if let Some(d) = self.dual_distance {
            v.push(format!("dual pi-distance {d}, strength {}", d - 1));
        }
        for ix in &self.indices {
            v.push(format!("index {}: {}", one_based(&ix.cols), ix.index));
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideReport {
    pub parameters: String,
    pub strength: usize,
    pub d_h: Option<usize>,
    pub irredundant: bool,
    pub by_subarrays: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrmoaReport {
    pub n: usize,
    pub k: usize,
    pub d_pi: usize,
    pub d_pi_dual: usize,
    pub t1: usize,
    pub t2: usize,
    pub bases: Vec<String>,
    pub block_permutation: Option<Vec<usize>>,
    pub primal: SideReport,
    pub dual: Option<SideReport>,
    pub both_irredundant: Option<bool>,
    pub trace_dual_matches: Option<bool>,
    pub notes: Vec<String>,
}

impl IrmoaReport {
    fn summary_lines(&self) -> Vec<String> {
        let mut v = vec![
            format!("[{}, {}] code: d_pi = {}, dual d_pi = {}", self.n, self.k, self.d_pi, self.d_pi_dual),
            format!("{} irredundant: {}", self.primal.parameters, yes(self.primal.irredundant)),
        ];
        if let Some(d) = &self.dual {
            v.push(format!("dual side {} irredundant: {}", d.parameters, yes(d.irredundant)));
        }
        if let Some(b) = self.both_irredundant {
            v.push(format!("both irredundant: {}", yes(b)));
        }
        if let Some(m) = self.trace_dual_matches {
            v.push(format!("trace dual of the array equals the dual-side array: {}", yes(m)));
        }
        v.extend(self.notes.iter().cloned());
        v
    }
}
