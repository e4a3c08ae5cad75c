//! Command-line front end. `run` returns the process exit code:
//! 0 pass, 1 fail, 2 usage / IO / parse error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::construct::{construct_bms, BmsMatrix};
use crate::error::Error;
use crate::extract::extract_oa;
use crate::field::FieldTable;
use crate::hadamard::{paley_one, quaternary_embed, quaternary_tensor, real_hadamard, sylvester};
use crate::io::{encode_oa, parse_oa, MatrixFile};
use crate::matrix::{is_hadamard, UnitMatrix};
use crate::oa::{oa_from_field, verify_oa, OrthogonalArray};
use crate::report::{InputRef, Report, Verdict, SCHEMA_VERSION};
use crate::verify::{split_certificate, Mode, SplitCertificate};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest subset count the roundtrip command checks exhaustively.
const ROUNDTRIP_EXHAUSTIVE_LIMIT: u128 = 1_000;

#[derive(Debug, Parser)]
#[command(name = "bmsh", about = "Balancedly multi-splittable Hadamard matrices from orthogonal arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Sylvester,
    Paley1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Hadamard,
    Oa,
    Blockwise,
    Exhaustive,
    Sampled,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the OA_1(q², q+1, q, 2) built from GF(q).
    GenOa {
        #[arg(long)]
        q: usize,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Write a Hadamard matrix of the given order.
    GenHadamard {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "sylvester")]
        method: Method,
        /// Emit sylvester ⊗ [[1, i], [1, −i]] as a quaternary matrix.
        #[arg(long)]
        quaternary_tensor: bool,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Build the multi-splittable matrix from an OA file and a Hadamard file.
    Construct {
        #[arg(long)]
        oa: PathBuf,
        #[arg(long)]
        hadamard: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Verify a matrix or array file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: VerifyMode,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Recover the orthogonal array from a BMS/QBMS file.
    Extract {
        #[arg(long)]
        input: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Construct, verify, extract and compare for GF(q).
    Roundtrip {
        #[arg(long)]
        q: usize,
        /// Use a quaternary Hadamard matrix with ±i entries.
        #[arg(long)]
        quaternary: bool,
    },
}

/// Outcome of a command before it is mapped to an exit code.
enum Outcome {
    Pass,
    Fail(String),
}

struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

type CmdResult = Result<Outcome, Usage>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::GenOa { q, output } => gen_oa(q, &output, out),
        Command::GenHadamard {
            order,
            method,
            quaternary_tensor,
            output,
        } => gen_hadamard(order, method, quaternary_tensor, &output, out),
        Command::Construct {
            oa,
            hadamard,
            output,
        } => construct(&oa, &hadamard, &output, out, err),
        Command::Verify {
            input,
            mode,
            samples,
            seed,
            report,
        } => verify(&input, mode, samples, seed, report.as_deref(), out),
        Command::Extract { input, output } => extract(&input, &output, out),
        Command::Roundtrip { q, quaternary } => roundtrip(q, quaternary, out),
    };
    match result {
        Ok(Outcome::Pass) => EXIT_PASS,
        Ok(Outcome::Fail(msg)) => {
            let _ = writeln!(err, "fail: {msg}");
            EXIT_FAIL
        }
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn read(path: &Path) -> Result<String, Usage> {
    std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Usage> {
    std::fs::write(path, text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn gen_oa(q: usize, output: &Path, out: &mut dyn Write) -> CmdResult {
    let ft = FieldTable::new(q)?;
    let oa = oa_from_field(&ft);
    debug_assert!(verify_oa(&oa));
    write_file(output, &encode_oa(&oa))?;
    let p = oa.params();
    let _ = writeln!(out, "wrote OA {} {} {} {} {} to {}", p.n, p.k, p.q, p.t, p.lambda, output.display());
    Ok(Outcome::Pass)
}

fn gen_hadamard(order: usize, method: Method, quaternary: bool, output: &Path, out: &mut dyn Write) -> CmdResult {
    let file = if quaternary {
        if !order.is_power_of_two() || order < 2 {
            return Err(Usage(format!(
                "--quaternary-tensor needs a power-of-two order >= 2, got {order}"
            )));
        }
        MatrixFile::QHad(quaternary_tensor(order.trailing_zeros())?)
    } else {
        let m = match method {
            Method::Sylvester => {
                if !order.is_power_of_two() {
                    return Err(Usage(format!("Sylvester order must be a power of two, got {order}")));
                }
                sylvester(order.trailing_zeros())?
            }
            Method::Paley1 => {
                let q = order
                    .checked_sub(1)
                    .ok_or_else(|| Usage("order must be positive".into()))?;
                paley_one(&FieldTable::new(q)?)?
            }
        };
        MatrixFile::Had(m)
    };
    write_file(output, &file.encode())?;
    let _ = writeln!(out, "wrote {} {order} to {}", file.header(), output.display());
    Ok(Outcome::Pass)
}

fn construct(oa_path: &Path, had_path: &Path, output: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let oa = parse_oa(&read(oa_path)?)?;
    let had = MatrixFile::parse(&read(had_path)?)?;
    let built = match had {
        MatrixFile::Had(k) => construct_bms(&oa, &k).map(MatrixFile::Bms),
        MatrixFile::QHad(k) => construct_bms(&oa, &k).map(MatrixFile::QBms),
        other => {
            return Err(Usage(format!(
                "{} is a {} file, expected HAD or QHAD",
                had_path.display(),
                other.header()
            )))
        }
    };
    let file = match built {
        Ok(f) => f,
        Err(e @ (Error::OrderMismatch { .. } | Error::RealOrder(_))) => return Err(e.into()),
        Err(e) => return Ok(Outcome::Fail(e.to_string())),
    };
    if oa.q() % 2 == 1 {
        let _ = writeln!(
            err,
            "warning: q = {} is odd; the result is Hadamard but multi-splittability is undefined",
            oa.q()
        );
    }
    write_file(output, &file.encode())?;
    let _ = writeln!(out, "wrote {} {} to {}", file.header(), oa.q(), output.display());
    Ok(Outcome::Pass)
}

fn describe_failure(c: &SplitCertificate) -> String {
    if let Some(f) = c.block_failures.first() {
        return format!(
            "block {} Gram entry at rows ({}, {}) is {}, expected {} or -1",
            f.block,
            f.rows.0,
            f.rows.1,
            f.value,
            c.q as i64 - 1
        );
    }
    if let Some(f) = c.agreement_failures.first() {
        return format!(
            "rows ({}, {}) agree in blocks {:?}, expected exactly one",
            f.rows.0, f.rows.1, f.agreeing_blocks
        );
    }
    if let Some(f) = c.subset_failures.first() {
        return format!(
            "subset {:?} Gram entry at rows ({}, {}) is {}, expected modulus {}",
            f.subset, f.rows.0, f.rows.1, f.value, c.alpha
        );
    }
    "certificate failed".into()
}

fn first_non_orthogonal<M: UnitMatrix>(m: &M) -> Option<String> {
    if !m.is_square() {
        return Some(format!("{}x{} is not square", m.n_rows(), m.n_cols()));
    }
    (0..m.n_rows())
        .flat_map(|i| (i + 1..m.n_rows()).map(move |j| (i, j)))
        .find_map(|(i, j)| {
            let v = m.row_inner_unchecked(i, j);
            (v != crate::gauss::GaussInt::ZERO).then(|| format!("rows {i} and {j} have inner product {v}"))
        })
}

fn split_json<M: UnitMatrix>(b: &BmsMatrix<M>, mode: Mode) -> Result<(bool, serde_json::Value, Option<String>), Usage> {
    if b.q() % 2 == 1 {
        return Err(Usage(format!("q = {} is odd; multi-splittability is undefined", b.q())));
    }
    let hadamard = is_hadamard(b.matrix());
    let ones = b.first_column_is_ones();
    let cert = split_certificate(b, mode)?;
    let pass = hadamard && ones && cert.passed();
    let failure = if pass {
        None
    } else if !hadamard {
        Some(format!(
            "not Hadamard: {}; {}",
            first_non_orthogonal(b.matrix()).unwrap_or_default(),
            if cert.passed() { "split check passed".into() } else { describe_failure(&cert) }
        ))
    } else if !ones {
        Some("first column is not all-ones".into())
    } else {
        Some(describe_failure(&cert))
    };
    let value = json!({
        "hadamard": hadamard,
        "first_column_ones": ones,
        "split": cert,
    });
    Ok((pass, value, failure))
}

fn verify(
    input: &Path,
    mode: VerifyMode,
    samples: usize,
    seed: Option<u64>,
    report: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let start = Instant::now();
    let text = read(input)?;
    let path = input.display().to_string();

    let (canonical, pass, certificate, failure) = if mode == VerifyMode::Oa {
        let oa: OrthogonalArray = parse_oa(&text)?;
        let pass = verify_oa(&oa);
        let cert = json!({ "params": oa.params(), "strength_count_ok": pass });
        let failure = (!pass).then(|| "strength/index counting property fails".to_string());
        (encode_oa(&oa), pass, cert, failure)
    } else {
        let file = MatrixFile::parse(&text)?;
        let canonical = file.encode();
        let (pass, cert, failure) = match mode {
            VerifyMode::Hadamard => {
                let failure = match &file {
                    MatrixFile::Had(m) => first_non_orthogonal(m),
                    MatrixFile::QHad(m) => first_non_orthogonal(m),
                    MatrixFile::Bms(b) => first_non_orthogonal(b.matrix()),
                    MatrixFile::QBms(b) => first_non_orthogonal(b.matrix()),
                };
                (failure.is_none(), json!({ "hadamard": failure.is_none() }), failure)
            }
            _ => {
                let split_mode = match mode {
                    VerifyMode::Blockwise => Mode::Blockwise,
                    VerifyMode::Exhaustive => Mode::Exhaustive,
                    VerifyMode::Sampled => {
                        let seed = seed.ok_or_else(|| Usage("--seed is required with --mode sampled".into()))?;
                        Mode::Sampled { count: samples, seed }
                    }
                    _ => unreachable!(),
                };
                match &file {
                    MatrixFile::Bms(b) => split_json(b, split_mode)?,
                    MatrixFile::QBms(b) => split_json(b, split_mode)?,
                    other => {
                        return Err(Usage(format!(
                            "mode needs a BMS or QBMS file, got {}",
                            other.header()
                        )))
                    }
                }
            }
        };
        (canonical, pass, cert, failure)
    };

    let mode_name = format!("{mode:?}").to_lowercase();
    if let Some(report_path) = report {
        let r = Report {
            schema_version: SCHEMA_VERSION,
            command: "verify".into(),
            mode: mode_name.clone(),
            inputs: vec![InputRef::new(path, canonical.as_bytes())],
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            certificate,
            timing_ms: start.elapsed().as_secs_f64() * 1e3,
        };
        write_file(report_path, &r.to_json())?;
    }
    match failure {
        None => {
            let _ = writeln!(out, "pass: {mode_name}");
            Ok(Outcome::Pass)
        }
        Some(msg) => Ok(Outcome::Fail(msg)),
    }
}

fn extract(input: &Path, output: &Path, out: &mut dyn Write) -> CmdResult {
    let file = MatrixFile::parse(&read(input)?)?;
    let result = match &file {
        MatrixFile::Bms(b) => extract_oa(b),
        MatrixFile::QBms(b) => extract_oa(b),
        other => {
            return Err(Usage(format!(
                "extract needs a BMS or QBMS file, got {}",
                other.header()
            )))
        }
    };
    match result {
        Ok(oa) => {
            write_file(output, &encode_oa(&oa))?;
            let p = oa.params();
            let _ = writeln!(out, "wrote OA {} {} {} {} {} to {}", p.n, p.k, p.q, p.t, p.lambda, output.display());
            Ok(Outcome::Pass)
        }
        Err(e) => Ok(Outcome::Fail(e.to_string())),
    }
}

fn roundtrip_with<M: UnitMatrix>(oa: &OrthogonalArray, k: &M, out: &mut dyn Write) -> CmdResult {
    let q = oa.q();
    let b = match construct_bms(oa, k) {
        Ok(b) => b,
        Err(e) => return Ok(Outcome::Fail(format!("construct: {e}"))),
    };
    let _ = writeln!(out, "constructed order-{} matrix", b.order());
    if !is_hadamard(b.matrix()) {
        return Ok(Outcome::Fail("constructed matrix is not Hadamard".into()));
    }
    if q.is_multiple_of(2) {
        let total = crate::verify::binomial(q + 1, q / 2);
        let mode = if total <= ROUNDTRIP_EXHAUSTIVE_LIMIT {
            Mode::Exhaustive
        } else {
            Mode::Blockwise
        };
        let cert = split_certificate(&b, mode)?;
        if !cert.passed() {
            return Ok(Outcome::Fail(describe_failure(&cert)));
        }
        let _ = writeln!(out, "verified {mode:?}: {} subsets checked of {total}", cert.subsets_checked);
    }
    let got = match extract_oa(&b) {
        Ok(a) => a,
        Err(e) => return Ok(Outcome::Fail(format!("extract: {e}"))),
    };
    if got.canonical_relabel() != oa.canonical_relabel() {
        return Ok(Outcome::Fail("extracted array differs from the input".into()));
    }
    let _ = writeln!(out, "extracted array matches input up to symbol relabeling");
    Ok(Outcome::Pass)
}

fn roundtrip(q: usize, quaternary: bool, out: &mut dyn Write) -> CmdResult {
    let oa = oa_from_field(&FieldTable::new(q)?);
    let _ = writeln!(out, "built OA_1({}, {}, {q}, 2)", q * q, q + 1);
    if quaternary {
        let k = if q.is_power_of_two() {
            quaternary_tensor(q.trailing_zeros())?
        } else {
            quaternary_embed(&real_hadamard(q)?)
        };
        roundtrip_with(&oa, &k, out)
    } else {
        roundtrip_with(&oa, &real_hadamard(q)?, out)
    }
}
