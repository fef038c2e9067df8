//! Command-line front end.

use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::canon::{eig_structure, frobenius_form};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::json::{cert_from_json, cert_to_json, eig_to_json, field_from_json, field_to_json, mat_from_json, mat_to_json, poly_to_json};
use crate::matrix::Mat;
use crate::oracle::{all_matrices, composite_set, digest, empirical_sn_from, OracleTable};
use crate::pipelines::{decompose_with, is_sum_of_idempotents, sn_bounds, Mode, Sign};
use crate::two_idem::{decide_diff2_mode, decide_sum2_mode, IntertwineMode};

#[derive(Parser, Debug)]
#[command(name = "idemsum", version, about = "Sums and differences of idempotent matrices over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Input JSON file (`-` for standard input).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Also write the JSON result to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Field as inline JSON, e.g. '{"p":3,"k":1}'.
    #[arg(long = "field-inline")]
    pub field_inline: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sum-of-idempotents, difference-of-two and sum-of-two decisions.
    Decide(Common),
    /// Decomposition certificate.
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "auto")]
        mode: String,
    },
    /// Invariant factors and eigen-structure.
    Invariants(Common),
    /// Exhaustive minimal-count table summary.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
    /// Checks a certificate against the matrix given with `--in`.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Bounds on the idempotent count for a size and field.
    Bounds {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        size: usize,
    },
    /// Literal versus corrected intertwining over an exhaustive suite.
    Discrepancies {
        #[command(flatten)]
        common: Common,
        /// Suite id `m<n>f<q>`, e.g. `m2f3`.
        #[arg(long)]
        suite: String,
        #[arg(long, value_enum, default_value_t = Kind::Diff2)]
        kind: Kind,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Diff2,
    Sum2,
}

/// Exit code and standard-output text of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

pub fn exit_code(e: &Error) -> i32 {
    use Error::*;
    match e {
        Parse(_) | NotSquare { .. } | ShapeMismatch(_) | NotPrime(_) | ReducibleModulus(_) | DegreeMismatch { .. }
        | ElementOutOfRange(_) | FieldTooLargeForEncoding | FieldMismatch | UnknownSuite(_) => 2,
        BudgetExceeded(_) | BelowThreshold { .. } | CapTooLow(_) => 3,
        _ => 1,
    }
}

pub fn error_json(e: &Error) -> Value {
    let mut v = json!({"error": e.code(), "message": e.to_string()});
    if let Error::NotUnitSubdiagonalHessenberg { row, col } | Error::BadFreePosition { row, col } = e {
        v["position"] = json!([row, col]);
    }
    v
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

fn inline_field(c: &Common) -> Result<Option<Field>> {
    c.field_inline
        .as_deref()
        .map(|s| {
            let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("field: {e}")))?;
            field_from_json(&v)
        })
        .transpose()
}

fn require_field(c: &Common) -> Result<Field> {
    inline_field(c)?.ok_or_else(|| Error::Parse("--field-inline is required".into()))
}

fn input_matrix(c: &Common) -> Result<Mat> {
    let path = c.input.as_ref().ok_or_else(|| Error::Parse("--in is required".into()))?;
    let v = read_json(path)?;
    let m = mat_from_json(&v, inline_field(c)?.as_ref())?;
    m.require_square()?;
    Ok(m)
}

/// Parses a suite id `m<n>f<q>` into a size and field.
pub fn parse_suite(id: &str) -> Result<(usize, Field)> {
    let bad = || Error::UnknownSuite(id.to_string());
    let lower = id.to_ascii_lowercase();
    let rest = lower.strip_prefix('m').ok_or_else(bad)?;
    let (n, q) = rest.split_once('f').ok_or_else(bad)?;
    let n: usize = n.parse().map_err(|_| bad())?;
    let q: u64 = q.parse().map_err(|_| bad())?;
    if n == 0 || q < 2 {
        return Err(bad());
    }
    let p = (2..=q).find(|d| q % d == 0).ok_or_else(bad)?;
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    if r != 1 {
        return Err(bad());
    }
    Ok((n, Field::new(p, k, None)?))
}

/// One ledger line per matrix on which the two intertwining readings
/// disagree, with the exhaustive ground truth attached.
pub fn discrepancies(n: usize, field: &Field, kind: Kind) -> Result<Vec<Value>> {
    let signs = match kind {
        Kind::Diff2 => [Sign::Plus, Sign::Minus],
        Kind::Sum2 => [Sign::Plus, Sign::Plus],
    };
    let truth = composite_set(&signs, n, field)?;
    let decide = |a: &Mat, mode| match kind {
        Kind::Diff2 => decide_diff2_mode(a, mode),
        Kind::Sum2 => decide_sum2_mode(a, mode),
    };
    let mut out = Vec::new();
    for a in all_matrices(field, n)? {
        let literal = decide(&a, IntertwineMode::Literal)?;
        let corrected = decide(&a, IntertwineMode::Corrected)?;
        if literal != corrected {
            out.push(json!({
                "matrix": mat_to_json(&a),
                "literal_decision": literal,
                "corrected_decision": corrected,
                "oracle_truth": truth.contains(&digest(&a)),
            }));
        }
    }
    Ok(out)
}

fn execute(command: &Command) -> Result<(i32, String, Option<PathBuf>)> {
    let single = |v: Value| v.to_string();
    Ok(match command {
        Command::Decide(c) => {
            let a = input_matrix(c)?;
            let sum = is_sum_of_idempotents(&a)?;
            let v = json!({
                "sum_of_idempotents": sum,
                "diff2": decide_diff2_mode(&a, IntertwineMode::Corrected)?,
                "sum2": decide_sum2_mode(&a, IntertwineMode::Corrected)?,
            });
            (if sum { 0 } else { 1 }, single(v), c.out.clone())
        }
        Command::Decompose { common, mode } => {
            let mode: Mode = mode.parse()?;
            let a = input_matrix(common)?;
            eprintln!("decompose: {}x{} over F_{}, mode {mode}", a.rows(), a.cols(), a.field().order());
            let cert = decompose_with(&a, mode, common.seed)?;
            if !cert.verify(&a) {
                return Err(Error::Internal("certificate failed re-verification".into()));
            }
            (0, single(cert_to_json(&cert)), common.out.clone())
        }
        Command::Invariants(c) => {
            let a = input_matrix(c)?;
            let (inv, _) = frobenius_form(&a)?;
            let eig = eig_structure(&a, c.seed)?;
            let v = json!({
                "invariant_factors": inv.factors().iter().map(poly_to_json).collect::<Vec<_>>(),
                "char_poly": poly_to_json(&inv.char_poly(a.field())),
                "eig_structure": eig_to_json(&eig),
            });
            (0, single(v), c.out.clone())
        }
        Command::Oracle { common, size, cap } => {
            let field = require_field(common)?;
            eprintln!("oracle: M_{size}(F_{}) with cap {cap}", field.order());
            let table = OracleTable::build(&field, *size, *cap)?;
            if let Some(path) = &common.out {
                let lines: String = table
                    .entries()
                    .map(|(d, c)| json!({"digest": d, "min_count": c}).to_string() + "\n")
                    .collect();
                fs::write(path, lines).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            }
            let sn = empirical_sn_from(&table)?;
            let v = json!({
                "n": size,
                "field": field_to_json(&field),
                "cap": cap,
                "empirical_sn": sn,
                "histogram": table.histogram(),
            });
            (0, single(v), None)
        }
        Command::Verify { common, cert } => {
            let a = input_matrix(common)?;
            let c = cert_from_json(&read_json(cert)?)?;
            let valid = c.verify(&a);
            (if valid { 0 } else { 1 }, single(json!({"valid": valid})), common.out.clone())
        }
        Command::Bounds { common, size } => {
            let field = require_field(common)?;
            let b = sn_bounds(*size, &field);
            let v = json!({
                "n": size,
                "field": field_to_json(&field),
                "lower": b.lower,
                "upper": b.upper,
                "notes": b.notes,
            });
            (0, single(v), common.out.clone())
        }
        Command::Discrepancies { common, suite, kind } => {
            let (n, field) = parse_suite(suite)?;
            let lines: String = discrepancies(n, &field, *kind)?.iter().map(|v| v.to_string() + "\n").collect();
            return Ok((0, lines, common.out.clone()));
        }
    })
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    match execute(&cli.command) {
        Ok((code, mut stdout, out)) => {
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            if let Some(path) = out {
                if let Err(e) = fs::write(&path, &stdout) {
                    let err = Error::Parse(format!("{}: {e}", path.display()));
                    return Outcome { code: 2, stdout: error_json(&err).to_string() + "\n" };
                }
            }
            Outcome { code, stdout }
        }
        Err(e) => {
            eprintln!("error: {e}");
            Outcome { code: exit_code(&e), stdout: error_json(&e).to_string() + "\n" }
        }
    }
}

/// Parses arguments and runs; clap usage errors map to exit code 2.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) if !e.use_stderr() => Outcome { code: 0, stdout: e.to_string() },
        Err(e) => {
            eprintln!("{e}");
            let err = Error::Parse(e.kind().to_string());
            Outcome { code: 2, stdout: error_json(&err).to_string() + "\n" }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        let (n, f) = parse_suite("m3f9").unwrap();
        assert_eq!((n, f.p(), f.k()), (3, 3, 2));
        assert!(matches!(parse_suite(""), Err(Error::UnknownSuite(_))));
        assert!(matches!(parse_suite("m2f6"), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn literal_ledger_over_f3() {
        let f3 = Field::prime(3).unwrap();
        let ledger = discrepancies(2, &f3, Kind::Diff2).unwrap();
        let target = mat_to_json(&Mat::diag(&f3, &[crate::field::Elem::ZERO, f3.from_int(-1)]));
        let hit = ledger.iter().find(|v| v["matrix"] == target).expect("diag(0,-1) listed");
        assert_eq!(hit["oracle_truth"], json!(true));
        assert_eq!(hit["literal_decision"], json!(false));
        assert!(ledger.iter().all(|v| v["oracle_truth"] == v["corrected_decision"]));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Parse("x".into())), 2);
        assert_eq!(exit_code(&Error::BudgetExceeded("x".into())), 3);
        assert_eq!(exit_code(&Error::TraceNotInPrimeField), 1);
    }
}
