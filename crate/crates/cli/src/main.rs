//! Command-line front end: parse maps or matrices, run classification,
//! conjugacy, and degree queries, and emit one JSON document per invocation.
//!
//! Exit codes: 0 success (and `conjugate` with a positive verdict), 1 usage
//! error, 2 parse or validation error, 3 not conjugate, 4 undecided,
//! 5 internal cap exceeded.

use clap::{Args, Parser, Subcommand};
use monoconj::{
    classify, degree_growth, dynamical_degrees, enumerate_reduced, integral_conjugacy,
    lls_period, parse_map, print_map, realize, reduce, sail_lls_oracle, ConjugacyVerdict, Error,
    IntMatrix, LLSPeriod, MonomialMap, Order, SpectrumClass,
};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Map, Number, Value};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "monoconj",
    version,
    about = "Conjugacy classification of monomial birational maps via exact integer matrix invariants"
)]
struct Cli {
    /// JSON output is always on; the flag is accepted for forward compatibility.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// Input accepted either positionally (auto-detected) or through a flag.
#[derive(Args)]
struct InputArg {
    /// Map expression like "x*y, 1/x", or matrix JSON like `[[7,18],[5,13]]`
    /// (matrices may also be given as @file)
    input: Option<String>,
    /// Matrix as a JSON array of rows, inline or @file
    #[arg(long, conflicts_with_all = ["map", "input"])]
    matrix: Option<String>,
    /// Map expression
    #[arg(long, conflicts_with_all = ["matrix", "input"])]
    map: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a map expression into its exponent matrix
    Parse {
        #[command(flatten)]
        input: InputArg,
    },
    /// Print the canonical map expression of an exponent matrix
    Print {
        #[command(flatten)]
        input: InputArg,
    },
    /// Spectral classification of a 2x2 unimodular matrix or map
    Classify {
        #[command(flatten)]
        input: InputArg,
    },
    /// LLS period of a hyperbolic determinant-one matrix or map
    Lls {
        #[command(flatten)]
        input: InputArg,
    },
    /// Reduced form, sign and conjugator of a hyperbolic matrix or map
    Reduce {
        #[command(flatten)]
        input: InputArg,
    },
    /// Reduced matrix realizing an LLS period, e.g. `[1,2,1,2]`
    Realize {
        /// LLS period as a JSON array of positive integers
        sequence: String,
    },
    /// All reduced matrices in the conjugacy class
    EnumerateReduced {
        #[command(flatten)]
        input: InputArg,
    },
    /// Decide GL(n,Z)-conjugacy of two maps or matrices
    Conjugate {
        /// First map expression or matrix JSON (matrices may be @file)
        left: String,
        /// Second map expression or matrix JSON
        right: String,
        /// Coefficient bound for the certificate search
        #[arg(long, default_value_t = 30)]
        bound: u64,
    },
    /// Dynamical degrees lambda_1 ... lambda_n
    Dyndeg {
        #[command(flatten)]
        input: InputArg,
        /// Root isolation tolerance
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Order of the map under composition
    Order {
        #[command(flatten)]
        input: InputArg,
    },
    /// Projective degree of the map
    Degree {
        #[command(flatten)]
        input: InputArg,
    },
    /// Exact degrees of f, f^2, ..., f^L and the L-th root growth estimate
    DegreeGrowth {
        #[command(flatten)]
        input: InputArg,
        /// Number of iterates
        #[arg(long, default_value_t = 20)]
        length: u64,
    },
    /// Compare the geometric sail reading of the LLS period with the
    /// reduction-based computation
    SailCheck {
        #[command(flatten)]
        input: InputArg,
        /// Coordinate bound for the lattice point search
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
}

enum CliError {
    Validation(String),
    InternalCap(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::IterationCap { .. } => CliError::InternalCap(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn json_int(v: &BigInt) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("integer literal"))
}

fn json_matrix(m: &IntMatrix) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(json_int).collect()))
            .collect(),
    )
}

fn json_sequence(entries: &[BigInt]) -> Value {
    Value::Array(entries.iter().map(json_int).collect())
}

fn bigint_from_number(v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string())
            .map_err(|_| CliError::Validation(format!("matrix entries must be integers, got {n}"))),
        other => Err(CliError::Validation(format!(
            "matrix entries must be integers, got {other}"
        ))),
    }
}

fn parse_matrix_text(text: &str) -> Result<IntMatrix, CliError> {
    let body = if let Some(path) = text.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {path}: {e}")))?
    } else {
        text.to_string()
    };
    let value: Value = serde_json::from_str(&body)
        .map_err(|e| CliError::Validation(format!("invalid matrix JSON: {e}")))?;
    let Value::Array(rows) = value else {
        return Err(CliError::Validation("matrix JSON must be an array of rows".into()));
    };
    let mut parsed: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
    for row in &rows {
        let Value::Array(cells) = row else {
            return Err(CliError::Validation("matrix rows must be arrays".into()));
        };
        parsed.push(cells.iter().map(bigint_from_number).collect::<Result<_, _>>()?);
    }
    if parsed.iter().any(|r| r.len() != parsed.len()) {
        return Err(CliError::Validation("matrix must be square".into()));
    }
    IntMatrix::from_bigint_rows(parsed).map_err(Into::into)
}

/// A resolved input: always a matrix, with the map retained when one was given.
fn resolve_matrix(arg: &InputArg) -> Result<IntMatrix, CliError> {
    if let Some(text) = &arg.matrix {
        return parse_matrix_text(text);
    }
    if let Some(text) = &arg.map {
        return Ok(parse_map(text)?.matrix().clone());
    }
    if let Some(text) = &arg.input {
        return resolve_positional(text);
    }
    Err(CliError::Validation("no input given; pass a map, matrix JSON, or --matrix/--map".into()))
}

fn resolve_positional(text: &str) -> Result<IntMatrix, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('@') {
        parse_matrix_text(text)
    } else {
        Ok(parse_map(text)?.matrix().clone())
    }
}

fn as_map(matrix: &IntMatrix) -> Result<MonomialMap, CliError> {
    MonomialMap::new(matrix.clone()).map_err(Into::into)
}

fn number_f64(x: f64) -> Value {
    Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

fn lls_document(period: &LLSPeriod, eig_sign: i8) -> Value {
    let mut doc = Map::new();
    doc.insert("lls".into(), json_sequence(period.entries()));
    doc.insert(
        "minimal_period".into(),
        json_sequence(period.minimal_period().entries()),
    );
    doc.insert("eig_sign".into(), json!(eig_sign));
    Value::Object(doc)
}

fn eig_sign_of(matrix: &IntMatrix) -> i8 {
    if matrix.trace().is_negative() {
        -1
    } else {
        1
    }
}

fn run(command: &Command) -> Result<(Value, u8), CliError> {
    match command {
        Command::Parse { input } => {
            let matrix = resolve_matrix(input)?;
            let map = as_map(&matrix)?;
            Ok((
                json!({
                    "matrix": json_matrix(map.matrix()),
                    "dimension": map.dimension(),
                }),
                0,
            ))
        }
        Command::Print { input } => {
            let matrix = resolve_matrix(input)?;
            let map = as_map(&matrix)?;
            Ok((json!({ "map": print_map(&map) }), 0))
        }
        Command::Classify { input } => {
            let matrix = resolve_matrix(input)?;
            let doc = match classify(&matrix)? {
                SpectrumClass::ComplexSpectrum { representative, order } => json!({
                    "class": "complex_spectrum",
                    "representative": print_map(&as_map(&representative)?),
                    "order": order,
                }),
                SpectrumClass::DoubleRoot { root_sign, n } => json!({
                    "class": "double_root",
                    "root_sign": root_sign,
                    "n": json_int(&n),
                }),
                SpectrumClass::RealSpectrum { eig_sign, lls } => json!({
                    "class": "real_spectrum",
                    "eig_sign": eig_sign,
                    "lls": json_sequence(lls.entries()),
                }),
                SpectrumClass::DetMinusOne { char_poly } => json!({
                    "class": "det_minus_one",
                    "char_poly": Value::Array(char_poly.coeffs().iter().map(json_int).collect()),
                }),
            };
            Ok((doc, 0))
        }
        Command::Lls { input } => {
            let matrix = resolve_matrix(input)?;
            let period = lls_period(&matrix)?;
            Ok((lls_document(&period, eig_sign_of(&matrix)), 0))
        }
        Command::Reduce { input } => {
            let matrix = resolve_matrix(input)?;
            let form = reduce(&matrix)?;
            Ok((
                json!({
                    "reduced": json_matrix(&form.reduced),
                    "sign": form.sign,
                    "conjugator": json_matrix(&form.conjugator),
                }),
                0,
            ))
        }
        Command::Realize { sequence } => {
            let value: Value = serde_json::from_str(sequence)
                .map_err(|e| CliError::Validation(format!("invalid sequence JSON: {e}")))?;
            let Value::Array(items) = value else {
                return Err(CliError::Validation("sequence must be a JSON array".into()));
            };
            let entries = items
                .iter()
                .map(bigint_from_number)
                .collect::<Result<Vec<_>, _>>()?;
            let period = LLSPeriod::new(entries)?;
            Ok((json!({ "matrix": json_matrix(&realize(&period)) }), 0))
        }
        Command::EnumerateReduced { input } => {
            let matrix = resolve_matrix(input)?;
            let reduced = enumerate_reduced(&matrix)?;
            Ok((
                json!({
                    "count": reduced.len(),
                    "matrices": Value::Array(reduced.iter().map(json_matrix).collect()),
                }),
                0,
            ))
        }
        Command::Conjugate { left, right, bound } => {
            let a = resolve_positional(left)?;
            let b = resolve_positional(right)?;
            let verdict = integral_conjugacy(&a, &b, *bound)?;
            let (doc, code) = match verdict {
                ConjugacyVerdict::Conjugate { certificate } => (
                    json!({
                        "verdict": "conjugate",
                        "certificate": json_matrix(&certificate),
                    }),
                    0u8,
                ),
                ConjugacyVerdict::NotConjugate { witness } => (
                    json!({
                        "verdict": "not_conjugate",
                        "witness": witness.to_string(),
                    }),
                    3,
                ),
                ConjugacyVerdict::Undecided { bound_used } => (
                    json!({
                        "verdict": "undecided",
                        "bound": bound_used,
                    }),
                    4,
                ),
            };
            Ok((doc, code))
        }
        Command::Dyndeg { input, tolerance } => {
            let matrix = resolve_matrix(input)?;
            let map = as_map(&matrix)?;
            let profile = dynamical_degrees(&map, *tolerance)?;
            Ok((
                json!({
                    "lambdas": Value::Array(profile.lambdas.iter().map(|&x| number_f64(x)).collect()),
                    "moduli": Value::Array(profile.moduli.iter().map(|&x| number_f64(x)).collect()),
                    "tolerance": number_f64(profile.tolerance),
                }),
                0,
            ))
        }
        Command::Order { input } => {
            let matrix = resolve_matrix(input)?;
            let map = as_map(&matrix)?;
            let doc = match map.order() {
                Order::Finite(k) => json!({ "order": k }),
                Order::Infinite => json!({ "order": "infinite" }),
            };
            Ok((doc, 0))
        }
        Command::Degree { input } => {
            let matrix = resolve_matrix(input)?;
            let map = as_map(&matrix)?;
            Ok((json!({ "degree": json_int(&map.projective_degree()) }), 0))
        }
        Command::DegreeGrowth { input, length } => {
            let matrix = resolve_matrix(input)?;
            let map = as_map(&matrix)?;
            let (degrees, rate) = degree_growth(&map, *length)?;
            Ok((
                json!({
                    "degrees": json_sequence(&degrees),
                    "rate": number_f64(rate),
                }),
                0,
            ))
        }
        Command::SailCheck { input, bound } => {
            let matrix = resolve_matrix(input)?;
            let algebraic = lls_period(&matrix)?;
            let geometric = sail_lls_oracle(&matrix, *bound)?;
            let agree = geometric.cyclically_equal(&algebraic);
            Ok((
                json!({
                    "lls": json_sequence(algebraic.entries()),
                    "sail_lls": json_sequence(geometric.entries()),
                    "agree": agree,
                }),
                0,
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command) {
        Ok((doc, code)) => {
            println!("{doc}");
            ExitCode::from(code)
        }
        Err(CliError::Validation(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::InternalCap(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(5)
        }
    }
}
