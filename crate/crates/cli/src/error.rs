use std::collections::BTreeMap;

use mopsym_core::MopError;
use serde_json::{json, Value};

use crate::artifact::{Diagnostic, ErrorDoc};

/// Exit status for malformed input, failed validation and usage errors.
pub const EXIT_INVALID: i32 = 1;
/// Exit status for a mathematical degeneracy.
pub const EXIT_DEGENERATE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: String, message: String },
    Schema(Vec<Diagnostic>),
    Math { operation: String, error: MopError },
}

impl CliError {
    pub fn malformed(path: &str, text: &str) -> Self {
        CliError::Schema(vec![Diagnostic {
            path: path.to_string(),
            code: "malformed_rational".into(),
            message: format!("{text:?} is not a rational of the form \"p\" or \"p/q\" with q ≠ 0"),
        }])
    }

    pub fn length(path: &str, message: &str) -> Self {
        CliError::Schema(vec![Diagnostic { path: path.to_string(), code: "length".into(), message: message.to_string() }])
    }

    pub fn math(operation: &str, error: MopError) -> Self {
        CliError::Math { operation: operation.to_string(), error }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math { error, .. } if error.is_degeneracy() => EXIT_DEGENERATE,
            _ => EXIT_INVALID,
        }
    }

    /// Machine-readable form; `operation` names the command that was running.
    pub fn to_doc(&self, command: &str) -> ErrorDoc {
        let exit_code = self.exit_code();
        let base = |error: &str, message: String, diagnostics: Vec<Diagnostic>| ErrorDoc {
            operation: command.to_string(),
            error: error.to_string(),
            exit_code,
            index: BTreeMap::new(),
            message,
            diagnostics,
        };
        match self {
            CliError::Usage(m) => base("UsageError", m.clone(), vec![]),
            CliError::Io { path, message } => base("IoError", format!("{path}: {message}"), vec![]),
            CliError::Schema(d) => {
                let message = format!("{} schema problem(s); first: {} at {}", d.len(), d[0].message, d[0].path);
                base("SchemaError", message, d.clone())
            }
            CliError::Math { operation, error } => {
                let mut doc = base(error.kind(), error.to_string(), length_diagnostics(error));
                doc.operation = format!("{command}/{operation}");
                doc.index = index_of(error);
                doc
            }
        }
    }
}

fn length_diagnostics(e: &MopError) -> Vec<Diagnostic> {
    let d = |path: String, message: String| vec![Diagnostic { path, code: "length".into(), message }];
    match e {
        MopError::InsufficientCoefficients { what, needed, available } => {
            d(format!("$.{what}"), format!("{what} needs index {needed} but has {available} entries"))
        }
        MopError::InsufficientHorizon { needed, usable } => {
            d("$".into(), format!("the coefficients support a section of size {usable}, {needed} is needed"))
        }
        MopError::InsufficientMoments { needed, available } => {
            d("$.moments".into(), format!("{needed} moments are needed, the table has {available}"))
        }
        MopError::LengthMismatch { expected, found } => d("$".into(), format!("expected length {expected}, found {found}")),
        _ => vec![],
    }
}

fn index_of(e: &MopError) -> BTreeMap<String, Value> {
    let pairs: Vec<(&str, Value)> = match e {
        MopError::ZeroPivot(k) => vec![("k", json!(k))],
        MopError::DegenerateSplit { n, j } => vec![("n", json!(n)), ("j", json!(j))],
        MopError::NotDSymmetric { d, n, exponent } => vec![("d", json!(d)), ("n", json!(n)), ("exponent", json!(exponent))],
        MopError::ZeroConstantTerm(n) => vec![("n", json!(n))],
        MopError::OutsideDomain { modulus, bound } => vec![("modulus", json!(modulus)), ("bound", json!(bound))],
        MopError::NotMonicHessenberg { row } => vec![("row", json!(row))],
        MopError::OverlapInconsistency { functional, power } => vec![("functional", json!(functional)), ("power", json!(power))],
        MopError::IndexOutOfRange { index, len } => vec![("index", json!(index)), ("len", json!(len))],
        MopError::InsufficientCoefficients { needed, available, .. } => {
            vec![("needed", json!(needed)), ("available", json!(available))]
        }
        MopError::InsufficientHorizon { needed, usable } => vec![("needed", json!(needed)), ("usable", json!(usable))],
        MopError::InsufficientMoments { needed, available } | MopError::InsufficientBlocks { needed, available } => {
            vec![("needed", json!(needed)), ("available", json!(available))]
        }
        MopError::LengthMismatch { expected, found } => vec![("expected", json!(expected)), ("found", json!(found))],
        MopError::SizeMismatch { left, right } => vec![("left", json!(left)), ("right", json!(right))],
        _ => vec![],
    };
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
            CliError::Schema(d) => write!(f, "{} schema problem(s)", d.len()),
            CliError::Math { operation, error } => write!(f, "{operation}: {error}"),
        }
    }
}

impl std::error::Error for CliError {}
