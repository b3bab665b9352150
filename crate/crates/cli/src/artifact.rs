//! JSON documents read and written by the command-line tool.
//!
//! Every rational is a string `"p"` or `"p/q"`. Emitted rationals are always
//! in lowest terms with a positive denominator. Complex numbers are
//! `[re, im]` pairs of JSON numbers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Identifier embedded in every emitted document.
pub const SCHEMA_ID: &str = "mopsym/1";

/// A rational number in string form.
pub type Q = String;
/// Ascending coefficient list.
pub type PolyDoc = Vec<Q>;
/// Row-major dense matrix.
pub type MatDoc = Vec<Vec<Q>>;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct Document {
    pub schema: String,
    #[serde(flatten)]
    pub artifact: Artifact,
}

impl Document {
    pub fn new(artifact: Artifact) -> Self {
        Document { schema: SCHEMA_ID.to_string(), artifact }
    }

    /// Pretty JSON followed by a newline.
    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Artifact {
    Recurrence(RecurrenceDoc),
    SymmetricRecurrence(SymmetricDoc),
    FourTermRecurrence(FourTermDoc),
    Matrix(MatrixDoc),
    FreeParams(FreeParamsDoc),
    Polynomials(PolynomialsDoc),
    Lu(LuDoc),
    Darboux(DarbouxDoc),
    Symmetrization(SymmetrizationDoc),
    Moments(MomentsDoc),
    Hankel(HankelDoc),
    Series(SeriesDoc),
    MatrixMop(MatrixMopDoc),
    Favard(FavardDoc),
    VerifyReport(VerifyReportDoc),
    Error(ErrorDoc),
}

impl Artifact {
    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::Recurrence(_) => "recurrence",
            Artifact::SymmetricRecurrence(_) => "symmetric_recurrence",
            Artifact::FourTermRecurrence(_) => "four_term_recurrence",
            Artifact::Matrix(_) => "matrix",
            Artifact::FreeParams(_) => "free_params",
            Artifact::Polynomials(_) => "polynomials",
            Artifact::Lu(_) => "lu",
            Artifact::Darboux(_) => "darboux",
            Artifact::Symmetrization(_) => "symmetrization",
            Artifact::Moments(_) => "moments",
            Artifact::Hankel(_) => "hankel",
            Artifact::Series(_) => "series",
            Artifact::MatrixMop(_) => "matrix_mop",
            Artifact::Favard(_) => "favard",
            Artifact::VerifyReport(_) => "verify_report",
            Artifact::Error(_) => "error",
        }
    }
}

/// Coefficient sets that other documents are computed from.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Recurrence(RecurrenceDoc),
    SymmetricRecurrence(SymmetricDoc),
    FourTermRecurrence(FourTermDoc),
}

/// `gamma[k][n]` is the coefficient `γ^k_n`; slot `n = 0` is never read.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct RecurrenceDoc {
    pub d: usize,
    pub beta: Vec<Q>,
    pub gamma: Vec<Vec<Q>>,
}

/// `gamma[i]` is `γ_{i+1}`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct SymmetricDoc {
    pub d: usize,
    pub gamma: Vec<Q>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct FourTermDoc {
    pub b: Vec<Q>,
    pub c: Vec<Q>,
    pub dd: Vec<Q>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct MatrixDoc {
    pub rows: MatDoc,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct FreeParamsDoc {
    pub values: Vec<Q>,
}

/// Banded storage: `bands[i][k]` is entry `(i, i − lower + k)`; positions
/// outside the matrix hold `"0"`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct BandedDoc {
    pub size: usize,
    pub lower: usize,
    pub upper: usize,
    pub bands: Vec<Vec<Q>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct PolynomialsDoc {
    pub d: usize,
    pub m: usize,
    pub symmetric: bool,
    pub polys: Vec<PolyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Source>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct LuDoc {
    pub d: usize,
    pub n: usize,
    pub jacobi: BandedDoc,
    pub l: BandedDoc,
    pub pivots: Vec<Q>,
    pub source: Source,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct DarbouxDoc {
    pub d: usize,
    pub m: usize,
    pub free_params: Vec<Q>,
    pub pivots: Vec<Q>,
    /// `multipliers[j−1]` is the subdiagonal of `L_j`.
    pub multipliers: Vec<Vec<Q>>,
    /// `J_1..J_{d+1}` trimmed by the guard band; empty when nothing is retained.
    pub jacobi: Vec<BandedDoc>,
    /// `families[j−1]` is `A^j_0..A^j_M`.
    pub families: Vec<Vec<PolyDoc>>,
    pub source: Source,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct SymmetrizationDoc {
    pub d: usize,
    pub m: usize,
    pub gamma: Vec<Q>,
    pub free_params: Vec<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regularity_warning: Option<usize>,
    pub s: Vec<PolyDoc>,
    pub source: Source,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct MomentsDoc {
    pub d: usize,
    pub k: usize,
    pub horizon: usize,
    pub v00: MatDoc,
    /// `moments[c][p]` is `u^{c+1}(x^p)`.
    pub moments: Vec<Vec<Q>>,
    pub source: Source,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct HankelDoc {
    pub d: usize,
    pub n: usize,
    pub matrix: MatDoc,
    pub regular: bool,
    pub moments: Vec<Vec<Q>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct EvaluationDoc {
    pub z: [f64; 2],
    pub norm_bound: Q,
    pub value: Vec<Vec<[f64; 2]>>,
    pub tail_bound: f64,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct SeriesDoc {
    pub d: usize,
    pub k: usize,
    pub horizon: usize,
    /// `"weyl"` or `"stieltjes"`.
    pub flavor: String,
    pub symmetric_source: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v00: Option<MatDoc>,
    /// Block `k` multiplies `z^{−(k+1)}`.
    pub blocks: Vec<MatDoc>,
    /// One entry per residue class: `"holds"`, `"not_applicable"` or
    /// `"violated k=.. row=.. col=.."`.
    pub patterns: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<EvaluationDoc>,
    pub source: Source,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct StatusDoc {
    pub n: usize,
    pub holds: bool,
    pub boundary: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct MatrixMopDoc {
    pub n_max: usize,
    /// `W_0..W_{n_max+1}`, each a 3×3 grid of coefficient lists in `t`.
    pub w: Vec<Vec<Vec<PolyDoc>>>,
    pub a2: Vec<MatDoc>,
    pub b2: Vec<MatDoc>,
    pub c2: Vec<MatDoc>,
    pub d2: Vec<MatDoc>,
    pub w_recurrence: Vec<StatusDoc>,
    pub source: Source,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct FavardOrthogonalityDoc {
    pub passed: bool,
    pub nonzero_below: Vec<[usize; 2]>,
    pub chain_ok: Vec<bool>,
    pub block_upper: Vec<bool>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct FavardDoc {
    pub k: usize,
    pub a: Vec<MatDoc>,
    pub b: Vec<MatDoc>,
    pub c: Vec<MatDoc>,
    pub moments: Vec<MatDoc>,
    pub orthogonality: FavardOrthogonalityDoc,
    pub source: Source,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct CheckDoc {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct VerifyReportDoc {
    /// Kind of the verified document, or `"suite"`.
    pub target: String,
    pub passed: bool,
    pub checks: Vec<CheckDoc>,
}

/// One problem found by the schema check.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    /// JSON path such as `$.gamma[0][3]`.
    pub path: String,
    /// `unknown_field`, `missing_field`, `wrong_type`, `malformed_rational`,
    /// `length`, `schema_version` or `unknown_kind`.
    pub code: String,
    pub message: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct ErrorDoc {
    pub operation: String,
    pub error: String,
    pub exit_code: i32,
    /// Indices or values locating the failure, e.g. `{"k": 0}` for a zero pivot.
    pub index: BTreeMap<String, serde_json::Value>,
    pub message: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}
