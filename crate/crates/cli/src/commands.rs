//! Job execution: one command, one input document, one output document.

use std::path::{Path, PathBuf};

use mopsym_core::darboux::{family_recurrence_mismatches, free_params_of};
use mopsym_core::moments::orthogonality_report;
use mopsym_core::suite::{run_all, run_criterion, CriterionOutcome, DEFAULT_SEED};
use mopsym_core::weyl::PatternStatus;
use mopsym_core::{
    coefficient_cascade, cyclic_permutation, darboux_families, desymmetrize, eval_series, favard_blocks, favard_moments,
    favard_orthogonality, generate_symmetric, generate_type2, group3_wn, hankel_regularity, int, intertwining_failures,
    is_d_symmetric, lu_hessenberg, moments_from_jacobi, residue_decomposition, stieltjes_coefficients, symmetrize_direct,
    to_jacobi, verify_w_recurrence, weyl_coefficients, BandedMatrix, DarbouxFactorization, DarbouxFamilySet, Mat, MomentTable,
    MopError, Normalization, Poly, Rational,
};
use num_complex::Complex64;
use serde_json::Value;

use crate::artifact::*;
use crate::convert::*;
use crate::error::{CliError, EXIT_INVALID};
use crate::schema::schema_check;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Gen,
    Symmetrize,
    Desymmetrize,
    Lu,
    Darboux,
    Moments,
    Hankel,
    Weyl,
    MatrixMop,
    Favard,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Gen => "gen",
            Command::Symmetrize => "symmetrize",
            Command::Desymmetrize => "desymmetrize",
            Command::Lu => "lu",
            Command::Darboux => "darboux",
            Command::Moments => "moments",
            Command::Hankel => "hankel",
            Command::Weyl => "weyl",
            Command::MatrixMop => "matrix-mop",
            Command::Favard => "favard",
            Command::Verify => "verify",
        }
    }

    /// Flags the command accepts besides `--input` and `--output`.
    fn accepted(self) -> &'static [&'static str] {
        match self {
            Command::Gen | Command::Desymmetrize => &["d", "M"],
            Command::Symmetrize => &["d", "M", "free-params"],
            Command::Lu => &["d", "N"],
            Command::Darboux => &["d", "M", "N", "free-params"],
            Command::Moments => &["d", "K", "horizon", "v00"],
            Command::Hankel => &["d", "N"],
            Command::Weyl => &["d", "K", "horizon", "v00", "z"],
            Command::MatrixMop => &["N"],
            Command::Favard => &["K"],
            Command::Verify => &["seed", "criterion"],
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub free_params: Option<PathBuf>,
    pub v00: Option<PathBuf>,
    pub z: Option<[f64; 2]>,
    pub horizon: Option<usize>,
    pub seed: Option<u64>,
    pub criterion: Option<u8>,
}

impl Options {
    fn given(&self) -> Vec<&'static str> {
        let flags = [
            ("d", self.d.is_some()),
            ("M", self.m.is_some()),
            ("N", self.n.is_some()),
            ("K", self.k.is_some()),
            ("free-params", self.free_params.is_some()),
            ("v00", self.v00.is_some()),
            ("z", self.z.is_some()),
            ("horizon", self.horizon.is_some()),
            ("seed", self.seed.is_some()),
            ("criterion", self.criterion.is_some()),
        ];
        flags.iter().filter(|f| f.1).map(|f| f.0).collect()
    }
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub options: Options,
}

/// Result of a job: the document to emit (if any), the error object (if
/// any), and the exit status.
#[derive(Debug)]
pub struct RunOutcome {
    pub code: i32,
    pub document: Option<Document>,
    pub error: Option<Document>,
}

pub fn run(job: &JobSpec) -> RunOutcome {
    let name = job.command.name();
    match execute(job) {
        Ok(doc) => {
            let failed = matches!(&doc.artifact, Artifact::VerifyReport(r) if !r.passed);
            RunOutcome { code: if failed { EXIT_INVALID } else { 0 }, document: Some(doc), error: None }
        }
        Err(e) => RunOutcome { code: e.exit_code(), document: None, error: Some(Document::new(Artifact::Error(e.to_doc(name)))) },
    }
}

fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

fn validate_options(job: &JobSpec) -> Result<(), CliError> {
    let accepted = job.command.accepted();
    if let Some(flag) = job.options.given().into_iter().find(|f| !accepted.contains(f)) {
        return Err(usage(format!("--{flag} is not used by {}", job.command.name())));
    }
    if job.input.is_none() && job.command != Command::Verify {
        return Err(usage(format!("{} needs --input", job.command.name())));
    }
    if job.input.is_some() && (job.options.seed.is_some() || job.options.criterion.is_some()) {
        return Err(usage("--seed and --criterion select the built-in suite and cannot be combined with --input".into()));
    }
    Ok(())
}

fn required(v: Option<usize>, flag: &str, cmd: Command) -> Result<usize, CliError> {
    v.ok_or_else(|| usage(format!("{} needs --{flag}", cmd.name())))
}

/// Reads a document, runs the schema check and deserializes it.
pub fn load(path: &Path) -> Result<Document, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_document(&text)
}

pub fn parse_document(text: &str) -> Result<Document, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        CliError::Schema(vec![Diagnostic { path: "$".into(), code: "invalid_json".into(), message: e.to_string() }])
    })?;
    let report = schema_check(&value);
    if !report.is_empty() {
        return Err(CliError::Schema(report));
    }
    serde_json::from_value(value)
        .map_err(|e| CliError::Schema(vec![Diagnostic { path: "$".into(), code: "wrong_type".into(), message: e.to_string() }]))
}

fn as_source(doc: Document, cmd: Command) -> Result<Source, CliError> {
    match doc.artifact {
        Artifact::Recurrence(r) => Ok(Source::Recurrence(r)),
        Artifact::SymmetricRecurrence(s) => Ok(Source::SymmetricRecurrence(s)),
        Artifact::FourTermRecurrence(f) => Ok(Source::FourTermRecurrence(f)),
        other => Err(usage(format!("{} expects a recurrence document, got {}", cmd.name(), other.kind()))),
    }
}

fn source_d(src: &Source) -> usize {
    match src {
        Source::Recurrence(r) => r.d,
        Source::SymmetricRecurrence(s) => s.d,
        Source::FourTermRecurrence(_) => 2,
    }
}

fn check_d(opts: &Options, d: usize) -> Result<(), CliError> {
    match opts.d {
        Some(given) if given != d => Err(usage(format!("--d {given} does not match the input (d = {d})"))),
        _ => Ok(()),
    }
}

fn load_free_params(path: &Option<PathBuf>, d: usize) -> Result<Vec<Rational>, CliError> {
    let Some(path) = path else { return Ok(vec![int(0); d * (d - 1) / 2]) };
    match load(path)?.artifact {
        Artifact::FreeParams(f) => {
            let v = parse_qs(&f.values, "$.values")?;
            if v.len() != d * (d - 1) / 2 {
                return Err(CliError::length(
                    "$.values",
                    &format!("d = {d} needs {} free parameters, found {}", d * (d - 1) / 2, v.len()),
                ));
            }
            Ok(v)
        }
        other => Err(usage(format!("--free-params expects a free_params document, got {}", other.kind()))),
    }
}

fn load_v00(path: &Option<PathBuf>) -> Result<Option<Mat<Rational>>, CliError> {
    let Some(path) = path else { return Ok(None) };
    match load(path)?.artifact {
        Artifact::Matrix(m) => Ok(Some(parse_mat(&m.rows, "$.rows")?)),
        other => Err(usage(format!("--v00 expects a matrix document, got {}", other.kind()))),
    }
}

fn math(op: &'static str) -> impl Fn(MopError) -> CliError {
    move |e| CliError::math(op, e)
}

fn execute(job: &JobSpec) -> Result<Document, CliError> {
    validate_options(job)?;
    let opts = &job.options;
    let cmd = job.command;
    let input = match &job.input {
        Some(p) => Some(load(p)?),
        None => None,
    };
    let artifact = match cmd {
        Command::Verify => match input {
            Some(doc) => Artifact::VerifyReport(verify_document(&doc)?),
            None => Artifact::VerifyReport(run_suite(opts.seed.unwrap_or(DEFAULT_SEED), opts.criterion)?),
        },
        Command::Hankel => {
            let n = required(opts.n, "N", cmd)?;
            match input.expect("checked above").artifact {
                Artifact::Moments(m) => {
                    check_d(opts, m.d)?;
                    Artifact::Hankel(hankel_doc(&m.moments, n)?)
                }
                Artifact::Hankel(h) => {
                    check_d(opts, h.d)?;
                    Artifact::Hankel(hankel_doc(&h.moments, n)?)
                }
                other => return Err(usage(format!("hankel expects a moments document, got {}", other.kind()))),
            }
        }
        _ => {
            let src = as_source(input.expect("checked above"), cmd)?;
            let d = source_d(&src);
            check_d(opts, d)?;
            match cmd {
                Command::Gen => Artifact::Polynomials(gen_doc(src, required(opts.m, "M", cmd)?)?),
                Command::Symmetrize => {
                    let free = load_free_params(&opts.free_params, d)?;
                    Artifact::Symmetrization(symmetrize_doc(src, required(opts.m, "M", cmd)?, &free)?)
                }
                Command::Desymmetrize => Artifact::Darboux(desymmetrize_doc(src, required(opts.m, "M", cmd)?)?),
                Command::Darboux => {
                    let m = required(opts.m, "M", cmd)?;
                    let free = load_free_params(&opts.free_params, d)?;
                    Artifact::Darboux(darboux_doc(src, m, opts.n.unwrap_or(m + 1), &free)?)
                }
                Command::Lu => Artifact::Lu(lu_doc(src, opts.n)?),
                Command::Moments => {
                    let k = required(opts.k, "K", cmd)?;
                    let v00 = load_v00(&opts.v00)?;
                    Artifact::Moments(moments_doc(src, k, opts.horizon.unwrap_or(k + d + 1), v00)?)
                }
                Command::Weyl => {
                    let k = required(opts.k, "K", cmd)?;
                    let v00 = load_v00(&opts.v00)?;
                    Artifact::Series(series_doc(src, k, opts.horizon.unwrap_or(k + d + 1), v00, opts.z)?)
                }
                Command::MatrixMop => Artifact::MatrixMop(matrix_mop_doc(src, required(opts.n, "N", cmd)?)?),
                Command::Favard => Artifact::Favard(favard_doc(src, required(opts.k, "K", cmd)?)?),
                Command::Verify | Command::Hankel => unreachable!("handled above"),
            }
        }
    };
    Ok(Document::new(artifact))
}

pub fn gen_doc(src: Source, m: usize) -> Result<PolynomialsDoc, CliError> {
    let (d, symmetric, polys) = match &src {
        Source::SymmetricRecurrence(s) => {
            let sr = parse_symmetric(s, "$")?;
            (sr.d, true, generate_symmetric(&sr, m).map_err(math("generate_symmetric"))?)
        }
        other => {
            let rs = source_system(other, "$")?;
            (rs.d, false, generate_type2(&rs, m).map_err(math("generate_type2"))?)
        }
    };
    Ok(PolynomialsDoc { d, m, symmetric, polys: polys_doc(&polys), source: Some(src) })
}

pub fn symmetrize_doc(src: Source, m: usize, free: &[Rational]) -> Result<SymmetrizationDoc, CliError> {
    let rs = source_system(&src, "$")?;
    let out = symmetrize_direct(&rs, m, free).map_err(math("symmetrize_direct"))?;
    Ok(SymmetrizationDoc {
        d: rs.d,
        m,
        gamma: qs(&out.sr.gamma),
        free_params: qs(&out.free_params),
        regularity_warning: out.regularity_warning,
        s: polys_doc(&out.s),
        source: src,
    })
}

fn family_set_doc(set: &DarbouxFamilySet<Rational>, m: usize, src: Source) -> DarbouxDoc {
    let fact = &set.factorization;
    DarbouxDoc {
        d: fact.d,
        m,
        free_params: qs(&fact.free_params),
        pivots: qs(&fact.pivots()),
        multipliers: (1..=fact.d).map(|j| qs(&fact.multipliers(j))).collect(),
        jacobi: set.jacobi.iter().map(banded_doc).collect(),
        families: set.families.iter().map(|f| polys_doc(f)).collect(),
        source: src,
    }
}

pub fn desymmetrize_doc(src: Source, m: usize) -> Result<DarbouxDoc, CliError> {
    let Source::SymmetricRecurrence(s) = &src else {
        return Err(usage("desymmetrize expects a symmetric_recurrence document".into()));
    };
    let sr = parse_symmetric(s, "$")?;
    let set = desymmetrize(&sr, m).map_err(math("desymmetrize"))?;
    Ok(family_set_doc(&set, m, src))
}

pub fn darboux_doc(src: Source, m: usize, n: usize, free: &[Rational]) -> Result<DarbouxDoc, CliError> {
    let rs = source_system(&src, "$")?;
    let j1 = to_jacobi(&rs, n).map_err(math("to_jacobi"))?;
    let set = darboux_families(&j1, rs.d, m, free).map_err(math("darboux_families"))?;
    Ok(family_set_doc(&set, m, src))
}

pub fn lu_doc(src: Source, n: Option<usize>) -> Result<LuDoc, CliError> {
    let rs = source_system(&src, "$")?;
    let n = n.unwrap_or_else(|| rs.horizon());
    if n == 0 {
        return Err(CliError::length("$.beta", "the recurrence supports no Jacobi rows"));
    }
    let j = to_jacobi(&rs, n).map_err(math("to_jacobi"))?;
    let (l, u) = lu_hessenberg(&j, rs.d).map_err(math("lu_hessenberg"))?;
    Ok(LuDoc { d: rs.d, n, jacobi: banded_doc(&j), l: banded_doc(&l), pivots: qs(&u.diagonal(0)), source: src })
}

fn normalization(v00: Option<Mat<Rational>>, d: usize) -> Result<Normalization<Rational>, CliError> {
    match v00 {
        None => Ok(Normalization::identity(d)),
        Some(m) if m.rows() != d => Err(CliError::length("$.rows", &format!("V00 must be {d} × {d}"))),
        Some(m) => Normalization::new(m).map_err(math("normalization")),
    }
}

pub fn moments_doc(src: Source, k: usize, horizon: usize, v00: Option<Mat<Rational>>) -> Result<MomentsDoc, CliError> {
    let rs = source_system(&src, "$")?;
    let d = rs.d;
    let norm = normalization(v00, d)?;
    let j = to_jacobi(&rs, horizon).map_err(math("to_jacobi"))?;
    let table = moments_from_jacobi(&j, d, &norm, k).map_err(math("moments_from_jacobi"))?;
    Ok(MomentsDoc {
        d,
        k,
        horizon,
        v00: mat_doc(norm.v00()),
        moments: table.moments.iter().map(|r| qs(r)).collect(),
        source: src,
    })
}

pub fn hankel_doc(moments: &[Vec<Q>], n: usize) -> Result<HankelDoc, CliError> {
    let rows = moments.iter().enumerate().map(|(c, r)| parse_qs(r, &format!("$.moments[{c}]"))).collect::<Result<Vec<_>, _>>()?;
    let table = MomentTable::from_moments(rows).map_err(math("moment_table"))?;
    let (block, regular) = hankel_regularity(&table, n).map_err(math("hankel_regularity"))?;
    Ok(HankelDoc { d: table.d, n, matrix: mat_doc(&block.matrix), regular, moments: moments.to_vec() })
}

fn pattern_text(p: &PatternStatus) -> String {
    match p {
        PatternStatus::NotApplicable => "not_applicable".into(),
        PatternStatus::Holds => "holds".into(),
        PatternStatus::Violated { k, row, col } => format!("violated k={k} row={row} col={col}"),
    }
}

pub fn series_doc(
    src: Source,
    k: usize,
    horizon: usize,
    v00: Option<Mat<Rational>>,
    z: Option<[f64; 2]>,
) -> Result<SeriesDoc, CliError> {
    let rs = source_system(&src, "$")?;
    let d = rs.d;
    let j = to_jacobi(&rs, horizon).map_err(math("to_jacobi"))?;
    let weyl = weyl_coefficients(&j, d, k).map_err(math("weyl_coefficients"))?;
    let series = match &v00 {
        Some(m) => {
            let norm = normalization(Some(m.clone()), d)?;
            stieltjes_coefficients(&weyl, norm.v00()).map_err(math("stieltjes_coefficients"))?
        }
        None => weyl,
    };
    let patterns = residue_decomposition(&series).patterns.iter().map(pattern_text).collect();
    let evaluation = match z {
        Some([re, im]) => {
            let bound = j.max_abs_row_sum();
            let (value, tail) = eval_series(&series, Complex64::new(re, im), &bound).map_err(math("eval_series"))?;
            Some(EvaluationDoc {
                z: [re, im],
                norm_bound: q(&bound),
                value: value.iter().map(|r| r.iter().map(|c| [c.re, c.im]).collect()).collect(),
                tail_bound: tail,
            })
        }
        None => None,
    };
    Ok(SeriesDoc {
        d,
        k,
        horizon,
        flavor: if v00.is_some() { "stieltjes" } else { "weyl" }.into(),
        symmetric_source: series.symmetric_source,
        v00: v00.as_ref().map(mat_doc),
        blocks: series.blocks.iter().map(mat_doc).collect(),
        patterns,
        evaluation,
        source: src,
    })
}

pub fn matrix_mop_doc(src: Source, n_max: usize) -> Result<MatrixMopDoc, CliError> {
    let ftr = source_four_term(&src, "$")?;
    let cc = coefficient_cascade(&ftr, n_max).map_err(math("coefficient_cascade"))?;
    let polys = ftr.polynomials(3 * (n_max + 1) + 2).map_err(math("generate_type2"))?;
    let w = group3_wn(&polys, n_max + 1).map_err(math("group3_wn"))?;
    let report = verify_w_recurrence(&w, &cc, 0..=n_max).map_err(math("verify_w_recurrence"))?;
    let mats = |v: &[Mat<Rational>]| v.iter().map(mat_doc).collect();
    Ok(MatrixMopDoc {
        n_max,
        w: w.iter().map(matpoly_doc).collect(),
        a2: mats(&cc.a2),
        b2: mats(&cc.b2),
        c2: mats(&cc.c2),
        d2: mats(&cc.d2),
        w_recurrence: report.statuses.iter().map(|s| StatusDoc { n: s.n, holds: s.holds, boundary: s.boundary }).collect(),
        source: src,
    })
}

pub fn favard_doc(src: Source, k: usize) -> Result<FavardDoc, CliError> {
    let ftr = source_four_term(&src, "$")?;
    let blocks = 2 * k;
    let cc = coefficient_cascade(&ftr, 2 * blocks + 1).map_err(math("coefficient_cascade"))?;
    let fb = favard_blocks(&cc, blocks).map_err(math("favard_blocks"))?;
    let moments = favard_moments(&fb, k).map_err(math("favard_moments"))?;
    let orth = favard_orthogonality(&fb, k).map_err(math("favard_orthogonality"))?;
    let mats = |v: &[Mat<Rational>]| v.iter().map(mat_doc).collect();
    Ok(FavardDoc {
        k,
        a: mats(&fb.a),
        b: mats(&fb.b),
        c: mats(&fb.c),
        moments: mats(&moments),
        orthogonality: FavardOrthogonalityDoc {
            passed: orth.passed(),
            nonzero_below: orth.nonzero_below.iter().map(|&(n, k)| [n, k]).collect(),
            chain_ok: orth.chain_ok.clone(),
            block_upper: orth.block_upper.clone(),
        },
        source: src,
    })
}

#[derive(Default)]
struct Checks(Vec<CheckDoc>);

impl Checks {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(CheckDoc { name: name.into(), passed, detail: detail.into() });
    }

    /// Compares a recomputed document with the one under test.
    fn reproduce(&mut self, recomputed: Result<Artifact, CliError>, original: &Artifact) {
        match recomputed {
            Ok(a) if &a == original => {
                self.push("reproducible", true, "recomputing from the embedded source gives the same document")
            }
            Ok(_) => self.push("reproducible", false, "recomputing from the embedded source gives a different document"),
            Err(e) => self.push("reproducible", false, format!("recomputation failed: {e}")),
        }
    }

    fn report(self, target: &str) -> VerifyReportDoc {
        VerifyReportDoc { target: target.into(), passed: self.0.iter().all(|c| c.passed), checks: self.0 }
    }
}

fn monic_degrees(polys: &[Poly<Rational>]) -> Option<usize> {
    polys.iter().enumerate().position(|(n, p)| p.degree() != Some(n) || !p.is_monic())
}

fn symmetry_gate(polys: &[Poly<Rational>], d: usize) -> Result<(), CliError> {
    match is_d_symmetric(polys, d).witness {
        Some((n, exponent)) => Err(CliError::math("is_d_symmetric", MopError::NotDSymmetric { d, n, exponent })),
        None => Ok(()),
    }
}

/// Checks a document produced by this tool (or hand-written input).
pub fn verify_document(doc: &Document) -> Result<VerifyReportDoc, CliError> {
    let mut c = Checks::default();
    let art = &doc.artifact;
    match art {
        Artifact::Recurrence(r) => {
            let rs = parse_recurrence(r, "$")?;
            let h = rs.horizon();
            c.push("horizon", h > 0, format!("coefficients support a Jacobi section of size {h}"));
            match rs.regularity_violation(h) {
                Some(n) => c.push("regularity", false, format!("γ^0_{n} = 0")),
                None => c.push("regularity", true, "no stored γ^0_n (n ≥ 1) vanishes"),
            }
        }
        Artifact::SymmetricRecurrence(s) => {
            let sr = parse_symmetric(s, "$")?;
            match sr.zero_gamma() {
                Some(n) => c.push("regularity", false, format!("γ_{n} = 0")),
                None => c.push("regularity", true, format!("{} nonzero coefficients", sr.gamma.len())),
            }
        }
        Artifact::FourTermRecurrence(f) => {
            let ftr = parse_four_term(f, "$")?;
            c.push("parsed", true, format!("{} / {} / {} coefficients", ftr.b.len(), ftr.c.len(), ftr.dd.len()));
        }
        Artifact::Matrix(m) => {
            let mat = parse_mat(&m.rows, "$.rows")?;
            c.push("parsed", true, format!("{} × {} matrix", mat.rows(), mat.cols()));
        }
        Artifact::FreeParams(f) => {
            let v = parse_qs(&f.values, "$.values")?;
            c.push("parsed", true, format!("{} values", v.len()));
        }
        Artifact::Polynomials(p) => {
            let polys = parse_polys(&p.polys, "$.polys")?;
            if p.symmetric {
                symmetry_gate(&polys, p.d)?;
                c.push("d-symmetric", true, format!("every S_n has only exponents ≡ n mod {}", p.d + 1));
            }
            match monic_degrees(&polys) {
                Some(n) => c.push("monic", false, format!("entry {n} is not monic of degree {n}")),
                None => c.push("monic", true, format!("{} monic polynomials", polys.len())),
            }
            if let Some(src) = &p.source {
                c.reproduce(gen_doc(src.clone(), p.m).map(Artifact::Polynomials), art);
            }
        }
        Artifact::Lu(l) => {
            let j = parse_banded(&l.jacobi, "$.jacobi")?;
            let lf = parse_banded(&l.l, "$.l")?;
            let pivots = parse_qs(&l.pivots, "$.pivots")?;
            let u = BandedMatrix::unit_upper_bidiagonal(&pivots);
            let product = lf.mul(&u).map_err(math("banded_mul"))?;
            c.push("L U = J", product.leading_eq(&j, j.size()) && product.size() == j.size(), "exact entrywise comparison");
            let unit = (0..lf.size()).all(|i| lf.get(i, i) == int(1)) && lf.upper_bandwidth() == 0;
            c.push("L unit lower triangular", unit, format!("lower bandwidth {}", lf.lower_bandwidth()));
            c.reproduce(lu_doc(l.source.clone(), Some(l.n)).map(Artifact::Lu), art);
        }
        Artifact::Darboux(dd) => verify_darboux(dd, art, &mut c)?,
        Artifact::Symmetrization(s) => {
            let gamma = parse_qs(&s.gamma, "$.gamma")?;
            let polys = parse_polys(&s.s, "$.s")?;
            symmetry_gate(&polys, s.d)?;
            c.push("d-symmetric", true, format!("every S_n has only exponents ≡ n mod {}", s.d + 1));
            let sr = mopsym_core::SymmetricRecurrence::new(s.d, gamma).map_err(math("parse"))?;
            let regenerated = generate_symmetric(&sr, polys.len().saturating_sub(1)).map_err(math("generate_symmetric"))?;
            c.push("symmetric recurrence", regenerated == polys, "S regenerated from γ with S_n = x^n for n ≤ d");
            let free = parse_qs(&s.free_params, "$.free_params")?;
            c.reproduce(symmetrize_doc(s.source.clone(), s.m, &free).map(Artifact::Symmetrization), art);
        }
        Artifact::Moments(m) => {
            let v00 = parse_mat(&m.v00, "$.v00")?;
            let recomputed = moments_doc(m.source.clone(), m.k, m.horizon, Some(v00));
            c.reproduce(recomputed.map(Artifact::Moments), art);
            verify_moment_orthogonality(m, &mut c)?;
        }
        Artifact::Hankel(h) => c.reproduce(hankel_doc(&h.moments, h.n).map(Artifact::Hankel), art),
        Artifact::Series(s) => {
            let v00 = s.v00.as_ref().map(|m| parse_mat(m, "$.v00")).transpose()?;
            let z = s.evaluation.as_ref().map(|e| e.z);
            c.reproduce(series_doc(s.source.clone(), s.k, s.horizon, v00, z).map(Artifact::Series), art);
            let bad: Vec<&String> = s.patterns.iter().filter(|p| p.starts_with("violated")).collect();
            c.push("residue sparsity", bad.is_empty(), format!("patterns: {:?}", s.patterns));
        }
        Artifact::MatrixMop(mm) => {
            c.reproduce(matrix_mop_doc(mm.source.clone(), mm.n_max).map(Artifact::MatrixMop), art);
            let failing: Vec<usize> = mm.w_recurrence.iter().filter(|s| !s.holds && !s.boundary).map(|s| s.n).collect();
            c.push("W recurrence (interior)", failing.is_empty(), format!("failing n: {failing:?}"));
        }
        Artifact::Favard(f) => {
            c.reproduce(favard_doc(f.source.clone(), f.k).map(Artifact::Favard), art);
            c.push(
                "block orthogonality",
                f.orthogonality.passed,
                format!("nonzero below diagonal: {:?}", f.orthogonality.nonzero_below),
            );
        }
        Artifact::VerifyReport(r) => {
            let consistent = r.passed == r.checks.iter().all(|x| x.passed);
            c.push("consistent", consistent, "overall flag agrees with the individual checks");
        }
        Artifact::Error(_) => return Err(usage("error documents cannot be verified".into())),
    }
    Ok(c.report(art.kind()))
}

fn verify_darboux(dd: &DarbouxDoc, art: &Artifact, c: &mut Checks) -> Result<(), CliError> {
    let d = dd.d;
    let pivots = parse_qs(&dd.pivots, "$.pivots")?;
    let size = pivots.len();
    if size == 0 {
        return Err(CliError::length("$.pivots", "a factorization needs at least one pivot"));
    }
    let l_factors = dd
        .multipliers
        .iter()
        .enumerate()
        .map(|(j, m)| Ok(BandedMatrix::unit_lower_bidiagonal(size, &parse_qs(m, &format!("$.multipliers[{j}]"))?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let fact = DarbouxFactorization::from_factors(BandedMatrix::unit_upper_bidiagonal(&pivots), l_factors);
    let free = parse_qs(&dd.free_params, "$.free_params")?;
    c.push("free parameters", free_params_of(&fact.l_factors) == free, "free parameters read off the factors");
    let families = dd
        .families
        .iter()
        .enumerate()
        .map(|(j, f)| parse_polys(f, &format!("$.families[{j}]")))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some((j, n)) = families.iter().enumerate().find_map(|(j, f)| monic_degrees(f).map(|n| (j, n))) {
        c.push("monic", false, format!("A^{}_{n} is not monic of degree {n}", j + 1));
    } else {
        c.push("monic", true, "every family is monic with exact degrees");
    }
    let jacobi =
        dd.jacobi.iter().enumerate().map(|(j, b)| parse_banded(b, &format!("$.jacobi[{j}]"))).collect::<Result<Vec<_>, _>>()?;
    let expected = if fact.retained() == 0 {
        Vec::new()
    } else {
        (1..=d + 1).map(|j| cyclic_permutation(&fact, j)).collect::<Result<Vec<_>, _>>().map_err(math("cyclic_permutation"))?
    };
    c.push("cyclic products", expected == jacobi, "J_j = L_j ⋯ L_d U L_1 ⋯ L_{j−1}, trimmed by d + 1");
    let bad = intertwining_failures(&fact).map_err(math("intertwining"))?;
    c.push("intertwining", bad.is_empty(), format!("failing relations: {bad:?}"));
    let m = families.first().map_or(0, Vec::len);
    let closing = (0..m.saturating_sub(1)).all(|n| {
        let mut rhs = families[0][n + 1].clone();
        rhs.add_scaled(&pivots[n], &families[0][n]);
        families[d][n].shift(1) == rhs
    });
    c.push("closing relation", closing, "x A^{d+1}_n = A^1_{n+1} + u_n A^1_n");
    let set = DarbouxFamilySet { families, jacobi, factorization: fact };
    let mismatches = family_recurrence_mismatches(&set).map_err(math("family_recurrence"))?;
    c.push("family recurrences", mismatches.is_empty(), format!("(family, row) mismatches: {mismatches:?}"));
    let recomputed = match &dd.source {
        Source::SymmetricRecurrence(_) => desymmetrize_doc(dd.source.clone(), dd.m),
        other => darboux_doc(other.clone(), dd.m, size, &free),
    };
    c.reproduce(recomputed.map(Artifact::Darboux), art);
    Ok(())
}

fn verify_moment_orthogonality(m: &MomentsDoc, c: &mut Checks) -> Result<(), CliError> {
    let rows =
        m.moments.iter().enumerate().map(|(i, r)| parse_qs(r, &format!("$.moments[{i}]"))).collect::<Result<Vec<_>, _>>()?;
    let table = MomentTable::from_moments(rows).map_err(math("moment_table"))?;
    let d = m.d;
    let n_max = (table.len().saturating_sub(d)) / (d + 1);
    let rs = source_system(&m.source, "$.source")?;
    let degree = n_max * d + d - 1;
    if n_max == 0 || rs.horizon() < degree {
        c.push("orthogonality", true, "table too short for an orthogonality check");
        return Ok(());
    }
    let polys = generate_type2(&rs, degree).map_err(math("generate_type2"))?;
    let report = orthogonality_report(&table, &polys, n_max).map_err(math("orthogonality_report"))?;
    c.push(
        "orthogonality",
        report.passed(),
        format!("n ≤ {n_max}: {} violations, Δ regular: {:?}", report.violations.len(), report.delta_regular),
    );
    Ok(())
}

fn suite_check(o: &CriterionOutcome) -> CheckDoc {
    let detail = if o.id == 10 {
        if o.passed { "within the 120 s budget" } else { "over the 120 s budget" }.to_string()
    } else {
        o.detail.clone()
    };
    CheckDoc { name: format!("[{}] {}", o.id, o.name), passed: o.passed, detail }
}

/// Runs the built-in suite. Per-criterion timings go to stderr so that the
/// report itself is deterministic.
pub fn run_suite(seed: u64, criterion: Option<u8>) -> Result<VerifyReportDoc, CliError> {
    let outcomes = match criterion {
        Some(id) => vec![run_criterion(id, seed).map_err(|e| usage(e.to_string()))?],
        None => run_all(seed),
    };
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let checks: Vec<CheckDoc> = outcomes.iter().map(suite_check).collect();
    Ok(VerifyReportDoc { target: "suite".into(), passed: checks.iter().all(|c| c.passed), checks })
}
