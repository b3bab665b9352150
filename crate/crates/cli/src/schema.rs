//! Structural validation of input documents before they are deserialized.

use mopsym_core::parse_rational;
use serde_json::Value;

use crate::artifact::{Diagnostic, SCHEMA_ID};

enum Ty {
    Usize,
    Bool,
    Str,
    Num,
    Rational,
    List(Box<Ty>),
    Fixed(usize, Box<Ty>),
    Obj(Vec<Field>),
    Source,
    AnyObject,
}

struct Field {
    name: &'static str,
    ty: Ty,
    required: bool,
}

fn req(name: &'static str, ty: Ty) -> Field {
    Field { name, ty, required: true }
}

fn opt(name: &'static str, ty: Ty) -> Field {
    Field { name, ty, required: false }
}

fn list(t: Ty) -> Ty {
    Ty::List(Box::new(t))
}

fn qs() -> Ty {
    list(Ty::Rational)
}

fn mat() -> Ty {
    list(qs())
}

fn poly_list() -> Ty {
    list(qs())
}

fn banded() -> Ty {
    Ty::Obj(vec![req("size", Ty::Usize), req("lower", Ty::Usize), req("upper", Ty::Usize), req("bands", mat())])
}

fn complex() -> Ty {
    Ty::Fixed(2, Box::new(Ty::Num))
}

const SOURCE_KINDS: [&str; 3] = ["recurrence", "symmetric_recurrence", "four_term_recurrence"];

fn kind_fields(kind: &str) -> Option<Vec<Field>> {
    Some(match kind {
        "recurrence" => vec![req("d", Ty::Usize), req("beta", qs()), req("gamma", list(qs()))],
        "symmetric_recurrence" => vec![req("d", Ty::Usize), req("gamma", qs())],
        "four_term_recurrence" => vec![req("b", qs()), req("c", qs()), req("dd", qs())],
        "matrix" => vec![req("rows", mat())],
        "free_params" => vec![req("values", qs())],
        "polynomials" => vec![
            req("d", Ty::Usize),
            req("m", Ty::Usize),
            req("symmetric", Ty::Bool),
            req("polys", poly_list()),
            opt("source", Ty::Source),
        ],
        "lu" => vec![
            req("d", Ty::Usize),
            req("n", Ty::Usize),
            req("jacobi", banded()),
            req("l", banded()),
            req("pivots", qs()),
            req("source", Ty::Source),
        ],
        "darboux" => vec![
            req("d", Ty::Usize),
            req("m", Ty::Usize),
            req("free_params", qs()),
            req("pivots", qs()),
            req("multipliers", list(qs())),
            req("jacobi", list(banded())),
            req("families", list(poly_list())),
            req("source", Ty::Source),
        ],
        "symmetrization" => vec![
            req("d", Ty::Usize),
            req("m", Ty::Usize),
            req("gamma", qs()),
            req("free_params", qs()),
            opt("regularity_warning", Ty::Usize),
            req("s", poly_list()),
            req("source", Ty::Source),
        ],
        "moments" => vec![
            req("d", Ty::Usize),
            req("k", Ty::Usize),
            req("horizon", Ty::Usize),
            req("v00", mat()),
            req("moments", list(qs())),
            req("source", Ty::Source),
        ],
        "hankel" => vec![
            req("d", Ty::Usize),
            req("n", Ty::Usize),
            req("matrix", mat()),
            req("regular", Ty::Bool),
            req("moments", list(qs())),
        ],
        "series" => vec![
            req("d", Ty::Usize),
            req("k", Ty::Usize),
            req("horizon", Ty::Usize),
            req("flavor", Ty::Str),
            req("symmetric_source", Ty::Bool),
            opt("v00", mat()),
            req("blocks", list(mat())),
            req("patterns", list(Ty::Str)),
            opt(
                "evaluation",
                Ty::Obj(vec![
                    req("z", complex()),
                    req("norm_bound", Ty::Rational),
                    req("value", list(list(complex()))),
                    req("tail_bound", Ty::Num),
                ]),
            ),
            req("source", Ty::Source),
        ],
        "matrix_mop" => vec![
            req("n_max", Ty::Usize),
            req("w", list(list(poly_list()))),
            req("a2", list(mat())),
            req("b2", list(mat())),
            req("c2", list(mat())),
            req("d2", list(mat())),
            req("w_recurrence", list(Ty::Obj(vec![req("n", Ty::Usize), req("holds", Ty::Bool), req("boundary", Ty::Bool)]))),
            req("source", Ty::Source),
        ],
        "favard" => vec![
            req("k", Ty::Usize),
            req("a", list(mat())),
            req("b", list(mat())),
            req("c", list(mat())),
            req("moments", list(mat())),
            req(
                "orthogonality",
                Ty::Obj(vec![
                    req("passed", Ty::Bool),
                    req("nonzero_below", list(Ty::Fixed(2, Box::new(Ty::Usize)))),
                    req("chain_ok", list(Ty::Bool)),
                    req("block_upper", list(Ty::Bool)),
                ]),
            ),
            req("source", Ty::Source),
        ],
        "verify_report" => vec![
            req("target", Ty::Str),
            req("passed", Ty::Bool),
            req("checks", list(Ty::Obj(vec![req("name", Ty::Str), req("passed", Ty::Bool), req("detail", Ty::Str)]))),
        ],
        "error" => vec![
            req("operation", Ty::Str),
            req("error", Ty::Str),
            req("exit_code", Ty::Usize),
            req("index", Ty::AnyObject),
            req("message", Ty::Str),
            opt("diagnostics", list(Ty::AnyObject)),
        ],
        _ => return None,
    })
}

fn diag(out: &mut Vec<Diagnostic>, path: &str, code: &str, message: String) {
    out.push(Diagnostic { path: path.to_string(), code: code.to_string(), message });
}

fn check(v: &Value, ty: &Ty, path: &str, out: &mut Vec<Diagnostic>) {
    let wrong = |out: &mut Vec<Diagnostic>, expected: &str| {
        diag(out, path, "wrong_type", format!("expected {expected}, found {}", type_name(v)))
    };
    match ty {
        Ty::Usize => {
            if !v.as_u64().is_some_and(|n| usize::try_from(n).is_ok()) {
                wrong(out, "a non-negative integer");
            }
        }
        Ty::Bool => {
            if !v.is_boolean() {
                wrong(out, "a boolean");
            }
        }
        Ty::Str => {
            if !v.is_string() {
                wrong(out, "a string");
            }
        }
        Ty::Num => {
            if !v.is_number() {
                wrong(out, "a number");
            }
        }
        Ty::Rational => match v.as_str() {
            Some(s) if parse_rational(s).is_some() => {}
            Some(s) => {
                diag(out, path, "malformed_rational", format!("{s:?} is not a rational of the form \"p\" or \"p/q\" with q ≠ 0"))
            }
            None => wrong(out, "a rational string"),
        },
        Ty::List(inner) => match v.as_array() {
            Some(items) => {
                for (i, item) in items.iter().enumerate() {
                    check(item, inner, &format!("{path}[{i}]"), out);
                }
            }
            None => wrong(out, "an array"),
        },
        Ty::Fixed(len, inner) => match v.as_array() {
            Some(items) if items.len() == *len => {
                for (i, item) in items.iter().enumerate() {
                    check(item, inner, &format!("{path}[{i}]"), out);
                }
            }
            Some(items) => diag(out, path, "length", format!("expected {len} entries, found {}", items.len())),
            None => wrong(out, "an array"),
        },
        Ty::Obj(fields) => check_object(v, fields, &[], path, out),
        Ty::Source => {
            let kind = v.get("kind").and_then(Value::as_str);
            match kind {
                Some(k) if SOURCE_KINDS.contains(&k) => {
                    let fields = kind_fields(k).expect("source kinds are known");
                    check_object(v, &fields, &["kind"], path, out);
                    consistency(k, v, path, out);
                }
                Some(k) => diag(out, &format!("{path}.kind"), "unknown_kind", format!("{k:?} cannot be a source")),
                None => diag(out, &format!("{path}.kind"), "missing_field", "a source needs a kind".into()),
            }
        }
        Ty::AnyObject => {
            if !v.is_object() {
                wrong(out, "an object");
            }
        }
    }
}

fn check_object(v: &Value, fields: &[Field], extra: &[&str], path: &str, out: &mut Vec<Diagnostic>) {
    let Some(map) = v.as_object() else {
        diag(out, path, "wrong_type", format!("expected an object, found {}", type_name(v)));
        return;
    };
    for key in map.keys() {
        if !extra.contains(&key.as_str()) && !fields.iter().any(|f| f.name == key) {
            diag(out, &format!("{path}.{key}"), "unknown_field", format!("field {key:?} is not part of the schema"));
        }
    }
    for f in fields {
        let sub = format!("{path}.{}", f.name);
        match map.get(f.name) {
            Some(Value::Null) if !f.required => {}
            Some(x) => check(x, &f.ty, &sub, out),
            None if f.required => diag(out, &sub, "missing_field", format!("required field {:?} is missing", f.name)),
            None => {}
        }
    }
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn usize_at(v: &Value, key: &str) -> Option<usize> {
    v.get(key).and_then(Value::as_u64).and_then(|n| usize::try_from(n).ok())
}

fn len_at(v: &Value, key: &str) -> Option<usize> {
    v.get(key).and_then(Value::as_array).map(Vec::len)
}

fn expect_len(out: &mut Vec<Diagnostic>, path: &str, found: Option<usize>, expected: usize, why: &str) {
    if let Some(found) = found {
        if found != expected {
            diag(out, path, "length", format!("expected {expected} entries ({why}), found {found}"));
        }
    }
}

fn square(out: &mut Vec<Diagnostic>, v: Option<&Value>, path: &str, d: usize) {
    let Some(rows) = v.and_then(Value::as_array) else { return };
    expect_len(out, path, Some(rows.len()), d, "d rows");
    for (i, r) in rows.iter().enumerate() {
        expect_len(out, &format!("{path}[{i}]"), r.as_array().map(Vec::len), d, "d columns");
    }
}

fn rectangular(out: &mut Vec<Diagnostic>, v: Option<&Value>, path: &str) {
    let Some(rows) = v.and_then(Value::as_array) else { return };
    let width = rows.first().and_then(Value::as_array).map(Vec::len).unwrap_or(0);
    for (i, r) in rows.iter().enumerate().skip(1) {
        expect_len(out, &format!("{path}[{i}]"), r.as_array().map(Vec::len), width, "same width as row 0");
    }
}

fn banded_shape(out: &mut Vec<Diagnostic>, v: &Value, path: &str) {
    let (Some(size), Some(lo), Some(hi)) = (usize_at(v, "size"), usize_at(v, "lower"), usize_at(v, "upper")) else {
        return;
    };
    expect_len(out, &format!("{path}.bands"), len_at(v, "bands"), size, "one band row per matrix row");
    if let Some(rows) = v.get("bands").and_then(Value::as_array) {
        for (i, r) in rows.iter().enumerate() {
            expect_len(out, &format!("{path}.bands[{i}]"), r.as_array().map(Vec::len), lo + hi + 1, "lower + upper + 1");
        }
    }
}

/// Length relations between fields of a structurally valid document.
fn consistency(kind: &str, v: &Value, path: &str, out: &mut Vec<Diagnostic>) {
    let d = usize_at(v, "d");
    if d == Some(0) {
        diag(out, &format!("{path}.d"), "length", "d must be at least 1".into());
    }
    let d = d.filter(|&d| d > 0);
    match kind {
        "recurrence" => {
            if let Some(d) = d {
                expect_len(out, &format!("{path}.gamma"), len_at(v, "gamma"), d, "one list per superscript 0..d−1");
            }
        }
        "matrix" => rectangular(out, v.get("rows"), &format!("{path}.rows")),
        "polynomials" => {
            if let Some(m) = usize_at(v, "m") {
                expect_len(out, &format!("{path}.polys"), len_at(v, "polys"), m + 1, "polynomials 0..=m");
            }
        }
        "lu" => {
            for key in ["jacobi", "l"] {
                if let Some(b) = v.get(key) {
                    banded_shape(out, b, &format!("{path}.{key}"));
                }
            }
        }
        "darboux" => {
            if let Some(d) = d {
                expect_len(out, &format!("{path}.multipliers"), len_at(v, "multipliers"), d, "one list per factor");
                expect_len(out, &format!("{path}.families"), len_at(v, "families"), d + 1, "families A^1..A^(d+1)");
                expect_len(
                    out,
                    &format!("{path}.free_params"),
                    len_at(v, "free_params"),
                    d * (d - 1) / 2,
                    "d(d−1)/2 free parameters",
                );
            }
            if let Some(js) = v.get("jacobi").and_then(Value::as_array) {
                for (i, b) in js.iter().enumerate() {
                    banded_shape(out, b, &format!("{path}.jacobi[{i}]"));
                }
            }
        }
        "symmetrization" => {
            if let Some(d) = d {
                expect_len(
                    out,
                    &format!("{path}.free_params"),
                    len_at(v, "free_params"),
                    d * (d - 1) / 2,
                    "d(d−1)/2 free parameters",
                );
            }
        }
        "moments" => {
            if let Some(d) = d {
                expect_len(out, &format!("{path}.moments"), len_at(v, "moments"), d, "one row per functional");
                square(out, v.get("v00"), &format!("{path}.v00"), d);
            }
            rectangular(out, v.get("moments"), &format!("{path}.moments"));
        }
        "hankel" => rectangular(out, v.get("moments"), &format!("{path}.moments")),
        "series" => {
            if let Some(d) = d {
                square(out, v.get("v00"), &format!("{path}.v00"), d);
                if let Some(blocks) = v.get("blocks").and_then(Value::as_array) {
                    for (i, b) in blocks.iter().enumerate() {
                        square(out, Some(b), &format!("{path}.blocks[{i}]"), d);
                    }
                }
            }
        }
        _ => {}
    }
}

/// Reports unknown fields, missing fields, type errors, malformed rationals
/// and length inconsistencies. The document is never modified; an empty
/// report means it will deserialize.
pub fn schema_check(doc: &Value) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let Some(map) = doc.as_object() else {
        diag(&mut out, "$", "wrong_type", format!("expected an object, found {}", type_name(doc)));
        return out;
    };
    match map.get("schema") {
        Some(Value::String(s)) if s == SCHEMA_ID => {}
        Some(other) => diag(&mut out, "$.schema", "schema_version", format!("expected {SCHEMA_ID:?}, found {other}")),
        None => diag(&mut out, "$.schema", "missing_field", format!("documents must declare \"schema\": {SCHEMA_ID:?}")),
    }
    let kind = match map.get("kind") {
        Some(Value::String(k)) => k.as_str(),
        Some(other) => {
            diag(&mut out, "$.kind", "wrong_type", format!("expected a string, found {}", type_name(other)));
            return out;
        }
        None => {
            diag(&mut out, "$.kind", "missing_field", "documents must declare a kind".into());
            return out;
        }
    };
    let Some(fields) = kind_fields(kind) else {
        diag(&mut out, "$.kind", "unknown_kind", format!("unknown document kind {kind:?}"));
        return out;
    };
    check_object(doc, &fields, &["schema", "kind"], "$", &mut out);
    consistency(kind, doc, "$", &mut out);
    out
}
