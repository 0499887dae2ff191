//! JSON encodings for every value that crosses the command-line
//! boundary: degrees and groups, scalars and ring elements, matrices
//! with their distributions, derivation and kernel certificates,
//! localization tuples, and verification reports.
//!
//! Documents are versioned with `"schema": "grlin/1"`. Decoding
//! separates two failure classes so the frontend can map them to
//! distinct exit codes: [`JsonError::Schema`] for anything that does
//! not parse into the expected shape, and [`JsonError::Distribution`]
//! for well-formed data whose entries violate the declared degree
//! distributions (the message carries the offending cell).

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::grp::{DegSeq, Group, GroupElem, GroupKind, SubgroupSpec};
use crate::hmat::{FactorizationWitness, HMatrix, MatError};
use crate::loc::{ClosureSystem, LocTuple, MalcolmsonCert};
use crate::mideal::{Axis, CertNode};
use crate::rank::VerifyReport;
use crate::ring::{exf, q2, qp, ql, rat, sk, tx, Atom, GradedElement, GradedRing, RingView};
use crate::scalar::{Field, Scalar};

pub const SCHEMA: &str = "grlin/1";

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("distribution violation: {0}")]
    Distribution(String),
}

fn bad(msg: impl Into<String>) -> JsonError {
    JsonError::Schema(msg.into())
}

fn mat_err(e: MatError) -> JsonError {
    match e {
        MatError::Distribution { .. } | MatError::DistMismatch(_) => {
            JsonError::Distribution(e.to_string())
        }
        other => JsonError::Schema(other.to_string()),
    }
}

// -------------------------------------------------------------- accessors

fn obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, JsonError> {
    v.as_object().ok_or_else(|| bad(format!("{what} must be an object")))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value, JsonError> {
    m.get(key).ok_or_else(|| bad(format!("missing field \"{key}\"")))
}

fn str_field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a str, JsonError> {
    field(m, key)?.as_str().ok_or_else(|| bad(format!("field \"{key}\" must be a string")))
}

fn usize_field(m: &Map<String, Value>, key: &str) -> Result<usize, JsonError> {
    field(m, key)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| bad(format!("field \"{key}\" must be a nonnegative integer")))
}

fn arr<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn usize_list(v: &Value, what: &str) -> Result<Vec<usize>, JsonError> {
    arr(v, what)?
        .iter()
        .map(|x| x.as_u64().map(|n| n as usize).ok_or_else(|| bad(format!("{what} entries must be nonnegative integers"))))
        .collect()
}

// -------------------------------------------------------------- documents

/// Wrap a payload in a versioned document: `{"schema", "kind", ...fields}`.
pub fn document(kind: &str, fields: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), Value::String(SCHEMA.into()));
    m.insert("kind".into(), Value::String(kind.into()));
    for (k, v) in fields {
        m.insert(k.into(), v);
    }
    Value::Object(m)
}

/// Check the schema tag and return the document's kind and body.
pub fn open_document(v: &Value) -> Result<(&str, &Map<String, Value>), JsonError> {
    let m = obj(v, "document")?;
    let schema = str_field(m, "schema")?;
    if schema != SCHEMA {
        return Err(bad(format!("unsupported schema \"{schema}\", expected \"{SCHEMA}\"")));
    }
    Ok((str_field(m, "kind")?, m))
}

// ----------------------------------------------------- degrees and groups

/// Degrees: table elements are numbers, free-abelian/cyclic vectors are
/// arrays, product elements pair both sides.
pub fn degree_to_json(e: &GroupElem) -> Value {
    match e {
        GroupElem::T(i) => json!(i),
        GroupElem::V(v) => json!(v),
        GroupElem::P(l, r) => json!({"left": degree_to_json(l), "right": degree_to_json(r)}),
    }
}

pub fn degree_from_json(v: &Value) -> Result<GroupElem, JsonError> {
    if let Some(n) = v.as_u64() {
        return Ok(GroupElem::T(n as usize));
    }
    if let Some(a) = v.as_array() {
        let ints: Result<Vec<i64>, _> = a
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| bad("degree vector entries must be integers")))
            .collect();
        return Ok(GroupElem::V(ints?));
    }
    if let Some(m) = v.as_object() {
        let l = degree_from_json(field(m, "left")?)?;
        let r = degree_from_json(field(m, "right")?)?;
        return Ok(GroupElem::P(Box::new(l), Box::new(r)));
    }
    Err(bad("degree must be a number, a vector, or a left/right pair"))
}

pub fn degseq_to_json(d: &DegSeq) -> Value {
    Value::Array(d.as_slice().iter().map(degree_to_json).collect())
}

pub fn degseq_from_json(v: &Value) -> Result<DegSeq, JsonError> {
    let items = arr(v, "degree sequence")?;
    let elems: Result<Vec<GroupElem>, _> = items.iter().map(degree_from_json).collect();
    Ok(DegSeq::new(elems?))
}

pub fn group_to_json(g: &Group) -> Value {
    match g.kind() {
        GroupKind::Table { names, mul, .. } => {
            json!({"kind": "table", "names": names, "table": mul})
        }
        GroupKind::Abelian { moduli } => {
            if moduli.iter().all(|&m| m == 0) {
                json!({"kind": "free-abelian", "rank": moduli.len()})
            } else {
                json!({"kind": "abelian", "moduli": moduli})
            }
        }
        GroupKind::Product { left, right } => {
            json!({"kind": "product", "left": group_to_json(left), "right": group_to_json(right)})
        }
    }
}

pub fn group_from_json(v: &Value) -> Result<Arc<Group>, JsonError> {
    let m = obj(v, "group")?;
    match str_field(m, "kind")? {
        "table" => {
            let names: Vec<String> = arr(field(m, "names")?, "names")?
                .iter()
                .map(|x| x.as_str().map(String::from).ok_or_else(|| bad("group names must be strings")))
                .collect::<Result<_, _>>()?;
            let mul: Vec<Vec<usize>> = arr(field(m, "table")?, "table")?
                .iter()
                .map(|row| usize_list(row, "table row"))
                .collect::<Result<_, _>>()?;
            Group::table(names.iter().map(String::as_str).collect(), mul)
                .map_err(|e| bad(format!("invalid multiplication table: {e}")))
        }
        "free-abelian" => Ok(Group::free_abelian(usize_field(m, "rank")?)),
        "abelian" => {
            let moduli: Vec<u64> = arr(field(m, "moduli")?, "moduli")?
                .iter()
                .map(|x| x.as_u64().ok_or_else(|| bad("moduli must be nonnegative integers")))
                .collect::<Result<_, _>>()?;
            Ok(Group::abelian(moduli))
        }
        "product" => {
            let l = group_from_json(field(m, "left")?)?;
            let r = group_from_json(field(m, "right")?)?;
            Ok(Group::product(l, r))
        }
        other => Err(bad(format!("unknown group kind \"{other}\""))),
    }
}

pub fn subgroup_to_json(s: &SubgroupSpec) -> Value {
    match s {
        SubgroupSpec::Whole => json!("whole"),
        SubgroupSpec::TableSubset(idx) => json!({"table-subset": idx}),
        SubgroupSpec::Lattice(gens) => json!({"lattice": gens}),
    }
}

pub fn subgroup_from_json(v: &Value) -> Result<SubgroupSpec, JsonError> {
    if v.as_str() == Some("whole") {
        return Ok(SubgroupSpec::Whole);
    }
    let m = obj(v, "subgroup")?;
    if let Some(idx) = m.get("table-subset") {
        return Ok(SubgroupSpec::TableSubset(usize_list(idx, "table-subset")?));
    }
    if let Some(gens) = m.get("lattice") {
        let rows: Vec<Vec<i64>> = arr(gens, "lattice")?
            .iter()
            .map(|row| {
                arr(row, "lattice generator")?
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(|| bad("lattice entries must be integers")))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        return Ok(SubgroupSpec::Lattice(rows));
    }
    Err(bad("subgroup must be \"whole\", a table-subset, or a lattice"))
}

// ------------------------------------------------------------------ rings

/// Look up a catalog ring by name (case-insensitive).
pub fn ring_by_name(name: &str) -> Option<Arc<GradedRing>> {
    let trimmed = name.strip_prefix("catalog:").unwrap_or(name);
    match trimmed.to_ascii_uppercase().as_str() {
        "Q2" => Some(q2()),
        "QL" => Some(ql()),
        "QP" => Some(qp()),
        "SK" => Some(sk()),
        "TX" => Some(tx()),
        "EXF" => Some(exf()),
        "QQ" | "RAT" => Some(rat()),
        _ => None,
    }
}

/// Views name the catalog entry and, when coarsened, the subgroup that
/// was factored out of the grading group.
pub fn view_to_json(view: &RingView) -> Value {
    let mut m = Map::new();
    m.insert("catalog".into(), json!(view.ring().name()));
    if let Some(q) = view.quot() {
        m.insert("regrade".into(), subgroup_to_json(q.spec()));
    }
    Value::Object(m)
}

pub fn view_from_json(v: &Value) -> Result<RingView, JsonError> {
    // a bare string names a catalog ring with its native grading
    if let Some(s) = v.as_str() {
        let ring = ring_by_name(s).ok_or_else(|| bad(format!("unknown catalog ring \"{s}\"")))?;
        return Ok(RingView::plain(ring));
    }
    let m = obj(v, "ring view")?;
    let name = str_field(m, "catalog")?;
    let ring = ring_by_name(name).ok_or_else(|| bad(format!("unknown catalog ring \"{name}\"")))?;
    match m.get("regrade") {
        None => Ok(RingView::plain(ring)),
        Some(spec) => {
            let spec = subgroup_from_json(spec)?;
            let quot = ring
                .group()
                .clone()
                .quotient(spec)
                .map_err(|e| bad(format!("invalid regrade subgroup: {e}")))?;
            RingView::regraded(ring, quot).map_err(|e| bad(format!("invalid regrade: {e}")))
        }
    }
}

// ---------------------------------------------------------------- scalars

fn rational_to_json(r: &BigRational) -> Value {
    json!([r.numer().to_string(), r.denom().to_string()])
}

fn rational_from_json(v: &Value) -> Result<BigRational, JsonError> {
    let parts = arr(v, "rational")?;
    if parts.len() != 2 {
        return Err(bad("rational must be a [numerator, denominator] pair"));
    }
    let parse = |x: &Value| -> Result<BigInt, JsonError> {
        let s = x.as_str().ok_or_else(|| bad("rational parts must be decimal strings"))?;
        BigInt::from_str(s).map_err(|_| bad(format!("bad integer literal \"{s}\"")))
    };
    let den = parse(&parts[1])?;
    if den == BigInt::from(0) {
        return Err(bad("rational denominator must be nonzero"));
    }
    Ok(BigRational::new(parse(&parts[0])?, den))
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Q(r) => json!({"field": "Q", "ratio": rational_to_json(r)}),
        Scalar::Qi { re, im } => {
            json!({"field": "Qi", "re": rational_to_json(re), "im": rational_to_json(im)})
        }
        Scalar::Fp { p, val } => json!({"field": "Fp", "p": p, "val": val}),
    }
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar, JsonError> {
    let m = obj(v, "scalar")?;
    match str_field(m, "field")? {
        "Q" => Ok(Scalar::Q(rational_from_json(field(m, "ratio")?)?)),
        "Qi" => Ok(Scalar::Qi {
            re: rational_from_json(field(m, "re")?)?,
            im: rational_from_json(field(m, "im")?)?,
        }),
        "Fp" => {
            let p = usize_field(m, "p")? as u32;
            let val = usize_field(m, "val")? as u32;
            if p == 0 {
                return Err(bad("field characteristic must be positive"));
            }
            Ok(Scalar::Fp { p, val: val % p })
        }
        other => Err(bad(format!("unknown scalar field \"{other}\""))),
    }
}

// --------------------------------------------------------------- elements

fn atom_to_json(a: &Atom) -> Value {
    match a {
        Atom::Deg(g) => json!({"deg": degree_to_json(g)}),
        Atom::Dual(g, x) => json!({"dual": degree_to_json(g), "x": x}),
        Atom::Side(s, inner) => json!({"side": s, "atom": atom_to_json(inner)}),
        Atom::Mono(g, inner) => json!({"lift": degree_to_json(g), "atom": atom_to_json(inner)}),
    }
}

fn atom_from_json(v: &Value) -> Result<Atom, JsonError> {
    let m = obj(v, "atom")?;
    if let Some(g) = m.get("deg") {
        return Ok(Atom::Deg(degree_from_json(g)?));
    }
    if let Some(g) = m.get("dual") {
        let x = field(m, "x")?.as_bool().ok_or_else(|| bad("dual marker \"x\" must be a bool"))?;
        return Ok(Atom::Dual(degree_from_json(g)?, x));
    }
    if let Some(s) = m.get("side") {
        let s = s.as_u64().ok_or_else(|| bad("side must be 0 or 1"))? as u8;
        let inner = atom_from_json(field(m, "atom")?)?;
        return Ok(Atom::Side(s, Box::new(inner)));
    }
    if let Some(g) = m.get("lift") {
        let inner = atom_from_json(field(m, "atom")?)?;
        return Ok(Atom::Mono(degree_from_json(g)?, Box::new(inner)));
    }
    Err(bad("atom must be one of deg | dual | side | lift"))
}

/// Elements are lists of homogeneous parts, one per occupied degree:
/// `[{"deg": γ, "coeffs": [{"atom": a, "value": c}, ...]}, ...]`.
pub fn element_to_json(ring: &GradedRing, e: &GradedElement) -> Value {
    let mut parts: Vec<(GroupElem, Vec<Value>)> = Vec::new();
    for (atom, coeff) in e.terms() {
        let d = ring.atom_degree(atom);
        let item = json!({"atom": atom_to_json(atom), "value": scalar_to_json(coeff)});
        match parts.iter_mut().find(|(pd, _)| *pd == d) {
            Some((_, list)) => list.push(item),
            None => parts.push((d, vec![item])),
        }
    }
    Value::Array(
        parts
            .into_iter()
            .map(|(d, coeffs)| json!({"deg": degree_to_json(&d), "coeffs": coeffs}))
            .collect(),
    )
}

pub fn element_from_json(ring: &Arc<GradedRing>, v: &Value) -> Result<GradedElement, JsonError> {
    let mut acc = ring.zero();
    for part in arr(v, "element")? {
        let m = obj(part, "element part")?;
        let deg = degree_from_json(field(m, "deg")?)?;
        for item in arr(field(m, "coeffs")?, "coeffs")? {
            let im = obj(item, "coefficient")?;
            let atom = atom_from_json(field(im, "atom")?)?;
            let value = scalar_from_json(field(im, "value")?)?;
            let mono = ring
                .monomial(atom.clone(), value)
                .map_err(|e| bad(format!("invalid monomial: {e}")))?;
            if ring.atom_degree(&atom) != deg {
                return Err(bad("coefficient atom does not match its declared degree"));
            }
            acc = ring.add(&acc, &mono);
        }
    }
    Ok(acc)
}

// --------------------------------------------------------------- matrices

/// Matrices carry their distributions:
/// `{"alpha": [...], "beta": [...], "rows": [[element, ...], ...]}`.
pub fn matrix_to_json(a: &HMatrix) -> Value {
    let ring = a.view().ring().as_ref();
    let rows: Vec<Value> = (0..a.rows())
        .map(|i| Value::Array((0..a.cols()).map(|j| element_to_json(ring, a.entry(i, j))).collect()))
        .collect();
    json!({
        "alpha": degseq_to_json(a.alpha()),
        "beta": degseq_to_json(a.beta()),
        "rows": rows,
    })
}

pub fn matrix_from_json(view: &RingView, v: &Value) -> Result<HMatrix, JsonError> {
    let m = obj(v, "matrix")?;
    let alpha = degseq_from_json(field(m, "alpha")?)?;
    let beta = degseq_from_json(field(m, "beta")?)?;
    let rows = arr(field(m, "rows")?, "rows")?;
    if rows.len() != alpha.len() {
        return Err(bad(format!("expected {} rows, found {}", alpha.len(), rows.len())));
    }
    let mut entries = Vec::with_capacity(alpha.len() * beta.len());
    for row in rows {
        let cells = arr(row, "matrix row")?;
        if cells.len() != beta.len() {
            return Err(bad(format!("expected {} columns, found {}", beta.len(), cells.len())));
        }
        for cell in cells {
            entries.push(element_from_json(view.ring(), cell)?);
        }
    }
    HMatrix::new(view.clone(), alpha, beta, entries).map_err(mat_err)
}

pub fn witness_to_json(w: &FactorizationWitness) -> Value {
    json!({"p": matrix_to_json(&w.p), "q": matrix_to_json(&w.q)})
}

pub fn witness_from_json(view: &RingView, v: &Value) -> Result<FactorizationWitness, JsonError> {
    let m = obj(v, "factorization witness")?;
    Ok(FactorizationWitness {
        p: matrix_from_json(view, field(m, "p")?)?,
        q: matrix_from_json(view, field(m, "q")?)?,
    })
}

// ---------------------------------------------------------------- reports

/// CLI-facing verdict: `{"checked", "passed", "counterexample"?}`.
pub fn report_to_json(r: &VerifyReport) -> Value {
    let mut m = Map::new();
    m.insert("checked".into(), json!(r.checked));
    m.insert("passed".into(), json!(r.passed()));
    if let Some(c) = r.counterexample() {
        m.insert("counterexample".into(), json!(c));
    }
    Value::Object(m)
}

// ----------------------------------------------------------- certificates

/// Derivation certificates: a tree with typed leaves.
pub fn derivation_to_json(c: &CertNode) -> Value {
    match c {
        CertNode::NonFull { target, witness } => json!({
            "node": "nonfull",
            "target": matrix_to_json(target),
            "witness": witness_to_json(witness),
        }),
        CertNode::Hollow { target, rows, cols } => json!({
            "node": "hollow",
            "target": matrix_to_json(target),
            "rows": rows,
            "cols": cols,
        }),
        CertNode::Generator { target, index, pad, row_perm, col_perm } => json!({
            "node": "generator",
            "target": matrix_to_json(target),
            "index": index,
            "pad": matrix_to_json(pad),
            "row_perm": row_perm,
            "col_perm": col_perm,
        }),
        CertNode::DetSum { target, axis, line, left, right } => json!({
            "node": "detsum",
            "target": matrix_to_json(target),
            "axis": match axis { Axis::Row => "row", Axis::Col => "col" },
            "line": line,
            "left": derivation_to_json(left),
            "right": derivation_to_json(right),
        }),
    }
}

pub fn derivation_from_json(view: &RingView, v: &Value) -> Result<CertNode, JsonError> {
    let m = obj(v, "derivation certificate")?;
    let target = matrix_from_json(view, field(m, "target")?)?;
    match str_field(m, "node")? {
        "nonfull" => Ok(CertNode::NonFull {
            target,
            witness: witness_from_json(view, field(m, "witness")?)?,
        }),
        "hollow" => Ok(CertNode::Hollow {
            target,
            rows: usize_list(field(m, "rows")?, "rows")?,
            cols: usize_list(field(m, "cols")?, "cols")?,
        }),
        "generator" => Ok(CertNode::Generator {
            target,
            index: usize_field(m, "index")?,
            pad: matrix_from_json(view, field(m, "pad")?)?,
            row_perm: usize_list(field(m, "row_perm")?, "row_perm")?,
            col_perm: usize_list(field(m, "col_perm")?, "col_perm")?,
        }),
        "detsum" => Ok(CertNode::DetSum {
            target,
            axis: match str_field(m, "axis")? {
                "row" => Axis::Row,
                "col" => Axis::Col,
                other => return Err(bad(format!("unknown axis \"{other}\""))),
            },
            line: usize_field(m, "line")?,
            left: Box::new(derivation_from_json(view, field(m, "left")?)?),
            right: Box::new(derivation_from_json(view, field(m, "right")?)?),
        }),
        other => Err(bad(format!("unknown certificate node \"{other}\""))),
    }
}

/// Kernel certificates: the element, its degree, and the eight blocks.
pub fn malcolmson_to_json(c: &MalcolmsonCert) -> Value {
    let ring = c.view().ring().as_ref();
    json!({
        "r": element_to_json(ring, &c.r),
        "gamma": degree_to_json(&c.gamma),
        "l": matrix_to_json(&c.l),
        "m": matrix_to_json(&c.m),
        "w": matrix_to_json(&c.w),
        "j": matrix_to_json(&c.j),
        "p": matrix_to_json(&c.p),
        "u": matrix_to_json(&c.u),
        "q": matrix_to_json(&c.q),
        "v": matrix_to_json(&c.v),
    })
}

pub fn malcolmson_from_json(view: &RingView, v: &Value) -> Result<MalcolmsonCert, JsonError> {
    let m = obj(v, "kernel certificate")?;
    Ok(MalcolmsonCert {
        r: element_from_json(view.ring(), field(m, "r")?)?,
        gamma: degree_from_json(field(m, "gamma")?)?,
        l: matrix_from_json(view, field(m, "l")?)?,
        m: matrix_from_json(view, field(m, "m")?)?,
        w: matrix_from_json(view, field(m, "w")?)?,
        j: matrix_from_json(view, field(m, "j")?)?,
        p: matrix_from_json(view, field(m, "p")?)?,
        u: matrix_from_json(view, field(m, "u")?)?,
        q: matrix_from_json(view, field(m, "q")?)?,
        v: matrix_from_json(view, field(m, "v")?)?,
    })
}

// ---------------------------------------------------------------- tuples

/// Localization tuples `(F, A, X)`; the distributions ride inside the
/// block matrices.
pub fn tuple_to_json(t: &LocTuple) -> Value {
    json!({
        "f": matrix_to_json(t.f()),
        "a": matrix_to_json(t.a()),
        "x": matrix_to_json(t.x()),
    })
}

pub fn tuple_from_json(view: &RingView, v: &Value) -> Result<LocTuple, JsonError> {
    let m = obj(v, "localization tuple")?;
    let f = matrix_from_json(view, field(m, "f")?)?;
    let a = matrix_from_json(view, field(m, "a")?)?;
    let x = matrix_from_json(view, field(m, "x")?)?;
    LocTuple::new(f, a, x).map_err(|e| JsonError::Distribution(e.to_string()))
}

/// Closure systems pair a base-ring system with a target solution.
pub fn closure_to_json(sys: &ClosureSystem) -> Value {
    json!({
        "a": matrix_to_json(sys.a()),
        "u": matrix_to_json(sys.u()),
    })
}

pub fn closure_from_json(
    base: &RingView,
    target: &RingView,
    v: &Value,
) -> Result<ClosureSystem, JsonError> {
    let m = obj(v, "closure system")?;
    let a = matrix_from_json(base, field(m, "a")?)?;
    let u = matrix_from_json(target, field(m, "u")?)?;
    ClosureSystem::new(a, u).map_err(|e| JsonError::Distribution(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loc::trivial_kernel_cert;
    use crate::sample::Sampler;

    fn zd(n: i64) -> GroupElem {
        GroupElem::V(vec![n])
    }

    #[test]
    fn degrees_and_groups_roundtrip() {
        for e in [
            GroupElem::T(3),
            GroupElem::V(vec![-2, 5]),
            GroupElem::P(Box::new(GroupElem::T(1)), Box::new(GroupElem::V(vec![4]))),
        ] {
            assert_eq!(degree_from_json(&degree_to_json(&e)).unwrap(), e);
        }
        let c2 = q2().group().clone();
        let z2 = Group::free_abelian(2);
        let zmod = Group::abelian(vec![2, 0]);
        let prod = Group::product(c2.clone(), z2.clone());
        for g in [&c2, &z2, &zmod, &prod] {
            let back = group_from_json(&group_to_json(g)).unwrap();
            assert_eq!(&back, g);
        }
        assert!(group_from_json(&json!({"kind": "septagonal"})).is_err());
    }

    #[test]
    fn scalars_roundtrip_exactly() {
        for s in [
            Scalar::from_ratio(-22, 7),
            Scalar::from_i64(Field::Q, 0),
            Scalar::gauss(3, -4),
            Scalar::from_i64(Field::Fp(5), 9),
        ] {
            assert_eq!(scalar_from_json(&scalar_to_json(&s)).unwrap(), s);
        }
        // big numerators survive the string encoding
        let big = Scalar::Q(BigRational::new(
            BigInt::from_str("123456789012345678901234567890").unwrap(),
            BigInt::from(7),
        ));
        assert_eq!(scalar_from_json(&scalar_to_json(&big)).unwrap(), big);
    }

    #[test]
    fn elements_group_coefficients_by_degree() {
        // a two-sided element with both components at the identity degree
        let ring = exf();
        let a = ring
            .monomial(Atom::Side(0, Box::new(Atom::Deg(GroupElem::T(0)))), Scalar::from_i64(Field::Q, 2))
            .unwrap();
        let b = ring
            .monomial(Atom::Side(1, Box::new(Atom::Deg(GroupElem::T(0)))), Scalar::from_i64(Field::Q, 5))
            .unwrap();
        let e = ring.add(&a, &b);
        let v = element_to_json(&ring, &e);
        let parts = v.as_array().unwrap();
        assert_eq!(parts.len(), 1, "one occupied degree");
        assert_eq!(parts[0]["coeffs"].as_array().unwrap().len(), 2, "two atoms at that degree");
        assert_eq!(element_from_json(&ring, &v).unwrap(), e);

        // dual-number atoms keep their x-marker
        let d = tx();
        let x = d
            .monomial(Atom::Dual(GroupElem::V(vec![0]), true), Scalar::from_i64(Field::Q, 1))
            .unwrap();
        let t = d.monomial(Atom::Dual(GroupElem::V(vec![2]), false), Scalar::from_ratio(1, 3)).unwrap();
        let mixed = d.add(&x, &t);
        assert_eq!(element_from_json(&d, &element_to_json(&d, &mixed)).unwrap(), mixed);

        // degree tags are cross-checked
        let mut forged = element_to_json(&ring, &e);
        forged[0]["deg"] = degree_to_json(&GroupElem::T(1));
        assert!(element_from_json(&ring, &forged).is_err());
    }

    #[test]
    fn matrices_roundtrip_and_flag_bad_cells() {
        let view = RingView::plain(ql());
        let mut s = Sampler::new(9);
        for _ in 0..10 {
            let a = s.hmatrix(&view, 3, 2);
            let back = matrix_from_json(&view, &matrix_to_json(&a)).unwrap();
            assert_eq!(back, a);
        }
        // entry degree that contradicts the distributions → cell report
        let good = HMatrix::new(
            view.clone(),
            DegSeq::new(vec![zd(1)]),
            DegSeq::new(vec![zd(0)]),
            vec![ql().monomial(Atom::Deg(zd(1)), Scalar::from_i64(Field::Q, 1)).unwrap()],
        )
        .unwrap();
        let mut doc = matrix_to_json(&good);
        doc["beta"] = json!([[4]]);
        match matrix_from_json(&view, &doc) {
            Err(JsonError::Distribution(msg)) => assert!(msg.contains("(0,0)"), "cell report: {msg}"),
            other => panic!("expected a distribution violation, got {other:?}"),
        }
        // structurally broken input is a schema error instead
        assert!(matches!(
            matrix_from_json(&view, &json!({"alpha": [[0]], "rows": []})),
            Err(JsonError::Schema(_))
        ));
        assert!(matches!(
            matrix_from_json(&view, &json!({"alpha": [[0]], "beta": [[0]], "rows": []})),
            Err(JsonError::Schema(_))
        ));
    }

    #[test]
    fn views_and_documents_roundtrip() {
        let plain = RingView::plain(sk());
        assert_eq!(view_from_json(&view_to_json(&plain)).unwrap(), plain);
        let even = ql()
            .group()
            .clone()
            .quotient(SubgroupSpec::Lattice(vec![vec![2]]))
            .unwrap();
        let coarse = RingView::regraded(ql(), even).unwrap();
        assert_eq!(view_from_json(&view_to_json(&coarse)).unwrap(), coarse);
        assert_eq!(view_from_json(&json!("catalog:Q2")).unwrap(), RingView::plain(q2()));
        assert_eq!(view_from_json(&json!("exf")).unwrap(), RingView::plain(exf()));
        assert!(view_from_json(&json!("catalog:Z9")).is_err());

        let doc = document("matrix", vec![("ring", json!("QL"))]);
        let (kind, body) = open_document(&doc).unwrap();
        assert_eq!(kind, "matrix");
        assert_eq!(body.get("ring").unwrap(), &json!("QL"));
        assert!(open_document(&json!({"schema": "grlin/0", "kind": "x"})).is_err());
    }

    #[test]
    fn certificates_and_tuples_roundtrip() {
        let view = RingView::plain(q2());
        let cert = trivial_kernel_cert(&view);
        let back = malcolmson_from_json(&view, &malcolmson_to_json(&cert)).unwrap();
        assert_eq!(back, cert);

        let qp_view = RingView::plain(qp());
        let t_gen = qp().monomial(Atom::Deg(zd(1)), Scalar::from_i64(Field::Q, 1)).unwrap();
        let f = HMatrix::new(
            qp_view.clone(),
            DegSeq::new(vec![zd(-1)]),
            DegSeq::new(vec![zd(-1)]),
            vec![qp().one()],
        )
        .unwrap();
        let a = HMatrix::new(
            qp_view.clone(),
            DegSeq::new(vec![zd(0)]),
            DegSeq::new(vec![zd(-1)]),
            vec![t_gen.clone()],
        )
        .unwrap();
        let x = HMatrix::new(
            qp_view.clone(),
            DegSeq::new(vec![zd(0)]),
            DegSeq::new(vec![zd(0)]),
            vec![qp().one()],
        )
        .unwrap();
        let tuple = LocTuple::new(f, a.clone(), x).unwrap();
        let back = tuple_from_json(&qp_view, &tuple_to_json(&tuple)).unwrap();
        assert_eq!(back, tuple);

        // a tuple whose X column has the wrong distribution is flagged
        // as a distribution problem, not a parse problem
        let mut doc = tuple_to_json(&tuple);
        doc["x"]["alpha"] = json!([[7]]);
        assert!(matches!(tuple_from_json(&qp_view, &doc), Err(JsonError::Distribution(_))));

        let ql_view = RingView::plain(ql());
        let u = HMatrix::new(
            ql_view.clone(),
            DegSeq::new(vec![zd(0), zd(-1)]),
            DegSeq::new(vec![zd(0)]),
            vec![ql().one(), ql().monomial(Atom::Deg(zd(-1)), Scalar::from_i64(Field::Q, 1)).unwrap()],
        )
        .unwrap();
        let sys_a = HMatrix::new(
            qp_view.clone(),
            DegSeq::new(vec![zd(0)]),
            DegSeq::new(vec![zd(0), zd(-1)]),
            vec![qp().neg(&qp().one()), t_gen],
        )
        .unwrap();
        let sys = ClosureSystem::new(sys_a, u).unwrap();
        let back = closure_from_json(&qp_view, &ql_view, &closure_to_json(&sys)).unwrap();
        assert_eq!(back, sys);
    }

    #[test]
    fn derivation_trees_roundtrip() {
        let view = RingView::plain(q2());
        let e = view.group().identity();
        let zero = HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 1), DegSeq::uniform(e.clone(), 1));
        let leaf_target = HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 2), DegSeq::uniform(e.clone(), 2));
        let witness = FactorizationWitness {
            p: HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 2), DegSeq::uniform(e.clone(), 1)),
            q: HMatrix::zero(view.clone(), DegSeq::uniform(e.clone(), 1), DegSeq::uniform(e.clone(), 2)),
        };
        let tree = CertNode::DetSum {
            target: zero.clone(),
            axis: Axis::Row,
            line: 0,
            left: Box::new(CertNode::Hollow { target: leaf_target.clone(), rows: vec![0, 1], cols: vec![0] }),
            right: Box::new(CertNode::NonFull { target: leaf_target, witness }),
        };
        let back = derivation_from_json(&view, &derivation_to_json(&tree)).unwrap();
        assert_eq!(back, tree);
        let gen = CertNode::Generator {
            target: zero.clone(),
            index: 2,
            pad: zero,
            row_perm: vec![0],
            col_perm: vec![0],
        };
        let back = derivation_from_json(&view, &derivation_to_json(&gen)).unwrap();
        assert_eq!(back, gen);
    }

    #[test]
    fn reports_expose_the_pinned_keys() {
        let ok = VerifyReport { checked: 12, failures: vec![] };
        let v = report_to_json(&ok);
        assert_eq!(v, json!({"checked": 12, "passed": true}));
        let bad_rep = VerifyReport { checked: 3, failures: vec!["axis broke".into()] };
        let v = report_to_json(&bad_rep);
        assert_eq!(v["passed"], json!(false));
        assert_eq!(v["counterexample"], json!("axis broke"));
    }
}
