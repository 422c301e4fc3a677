//! JSON file formats and canonical serialization.
//!
//! All data is integral; reports use stable key order so byte-level diffs
//! are meaningful. Algebra references in hom-bearing files are either an
//! id string (resolved against a catalog) or an inline algebra object.
//!
//! Formats:
//! - algebra: `{ "id", "signature", "size", "tables": { symbol: nested } }`
//!   with constants as bare integers;
//! - preset: `{ "signature": { "name", "operations": [[symbol, arity]] },
//!   "axioms": [ { "lhs": term, "rhs": term } ] }` with terms as nested
//!   arrays `["symbol", arg...]` and variables `"x0", "x1", ...`;
//! - hom: `{ "source": ref, "target": ref, "map": [int] }`;
//! - sequence: `{ "k": hom, "f": hom }`;
//! - ladder: `{ "top": sequence, "bottom": sequence, "u", "a", "b" }`;
//! - diagram: `{ "objects": {name: ref}, "arrows": {name: hom-by-object-names},
//!   "relations": [[path, path]] }` with paths as arrow-name lists in
//!   target-to-source order and `[]` the identity;
//! - grid: `{ "objects": {"K": ref, ..., "B''": ref}, "arrows": {"k": hom,
//!   ..., "b'": hom} }` keyed by the twelve arrow names.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::{
    Element, Equation, FiniteAlgebra, OpTable, Signature, Term, VarietyPreset,
};
use crate::diagrams::{Diagram, DiagramArrow, Relation};
use crate::hom::Homomorphism;
use crate::lemmas::{Grid3x3, LadderDiagram};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {message}")]
    Semantic { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: invalid JSON: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn semantic(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Semantic {
        path: path.into(),
        message: message.into(),
    }
}

/// 64-bit FNV-1a over a byte slice.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Digest of a catalog: FNV over the canonical serialization of every
/// algebra in order.
pub fn catalog_hash(algebras: &[Arc<FiniteAlgebra>]) -> u64 {
    let mut bytes = Vec::new();
    for a in algebras {
        bytes.extend_from_slice(algebra_to_value(a).to_string().as_bytes());
        bytes.push(b'\n');
    }
    fnv1a64(&bytes)
}

// ---------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------

fn table_to_value(entries: &[Element], size: usize, arity: usize) -> Value {
    if arity == 0 {
        return json!(entries[0]);
    }
    let chunk = size.pow((arity - 1) as u32);
    Value::Array(
        entries
            .chunks(chunk)
            .map(|c| table_to_value(c, size, arity - 1))
            .collect(),
    )
}

pub fn algebra_to_value(a: &FiniteAlgebra) -> Value {
    let mut tables = Map::new();
    let ops: BTreeMap<&str, usize> = a
        .signature()
        .operations()
        .iter()
        .enumerate()
        .map(|(i, op)| (op.symbol.as_str(), i))
        .collect();
    for (sym, i) in ops {
        let op = &a.signature().operations()[i];
        tables.insert(
            sym.to_string(),
            table_to_value(a.tables()[i].entries(), a.size(), op.arity),
        );
    }
    json!({
        "id": a.id(),
        "signature": a.signature().name(),
        "size": a.size(),
        "tables": Value::Object(tables),
    })
}

pub fn signature_to_value(s: &Signature) -> Value {
    json!({
        "name": s.name(),
        "operations": s
            .operations()
            .iter()
            .map(|op| json!([op.symbol, op.arity]))
            .collect::<Vec<_>>(),
    })
}

pub fn term_to_value(t: &Term) -> Value {
    match t {
        Term::Var(i) => json!(format!("x{i}")),
        Term::App { symbol, args } => {
            let mut items = vec![json!(symbol)];
            items.extend(args.iter().map(term_to_value));
            Value::Array(items)
        }
    }
}

pub fn preset_to_value(p: &VarietyPreset) -> Value {
    json!({
        "signature": signature_to_value(p.signature()),
        "axioms": p
            .axioms()
            .iter()
            .map(|eq| json!({ "lhs": term_to_value(&eq.lhs), "rhs": term_to_value(&eq.rhs) }))
            .collect::<Vec<_>>(),
    })
}

pub fn hom_to_value(h: &Homomorphism) -> Value {
    json!({
        "source": h.source().id(),
        "target": h.target().id(),
        "map": h.map(),
    })
}

pub fn sequence_to_value(k: &Homomorphism, f: &Homomorphism) -> Value {
    json!({ "k": hom_to_value(k), "f": hom_to_value(f) })
}

pub fn ladder_to_value(d: &LadderDiagram) -> Value {
    json!({
        "top": sequence_to_value(&d.k, &d.f),
        "bottom": sequence_to_value(&d.kp, &d.fp),
        "u": hom_to_value(&d.u),
        "a": hom_to_value(&d.a),
        "b": hom_to_value(&d.b),
    })
}

pub const GRID_OBJECT_NAMES: [&str; 9] = ["K", "K'", "K''", "A", "A'", "A''", "B", "B'", "B''"];
pub const GRID_ARROW_NAMES: [&str; 12] = [
    "u", "u'", "a", "a'", "b", "b'", "k", "f", "k'", "f'", "k''", "f''",
];

pub fn grid_to_value(g: &Grid3x3) -> Value {
    let mut objects = Map::new();
    for (name, alg) in g.objects() {
        objects.insert(name.to_string(), algebra_to_value(alg));
    }
    let arrows: [(&str, &Homomorphism, &str, &str); 12] = [
        ("u", &g.u, "K", "K'"),
        ("u'", &g.up, "K'", "K''"),
        ("a", &g.a, "A", "A'"),
        ("a'", &g.ap, "A'", "A''"),
        ("b", &g.b, "B", "B'"),
        ("b'", &g.bp, "B'", "B''"),
        ("k", &g.k, "K", "A"),
        ("f", &g.f, "A", "B"),
        ("k'", &g.kp, "K'", "A'"),
        ("f'", &g.fp, "A'", "B'"),
        ("k''", &g.kpp, "K''", "A''"),
        ("f''", &g.fpp, "A''", "B''"),
    ];
    let mut arrow_map = Map::new();
    for (name, hom, src, dst) in arrows {
        arrow_map.insert(
            name.to_string(),
            json!({ "source": src, "target": dst, "map": hom.map() }),
        );
    }
    json!({ "objects": Value::Object(objects), "arrows": Value::Object(arrow_map) })
}

// ---------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------

fn as_object<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>, IoError> {
    v.as_object()
        .ok_or_else(|| schema(path, "expected an object"))
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str, path: &str) -> Result<&'v Value, IoError> {
    obj.get(key)
        .ok_or_else(|| schema(path, format!("missing field `{key}`")))
}

fn as_usize(v: &Value, path: &str) -> Result<usize, IoError> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn as_str<'v>(v: &'v Value, path: &str) -> Result<&'v str, IoError> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

fn parse_table(
    v: &Value,
    size: usize,
    arity: usize,
    path: &str,
    out: &mut Vec<Element>,
) -> Result<(), IoError> {
    if arity == 0 {
        let entry = as_usize(v, path)?;
        if entry >= size {
            return Err(schema(
                path,
                format!("entry {entry} out of range (size {size})"),
            ));
        }
        out.push(entry);
        return Ok(());
    }
    let arr = v
        .as_array()
        .ok_or_else(|| schema(path, "expected an array"))?;
    if arr.len() != size {
        return Err(schema(
            path,
            format!("expected {size} entries, found {}", arr.len()),
        ));
    }
    for (i, item) in arr.iter().enumerate() {
        parse_table(item, size, arity - 1, &format!("{path}[{i}]"), out)?;
    }
    Ok(())
}

/// Parse an algebra object against an expected signature.
pub fn algebra_from_value(
    v: &Value,
    signature: &Arc<Signature>,
    path: &str,
) -> Result<Arc<FiniteAlgebra>, IoError> {
    let obj = as_object(v, path)?;
    let id = as_str(field(obj, "id", path)?, &format!("{path}.id"))?;
    let sig_name = as_str(field(obj, "signature", path)?, &format!("{path}.signature"))?;
    if sig_name != signature.name() {
        return Err(semantic(
            format!("{path}.signature"),
            format!(
                "algebra declares signature `{sig_name}`, expected `{}`",
                signature.name()
            ),
        ));
    }
    let size = as_usize(field(obj, "size", path)?, &format!("{path}.size"))?;
    let tables_obj = as_object(field(obj, "tables", path)?, &format!("{path}.tables"))?;
    let mut tables = Vec::new();
    for op in signature.operations() {
        let tpath = format!("{path}.tables.{}", op.symbol);
        let tv = tables_obj
            .get(&op.symbol)
            .ok_or_else(|| schema(&tpath, "missing table"))?;
        let mut entries = Vec::new();
        parse_table(tv, size, op.arity, &tpath, &mut entries)?;
        tables.push(OpTable::new(op.arity, entries));
    }
    for key in tables_obj.keys() {
        if signature.op_index(key).is_none() {
            return Err(schema(
                format!("{path}.tables.{key}"),
                "not an operation of the signature",
            ));
        }
    }
    FiniteAlgebra::new(id, signature.clone(), size, tables)
        .map_err(|e| semantic(path, e.to_string()))
}

pub fn signature_from_value(v: &Value, path: &str) -> Result<Arc<Signature>, IoError> {
    let obj = as_object(v, path)?;
    let name = as_str(field(obj, "name", path)?, &format!("{path}.name"))?;
    let ops_val = field(obj, "operations", path)?
        .as_array()
        .ok_or_else(|| schema(format!("{path}.operations"), "expected an array"))?;
    let mut ops = Vec::new();
    for (i, op) in ops_val.iter().enumerate() {
        let opath = format!("{path}.operations[{i}]");
        let pair = op
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| schema(&opath, "expected [symbol, arity]"))?;
        ops.push((
            as_str(&pair[0], &opath)?.to_string(),
            as_usize(&pair[1], &opath)?,
        ));
    }
    Signature::new(name, ops).map_err(|e| semantic(path, e.to_string()))
}

pub fn term_from_value(v: &Value, path: &str) -> Result<Term, IoError> {
    match v {
        Value::String(s) => {
            let idx = s
                .strip_prefix('x')
                .and_then(|rest| rest.parse::<usize>().ok())
                .ok_or_else(|| {
                    schema(
                        path,
                        format!("`{s}` is not a variable; variables are \"x0\", \"x1\", ... and operations are written [\"{s}\", ...]"),
                    )
                })?;
            Ok(Term::var(idx))
        }
        Value::Array(items) => {
            let symbol = as_str(
                items
                    .first()
                    .ok_or_else(|| schema(path, "empty term application"))?,
                &format!("{path}[0]"),
            )?;
            let args = items[1..]
                .iter()
                .enumerate()
                .map(|(i, arg)| term_from_value(arg, &format!("{path}[{}]", i + 1)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Term::app(symbol, args))
        }
        _ => Err(schema(path, "expected a variable string or [symbol, ...]")),
    }
}

pub fn preset_from_value(v: &Value, path: &str) -> Result<VarietyPreset, IoError> {
    let obj = as_object(v, path)?;
    let signature = signature_from_value(
        field(obj, "signature", path)?,
        &format!("{path}.signature"),
    )?;
    let axioms_val = field(obj, "axioms", path)?
        .as_array()
        .ok_or_else(|| schema(format!("{path}.axioms"), "expected an array"))?;
    let mut axioms = Vec::new();
    for (i, ax) in axioms_val.iter().enumerate() {
        let apath = format!("{path}.axioms[{i}]");
        let axo = as_object(ax, &apath)?;
        axioms.push(Equation {
            lhs: term_from_value(field(axo, "lhs", &apath)?, &format!("{apath}.lhs"))?,
            rhs: term_from_value(field(axo, "rhs", &apath)?, &format!("{apath}.rhs"))?,
        });
    }
    VarietyPreset::new(signature, axioms).map_err(|e| semantic(path, e.to_string()))
}

/// Resolve an algebra reference: an id string looked up via `resolve`, or
/// an inline algebra object.
pub fn algebra_ref_from_value(
    v: &Value,
    signature: &Arc<Signature>,
    resolve: &dyn Fn(&str) -> Option<Arc<FiniteAlgebra>>,
    path: &str,
) -> Result<Arc<FiniteAlgebra>, IoError> {
    match v {
        Value::String(id) => resolve(id).ok_or_else(|| {
            semantic(
                path,
                format!("unknown algebra id `{id}` (not in the catalog)"),
            )
        }),
        Value::Object(_) => algebra_from_value(v, signature, path),
        _ => Err(schema(path, "expected an algebra id or object")),
    }
}

/// Parse a hom object `{source, target, map}`; the map is validated to be
/// a homomorphism, reporting the violated operation on failure.
pub fn hom_from_value(
    v: &Value,
    signature: &Arc<Signature>,
    resolve: &dyn Fn(&str) -> Option<Arc<FiniteAlgebra>>,
    path: &str,
) -> Result<Homomorphism, IoError> {
    let obj = as_object(v, path)?;
    let source = algebra_ref_from_value(
        field(obj, "source", path)?,
        signature,
        resolve,
        &format!("{path}.source"),
    )?;
    let target = algebra_ref_from_value(
        field(obj, "target", path)?,
        signature,
        resolve,
        &format!("{path}.target"),
    )?;
    let map_val = field(obj, "map", path)?
        .as_array()
        .ok_or_else(|| schema(format!("{path}.map"), "expected an array"))?;
    let map = map_val
        .iter()
        .enumerate()
        .map(|(i, e)| as_usize(e, &format!("{path}.map[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Homomorphism::new(source, target, map)
        .map_err(|e| semantic(format!("{path}.map"), format!("not a homomorphism: {e}")))
}

pub fn sequence_from_value(
    v: &Value,
    signature: &Arc<Signature>,
    resolve: &dyn Fn(&str) -> Option<Arc<FiniteAlgebra>>,
    path: &str,
) -> Result<(Homomorphism, Homomorphism), IoError> {
    let obj = as_object(v, path)?;
    let k = hom_from_value(field(obj, "k", path)?, signature, resolve, &format!("{path}.k"))?;
    let f = hom_from_value(field(obj, "f", path)?, signature, resolve, &format!("{path}.f"))?;
    Ok((k, f))
}

pub fn ladder_from_value(
    v: &Value,
    signature: &Arc<Signature>,
    resolve: &dyn Fn(&str) -> Option<Arc<FiniteAlgebra>>,
    path: &str,
) -> Result<LadderDiagram, IoError> {
    let obj = as_object(v, path)?;
    let (k, f) = sequence_from_value(
        field(obj, "top", path)?,
        signature,
        resolve,
        &format!("{path}.top"),
    )?;
    let (kp, fp) = sequence_from_value(
        field(obj, "bottom", path)?,
        signature,
        resolve,
        &format!("{path}.bottom"),
    )?;
    let u = hom_from_value(field(obj, "u", path)?, signature, resolve, &format!("{path}.u"))?;
    let a = hom_from_value(field(obj, "a", path)?, signature, resolve, &format!("{path}.a"))?;
    let b = hom_from_value(field(obj, "b", path)?, signature, resolve, &format!("{path}.b"))?;
    LadderDiagram::new(k, f, kp, fp, u, a, b).map_err(|e| semantic(path, e.to_string()))
}

/// Parse a diagram; commutativity of the asserted relations is enforced.
pub fn diagram_from_value(
    v: &Value,
    signature: &Arc<Signature>,
    resolve: &dyn Fn(&str) -> Option<Arc<FiniteAlgebra>>,
    path: &str,
) -> Result<Diagram, IoError> {
    let obj = as_object(v, path)?;
    let objects_val = as_object(field(obj, "objects", path)?, &format!("{path}.objects"))?;
    let mut objects = BTreeMap::new();
    for (name, ov) in objects_val {
        objects.insert(
            name.clone(),
            algebra_ref_from_value(ov, signature, resolve, &format!("{path}.objects.{name}"))?,
        );
    }
    let arrows_val = as_object(field(obj, "arrows", path)?, &format!("{path}.arrows"))?;
    let mut arrows = BTreeMap::new();
    for (name, av) in arrows_val {
        let apath = format!("{path}.arrows.{name}");
        let aobj = as_object(av, &apath)?;
        let src_name = as_str(field(aobj, "source", &apath)?, &format!("{apath}.source"))?;
        let dst_name = as_str(field(aobj, "target", &apath)?, &format!("{apath}.target"))?;
        let src = objects
            .get(src_name)
            .ok_or_else(|| semantic(&apath, format!("unknown object `{src_name}`")))?
            .clone();
        let dst = objects
            .get(dst_name)
            .ok_or_else(|| semantic(&apath, format!("unknown object `{dst_name}`")))?
            .clone();
        let map_val = field(aobj, "map", &apath)?
            .as_array()
            .ok_or_else(|| schema(format!("{apath}.map"), "expected an array"))?;
        let map = map_val
            .iter()
            .enumerate()
            .map(|(i, e)| as_usize(e, &format!("{apath}.map[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let hom = Homomorphism::new(src, dst, map)
            .map_err(|e| semantic(format!("{apath}.map"), format!("not a homomorphism: {e}")))?;
        arrows.insert(
            name.clone(),
            DiagramArrow {
                hom,
                source: src_name.to_string(),
                target: dst_name.to_string(),
            },
        );
    }
    let relations_val = field(obj, "relations", path)?
        .as_array()
        .ok_or_else(|| schema(format!("{path}.relations"), "expected an array"))?;
    let mut relations = Vec::new();
    for (i, rv) in relations_val.iter().enumerate() {
        let rpath = format!("{path}.relations[{i}]");
        let pair = rv
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| schema(&rpath, "expected [path, path]"))?;
        let parse_path = |pv: &Value, ppath: &str| -> Result<Vec<String>, IoError> {
            pv.as_array()
                .ok_or_else(|| schema(ppath, "expected an array of arrow names"))?
                .iter()
                .enumerate()
                .map(|(j, nv)| Ok(as_str(nv, &format!("{ppath}[{j}]"))?.to_string()))
                .collect()
        };
        relations.push(Relation {
            lhs: parse_path(&pair[0], &format!("{rpath}[0]"))?,
            rhs: parse_path(&pair[1], &format!("{rpath}[1]"))?,
        });
    }
    Diagram::new(objects, arrows, relations).map_err(|e| semantic(path, e.to_string()))
}

pub fn grid_from_value(
    v: &Value,
    signature: &Arc<Signature>,
    resolve: &dyn Fn(&str) -> Option<Arc<FiniteAlgebra>>,
    path: &str,
) -> Result<Grid3x3, IoError> {
    let obj = as_object(v, path)?;
    let objects_val = as_object(field(obj, "objects", path)?, &format!("{path}.objects"))?;
    let mut objects: BTreeMap<String, Arc<FiniteAlgebra>> = BTreeMap::new();
    for name in GRID_OBJECT_NAMES {
        let opath = format!("{path}.objects.{name}");
        let ov = objects_val
            .get(name)
            .ok_or_else(|| schema(&opath, "missing grid object"))?;
        objects.insert(
            name.to_string(),
            algebra_ref_from_value(ov, signature, resolve, &opath)?,
        );
    }
    let arrows_val = as_object(field(obj, "arrows", path)?, &format!("{path}.arrows"))?;
    let endpoints: BTreeMap<&str, (&str, &str)> = [
        ("u", ("K", "K'")),
        ("u'", ("K'", "K''")),
        ("a", ("A", "A'")),
        ("a'", ("A'", "A''")),
        ("b", ("B", "B'")),
        ("b'", ("B'", "B''")),
        ("k", ("K", "A")),
        ("f", ("A", "B")),
        ("k'", ("K'", "A'")),
        ("f'", ("A'", "B'")),
        ("k''", ("K''", "A''")),
        ("f''", ("A''", "B''")),
    ]
    .into_iter()
    .collect();
    let mut homs: BTreeMap<&str, Homomorphism> = BTreeMap::new();
    for name in GRID_ARROW_NAMES {
        let apath = format!("{path}.arrows.{name}");
        let av = arrows_val
            .get(name)
            .ok_or_else(|| schema(&apath, "missing grid arrow"))?;
        let aobj = as_object(av, &apath)?;
        let (src_name, dst_name) = endpoints[name];
        if let Ok(declared) = field(aobj, "source", &apath).and_then(|s| as_str(s, &apath)) {
            if declared != src_name {
                return Err(semantic(
                    &apath,
                    format!("arrow `{name}` must go {src_name} -> {dst_name}"),
                ));
            }
        }
        let map_val = field(aobj, "map", &apath)?
            .as_array()
            .ok_or_else(|| schema(format!("{apath}.map"), "expected an array"))?;
        let map = map_val
            .iter()
            .enumerate()
            .map(|(i, e)| as_usize(e, &format!("{apath}.map[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let hom = Homomorphism::new(objects[src_name].clone(), objects[dst_name].clone(), map)
            .map_err(|e| semantic(format!("{apath}.map"), format!("not a homomorphism: {e}")))?;
        homs.insert(name, hom);
    }
    Grid3x3::new(
        homs["u"].clone(),
        homs["u'"].clone(),
        homs["a"].clone(),
        homs["a'"].clone(),
        homs["b"].clone(),
        homs["b'"].clone(),
        homs["k"].clone(),
        homs["f"].clone(),
        homs["k'"].clone(),
        homs["f'"].clone(),
        homs["k''"].clone(),
        homs["f''"].clone(),
    )
    .map_err(|e| semantic(path, e.to_string()))
}

// ---------------------------------------------------------------------
// file wrappers
// ---------------------------------------------------------------------

pub fn read_json(path: &Path) -> Result<Value, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_algebra_file(
    path: &Path,
    signature: &Arc<Signature>,
) -> Result<Arc<FiniteAlgebra>, IoError> {
    algebra_from_value(&read_json(path)?, signature, &path.display().to_string())
}

pub fn parse_preset_file(path: &Path) -> Result<VarietyPreset, IoError> {
    preset_from_value(&read_json(path)?, &path.display().to_string())
}

pub fn parse_hom_file(
    path: &Path,
    signature: &Arc<Signature>,
    resolve: &dyn Fn(&str) -> Option<Arc<FiniteAlgebra>>,
) -> Result<Homomorphism, IoError> {
    hom_from_value(
        &read_json(path)?,
        signature,
        resolve,
        &path.display().to_string(),
    )
}

pub fn parse_sequence_file(
    path: &Path,
    signature: &Arc<Signature>,
    resolve: &dyn Fn(&str) -> Option<Arc<FiniteAlgebra>>,
) -> Result<(Homomorphism, Homomorphism), IoError> {
    sequence_from_value(
        &read_json(path)?,
        signature,
        resolve,
        &path.display().to_string(),
    )
}

pub fn parse_ladder_file(
    path: &Path,
    signature: &Arc<Signature>,
    resolve: &dyn Fn(&str) -> Option<Arc<FiniteAlgebra>>,
) -> Result<LadderDiagram, IoError> {
    ladder_from_value(
        &read_json(path)?,
        signature,
        resolve,
        &path.display().to_string(),
    )
}

pub fn parse_diagram_file(
    path: &Path,
    signature: &Arc<Signature>,
    resolve: &dyn Fn(&str) -> Option<Arc<FiniteAlgebra>>,
) -> Result<Diagram, IoError> {
    diagram_from_value(
        &read_json(path)?,
        signature,
        resolve,
        &path.display().to_string(),
    )
}

pub fn parse_grid_file(
    path: &Path,
    signature: &Arc<Signature>,
    resolve: &dyn Fn(&str) -> Option<Arc<FiniteAlgebra>>,
) -> Result<Grid3x3, IoError> {
    grid_from_value(
        &read_json(path)?,
        signature,
        resolve,
        &path.display().to_string(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn algebra_roundtrip() {
        let z4 = catalog::cyclic_ring(4);
        let v = algebra_to_value(&z4);
        let back = algebra_from_value(&v, z4.signature(), "test").unwrap();
        assert_eq!(*back, *z4);
    }

    #[test]
    fn preset_roundtrip() {
        for p in [
            catalog::ring1(),
            catalog::bool_preset(),
            catalog::heyting_preset(),
            catalog::mv_preset(),
        ] {
            let v = preset_to_value(&p);
            let back = preset_from_value(&v, "test").unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn table_entry_out_of_range_names_the_path() {
        let z2 = catalog::cyclic_ring(2);
        let mut v = algebra_to_value(&z2);
        v["tables"]["mul"][1][1] = serde_json::json!(7);
        let err = algebra_from_value(&v, z2.signature(), "f").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("f.tables.mul[1][1]"), "got: {msg}");
        assert!(msg.contains("out of range"), "got: {msg}");
    }

    #[test]
    fn hom_file_with_broken_constant_is_semantic_error() {
        let z2 = catalog::cyclic_ring(2);
        let resolve = |id: &str| (id == "Z2").then(|| z2.clone());
        let v = serde_json::json!({ "source": "Z2", "target": "Z2", "map": [0, 0] });
        let err = hom_from_value(&v, z2.signature(), &resolve, "h").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("one"), "got: {msg}");
    }

    #[test]
    fn grid_roundtrip() {
        let b8 = catalog::boolean_algebra(3);
        let theta = crate::algebra::Congruence::from_partition(
            b8.clone(),
            (0..8).map(|x| x & 0b011).collect(),
        )
        .unwrap();
        let psi = crate::algebra::Congruence::from_partition(
            b8.clone(),
            (0..8).map(|x| x & 0b110).collect(),
        )
        .unwrap();
        let g = crate::lemmas::generate_grid(&b8, &theta, &psi).unwrap();
        let v = grid_to_value(&g);
        let resolve = |_: &str| None;
        let back = grid_from_value(&v, b8.signature(), &resolve, "grid").unwrap();
        assert_eq!(back.object_sizes(), g.object_sizes());
        assert_eq!(back.f.map(), g.f.map());
    }

    #[test]
    fn hash_is_stable_and_input_sensitive() {
        let one = vec![catalog::cyclic_ring(2)];
        let two = vec![catalog::cyclic_ring(3)];
        assert_eq!(catalog_hash(&one), catalog_hash(&one));
        assert_ne!(catalog_hash(&one), catalog_hash(&two));
    }
}
