//! JSON encoding of instances, objectives and results.
//!
//! Integers up to 2^53 in magnitude are plain JSON numbers; larger ones are
//! decimal strings. Both forms are accepted on input.

use std::collections::BTreeMap;

use bimatch::{Instance, Matching, Objective, ObjectiveKind, PNorm, Projection, Sense};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::CliError;

const SAFE_INTEGER: i64 = 1 << 53;

/// Parsed instance file. The objective is optional so that commands which
/// ignore it (polytope, decide) accept bare instances.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub objective: Option<Objective>,
}

fn invalid(path: &str, what: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("{path}: {what}"))
}

pub fn int_to_json(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) if x.abs() <= SAFE_INTEGER => Value::from(x),
        _ => Value::String(v.to_string()),
    }
}

pub fn ints_to_json(vs: &[BigInt]) -> Value {
    Value::Array(vs.iter().map(int_to_json).collect())
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_int(v: &Value, path: &str) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => {
            if let Some(x) = n.as_i64() {
                Ok(BigInt::from(x))
            } else if let Some(x) = n.as_u64() {
                Ok(BigInt::from(x))
            } else {
                Err(invalid(path, format!("expected an integer, found {n}")))
            }
        }
        Value::String(s) => s.trim().parse().map_err(|_| invalid(path, format!("expected an integer, found {s:?}"))),
        other => Err(invalid(path, format!("expected an integer, found {}", kind_name(other)))),
    }
}

fn parse_usize(v: &Value, path: &str) -> Result<usize, CliError> {
    let x = parse_int(v, path)?;
    usize::try_from(&x).map_err(|_| invalid(path, format!("expected a nonnegative size, found {x}")))
}

pub fn parse_int_vec(v: &Value, path: &str) -> Result<Vec<BigInt>, CliError> {
    as_array(v, path)?.iter().enumerate().map(|(i, x)| parse_int(x, &format!("{path}[{i}]"))).collect()
}

/// Integer, `"a/b"`, or a plain decimal such as `"1.25"`.
pub fn parse_rational(v: &Value, path: &str) -> Result<BigRational, CliError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        other => return Err(invalid(path, format!("expected a number, found {}", kind_name(other)))),
    };
    rational_from_str(&text).ok_or_else(|| invalid(path, format!("expected an exact number, found {text:?}")))
}

fn rational_from_str(s: &str) -> Option<BigRational> {
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        return (!q.is_zero()).then(|| BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("0{whole}{frac}").parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let q = BigRational::new(digits, scale);
    Some(if neg { -q } else { q })
}

fn kind_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| invalid(path, format!("expected an array, found {}", kind_name(v))))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| invalid(path, format!("expected an object, found {}", kind_name(v))))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, CliError> {
    obj.get(key).ok_or_else(|| invalid(&join(path, key), "missing"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

pub fn parse_sense(s: &str, path: &str) -> Result<Sense, CliError> {
    match s {
        "max" => Ok(Sense::Max),
        "min" => Ok(Sense::Min),
        other => Err(invalid(path, format!("expected \"max\" or \"min\", found {other:?}"))),
    }
}

pub fn sense_str(s: Sense) -> &'static str {
    match s {
        Sense::Max => "max",
        Sense::Min => "min",
    }
}

/// A positive integer or `"inf"`.
pub fn parse_p(v: &Value, path: &str) -> Result<PNorm, CliError> {
    if v.as_str().map(str::trim) == Some("inf") {
        return Ok(PNorm::Infinity);
    }
    let p = parse_int(v, path)?;
    u32::try_from(&p)
        .ok()
        .and_then(|p| PNorm::finite(p).ok())
        .ok_or_else(|| invalid(path, format!("expected a positive integer or \"inf\", found {p}")))
}

pub fn p_to_json(p: PNorm) -> Value {
    match p {
        PNorm::Finite(p) => Value::from(p),
        PNorm::Infinity => Value::from("inf"),
    }
}

pub fn parse_objective(v: &Value, path: &str) -> Result<Objective, CliError> {
    let obj = as_object(v, path)?;
    let kind_path = join(path, "kind");
    let kind = field(obj, "kind", path)?
        .as_str()
        .ok_or_else(|| invalid(&kind_path, "expected a string"))?;
    let sense_path = join(path, "sense");
    let sense = field(obj, "sense", path)?
        .as_str()
        .ok_or_else(|| invalid(&sense_path, "expected \"max\" or \"min\""))
        .and_then(|s| parse_sense(s, &sense_path))?;
    let kind = match kind {
        "lp_norm" => ObjectiveKind::LpNorm(parse_p(field(obj, "p", path)?, &join(path, "p"))?),
        "quadratic_distance" => ObjectiveKind::QuadraticDistance(parse_int_vec(field(obj, "u", path)?, &join(path, "u"))?),
        "linear" => ObjectiveKind::Linear(parse_int_vec(field(obj, "c", path)?, &join(path, "c"))?),
        "table" => {
            let entries_path = join(path, "entries");
            let mut values = BTreeMap::new();
            for (i, e) in as_array(field(obj, "entries", path)?, &entries_path)?.iter().enumerate() {
                let epath = format!("{entries_path}[{i}]");
                let eobj = as_object(e, &epath)?;
                let y = Projection(parse_int_vec(field(eobj, "y", &epath)?, &join(&epath, "y"))?);
                let value = parse_rational(field(eobj, "value", &epath)?, &join(&epath, "value"))?;
                if values.insert(y, value).is_some() {
                    return Err(invalid(&epath, "duplicate point"));
                }
            }
            let default = match obj.get("default") {
                Some(d) => parse_rational(d, &join(path, "default"))?,
                None => BigRational::zero(),
            };
            ObjectiveKind::Table { values, default }
        }
        other => {
            return Err(invalid(
                &kind_path,
                format!("unknown kind {other:?}; expected lp_norm, quadratic_distance, linear or table"),
            ))
        }
    };
    Ok(Objective::new(kind, sense))
}

pub fn objective_to_json(o: &Objective) -> Value {
    let mut m = Map::new();
    match o.kind() {
        ObjectiveKind::LpNorm(p) => {
            m.insert("kind".into(), "lp_norm".into());
            m.insert("p".into(), p_to_json(*p));
        }
        ObjectiveKind::QuadraticDistance(u) => {
            m.insert("kind".into(), "quadratic_distance".into());
            m.insert("u".into(), ints_to_json(u));
        }
        ObjectiveKind::Linear(c) => {
            m.insert("kind".into(), "linear".into());
            m.insert("c".into(), ints_to_json(c));
        }
        ObjectiveKind::Table { values, default } => {
            m.insert("kind".into(), "table".into());
            let entries = values
                .iter()
                .map(|(y, v)| json!({ "y": ints_to_json(y.coords()), "value": rational_to_string(v) }))
                .collect();
            m.insert("entries".into(), Value::Array(entries));
            m.insert("default".into(), rational_to_string(default).into());
        }
    }
    m.insert("sense".into(), sense_str(o.sense()).into());
    Value::Object(m)
}

fn objective_dimension(o: &Objective) -> Option<(usize, &'static str)> {
    match o.kind() {
        ObjectiveKind::LpNorm(_) => None,
        ObjectiveKind::QuadraticDistance(u) => Some((u.len(), "u")),
        ObjectiveKind::Linear(c) => Some((c.len(), "c")),
        ObjectiveKind::Table { values, .. } => values.keys().map(|y| (y.len(), "entries")).find(|_| true),
    }
}

pub fn parse_instance_file(text: &str) -> Result<InstanceFile, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("input: malformed JSON: {e}")))?;
    instance_file_from_json(&v)
}

pub fn instance_file_from_json(v: &Value) -> Result<InstanceFile, CliError> {
    let obj = as_object(v, "input")?;
    let n = parse_usize(field(obj, "n", "")?, "n")?;
    let d = parse_usize(field(obj, "d", "")?, "d")?;
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if d == 0 {
        return Err(invalid("d", "must be at least 1"));
    }
    let weights = as_array(field(obj, "weights", "")?, "weights")?;
    if weights.len() != d {
        return Err(invalid("weights", format!("expected {d} matrices, found {}", weights.len())));
    }
    let mut mats = Vec::with_capacity(d);
    for (k, w) in weights.iter().enumerate() {
        let wpath = format!("weights[{k}]");
        let rows = as_array(w, &wpath)?;
        if rows.len() != n {
            return Err(invalid(&wpath, format!("expected {n} rows, found {}", rows.len())));
        }
        let mut mat = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            let rpath = format!("{wpath}[{i}]");
            let row = parse_int_vec(row, &rpath)?;
            if row.len() != n {
                return Err(invalid(&rpath, format!("expected {n} entries, found {}", row.len())));
            }
            mat.push(row);
        }
        mats.push(mat);
    }
    let instance = Instance::new(n, d, mats).map_err(|e| invalid("weights", e))?;
    let objective = match obj.get("objective") {
        None | Some(Value::Null) => None,
        Some(o) => {
            let o = parse_objective(o, "objective")?;
            if let Some((len, key)) = objective_dimension(&o) {
                if len != d {
                    return Err(invalid(&format!("objective.{key}"), format!("expected length {d}, found {len}")));
                }
            }
            Some(o)
        }
    };
    Ok(InstanceFile { instance, objective })
}

/// Canonical form: sorted keys, integers per [`int_to_json`].
pub fn instance_file_to_json(f: &InstanceFile) -> Value {
    let mut m = Map::new();
    m.insert("n".into(), f.instance.n().into());
    m.insert("d".into(), f.instance.d().into());
    let weights = f
        .instance
        .to_nested()
        .iter()
        .map(|w| Value::Array(w.iter().map(|row| ints_to_json(row)).collect()))
        .collect();
    m.insert("weights".into(), Value::Array(weights));
    if let Some(o) = &f.objective {
        m.insert("objective".into(), objective_to_json(o));
    }
    Value::Object(m)
}

pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Solver output written to stdout.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultFile {
    pub matching: Matching,
    pub projection: Projection,
    pub value: Option<BigRational>,
    pub oracle_queries: u64,
    pub method: String,
    pub seed: Option<u64>,
    pub fibers_tested: Option<u64>,
    pub guaranteed_ratio: Option<String>,
}

impl ResultFile {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("matching".into(), json!(self.matching.to_one_based()));
        m.insert("projection".into(), ints_to_json(self.projection.coords()));
        if let Some(v) = &self.value {
            m.insert("value".into(), rational_to_string(v).into());
        }
        m.insert("oracle_queries".into(), self.oracle_queries.into());
        m.insert("method".into(), self.method.clone().into());
        if let Some(s) = self.seed {
            m.insert("seed".into(), s.into());
        }
        if let Some(f) = self.fibers_tested {
            m.insert("fibers_tested".into(), f.into());
        }
        if let Some(g) = &self.guaranteed_ratio {
            m.insert("guaranteed_ratio".into(), g.clone().into());
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self, CliError> {
        let obj = as_object(v, "result")?;
        let cols: Vec<usize> = as_array(field(obj, "matching", "")?, "matching")?
            .iter()
            .enumerate()
            .map(|(i, c)| parse_usize(c, &format!("matching[{i}]")))
            .collect::<Result<_, _>>()?;
        let matching = Matching::from_one_based(&cols).map_err(|e| invalid("matching", e))?;
        let projection = Projection(parse_int_vec(field(obj, "projection", "")?, "projection")?);
        let value = obj.get("value").map(|v| parse_rational(v, "value")).transpose()?;
        let oracle_queries = field(obj, "oracle_queries", "")?
            .as_u64()
            .ok_or_else(|| invalid("oracle_queries", "expected a nonnegative integer"))?;
        let method = field(obj, "method", "")?.as_str().ok_or_else(|| invalid("method", "expected a string"))?.to_string();
        let seed = obj.get("seed").map(|s| s.as_u64().ok_or_else(|| invalid("seed", "expected a u64"))).transpose()?;
        let fibers_tested = obj
            .get("fibers_tested")
            .map(|s| s.as_u64().ok_or_else(|| invalid("fibers_tested", "expected a u64")))
            .transpose()?;
        let guaranteed_ratio = obj.get("guaranteed_ratio").and_then(Value::as_str).map(str::to_string);
        Ok(Self { matching, projection, value, oracle_queries, method, seed, fibers_tested, guaranteed_ratio })
    }
}

/// `n × n × n` tensor of 0/1 (or booleans), indexed `x[i][j][k]`.
pub fn parse_tensor(v: &Value) -> Result<Vec<Vec<Vec<bool>>>, CliError> {
    let v = match v {
        Value::Object(o) => field(o, "x", "")?,
        other => other,
    };
    let planes = as_array(v, "x")?;
    let n = planes.len();
    if n == 0 {
        return Err(invalid("x", "must be nonempty"));
    }
    let mut x = Vec::with_capacity(n);
    for (i, plane) in planes.iter().enumerate() {
        let ppath = format!("x[{i}]");
        let rows = as_array(plane, &ppath)?;
        if rows.len() != n {
            return Err(invalid(&ppath, format!("expected {n} entries, found {}", rows.len())));
        }
        let mut p = Vec::with_capacity(n);
        for (j, row) in rows.iter().enumerate() {
            let rpath = format!("{ppath}[{j}]");
            let cells = as_array(row, &rpath)?;
            if cells.len() != n {
                return Err(invalid(&rpath, format!("expected {n} entries, found {}", cells.len())));
            }
            let r = cells
                .iter()
                .enumerate()
                .map(|(k, c)| match c {
                    Value::Bool(b) => Ok(*b),
                    other => {
                        let cpath = format!("{rpath}[{k}]");
                        let b = parse_int(other, &cpath)?;
                        if b.is_zero() {
                            Ok(false)
                        } else if b.is_one() {
                            Ok(true)
                        } else {
                            Err(invalid(&cpath, format!("expected 0 or 1, found {b}")))
                        }
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            p.push(r);
        }
        x.push(p);
    }
    Ok(x)
}

pub fn tensor_to_json(x: &[Vec<Vec<bool>>]) -> Value {
    let planes = x
        .iter()
        .map(|p| Value::Array(p.iter().map(|r| Value::Array(r.iter().map(|&b| Value::from(b as u8)).collect())).collect()))
        .collect();
    json!({ "x": Value::Array(planes) })
}

/// Comma-separated integers, e.g. `--target 2,4`.
pub fn parse_int_list(s: &str, flag: &str) -> Result<Vec<BigInt>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| invalid(flag, format!("expected an integer, found {t:?}"))))
        .collect()
}
