//! JSON channel documents: `{"kind", "d_in", "d_out", "payload", "metadata"}`.
//!
//! Complex scalars are `[re, im]` pairs and matrices are arrays of rows.
//! Parsing walks the JSON by hand so that every malformed field is reported
//! with its location.

use std::collections::BTreeMap;
use std::fmt;

use qchan_core::reprs::HolevoPair;
use qchan_core::{ChoiMatrix, ComplexMatrix, HolevoForm, KrausRep, StinespringRep, Tolerance, ZooSpec, C64};
use serde_json::{json, Map, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Kraus,
    Choi,
    Holevo,
    Stinespring,
    Zoo,
}

impl Kind {
    pub const ALL: [Kind; 5] = [Kind::Kraus, Kind::Choi, Kind::Holevo, Kind::Stinespring, Kind::Zoo];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Kraus => "kraus",
            Kind::Choi => "choi",
            Kind::Holevo => "holevo",
            Kind::Stinespring => "stinespring",
            Kind::Zoo => "zoo",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Kraus(KrausRep),
    Choi(ChoiMatrix),
    Holevo(HolevoForm),
    Stinespring(StinespringRep),
    Zoo(ZooSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelDocument {
    pub d_in: usize,
    pub d_out: usize,
    pub payload: Payload,
    pub metadata: BTreeMap<String, String>,
}

fn parse_err(path: impl Into<String>, msg: impl Into<String>) -> CliError {
    CliError::Parse { path: path.into(), message: msg.into() }
}

fn describe(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, CliError> {
    obj.get(key).ok_or_else(|| parse_err(join(path, key), "missing field"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| parse_err(path, format!("expected an object, found {}", describe(v))))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| parse_err(path, format!("expected an array, found {}", describe(v))))
}

fn dimension(v: &Value, path: &str) -> Result<usize, CliError> {
    match v.as_u64() {
        Some(n) if n > 0 => usize::try_from(n).map_err(|_| parse_err(path, "dimension too large")),
        _ => Err(parse_err(path, format!("expected a positive integer, found {v}"))),
    }
}

fn number(v: &Value, path: &str) -> Result<f64, CliError> {
    v.as_f64().ok_or_else(|| parse_err(path, format!("expected a number, found {}", describe(v))))
}

fn scalar(v: &Value, path: &str) -> Result<C64, CliError> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(C64::new(number(re, &format!("{path}[0]"))?, number(im, &format!("{path}[1]"))?)),
        _ => Err(parse_err(path, format!("expected an [re, im] pair, found {}", describe(v)))),
    }
}

/// Matrix as an array of rows, with the expected shape checked.
fn matrix(v: &Value, path: &str, shape: (usize, usize)) -> Result<ComplexMatrix, CliError> {
    let rows = array(v, path)?;
    if rows.len() != shape.0 {
        return Err(CliError::Dims(format!("{path}: {} rows, expected {}", rows.len(), shape.0)));
    }
    let mut data = Vec::with_capacity(shape.0);
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let cells = array(row, &rp)?;
        if cells.len() != shape.1 {
            return Err(CliError::Dims(format!("{rp}: {} columns, expected {}", cells.len(), shape.1)));
        }
        data.push(
            cells.iter().enumerate().map(|(j, z)| scalar(z, &format!("{rp}[{j}]"))).collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(ComplexMatrix::from_rows(&data)?)
}

/// Matrix of unknown shape (rows must still agree).
fn any_matrix(v: &Value, path: &str) -> Result<ComplexMatrix, CliError> {
    let rows = array(v, path)?;
    let first = rows.first().ok_or_else(|| parse_err(path, "matrix has no rows"))?;
    let cols = array(first, &format!("{path}[0]"))?.len();
    matrix(v, path, (rows.len(), cols))
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    serde_json::to_value(m).expect("matrices serialize")
}

impl ChannelDocument {
    pub fn kind(&self) -> Kind {
        match self.payload {
            Payload::Kraus(_) => Kind::Kraus,
            Payload::Choi(_) => Kind::Choi,
            Payload::Holevo(_) => Kind::Holevo,
            Payload::Stinespring(_) => Kind::Stinespring,
            Payload::Zoo(_) => Kind::Zoo,
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.metadata.get("name").map(String::as_str)
    }

    pub fn from_kraus(k: KrausRep) -> Self {
        Self { d_in: k.d_in(), d_out: k.d_out(), payload: Payload::Kraus(k), metadata: BTreeMap::new() }
    }

    pub fn from_holevo(h: HolevoForm) -> Self {
        Self { d_in: h.d_in(), d_out: h.d_out(), payload: Payload::Holevo(h), metadata: BTreeMap::new() }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn parse_str(text: &str, tol: &Tolerance) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        Self::parse_value(&v, tol)
    }

    pub fn parse_value(v: &Value, tol: &Tolerance) -> Result<Self, CliError> {
        let obj = object(v, "document")?;
        for key in obj.keys() {
            if !["kind", "d_in", "d_out", "payload", "metadata"].contains(&key.as_str()) {
                return Err(parse_err(key.clone(), "unknown field"));
            }
        }
        let kind_v = field(obj, "kind", "")?;
        let kind_s = kind_v
            .as_str()
            .ok_or_else(|| parse_err("kind", format!("expected a string, found {}", describe(kind_v))))?;
        let kind = Kind::parse(kind_s).ok_or_else(|| {
            let names: Vec<_> = Kind::ALL.iter().map(|k| k.name()).collect();
            parse_err("kind", format!("unknown kind '{kind_s}', expected one of {}", names.join(", ")))
        })?;
        let d_in = dimension(field(obj, "d_in", "")?, "d_in")?;
        let d_out = dimension(field(obj, "d_out", "")?, "d_out")?;
        let metadata = match obj.get("metadata") {
            None | Some(Value::Null) => BTreeMap::new(),
            Some(m) => object(m, "metadata")?
                .iter()
                .map(|(k, v)| match v {
                    Value::String(s) => Ok((k.clone(), s.clone())),
                    Value::Number(_) | Value::Bool(_) => Ok((k.clone(), v.to_string())),
                    _ => Err(parse_err(format!("metadata.{k}"), format!("expected a string, found {}", describe(v)))),
                })
                .collect::<Result<_, _>>()?,
        };
        let p = field(obj, "payload", "")?;
        let payload = match kind {
            Kind::Kraus => {
                let ops = array(p, "payload")?
                    .iter()
                    .enumerate()
                    .map(|(i, m)| matrix(m, &format!("payload[{i}]"), (d_out, d_in)))
                    .collect::<Result<Vec<_>, _>>()?;
                Payload::Kraus(KrausRep::new(d_in, d_out, ops)?)
            }
            Kind::Choi => {
                let n = d_in * d_out;
                Payload::Choi(ChoiMatrix::new(d_in, d_out, matrix(p, "payload", (n, n))?, tol)?)
            }
            Kind::Stinespring => {
                let a = any_matrix(p, "payload")?;
                if a.cols() != d_in || a.rows() % d_out != 0 {
                    return Err(CliError::Dims(format!(
                        "payload: Stinespring operator is {}x{}, expected (d_out * env)x{d_in} with d_out = {d_out}",
                        a.rows(),
                        a.cols()
                    )));
                }
                Payload::Stinespring(StinespringRep::new(d_in, d_out, a.rows() / d_out, a)?)
            }
            Kind::Holevo => {
                let pairs = array(p, "payload")?
                    .iter()
                    .enumerate()
                    .map(|(i, pair)| {
                        let path = format!("payload[{i}]");
                        let o = object(pair, &path)?;
                        Ok(HolevoPair {
                            f: matrix(field(o, "f", &path)?, &join(&path, "f"), (d_in, d_in))?,
                            r: matrix(field(o, "r", &path)?, &join(&path, "r"), (d_out, d_out))?,
                        })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Payload::Holevo(HolevoForm::new(pairs, tol)?)
            }
            Kind::Zoo => {
                let spec: ZooSpec =
                    serde_json::from_value(p.clone()).map_err(|e| CliError::Params(format!("payload: {e}")))?;
                let k = spec.build(tol)?.kraus(tol)?;
                if (k.d_in(), k.d_out()) != (d_in, d_out) {
                    return Err(CliError::Dims(format!(
                        "payload: {} generates a {}->{} channel, document declares {d_in}->{d_out}",
                        spec.family(),
                        k.d_in(),
                        k.d_out()
                    )));
                }
                Payload::Zoo(spec)
            }
        };
        Ok(Self { d_in, d_out, payload, metadata })
    }

    pub fn to_value(&self) -> Value {
        let payload = match &self.payload {
            Payload::Kraus(k) => Value::Array(k.ops().iter().map(matrix_json).collect()),
            Payload::Choi(c) => matrix_json(c.mat()),
            Payload::Stinespring(s) => matrix_json(s.a()),
            Payload::Holevo(h) => Value::Array(
                h.pairs().iter().map(|p| json!({ "f": matrix_json(&p.f), "r": matrix_json(&p.r) })).collect(),
            ),
            Payload::Zoo(z) => serde_json::to_value(z).expect("zoo specs serialize"),
        };
        json!({
            "kind": self.kind().name(),
            "d_in": self.d_in,
            "d_out": self.d_out,
            "payload": payload,
            "metadata": self.metadata,
        })
    }

    pub fn to_json(&self) -> String {
        crate::report::to_json_string(&self.to_value())
    }

    /// Kraus operators of the channel the document describes.
    pub fn kraus(&self, tol: &Tolerance) -> Result<KrausRep, CliError> {
        Ok(match &self.payload {
            Payload::Kraus(k) => k.clone(),
            Payload::Choi(c) => c.to_kraus(tol)?,
            Payload::Holevo(h) => h.to_kraus(tol)?,
            Payload::Stinespring(s) => s.channel()?,
            Payload::Zoo(z) => z.build(tol)?.kraus(tol)?,
        })
    }

    /// The Holevo form, when the document carries one directly or through
    /// a zoo generator.
    pub fn holevo(&self, tol: &Tolerance) -> Option<HolevoForm> {
        match &self.payload {
            Payload::Holevo(h) => Some(h.clone()),
            Payload::Zoo(z) => match z.build(tol).ok()? {
                qchan_core::zoo::Generated::Holevo(h) => Some(h),
                qchan_core::zoo::Generated::Kraus(_) => None,
            },
            _ => None,
        }
    }
}
