//! Instance files.
//!
//! JSON: `{"n": 3, "weights": [[0, 1, 0], …]}` (dense) or
//! `{"n": 3, "triplets": [[1, 2, 1]]}` (sparse, 1-based voter/candidate),
//! optionally with `"k"`. A tuple of job matrices uses
//! `{"n": 3, "m": 2, "jobs": [{"weights": …}, {"triplets": …}]}`.
//!
//! CSV: a header line `n` (or `n,m`), followed by `m·n` rows of `n`
//! comma-separated weights, job after job. Lines starting with `#` are
//! comments.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::{Agent, InstanceTuple, WeightMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }

    fn sniff(text: &str) -> Self {
        if text.trim_start().starts_with('{') {
            Format::Json
        } else {
            Format::Csv
        }
    }
}

/// A parsed instance: one matrix per job plus an optional `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub tuple: InstanceTuple,
    pub k: Option<usize>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.tuple.n()
    }

    /// The single matrix of a one-job instance.
    pub fn matrix(&self) -> Result<&WeightMatrix> {
        if self.tuple.m() != 1 {
            return Err(Error::precondition(format!(
                "expected a single weight matrix, found {} jobs",
                self.tuple.m()
            )));
        }
        Ok(self.tuple.job(1))
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonMatrix {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    triplets: Option<Vec<(Agent, Agent, f64)>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonInstance {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(flatten)]
    matrix: JsonMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    jobs: Option<Vec<JsonMatrix>>,
}

pub fn parse_instance_file(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    let format = Format::from_path(path).unwrap_or_else(|| Format::sniff(&text));
    parse_instance(&text, format)
}

pub fn parse_instance(text: &str, format: Format) -> Result<Instance> {
    match format {
        Format::Json => parse_json(text),
        Format::Csv => parse_csv(text),
    }
}

fn parse_json(text: &str) -> Result<Instance> {
    let doc: JsonInstance = serde_json::from_str(text).map_err(|e| {
        Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })?;
    let n = doc.n;
    let has_single = doc.matrix.weights.is_some() || doc.matrix.triplets.is_some();
    let matrices = match (&doc.jobs, has_single) {
        (Some(_), true) => {
            return Err(Error::parse(
                "document",
                "give either a single matrix or \"jobs\", not both",
            ))
        }
        (Some(jobs), false) => jobs
            .iter()
            .enumerate()
            .map(|(l, job)| json_matrix(n, job, &format!("jobs[{l}]")))
            .collect::<Result<Vec<_>>>()?,
        (None, true) => vec![json_matrix(n, &doc.matrix, "document")?],
        (None, false) => {
            return Err(Error::parse(
                "document",
                "missing \"weights\", \"triplets\" or \"jobs\"",
            ))
        }
    };
    if let Some(m) = doc.m {
        if m != matrices.len() {
            return Err(Error::parse(
                "field \"m\"",
                format!("m = {m} but {} job matrices given", matrices.len()),
            ));
        }
    }
    Ok(Instance {
        tuple: InstanceTuple::new(matrices)?,
        k: doc.k,
    })
}

fn json_matrix(n: usize, m: &JsonMatrix, location: &str) -> Result<WeightMatrix> {
    match (&m.weights, &m.triplets) {
        (Some(rows), None) => {
            if rows.len() != n {
                return Err(Error::parse(
                    location,
                    format!("{} rows given, expected n = {n}", rows.len()),
                ));
            }
            WeightMatrix::from_rows(rows)
        }
        (None, Some(triplets)) => WeightMatrix::from_triplets(n, triplets.iter().copied()),
        _ => Err(Error::parse(
            location,
            "exactly one of \"weights\" or \"triplets\" is required",
        )),
    }
}

fn parse_csv(text: &str) -> Result<Instance> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let location = |rec: &csv::StringRecord| {
        rec.position()
            .map(|p| format!("line {}", p.line()))
            .unwrap_or_else(|| "unknown line".into())
    };
    let csv_err = |e: csv::Error| {
        let loc = e
            .position()
            .map(|p| format!("line {}", p.line()))
            .unwrap_or_else(|| "input".into());
        Error::parse(loc, e.to_string())
    };

    let header = records
        .next()
        .ok_or_else(|| Error::parse("line 1", "empty input, expected header `n` or `n,m`"))?
        .map_err(csv_err)?;
    let head: Vec<usize> = header
        .iter()
        .map(|f| {
            f.parse::<usize>()
                .map_err(|_| Error::parse(location(&header), format!("bad header field {f:?}")))
        })
        .collect::<Result<_>>()?;
    let (n, m) = match head.as_slice() {
        [n] => (*n, 1),
        [n, m] => (*n, *m),
        _ => {
            return Err(Error::parse(
                location(&header),
                "header must be `n` or `n,m`",
            ))
        }
    };
    if m == 0 {
        return Err(Error::parse(location(&header), "m must be positive"));
    }

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n * m);
    for rec in records {
        let rec = rec.map_err(csv_err)?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() != n {
            return Err(Error::parse(
                location(&rec),
                format!("{} fields, expected n = {n}", rec.len()),
            ));
        }
        let row = rec
            .iter()
            .enumerate()
            .map(|(c, f)| {
                f.parse::<f64>().map_err(|_| {
                    Error::parse(
                        format!("{}, field {}", location(&rec), c + 1),
                        format!("not a number: {f:?}"),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.len() != n * m {
        return Err(Error::parse(
            "end of input",
            format!("{} rows given, expected m·n = {}", rows.len(), n * m),
        ));
    }
    let matrices = rows
        .chunks(n.max(1))
        .take(m)
        .map(WeightMatrix::from_rows)
        .collect::<Result<Vec<_>>>()?;
    Ok(Instance {
        tuple: InstanceTuple::new(matrices)?,
        k: None,
    })
}

fn fmt_weight(w: f64) -> String {
    if w.fract() == 0.0 && w.abs() < 9.0e15 {
        format!("{}", w as i64)
    } else {
        format!("{w}")
    }
}

/// Dense CSV in the format read by [`parse_instance`].
pub fn to_csv(t: &InstanceTuple) -> String {
    let mut out = String::new();
    if t.m() == 1 {
        let _ = writeln!(out, "{}", t.n());
    } else {
        let _ = writeln!(out, "{},{}", t.n(), t.m());
    }
    for a in t.matrices() {
        for row in a.rows() {
            let line: Vec<String> = row.iter().map(|&w| fmt_weight(w)).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
    }
    out
}

/// JSON in the format read by [`parse_instance`]; `sparse` writes triplets.
pub fn to_json(instance: &Instance, sparse: bool) -> Result<String> {
    let t = &instance.tuple;
    let encode = |a: &WeightMatrix| {
        if sparse {
            let mut triplets = Vec::new();
            for i in 1..=a.n() {
                for j in 1..=a.n() {
                    let w = a.get(i, j);
                    if w != 0.0 {
                        triplets.push((i, j, w));
                    }
                }
            }
            JsonMatrix {
                weights: None,
                triplets: Some(triplets),
            }
        } else {
            JsonMatrix {
                weights: Some(a.rows().map(<[f64]>::to_vec).collect()),
                triplets: None,
            }
        }
    };
    let doc = if t.m() == 1 {
        JsonInstance {
            n: t.n(),
            m: None,
            k: instance.k,
            matrix: encode(t.job(1)),
            jobs: None,
        }
    } else {
        JsonInstance {
            n: t.n(),
            m: Some(t.m()),
            k: instance.k,
            matrix: JsonMatrix::default(),
            jobs: Some(t.matrices().iter().map(encode).collect()),
        }
    };
    let value = integralize(serde_json::to_value(&doc)?);
    Ok(serde_json::to_string(&value)?)
}

// prints integral weights without a trailing ".0"
fn integralize(v: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match v {
        Value::Number(num) => match num.as_f64() {
            Some(f) if num.is_f64() && f.fract() == 0.0 && f.abs() < 9.0e15 => {
                Value::from(f as i64)
            }
            _ => Value::Number(num),
        },
        Value::Array(items) => Value::Array(items.into_iter().map(integralize).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, integralize(v))).collect()),
        other => other,
    }
}
