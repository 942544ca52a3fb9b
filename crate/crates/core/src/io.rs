//! Dataset CSV files and the bundled housing-data loader.
//!
//! Header `x,z,y,s,p` (multi-column inputs as `x1,x2,…`). Only `x` and `z`
//! are required. Missing outcomes are empty fields.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::PmarModel;
use crate::gpsim::Dataset;
use crate::numerics::{standardize, Matrix};

fn block_columns(header: &csv::StringRecord, name: &str) -> Vec<usize> {
    if let Some(i) = header.iter().position(|h| h == name) {
        return vec![i];
    }
    let mut out = Vec::new();
    for k in 1.. {
        match header.iter().position(|h| h == format!("{name}{k}")) {
            Some(i) => out.push(i),
            None => break,
        }
    }
    out
}

fn parse_f64(field: &str, line: usize, column: &str) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::Parse { line, msg: format!("column {column}: cannot parse {field:?} as a number") })?;
    if !v.is_finite() {
        return Err(Error::Parse { line, msg: format!("column {column}: non-finite value {field:?}") });
    }
    Ok(v)
}

pub fn read_dataset<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers()?.clone();
    let xc = block_columns(&header, "x");
    let zc = block_columns(&header, "z");
    let mut missing = Vec::new();
    if xc.is_empty() {
        missing.push("x".to_string());
    }
    if zc.is_empty() {
        missing.push("z".to_string());
    }
    if !missing.is_empty() {
        return Err(Error::Schema(missing));
    }
    let col = |name: &str| header.iter().position(|h| h == name);
    let (yc, sc, pc) = (col("y"), col("s"), col("p"));

    let (mut x, mut z) = (Vec::new(), Vec::new());
    let mut y: Vec<Option<f64>> = Vec::new();
    let mut s: Vec<bool> = Vec::new();
    let mut p: Vec<f64> = Vec::new();
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec?;
        // Header is line 1.
        let line = rec.position().map_or(rows + 2, |pos| pos.line() as usize);
        if rec.len() != header.len() {
            return Err(Error::Parse { line, msg: format!("expected {} fields, got {}", header.len(), rec.len()) });
        }
        for &i in &xc {
            x.push(parse_f64(&rec[i], line, &header[i])?);
        }
        for &i in &zc {
            z.push(parse_f64(&rec[i], line, &header[i])?);
        }
        if let Some(i) = yc {
            let f = rec[i].trim();
            y.push(if f.is_empty() { None } else { Some(parse_f64(f, line, "y")?) });
        }
        if let Some(i) = sc {
            s.push(match rec[i].trim() {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::SchemaValue {
                        line,
                        column: "s".into(),
                        msg: format!("{other:?} is not 0 or 1"),
                    })
                }
            });
        }
        if let Some(i) = pc {
            let v = parse_f64(&rec[i], line, "p")?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::SchemaValue { line, column: "p".into(), msg: format!("{v} is not in [0, 1]") });
            }
            p.push(v);
        }
        rows += 1;
    }
    Dataset::new(
        Matrix::new(rows, xc.len(), x)?,
        Matrix::new(rows, zc.len(), z)?,
        yc.map(|_| y),
        sc.map(|_| s),
        pc.map(|_| p),
    )
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    read_dataset(File::open(path)?)
}

fn block_header(name: &str, k: usize) -> Vec<String> {
    if k == 1 {
        vec![name.to_string()]
    } else {
        (1..=k).map(|i| format!("{name}{i}")).collect()
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `d`; unless `oracle`, outcomes of unselected rows are left empty.
pub fn write_dataset<W: Write>(d: &Dataset, writer: W, oracle: bool) -> Result<()> {
    let d = if oracle { d.clone() } else { d.without_oracle() };
    let mut w = csv::Writer::from_writer(writer);
    let mut header = block_header("x", d.x.cols());
    header.extend(block_header("z", d.z.cols()));
    for (name, present) in [("y", d.y.is_some()), ("s", d.s.is_some()), ("p", d.p.is_some())] {
        if present {
            header.push(name.to_string());
        }
    }
    w.write_record(&header)?;
    for i in 0..d.n() {
        let mut rec: Vec<String> = d.x.row(i).iter().chain(d.z.row(i)).map(|&v| fmt(v)).collect();
        if let Some(y) = &d.y {
            rec.push(y[i].map(fmt).unwrap_or_default());
        }
        if let Some(s) = &d.s {
            rec.push(if s[i] { "1" } else { "0" }.to_string());
        }
        if let Some(p) = &d.p {
            rec.push(fmt(p[i]));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_dataset(d: &Dataset, path: impl AsRef<Path>, oracle: bool) -> Result<()> {
    write_dataset(d, File::create(path)?, oracle)
}

/// Housing data with columns `rm`, `lstat`, `medv` mapped to `x`, `z`, `y`.
/// Column names are matched case-insensitively.
pub fn load_housing(path: impl AsRef<Path>, standardize_columns: bool) -> Result<Dataset> {
    let mut rdr = csv::Reader::from_reader(File::open(path)?);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_ascii_lowercase()).collect();
    let idx = |name: &str| header.iter().position(|h| h == name);
    let cols: Vec<Option<usize>> = ["rm", "lstat", "medv"].iter().map(|c| idx(c)).collect();
    let missing: Vec<String> = ["rm", "lstat", "medv"]
        .iter()
        .zip(&cols)
        .filter(|(_, c)| c.is_none())
        .map(|(n, _)| n.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::Schema(missing));
    }
    let cols: Vec<usize> = cols.into_iter().flatten().collect();
    let mut data = [Vec::new(), Vec::new(), Vec::new()];
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        for (k, &c) in cols.iter().enumerate() {
            let f = rec.get(c).ok_or_else(|| Error::Parse { line, msg: "short record".into() })?;
            data[k].push(parse_f64(f, line, &header[c])?);
        }
    }
    if standardize_columns {
        for col in data.iter_mut() {
            *col = standardize(col)?;
        }
    }
    let [x, z, y] = data;
    Dataset::new(
        Matrix::column(&x),
        Matrix::column(&z),
        Some(y.into_iter().map(Some).collect()),
        None,
        None,
    )
}

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    format_version: u32,
    model: PmarModel,
}

pub fn model_to_json(m: &PmarModel) -> Result<String> {
    let doc = ModelDocument { format_version: MODEL_FORMAT_VERSION, model: m.clone() };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

pub fn model_from_json(text: &str) -> Result<PmarModel> {
    let doc: ModelDocument = serde_json::from_str(text)?;
    if doc.format_version != MODEL_FORMAT_VERSION {
        return Err(Error::InvalidValue(format!("unsupported model format version {}", doc.format_version)));
    }
    Ok(doc.model)
}

pub fn save_model(m: &PmarModel, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, model_to_json(m)?)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<PmarModel> {
    model_from_json(&std::fs::read_to_string(path)?)
}
