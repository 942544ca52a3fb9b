//! Plain-text graph format.
//!
//! ```text
//! # comment
//! vertices: X, Y, Z, S
//! X -> Y
//! Y <-> S
//! ```
//!
//! The `vertices:` header is optional and defaults to `X, Y, Z, S`. Several
//! graphs can share a file, each introduced by a `--- graph <k> ---` line.

use super::admg::{Admg, DEFAULT_VERTICES};
use crate::error::{Error, Result};

pub fn parse_graph(text: &str) -> Result<Admg> {
    parse_block(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
}

pub fn parse_graphs(text: &str) -> Result<Vec<Admg>> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    let separators: Vec<usize> = lines
        .iter()
        .enumerate()
        .filter(|(_, (_, l))| l.trim_start().starts_with("---"))
        .map(|(i, _)| i)
        .collect();
    if separators.is_empty() {
        return Ok(vec![parse_block(lines.into_iter())?]);
    }
    for &(no, l) in &lines[..separators[0]] {
        if !strip_comment(l).is_empty() {
            return Err(Error::GraphFormat { line: no, msg: "content before first graph".into() });
        }
    }
    let mut out = Vec::with_capacity(separators.len());
    for (k, &start) in separators.iter().enumerate() {
        let end = separators.get(k + 1).copied().unwrap_or(lines.len());
        out.push(parse_block(lines[start + 1..end].iter().copied())?);
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_block<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Admg> {
    let mut vertices: Option<Vec<String>> = None;
    let mut directed: Vec<(usize, String, String)> = Vec::new();
    let mut bidirected: Vec<(usize, String, String)> = Vec::new();
    for (no, raw) in lines {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vertices:") {
            let vs: Vec<String> = rest
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
            if vs.is_empty() {
                return Err(Error::GraphFormat { line: no, msg: "empty vertex list".into() });
            }
            vertices = Some(vs);
        } else if let Some((a, b)) = line.split_once("<->") {
            bidirected.push((no, a.trim().to_string(), b.trim().to_string()));
        } else if let Some((a, b)) = line.split_once("->") {
            directed.push((no, a.trim().to_string(), b.trim().to_string()));
        } else {
            return Err(Error::GraphFormat { line: no, msg: format!("cannot parse {line:?}") });
        }
    }
    let vertices =
        vertices.unwrap_or_else(|| DEFAULT_VERTICES.iter().map(|s| s.to_string()).collect());
    let lookup = |no: usize, name: &str| {
        vertices.iter().position(|v| v == name).ok_or_else(|| Error::GraphFormat {
            line: no,
            msg: format!("unknown vertex {name:?}"),
        })
    };
    let d = directed
        .iter()
        .map(|(no, a, b)| Ok((lookup(*no, a)?, lookup(*no, b)?)))
        .collect::<Result<Vec<_>>>()?;
    let b = bidirected
        .iter()
        .map(|(no, a, b)| Ok((lookup(*no, a)?, lookup(*no, b)?)))
        .collect::<Result<Vec<_>>>()?;
    Admg::new(vertices, d, b)
}

pub fn write_graph(g: &Admg) -> String {
    let mut out = String::new();
    if g.vertices().iter().map(String::as_str).ne(DEFAULT_VERTICES) {
        out.push_str(&format!("vertices: {}\n", g.vertices().join(", ")));
    }
    out.push_str(&g.to_string());
    out
}

pub fn write_graphs(graphs: &[Admg]) -> String {
    let mut out = String::new();
    for (k, g) in graphs.iter().enumerate() {
        out.push_str(&format!("--- graph {k} ---\n"));
        out.push_str(&write_graph(g));
    }
    out
}
