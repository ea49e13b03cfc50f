//! Matrix Market coordinate I/O for graph Laplacians (real, symmetric,
//! lower triangle, 1-based indices).

use super::graph::RegularGraph;
use super::CayleyError;
use std::io::{BufRead, Write};

const BANNER: &str = "%%MatrixMarket matrix coordinate real symmetric";

/// Symmetric sparse matrix as sorted lower-triangle triplets, 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSparse {
    pub dim: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SymmetricSparse {
    pub fn laplacian(graph: &RegularGraph) -> Self {
        SymmetricSparse { dim: graph.vertices(), entries: graph.laplacian_triplets() }
    }
}

pub fn write_matrix_market<W: Write>(graph: &RegularGraph, out: &mut W) -> Result<(), CayleyError> {
    let m = SymmetricSparse::laplacian(graph);
    let io = |e: std::io::Error| CayleyError::Io(e.to_string());
    writeln!(out, "{BANNER}").map_err(io)?;
    writeln!(out, "% graph Laplacian, {}-regular", graph.degree()).map_err(io)?;
    writeln!(out, "{} {} {}", m.dim, m.dim, m.entries.len()).map_err(io)?;
    for &(i, j, v) in &m.entries {
        writeln!(out, "{} {} {}", i + 1, j + 1, v).map_err(io)?;
    }
    Ok(())
}

pub fn read_matrix_market<R: BufRead>(input: R) -> Result<SymmetricSparse, CayleyError> {
    let bad = |msg: String| CayleyError::MatrixMarket(msg);
    let mut lines = input.lines();
    let banner = lines.next().ok_or_else(|| bad("empty file".into()))?.map_err(|e| CayleyError::Io(e.to_string()))?;
    let lowered = banner.to_ascii_lowercase();
    if lowered.split_whitespace().collect::<Vec<_>>() != BANNER.to_ascii_lowercase().split_whitespace().collect::<Vec<_>>() {
        return Err(bad(format!("unsupported header: {banner}")));
    }
    let mut size: Option<(usize, usize)> = None;
    let mut entries = Vec::new();
    for line in lines {
        let line = line.map_err(|e| CayleyError::Io(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match size {
            None => {
                let [rows, cols, nnz] = fields[..] else {
                    return Err(bad(format!("bad size line: {line}")));
                };
                let parse = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("bad size line: {line}")));
                let (rows, cols, nnz) = (parse(rows)?, parse(cols)?, parse(nnz)?);
                if rows != cols {
                    return Err(bad("symmetric matrix must be square".into()));
                }
                size = Some((rows, nnz));
                entries.reserve(nnz);
            }
            Some((dim, _)) => {
                let [i, j, v] = fields[..] else {
                    return Err(bad(format!("bad entry: {line}")));
                };
                let index = |s: &str| match s.parse::<usize>() {
                    Ok(k) if (1..=dim).contains(&k) => Ok(k - 1),
                    _ => Err(bad(format!("bad index in entry: {line}"))),
                };
                let (i, j) = (index(i)?, index(j)?);
                let v: f64 = v.parse().map_err(|_| bad(format!("bad value in entry: {line}")))?;
                if i < j {
                    return Err(bad(format!("entry above the diagonal: {line}")));
                }
                entries.push((i, j, v));
            }
        }
    }
    let (dim, nnz) = size.ok_or_else(|| bad("missing size line".into()))?;
    if entries.len() != nnz {
        return Err(bad(format!("expected {nnz} entries, found {}", entries.len())));
    }
    entries.sort_by_key(|e| (e.0, e.1));
    Ok(SymmetricSparse { dim, entries })
}
