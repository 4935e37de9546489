//! Score cache: `sample_id,branch,pooled_score`, one row per branch.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use pcqa_core::pipeline::Branch;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::report::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPair {
    pub reference: f64,
    pub degraded: f64,
}

pub type ScoreCache = BTreeMap<String, BranchPair>;

pub fn write_cache(path: &Path, rows: &[(String, BranchPair)]) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(w, "sample_id,branch,pooled_score").map_err(io)?;
    for (id, s) in rows {
        let id = csv_field(id);
        writeln!(w, "{id},{},{}", Branch::Reference.token(), fmt_f64(s.reference)).map_err(io)?;
        writeln!(w, "{id},{},{}", Branch::Degraded.token(), fmt_f64(s.degraded)).map_err(io)?;
    }
    w.flush().map_err(io)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Deserialize)]
struct Row {
    sample_id: String,
    branch: String,
    pooled_score: f64,
}

pub fn read_cache(path: &Path) -> Result<ScoreCache> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::format(path, e.to_string()))?;
    let mut partial: BTreeMap<String, [Option<f64>; 2]> = BTreeMap::new();
    for (i, row) in reader.deserialize::<Row>().enumerate() {
        let at = |msg: String| Error::format(path, format!("row {}: {msg}", i + 2));
        let row = row.map_err(|e| at(e.to_string()))?;
        let branch = Branch::parse(&row.branch).ok_or_else(|| at(format!("unknown branch '{}'", row.branch)))?;
        if !row.pooled_score.is_finite() {
            return Err(at("non-finite score".into()));
        }
        let slot = &mut partial.entry(row.sample_id.clone()).or_default()[branch as usize];
        if slot.replace(row.pooled_score).is_some() {
            return Err(at(format!("duplicate {} score for '{}'", branch.token(), row.sample_id)));
        }
    }
    partial
        .into_iter()
        .map(|(id, s)| match s {
            [Some(reference), Some(degraded)] => Ok((id, BranchPair { reference, degraded })),
            _ => Err(Error::format(path, format!("sample '{id}' lacks one of the branch scores"))),
        })
        .collect()
}
