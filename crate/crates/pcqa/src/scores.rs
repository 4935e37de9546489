//! External per-view scores: `sample_id,branch,plane,metric,score`.

use std::path::Path;

use pcqa_core::metrics2d::{ScoreTable, ViewScoreRow};
use pcqa_core::pipeline::Branch;
use pcqa_core::projection::PlaneId;
use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
struct Row {
    sample_id: String,
    branch: String,
    plane: String,
    metric: String,
    score: f64,
}

pub fn read_scores(path: &Path) -> Result<ScoreTable> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::format(path, e.to_string()))?;
    let mut table = ScoreTable::new();
    for (i, row) in reader.deserialize::<Row>().enumerate() {
        let at = |msg: String| Error::format(path, format!("row {}: {msg}", i + 2));
        let row = row.map_err(|e| at(e.to_string()))?;
        let branch = Branch::parse(&row.branch).ok_or_else(|| at(format!("unknown branch '{}'", row.branch)))?;
        let plane = PlaneId::parse(&row.plane).ok_or_else(|| at(format!("unknown plane '{}'", row.plane)))?;
        table
            .insert(ViewScoreRow { sample_id: row.sample_id, branch, plane, metric: row.metric, score: row.score })
            .map_err(|e| at(e.to_string()))?;
    }
    Ok(table)
}
