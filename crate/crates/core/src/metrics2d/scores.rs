use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pipeline::{Branch, ViewScore};
use crate::projection::PlaneId;

/// One imported per-view score.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewScoreRow {
    pub sample_id: String,
    pub branch: Branch,
    pub plane: PlaneId,
    pub metric: String,
    pub score: f64,
}

/// Externally computed per-view scores keyed by `(sample, branch, plane)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreTable {
    rows: BTreeMap<(String, Branch, PlaneId), (String, f64)>,
}

impl ScoreTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rows(rows: impl IntoIterator<Item = ViewScoreRow>) -> Result<Self> {
        let mut table = Self::new();
        for row in rows {
            table.insert(row)?;
        }
        Ok(table)
    }

    pub fn insert(&mut self, row: ViewScoreRow) -> Result<()> {
        let key = (row.sample_id, row.branch, row.plane);
        if self.rows.contains_key(&key) {
            return Err(Error::DuplicateScore(format!("{}/{}/{}", key.0, key.1.token(), key.2)));
        }
        if !row.score.is_finite() {
            return Err(Error::NonFiniteScore(format!("{}/{}/{}", key.0, key.1.token(), key.2)));
        }
        self.rows.insert(key, (row.metric, row.score));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, sample_id: &str, branch: Branch, plane: PlaneId) -> Option<(&str, f64)> {
        self.rows.get(&(String::from(sample_id), branch, plane)).map(|(m, s)| (m.as_str(), *s))
    }

    /// The six view scores of one branch for `metric`.
    pub fn branch_views(&self, sample_id: &str, branch: Branch, metric: &str) -> Result<Vec<ViewScore>> {
        let mut views = Vec::with_capacity(6);
        for plane in PlaneId::ALL {
            match self.get(sample_id, branch, plane) {
                Some((m, score)) if m == metric => views.push(ViewScore { plane, score }),
                Some((m, _)) => {
                    return Err(Error::MissingScore(format!(
                        "{sample_id}/{}/{plane}: table has metric {m:?}, wanted {metric:?}",
                        branch.token()
                    )))
                }
                None => {
                    return Err(Error::IncompleteViewSet(format!(
                        "{sample_id}/{}: no row for plane {plane}",
                        branch.token()
                    )))
                }
            }
        }
        Ok(views)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(branch: Branch, plane: PlaneId, score: f64) -> ViewScoreRow {
        ViewScoreRow { sample_id: "s1".into(), branch, plane, metric: "dists".into(), score }
    }

    #[test]
    fn complete_table() {
        let rows = [Branch::Reference, Branch::Degraded]
            .into_iter()
            .flat_map(|b| PlaneId::ALL.into_iter().enumerate().map(move |(i, p)| row(b, p, i as f64)));
        let t = ScoreTable::from_rows(rows).unwrap();
        assert_eq!(t.len(), 12);
        let v = t.branch_views("s1", Branch::Degraded, "dists").unwrap();
        assert_eq!(v.len(), 6);
        assert_eq!(v[5].score, 5.0);
        assert!(matches!(t.branch_views("s1", Branch::Degraded, "lpips"), Err(Error::MissingScore(_))));
    }

    #[test]
    fn missing_plane_and_duplicates() {
        let rows = PlaneId::ALL[..5].iter().map(|&p| row(Branch::Reference, p, 1.0));
        let mut t = ScoreTable::from_rows(rows).unwrap();
        assert!(matches!(t.branch_views("s1", Branch::Reference, "dists"), Err(Error::IncompleteViewSet(_))));
        assert!(matches!(t.insert(row(Branch::Reference, PlaneId::Xy, 2.0)), Err(Error::DuplicateScore(_))));
        assert!(matches!(t.insert(row(Branch::Reference, PlaneId::YzPrime, f64::NAN)), Err(Error::NonFiniteScore(_))));
    }
}
