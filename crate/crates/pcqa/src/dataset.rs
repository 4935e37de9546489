//! Scoring whole manifests and correlating the results with MOS.

use pcqa_core::eval::{evaluate_groups, CorrelationReport, FusionMode, Group, ScoredSample};
use pcqa_core::pipeline::{external_pair_scores, score_pair, PipelineConfig, ScoreSource};
use rayon::prelude::*;

use crate::cache::{BranchPair, ScoreCache};
use crate::error::{Error, Result};
use crate::load::load_pair;
use crate::manifest::{DatasetSample, Manifest};

/// Pooled branch scores of one sample. External sources never touch the clouds.
pub fn score_sample(
    sample: &DatasetSample,
    source: ScoreSource<'_>,
    cfg: &PipelineConfig,
    precision: Option<u8>,
) -> Result<BranchPair> {
    let scores = match source {
        ScoreSource::Builtin(_) => {
            let (r, d) = load_pair(&sample.reference, &sample.degraded, precision)?;
            score_pair(&sample.sample_id, &r, &d, source, cfg)
        }
        ScoreSource::External { table, metric } => external_pair_scores(table, &sample.sample_id, metric),
    }
    .map_err(|e| match e {
        pcqa_core::Error::OccupancyMismatch { .. } => Error::Core(e),
        e => Error::Input(format!("sample '{}': {e}", sample.sample_id)),
    })?;
    Ok(BranchPair { reference: scores.reference_branch.pooled, degraded: scores.degraded_branch.pooled })
}

/// Scores samples in parallel; the output keeps the input order.
pub fn score_samples(
    samples: &[&DatasetSample],
    source: ScoreSource<'_>,
    cfg: &PipelineConfig,
    precision: Option<u8>,
) -> Result<Vec<(String, BranchPair)>> {
    samples
        .par_iter()
        .map(|s| {
            log::info!("scoring {}", s.sample_id);
            Ok((s.sample_id.clone(), score_sample(s, source, cfg, precision)?))
        })
        .collect()
}

/// Pairs cached branch scores with the manifest's MOS and codec tags.
pub fn join_scores(samples: &[&DatasetSample], cache: &ScoreCache) -> Result<Vec<ScoredSample>> {
    samples
        .iter()
        .map(|s| {
            let b = cache
                .get(&s.sample_id)
                .ok_or_else(|| Error::Input(format!("no cached scores for sample '{}'", s.sample_id)))?;
            Ok(ScoredSample {
                sample_id: s.sample_id.clone(),
                codec: s.codec,
                mos: s.mos,
                reference_branch: b.reference,
                degraded_branch: b.degraded,
            })
        })
        .collect()
}

/// Scores every sample of the requested groups and evaluates each group.
pub fn evaluate_dataset(
    manifest: &Manifest,
    source: ScoreSource<'_>,
    cfg: &PipelineConfig,
    precision: Option<u8>,
    groups: &[Group],
    mode: FusionMode,
) -> Result<Vec<CorrelationReport>> {
    let samples = manifest.filtered(groups);
    let cache: ScoreCache = score_samples(&samples, source, cfg, precision)?.into_iter().collect();
    let scored = join_scores(&samples, &cache)?;
    Ok(evaluate_groups(&scored, groups, mode)?)
}
