//! Correlating objective scores with subjective ratings.
//!
//! Fusion weights come from a no-intercept least-squares fit of MOS on the two
//! branch scores. Objective scores are mapped to the MOS scale with a
//! four-parameter logistic before PLCC and RMSE; SROCC uses raw scores.

mod fusion;
mod groups;
mod logistic;
mod split;
mod stats;

pub use fusion::{fit_fusion, fusion_residual};
pub use groups::{evaluate_groups, CodecTag, CorrelationReport, FusionMode, Group, ScoredSample, MIN_GROUP_SIZE};
pub use logistic::{fit_logistic, LogisticFit, LogisticParams, MAX_ITERATIONS};
pub use split::{split_check, SplitCheckConfig, SplitCheckReport, MIN_SPLIT_SAMPLES};
pub use stats::{correlations, pearson, ranks, rmse, spearman, Correlations};

use crate::error::{Error, Result};

pub(crate) fn check_lengths(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(())
}
