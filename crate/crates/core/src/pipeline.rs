//! The two-branch projection metric.
//!
//! Reference branch: the reference geometry carrying its own colors versus the
//! same geometry recolored from the degraded cloud. Degraded branch: the
//! degraded geometry recolored from the reference versus the degraded cloud
//! itself. Within a branch both clouds share geometry, so their projections
//! line up pixel for pixel. Each branch is projected, filtered, cropped,
//! padded and scored per view; the six scores are averaged and the two branch
//! scores are fused linearly.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::cloud::{Color, PointCloud};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::metrics2d::{rgb_to_luma, Metric2d, ScoreTable};
use crate::par;
use crate::projection::{
    compute_crop, crop, filter_occlusions, pad, project, PlaneId, ProjectionSet, DEFAULT_TAU, DEFAULT_WINDOW,
};
use crate::recolor::{compute_correspondences, recolor_with, CorrespondenceMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Reference,
    Degraded,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Reference, Branch::Degraded];

    pub fn token(self) -> &'static str {
        match self {
            Branch::Reference => "reference",
            Branch::Degraded => "degraded",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "reference" => Some(Branch::Reference),
            "degraded" => Some(Branch::Degraded),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineConfig {
    /// Filtering threshold on depth deviation.
    pub tau: u32,
    /// Odd side of the filtering window.
    pub window: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { tau: DEFAULT_TAU, window: DEFAULT_WINDOW }
    }
}

/// Linear fusion weights: `alpha * reference_branch + beta * degraded_branch`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionParams {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for FusionParams {
    fn default() -> Self {
        FusionParams { alpha: 0.5, beta: 0.5 }
    }
}

impl FusionParams {
    pub fn fuse(&self, reference_branch: f64, degraded_branch: f64) -> f64 {
        self.alpha * reference_branch + self.beta * degraded_branch
    }
}

/// A padded image pair for one plane. `reference` carries the reference
/// colors and `degraded` the degraded colors, both on the branch geometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewPair {
    pub plane: PlaneId,
    pub reference: Grid<Color>,
    pub degraded: Grid<Color>,
    /// Cropped, filtered occupancy shared by both images (the padding mask).
    pub occupancy: Grid<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchViews {
    pub branch: Branch,
    pub pairs: Vec<ViewPair>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewScore {
    pub plane: PlaneId,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchScore {
    pub branch: Branch,
    pub views: Vec<ViewScore>,
    pub pooled: f64,
}

/// Average pooling over exactly the six planes.
pub fn pool(branch: Branch, views: Vec<ViewScore>) -> Result<BranchScore> {
    let complete = views.len() == 6 && PlaneId::ALL.iter().all(|p| views.iter().any(|v| v.plane == *p));
    if !complete {
        return Err(Error::IncompleteViewSet(branch.token().to_string()));
    }
    if let Some(v) = views.iter().find(|v| !v.score.is_finite()) {
        return Err(Error::NonFiniteScore(alloc::format!("{}/{}", branch.token(), v.plane)));
    }
    let pooled = views.iter().map(|v| v.score).sum::<f64>() / 6.0;
    Ok(BranchScore { branch, views, pooled })
}

/// Builds the six padded view pairs of one branch.
pub fn branch_views(
    branch: Branch,
    reference: &PointCloud,
    degraded: &PointCloud,
    cfg: &PipelineConfig,
) -> Result<BranchViews> {
    let map = compute_correspondences(reference, degraded)?;
    branch_views_with(branch, reference, degraded, &map, cfg)
}

/// [`branch_views`] with precomputed correspondences (`A` = reference,
/// `B` = degraded), shared between both branches.
pub fn branch_views_with(
    branch: Branch,
    reference: &PointCloud,
    degraded: &PointCloud,
    map: &CorrespondenceMap,
    cfg: &PipelineConfig,
) -> Result<BranchViews> {
    if reference.precision() != degraded.precision() {
        return Err(Error::PrecisionMismatch(reference.precision(), degraded.precision()));
    }
    // (cloud with reference colors, cloud with degraded colors) on the branch geometry
    let (with_ref_colors, with_deg_colors) = match branch {
        Branch::Reference => (reference.clone(), recolor_with(reference, degraded, map)?),
        Branch::Degraded => (recolor_with(degraded, reference, &map.swapped())?, degraded.clone()),
    };
    let filter = |c: &PointCloud| filter_occlusions(project(c), cfg.window, cfg.tau);
    let (ref_set, deg_set) = par::join(|| filter(&with_ref_colors), || filter(&with_deg_colors));
    let (ref_set, deg_set) = (ref_set?, deg_set?);
    check_aligned(branch, &ref_set, &deg_set)?;

    let pairs = par::map_range(6, |i| {
        let (rv, dv) = (&ref_set.views[i], &deg_set.views[i]);
        let rect = compute_crop(&rv.occupancy)?;
        let (rv, dv) = (crop(rv, rect), crop(dv, rect));
        let (reference, degraded) = par::join(|| pad(&rv.image, &rv.occupancy), || pad(&dv.image, &dv.occupancy));
        Ok(ViewPair { plane: rv.plane, reference: reference?, degraded: degraded?, occupancy: rv.occupancy })
    });
    Ok(BranchViews { branch, pairs: pairs.into_iter().collect::<Result<_>>()? })
}

fn check_aligned(branch: Branch, a: &ProjectionSet, b: &ProjectionSet) -> Result<()> {
    for (va, vb) in a.views.iter().zip(&b.views) {
        if va.plane != vb.plane || va.occupancy != vb.occupancy || va.depth != vb.depth {
            return Err(Error::OccupancyMismatch { branch: branch.token(), plane: va.plane.token() });
        }
    }
    Ok(())
}

/// Scores each view pair on luma and pools.
pub fn score_branch(views: &BranchViews, metric: Metric2d) -> Result<BranchScore> {
    let scores = par::map_range(views.pairs.len(), |i| {
        let pair = &views.pairs[i];
        let score = metric.compute(&rgb_to_luma(&pair.reference), &rgb_to_luma(&pair.degraded))?;
        Ok(ViewScore { plane: pair.plane, score })
    });
    pool(views.branch, scores.into_iter().collect::<Result<_>>()?)
}

/// Pools imported per-view scores for one branch.
pub fn score_branch_external(table: &ScoreTable, sample_id: &str, branch: Branch, metric: &str) -> Result<BranchScore> {
    pool(branch, table.branch_views(sample_id, branch, metric)?)
}

/// Where per-view scores come from.
#[derive(Debug, Clone, Copy)]
pub enum ScoreSource<'a> {
    Builtin(Metric2d),
    External { table: &'a ScoreTable, metric: &'a str },
}

impl ScoreSource<'_> {
    pub fn label(&self) -> String {
        match self {
            ScoreSource::Builtin(m) => m.name().to_string(),
            ScoreSource::External { metric, .. } => alloc::format!("external:{metric}"),
        }
    }
}

/// Parameters recorded with every report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigSnapshot {
    pub precision: u8,
    pub tau: u32,
    pub window: usize,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub sample_id: String,
    pub metric: String,
    pub config: ConfigSnapshot,
    pub reference_branch: BranchScore,
    pub degraded_branch: BranchScore,
    pub fused: f64,
}

/// Both branches of one reference/degraded pair, before fusion.
#[derive(Debug, Clone, PartialEq)]
pub struct PairScores {
    pub reference_branch: BranchScore,
    pub degraded_branch: BranchScore,
}

/// Projects both branches (builds `BranchViews`), used for scoring and dumps.
pub fn both_branch_views(
    reference: &PointCloud,
    degraded: &PointCloud,
    cfg: &PipelineConfig,
) -> Result<(BranchViews, BranchViews)> {
    let map = compute_correspondences(reference, degraded)?;
    let (r, d) = par::join(
        || branch_views_with(Branch::Reference, reference, degraded, &map, cfg),
        || branch_views_with(Branch::Degraded, reference, degraded, &map, cfg),
    );
    Ok((r?, d?))
}

/// Branch scores for one pair.
pub fn score_pair(
    sample_id: &str,
    reference: &PointCloud,
    degraded: &PointCloud,
    source: ScoreSource<'_>,
    cfg: &PipelineConfig,
) -> Result<PairScores> {
    match source {
        ScoreSource::Builtin(metric) => {
            let (r, d) = both_branch_views(reference, degraded, cfg)?;
            let (r, d) = par::join(|| score_branch(&r, metric), || score_branch(&d, metric));
            Ok(PairScores { reference_branch: r?, degraded_branch: d? })
        }
        ScoreSource::External { table, metric } => external_pair_scores(table, sample_id, metric),
    }
}

/// Branch scores from imported per-view scores alone.
pub fn external_pair_scores(table: &ScoreTable, sample_id: &str, metric: &str) -> Result<PairScores> {
    Ok(PairScores {
        reference_branch: score_branch_external(table, sample_id, Branch::Reference, metric)?,
        degraded_branch: score_branch_external(table, sample_id, Branch::Degraded, metric)?,
    })
}

/// Runs both branches and fuses the pooled scores.
pub fn jgc_projqm(
    sample_id: &str,
    reference: &PointCloud,
    degraded: &PointCloud,
    source: ScoreSource<'_>,
    params: FusionParams,
    cfg: &PipelineConfig,
) -> Result<MetricReport> {
    let scores = score_pair(sample_id, reference, degraded, source, cfg)?;
    Ok(fuse_report(sample_id, source.label(), reference.precision(), scores, params, cfg))
}

pub fn fuse_report(
    sample_id: &str,
    metric: String,
    precision: u8,
    scores: PairScores,
    params: FusionParams,
    cfg: &PipelineConfig,
) -> MetricReport {
    let fused = params.fuse(scores.reference_branch.pooled, scores.degraded_branch.pooled);
    MetricReport {
        sample_id: sample_id.to_string(),
        metric,
        config: ConfigSnapshot { precision, tau: cfg.tau, window: cfg.window, alpha: params.alpha, beta: params.beta },
        reference_branch: scores.reference_branch,
        degraded_branch: scores.degraded_branch,
        fused,
    }
}
