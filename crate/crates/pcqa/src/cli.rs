//! Command-line front end.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pcqa_core::baseline::{d1, d2, hausdorff_po2po, point_y_psnr, GeometryPeak, NormalSource};
use pcqa_core::eval::{evaluate_groups, split_check, FusionMode, Group, SplitCheckConfig};
use pcqa_core::metrics2d::{MetricName, ScoreTable};
use pcqa_core::normals::DEFAULT_NEIGHBORS;
use pcqa_core::pipeline::{
    both_branch_views, external_pair_scores, fuse_report, score_branch, FusionParams, PairScores, PipelineConfig,
    ScoreSource,
};
use pcqa_core::projection::{DEFAULT_TAU, DEFAULT_WINDOW};

use crate::cache::{read_cache, write_cache};
use crate::dataset::{join_scores, score_samples};
use crate::dump::dump_views;
use crate::error::{Error, Result};
use crate::load::load_pair;
use crate::manifest::{Manifest, ManifestOptions};
use crate::report::{self, fmt_f64, write_output};
use crate::scores::read_scores;

#[derive(Debug, Parser)]
#[command(name = "pcqa", version, about = "Full-reference point cloud quality assessment")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score one degraded cloud against its reference.
    Score(ScoreArgs),
    /// Score every sample of a manifest into a score cache.
    Batch(BatchArgs),
    /// Fit fusion and logistic mappings and report correlations with MOS.
    Fit(FitArgs),
    /// Repeated random train/test splits of the fitting procedure.
    Splitcheck(SplitArgs),
    /// Point-based metrics (D1, D2, Hausdorff, point luma PSNR).
    Baseline(BaselineArgs),
}

fn parse_window(s: &str) -> std::result::Result<usize, String> {
    let w: usize = s.parse().map_err(|e| format!("{e}"))?;
    if w < 3 || w.is_multiple_of(2) {
        return Err(format!("window must be odd and at least 3, got {w}"));
    }
    Ok(w)
}

fn parse_fraction(s: &str) -> std::result::Result<f64, String> {
    let f: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(f > 0.0 && f < 1.0) {
        return Err(format!("fraction must lie strictly between 0 and 1, got {f}"));
    }
    Ok(f)
}

fn parse_weight(s: &str) -> std::result::Result<f64, String> {
    let f: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !f.is_finite() {
        return Err("weight must be finite".into());
    }
    Ok(f)
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Voxel precision in bits [default: smallest covering integer input, 10 for float input]
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=16))]
    pub precision: Option<u8>,
    /// Depth deviation threshold of the occlusion filter (positive)
    #[arg(long, default_value_t = DEFAULT_TAU, value_parser = clap::value_parser!(u32).range(1..))]
    pub tau: u32,
    /// Side of the occlusion filter window (odd, >= 3)
    #[arg(long, default_value_t = DEFAULT_WINDOW, value_parser = parse_window)]
    pub window: usize,
}

impl PipelineArgs {
    fn config(&self) -> PipelineConfig {
        PipelineConfig { tau: self.tau, window: self.window }
    }
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Reference cloud (PLY)
    #[arg(long)]
    pub reference: PathBuf,
    /// Degraded cloud (PLY)
    #[arg(long)]
    pub degraded: PathBuf,
    /// ypsnr, ssim, msssim or external:<name>
    #[arg(long)]
    pub metric: String,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Weight of the reference-geometry branch
    #[arg(long, default_value_t = 0.5, value_parser = parse_weight, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Weight of the degraded-geometry branch
    #[arg(long, default_value_t = 0.5, value_parser = parse_weight, allow_negative_numbers = true)]
    pub beta: f64,
    /// Write the 24 padded view images (PNG) to this directory
    #[arg(long)]
    pub dump_views: Option<PathBuf>,
    /// Per-view scores (sample_id,branch,plane,metric,score) for external metrics
    #[arg(long)]
    pub external_scores: Option<PathBuf>,
    /// Sample id recorded in the report and used to look up external scores [default: degraded file stem]
    #[arg(long)]
    pub sample_id: Option<String>,
    /// Report path (JSON), `-` for stdout
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    All,
    Gpcc,
    Vpcc,
}

impl From<GroupArg> for Group {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::All => Group::All,
            GroupArg::Gpcc => Group::Gpcc,
            GroupArg::Vpcc => Group::Vpcc,
        }
    }
}

#[derive(Debug, Args)]
pub struct ManifestArgs {
    /// CSV with sample_id,reference,degraded,mos,codec_tag
    #[arg(long)]
    pub manifest: PathBuf,
    /// Lower end of the MOS scale
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mos_min: f64,
    /// Upper end of the MOS scale
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub mos_max: f64,
}

impl ManifestArgs {
    fn load(&self, check_paths: bool) -> Result<Manifest> {
        Manifest::load(&self.manifest, &ManifestOptions { mos_range: (self.mos_min, self.mos_max), check_paths })
    }
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    #[command(flatten)]
    pub manifest: ManifestArgs,
    /// ypsnr, ssim, msssim or external:<name>
    #[arg(long)]
    pub metric: String,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Per-view scores for external metrics
    #[arg(long)]
    pub external_scores: Option<PathBuf>,
    /// Only score samples of these groups (repeatable) [default: all]
    #[arg(long = "group", value_enum)]
    pub groups: Vec<GroupArg>,
    /// Score cache path (CSV: sample_id,branch,pooled_score)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Score cache written by `batch`
    #[arg(long)]
    pub scores: PathBuf,
    #[command(flatten)]
    pub manifest: ManifestArgs,
    /// Groups to evaluate (repeatable) [default: all, gpcc, vpcc]
    #[arg(long = "group", value_enum)]
    pub groups: Vec<GroupArg>,
    /// Fit fusion weights once on all samples instead of per group
    #[arg(long)]
    pub shared_fusion: bool,
    /// Report path (JSON), `-` for stdout
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Score cache written by `batch`
    #[arg(long)]
    pub scores: PathBuf,
    #[command(flatten)]
    pub manifest: ManifestArgs,
    /// Restrict to one group
    #[arg(long, value_enum, default_value = "all")]
    pub group: GroupArg,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub iterations: u32,
    /// Fraction of samples used for training in each split
    #[arg(long, default_value_t = 0.75, value_parser = parse_fraction)]
    pub train_frac: f64,
    /// Seed of the ChaCha8 split generator
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Evaluate the fused score directly, without a logistic mapping
    #[arg(long)]
    pub no_logistic: bool,
    /// Per-iteration PLCC (CSV: iteration,test_plcc)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineMetric {
    D1,
    D2,
    Hausdorff,
    YpsnrPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PeakArg {
    /// 3 (2^p - 1)^2
    BoxDiagonal,
    /// (2^p - 1)^2
    AxisRange,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    /// Reference cloud (PLY)
    #[arg(long)]
    pub reference: PathBuf,
    /// Degraded cloud (PLY)
    #[arg(long)]
    pub degraded: PathBuf,
    #[arg(long, value_enum)]
    pub metric: BaselineMetric,
    /// Voxel precision in bits [default: smallest covering integer input, 10 for float input]
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=16))]
    pub precision: Option<u8>,
    /// Peak signal of the geometry PSNRs
    #[arg(long, value_enum, default_value = "box-diagonal")]
    pub peak: PeakArg,
    /// Neighbors for normal estimation when the reference has no normals (D2)
    #[arg(long, default_value_t = DEFAULT_NEIGHBORS)]
    pub normal_neighbors: usize,
    /// Report path (JSON), `-` for stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Score(a) => cmd_score(&a),
        Command::Batch(a) => cmd_batch(&a),
        Command::Fit(a) => cmd_fit(&a),
        Command::Splitcheck(a) => cmd_splitcheck(&a),
        Command::Baseline(a) => cmd_baseline(&a),
    }
}

/// Resolves `--metric` (plus the optional score file) into a score source.
fn with_source<T>(metric: &str, external: Option<&Path>, f: impl FnOnce(ScoreSource<'_>) -> Result<T>) -> Result<T> {
    let name = MetricName::parse(metric)?;
    match name {
        MetricName::Builtin(m) => {
            if external.is_some() {
                log::warn!("--external-scores is ignored for built-in metric {}", m.name());
            }
            f(ScoreSource::Builtin(m))
        }
        MetricName::External(n) => {
            let path = external.ok_or_else(|| Error::Input(format!("metric external:{n} needs --external-scores")))?;
            let table: ScoreTable = read_scores(path)?;
            f(ScoreSource::External { table: &table, metric: &n })
        }
    }
}

fn cmd_score(a: &ScoreArgs) -> Result<()> {
    let cfg = a.pipeline.config();
    let params = FusionParams { alpha: a.alpha, beta: a.beta };
    let sample_id = a.sample_id.clone().unwrap_or_else(|| {
        a.degraded.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "sample".into())
    });
    let report = with_source(&a.metric, a.external_scores.as_deref(), |source| {
        let mut precision = a.pipeline.precision.unwrap_or(0);
        let mut views = None;
        // external scores need the clouds only for dumping images
        if matches!(source, ScoreSource::Builtin(_)) || a.dump_views.is_some() {
            let (r, d) = load_pair(&a.reference, &a.degraded, a.pipeline.precision)?;
            precision = r.precision();
            views = Some(both_branch_views(&r, &d, &cfg)?);
        }
        if let (Some(dir), Some((r, d))) = (&a.dump_views, &views) {
            let written = dump_views(dir, &[r, d])?;
            log::info!("wrote {} view images to {}", written.len(), dir.display());
        }
        let scores = match source {
            ScoreSource::Builtin(m) => {
                let (r, d) = views.as_ref().expect("views are built for built-in metrics");
                PairScores { reference_branch: score_branch(r, m)?, degraded_branch: score_branch(d, m)? }
            }
            ScoreSource::External { table, metric } => external_pair_scores(table, &sample_id, metric)?,
        };
        Ok(fuse_report(&sample_id, source.label(), precision, scores, params, &cfg))
    })?;
    write_output(Some(&a.out), &report::metric_report_json(&report))
}

fn groups_or(groups: &[GroupArg], default: &[Group]) -> Vec<Group> {
    if groups.is_empty() {
        default.to_vec()
    } else {
        let mut out: Vec<Group> = Vec::new();
        for g in groups {
            let g = Group::from(*g);
            if !out.contains(&g) {
                out.push(g);
            }
        }
        out
    }
}

fn cmd_batch(a: &BatchArgs) -> Result<()> {
    let metric = MetricName::parse(&a.metric)?;
    let manifest = a.manifest.load(matches!(metric, MetricName::Builtin(_)))?;
    let groups = groups_or(&a.groups, &[Group::All]);
    let samples = manifest.filtered(&groups);
    if samples.is_empty() {
        return Err(Error::Input("no manifest samples in the selected groups".into()));
    }
    let cfg = a.pipeline.config();
    let rows = with_source(&a.metric, a.external_scores.as_deref(), |source| {
        score_samples(&samples, source, &cfg, a.pipeline.precision)
    })?;
    write_cache(&a.out, &rows)
}

fn cmd_fit(a: &FitArgs) -> Result<()> {
    let manifest = a.manifest.load(false)?;
    let cache = read_cache(&a.scores)?;
    let groups = groups_or(&a.groups, &Group::ALL);
    let samples = manifest.filtered(&groups);
    let scored = join_scores(&samples, &cache)?;
    let mode = if a.shared_fusion { FusionMode::Shared } else { FusionMode::PerGroup };
    let reports = evaluate_groups(&scored, &groups, mode)?;
    for r in &reports {
        if !r.logistic_converged {
            log::warn!("logistic fit for group {} stopped at the iteration limit", r.group.token());
        }
    }
    write_output(Some(&a.out), &report::correlation_report_json(&reports, mode))
}

fn cmd_splitcheck(a: &SplitArgs) -> Result<()> {
    let manifest = a.manifest.load(false)?;
    let cache = read_cache(&a.scores)?;
    let samples = manifest.filtered(&[a.group.into()]);
    let scored = join_scores(&samples, &cache)?;
    let s_ref: Vec<f64> = scored.iter().map(|s| s.reference_branch).collect();
    let s_deg: Vec<f64> = scored.iter().map(|s| s.degraded_branch).collect();
    let mos: Vec<f64> = scored.iter().map(|s| s.mos).collect();
    let cfg = SplitCheckConfig {
        iterations: a.iterations as usize,
        train_fraction: a.train_frac,
        seed: a.seed,
        logistic: !a.no_logistic,
    };
    let rep = split_check(&s_ref, &s_deg, &mos, &cfg)?;
    let io = |e| Error::io(&a.out, e);
    let mut w = BufWriter::new(File::create(&a.out).map_err(io)?);
    writeln!(w, "iteration,test_plcc").map_err(io)?;
    for (i, p) in rep.test_plcc.iter().enumerate() {
        writeln!(w, "{i},{}", fmt_f64(*p)).map_err(io)?;
    }
    w.flush().map_err(io)?;
    println!("mean_test_plcc={} all_data_plcc={}", fmt_f64(rep.mean_test_plcc), fmt_f64(rep.all_data_plcc));
    Ok(())
}

fn cmd_baseline(a: &BaselineArgs) -> Result<()> {
    let (r, d) = load_pair(&a.reference, &a.degraded, a.precision)?;
    let peak = match a.peak {
        PeakArg::BoxDiagonal => GeometryPeak::BoxDiagonal,
        PeakArg::AxisRange => GeometryPeak::AxisRange,
    };
    let text = match a.metric {
        BaselineMetric::D1 => report::mse_report_json("d1", &d1(&r, &d, peak)?, peak.value(r.precision())),
        BaselineMetric::D2 => {
            let normals = NormalSource::EstimateIfMissing { k: a.normal_neighbors };
            report::mse_report_json("d2", &d2(&r, &d, normals, peak)?, peak.value(r.precision()))
        }
        BaselineMetric::Hausdorff => report::distance_report_json("hausdorff", hausdorff_po2po(&r, &d)?),
        BaselineMetric::YpsnrPoint => report::mse_report_json("ypsnr-point", &point_y_psnr(&r, &d)?, 255.0 * 255.0),
    };
    write_output(a.out.as_deref(), &text)
}
