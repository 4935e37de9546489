//! JSON reports. Every float is written with 17 significant digits.

use std::fs;
use std::path::Path;

use pcqa_core::baseline::MseReport;
use pcqa_core::eval::{CorrelationReport, FusionMode};
use pcqa_core::pipeline::{BranchScore, MetricReport, ViewScore};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::{Error, Result};

/// `d.dddddddddddddddde±x`: 17 significant digits, round-trips every f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// A float serialized through [`fmt_f64`]; non-finite values become `null`.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(fmt_f64(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Serialize)]
struct Config {
    precision: u8,
    tau: u32,
    window: usize,
    alpha: Num,
    beta: Num,
}

struct Views<'a>(&'a [ViewScore]);

impl Serialize for Views<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for v in self.0 {
            m.serialize_entry(v.plane.token(), &Num(v.score))?;
        }
        m.end()
    }
}

#[derive(Serialize)]
struct BranchJson<'a> {
    pooled: Num,
    views: Views<'a>,
}

#[derive(Serialize)]
struct MetricJson<'a> {
    sample_id: &'a str,
    metric: &'a str,
    config: Config,
    reference_branch: BranchJson<'a>,
    degraded_branch: BranchJson<'a>,
    fused: Num,
}

fn branch_json(b: &BranchScore) -> BranchJson<'_> {
    BranchJson { pooled: Num(b.pooled), views: Views(&b.views) }
}

pub fn metric_report_json(r: &MetricReport) -> String {
    let c = &r.config;
    let j = MetricJson {
        sample_id: &r.sample_id,
        metric: &r.metric,
        config: Config { precision: c.precision, tau: c.tau, window: c.window, alpha: Num(c.alpha), beta: Num(c.beta) },
        reference_branch: branch_json(&r.reference_branch),
        degraded_branch: branch_json(&r.degraded_branch),
        fused: Num(r.fused),
    };
    to_pretty(&j)
}

#[derive(Serialize)]
struct GroupJson {
    group: &'static str,
    n: usize,
    plcc: Num,
    srocc: Num,
    rmse: Num,
    alpha: Num,
    beta: Num,
    beta1: Num,
    beta2: Num,
    beta3: Num,
    beta4: Num,
    logistic_converged: bool,
}

#[derive(Serialize)]
struct CorrelationJson {
    fusion_mode: &'static str,
    groups: Vec<GroupJson>,
}

pub fn correlation_report_json(reports: &[CorrelationReport], mode: FusionMode) -> String {
    let groups = reports
        .iter()
        .map(|r| GroupJson {
            group: r.group.token(),
            n: r.n,
            plcc: Num(r.correlations.plcc),
            srocc: Num(r.correlations.srocc),
            rmse: Num(r.correlations.rmse),
            alpha: Num(r.fusion.alpha),
            beta: Num(r.fusion.beta),
            beta1: Num(r.logistic.beta1),
            beta2: Num(r.logistic.beta2),
            beta3: Num(r.logistic.beta3),
            beta4: Num(r.logistic.beta4),
            logistic_converged: r.logistic_converged,
        })
        .collect();
    let fusion_mode = match mode {
        FusionMode::PerGroup => "per-group",
        FusionMode::Shared => "shared",
    };
    to_pretty(&CorrelationJson { fusion_mode, groups })
}

#[derive(Serialize)]
struct MseJson<'a> {
    metric: &'a str,
    reference_to_degraded: Num,
    degraded_to_reference: Num,
    mse: Num,
    psnr: Num,
    peak: Num,
}

pub fn mse_report_json(metric: &str, r: &MseReport, peak: f64) -> String {
    to_pretty(&MseJson {
        metric,
        reference_to_degraded: Num(r.reference_to_degraded),
        degraded_to_reference: Num(r.degraded_to_reference),
        mse: Num(r.mse),
        psnr: Num(r.psnr),
        peak: Num(peak),
    })
}

#[derive(Serialize)]
struct DistanceJson<'a> {
    metric: &'a str,
    distance: Num,
}

pub fn distance_report_json(metric: &str, distance: f64) -> String {
    to_pretty(&DistanceJson { metric, distance: Num(distance) })
}

fn to_pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report structs always serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or stdout when `path` is `None` or `-`.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, text).map_err(|e| Error::io(p, e)),
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}
