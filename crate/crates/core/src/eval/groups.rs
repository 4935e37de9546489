use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pipeline::FusionParams;

use super::fusion::fit_fusion;
use super::logistic::{fit_logistic, LogisticParams};
use super::stats::{correlations, Correlations};

pub const MIN_GROUP_SIZE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodecTag {
    GpccOctreeRaht,
    GpccOctreeLifting,
    GpccTrisoupRaht,
    GpccTrisoupLifting,
    Vpcc,
    Other,
}

impl CodecTag {
    pub const ALL: [CodecTag; 6] = [
        CodecTag::GpccOctreeRaht,
        CodecTag::GpccOctreeLifting,
        CodecTag::GpccTrisoupRaht,
        CodecTag::GpccTrisoupLifting,
        CodecTag::Vpcc,
        CodecTag::Other,
    ];

    pub fn token(self) -> &'static str {
        match self {
            CodecTag::GpccOctreeRaht => "gpcc-octree-raht",
            CodecTag::GpccOctreeLifting => "gpcc-octree-lifting",
            CodecTag::GpccTrisoupRaht => "gpcc-trisoup-raht",
            CodecTag::GpccTrisoupLifting => "gpcc-trisoup-lifting",
            CodecTag::Vpcc => "vpcc",
            CodecTag::Other => "other",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim().to_ascii_lowercase();
        Self::ALL.into_iter().find(|t| t.token() == s)
    }

    pub fn is_gpcc(self) -> bool {
        matches!(
            self,
            CodecTag::GpccOctreeRaht
                | CodecTag::GpccOctreeLifting
                | CodecTag::GpccTrisoupRaht
                | CodecTag::GpccTrisoupLifting
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    All,
    Gpcc,
    Vpcc,
}

impl Group {
    pub const ALL: [Group; 3] = [Group::All, Group::Gpcc, Group::Vpcc];

    pub fn token(self) -> &'static str {
        match self {
            Group::All => "all",
            Group::Gpcc => "gpcc",
            Group::Vpcc => "vpcc",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim().to_ascii_lowercase();
        Self::ALL.into_iter().find(|g| g.token() == s)
    }

    pub fn contains(self, tag: CodecTag) -> bool {
        match self {
            Group::All => true,
            Group::Gpcc => tag.is_gpcc(),
            Group::Vpcc => tag == CodecTag::Vpcc,
        }
    }
}

/// How fusion weights are chosen per group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FusionMode {
    /// Fit `(alpha, beta)` on each group's own samples.
    #[default]
    PerGroup,
    /// Fit once on all samples and reuse for every group.
    Shared,
}

/// One stimulus with both pooled branch scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSample {
    pub sample_id: String,
    pub codec: CodecTag,
    pub mos: f64,
    pub reference_branch: f64,
    pub degraded_branch: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub group: Group,
    pub n: usize,
    pub correlations: Correlations,
    pub fusion: FusionParams,
    pub logistic: LogisticParams,
    pub logistic_converged: bool,
}

struct Columns {
    s_ref: Vec<f64>,
    s_deg: Vec<f64>,
    mos: Vec<f64>,
}

impl Columns {
    fn of<'a>(samples: impl Iterator<Item = &'a ScoredSample>) -> Self {
        let mut c = Columns { s_ref: Vec::new(), s_deg: Vec::new(), mos: Vec::new() };
        for s in samples {
            c.s_ref.push(s.reference_branch);
            c.s_deg.push(s.degraded_branch);
            c.mos.push(s.mos);
        }
        c
    }

    fn fusion(&self, label: &str) -> Result<FusionParams> {
        let constant = |v: &[f64]| v.iter().all(|x| *x == v[0]);
        if constant(&self.s_ref) && constant(&self.s_deg) {
            return Err(Error::ConstantScores(alloc::format!(
                "group {label}: every sample has the same branch scores, nothing to correlate"
            )));
        }
        fit_fusion(&self.s_ref, &self.s_deg, &self.mos)
    }
}

/// Fits and evaluates every requested group.
///
/// Groups without samples are left out of the result; groups with fewer than
/// [`MIN_GROUP_SIZE`] samples are an error.
pub fn evaluate_groups(samples: &[ScoredSample], groups: &[Group], mode: FusionMode) -> Result<Vec<CorrelationReport>> {
    let shared = match mode {
        FusionMode::Shared => {
            if samples.len() < MIN_GROUP_SIZE {
                return Err(Error::NotEnoughSamples { needed: MIN_GROUP_SIZE, got: samples.len() });
            }
            Some(Columns::of(samples.iter()).fusion("all")?)
        }
        FusionMode::PerGroup => None,
    };
    let mut out = Vec::new();
    for &group in groups {
        let cols = Columns::of(samples.iter().filter(|s| group.contains(s.codec)));
        let n = cols.mos.len();
        if n == 0 {
            continue;
        }
        if n < MIN_GROUP_SIZE {
            return Err(Error::NotEnoughSamples { needed: MIN_GROUP_SIZE, got: n });
        }
        let fusion = match shared {
            Some(f) => f,
            None => cols.fusion(group.token())?,
        };
        let q: Vec<f64> = cols.s_ref.iter().zip(&cols.s_deg).map(|(r, d)| fusion.fuse(*r, *d)).collect();
        if q.iter().all(|v| *v == q[0]) {
            return Err(Error::ConstantScores(alloc::format!("group {}: fused scores are all equal", group.token())));
        }
        let fit = fit_logistic(&q, &cols.mos)?;
        out.push(CorrelationReport {
            group,
            n,
            correlations: correlations(&q, &cols.mos, &fit.params)?,
            fusion,
            logistic: fit.params,
            logistic_converged: fit.converged,
        });
    }
    Ok(out)
}
