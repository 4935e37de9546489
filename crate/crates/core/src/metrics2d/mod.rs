//! Full-reference 2D image metrics applied to padded view pairs, and the
//! table type for per-view scores computed by external tools.

mod luma;
mod psnr;
mod scores;
mod ssim;

pub use luma::{luma, rgb_to_luma, LumaImage};
pub(crate) use psnr::psnr_from_mse;
pub use psnr::{y_psnr, PSNR_CAP_DB};
pub use scores::{ScoreTable, ViewScoreRow};
pub use ssim::{ms_ssim, ssim, MS_SSIM_WEIGHTS, SSIM_WINDOW};

use alloc::format;
use alloc::string::{String, ToString};

use crate::error::{Error, Result};

/// Built-in 2D metrics. All are higher-is-better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric2d {
    YPsnr,
    Ssim,
    MsSsim,
}

impl Metric2d {
    pub fn name(self) -> &'static str {
        match self {
            Metric2d::YPsnr => "ypsnr",
            Metric2d::Ssim => "ssim",
            Metric2d::MsSsim => "msssim",
        }
    }

    pub fn higher_is_better(self) -> bool {
        true
    }

    /// Score of two identical images.
    pub fn perfect_score(self) -> f64 {
        match self {
            Metric2d::YPsnr => PSNR_CAP_DB,
            Metric2d::Ssim | Metric2d::MsSsim => 1.0,
        }
    }

    pub fn compute(self, reference: &LumaImage, degraded: &LumaImage) -> Result<f64> {
        match self {
            Metric2d::YPsnr => y_psnr(reference, degraded),
            Metric2d::Ssim => ssim(reference, degraded),
            Metric2d::MsSsim => ms_ssim(reference, degraded),
        }
    }
}

/// A metric selector as written on the command line: a built-in name or
/// `external:<name>` for imported scores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricName {
    Builtin(Metric2d),
    External(String),
}

impl MetricName {
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "ypsnr" | "y-psnr" => Ok(MetricName::Builtin(Metric2d::YPsnr)),
            "ssim" => Ok(MetricName::Builtin(Metric2d::Ssim)),
            "msssim" | "ms-ssim" => Ok(MetricName::Builtin(Metric2d::MsSsim)),
            _ => match t.strip_prefix("external:") {
                Some(name) if !name.is_empty() => Ok(MetricName::External(name.to_string())),
                _ => Err(Error::InvalidArgument(format!(
                    "unknown metric {t:?}; expected ypsnr, ssim, msssim or external:<name>"
                ))),
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            MetricName::Builtin(m) => m.name().to_string(),
            MetricName::External(n) => format!("external:{n}"),
        }
    }
}
