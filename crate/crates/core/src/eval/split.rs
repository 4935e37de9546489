use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pipeline::FusionParams;

use super::check_lengths;
use super::fusion::fit_fusion;
use super::logistic::{fit_logistic, LogisticParams};
use super::stats::pearson;

pub const MIN_SPLIT_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCheckConfig {
    pub iterations: usize,
    pub train_fraction: f64,
    pub seed: u64,
    /// Map fused scores through a logistic fitted on the training split.
    pub logistic: bool,
}

impl Default for SplitCheckConfig {
    fn default() -> Self {
        SplitCheckConfig { iterations: 100, train_fraction: 0.75, seed: 0, logistic: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitCheckReport {
    /// Test-split PLCC of every iteration, in order.
    pub test_plcc: Vec<f64>,
    pub mean_test_plcc: f64,
    /// PLCC with fusion and logistic fitted and evaluated on all samples.
    pub all_data_plcc: f64,
}

struct Model {
    fusion: FusionParams,
    logistic: Option<LogisticParams>,
}

impl Model {
    fn fit(s_ref: &[f64], s_deg: &[f64], mos: &[f64], logistic: bool) -> Result<Self> {
        let fusion = fit_fusion(s_ref, s_deg, mos)?;
        let logistic = if logistic {
            let q: Vec<f64> = s_ref.iter().zip(s_deg).map(|(r, d)| fusion.fuse(*r, *d)).collect();
            Some(fit_logistic(&q, mos)?.params)
        } else {
            None
        };
        Ok(Model { fusion, logistic })
    }

    fn predict(&self, s_ref: f64, s_deg: f64) -> f64 {
        let q = self.fusion.fuse(s_ref, s_deg);
        self.logistic.map_or(q, |l| l.evaluate(q))
    }

    fn plcc(&self, s_ref: &[f64], s_deg: &[f64], mos: &[f64]) -> Result<f64> {
        let pred: Vec<f64> = s_ref.iter().zip(s_deg).map(|(r, d)| self.predict(*r, *d)).collect();
        pearson(&pred, mos)
    }
}

fn pick(values: &[f64], idx: &[usize]) -> Vec<f64> {
    idx.iter().map(|&i| values[i]).collect()
}

/// Repeated random train/test splits.
///
/// Each iteration reshuffles the sample indices with one ChaCha8 stream seeded
/// from `cfg.seed` (Fisher-Yates over `u32` draws, so the sequence does not
/// depend on the platform word size), fits on the first
/// `round(train_fraction * n)` indices and reports PLCC on the rest.
pub fn split_check(s_ref: &[f64], s_deg: &[f64], mos: &[f64], cfg: &SplitCheckConfig) -> Result<SplitCheckReport> {
    check_lengths(s_ref, s_deg)?;
    check_lengths(s_ref, mos)?;
    let n = mos.len();
    if n < MIN_SPLIT_SAMPLES {
        return Err(Error::NotEnoughSamples { needed: MIN_SPLIT_SAMPLES, got: n });
    }
    if !(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0) {
        return Err(Error::InvalidArgument(alloc::format!("train fraction {} not in (0, 1)", cfg.train_fraction)));
    }
    if cfg.iterations == 0 {
        return Err(Error::InvalidArgument("split check needs at least one iteration".into()));
    }
    let n_train = libm::round(cfg.train_fraction * n as f64) as usize;
    let n_train = n_train.clamp(2, n - 2);

    let all_data_plcc = Model::fit(s_ref, s_deg, mos, cfg.logistic)?.plcc(s_ref, s_deg, mos)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut test_plcc = Vec::with_capacity(cfg.iterations);
    for _ in 0..cfg.iterations {
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i as u32) as usize;
            order.swap(i, j);
        }
        let (train, test) = order.split_at(n_train);
        let model = Model::fit(&pick(s_ref, train), &pick(s_deg, train), &pick(mos, train), cfg.logistic)?;
        test_plcc.push(model.plcc(&pick(s_ref, test), &pick(s_deg, test), &pick(mos, test))?);
    }
    let mean_test_plcc = test_plcc.iter().sum::<f64>() / test_plcc.len() as f64;
    Ok(SplitCheckReport { test_plcc, mean_test_plcc, all_data_plcc })
}
