use alloc::vec::Vec;

use crate::error::{Error, Result};

use super::check_lengths;
use super::logistic::LogisticParams;

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Pearson linear correlation. Zero when either side has no variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    if x.len() < 2 {
        return Err(Error::NotEnoughSamples { needed: 2, got: x.len() });
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(0.0);
    }
    Ok((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// 1-based ranks; ties share the average of the ranks they span.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = alloc::vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && x[order[j]] == x[order[i]] {
            j += 1;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            out[k] = rank;
        }
        i = j;
    }
    out
}

/// Spearman rank-order correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    pearson(&ranks(x), &ranks(y))
}

pub fn rmse(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    if x.is_empty() {
        return Err(Error::NotEnoughSamples { needed: 1, got: 0 });
    }
    let sse: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(libm::sqrt(sse / x.len() as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlations {
    pub plcc: f64,
    pub srocc: f64,
    pub rmse: f64,
}

/// PLCC and RMSE on logistic-mapped predictions, SROCC on the raw scores.
pub fn correlations(q: &[f64], mos: &[f64], logistic: &LogisticParams) -> Result<Correlations> {
    check_lengths(q, mos)?;
    let predicted: Vec<f64> = q.iter().map(|&v| logistic.evaluate(v)).collect();
    Ok(Correlations { plcc: pearson(&predicted, mos)?, srocc: spearman(q, mos)?, rmse: rmse(&predicted, mos)? })
}
