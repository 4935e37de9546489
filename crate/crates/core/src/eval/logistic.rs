use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::solve;

use super::check_lengths;
use super::stats::pearson;

pub const MAX_ITERATIONS: usize = 500;
const RELATIVE_TOLERANCE: f64 = 1e-10;
const MIN_SAMPLES: usize = 5;

/// `beta2 + (beta1 - beta2) / (1 + exp(-(q - beta3) / beta4))`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticParams {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
}

impl LogisticParams {
    fn sigmoid(&self, q: f64) -> f64 {
        let t = (q - self.beta3) / self.beta4;
        if t >= 0.0 {
            1.0 / (1.0 + libm::exp(-t))
        } else {
            let e = libm::exp(t);
            e / (1.0 + e)
        }
    }

    pub fn evaluate(&self, q: f64) -> f64 {
        self.beta2 + (self.beta1 - self.beta2) * self.sigmoid(q)
    }

    fn as_array(&self) -> [f64; 4] {
        [self.beta1, self.beta2, self.beta3, self.beta4]
    }

    fn from_array(b: [f64; 4]) -> Self {
        LogisticParams { beta1: b[0], beta2: b[1], beta3: b[2], beta4: b[3] }
    }

    /// Partial derivatives of [`evaluate`](Self::evaluate) at `q`.
    fn gradient(&self, q: f64) -> [f64; 4] {
        let s = self.sigmoid(q);
        let ds = (self.beta1 - self.beta2) * s * (1.0 - s);
        [s, 1.0 - s, -ds / self.beta4, -ds * (q - self.beta3) / (self.beta4 * self.beta4)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticFit {
    pub params: LogisticParams,
    pub sse: f64,
    pub iterations: usize,
    /// False when the iteration budget ran out before the SSE settled.
    pub converged: bool,
}

fn sse(p: &LogisticParams, q: &[f64], mos: &[f64]) -> f64 {
    q.iter().zip(mos).map(|(&x, &m)| (m - p.evaluate(x)) * (m - p.evaluate(x))).sum()
}

fn median(x: &[f64]) -> f64 {
    let mut v: Vec<f64> = x.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn std_dev(x: &[f64]) -> f64 {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    libm::sqrt(x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / x.len() as f64)
}

/// Least-squares logistic mapping from objective scores to MOS.
///
/// Levenberg-Marquardt from `beta1 = max(mos)`, `beta2 = min(mos)`,
/// `beta3 = median(q)`, `beta4 = ±std(q)`; the sign of `beta4` follows the
/// sign of the linear correlation, so a lower-is-better metric starts on a
/// decreasing curve.
pub fn fit_logistic(q: &[f64], mos: &[f64]) -> Result<LogisticFit> {
    check_lengths(q, mos)?;
    if q.len() < MIN_SAMPLES {
        return Err(Error::NotEnoughSamples { needed: MIN_SAMPLES, got: q.len() });
    }
    if q.iter().chain(mos).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite value in logistic fit input".into()));
    }
    let spread = std_dev(q);
    if spread == 0.0 {
        return Err(Error::ConstantScores("logistic fit needs varying objective scores".into()));
    }
    let sign = if pearson(q, mos)? < 0.0 { -1.0 } else { 1.0 };
    let (lo, hi) = mos.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &m| (l.min(m), h.max(m)));
    let mut params = LogisticParams { beta1: hi, beta2: lo, beta3: median(q), beta4: sign * spread };
    let mut current = sse(&params, q, mos);
    let mut lambda = 1e-3;
    let mut iterations = 0;
    let mut converged = current == 0.0;

    while !converged && iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut jtj = [[0.0f64; 4]; 4];
        let mut jtr = [0.0f64; 4];
        for (&x, &m) in q.iter().zip(mos) {
            let g = params.gradient(x);
            let r = m - params.evaluate(x);
            for i in 0..4 {
                jtr[i] += g[i] * r;
                for j in 0..4 {
                    jtj[i][j] += g[i] * g[j];
                }
            }
        }
        // retry with heavier damping until the step lowers the SSE
        let mut accepted = None;
        while lambda < 1e16 {
            let mut a = jtj;
            for (i, row) in a.iter_mut().enumerate() {
                row[i] += lambda * jtj[i][i].max(1e-12);
            }
            if let Some(step) = solve(a, jtr) {
                let b = params.as_array();
                let trial =
                    LogisticParams::from_array([b[0] + step[0], b[1] + step[1], b[2] + step[2], b[3] + step[3]]);
                let trial_sse = sse(&trial, q, mos);
                if trial.beta4 != 0.0 && trial_sse.is_finite() && trial_sse <= current {
                    accepted = Some((trial, trial_sse));
                    break;
                }
            }
            lambda *= 10.0;
        }
        let Some((trial, trial_sse)) = accepted else {
            // no descent direction left: a stationary point
            converged = true;
            break;
        };
        let change = (current - trial_sse) / current;
        params = trial;
        current = trial_sse;
        lambda = (lambda / 10.0).max(1e-12);
        if current == 0.0 || change < RELATIVE_TOLERANCE {
            converged = true;
        }
    }
    Ok(LogisticFit { params, sse: current, iterations, converged })
}
