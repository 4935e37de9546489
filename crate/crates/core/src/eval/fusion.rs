use crate::error::{Error, Result};
use crate::pipeline::FusionParams;

use super::check_lengths;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Least-squares `(alpha, beta)` for `mos ≈ alpha * s_ref + beta * s_deg`, no intercept.
///
/// Solved by modified Gram-Schmidt on the two columns, which keeps the
/// conditioning of the problem rather than squaring it.
pub fn fit_fusion(s_ref: &[f64], s_deg: &[f64], mos: &[f64]) -> Result<FusionParams> {
    check_lengths(s_ref, s_deg)?;
    check_lengths(s_ref, mos)?;
    if s_ref.len() < 2 {
        return Err(Error::NotEnoughSamples { needed: 2, got: s_ref.len() });
    }
    let r11 = libm::sqrt(dot(s_ref, s_ref));
    let a2_norm = libm::sqrt(dot(s_deg, s_deg));
    if r11 == 0.0 || a2_norm == 0.0 || !r11.is_finite() || !a2_norm.is_finite() {
        return Err(Error::DegenerateBranchScores);
    }
    let q1: alloc::vec::Vec<f64> = s_ref.iter().map(|x| x / r11).collect();
    let r12 = dot(&q1, s_deg);
    let v: alloc::vec::Vec<f64> = s_deg.iter().zip(&q1).map(|(a, q)| a - r12 * q).collect();
    let r22 = libm::sqrt(dot(&v, &v));
    if r22 <= 1e-10 * a2_norm {
        return Err(Error::DegenerateBranchScores);
    }
    let c1 = dot(&q1, mos);
    let rest: alloc::vec::Vec<f64> = mos.iter().zip(&q1).map(|(m, q)| m - c1 * q).collect();
    let c2 = dot(&v, &rest) / r22;
    let beta = c2 / r22;
    let alpha = (c1 - r12 * beta) / r11;
    Ok(FusionParams { alpha, beta })
}

/// Sum of squared residuals of a fusion on the given data.
pub fn fusion_residual(params: FusionParams, s_ref: &[f64], s_deg: &[f64], mos: &[f64]) -> f64 {
    s_ref
        .iter()
        .zip(s_deg)
        .zip(mos)
        .map(|((r, d), m)| {
            let e = m - params.fuse(*r, *d);
            e * e
        })
        .sum()
}
