//! SSIM and MS-SSIM with an 11x11 Gaussian window (sigma 1.5) evaluated over
//! the valid region only.

use alloc::vec::Vec;

use super::LumaImage;
use crate::error::{Error, Result};
use crate::grid::Grid;

pub const SSIM_WINDOW: usize = 11;
const SIGMA: f64 = 1.5;
const K1: f64 = 0.01;
const K2: f64 = 0.03;
const DYNAMIC_RANGE: f64 = 255.0;

/// Per-scale exponents, finest scale first.
pub const MS_SSIM_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];

fn kernel() -> [f64; SSIM_WINDOW] {
    let mut k = [0.0; SSIM_WINDOW];
    let center = (SSIM_WINDOW - 1) as f64 / 2.0;
    for (i, v) in k.iter_mut().enumerate() {
        let x = i as f64 - center;
        *v = libm::exp(-(x * x) / (2.0 * SIGMA * SIGMA));
    }
    let sum: f64 = k.iter().sum();
    k.map(|v| v / sum)
}

/// Separable valid-mode Gaussian filter.
fn blur(data: &[f64], rows: usize, cols: usize, k: &[f64; SSIM_WINDOW]) -> Vec<f64> {
    let out_cols = cols + 1 - SSIM_WINDOW;
    let out_rows = rows + 1 - SSIM_WINDOW;
    let mut horizontal = Vec::with_capacity(rows * out_cols);
    for r in 0..rows {
        let row = &data[r * cols..(r + 1) * cols];
        for c in 0..out_cols {
            horizontal.push(row[c..c + SSIM_WINDOW].iter().zip(k).map(|(a, b)| a * b).sum::<f64>());
        }
    }
    let mut out = alloc::vec![0.0; out_rows * out_cols];
    for (t, &w) in k.iter().enumerate() {
        for r in 0..out_rows {
            let src = &horizontal[(r + t) * out_cols..(r + t + 1) * out_cols];
            let dst = &mut out[r * out_cols..(r + 1) * out_cols];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += w * s;
            }
        }
    }
    out
}

fn check_shapes(a: &LumaImage, b: &LumaImage) -> Result<()> {
    if a.shape() != b.shape() {
        let (r0, c0) = a.shape();
        let (r1, c1) = b.shape();
        return Err(Error::ShapeMismatch(r0, c0, r1, c1));
    }
    let (rows, cols) = a.shape();
    if rows.min(cols) < SSIM_WINDOW {
        return Err(Error::ImageTooSmall { rows, cols, min: SSIM_WINDOW });
    }
    Ok(())
}

/// Mean SSIM and mean contrast-structure term.
fn ssim_terms(a: &LumaImage, b: &LumaImage) -> (f64, f64) {
    let (rows, cols) = a.shape();
    let k = kernel();
    let (xa, xb) = (a.as_slice(), b.as_slice());
    let aa: Vec<f64> = xa.iter().map(|v| v * v).collect();
    let bb: Vec<f64> = xb.iter().map(|v| v * v).collect();
    let ab: Vec<f64> = xa.iter().zip(xb).map(|(x, y)| x * y).collect();
    let mu_a = blur(xa, rows, cols, &k);
    let mu_b = blur(xb, rows, cols, &k);
    let s_aa = blur(&aa, rows, cols, &k);
    let s_bb = blur(&bb, rows, cols, &k);
    let s_ab = blur(&ab, rows, cols, &k);
    let c1 = (K1 * DYNAMIC_RANGE) * (K1 * DYNAMIC_RANGE);
    let c2 = (K2 * DYNAMIC_RANGE) * (K2 * DYNAMIC_RANGE);
    let mut ssim_sum = 0.0;
    let mut cs_sum = 0.0;
    for i in 0..mu_a.len() {
        let (ma, mb) = (mu_a[i], mu_b[i]);
        let var_a = s_aa[i] - ma * ma;
        let var_b = s_bb[i] - mb * mb;
        let cov = s_ab[i] - ma * mb;
        let luminance = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
        let cs = (2.0 * cov + c2) / (var_a + var_b + c2);
        ssim_sum += luminance * cs;
        cs_sum += cs;
    }
    let n = mu_a.len() as f64;
    (ssim_sum / n, cs_sum / n)
}

pub fn ssim(reference: &LumaImage, degraded: &LumaImage) -> Result<f64> {
    check_shapes(reference, degraded)?;
    Ok(ssim_terms(reference, degraded).0)
}

fn halve(img: &LumaImage) -> LumaImage {
    let rows = img.rows() / 2;
    let cols = img.cols() / 2;
    Grid::from_fn(rows, cols, |r, c| {
        0.25 * (img[(2 * r, 2 * c)] + img[(2 * r + 1, 2 * c)] + img[(2 * r, 2 * c + 1)] + img[(2 * r + 1, 2 * c + 1)])
    })
}

/// Number of dyadic scales that keep at least one full window, at most five.
pub fn ms_ssim_scales(rows: usize, cols: usize) -> usize {
    let mut side = rows.min(cols);
    let mut scales = 0;
    while scales < MS_SSIM_WEIGHTS.len() && side >= SSIM_WINDOW {
        scales += 1;
        side /= 2;
    }
    scales
}

/// Multi-scale SSIM. Uses as many scales as fit (weights renormalized);
/// negative per-scale terms are clamped to zero before exponentiation.
pub fn ms_ssim(reference: &LumaImage, degraded: &LumaImage) -> Result<f64> {
    check_shapes(reference, degraded)?;
    let scales = ms_ssim_scales(reference.rows(), reference.cols());
    let total: f64 = MS_SSIM_WEIGHTS[..scales].iter().sum();
    let mut a = reference.clone();
    let mut b = degraded.clone();
    let mut result = 1.0;
    for (s, &w) in MS_SSIM_WEIGHTS[..scales].iter().enumerate() {
        let (full, cs) = ssim_terms(&a, &b);
        let term = if s + 1 == scales { full } else { cs };
        result *= libm::pow(term.max(0.0), w / total);
        if s + 1 < scales {
            a = halve(&a);
            b = halve(&b);
        }
    }
    Ok(result)
}
