use super::LumaImage;
use crate::error::{Error, Result};

/// Returned when the images are identical.
pub const PSNR_CAP_DB: f64 = 100.0;

pub fn y_psnr(reference: &LumaImage, degraded: &LumaImage) -> Result<f64> {
    if reference.shape() != degraded.shape() {
        let (a, b) = reference.shape();
        let (c, d) = degraded.shape();
        return Err(Error::ShapeMismatch(a, b, c, d));
    }
    let n = reference.as_slice().len();
    if n == 0 {
        return Err(Error::ImageTooSmall { rows: 0, cols: 0, min: 1 });
    }
    let sse: f64 = reference.as_slice().iter().zip(degraded.as_slice()).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(psnr_from_mse(sse / n as f64, 255.0 * 255.0))
}

/// `10 log10(peak / mse)`, capped at [`PSNR_CAP_DB`].
pub(crate) fn psnr_from_mse(mse: f64, peak: f64) -> f64 {
    if mse <= 0.0 {
        return PSNR_CAP_DB;
    }
    (10.0 * libm::log10(peak / mse)).min(PSNR_CAP_DB)
}
