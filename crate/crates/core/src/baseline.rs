//! MPEG-style point-based metrics: point-to-point (D1), point-to-plane (D2),
//! Hausdorff distance and point luma PSNR.
//!
//! Directional errors use nearest-neighbor correspondences; symmetric values
//! take the worse (larger) of the two directions.

use alloc::vec::Vec;

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::kdtree::{squared_distance, NnIndex};
use crate::metrics2d::{luma as luma_of, psnr_from_mse};
use crate::normals::estimate_normals;
use crate::par;

/// Peak signal used for the geometry PSNRs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeometryPeak {
    /// `3 (2^p - 1)^2`, the squared diagonal of the precision box.
    #[default]
    BoxDiagonal,
    /// `(2^p - 1)^2`.
    AxisRange,
}

impl GeometryPeak {
    pub fn value(self, precision: u8) -> f64 {
        let m = f64::from((1u32 << precision) - 1);
        match self {
            GeometryPeak::BoxDiagonal => 3.0 * m * m,
            GeometryPeak::AxisRange => m * m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MseReport {
    /// For every reference point, error against its nearest degraded point.
    pub reference_to_degraded: f64,
    /// For every degraded point, error against its nearest reference point.
    pub degraded_to_reference: f64,
    /// Symmetric value: the larger direction.
    pub mse: f64,
    pub psnr: f64,
}

impl MseReport {
    fn new(ab: f64, ba: f64, peak: f64) -> Self {
        let mse = ab.max(ba);
        MseReport { reference_to_degraded: ab, degraded_to_reference: ba, mse, psnr: psnr_from_mse(mse, peak) }
    }
}

/// Where D2 gets the reference normals from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalSource {
    /// Normals stored on the reference cloud; error when absent.
    FromCloud,
    /// Stored normals when present, otherwise PCA over `k` neighbors.
    EstimateIfMissing { k: usize },
}

fn check_pair(reference: &PointCloud, degraded: &PointCloud) -> Result<()> {
    if reference.is_empty() || degraded.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if reference.precision() != degraded.precision() {
        return Err(Error::PrecisionMismatch(reference.precision(), degraded.precision()));
    }
    Ok(())
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

struct Pairing {
    ref_to_deg: Vec<u32>,
    deg_to_ref: Vec<u32>,
}

fn pairing(reference: &PointCloud, degraded: &PointCloud) -> Result<Pairing> {
    let m = crate::recolor::compute_correspondences(reference, degraded)?;
    Ok(Pairing { ref_to_deg: m.nn_a, deg_to_ref: m.nn_b })
}

/// Point-to-point mean squared error and PSNR.
pub fn d1(reference: &PointCloud, degraded: &PointCloud, peak: GeometryPeak) -> Result<MseReport> {
    check_pair(reference, degraded)?;
    let p = pairing(reference, degraded)?;
    let (r, d) = (reference.positions(), degraded.positions());
    let ab: Vec<f64> = (0..r.len()).map(|i| squared_distance(&r[i], &d[p.ref_to_deg[i] as usize]) as f64).collect();
    let ba: Vec<f64> = (0..d.len()).map(|j| squared_distance(&d[j], &r[p.deg_to_ref[j] as usize]) as f64).collect();
    Ok(MseReport::new(mean(&ab), mean(&ba), peak.value(reference.precision())))
}

/// Squared projection of `a - b` onto `normal`.
pub fn plane_error(a: &[u32; 3], b: &[u32; 3], normal: &[f64; 3]) -> f64 {
    let e = [f64::from(a[0]) - f64::from(b[0]), f64::from(a[1]) - f64::from(b[1]), f64::from(a[2]) - f64::from(b[2])];
    let dot = e[0] * normal[0] + e[1] * normal[1] + e[2] * normal[2];
    dot * dot
}

/// Point-to-plane error using the reference-side normal of each pair.
pub fn d2(
    reference: &PointCloud,
    degraded: &PointCloud,
    normals: NormalSource,
    peak: GeometryPeak,
) -> Result<MseReport> {
    check_pair(reference, degraded)?;
    let estimated;
    let n: &[[f64; 3]] = match (reference.normals(), normals) {
        (Some(n), _) => n,
        (None, NormalSource::FromCloud) => return Err(Error::MissingNormals),
        (None, NormalSource::EstimateIfMissing { k }) => {
            estimated = estimate_normals(reference, k)?;
            &estimated
        }
    };
    let p = pairing(reference, degraded)?;
    let (r, d) = (reference.positions(), degraded.positions());
    let ab: Vec<f64> = (0..r.len()).map(|i| plane_error(&r[i], &d[p.ref_to_deg[i] as usize], &n[i])).collect();
    let ba: Vec<f64> = (0..d.len())
        .map(|j| {
            let i = p.deg_to_ref[j] as usize;
            plane_error(&d[j], &r[i], &n[i])
        })
        .collect();
    Ok(MseReport::new(mean(&ab), mean(&ba), peak.value(reference.precision())))
}

/// Largest nearest-neighbor distance over both directions.
pub fn hausdorff_po2po(reference: &PointCloud, degraded: &PointCloud) -> Result<f64> {
    check_pair(reference, degraded)?;
    let (index_r, index_d) = par::join(|| NnIndex::build(reference), || NnIndex::build(degraded));
    let (index_r, index_d) = (index_r?, index_d?);
    let worst = |from: &PointCloud, into: &NnIndex<'_>| {
        from.positions().iter().map(|p| into.nearest(p).distance2).max().unwrap_or(0)
    };
    let (ab, ba) = par::join(|| worst(reference, &index_d), || worst(degraded, &index_r));
    Ok(libm::sqrt(ab.max(ba) as f64))
}

/// Luma MSE between each point and its nearest neighbor in the other cloud.
pub fn point_y_psnr(reference: &PointCloud, degraded: &PointCloud) -> Result<MseReport> {
    check_pair(reference, degraded)?;
    let p = pairing(reference, degraded)?;
    let (rc, dc) = (reference.colors(), degraded.colors());
    let sq = |a: f64, b: f64| (a - b) * (a - b);
    let ab: Vec<f64> = (0..rc.len()).map(|i| sq(luma_of(rc[i]), luma_of(dc[p.ref_to_deg[i] as usize]))).collect();
    let ba: Vec<f64> = (0..dc.len()).map(|j| sq(luma_of(dc[j]), luma_of(rc[p.deg_to_ref[j] as usize]))).collect();
    Ok(MseReport::new(mean(&ab), mean(&ba), 255.0 * 255.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics2d::PSNR_CAP_DB;
    use alloc::vec;

    fn cloud(p: u8, positions: Vec<[u32; 3]>) -> PointCloud {
        let colors = vec![[100, 100, 100]; positions.len()];
        PointCloud::new(positions, colors, p).unwrap()
    }

    #[test]
    fn identical_clouds_are_perfect() {
        let a =
            cloud(6, vec![[0, 0, 0], [5, 1, 2], [9, 9, 9], [30, 2, 1]]).with_normals(vec![[0.0, 0.0, 1.0]; 4]).unwrap();
        let r = d1(&a, &a, GeometryPeak::BoxDiagonal).unwrap();
        assert_eq!((r.mse, r.psnr), (0.0, PSNR_CAP_DB));
        let r = d2(&a, &a, NormalSource::FromCloud, GeometryPeak::BoxDiagonal).unwrap();
        assert_eq!((r.mse, r.psnr), (0.0, PSNR_CAP_DB));
        assert_eq!(hausdorff_po2po(&a, &a).unwrap(), 0.0);
        assert_eq!(point_y_psnr(&a, &a).unwrap().psnr, PSNR_CAP_DB);
    }

    #[test]
    fn d1_single_pair() {
        let a = cloud(10, vec![[0, 0, 0]]);
        let b = cloud(10, vec![[3, 0, 0]]);
        let r = d1(&a, &b, GeometryPeak::BoxDiagonal).unwrap();
        assert_eq!(r.reference_to_degraded, 9.0);
        assert_eq!(r.degraded_to_reference, 9.0);
        let want = 10.0 * (3.0f64 * 1023.0 * 1023.0 / 9.0).log10();
        assert!((r.psnr - want).abs() < 1e-12);
        assert!((r.psnr - 55.43).abs() < 5e-3);
        let axis = d1(&a, &b, GeometryPeak::AxisRange).unwrap();
        assert!((r.psnr - axis.psnr - 10.0 * 3f64.log10()).abs() < 1e-9);
    }

    #[test]
    fn d2_projects_onto_reference_normal() {
        let a = cloud(4, vec![[0, 0, 0]]).with_normals(vec![[0.0, 0.0, 1.0]]).unwrap();
        let sideways = cloud(4, vec![[1, 0, 0]]);
        let r = d2(&a, &sideways, NormalSource::FromCloud, GeometryPeak::BoxDiagonal).unwrap();
        assert_eq!(r.mse, 0.0);
        assert!(d1(&a, &sideways, GeometryPeak::BoxDiagonal).unwrap().mse > 0.0);
        let along = cloud(4, vec![[0, 0, 2]]);
        let r = d2(&a, &along, NormalSource::FromCloud, GeometryPeak::BoxDiagonal).unwrap();
        assert_eq!(r.mse, 4.0);
    }

    #[test]
    fn d2_needs_normals() {
        let a = cloud(4, vec![[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]]);
        assert_eq!(d2(&a, &a, NormalSource::FromCloud, GeometryPeak::BoxDiagonal), Err(Error::MissingNormals));
        assert!(d2(&a, &a, NormalSource::EstimateIfMissing { k: 3 }, GeometryPeak::BoxDiagonal).is_ok());
    }

    #[test]
    fn hausdorff_is_dominated_by_outlier() {
        let a = cloud(8, vec![[0, 0, 0], [1, 0, 0], [2, 0, 0]]);
        let b = cloud(8, vec![[0, 0, 0], [1, 0, 0], [2, 0, 0], [2, 100, 0]]);
        assert_eq!(hausdorff_po2po(&a, &b).unwrap(), 100.0);
        assert_eq!(hausdorff_po2po(&b, &a).unwrap(), 100.0);
    }

    #[test]
    fn point_luma_single_pair() {
        let a = PointCloud::new(vec![[0, 0, 0]], vec![[100, 100, 100]], 4).unwrap();
        let b = PointCloud::new(vec![[0, 0, 1]], vec![[110, 110, 110]], 4).unwrap();
        let r = point_y_psnr(&a, &b).unwrap();
        assert!((r.mse - 100.0).abs() < 1e-9);
        assert!((r.psnr - 28.1308).abs() < 1e-4);
    }

    #[test]
    fn precision_mismatch() {
        let a = cloud(4, vec![[0, 0, 0]]);
        let b = cloud(5, vec![[0, 0, 0]]);
        assert_eq!(d1(&a, &b, GeometryPeak::BoxDiagonal), Err(Error::PrecisionMismatch(4, 5)));
    }
}
