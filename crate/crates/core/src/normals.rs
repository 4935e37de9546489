//! Per-point normals from local PCA, needed by the point-to-plane baseline.

use alloc::vec::Vec;

use crate::cloud::{norm, PointCloud};
use crate::error::{Error, Result};
use crate::kdtree::NnIndex;
use crate::linalg::symmetric_eigen3;
use crate::par;

pub const DEFAULT_NEIGHBORS: usize = 16;

/// Unit normal per point: the eigenvector of the smallest covariance
/// eigenvalue over the `k` nearest neighbors (the point itself included).
/// Normals are oriented away from the cloud centroid.
pub fn estimate_normals(cloud: &PointCloud, k: usize) -> Result<Vec<[f64; 3]>> {
    if k < 3 {
        return Err(Error::InvalidArgument(alloc::format!("k = {k}, need k >= 3")));
    }
    if k > cloud.len() {
        return Err(Error::NotEnoughPoints { k, points: cloud.len() });
    }
    let index = NnIndex::build(cloud)?;
    let points = cloud.positions();
    let n = points.len() as f64;
    let mut centroid = [0.0; 3];
    for p in points {
        for a in 0..3 {
            centroid[a] += f64::from(p[a]);
        }
    }
    let centroid = centroid.map(|c| c / n);

    Ok(par::map_range(points.len(), |i| {
        let hood = index.k_nearest(&points[i], k);
        let mut mean = [0.0; 3];
        for nb in &hood {
            let q = &points[nb.index as usize];
            for a in 0..3 {
                mean[a] += f64::from(q[a]);
            }
        }
        let mean = mean.map(|m| m / hood.len() as f64);
        let mut cov = [[0.0; 3]; 3];
        for nb in &hood {
            let q = &points[nb.index as usize];
            let d = [f64::from(q[0]) - mean[0], f64::from(q[1]) - mean[1], f64::from(q[2]) - mean[2]];
            for r in 0..3 {
                for c in 0..3 {
                    cov[r][c] += d[r] * d[c];
                }
            }
        }
        let (_, vectors) = symmetric_eigen3(cov);
        let mut normal = vectors[0];
        let len = norm(&normal);
        normal = normal.map(|c| c / len);
        let out = [
            f64::from(points[i][0]) - centroid[0],
            f64::from(points[i][1]) - centroid[1],
            f64::from(points[i][2]) - centroid[2],
        ];
        if normal[0] * out[0] + normal[1] * out[1] + normal[2] * out[2] < 0.0 {
            normal = normal.map(|c| -c);
        }
        normal
    }))
}
