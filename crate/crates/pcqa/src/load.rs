//! Reading and voxelizing PLY inputs.

use std::fs::File;
use std::path::Path;

use pcqa_core::cloud::{voxelize_pair, voxelize_with, Normalization};
use pcqa_core::{PointCloud, RawCloud};

use crate::error::{Error, Result};
use crate::ply::read_ply;

/// Precision used for non-integer inputs when none is given.
pub const DEFAULT_FLOAT_PRECISION: u8 = 10;

pub fn read_raw(path: &Path) -> Result<RawCloud> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let cloud = read_ply(file).map_err(|source| Error::Ply { path: path.to_path_buf(), source })?;
    if cloud.is_empty() {
        return Err(Error::format(path, "point cloud has no vertices"));
    }
    Ok(cloud)
}

fn pick_precision(clouds: &[&RawCloud], precision: Option<u8>) -> u8 {
    precision.unwrap_or_else(|| {
        clouds
            .iter()
            .map(|c| c.infer_precision())
            .try_fold(1u8, |p, q| q.map(|q| p.max(q)))
            .unwrap_or(DEFAULT_FLOAT_PRECISION)
    })
}

/// Loads a single cloud. Integer data keeps its coordinates; without an
/// explicit precision the smallest covering one is used.
pub fn load_cloud(path: &Path, precision: Option<u8>) -> Result<PointCloud> {
    let raw = read_raw(path)?;
    let p = pick_precision(&[&raw], precision);
    Ok(voxelize_with(&raw, p, Normalization::Auto)?)
}

/// Loads a reference/degraded pair onto one voxel grid.
pub fn load_pair(reference: &Path, degraded: &Path, precision: Option<u8>) -> Result<(PointCloud, PointCloud)> {
    let (r, d) = (read_raw(reference)?, read_raw(degraded)?);
    let p = pick_precision(&[&r, &d], precision);
    Ok(voxelize_pair(&r, &d, p, Normalization::Auto)?)
}
