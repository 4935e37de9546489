//! Point cloud data model and voxelization.
//!
//! [`RawCloud`] holds coordinates exactly as read from disk (possibly
//! floating point). [`PointCloud`] is the voxelized form every metric works
//! on: integer positions inside `[0, 2^p - 1]^3`, no duplicate voxels, one
//! 8-bit RGB color per point.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type Position = [u32; 3];
pub type Color = [u8; 3];

pub const MIN_PRECISION: u8 = 1;
pub const MAX_PRECISION: u8 = 16;

const NORMAL_TOLERANCE: f64 = 1e-6;

/// A cloud with unconstrained floating-point coordinates.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawCloud {
    pub positions: Vec<[f64; 3]>,
    pub colors: Vec<Color>,
    pub normals: Option<Vec<[f64; 3]>>,
}

impl RawCloud {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// True when every coordinate is a non-negative integer not exceeding `max`.
    fn is_integral_within(&self, max: f64) -> bool {
        self.positions.iter().flatten().all(|&c| c >= 0.0 && c <= max && libm::trunc(c) == c)
    }

    /// Smallest precision whose box contains the data, when the data is
    /// already integer valued.
    pub fn infer_precision(&self) -> Option<u8> {
        if self.is_empty() || !self.is_integral_within(f64::from(u16::MAX)) {
            return None;
        }
        let max = self.positions.iter().flatten().fold(0.0f64, |m, &c| m.max(c)) as u32;
        Some((MIN_PRECISION..=MAX_PRECISION).find(|&p| max < (1u32 << p)).unwrap_or(MAX_PRECISION))
    }
}

impl From<&PointCloud> for RawCloud {
    fn from(cloud: &PointCloud) -> Self {
        RawCloud {
            positions: cloud.positions.iter().map(|p| [f64::from(p[0]), f64::from(p[1]), f64::from(p[2])]).collect(),
            colors: cloud.colors.clone(),
            normals: cloud.normals.clone(),
        }
    }
}

/// A voxelized point cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    positions: Vec<Position>,
    colors: Vec<Color>,
    normals: Option<Vec<[f64; 3]>>,
    precision: u8,
}

fn check_precision(precision: u8) -> Result<()> {
    if (MIN_PRECISION..=MAX_PRECISION).contains(&precision) {
        Ok(())
    } else {
        Err(Error::InvalidPrecision(precision))
    }
}

impl PointCloud {
    /// Validates and wraps voxel data. Positions must be distinct and inside
    /// the precision box.
    pub fn new(positions: Vec<Position>, colors: Vec<Color>, precision: u8) -> Result<Self> {
        check_precision(precision)?;
        if positions.len() != colors.len() {
            return Err(Error::LengthMismatch(positions.len(), colors.len()));
        }
        let max = (1u32 << precision) - 1;
        if let Some(p) = positions.iter().find(|p| p.iter().any(|&c| c > max)) {
            return Err(Error::InvalidCloud(format!("position {p:?} outside [0, {max}] for precision {precision}")));
        }
        let mut sorted = positions.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidCloud(format!("duplicate position {:?}", w[0])));
        }
        Ok(PointCloud { positions, colors, normals: None, precision })
    }

    /// Attaches per-point unit normals.
    pub fn with_normals(mut self, normals: Vec<[f64; 3]>) -> Result<Self> {
        if normals.len() != self.positions.len() {
            return Err(Error::LengthMismatch(self.positions.len(), normals.len()));
        }
        if let Some(n) = normals.iter().find(|n| (norm(n) - 1.0).abs() > NORMAL_TOLERANCE) {
            return Err(Error::InvalidCloud(format!("normal {n:?} is not unit length")));
        }
        self.normals = Some(normals);
        Ok(self)
    }

    /// Same geometry (and normals), new colors.
    pub fn with_colors(&self, colors: Vec<Color>) -> Result<Self> {
        if colors.len() != self.positions.len() {
            return Err(Error::LengthMismatch(self.positions.len(), colors.len()));
        }
        Ok(PointCloud {
            positions: self.positions.clone(),
            colors,
            normals: self.normals.clone(),
            precision: self.precision,
        })
    }

    pub fn without_normals(mut self) -> Self {
        self.normals = None;
        self
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn normals(&self) -> Option<&[[f64; 3]]> {
        self.normals.as_deref()
    }

    pub fn precision(&self) -> u8 {
        self.precision
    }

    /// Side length `2^p` of the precision box.
    pub fn side(&self) -> u32 {
        1u32 << self.precision
    }
}

pub(crate) fn norm(v: &[f64; 3]) -> f64 {
    libm::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
}

/// How [`voxelize_with`] maps raw coordinates onto the integer grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Rescale only when the input is not already integer valued inside the box.
    #[default]
    Auto,
    /// Never rescale; the input must already be integer valued inside the box.
    Disabled,
    /// Always min-max normalize to the bounding cube.
    Enabled,
}

/// Voxelizes with [`Normalization::Auto`].
pub fn voxelize(cloud: &RawCloud, precision: u8) -> Result<PointCloud> {
    voxelize_with(cloud, precision, Normalization::Auto)
}

/// Quantizes coordinates to `[0, 2^p - 1]` and merges duplicate voxels.
///
/// Rescaling maps the bounding cube (per-axis minimum, largest extent) onto
/// the grid and rounds half up. Merged voxels take the per-channel mean color,
/// rounded half up. Output is sorted by `(x, y, z)`.
pub fn voxelize_with(cloud: &RawCloud, precision: u8, normalization: Normalization) -> Result<PointCloud> {
    check_precision(precision)?;
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    check_lengths(cloud)?;
    let max = f64::from((1u32 << precision) - 1);
    let in_grid = cloud.is_integral_within(max);
    let rescale = match normalization {
        Normalization::Auto => !in_grid,
        Normalization::Enabled => true,
        Normalization::Disabled if in_grid => false,
        Normalization::Disabled => {
            return Err(Error::InvalidCloud(format!(
                "coordinates are not integers inside [0, {max}] and normalization is disabled"
            )))
        }
    };

    let quantized = if rescale {
        let (lo, extent) = bounds(core::iter::once(cloud))?;
        quantize(cloud, lo, extent, max)
    } else {
        cloud.positions.iter().map(|p| [p[0] as u32, p[1] as u32, p[2] as u32]).collect()
    };
    merge(cloud, quantized, precision)
}

/// Voxelizes a reference/degraded pair onto one grid.
///
/// When either cloud needs rescaling both are mapped with the bounding cube of
/// their union, so corresponding points land on the same voxels.
pub fn voxelize_pair(
    reference: &RawCloud,
    degraded: &RawCloud,
    precision: u8,
    normalization: Normalization,
) -> Result<(PointCloud, PointCloud)> {
    check_precision(precision)?;
    let max = f64::from((1u32 << precision) - 1);
    let in_grid = reference.is_integral_within(max) && degraded.is_integral_within(max);
    let shared = match normalization {
        Normalization::Auto => !in_grid,
        Normalization::Enabled => true,
        Normalization::Disabled => false,
    };
    if !shared || reference.is_empty() || degraded.is_empty() {
        let n = if shared { Normalization::Enabled } else { normalization };
        return Ok((voxelize_with(reference, precision, n)?, voxelize_with(degraded, precision, n)?));
    }
    check_lengths(reference)?;
    check_lengths(degraded)?;
    let (lo, extent) = bounds([reference, degraded].into_iter())?;
    let a = merge(reference, quantize(reference, lo, extent, max), precision)?;
    let b = merge(degraded, quantize(degraded, lo, extent, max), precision)?;
    Ok((a, b))
}

fn check_lengths(cloud: &RawCloud) -> Result<()> {
    if cloud.colors.len() != cloud.len() {
        return Err(Error::LengthMismatch(cloud.len(), cloud.colors.len()));
    }
    if let Some(n) = &cloud.normals {
        if n.len() != cloud.len() {
            return Err(Error::LengthMismatch(cloud.len(), n.len()));
        }
    }
    Ok(())
}

/// Per-axis minimum and largest extent over all clouds.
fn bounds<'a>(clouds: impl Iterator<Item = &'a RawCloud>) -> Result<([f64; 3], f64)> {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in clouds.flat_map(|c| c.positions.iter()) {
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidCloud(format!("non-finite coordinate {p:?}")));
        }
        for a in 0..3 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let extent = (0..3).map(|a| hi[a] - lo[a]).fold(0.0f64, f64::max);
    if extent <= 0.0 {
        return Err(Error::DegenerateBounds);
    }
    Ok((lo, extent))
}

fn quantize(cloud: &RawCloud, lo: [f64; 3], extent: f64, max: f64) -> Vec<Position> {
    cloud
        .positions
        .iter()
        .map(|p| {
            let mut q = [0u32; 3];
            for a in 0..3 {
                let t = (p[a] - lo[a]) / extent;
                q[a] = libm::floor(t * max + 0.5).clamp(0.0, max) as u32;
            }
            q
        })
        .collect()
}

/// Sorts quantized points and merges those sharing a voxel.
fn merge(cloud: &RawCloud, quantized: Vec<Position>, precision: u8) -> Result<PointCloud> {
    let mut order: Vec<usize> = (0..quantized.len()).collect();
    order.sort_by_key(|&i| (quantized[i], i));

    let mut positions = Vec::with_capacity(order.len());
    let mut colors = Vec::with_capacity(order.len());
    let mut normals = cloud.normals.as_ref().map(|_| Vec::with_capacity(order.len()));
    let mut start = 0;
    while start < order.len() {
        let pos = quantized[order[start]];
        let mut end = start + 1;
        while end < order.len() && quantized[order[end]] == pos {
            end += 1;
        }
        let group = &order[start..end];
        positions.push(pos);
        colors.push(mean_color(group.iter().map(|&i| cloud.colors[i])));
        if let (Some(out), Some(src)) = (normals.as_mut(), cloud.normals.as_ref()) {
            out.push(mean_normal(group.iter().map(|&i| src[i])));
        }
        start = end;
    }

    let cloud = PointCloud { positions, colors, normals: None, precision };
    match normals {
        Some(n) => cloud.with_normals(n),
        None => Ok(cloud),
    }
}

/// Per-channel arithmetic mean, rounded half up.
pub(crate) fn mean_color(colors: impl Iterator<Item = Color>) -> Color {
    let mut sum = [0u64; 3];
    let mut n = 0u64;
    for c in colors {
        for ch in 0..3 {
            sum[ch] += u64::from(c[ch]);
        }
        n += 1;
    }
    debug_assert!(n > 0);
    sum.map(|s| ((2 * s + n) / (2 * n)) as u8)
}

fn mean_normal(normals: impl Iterator<Item = [f64; 3]>) -> [f64; 3] {
    let mut first = None;
    let mut sum = [0.0; 3];
    for n in normals {
        first.get_or_insert(n);
        for a in 0..3 {
            sum[a] += n[a];
        }
    }
    let len = norm(&sum);
    if len > 1e-9 {
        sum.map(|c| c / len)
    } else {
        let f = first.unwrap_or([0.0, 0.0, 1.0]);
        let l = norm(&f);
        f.map(|c| c / l)
    }
}
