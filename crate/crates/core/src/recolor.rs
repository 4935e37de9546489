//! Color transfer between clouds with different geometry.
//!
//! Each point of the geometry source takes the mean color of the color-source
//! points that chose it as nearest neighbor; points nobody chose fall back to
//! the color of their own nearest neighbor.

use alloc::vec::Vec;

use crate::cloud::{Color, PointCloud};
use crate::error::{Error, Result};
use crate::kdtree::NnIndex;
use crate::par;

/// Nearest-neighbor maps in both directions between clouds `A` and `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceMap {
    /// For each point of `A`, its nearest neighbor in `B`.
    pub nn_a: Vec<u32>,
    /// For each point of `B`, its nearest neighbor in `A`.
    pub nn_b: Vec<u32>,
}

impl CorrespondenceMap {
    /// The same correspondences viewed from `B` to `A`.
    pub fn swapped(&self) -> Self {
        CorrespondenceMap { nn_a: self.nn_b.clone(), nn_b: self.nn_a.clone() }
    }
}

/// Nearest neighbors from every point of `a` into `b`, ties to the lowest index.
pub fn nearest_into(a: &PointCloud, b: &NnIndex<'_>) -> Vec<u32> {
    let pts = a.positions();
    par::map_range(pts.len(), |i| b.nearest(&pts[i]).index)
}

pub fn compute_correspondences(a: &PointCloud, b: &PointCloud) -> Result<CorrespondenceMap> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let (index_a, index_b) = par::join(|| NnIndex::build(a), || NnIndex::build(b));
    let (index_a, index_b) = (index_a?, index_b?);
    let (nn_a, nn_b) = par::join(|| nearest_into(a, &index_b), || nearest_into(b, &index_a));
    Ok(CorrespondenceMap { nn_a, nn_b })
}

/// Geometry of `geometry_src`, colors taken from `color_src`.
pub fn recolor(geometry_src: &PointCloud, color_src: &PointCloud) -> Result<PointCloud> {
    let map = compute_correspondences(geometry_src, color_src)?;
    recolor_with(geometry_src, color_src, &map)
}

/// Like [`recolor`] with precomputed correspondences (`A` = geometry source).
pub fn recolor_with(geometry_src: &PointCloud, color_src: &PointCloud, map: &CorrespondenceMap) -> Result<PointCloud> {
    if map.nn_a.len() != geometry_src.len() {
        return Err(Error::LengthMismatch(map.nn_a.len(), geometry_src.len()));
    }
    if map.nn_b.len() != color_src.len() {
        return Err(Error::LengthMismatch(map.nn_b.len(), color_src.len()));
    }
    let mut sums = alloc::vec![[0u64; 3]; geometry_src.len()];
    let mut counts = alloc::vec![0u64; geometry_src.len()];
    for (b, &a) in map.nn_b.iter().enumerate() {
        let c = color_src.colors()[b];
        let s = &mut sums[a as usize];
        for ch in 0..3 {
            s[ch] += u64::from(c[ch]);
        }
        counts[a as usize] += 1;
    }
    let colors: Vec<Color> = (0..geometry_src.len())
        .map(|a| match counts[a] {
            0 => color_src.colors()[map.nn_a[a] as usize],
            n => sums[a].map(|s| ((2 * s + n) / (2 * n)) as u8),
        })
        .collect();
    geometry_src.with_colors(colors)
}
