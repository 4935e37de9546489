use alloc::vec::Vec;

use super::{PlaneId, ProjectionSet, ViewImage, BACKGROUND};
use crate::cloud::PointCloud;
use crate::grid::Grid;
use crate::par;

/// Projects a voxelized cloud onto the six planes of its precision box.
///
/// Each axis pair (e.g. `xy` and its primed twin) is one sequential pass over
/// the points in cloud order. A point is written to the minimum-depth view
/// when its depth is `<=` the current minimum buffer and to the maximum-depth
/// view when `>=` the current maximum buffer; ties cannot occur on voxelized
/// input.
pub fn project(cloud: &PointCloud) -> ProjectionSet {
    let pairs = [(PlaneId::Xy, PlaneId::XyPrime), (PlaneId::Xz, PlaneId::XzPrime), (PlaneId::Yz, PlaneId::YzPrime)];
    let mut projected = par::map_range(pairs.len(), |i| project_pair(cloud, pairs[i].0, pairs[i].1));
    let mut views: Vec<ViewImage> = Vec::with_capacity(6);
    let mut primed = Vec::with_capacity(3);
    for (max_view, min_view) in projected.drain(..) {
        views.push(max_view);
        primed.push(min_view);
    }
    views.extend(primed);
    ProjectionSet { views, precision: cloud.precision() }
}

fn project_pair(cloud: &PointCloud, max_plane: PlaneId, min_plane: PlaneId) -> (ViewImage, ViewImage) {
    let side = cloud.side() as usize;
    let (ra, ca, da) = max_plane.axes();
    let mut near = Grid::new(side, side, 0u32);
    let mut far = Grid::new(side, side, cloud.side());
    let mut img_max = Grid::new(side, side, BACKGROUND);
    let mut img_min = Grid::new(side, side, BACKGROUND);
    let mut occ_max = Grid::new(side, side, false);
    let mut occ_min = Grid::new(side, side, false);
    for (p, &color) in cloud.positions().iter().zip(cloud.colors()) {
        let (r, c, d) = (p[ra] as usize, p[ca] as usize, p[da]);
        if d <= far[(r, c)] {
            img_min[(r, c)] = color;
            occ_min[(r, c)] = true;
            far[(r, c)] = d;
        }
        if d >= near[(r, c)] {
            img_max[(r, c)] = color;
            occ_max[(r, c)] = true;
            near[(r, c)] = d;
        }
    }
    (
        ViewImage { plane: max_plane, image: img_max, occupancy: occ_max, depth: near },
        ViewImage { plane: min_plane, image: img_min, occupancy: occ_min, depth: far },
    )
}
