//! Exact nearest-neighbor search over integer voxel positions.
//!
//! A balanced k-d tree stored implicitly in a permutation of point indices.
//! Distances are squared Euclidean in `u64`, so comparisons are exact and
//! ties resolve to the lowest point index.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;

use crate::cloud::{PointCloud, Position};
use crate::error::{Error, Result};

const LEAF_SIZE: usize = 8;

#[inline]
pub fn squared_distance(a: &Position, b: &Position) -> u64 {
    let dx = i64::from(a[0]) - i64::from(b[0]);
    let dy = i64::from(a[1]) - i64::from(b[1]);
    let dz = i64::from(a[2]) - i64::from(b[2]);
    (dx * dx + dy * dy + dz * dz) as u64
}

/// Nearest-neighbor index borrowing the points of a cloud.
#[derive(Debug, Clone)]
pub struct NnIndex<'a> {
    points: &'a [Position],
    order: Vec<u32>,
    // split axis for the node whose pivot sits at the same slot in `order`
    axes: Vec<u8>,
}

/// A search hit: point index and squared distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Neighbor {
    pub distance2: u64,
    pub index: u32,
}

impl<'a> NnIndex<'a> {
    pub fn build(cloud: &'a PointCloud) -> Result<Self> {
        Self::from_points(cloud.positions())
    }

    pub fn from_points(points: &'a [Position]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCloud);
        }
        assert!(points.len() <= u32::MAX as usize);
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        let mut axes = alloc::vec![0u8; points.len()];
        build_node(points, &mut order, &mut axes);
        Ok(NnIndex { points, order, axes })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &'a [Position] {
        self.points
    }

    /// Exact nearest neighbor; ties go to the lowest index.
    pub fn nearest(&self, query: &Position) -> Neighbor {
        let mut best = Neighbor { distance2: u64::MAX, index: u32::MAX };
        self.nearest_in(0, self.order.len(), query, &mut best);
        best
    }

    fn nearest_in(&self, lo: usize, hi: usize, query: &Position, best: &mut Neighbor) {
        if hi - lo <= LEAF_SIZE {
            for &i in &self.order[lo..hi] {
                let cand = Neighbor { distance2: squared_distance(&self.points[i as usize], query), index: i };
                if cand < *best {
                    *best = cand;
                }
            }
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let pivot = self.order[mid];
        let axis = self.axes[mid] as usize;
        let cand = Neighbor { distance2: squared_distance(&self.points[pivot as usize], query), index: pivot };
        if cand < *best {
            *best = cand;
        }
        let diff = i64::from(query[axis]) - i64::from(self.points[pivot as usize][axis]);
        let plane = (diff * diff) as u64;
        let (first, second) = if diff < 0 { ((lo, mid), (mid + 1, hi)) } else { ((mid + 1, hi), (lo, mid)) };
        self.nearest_in(first.0, first.1, query, best);
        // equal distance may still hide a lower index on the far side
        if plane <= best.distance2 {
            self.nearest_in(second.0, second.1, query, best);
        }
    }

    /// The `k` nearest points sorted by `(distance, index)`.
    pub fn k_nearest(&self, query: &Position, k: usize) -> Vec<Neighbor> {
        let k = k.min(self.len());
        if k == 0 {
            return Vec::new();
        }
        let mut heap = BinaryHeap::with_capacity(k + 1);
        self.k_nearest_in(0, self.order.len(), query, k, &mut heap);
        heap.into_sorted_vec()
    }

    fn k_nearest_in(&self, lo: usize, hi: usize, query: &Position, k: usize, heap: &mut BinaryHeap<Neighbor>) {
        let offer = |i: u32, heap: &mut BinaryHeap<Neighbor>| {
            let cand = Neighbor { distance2: squared_distance(&self.points[i as usize], query), index: i };
            if heap.len() < k {
                heap.push(cand);
            } else if heap.peek().is_some_and(|top| cand < *top) {
                heap.pop();
                heap.push(cand);
            }
        };
        if hi - lo <= LEAF_SIZE {
            for &i in &self.order[lo..hi] {
                offer(i, heap);
            }
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let pivot = self.order[mid];
        let axis = self.axes[mid] as usize;
        offer(pivot, heap);
        let diff = i64::from(query[axis]) - i64::from(self.points[pivot as usize][axis]);
        let plane = (diff * diff) as u64;
        let (first, second) = if diff < 0 { ((lo, mid), (mid + 1, hi)) } else { ((mid + 1, hi), (lo, mid)) };
        self.k_nearest_in(first.0, first.1, query, k, heap);
        if heap.len() < k || heap.peek().is_some_and(|top| plane <= top.distance2) {
            self.k_nearest_in(second.0, second.1, query, k, heap);
        }
    }
}

fn build_node(points: &[Position], order: &mut [u32], axes: &mut [u8]) {
    if order.len() <= LEAF_SIZE {
        return;
    }
    let mut lo = [u32::MAX; 3];
    let mut hi = [0u32; 3];
    for &i in order.iter() {
        let p = &points[i as usize];
        for a in 0..3 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let axis = (0..3).max_by_key(|&a| (hi[a] - lo[a], core::cmp::Reverse(a))).unwrap_or(0);
    let mid = order.len() / 2;
    order.select_nth_unstable_by_key(mid, |&i| (points[i as usize][axis], i));
    axes[mid] = axis as u8;
    let (left, rest) = order.split_at_mut(mid);
    let (left_axes, rest_axes) = axes.split_at_mut(mid);
    build_node(points, left, left_axes);
    build_node(points, &mut rest[1..], &mut rest_axes[1..]);
}
