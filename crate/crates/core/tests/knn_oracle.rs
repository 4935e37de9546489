mod common;

use common::{brute_nearest, sq};
use pcqa_core::kdtree::{squared_distance, Neighbor};
use pcqa_core::{NnIndex, Position};
use proptest::prelude::*;

fn points(max: u32, n: usize) -> impl Strategy<Value = Vec<Position>> {
    prop::collection::vec([0..max, 0..max, 0..max], 1..n)
}

proptest! {
    #[test]
    fn nearest_matches_scan(pts in points(32, 300), queries in prop::collection::vec([0u32..40, 0..40, 0..40], 1..20)) {
        let idx = NnIndex::from_points(&pts).unwrap();
        for q in &queries {
            let got = idx.nearest(q);
            let want = brute_nearest(q, &pts);
            prop_assert_eq!(got.index as usize, want);
            prop_assert_eq!(got.distance2, sq(q, &pts[want]));
        }
    }

    #[test]
    fn k_nearest_matches_sorted_scan(pts in points(8, 120), q in [0u32..10, 0..10, 0..10], k in 1usize..40) {
        let idx = NnIndex::from_points(&pts).unwrap();
        let mut all: Vec<Neighbor> = pts
            .iter()
            .enumerate()
            .map(|(i, p)| Neighbor { distance2: squared_distance(p, &q), index: i as u32 })
            .collect();
        all.sort();
        all.truncate(k);
        prop_assert_eq!(idx.k_nearest(&q, k), all);
    }
}
