#![allow(dead_code)]

use std::collections::BTreeSet;

use pcqa_core::{Color, PointCloud, Position};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `n` distinct random voxels inside the `2^p` box.
pub fn random_positions(rng: &mut ChaCha8Rng, n: usize, p: u8) -> Vec<Position> {
    let side = 1u32 << p;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for _ in 0..n {
        let q = [rng.random_range(0..side), rng.random_range(0..side), rng.random_range(0..side)];
        if seen.insert(q) {
            out.push(q);
        }
    }
    out
}

pub fn random_colors(rng: &mut ChaCha8Rng, n: usize) -> Vec<Color> {
    (0..n).map(|_| [rng.random(), rng.random(), rng.random()]).collect()
}

pub fn random_cloud(rng: &mut ChaCha8Rng, n: usize, p: u8) -> PointCloud {
    let pos = random_positions(rng, n, p);
    let col = random_colors(rng, pos.len());
    PointCloud::new(pos, col, p).unwrap()
}

pub fn sq(a: &Position, b: &Position) -> u64 {
    (0..3).map(|i| (i64::from(a[i]) - i64::from(b[i])).pow(2) as u64).sum()
}

/// Nearest point of `into` for `q` by exhaustive search, lowest index on ties.
pub fn brute_nearest(q: &Position, into: &[Position]) -> usize {
    let mut best = 0;
    for (i, p) in into.iter().enumerate() {
        if sq(q, p) < sq(q, &into[best]) {
            best = i;
        }
    }
    best
}

/// A closed, textured surface: the shell of a box with some bumps, so every
/// face of the precision cube sees content.
pub fn textured_shell(p: u8, margin: u32, seed: u32) -> PointCloud {
    let side = 1u32 << p;
    let (lo, hi) = (margin, side - 1 - margin);
    let mut pos = Vec::new();
    let mut col = Vec::new();
    for x in lo..=hi {
        for y in lo..=hi {
            for z in lo..=hi {
                let on_face = x == lo || x == hi || y == lo || y == hi || z == lo || z == hi;
                if !on_face {
                    continue;
                }
                pos.push([x, y, z]);
                let v = (x * 7 + y * 13 + z * 3 + seed) % 97;
                col.push([
                    (40 + (x * 5 + v) % 180) as u8,
                    (30 + (y * 3 + z * 2) % 200) as u8,
                    (60 + ((x ^ y ^ z) * 11 + seed) % 160) as u8,
                ]);
            }
        }
    }
    PointCloud::new(pos, col, p).unwrap()
}
