#![allow(dead_code)]

use std::fs::File;
use std::path::Path;

use pcqa::ply::{write_ply, Format};
use pcqa_core::cloud::{voxelize_with, Normalization};
use pcqa_core::{PointCloud, RawCloud};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hollow box with bumpy faces and a smooth color texture.
pub fn textured_shell(p: u8, margin: u32) -> PointCloud {
    let side = 1u32 << p;
    let (lo, hi) = (margin, side - 1 - margin);
    let mut raw = RawCloud::default();
    for x in lo..=hi {
        for y in lo..=hi {
            for z in lo..=hi {
                if !(x == lo || x == hi || y == lo || y == hi || z == lo || z == hi) {
                    continue;
                }
                raw.positions.push([f64::from(x), f64::from(y), f64::from(z)]);
                let t = f64::from(x + 2 * y + 3 * z);
                raw.colors.push([
                    (127.0 + 90.0 * (t / 9.0).sin()) as u8,
                    (127.0 + 80.0 * (f64::from(x) / 5.0).cos() * (f64::from(z) / 7.0).sin()) as u8,
                    (40 + (x * y + z) % 170) as u8,
                ]);
            }
        }
    }
    voxelize_with(&raw, p, Normalization::Disabled).unwrap()
}

pub fn gauss(g: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - g.random::<f64>();
    let u2: f64 = g.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Color noise of strength `sigma`; with `jitter` > 0 that fraction of points
/// also moves by one voxel along a random axis.
pub fn degrade(c: &PointCloud, sigma: f64, jitter: f64, seed: u64) -> PointCloud {
    let mut g = rng(seed);
    let max = f64::from(c.side() - 1);
    let mut raw = RawCloud::default();
    for (p, col) in c.positions().iter().zip(c.colors()) {
        let mut q = p.map(f64::from);
        if g.random_bool(jitter) {
            let axis = g.random_range(0..3);
            let step = if g.random_bool(0.5) { 1.0 } else { -1.0 };
            q[axis] = (q[axis] + step).clamp(0.0, max);
        }
        raw.positions.push(q);
        raw.colors.push(col.map(|v| (f64::from(v) + sigma * gauss(&mut g)).round().clamp(0.0, 255.0) as u8));
    }
    voxelize_with(&raw, c.precision(), Normalization::Disabled).unwrap()
}

pub fn write_cloud(path: &Path, c: &PointCloud) {
    write_ply(File::create(path).unwrap(), &RawCloud::from(c), Format::BinaryLittleEndian).unwrap();
}
