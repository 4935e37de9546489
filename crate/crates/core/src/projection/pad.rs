//! Hole filling for projected views by harmonic (Laplace) diffusion.
//!
//! Unoccupied pixels converge to the mean of their four neighbors while
//! occupied pixels stay fixed; the image border is mirrored. Relaxation is
//! Gauss-Seidel, seeded coarse-to-fine from an occupancy-weighted pyramid so
//! large holes converge in few sweeps. Every update is a convex combination of
//! known values, so the result obeys the discrete maximum principle.

use alloc::vec::Vec;

use crate::cloud::Color;
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Relaxation stops once no pixel moves by this much in a sweep.
pub const PAD_TOLERANCE: f32 = 0.01;
/// Sweep budget per pyramid level.
pub const MAX_PAD_ITERATIONS: usize = 2000;

/// Fills unoccupied pixels; occupied pixels are returned bit-exact.
pub fn pad(image: &Grid<Color>, occupancy: &Grid<bool>) -> Result<Grid<Color>> {
    if image.shape() != occupancy.shape() {
        let (a, b) = image.shape();
        let (c, d) = occupancy.shape();
        return Err(Error::ShapeMismatch(a, b, c, d));
    }
    let known = occupancy.as_slice();
    if !known.iter().any(|&k| k) {
        return Err(Error::EmptyPaddingMask);
    }
    if known.iter().all(|&k| k) {
        return Ok(image.clone());
    }
    let (rows, cols) = image.shape();
    let mut out = image.clone();
    for ch in 0..3 {
        let values: Vec<f32> = image.as_slice().iter().map(|p| f32::from(p[ch])).collect();
        let filled = harmonic_fill(Level { rows, cols, values, known: known.to_vec() });
        for (i, px) in out.as_mut_slice().iter_mut().enumerate() {
            if !known[i] {
                px[ch] = libm::floorf(filled[i] + 0.5).clamp(0.0, 255.0) as u8;
            }
        }
    }
    Ok(out)
}

struct Level {
    rows: usize,
    cols: usize,
    values: Vec<f32>,
    known: Vec<bool>,
}

impl Level {
    fn downsample(&self) -> Level {
        let rows = self.rows.div_ceil(2);
        let cols = self.cols.div_ceil(2);
        let mut values = alloc::vec![0.0f32; rows * cols];
        let mut known = alloc::vec![false; rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                let mut sum = 0.0f32;
                let mut n = 0u32;
                for fr in 2 * r..(2 * r + 2).min(self.rows) {
                    for fc in 2 * c..(2 * c + 2).min(self.cols) {
                        let i = fr * self.cols + fc;
                        if self.known[i] {
                            sum += self.values[i];
                            n += 1;
                        }
                    }
                }
                if n > 0 {
                    values[r * cols + c] = sum / n as f32;
                    known[r * cols + c] = true;
                }
            }
        }
        Level { rows, cols, values, known }
    }

    fn relax(&mut self) {
        let holes: Vec<usize> = (0..self.values.len()).filter(|&i| !self.known[i]).collect();
        if holes.is_empty() {
            return;
        }
        let (rows, cols) = (self.rows, self.cols);
        let mirror = |i: usize, n: usize, up: bool| -> usize {
            match (up, n) {
                (_, 1) => 0,
                (true, _) if i + 1 == n => i - 1,
                (true, _) => i + 1,
                (false, _) if i == 0 => 1,
                (false, _) => i - 1,
            }
        };
        for _ in 0..MAX_PAD_ITERATIONS {
            let mut max_change = 0.0f32;
            for &i in &holes {
                let (r, c) = (i / cols, i % cols);
                let v = &self.values;
                let sum = v[mirror(r, rows, false) * cols + c]
                    + v[mirror(r, rows, true) * cols + c]
                    + v[r * cols + mirror(c, cols, false)]
                    + v[r * cols + mirror(c, cols, true)];
                let new = 0.25 * sum;
                max_change = max_change.max((new - self.values[i]).abs());
                self.values[i] = new;
            }
            if max_change < PAD_TOLERANCE {
                break;
            }
        }
    }
}

fn harmonic_fill(finest: Level) -> Vec<f32> {
    let mut pyramid = alloc::vec![finest];
    loop {
        let top = pyramid.last().expect("non-empty pyramid");
        if top.known.iter().all(|&k| k) || (top.rows == 1 && top.cols == 1) {
            break;
        }
        let next = top.downsample();
        pyramid.push(next);
    }

    let top = pyramid.last_mut().expect("non-empty pyramid");
    let (sum, n) = top
        .values
        .iter()
        .zip(&top.known)
        .filter(|(_, &k)| k)
        .fold((0.0f64, 0usize), |(s, n), (&v, _)| (s + f64::from(v), n + 1));
    let seed = (sum / n as f64) as f32;
    for (v, &k) in top.values.iter_mut().zip(&top.known) {
        if !k {
            *v = seed;
        }
    }
    top.relax();

    while pyramid.len() > 1 {
        let coarse = pyramid.pop().expect("len > 1");
        let fine = pyramid.last_mut().expect("len > 0");
        for r in 0..fine.rows {
            for c in 0..fine.cols {
                let i = r * fine.cols + c;
                if !fine.known[i] {
                    fine.values[i] = coarse.values[(r / 2) * coarse.cols + c / 2];
                }
            }
        }
        fine.relax();
    }
    pyramid.pop().expect("finest level").values
}
