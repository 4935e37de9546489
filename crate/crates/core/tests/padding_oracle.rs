mod common;

use common::rng;
use nalgebra::{DMatrix, DVector};
use pcqa_core::grid::Grid;
use pcqa_core::projection::pad;
use pcqa_core::Color;
use rand::Rng;

fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    if n == 1 {
        return 0;
    }
    let j = if i < 0 {
        -i
    } else if i >= n {
        2 * (n - 1) - i
    } else {
        i
    };
    j as usize
}

/// Exact discrete harmonic fill of one channel by a dense linear solve.
fn laplace_solve(values: &Grid<f64>, known: &Grid<bool>) -> Grid<f64> {
    let (rows, cols) = values.shape();
    let holes: Vec<(usize, usize)> =
        (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).filter(|&(r, c)| !known[(r, c)]).collect();
    let slot = |r: usize, c: usize| holes.iter().position(|&h| h == (r, c));
    let mut a = DMatrix::<f64>::zeros(holes.len(), holes.len());
    let mut b = DVector::<f64>::zeros(holes.len());
    for (i, &(r, c)) in holes.iter().enumerate() {
        a[(i, i)] = 4.0;
        for (dr, dc) in [(-1isize, 0isize), (1, 0), (0, -1), (0, 1)] {
            let (rr, cc) = (reflect(r as isize + dr, rows), reflect(c as isize + dc, cols));
            match slot(rr, cc) {
                Some(j) => a[(i, j)] -= 1.0,
                None => b[i] += values[(rr, cc)],
            }
        }
    }
    let x = a.lu().solve(&b).expect("harmonic system is non-singular");
    let mut out = values.clone();
    for (i, &(r, c)) in holes.iter().enumerate() {
        out[(r, c)] = x[i];
    }
    out
}

fn check_against_solve(image: &Grid<Color>, known: &Grid<bool>) {
    let got = pad(image, known).unwrap();
    for ch in 0..3 {
        let values = image.map(|p| f64::from(p[ch]));
        let want = laplace_solve(&values, known);
        for (i, (g, w)) in got.as_slice().iter().zip(want.as_slice()).enumerate() {
            assert!((f64::from(g[ch]) - w).abs() <= 1.0, "pixel {i} channel {ch}: {} vs {w}", g[ch]);
        }
    }
}

#[test]
fn two_column_boundary_gives_linear_ramp() {
    let (rows, cols) = (9, 21);
    let image = Grid::from_fn(rows, cols, |_, c| if c == 0 { [0; 3] } else { [100; 3] });
    let known = Grid::from_fn(rows, cols, |_, c| c == 0 || c == cols - 1);
    let got = pad(&image, &known).unwrap();
    for r in 0..rows {
        for c in 0..cols {
            let want = 100.0 * c as f64 / (cols - 1) as f64;
            assert!((f64::from(got[(r, c)][0]) - want).abs() <= 1.0, "({r},{c}) {:?} vs {want}", got[(r, c)]);
        }
    }
    check_against_solve(&image, &known);
}

#[test]
fn random_masks_match_linear_solve() {
    let mut g = rng(21);
    for _ in 0..25 {
        let (rows, cols) = (g.random_range(1..=18), g.random_range(1..=18));
        let density = g.random_range(0.05..0.9);
        let mut known = Grid::from_fn(rows, cols, |_, _| g.random_bool(density));
        known[(g.random_range(0..rows), g.random_range(0..cols))] = true;
        let image = Grid::from_fn(rows, cols, |_, _| [g.random(), g.random(), g.random()]);
        check_against_solve(&image, &known);
    }
}

#[test]
fn padding_preserves_known_pixels_and_range() {
    let mut g = rng(22);
    for _ in 0..50 {
        let (rows, cols) = (g.random_range(1..=64), g.random_range(1..=64));
        let mut known = Grid::from_fn(rows, cols, |_, _| g.random_bool(0.3));
        known[(0, 0)] = true;
        let image = Grid::from_fn(rows, cols, |_, _| [g.random_range(40..200), g.random(), g.random_range(0..30)]);
        let got = pad(&image, &known).unwrap();
        for ch in 0..3 {
            let occupied = || image.as_slice().iter().zip(known.as_slice()).filter(|(_, &k)| k).map(|(p, _)| p[ch]);
            let (lo, hi) = (occupied().min().unwrap(), occupied().max().unwrap());
            for (i, px) in got.as_slice().iter().enumerate() {
                if known.as_slice()[i] {
                    assert_eq!(*px, image.as_slice()[i]);
                }
                assert!((lo..=hi).contains(&px[ch]));
            }
        }
    }
}
