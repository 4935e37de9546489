//! Writes padded view images as PNG files for inspection.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use pcqa_core::pipeline::BranchViews;
use pcqa_core::{Color, Grid};

use crate::error::{Error, Result};

pub fn write_png(path: &Path, image: &Grid<Color>) -> Result<()> {
    let io = |e| Error::io(path, e);
    let file = File::create(path).map_err(io)?;
    let mut enc = png::Encoder::new(BufWriter::new(file), image.cols() as u32, image.rows() as u32);
    enc.set_color(png::ColorType::Rgb);
    enc.set_depth(png::BitDepth::Eight);
    let data: Vec<u8> = image.as_slice().iter().flatten().copied().collect();
    let mut w = enc.write_header().map_err(|e| Error::format(path, e.to_string()))?;
    w.write_image_data(&data).map_err(|e| Error::format(path, e.to_string()))?;
    w.finish().map_err(|e| Error::format(path, e.to_string()))
}

/// One PNG per branch, coloring and plane: `<branch>_<coloring>_<plane>.png`,
/// where the coloring is `reference` or `degraded`. Returns the written paths.
pub fn dump_views(dir: &Path, branches: &[&BranchViews]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for views in branches {
        for pair in &views.pairs {
            for (coloring, image) in [("reference", &pair.reference), ("degraded", &pair.degraded)] {
                let path = dir.join(format!("{}_{coloring}_{}.png", views.branch.token(), pair.plane.token()));
                write_png(&path, image)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}
