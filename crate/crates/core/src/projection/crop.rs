use super::ViewImage;
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Inclusive pixel rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CropRect {
    pub row_min: usize,
    pub col_min: usize,
    pub row_max: usize,
    pub col_max: usize,
}

impl CropRect {
    pub fn rows(&self) -> usize {
        self.row_max - self.row_min + 1
    }

    pub fn cols(&self) -> usize {
        self.col_max - self.col_min + 1
    }
}

/// Tightest rectangle holding every occupied pixel.
pub fn compute_crop(occupancy: &Grid<bool>) -> Result<CropRect> {
    let mut rect: Option<CropRect> = None;
    for r in 0..occupancy.rows() {
        for c in 0..occupancy.cols() {
            if !occupancy[(r, c)] {
                continue;
            }
            let e = rect.get_or_insert(CropRect { row_min: r, col_min: c, row_max: r, col_max: c });
            e.col_min = e.col_min.min(c);
            e.col_max = e.col_max.max(c);
            e.row_max = r;
        }
    }
    rect.ok_or(Error::NothingProjected)
}

pub fn crop(view: &ViewImage, rect: CropRect) -> ViewImage {
    let CropRect { row_min, col_min, row_max, col_max } = rect;
    ViewImage {
        plane: view.plane,
        image: view.image.sub_grid(row_min, col_min, row_max, col_max),
        occupancy: view.occupancy.sub_grid(row_min, col_min, row_max, col_max),
        depth: view.depth.sub_grid(row_min, col_min, row_max, col_max),
    }
}
