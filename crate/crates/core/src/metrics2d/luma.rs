use crate::cloud::Color;
use crate::grid::Grid;

/// Luminance plane in `[0, 255]`.
pub type LumaImage = Grid<f64>;

const KR: f64 = 0.2126;
const KG: f64 = 0.7152;
const KB: f64 = 0.0722;

/// BT.709 luma of one color.
#[inline]
pub fn luma(c: Color) -> f64 {
    KR * f64::from(c[0]) + KG * f64::from(c[1]) + KB * f64::from(c[2])
}

pub fn rgb_to_luma(image: &Grid<Color>) -> LumaImage {
    image.map(|&c| luma(c))
}
