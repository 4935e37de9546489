//! Orthographic projection onto the six faces of the precision box, plus
//! back-surface filtering, cropping and padding of the projected views.

mod crop;
mod filter;
mod map;
mod pad;

pub use crop::{compute_crop, crop, CropRect};
pub use filter::{filter_occlusions, filter_view, DEFAULT_TAU, DEFAULT_WINDOW};
pub use map::project;
pub use pad::{pad, MAX_PAD_ITERATIONS, PAD_TOLERANCE};

use alloc::vec::Vec;

use crate::cloud::Color;
use crate::grid::Grid;

pub const BACKGROUND: Color = [255, 255, 255];

/// Which extremum of the perpendicular coordinate a view keeps per pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DepthRule {
    /// Smallest coordinate wins (depth buffer initialized to `2^p`).
    Minimum,
    /// Largest coordinate wins (depth buffer initialized to 0).
    Maximum,
}

/// The six projection planes. The primed planes lie on the far corner of the
/// box, `(2^p, 2^p, 2^p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaneId {
    Xy,
    Xz,
    Yz,
    XyPrime,
    XzPrime,
    YzPrime,
}

impl PlaneId {
    pub const ALL: [PlaneId; 6] =
        [PlaneId::Xy, PlaneId::Xz, PlaneId::Yz, PlaneId::XyPrime, PlaneId::XzPrime, PlaneId::YzPrime];

    pub fn token(self) -> &'static str {
        match self {
            PlaneId::Xy => "xy",
            PlaneId::Xz => "xz",
            PlaneId::Yz => "yz",
            PlaneId::XyPrime => "xy_prime",
            PlaneId::XzPrime => "xz_prime",
            PlaneId::YzPrime => "yz_prime",
        }
    }

    /// Accepts the canonical tokens and the `x'y`/`xy'` spellings.
    pub fn parse(token: &str) -> Option<Self> {
        Some(match token.trim().to_ascii_lowercase().as_str() {
            "xy" => PlaneId::Xy,
            "xz" => PlaneId::Xz,
            "yz" => PlaneId::Yz,
            "xy_prime" | "x'y" | "xy'" => PlaneId::XyPrime,
            "xz_prime" | "x'z" | "xz'" => PlaneId::XzPrime,
            "yz_prime" | "y'z" | "yz'" => PlaneId::YzPrime,
            _ => return None,
        })
    }

    /// Axes addressed by (row, col) and the perpendicular depth axis.
    pub fn axes(self) -> (usize, usize, usize) {
        match self {
            PlaneId::Xy | PlaneId::XyPrime => (0, 1, 2),
            PlaneId::Xz | PlaneId::XzPrime => (0, 2, 1),
            PlaneId::Yz | PlaneId::YzPrime => (1, 2, 0),
        }
    }

    /// Unprimed planes keep the largest perpendicular coordinate, primed
    /// planes the smallest.
    pub fn depth_rule(self) -> DepthRule {
        match self {
            PlaneId::Xy | PlaneId::Xz | PlaneId::Yz => DepthRule::Maximum,
            _ => DepthRule::Minimum,
        }
    }
}

impl core::fmt::Display for PlaneId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.token())
    }
}

/// One projected view: colors, occupancy and the depth buffer it was built with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewImage {
    pub plane: PlaneId,
    pub image: Grid<Color>,
    pub occupancy: Grid<bool>,
    pub depth: Grid<u32>,
}

impl ViewImage {
    pub fn occupied_count(&self) -> usize {
        self.occupancy.as_slice().iter().filter(|&&o| o).count()
    }
}

/// Six views in [`PlaneId::ALL`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionSet {
    pub views: Vec<ViewImage>,
    pub precision: u8,
}

impl ProjectionSet {
    pub fn view(&self, plane: PlaneId) -> &ViewImage {
        &self.views[PlaneId::ALL.iter().position(|&p| p == plane).unwrap_or(0)]
    }
}
