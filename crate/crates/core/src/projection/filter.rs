use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{DepthRule, ProjectionSet, ViewImage, BACKGROUND};
use crate::error::{Error, Result};
use crate::par;

pub const DEFAULT_TAU: u32 = 20;
pub const DEFAULT_WINDOW: usize = 5;

/// Removes pixels that belong to the far side of the object.
///
/// A pixel is dropped when its depth deviates from the mean depth of the
/// occupied pixels in the surrounding `window x window` block (center
/// excluded) by at least `tau` towards the back of the view. Decisions are
/// taken on the unfiltered view and applied together.
pub fn filter_occlusions(set: ProjectionSet, window: usize, tau: u32) -> Result<ProjectionSet> {
    check_params(window, tau)?;
    let ProjectionSet { views, precision } = set;
    let views = par::map_vec(views, |view| filter_view(view, window, tau));
    Ok(ProjectionSet { views, precision })
}

fn check_params(window: usize, tau: u32) -> Result<()> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("window must be odd and >= 3, got {window}")));
    }
    if tau == 0 {
        return Err(Error::InvalidArgument("tau must be positive".into()));
    }
    Ok(())
}

/// Filters a single view; see [`filter_occlusions`].
pub fn filter_view(mut view: ViewImage, window: usize, tau: u32) -> ViewImage {
    let (rows, cols) = view.occupancy.shape();
    if rows == 0 || cols == 0 {
        return view;
    }
    // summed-area tables of occupancy and occupied depth
    let stride = cols + 1;
    let mut count = vec![0u64; (rows + 1) * stride];
    let mut sum = vec![0u64; (rows + 1) * stride];
    for r in 0..rows {
        let mut row_count = 0u64;
        let mut row_sum = 0u64;
        for c in 0..cols {
            if view.occupancy[(r, c)] {
                row_count += 1;
                row_sum += u64::from(view.depth[(r, c)]);
            }
            count[(r + 1) * stride + c + 1] = count[r * stride + c + 1] + row_count;
            sum[(r + 1) * stride + c + 1] = sum[r * stride + c + 1] + row_sum;
        }
    }
    let rect = |t: &[u64], r0: usize, c0: usize, r1: usize, c1: usize| {
        t[r1 * stride + c1] + t[r0 * stride + c0] - t[r0 * stride + c1] - t[r1 * stride + c0]
    };
    let half = window / 2;
    let tau = i128::from(tau);
    let mut removed = Vec::new();
    for r in 0..rows {
        let (r0, r1) = (r.saturating_sub(half), (r + half + 1).min(rows));
        for c in 0..cols {
            if !view.occupancy[(r, c)] {
                continue;
            }
            let (c0, c1) = (c.saturating_sub(half), (c + half + 1).min(cols));
            let depth = i128::from(view.depth[(r, c)]);
            let n = i128::from(rect(&count, r0, c0, r1, c1)) - 1;
            if n == 0 {
                continue;
            }
            let s = i128::from(rect(&sum, r0, c0, r1, c1)) - depth;
            // deviation * n compared against tau * n keeps everything integral
            let deviation = match view.plane.depth_rule() {
                DepthRule::Minimum => depth * n - s,
                DepthRule::Maximum => s - depth * n,
            };
            if deviation >= tau * n {
                removed.push((r, c));
            }
        }
    }
    for (r, c) in removed {
        view.occupancy[(r, c)] = false;
        view.image[(r, c)] = BACKGROUND;
    }
    view
}
