//! Recovery primitives: segment comparison, four-line
//! classification, planar Minkowski reconstruction and global patching.

mod lines;
mod minkowski;
mod patch;
mod segment;

pub use lines::{line_pair_classify, right_angle_guard, LinePairVerdict, Pairing, ParamLine};
pub use minkowski::minkowski_2d;
pub use patch::{global_patch, relation_holds, PatchInput, PatchRecord, Sign};
pub use segment::{segment_pair_test, SegmentVerdict};

use crate::kernel::Vector;

/// Nonzero integer directions with coordinates in `-r..=r`, small ones first.
pub(crate) fn grid_directions(r: i64) -> impl Iterator<Item = Vector> {
    (1..=r).flat_map(|m| {
        (-m..=m).flat_map(move |x| {
            (-m..=m).flat_map(move |y| {
                (-m..=m)
                    .filter(move |&z| x.abs().max(y.abs()).max(z.abs()) == m)
                    .map(move |z| Vector::xyz(x, y, z))
            })
        })
    })
}
