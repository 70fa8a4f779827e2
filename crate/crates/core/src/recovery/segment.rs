use serde::{Deserialize, Serialize};

use super::grid_directions;
use crate::error::{Error, Result};
use crate::kernel::Vector;
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentVerdict {
    ParallelEqual { direction: Vector, length2: Rat },
    Distinct { witness: Vector },
}

/// `|a_ξ|² |ξ|²` for the projection of `a` onto `ξ⊥`.
fn projected_len2(a: &Vector, xi: &Vector) -> Rat {
    let along = a.dot(xi);
    &(&a.norm2() * &xi.norm2()) - &(&along * &along)
}

/// Compares segments `AB` and `CD` through their projections.
///
/// `ParallelEqual` holds exactly when `D − C = ±(B − A)`; otherwise the
/// witness is the first supplied direction where the projected lengths
/// differ, or a small integer direction if none of them separates.
pub fn segment_pair_test(a: &Vector, b: &Vector, c: &Vector, d: &Vector, dirs: &[Vector]) -> Result<SegmentVerdict> {
    let u = b - a;
    let v = d - c;
    if u.is_zero() || v.is_zero() {
        return Err(Error::ZeroSegment);
    }
    if let Some(xi) = dirs.iter().find(|xi| projected_len2(&u, xi) != projected_len2(&v, xi)) {
        return Ok(SegmentVerdict::Distinct { witness: xi.clone() });
    }
    if u == v || u == -&v {
        return Ok(SegmentVerdict::ParallelEqual {
            direction: u.canonical_line(),
            length2: u.norm2(),
        });
    }
    // Two distinct quadratic forms of degree 2 cannot agree on a 7x7x7 grid.
    let witness = grid_directions(3)
        .find(|xi| projected_len2(&u, xi) != projected_len2(&v, xi))
        .expect("distinct quadratic forms differ on the grid");
    Ok(SegmentVerdict::Distinct { witness })
}
