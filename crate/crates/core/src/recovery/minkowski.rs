use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::kernel::Vector;
use crate::rat::Rat;
use crate::shadow::PlanarBody;

fn is_square_int(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a nonnegative rational, if rational.
fn rat_sqrt(q: &Rat) -> Option<Rat> {
    let n = is_square_int(&q.numer())?;
    let d = is_square_int(&q.denom())?;
    Some(Rat::from_bigints(n, d))
}

/// Upper half-plane first, then counterclockwise.
fn angle_cmp(a: &[Rat; 2], b: &[Rat; 2]) -> std::cmp::Ordering {
    let half = |v: &[Rat; 2]| {
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    };
    half(a)
        .cmp(&half(b))
        .then_with(|| 0.cmp(&(&a[0] * &b[1] - &a[1] * &b[0]).signum()))
}

/// The convex polygon with outer edge normals `normals` and edge lengths
/// `lengths`, in the standard frame of `(0,0,1)`, with its lexicographically
/// smallest vertex at the origin.
///
/// Normals need not be unit vectors. Closure is decided exactly by grouping
/// the terms `ℓ_i d_i / |n_i|` by the square class of `|n_i|²`, since square
/// roots of distinct square classes are linearly independent over the
/// rationals.
pub fn minkowski_2d(normals: &[[Rat; 2]], lengths: &[Rat]) -> Result<PlanarBody> {
    if normals.len() != lengths.len() {
        return Err(Error::InvalidInput(format!(
            "{} normals but {} lengths",
            normals.len(),
            lengths.len()
        )));
    }
    if normals.len() < 3 {
        return Err(Error::DegeneratePolygon);
    }
    if lengths.iter().any(|l| !l.is_positive()) {
        return Err(Error::Precondition("edge lengths must be positive".into()));
    }
    if normals.iter().any(|n| n[0].is_zero() && n[1].is_zero()) {
        return Err(Error::ZeroDirection);
    }
    let k = normals.len();
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (&normals[i], &normals[j]);
            let cross = &a[0] * &b[1] - &a[1] * &b[0];
            let dot = &a[0] * &b[0] + &a[1] * &b[1];
            if cross.is_zero() && dot.is_positive() {
                return Err(Error::ParallelNormals(i, j));
            }
        }
    }

    let q: Vec<Rat> = normals.iter().map(|n| &n[0] * &n[0] + &n[1] * &n[1]).collect();
    // Edge i is (ℓ_i / |n_i|) (−n_y, n_x). Within a square class with
    // representative q_c, |n_i| = r_i sqrt(q_c) with r_i rational.
    let mut classes: Vec<(usize, [Rat; 2])> = Vec::new();
    for i in 0..k {
        let found = classes
            .iter()
            .enumerate()
            .find_map(|(c, (rep, _))| rat_sqrt(&(&q[i] / &q[*rep])).map(|r| (c, r)));
        let (c, r) = match found {
            Some(hit) => hit,
            None => {
                classes.push((i, [Rat::zero(), Rat::zero()]));
                (classes.len() - 1, Rat::one())
            }
        };
        let scale = &lengths[i] / &r;
        let n = &normals[i];
        let sum = &mut classes[c].1;
        sum[0] -= &scale * &n[1];
        sum[1] += &scale * &n[0];
    }
    if classes.iter().any(|(_, s)| !s[0].is_zero() || !s[1].is_zero()) {
        return Err(Error::NotClosed);
    }

    let norms: Vec<Rat> = q.iter().map(rat_sqrt).collect::<Option<_>>().ok_or(Error::IrrationalPolygon)?;
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| angle_cmp(&normals[a], &normals[b]));
    let mut vertices: Vec<[Rat; 2]> = Vec::with_capacity(k);
    let mut cur = [Rat::zero(), Rat::zero()];
    for &i in &order {
        vertices.push(cur.clone());
        let s = &lengths[i] / &norms[i];
        cur = [&cur[0] - &(&s * &normals[i][1]), &cur[1] + &(&s * &normals[i][0])];
    }
    let start = (0..k).min_by(|&a, &b| vertices[a].cmp(&vertices[b])).expect("k >= 3");
    vertices.rotate_left(start);
    let anchor = vertices[0].clone();
    let vertices: Vec<[Rat; 2]> = vertices
        .into_iter()
        .map(|v| [&v[0] - &anchor[0], &v[1] - &anchor[1]])
        .collect();
    PlanarBody::from_frame_coords(&Vector::xyz(0, 0, 1), &vertices, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64) -> [Rat; 2] {
        [Rat::integer(x), Rat::integer(y)]
    }

    #[test]
    fn rectangle() {
        let body = minkowski_2d(
            &[v(1, 0), v(0, 1), v(-1, 0), v(0, -1)],
            &[1, 2, 1, 2].map(Rat::integer),
        )
        .unwrap();
        assert_eq!(body.vertices2d(), vec![v(0, 0), v(2, 0), v(2, 1), v(0, 1)]);
    }

    #[test]
    fn unclosed_lengths() {
        let r = minkowski_2d(
            &[v(1, 0), v(0, 1), v(-1, 0), v(0, -1)],
            &[1, 2, 1, 3].map(Rat::integer),
        );
        assert_eq!(r, Err(Error::NotClosed));
    }

    #[test]
    fn scaled_normals_and_parallel_check() {
        let body = minkowski_2d(&[v(0, -2), v(3, 4), v(-1, 0)], &[4, 5, 3].map(Rat::integer)).unwrap();
        assert_eq!(body.vertices2d(), vec![v(0, 0), v(4, 0), v(0, 3)]);
        assert_eq!(
            minkowski_2d(&[v(1, 0), v(2, 0), v(-1, 0)], &[1, 1, 1].map(Rat::integer)),
            Err(Error::ParallelNormals(0, 1))
        );
    }

    #[test]
    fn irrational_directions_close_but_are_irrational() {
        // Normals (1,1), (-1,1), (-1,-1), (1,-1) with equal lengths: a square
        // rotated by 45 degrees, whose vertices involve sqrt(2).
        let r = minkowski_2d(&[v(1, 1), v(-1, 1), v(-1, -1), v(1, -1)], &[1, 1, 1, 1].map(Rat::integer));
        assert_eq!(r, Err(Error::IrrationalPolygon));
    }
}
