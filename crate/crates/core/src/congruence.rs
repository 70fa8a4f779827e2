//! Congruence of planar polygons under rotations, reflections and
//! translations, and permutation stability across a direction cell.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::direction_space::{DirectionCell, Mode};
use crate::error::{Error, Result};
use crate::kernel::{Polytope, Vector};
use crate::rat::Rat;
use crate::shadow::{planar_body, PlanarBody};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Direct,
    Reflected,
}

/// `x ↦ matrix · x + translation` in orthonormal frame coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Motion {
    pub matrix: [[f64; 2]; 2],
    pub translation: [f64; 2],
}

impl Motion {
    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let m = &self.matrix;
        [
            m[0][0] * p[0] + m[0][1] * p[1] + self.translation[0],
            m[1][0] * p[0] + m[1][1] * p[1] + self.translation[1],
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CongruenceWitness {
    pub orientation: Orientation,
    /// `vertex_map[i]` is the vertex of B matched with vertex `i` of A.
    pub vertex_map: Vec<usize>,
    pub motion: Motion,
}

/// Rotation-minimal cyclic sequences of `(squared edge length, dot product
/// with the next edge)`. Convex counterclockwise polygons turn left at every
/// vertex, so the pair fixes the exterior angle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Code {
    pub direct: Vec<(Rat, Rat)>,
    pub reflected: Vec<(Rat, Rat)>,
}

/// Raw `(lengths, dots)` in the body's scaled metric.
fn sequences(a: &PlanarBody) -> (Vec<Rat>, Vec<Rat>) {
    let k = a.len();
    let edges: Vec<Vector> = (0..k).map(|i| a.edge(i)).collect();
    let lens = edges.iter().map(|e| a.metric(e, e)).collect();
    let dots = (0..k).map(|i| a.metric(&edges[i], &edges[(i + 1) % k])).collect();
    (lens, dots)
}

fn normalize(values: Vec<Rat>, scale: &Rat) -> Vec<Rat> {
    if *scale == Rat::one() {
        values
    } else {
        let inv = scale.recip();
        values.into_iter().map(|v| &v * &inv).collect()
    }
}

fn min_rotation(seq: &[(Rat, Rat)]) -> Vec<(Rat, Rat)> {
    (0..seq.len())
        .map(|s| {
            let mut r = seq.to_vec();
            r.rotate_left(s);
            r
        })
        .min()
        .unwrap_or_default()
}

pub fn canonical_code(a: &PlanarBody) -> Result<Code> {
    if a.len() < 3 {
        return Err(Error::DegeneratePolygon);
    }
    let scale = a.scale();
    let (lens, dots) = sequences(a);
    let (lens, dots) = (normalize(lens, &scale), normalize(dots, &scale));
    let k = lens.len();
    let direct: Vec<(Rat, Rat)> = lens.iter().cloned().zip(dots.iter().cloned()).collect();
    // Reversed traversal: edge j of the reversed polygon is edge k-1-j
    // of the original, and consecutive reversed edges meet at the same
    // vertices, so the dot products shift by one.
    let reflected: Vec<(Rat, Rat)> = (0..k)
        .map(|j| (lens[k - 1 - j].clone(), dots[(2 * k - 2 - j) % k].clone()))
        .collect();
    Ok(Code {
        direct: min_rotation(&direct),
        reflected: min_rotation(&reflected),
    })
}

/// Every rigid motion (with reflections) carrying A onto B.
///
/// Direct witnesses come first, by increasing shift, then reflected ones.
pub fn congruence_witnesses(a: &PlanarBody, b: &PlanarBody) -> Vec<CongruenceWitness> {
    alignments(a, b)
        .into_iter()
        .map(|(orientation, vertex_map)| {
            let motion = motion_for(a, b, orientation, &vertex_map);
            CongruenceWitness {
                orientation,
                vertex_map,
                motion,
            }
        })
        .collect()
}

/// The vertex maps of [`congruence_witnesses`] without the float motions.
pub fn alignments(a: &PlanarBody, b: &PlanarBody) -> Vec<(Orientation, Vec<usize>)> {
    let k = a.len();
    if k < 3 || b.len() != k {
        return Vec::new();
    }
    let (sa, sb) = (a.scale(), b.scale());
    let ((la, da), (lb, db)) = (sequences(a), sequences(b));
    let (la, da, lb, db) = if sa == sb {
        (la, da, lb, db)
    } else {
        (normalize(la, &sa), normalize(da, &sa), normalize(lb, &sb), normalize(db, &sb))
    };
    let mut out = Vec::new();
    for s in 0..k {
        if (0..k).all(|i| la[i] == lb[(i + s) % k] && da[i] == db[(i + s) % k]) {
            out.push((Orientation::Direct, (0..k).map(|i| (i + s) % k).collect()));
        }
    }
    for s in 0..k {
        let at = |i: usize, off: usize| (s + 2 * k - i - off) % k;
        if (0..k).all(|i| la[i] == lb[at(i, 1)] && da[i] == db[at(i, 2)]) {
            out.push((Orientation::Reflected, (0..k).map(|i| at(i, 0)).collect()));
        }
    }
    out
}

/// Vertices in orthonormal frame coordinates, in floating point.
pub fn float_coords(a: &PlanarBody) -> Vec<[f64; 2]> {
    let f = a.frame();
    let units: Vec<Vec<f64>> = f
        .basis
        .iter()
        .map(|e| {
            let v = e.to_f64();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / n).collect()
        })
        .collect();
    a.representatives()
        .iter()
        .map(|p| {
            let p = p.to_f64();
            let dot = |u: &[f64]| u.iter().zip(&p).map(|(x, y)| x * y).sum::<f64>();
            [dot(&units[0]), dot(&units[1])]
        })
        .collect()
}

fn motion_for(a: &PlanarBody, b: &PlanarBody, orientation: Orientation, map: &[usize]) -> Motion {
    let pa = float_coords(a);
    let pb = float_coords(b);
    let flip = |p: [f64; 2]| match orientation {
        Orientation::Direct => p,
        Orientation::Reflected => [p[0], -p[1]],
    };
    let (a0, a1) = (flip(pa[0]), flip(pa[1]));
    let (b0, b1) = (pb[map[0]], pb[map[1]]);
    let theta = (b1[1] - b0[1]).atan2(b1[0] - b0[0]) - (a1[1] - a0[1]).atan2(a1[0] - a0[0]);
    let (s, c) = theta.sin_cos();
    let rot = [[c, -s], [s, c]];
    let matrix = match orientation {
        Orientation::Direct => rot,
        Orientation::Reflected => [[c, s], [s, -c]],
    };
    let ra0 = [rot[0][0] * a0[0] + rot[0][1] * a0[1], rot[1][0] * a0[0] + rot[1][1] * a0[1]];
    Motion {
        matrix,
        translation: [b0[0] - ra0[0], b0[1] - ra0[1]],
    }
}

/// A feature bijection witnessed at every sampled direction of a cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StablePermutation {
    /// Sorted `(feature of P, feature of Q)` pairs; vertex ids for
    /// projections, edge ids for sections.
    pub sigma: Vec<(usize, usize)>,
    pub orientation: Orientation,
    pub support_count: usize,
}

pub type LiftedMap = (Orientation, Vec<(usize, usize)>);

/// Translates polygon vertex maps into maps between 3D feature ids.
pub fn lift_alignments(a: &PlanarBody, b: &PlanarBody, maps: &[(Orientation, Vec<usize>)]) -> BTreeSet<LiftedMap> {
    maps.iter()
        .map(|(o, m)| {
            let mut sigma: Vec<(usize, usize)> = m
                .iter()
                .enumerate()
                .map(|(i, &j)| (a.preimage[i].feature(), b.preimage[j].feature()))
                .collect();
            sigma.sort_unstable();
            (*o, sigma)
        })
        .collect()
}

pub fn stable_permutation(
    p: &Polytope,
    q: &Polytope,
    cell: &DirectionCell,
    mode: Mode,
    samples: &[Vector],
) -> Result<Vec<StablePermutation>> {
    if samples.len() < 2 {
        return Err(Error::Precondition("stable_permutation needs at least 2 samples".into()));
    }
    let mut surviving: Option<BTreeSet<LiftedMap>> = None;
    for xi in samples {
        let a = planar_body(p, xi, mode)?;
        let b = planar_body(q, xi, mode)?;
        let lifted = lift_alignments(&a, &b, &alignments(&a, &b));
        surviving = Some(match surviving {
            None => lifted,
            Some(prev) => prev.intersection(&lifted).cloned().collect(),
        });
    }
    let surviving = surviving.unwrap_or_default();
    if surviving.is_empty() {
        return Err(Error::EmptyIntersection { cell: cell.id });
    }
    Ok(surviving
        .into_iter()
        .map(|(orientation, sigma)| StablePermutation {
            sigma,
            orientation,
            support_count: samples.len(),
        })
        .collect())
}
