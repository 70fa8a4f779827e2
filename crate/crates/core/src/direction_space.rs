//! The exceptional great circles on the direction sphere, the cells they cut
//! out, per-cell sampling and the degeneracy predicates used to dodge the
//! nowhere-dense bad sets.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{frame, Polytope, Vector};
use crate::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Projections,
    Sections,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    FacetParallel { facet: usize, body: usize },
    VertexPerp { vertex: usize, body: usize },
}

/// The great circle `{ξ : ξ · normal = 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreatCircle {
    pub normal: Vector,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Side {
    pub fn of(r: &Rat) -> Option<Side> {
        match r.signum() {
            1 => Some(Side::Plus),
            -1 => Some(Side::Minus),
            _ => None,
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionCell {
    pub id: usize,
    pub sample_point: Vector,
    /// Indices into the circle list of the circles carrying a boundary arc.
    pub bounding_circles: Vec<usize>,
    pub sign_vector: Vec<Side>,
    /// The open cell is the interior of the cone spanned by these vectors
    /// together with `sample_point`.
    #[serde(skip)]
    generators: Vec<Vector>,
}

impl DirectionCell {
    pub fn contains(&self, circles: &[GreatCircle], xi: &Vector) -> bool {
        circles
            .iter()
            .zip(&self.sign_vector)
            .all(|(c, s)| Side::of(&c.normal.dot(xi)) == Some(*s))
    }
}

/// Full arrangement data, kept for the Euler check and plotting.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub circles: Vec<GreatCircle>,
    pub vertices: Vec<Vector>,
    /// Arcs as `(circle, from vertex, to vertex)`, counterclockwise about the
    /// circle normal.
    pub arcs: Vec<(usize, usize, usize)>,
    pub cells: Vec<DirectionCell>,
}

impl Arrangement {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.arcs.len() as i64 + self.cells.len() as i64
    }
}

fn dedup_circles(found: impl Iterator<Item = (Vector, Provenance)>) -> Vec<GreatCircle> {
    let mut by_normal: BTreeMap<Vector, Provenance> = BTreeMap::new();
    for (n, prov) in found {
        by_normal.entry(n.canonical_line()).or_insert(prov);
    }
    by_normal
        .into_iter()
        .map(|(normal, provenance)| GreatCircle { normal, provenance })
        .collect()
}

/// Directions parallel to some facet of `p` or `q`.
pub fn exceptional_projection_set(p: &Polytope, q: &Polytope) -> Vec<GreatCircle> {
    dedup_circles([p, q].into_iter().enumerate().flat_map(|(body, poly)| {
        poly.facets()
            .iter()
            .enumerate()
            .map(move |(facet, f)| (f.normal.clone(), Provenance::FacetParallel { facet, body }))
    }))
}

/// Directions whose orthogonal plane passes through a vertex of `p` or `q`.
pub fn exceptional_section_set(p: &Polytope, q: &Polytope) -> Result<Vec<GreatCircle>> {
    if !p.contains_origin_strictly() || !q.contains_origin_strictly() {
        return Err(Error::OriginNotInterior);
    }
    Ok(dedup_circles([p, q].into_iter().enumerate().flat_map(|(body, poly)| {
        poly.vertices()
            .iter()
            .enumerate()
            .map(move |(vertex, v)| (v.clone(), Provenance::VertexPerp { vertex, body }))
    })))
}

/// Counterclockwise angular comparison of `a` and `b` about `axis`, both
/// orthogonal to it, starting from `reference`.
fn angular_cmp(axis: &Vector, reference: &Vector, a: &Vector, b: &Vector) -> Ordering {
    let side = axis.cross(reference);
    let half = |v: &Vector| {
        let (x, y) = (v.dot(reference), v.dot(&side));
        if y.is_positive() || (y.is_zero() && x.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a)
        .cmp(&half(b))
        .then_with(|| 0.cmp(&axis.dot(&a.cross(b)).signum()))
}

pub fn cells(circles: &[GreatCircle]) -> Vec<DirectionCell> {
    arrangement(circles).cells
}

/// Exact arrangement of great circles with pairwise distinct normal lines.
pub fn arrangement(circles: &[GreatCircle]) -> Arrangement {
    assert!(!circles.is_empty(), "an arrangement needs at least one circle");
    let normals: Vec<&Vector> = circles.iter().map(|c| &c.normal).collect();
    let m = normals.len();

    if m == 1 {
        let n = normals[0];
        let f = frame(n).expect("circle normals are nonzero");
        let [e1, e2] = f.basis;
        let mk = |id: usize, side: Side, sample: Vector| DirectionCell {
            id,
            sample_point: sample,
            bounding_circles: vec![0],
            sign_vector: vec![side],
            generators: vec![e1.clone(), -&e1, e2.clone(), -&e2],
        };
        return Arrangement {
            circles: circles.to_vec(),
            vertices: Vec::new(),
            arcs: Vec::new(),
            cells: vec![mk(0, Side::Plus, n.clone()), mk(1, Side::Minus, -n)],
        };
    }

    // Vertices: both antipodal intersection points of every circle pair.
    let mut vertex_ids: BTreeMap<Vector, usize> = BTreeMap::new();
    let mut vertices: Vec<Vector> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let w = normals[i].cross(normals[j]).primitive();
            for v in [w.clone(), -w] {
                vertex_ids.entry(v.clone()).or_insert_with(|| {
                    vertices.push(v);
                    vertices.len() - 1
                });
            }
        }
    }

    // Arcs and half-edges. Half-edge `2k` runs counterclockwise about the
    // circle normal, `2k + 1` is its twin; the face on the left of `2k`
    // lies on the positive side of the circle.
    let mut arcs: Vec<(usize, usize, usize)> = Vec::new();
    for (ci, n) in normals.iter().enumerate() {
        let mut on: Vec<usize> = (0..vertices.len())
            .filter(|&v| n.dot(&vertices[v]).is_zero())
            .collect();
        let reference = vertices[on[0]].clone();
        on.sort_by(|&a, &b| angular_cmp(n, &reference, &vertices[a], &vertices[b]));
        for k in 0..on.len() {
            arcs.push((ci, on[k], on[(k + 1) % on.len()]));
        }
    }
    let half_count = 2 * arcs.len();
    let origin = |h: usize| {
        let (_, a, b) = arcs[h / 2];
        if h % 2 == 0 {
            a
        } else {
            b
        }
    };
    let tangent = |h: usize| {
        let (ci, _, _) = arcs[h / 2];
        let t = normals[ci].cross(&vertices[origin(h)]);
        if h % 2 == 0 {
            t
        } else {
            -t
        }
    };

    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for h in 0..half_count {
        outgoing[origin(h)].push(h);
    }
    let mut position = vec![0usize; half_count];
    for (v, hs) in outgoing.iter_mut().enumerate() {
        let tangents: Vec<Vector> = hs.iter().map(|&h| tangent(h)).collect();
        let mut order: Vec<usize> = (0..hs.len()).collect();
        order.sort_by(|&a, &b| angular_cmp(&vertices[v], &tangents[0], &tangents[a], &tangents[b]));
        *hs = order.into_iter().map(|k| hs[k]).collect();
        for (k, &h) in hs.iter().enumerate() {
            position[h] = k;
        }
    }
    let next = |h: usize| {
        let twin = h ^ 1;
        let at = &outgoing[origin(twin)];
        at[(position[twin] + at.len() - 1) % at.len()]
    };

    let rank3 = Vector::rank(&normals.iter().map(|n| (*n).clone()).collect::<Vec<_>>()) == 3;
    let mut seen = vec![false; half_count];
    let mut raw_cells: Vec<(Vec<Side>, Vector, Vec<usize>, Vec<Vector>)> = Vec::new();
    for start in 0..half_count {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            cycle.push(h);
            h = next(h);
        }
        let mut bounding: Vec<usize> = cycle.iter().map(|&h| arcs[h / 2].0).collect();
        bounding.sort_unstable();
        bounding.dedup();

        let generators: Vec<Vector> = if rank3 {
            let mut vs: Vec<usize> = cycle.iter().map(|&h| origin(h)).collect();
            vs.sort_unstable();
            vs.dedup();
            vs.into_iter().map(|v| vertices[v].clone()).collect()
        } else {
            // A lune between two circles through the common axis `w`.
            let w = &vertices[origin(cycle[0])];
            let inward: Vec<Vector> = cycle
                .iter()
                .map(|&h| {
                    let n = normals[arcs[h / 2].0];
                    if h % 2 == 0 {
                        n.clone()
                    } else {
                        -n
                    }
                })
                .collect();
            let mut gens = vec![w.clone(), -w];
            for (k, nk) in inward.iter().enumerate() {
                let other = &inward[(k + 1) % inward.len()];
                let r = nk.cross(w);
                let r = if other.dot(&r).is_positive() { r } else { -r };
                gens.push(r.primitive());
            }
            gens.dedup();
            gens
        };
        let sample = if rank3 {
            sum_vectors(&generators).primitive()
        } else {
            sum_vectors(&generators[2..]).primitive()
        };
        let sign_vector: Vec<Side> = normals
            .iter()
            .map(|n| Side::of(&n.dot(&sample)).expect("cell sample lies off every circle"))
            .collect();
        raw_cells.push((sign_vector, sample, bounding, generators));
    }
    raw_cells.sort_by(|a, b| a.0.cmp(&b.0));
    let cells = raw_cells
        .into_iter()
        .enumerate()
        .map(|(id, (sign_vector, sample_point, bounding_circles, generators))| DirectionCell {
            id,
            sample_point,
            bounding_circles,
            sign_vector,
            generators,
        })
        .collect();

    Arrangement {
        circles: circles.to_vec(),
        vertices,
        arcs,
        cells,
    }
}

fn sum_vectors(vs: &[Vector]) -> Vector {
    let mut acc = Vector::zeros(3);
    for v in vs {
        acc = &acc + v;
    }
    acc
}

/// `n` rational directions strictly inside `cell`, deterministic in `seed`.
pub fn sample_cell(cell: &DirectionCell, circles: &[GreatCircle], n: usize, seed: u64) -> Result<Vec<Vector>> {
    sample_cell_filtered(cell, circles, n, seed, |_| true)
}

/// Like [`sample_cell`], rejecting candidates for which `accept` is false.
pub fn sample_cell_filtered(
    cell: &DirectionCell,
    circles: &[GreatCircle],
    n: usize,
    seed: u64,
    mut accept: impl FnMut(&Vector) -> bool,
) -> Result<Vec<Vector>> {
    if n == 0 {
        return Err(Error::Precondition("sample count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = 10_000 * n;
    let mut rejections = 0;
    let mut seen: HashSet<Vector> = HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut candidate = cell.sample_point.scale(&Rat::integer(rng.gen_range(1..=4)));
        for g in &cell.generators {
            let w: i64 = rng.gen_range(0..=8);
            if w != 0 {
                candidate = &candidate + &g.scale(&Rat::integer(w));
            }
        }
        let candidate = candidate.primitive();
        if cell.contains(circles, &candidate) && !seen.contains(&candidate) && accept(&candidate) {
            seen.insert(candidate.clone());
            out.push(candidate);
        } else {
            rejections += 1;
            if rejections >= budget {
                return Err(Error::SamplingExhausted {
                    cell: cell.id,
                    rejections,
                });
            }
        }
    }
    Ok(out)
}

/// Precomputed data for the degeneracy predicates of a pair of bodies.
#[derive(Debug, Clone)]
pub struct DegeneracyOracle {
    mode: Mode,
    /// Projections: distinct edge direction lines with their pairwise dots.
    dirs: Vec<Vector>,
    pair_dots: Vec<(usize, usize, Rat)>,
    /// Sections: the bodies themselves.
    bodies: Vec<Polytope>,
}

impl DegeneracyOracle {
    pub fn new(p: &Polytope, q: &Polytope, mode: Mode) -> DegeneracyOracle {
        let mut dirs: Vec<Vector> = Vec::new();
        let mut pair_dots = Vec::new();
        if mode == Mode::Projections {
            let mut set: Vec<Vector> = [p, q]
                .iter()
                .flat_map(|b| (0..b.edges().len()).map(|e| b.edge_vector(e).canonical_line()))
                .collect();
            set.sort();
            set.dedup();
            for i in 0..set.len() {
                for j in i + 1..set.len() {
                    pair_dots.push((i, j, set[i].dot(&set[j])));
                }
            }
            dirs = set;
        }
        // Sections of −P are negated sections of P, with the same right angles.
        let mut bodies = vec![p.clone()];
        let qs = q.sorted_vertices();
        if qs != p.sorted_vertices() && qs != p.reflect().sorted_vertices() {
            bodies.push(q.clone());
        }
        DegeneracyOracle {
            mode,
            dirs,
            pair_dots,
            bodies,
        }
    }

    pub fn is_degenerate(&self, xi: &Vector) -> bool {
        match self.mode {
            Mode::Projections => {
                let n2 = xi.norm2();
                let along: Vec<Rat> = self.dirs.iter().map(|d| d.dot(xi)).collect();
                self.pair_dots
                    .iter()
                    .any(|(i, j, ab)| ab * &n2 == &along[*i] * &along[*j])
            }
            Mode::Sections => self.bodies.iter().any(|b| section_has_right_angle(b, xi)),
        }
    }
}

/// Whether some vertex triple of `P ∩ ξ⊥` spans a right angle, evaluated on
/// the cleared form with `s_i = a_i·ξ`, `w_i = s_i b_i − (b_i·ξ) a_i`.
fn section_has_right_angle(p: &Polytope, xi: &Vector) -> bool {
    section_has_right_angle_i128(p, xi).unwrap_or_else(|| section_has_right_angle_rat(p, xi))
}

fn section_has_right_angle_rat(p: &Polytope, xi: &Vector) -> bool {
    let heights: Vec<Rat> = p.vertices().iter().map(|v| v.dot(xi)).collect();
    let mut s = Vec::new();
    let mut w = Vec::new();
    for (e, edge) in p.edges().iter().enumerate() {
        let (lo, hi) = edge.vertices;
        if heights[lo].signum() * heights[hi].signum() < 0 {
            let a = p.edge_vector(e);
            let b = p.vertex(lo);
            let sa = a.dot(xi);
            w.push(&b.scale(&sa) - &a.scale(&heights[lo]));
            s.push(sa);
        }
    }
    let k = s.len();
    let gram: Vec<Vec<Rat>> = (0..k).map(|i| (0..k).map(|j| w[i].dot(&w[j])).collect()).collect();
    for p_ in 0..k {
        for q in 0..k {
            for r in q + 1..k {
                if q == p_ || r == p_ {
                    continue;
                }
                let f = &(&(&s[p_] * &s[p_]) * &gram[q][r]) - &(&(&s[p_] * &s[r]) * &gram[q][p_])
                    - &(&s[p_] * &s[q]) * &gram[p_][r]
                    + &(&s[q] * &s[r]) * &gram[p_][p_];
                if f.is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

fn int3(v: &Vector) -> Option<[i128; 3]> {
    Some([v.get(0).as_i128()?, v.get(1).as_i128()?, v.get(2).as_i128()?])
}

fn dot_i128(a: &[i128; 3], b: &[i128; 3]) -> Option<i128> {
    a[0].checked_mul(b[0])?
        .checked_add(a[1].checked_mul(b[1])?)?
        .checked_add(a[2].checked_mul(b[2])?)
}

/// Integer version of [`section_has_right_angle`]: with `d_q = s_p w_q − s_q w_p`
/// the angle at `v_p` is right iff `d_q · d_r = 0`. `None` when the input is
/// not integral or some product overflows.
fn section_has_right_angle_i128(p: &Polytope, xi: &Vector) -> Option<bool> {
    let x = int3(xi)?;
    let mut s = Vec::new();
    let mut w = Vec::new();
    let verts: Vec<[i128; 3]> = p.vertices().iter().map(int3).collect::<Option<_>>()?;
    let heights: Vec<i128> = verts.iter().map(|v| dot_i128(v, &x)).collect::<Option<_>>()?;
    for edge in p.edges() {
        let (lo, hi) = edge.vertices;
        if heights[lo].signum() * heights[hi].signum() < 0 {
            let (b, c) = (verts[lo], verts[hi]);
            let a = [c[0] - b[0], c[1] - b[1], c[2] - b[2]];
            let sa = dot_i128(&a, &x)?;
            let mut wi = [0i128; 3];
            for k in 0..3 {
                wi[k] = b[k].checked_mul(sa)?.checked_sub(a[k].checked_mul(heights[lo])?)?;
            }
            s.push(sa);
            w.push(wi);
        }
    }
    let k = s.len();
    let mut d = vec![[0i128; 3]; k];
    for p_ in 0..k {
        for q in 0..k {
            for c in 0..3 {
                d[q][c] = s[p_].checked_mul(w[q][c])?.checked_sub(s[q].checked_mul(w[p_][c])?)?;
            }
        }
        for q in 0..k {
            for r in q + 1..k {
                if q != p_ && r != p_ && dot_i128(&d[q], &d[r])? == 0 {
                    return Some(true);
                }
            }
        }
    }
    Some(false)
}

/// Degeneracy test for a single direction.
pub fn is_degenerate_direction(xi: &Vector, p: &Polytope, q: &Polytope, mode: Mode) -> bool {
    DegeneracyOracle::new(p, q, mode).is_degenerate(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::hull;

    fn circle(n: Vector) -> GreatCircle {
        GreatCircle {
            normal: n,
            provenance: Provenance::FacetParallel { facet: 0, body: 0 },
        }
    }

    #[test]
    fn octants() {
        let cs: Vec<_> = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
            .iter()
            .map(|&(x, y, z)| circle(Vector::xyz(x, y, z)))
            .collect();
        let arr = arrangement(&cs);
        assert_eq!(arr.cells.len(), 8);
        assert_eq!(arr.euler_characteristic(), 2);
        for c in &arr.cells {
            assert!(c.contains(&cs, &c.sample_point));
            assert_eq!(c.bounding_circles, vec![0, 1, 2]);
        }
    }

    #[test]
    fn single_circle_hemispheres() {
        let cs = vec![circle(Vector::xyz(1, 2, 3))];
        let arr = arrangement(&cs);
        assert_eq!(arr.cells.len(), 2);
        assert_eq!(arr.euler_characteristic(), 2);
    }

    #[test]
    fn coaxial_circles_make_lunes() {
        let cs: Vec<_> = [(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, -3, 0)]
            .iter()
            .map(|&(x, y, z)| circle(Vector::xyz(x, y, z)))
            .collect();
        let arr = arrangement(&cs);
        assert_eq!(arr.cells.len(), 8);
        assert_eq!(arr.euler_characteristic(), 2);
        for c in &arr.cells {
            assert!(c.contains(&cs, &c.sample_point));
            let s = sample_cell(c, &cs, 5, 3).unwrap();
            assert!(s.iter().all(|x| c.contains(&cs, x)));
        }
    }

    #[test]
    fn sampling_is_deterministic_and_inside() {
        let cs: Vec<_> = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
            .iter()
            .map(|&(x, y, z)| circle(Vector::xyz(x, y, z)))
            .collect();
        let cell = cells(&cs).into_iter().find(|c| c.sign_vector == vec![Side::Plus; 3]).unwrap();
        let a = sample_cell(&cell, &cs, 3, 7).unwrap();
        assert_eq!(a, sample_cell(&cell, &cs, 3, 7).unwrap());
        assert!(a.iter().all(|x| x.coords().iter().all(Rat::is_positive)));
        assert!(matches!(sample_cell(&cell, &cs, 0, 7), Err(Error::Precondition(_))));
    }

    #[test]
    fn exceptional_sets() {
        let cube = hull(
            &(0..8)
                .map(|i| Vector::xyz(2 * (i & 1) - 1, (i & 2) - 1, (i & 4) / 2 - 1))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(exceptional_projection_set(&cube, &cube).len(), 3);
        assert_eq!(exceptional_section_set(&cube, &cube).unwrap().len(), 4);
        let corner = cube.translate(&Vector::xyz(1, 1, 1));
        assert_eq!(exceptional_section_set(&corner, &corner), Err(Error::OriginNotInterior));
    }

    #[test]
    fn cube_edge_degeneracy() {
        let cube = hull(
            &(0..8)
                .map(|i| Vector::xyz(i & 1, (i >> 1) & 1, (i >> 2) & 1))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(!is_degenerate_direction(&Vector::xyz(1, 1, 1), &cube, &cube, Mode::Projections));
        assert!(is_degenerate_direction(&Vector::xyz(1, 0, 1), &cube, &cube, Mode::Projections));
    }

    #[test]
    fn right_angle_paths_agree() {
        let cube = hull(
            &(0..8)
                .map(|i| Vector::xyz(2 * (i & 1) - 1, 2 * ((i >> 1) & 1) - 1, 2 * ((i >> 2) & 1) - 1))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        // (0,0,1) cuts a square; (1,2,3) a generic hexagon.
        for (xi, right) in [(Vector::xyz(0, 0, 1), true), (Vector::xyz(1, 2, 3), false)] {
            assert_eq!(section_has_right_angle_i128(&cube, &xi), Some(right));
            assert_eq!(section_has_right_angle_rat(&cube, &xi), right);
        }
    }

    proptest::proptest! {
        #[test]
        fn right_angle_fast_path_matches_rationals(
            pts in proptest::collection::vec((-4i64..=4, -4i64..=4, -4i64..=4), 8..14),
            xi in (-6i64..=6, -6i64..=6, -6i64..=6),
        ) {
            let mut pts: Vec<Vector> = pts.into_iter().map(|(x, y, z)| Vector::xyz(x, y, z)).collect();
            pts.extend([(5, 0, 0), (-5, 0, 0), (0, 5, 0), (0, -5, 0), (0, 0, 5), (0, 0, -5)].map(|(x, y, z)| Vector::xyz(x, y, z)));
            let p = hull(&pts).unwrap();
            let xi = Vector::xyz(xi.0, xi.1, xi.2);
            proptest::prop_assume!(!xi.is_zero() && p.vertices().iter().all(|v| !v.dot(&xi).is_zero()));
            proptest::prop_assert_eq!(section_has_right_angle_i128(&p, &xi), Some(section_has_right_angle_rat(&p, &xi)));
        }
    }
}
