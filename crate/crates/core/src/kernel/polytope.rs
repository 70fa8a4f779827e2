use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::Vector;
use crate::rat::Rat;

/// A facet `{x : normal · x = offset}` with `normal · x <= offset` on the body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Facet {
    /// Outer normal, primitive integer coordinates.
    pub normal: Vector,
    pub offset: Rat,
    /// Vertex indices, counterclockwise seen from outside, starting at the
    /// smallest index.
    pub cycle: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    /// `(lo, hi)` vertex indices.
    pub vertices: (usize, usize),
    /// `(lo, hi)` facet indices.
    pub facets: (usize, usize),
}

/// A full-dimensional convex polytope in 3-space with its face lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    vertices: Vec<Vector>,
    facets: Vec<Facet>,
    edges: Vec<Edge>,
    edge_index: HashMap<(usize, usize), usize>,
}

const DIM: usize = 3;

/// Convex hull of a finite point set in 3-space.
///
/// Vertices come out in lexicographic order, facets sorted by outer normal
/// and edges sorted by vertex pair.
pub fn hull(points: &[Vector]) -> Result<Polytope> {
    for p in points {
        if p.dim() != DIM {
            return Err(Error::DimensionMismatch {
                expected: DIM,
                got: p.dim(),
            });
        }
    }
    let mut pts: Vec<Vector> = points.to_vec();
    pts.sort();
    pts.dedup();

    let affine_dim = if pts.is_empty() {
        0
    } else {
        let diffs: Vec<Vector> = pts[1..].iter().map(|p| p - &pts[0]).collect();
        Vector::rank(&diffs)
    };
    if affine_dim < DIM {
        return Err(Error::DegenerateInput(affine_dim));
    }

    // Supporting planes through point triples, keyed by primitive outer normal.
    let n = pts.len();
    let mut planes: BTreeMap<Vector, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let eij = &pts[j] - &pts[i];
            for k in j + 1..n {
                if planes
                    .values()
                    .any(|on| on.contains(&i) && on.contains(&j) && on.contains(&k))
                {
                    continue;
                }
                let normal = eij.cross(&(&pts[k] - &pts[i]));
                if normal.is_zero() {
                    continue;
                }
                let base = normal.dot(&pts[i]);
                let (mut pos, mut neg) = (false, false);
                let mut on = Vec::new();
                for (m, p) in pts.iter().enumerate() {
                    match normal.dot(p).cmp(&base) {
                        std::cmp::Ordering::Greater => pos = true,
                        std::cmp::Ordering::Less => neg = true,
                        std::cmp::Ordering::Equal => on.push(m),
                    }
                    if pos && neg {
                        break;
                    }
                }
                if pos && neg {
                    continue;
                }
                let outer = if pos { -normal } else { normal };
                planes.entry(outer.primitive()).or_insert(on);
            }
        }
    }

    // Each facet's extreme points, counterclockwise about the outer normal.
    let mut facet_cycles: Vec<(Vector, Vec<usize>)> = Vec::with_capacity(planes.len());
    for (normal, on) in planes {
        let cycle = planar_hull_3d(&pts, &on, &normal);
        facet_cycles.push((normal, cycle));
    }

    let mut used: Vec<usize> = facet_cycles.iter().flat_map(|(_, c)| c.iter().copied()).collect();
    used.sort_unstable();
    used.dedup();
    let remap: HashMap<usize, usize> = used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let vertices: Vec<Vector> = used.iter().map(|&i| pts[i].clone()).collect();

    let mut facets: Vec<Facet> = facet_cycles
        .into_iter()
        .map(|(normal, cycle)| {
            let mut cycle: Vec<usize> = cycle.iter().map(|i| remap[i]).collect();
            let start = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap_or(0);
            cycle.rotate_left(start);
            let offset = normal.dot(&vertices[cycle[0]]);
            Facet { normal, offset, cycle }
        })
        .collect();
    facets.sort_by(|a, b| a.normal.cmp(&b.normal));

    let mut incidence: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (f, facet) in facets.iter().enumerate() {
        let c = &facet.cycle;
        for idx in 0..c.len() {
            let (u, v) = (c[idx], c[(idx + 1) % c.len()]);
            incidence.entry((u.min(v), u.max(v))).or_default().push(f);
        }
    }
    let mut edges = Vec::with_capacity(incidence.len());
    for (pair, fs) in incidence {
        assert_eq!(fs.len(), 2, "edge {pair:?} must bound exactly two facets");
        edges.push(Edge {
            vertices: pair,
            facets: (fs[0].min(fs[1]), fs[0].max(fs[1])),
        });
    }
    let edge_index = edges.iter().enumerate().map(|(i, e)| (e.vertices, i)).collect();

    Ok(Polytope {
        vertices,
        facets,
        edges,
        edge_index,
    })
}

fn orient_about(normal: &Vector, a: &Vector, b: &Vector, c: &Vector) -> i32 {
    normal.dot(&(b - a).cross(&(c - a))).signum()
}

/// Strictly convex hull of coplanar points, counterclockwise about `normal`.
/// Lexicographic order on the points is a valid sweep order within any plane.
fn planar_hull_3d(pts: &[Vector], on: &[usize], normal: &Vector) -> Vec<usize> {
    let mut idx: Vec<usize> = on.to_vec();
    idx.sort_by(|&a, &b| pts[a].cmp(&pts[b]));
    if idx.len() < 3 {
        return idx;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && orient_about(normal, &pts[lower[lower.len() - 2]], &pts[lower[lower.len() - 1]], &pts[i]) <= 0
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && orient_about(normal, &pts[upper[upper.len() - 2]], &pts[upper[upper.len() - 1]], &pts[i]) <= 0
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl Polytope {
    pub fn dim(&self) -> usize {
        DIM
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vector {
        &self.vertices[i]
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&(u.min(v), u.max(v))).copied()
    }

    /// Direction vector `v_hi - v_lo` of an edge.
    pub fn edge_vector(&self, e: usize) -> Vector {
        let (a, b) = self.edges[e].vertices;
        &self.vertices[b] - &self.vertices[a]
    }

    /// True when every facet inequality is strict at the origin.
    pub fn contains_origin_strictly(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_positive())
    }

    pub fn translate(&self, t: &Vector) -> Polytope {
        let pts: Vec<Vector> = self.vertices.iter().map(|v| v + t).collect();
        hull(&pts).expect("translate preserves full dimension")
    }

    /// Point reflection `-P`.
    pub fn reflect(&self) -> Polytope {
        let pts: Vec<Vector> = self.vertices.iter().map(|v| -v).collect();
        hull(&pts).expect("reflection preserves full dimension")
    }

    /// Applies `x -> A x` for a 3x3 rational matrix given row-wise.
    pub fn linear_image(&self, rows: &[Vector; 3]) -> Result<Polytope> {
        let pts: Vec<Vector> = self
            .vertices
            .iter()
            .map(|v| Vector::new(rows.iter().map(|r| r.dot(v)).collect()))
            .collect();
        hull(&pts)
    }

    /// `s · P` for a positive scalar `s`.
    pub fn scaled(&self, s: &Rat) -> Polytope {
        assert!(s.is_positive(), "scale factor must be positive");
        let pts: Vec<Vector> = self.vertices.iter().map(|v| v.scale(s)).collect();
        hull(&pts).expect("scaling preserves full dimension")
    }

    /// Vertex list in sorted order, for exact multiset comparisons.
    pub fn sorted_vertices(&self) -> Vec<Vector> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }

    /// Arithmetic mean of the vertices (strictly interior).
    pub fn vertex_centroid(&self) -> Vector {
        let mut acc = Vector::zeros(DIM);
        for v in &self.vertices {
            acc = &acc + v;
        }
        acc.scale(&Rat::new(1, self.vertices.len() as i64))
    }
}

/// Support function `max_{v} v · u`.
pub fn support(p: &Polytope, u: &Vector) -> Result<Rat> {
    if u.is_zero() {
        return Err(Error::ZeroDirection);
    }
    Ok(p.vertices
        .iter()
        .map(|v| v.dot(u))
        .max()
        .expect("polytope has vertices"))
}

/// Radial function: the `λ > 0` with `λ u` on the boundary.
pub fn radial(p: &Polytope, u: &Vector) -> Result<Rat> {
    if u.is_zero() {
        return Err(Error::ZeroDirection);
    }
    if !p.contains_origin_strictly() {
        return Err(Error::OriginNotInterior);
    }
    Ok(p.facets
        .iter()
        .filter_map(|f| {
            let along = f.normal.dot(u);
            along.is_positive().then(|| &f.offset / &along)
        })
        .min()
        .expect("a bounded body has a facet in every direction"))
}
