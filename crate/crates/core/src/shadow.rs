//! Projections and sections of a polytope by the plane `ξ⊥`.

use serde::{Deserialize, Serialize};

use crate::direction_space::Mode;
use crate::error::{Error, Result};
use crate::kernel::{frame, Frame, Polytope, Vector};
use crate::rat::Rat;

/// What a polygon vertex comes from in the 3D body.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Preimage {
    VertexOf { vertex: usize },
    /// The point `v_lo + t (v_hi − v_lo)` of an edge.
    OnEdge { edge: usize, t: Rat },
}

impl Preimage {
    /// The vertex or edge id.
    pub fn feature(&self) -> usize {
        match self {
            Preimage::VertexOf { vertex } => *vertex,
            Preimage::OnEdge { edge, .. } => *edge,
        }
    }
}

/// A convex polygon in the plane `xi⊥`, counterclockwise seen from `xi`.
///
/// Each vertex is held as a 3D representative whose orthogonal projection
/// onto `xi⊥` is the vertex: the body vertex itself for projections, the
/// exact in-plane point otherwise. Distances are computed from the
/// representatives, which keeps the arithmetic on small integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarBody {
    xi: Vector,
    points: Vec<Vector>,
    in_plane: bool,
    pub preimage: Vec<Preimage>,
}

impl PlanarBody {
    pub fn xi(&self) -> &Vector {
        &self.xi
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn representatives(&self) -> &[Vector] {
        &self.points
    }

    pub fn frame(&self) -> Frame {
        frame(&self.xi).expect("planar bodies carry a nonzero direction")
    }

    /// Vertices in frame coordinates.
    pub fn vertices2d(&self) -> Vec<[Rat; 2]> {
        let f = self.frame();
        self.points.iter().map(|p| f.coords(p)).collect()
    }

    /// Builds a body from frame coordinates. Vertices must already be
    /// strictly convex and counterclockwise.
    pub fn from_frame_coords(xi: &Vector, vertices: &[[Rat; 2]], preimage: Vec<Preimage>) -> Result<PlanarBody> {
        let f = frame(xi)?;
        let points: Vec<Vector> = vertices.iter().map(|[x, y]| f.lift(x, y)).collect();
        let body = PlanarBody {
            xi: xi.clone(),
            points,
            in_plane: true,
            preimage,
        };
        if body.len() < 3 {
            return Err(Error::DegeneratePolygon);
        }
        if !body.is_strictly_convex_ccw() {
            return Err(Error::InvalidInput(
                "polygon vertices must be strictly convex and counterclockwise".into(),
            ));
        }
        Ok(body)
    }

    /// Inner product of two difference vectors, multiplied by [`Self::scale`].
    pub fn metric(&self, u: &Vector, w: &Vector) -> Rat {
        if self.in_plane {
            u.dot(w)
        } else {
            &(&u.dot(w) * &self.xi.norm2()) - &(&u.dot(&self.xi) * &w.dot(&self.xi))
        }
    }

    /// The factor by which [`Self::metric`] exceeds the Euclidean metric.
    pub fn scale(&self) -> Rat {
        if self.in_plane {
            Rat::one()
        } else {
            self.xi.norm2()
        }
    }

    /// Sign of the turn `a → b → c` seen from the tip of `xi`.
    pub fn orientation(&self, a: usize, b: usize, c: usize) -> i32 {
        let (pa, pb, pc) = (&self.points[a], &self.points[b], &self.points[c]);
        self.xi.dot(&(pb - pa).cross(&(pc - pa))).signum()
    }

    pub fn edge(&self, i: usize) -> Vector {
        let k = self.len();
        &self.points[(i + 1) % k] - &self.points[i]
    }

    pub fn is_strictly_convex_ccw(&self) -> bool {
        let k = self.len();
        k >= 3 && (0..k).all(|i| self.orientation(i, (i + 1) % k, (i + 2) % k) > 0)
    }

    /// Translates by `t` (in 3-space; only the part orthogonal to `xi` matters).
    pub fn translate(&self, t: &Vector) -> PlanarBody {
        let t = if self.in_plane {
            let n2 = self.xi.norm2();
            t - &self.xi.scale(&(&t.dot(&self.xi) / &n2))
        } else {
            t.clone()
        };
        PlanarBody {
            points: self.points.iter().map(|p| p + &t).collect(),
            ..self.clone()
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PlanarBodyJson {
    frame: Frame,
    vertices2d: Vec<[Rat; 2]>,
    #[serde(default)]
    preimage: Vec<Preimage>,
}

impl Serialize for PlanarBody {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PlanarBodyJson {
            frame: self.frame(),
            vertices2d: self.vertices2d(),
            preimage: self.preimage.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlanarBody {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PlanarBodyJson::deserialize(d)?;
        if !raw.preimage.is_empty() && raw.preimage.len() != raw.vertices2d.len() {
            return Err(serde::de::Error::custom("preimage length differs from vertex count"));
        }
        PlanarBody::from_frame_coords(&raw.frame.xi, &raw.vertices2d, raw.preimage).map_err(serde::de::Error::custom)
    }
}

/// Two linear functionals on `ξ⊥` forming positively oriented orthogonal
/// coordinates; used only to order points.
fn sweep_axes(xi: &Vector) -> (Vector, Vector) {
    let zero = Rat::zero();
    let (x, y, z) = (xi.get(0), xi.get(1), xi.get(2));
    let t1 = [
        Vector::new(vec![y.clone(), -x, zero.clone()]),
        Vector::new(vec![z.clone(), zero.clone(), -x]),
        Vector::new(vec![zero, z.clone(), -y]),
    ]
    .into_iter()
    .find(|v| !v.is_zero())
    .expect("xi is nonzero");
    let t2 = xi.cross(&t1);
    (t1, t2)
}

/// Strict convex hull of planar points given by keys, counterclockwise,
/// starting from the smallest key.
fn hull_2d(keys: &[(Rat, Rat)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    idx.dedup_by(|a, b| keys[*a] == keys[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let cross = |o: usize, a: usize, b: usize| {
        let (ox, oy) = &keys[o];
        let (ax, ay) = &keys[a];
        let (bx, by) = &keys[b];
        (&(ax - ox) * &(by - oy) - &(ay - oy) * &(bx - ox)).signum()
    };
    let mut chain: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = chain.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while chain.len() >= start + 2 && cross(chain[chain.len() - 2], chain[chain.len() - 1], i) <= 0 {
                chain.pop();
            }
            chain.push(i);
        }
        chain.pop();
    }
    chain
}

fn check_xi(xi: &Vector) -> Result<()> {
    if xi.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: xi.dim(),
        });
    }
    if xi.is_zero() {
        return Err(Error::ZeroDirection);
    }
    Ok(())
}

/// Orthogonal projection `P_ξ` onto `ξ⊥`.
pub fn project(p: &Polytope, xi: &Vector) -> Result<PlanarBody> {
    check_xi(xi)?;
    if p.facets().iter().any(|f| f.normal.dot(xi).is_zero()) {
        return Err(Error::ExceptionalDirection(xi.clone()));
    }
    let (t1, t2) = sweep_axes(xi);
    let keys: Vec<(Rat, Rat)> = p.vertices().iter().map(|v| (v.dot(&t1), v.dot(&t2))).collect();
    let order = hull_2d(&keys);
    Ok(PlanarBody {
        xi: xi.clone(),
        points: order.iter().map(|&i| p.vertex(i).clone()).collect(),
        in_plane: false,
        preimage: order.into_iter().map(|vertex| Preimage::VertexOf { vertex }).collect(),
    })
}

/// Projection or section according to `mode`.
pub fn planar_body(p: &Polytope, xi: &Vector, mode: Mode) -> Result<PlanarBody> {
    match mode {
        Mode::Projections => project(p, xi),
        Mode::Sections => section(p, xi),
    }
}

/// Section `P ∩ ξ⊥`.
pub fn section(p: &Polytope, xi: &Vector) -> Result<PlanarBody> {
    check_xi(xi)?;
    if !p.contains_origin_strictly() {
        return Err(Error::OriginNotInterior);
    }
    let heights: Vec<Rat> = p.vertices().iter().map(|v| v.dot(xi)).collect();
    if heights.iter().any(Rat::is_zero) {
        return Err(Error::ExceptionalDirection(xi.clone()));
    }
    // Crossing point of edge e is rays[e] / dens[e] with dens[e] > 0.
    let mut rays = Vec::new();
    let mut dens = Vec::new();
    let mut tags = Vec::new();
    for (e, edge) in p.edges().iter().enumerate() {
        let (lo, hi) = edge.vertices;
        let (su, sv) = (&heights[lo], &heights[hi]);
        if su.signum() == sv.signum() {
            continue;
        }
        let denom = su - sv;
        let t = su / &denom;
        let ray = &p.vertex(hi).scale(su) - &p.vertex(lo).scale(sv);
        if denom.is_negative() {
            rays.push(-&ray);
            dens.push(-&denom);
        } else {
            rays.push(ray);
            dens.push(denom);
        }
        tags.push(Preimage::OnEdge { edge: e, t });
    }
    // The origin is interior and every crossing is a vertex, so sorting the
    // rays by angle about ξ gives the counterclockwise boundary.
    let (t1, t2) = sweep_axes(xi);
    let coords: Vec<(Rat, Rat)> = rays.iter().map(|r| (r.dot(&t1), r.dot(&t2))).collect();
    let half = |i: usize| {
        let (x, y) = &coords[i];
        !(y.is_positive() || (y.is_zero() && x.is_positive()))
    };
    let mut order: Vec<usize> = (0..rays.len()).collect();
    order.sort_by(|&a, &b| {
        half(a).cmp(&half(b)).then_with(|| {
            let (ax, ay) = &coords[a];
            let (bx, by) = &coords[b];
            0.cmp(&(&(ax * by) - &(ay * bx)).signum())
        })
    });
    // Start at the smallest point in sweep coordinates.
    let key_cmp = |a: usize, b: usize| {
        let scaled = |i: usize, j: usize| (&coords[i].0 * &dens[j], &coords[i].1 * &dens[j]);
        scaled(a, b).cmp(&scaled(b, a))
    };
    let start = (0..order.len())
        .min_by(|&i, &j| key_cmp(order[i], order[j]))
        .unwrap_or(0);
    order.rotate_left(start);
    let points: Vec<Vector> = rays
        .iter()
        .zip(&dens)
        .map(|(r, d)| r.scale(&d.recip()))
        .collect();
    Ok(PlanarBody {
        xi: xi.clone(),
        points: order.iter().map(|&i| points[i].clone()).collect(),
        in_plane: true,
        preimage: order.into_iter().map(|i| tags[i].clone()).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feature {
    Vertex(usize),
    Edge(usize),
}

/// Cyclic vertex/edge sequence of `∂_ξ P`, starting at the smallest vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShadowBoundary {
    pub cycle: Vec<Feature>,
}

impl ShadowBoundary {
    pub fn vertex_ids(&self) -> Vec<usize> {
        self.cycle
            .iter()
            .filter_map(|f| match f {
                Feature::Vertex(v) => Some(*v),
                Feature::Edge(_) => None,
            })
            .collect()
    }
}

pub fn shadow_boundary(p: &Polytope, xi: &Vector) -> Result<ShadowBoundary> {
    let body = project(p, xi)?;
    let mut ids: Vec<usize> = body.preimage.iter().map(Preimage::feature).collect();
    let start = (0..ids.len()).min_by_key(|&i| ids[i]).unwrap_or(0);
    ids.rotate_left(start);
    let mut cycle = Vec::with_capacity(2 * ids.len());
    for k in 0..ids.len() {
        let (u, v) = (ids[k], ids[(k + 1) % ids.len()]);
        let e = p
            .edge_between(u, v)
            .expect("consecutive shadow-boundary vertices are joined by an edge");
        cycle.push(Feature::Vertex(u));
        cycle.push(Feature::Edge(e));
    }
    Ok(ShadowBoundary { cycle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::hull;

    fn unit_cube() -> Polytope {
        hull(
            &(0..8)
                .map(|i| Vector::xyz(i & 1, (i >> 1) & 1, (i >> 2) & 1))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn sym_cube() -> Polytope {
        hull(
            &(0..8)
                .map(|i| Vector::xyz(2 * (i & 1) - 1, (i & 2) - 1, (i & 4) / 2 - 1))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn cube_hexagon() {
        let c = unit_cube();
        let body = project(&c, &Vector::xyz(1, 1, 1)).unwrap();
        assert_eq!(body.len(), 6);
        assert!(body.is_strictly_convex_ccw());
        let mut pre: Vec<Vector> = body.preimage.iter().map(|p| c.vertex(p.feature()).clone()).collect();
        pre.sort();
        let mut want = vec![
            Vector::xyz(1, 0, 0),
            Vector::xyz(1, 1, 0),
            Vector::xyz(0, 1, 0),
            Vector::xyz(0, 1, 1),
            Vector::xyz(0, 0, 1),
            Vector::xyz(1, 0, 1),
        ];
        want.sort();
        assert_eq!(pre, want);
    }

    #[test]
    fn axis_direction_is_exceptional() {
        let xi = Vector::xyz(0, 0, 1);
        assert_eq!(project(&unit_cube(), &xi), Err(Error::ExceptionalDirection(xi)));
    }

    #[test]
    fn midplane_section() {
        let c = sym_cube();
        let s = section(&c, &Vector::xyz(0, 0, 1)).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.preimage.iter().all(|p| matches!(p, Preimage::OnEdge { t, .. } if *t == Rat::new(1, 2))));
        let mut v = s.vertices2d();
        v.sort();
        let one = Rat::one();
        assert_eq!(
            v,
            vec![[-&one, -&one], [-&one, one.clone()], [one.clone(), -&one], [one.clone(), one.clone()]]
        );
    }

    #[test]
    fn diagonal_section_is_hexagon() {
        let s = section(&sym_cube(), &Vector::xyz(1, 1, 1)).unwrap();
        assert_eq!(s.len(), 6);
        assert!(s.is_strictly_convex_ccw());
    }

    #[test]
    fn section_through_vertex_is_exceptional() {
        let oct = hull(&[
            Vector::xyz(1, 0, 0),
            Vector::xyz(-1, 0, 0),
            Vector::xyz(0, 1, 0),
            Vector::xyz(0, -1, 0),
            Vector::xyz(0, 0, 1),
            Vector::xyz(0, 0, -1),
        ])
        .unwrap();
        assert!(matches!(section(&oct, &Vector::xyz(0, 1, 2)), Err(Error::ExceptionalDirection(_))));
    }

    #[test]
    fn shadow_boundary_cycles() {
        let c = unit_cube();
        let sb = shadow_boundary(&c, &Vector::xyz(1, 2, 3)).unwrap();
        assert_eq!(sb.vertex_ids().len(), 6);
        let ids = sb.vertex_ids();
        assert!(!ids.contains(&0));
        assert!(!ids.contains(&7));
    }

    #[test]
    fn json_roundtrip() {
        let body = project(&unit_cube(), &Vector::xyz(1, 2, 3)).unwrap();
        let text = serde_json::to_string(&body).unwrap();
        let back: PlanarBody = serde_json::from_str(&text).unwrap();
        assert_eq!(back.vertices2d(), body.vertices2d());
        assert_eq!(back.preimage, body.preimage);
    }
}
