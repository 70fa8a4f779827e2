use std::collections::BTreeSet;

use proptest::prelude::*;

use projcong::congruence::{canonical_code, congruence_witnesses, float_coords, stable_permutation, Orientation};
use projcong::direction_space::{arrangement, exceptional_projection_set, sample_cell, Mode};
use projcong::kernel::hull;
use projcong::shadow::PlanarBody;
use projcong::{Rat, Vector};

type P2 = [Rat; 2];

fn hull_2d(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut p = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn polygon() -> impl Strategy<Value = Vec<P2>> {
    prop::collection::vec((-5i64..=5, -5i64..=5), 3..=10).prop_filter_map("at least a triangle", |pts| {
        let h = hull_2d(&pts);
        (3..=7)
            .contains(&h.len())
            .then(|| h.into_iter().map(|(x, y)| [Rat::integer(x), Rat::integer(y)]).collect())
    })
}

fn body(vs: &[P2]) -> PlanarBody {
    PlanarBody::from_frame_coords(&Vector::xyz(0, 0, 1), vs, Vec::new()).unwrap()
}

/// Rational rotations from Pythagorean triples.
const ROTATIONS: [(i64, i64, i64); 5] = [(1, 0, 1), (0, 1, 1), (3, 4, 5), (-5, 12, 13), (8, -15, 17)];

fn moved(vs: &[P2], rot: usize, mirror: bool, shift: usize, t: (i64, i64)) -> Vec<P2> {
    let (c, s, n) = ROTATIONS[rot];
    let (c, s) = (Rat::new(c, n), Rat::new(s, n));
    let mut out: Vec<P2> = vs
        .iter()
        .map(|v| {
            let y = if mirror { -&v[1] } else { v[1].clone() };
            [
                &(&(&c * &v[0]) - &(&s * &y)) + &Rat::integer(t.0),
                &(&(&s * &v[0]) + &(&c * &y)) + &Rat::integer(t.1),
            ]
        })
        .collect();
    if mirror {
        out.reverse();
    }
    let k = out.len();
    out.rotate_left(shift % k);
    out
}

fn dist2(a: &P2, b: &P2) -> Rat {
    let (dx, dy) = (&a[0] - &b[0], &a[1] - &b[1]);
    &(&dx * &dx) + &(&dy * &dy)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn code_is_invariant_under_rigid_motions(
        vs in polygon(),
        rot in 0usize..5,
        shift in 0usize..7,
        t in (-9i64..=9, -9i64..=9),
    ) {
        let a = canonical_code(&body(&vs)).unwrap();
        let b = canonical_code(&body(&moved(&vs, rot, false, shift, t))).unwrap();
        prop_assert_eq!(&a, &b);
        // A mirror image swaps the direct and reflected codes.
        let m = canonical_code(&body(&moved(&vs, rot, true, shift, t))).unwrap();
        prop_assert_eq!(&a.direct, &m.reflected);
        prop_assert_eq!(&a.reflected, &m.direct);
    }

    #[test]
    fn witnesses_match_brute_force(
        vs in polygon(),
        other in polygon(),
        rot in 0usize..5,
        mirror in any::<bool>(),
        shift in 0usize..7,
        congruent in any::<bool>(),
    ) {
        let ws = if congruent { moved(&vs, rot, mirror, shift, (2, -3)) } else { other };
        let (a, b) = (body(&vs), body(&ws));
        let got: BTreeSet<(Orientation, Vec<usize>)> =
            congruence_witnesses(&a, &b).into_iter().map(|w| (w.orientation, w.vertex_map)).collect();
        let k = vs.len();
        let mut expected = BTreeSet::new();
        if ws.len() == k {
            for s in 0..k {
                for (o, map) in [
                    (Orientation::Direct, (0..k).map(|i| (i + s) % k).collect::<Vec<_>>()),
                    (Orientation::Reflected, (0..k).map(|i| (s + k - i) % k).collect()),
                ] {
                    if (0..k).all(|i| (0..k).all(|j| dist2(&vs[i], &vs[j]) == dist2(&ws[map[i]], &ws[map[j]]))) {
                        expected.insert((o, map));
                    }
                }
            }
        }
        prop_assert_eq!(&got, &expected);
        if congruent {
            prop_assert!(!got.is_empty());
        }
    }

    #[test]
    fn motions_carry_vertices(vs in polygon(), rot in 0usize..5, mirror in any::<bool>(), shift in 0usize..7) {
        let ws = moved(&vs, rot, mirror, shift, (-4, 1));
        let (a, b) = (body(&vs), body(&ws));
        let (pa, pb) = (float_coords(&a), float_coords(&b));
        for w in congruence_witnesses(&a, &b) {
            for (i, &j) in w.vertex_map.iter().enumerate() {
                let m = w.motion.apply(pa[i]);
                prop_assert!((m[0] - pb[j][0]).abs() < 1e-9 && (m[1] - pb[j][1]).abs() < 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Adding samples can only shrink the surviving permutation set.
    #[test]
    fn stable_permutations_shrink_with_more_samples(
        pts in prop::collection::vec((-4i64..=4, -4i64..=4, -4i64..=4), 5..=9),
        seed in 0u64..100,
        reflect in any::<bool>(),
    ) {
        let pts: Vec<Vector> = pts.into_iter().map(|(x, y, z)| Vector::xyz(x, y, z)).collect();
        let Ok(p) = hull(&pts) else { return Ok(()) };
        let q = if reflect { p.reflect() } else { p.clone() };
        let circles = exceptional_projection_set(&p, &q);
        let arr = arrangement(&circles);
        for cell in arr.cells.iter().take(6) {
            let s = sample_cell(cell, &circles, 5, seed).unwrap();
            let mut prev: Option<BTreeSet<_>> = None;
            for n in 2..=5 {
                let cur: BTreeSet<_> = stable_permutation(&p, &q, cell, Mode::Projections, &s[..n])
                    .map(|v| v.into_iter().map(|sp| (sp.orientation, sp.sigma)).collect())
                    .unwrap_or_default();
                if let Some(prev) = &prev {
                    prop_assert!(cur.is_subset(prev));
                }
                prev = Some(cur);
            }
            // The identity (or the reflection) always survives.
            prop_assert!(!prev.unwrap().is_empty());
        }
    }
}
