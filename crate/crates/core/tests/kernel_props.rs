use proptest::prelude::*;

use projcong::kernel::{hull, radial, support};
use projcong::{Rat, Vector};

fn points(min: usize, max: usize) -> impl Strategy<Value = Vec<Vector>> {
    prop::collection::vec((-6i64..=6, -6i64..=6, -6i64..=6, 1i64..=3), min..=max).prop_map(|v| {
        v.into_iter()
            .map(|(x, y, z, d)| Vector::new(vec![Rat::new(x, d), Rat::new(y, d), Rat::new(z, d)]))
            .collect()
    })
}

fn direction() -> impl Strategy<Value = Vector> {
    (-5i64..=5, -5i64..=5, -5i64..=5)
        .prop_map(|(x, y, z)| Vector::xyz(x, y, z))
        .prop_filter("nonzero", |v| !v.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_is_idempotent(pts in points(4, 16)) {
        if let Ok(p) = hull(&pts) {
            let again = hull(p.vertices()).unwrap();
            prop_assert_eq!(again.sorted_vertices(), p.sorted_vertices());
            prop_assert_eq!(again.facets().len(), p.facets().len());
        }
    }

    #[test]
    fn hull_contains_inputs_and_satisfies_euler(pts in points(4, 16)) {
        if let Ok(p) = hull(&pts) {
            for f in p.facets() {
                for x in &pts {
                    prop_assert!(x.dot(&f.normal) <= f.offset);
                }
                for &v in &f.cycle {
                    prop_assert_eq!(&p.vertex(v).dot(&f.normal), &f.offset);
                }
            }
            let (v, e, f) = (p.vertices().len() as i64, p.edges().len() as i64, p.facets().len() as i64);
            prop_assert_eq!(v - e + f, 2);
        }
    }

    #[test]
    fn support_is_max_over_points_and_shifts_with_translation(
        pts in points(4, 12),
        u in direction(),
        t in (-4i64..=4, -4i64..=4, -4i64..=4),
    ) {
        if let Ok(p) = hull(&pts) {
            let h = support(&p, &u).unwrap();
            let brute = pts.iter().map(|x| x.dot(&u)).max().unwrap();
            prop_assert_eq!(&h, &brute);
            let t = Vector::xyz(t.0, t.1, t.2);
            prop_assert_eq!(support(&p.translate(&t), &u).unwrap(), &h + &t.dot(&u));
        }
    }

    #[test]
    fn radial_point_lies_on_boundary(u in direction(), k in 1i64..=4) {
        // Cross-polytope |x|+|y|+|z| <= k: the radial value is k/|u|_1.
        let k_r = Rat::integer(k);
        let verts: Vec<Vector> = (0..3)
            .flat_map(|i| [1, -1].map(move |s| Vector::unit(3, i).scale(&Rat::integer(s * k))))
            .collect();
        let p = hull(&verts).unwrap();
        let l1: i64 = u.coords().iter().map(|c| c.abs().to_f64() as i64).sum();
        prop_assert_eq!(radial(&p, &u).unwrap(), &k_r / &Rat::integer(l1));
    }
}
