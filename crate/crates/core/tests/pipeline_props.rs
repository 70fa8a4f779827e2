use proptest::prelude::*;

use projcong::direction_space::Mode;
use projcong::kernel::hull;
use projcong::pipeline::{decide, decide_report, verify, Config, Verdict};
use projcong::{Error, Polytope, Rat, Vector};

fn polytope() -> impl Strategy<Value = Polytope> {
    prop::collection::vec((-4i64..=4, -4i64..=4, -4i64..=4), 4..=7).prop_filter_map("full-dimensional", |v| {
        let mut pts: Vec<Vector> = v.into_iter().map(|(x, y, z)| Vector::xyz(x, y, z)).collect();
        // A skewed simplex around the origin keeps sections available.
        pts.extend([(5, 1, 0), (-3, 4, 1), (-2, -4, 2), (1, 0, -5)].map(|(x, y, z)| Vector::xyz(x, y, z)));
        hull(&pts).ok()
    })
}

fn offset() -> impl Strategy<Value = Vector> {
    (-6i64..=6, -6i64..=6, -6i64..=6)
        .prop_map(|(x, y, z)| Vector::new(vec![Rat::new(x, 2), Rat::new(y, 3), Rat::integer(z)]))
}

fn image(p: &Polytope, reflect: bool, b: &Vector) -> Polytope {
    if reflect {
        p.reflect().translate(b)
    } else {
        p.translate(b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn projections_round_trip(p in polytope(), reflect in any::<bool>(), b in offset(), seed in 0u64..50) {
        let q = image(&p, reflect, &b);
        let cfg = Config { seed, samples_per_cell: 4, ..Config::default() };
        let r = decide(&p, &q, &cfg).unwrap();
        prop_assert!(verify(&p, &q, &r));
        match r.verdict {
            // A reflected copy of a centrally symmetric body is also a translate.
            Verdict::Translate { b: got } => prop_assert!(reflect || got == b),
            Verdict::ReflectTranslate { b: got } => {
                prop_assert!(reflect);
                prop_assert_eq!(got, b);
            }
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }

    #[test]
    fn sections_round_trip(p in polytope(), reflect in any::<bool>()) {
        let q = image(&p, reflect, &Vector::zeros(3));
        let cfg = Config { mode: Mode::Sections, samples_per_cell: 3, ..Config::default() };
        let r = decide(&p, &q, &cfg).unwrap();
        prop_assert!(verify(&p, &q, &r));
        let ok = matches!((reflect, &r.verdict), (false, Verdict::Identity) | (true, Verdict::Reflection) | (true, Verdict::Identity));
        prop_assert!(ok, "{:?}", r.verdict);
    }

    /// Positive verdicts always verify; a rotated copy is rejected unless a
    /// symmetry makes it a genuine relation.
    #[test]
    fn verdicts_are_sound(p in polytope(), seed in 0u64..50) {
        let rows = [Vector::new(vec![Rat::new(3, 5), Rat::new(-4, 5), Rat::zero()]),
                    Vector::new(vec![Rat::new(4, 5), Rat::new(3, 5), Rat::zero()]),
                    Vector::xyz(0, 0, 1)];
        let q = p.linear_image(&rows).unwrap();
        match decide(&p, &q, &Config { seed, samples_per_cell: 3, ..Config::default() }) {
            Ok(r) if r.verdict.is_positive() => prop_assert!(verify(&p, &q, &r)),
            Ok(_) => {}
            Err(e) => prop_assert!(e.is_retryable(), "{}", e),
        }
    }

    #[test]
    fn reports_are_deterministic(p in polytope(), b in offset(), seed in 0u64..1000) {
        let q = image(&p, true, &b);
        let run = |jobs| {
            let cfg = Config { seed, samples_per_cell: 3, jobs: Some(jobs), ..Config::default() };
            serde_json::to_string(&decide_report(&p, &q, &cfg).unwrap()).unwrap()
        };
        let first = run(1);
        prop_assert_eq!(&first, &run(1));
        prop_assert_eq!(&first, &run(3));
    }
}

#[test]
fn too_few_samples_is_a_precondition() {
    let p = hull(&[(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)].map(|(x, y, z)| Vector::xyz(x, y, z))).unwrap();
    let cfg = Config { samples_per_cell: 1, ..Config::default() };
    assert!(matches!(decide(&p, &p, &cfg), Err(Error::Precondition(_))));
}

#[test]
fn sections_need_the_origin_inside() {
    let p = hull(&[(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2)].map(|(x, y, z)| Vector::xyz(x, y, z))).unwrap();
    let cfg = Config { mode: Mode::Sections, ..Config::default() };
    assert_eq!(decide(&p, &p, &cfg), Err(Error::OriginNotInterior));
}
