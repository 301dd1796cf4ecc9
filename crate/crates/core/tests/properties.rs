use std::f64::consts::PI;

use angle_realize::geom::{enumerate_angles, is_convex_position, normalize_similarity, verify, Config};
use angle_realize::highdim::{realize_highdim_with, HighdimOptions};
use angle_realize::io;
use angle_realize::multiset::{glue, realize_multiset};
use angle_realize::planar::realize_planar;
use angle_realize::solver::{solve_numeric, Status};
use angle_realize::{AngleMultiset, PointConfig};
use proptest::prelude::*;

fn angle() -> impl Strategy<Value = f64> {
    (1e-3..PI - 1e-3).prop_map(|x: f64| x)
}

fn planar_points(min: usize, max: usize) -> impl Strategy<Value = PointConfig> {
    prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), min..=max).prop_filter_map("coincident points", |pts| {
        Config::new(2, pts.into_iter().map(|(x, y)| vec![x, y]).collect()).ok()
    })
}

fn distinct(mut v: Vec<f64>) -> Option<Vec<f64>> {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v.windows(2).all(|w| w[0] - w[1] > 1e-6).then_some(v)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn config_json_round_trip(c in planar_points(2, 12)) {
        prop_assert_eq!(io::config_from_json(&io::config_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn multiset_json_round_trip(v in prop::collection::vec((angle(), 1usize..5), 1..10)) {
        let ms = AngleMultiset::from_radians(v.iter().flat_map(|&(a, k)| std::iter::repeat_n(a, k))).unwrap();
        prop_assert_eq!(io::multiset_from_json(&io::multiset_to_json(&ms)).unwrap(), ms);
    }

    #[test]
    fn certificate_json_round_trip(c in planar_points(3, 7)) {
        let inst = enumerate_angles(&c).unwrap();
        prop_assume!(!inst.is_empty());
        let ms = AngleMultiset::from_radians(inst.iter().take(5).map(|a| a.measured.radians())).unwrap();
        let cert = verify(&c, &ms, 1e-9).unwrap();
        let back = io::certificate_from_json(&io::certificate_to_json(&cert)).unwrap();
        back.check(&c).unwrap();
        prop_assert_eq!(back, cert);
    }

    #[test]
    fn angles_at_each_triangle_sum_to_pi(c in planar_points(3, 8)) {
        let m = c.len();
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let sum = angle_realize::geom::angle_at(&c, j, i, k).unwrap()
                        + angle_realize::geom::angle_at(&c, i, j, k).unwrap()
                        + angle_realize::geom::angle_at(&c, i, k, j).unwrap();
                    prop_assert!((sum - PI).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn normalization_is_an_idempotent_similarity(c in planar_points(3, 8), s in 0.1..10.0f64, t in -5.0..5.0f64) {
        let n = normalize_similarity(&c).unwrap();
        let again = normalize_similarity(&n).unwrap();
        for (p, q) in n.points().iter().zip(again.points()) {
            prop_assert!((p[0] - q[0]).abs() < 1e-9 && (p[1] - q[1]).abs() < 1e-9);
        }
        let moved = c.map_points(|p| vec![s * p[0] + t, s * p[1] - t]).unwrap();
        let n2 = normalize_similarity(&moved).unwrap();
        for (p, q) in n.points().iter().zip(n2.points()) {
            prop_assert!((p[0] - q[0]).abs() < 1e-7 && (p[1] - q[1]).abs() < 1e-7);
        }
    }

    #[test]
    fn planar_construction_certifies(v in prop::collection::vec(angle(), 6..30), convex in any::<bool>()) {
        let Some(v) = distinct(v) else { return Ok(()) };
        let m = v.len().div_ceil(2) + 2;
        let (c, cert) = realize_planar(&v, m, convex).unwrap();
        prop_assert_eq!(c.len(), m);
        cert.check(&c).unwrap();
        verify(&c, &AngleMultiset::from_radians(v).unwrap(), 1e-9).unwrap();
        if convex {
            prop_assert!(is_convex_position(&c));
        }
    }

    #[test]
    fn glue_adds_sizes(a in prop::collection::vec(angle(), 6), b in prop::collection::vec(angle(), 6)) {
        let (Some(a), Some(b)) = (distinct(a), distinct(b)) else { return Ok(()) };
        let (ca, _) = realize_planar(&a, 5, false).unwrap();
        let (cb, _) = realize_planar(&b, 5, false).unwrap();
        let g = glue(&ca, &cb).unwrap();
        prop_assert_eq!(g.config.len(), ca.len() + cb.len() - 2);
        let union = AngleMultiset::from_radians(a.into_iter().chain(b)).unwrap();
        verify(&g.config, &union, 1e-9).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn multiset_planner_stays_within_budget(
        values in prop::collection::vec(angle(), 1..12),
        counts in prop::collection::vec(1usize..20, 12),
    ) {
        let occ: Vec<f64> = values.iter().zip(&counts).flat_map(|(&a, &k)| std::iter::repeat_n(a, k)).collect();
        let ms = AngleMultiset::from_radians(occ).unwrap();
        let m = ms.len().div_ceil(2) + 30;
        let r = realize_multiset(&ms, m).unwrap();
        prop_assert!(r.config.len() <= m);
        r.certificate.check(&r.config).unwrap();
        verify(&r.config, &ms, 1e-9).unwrap();
    }

    #[test]
    fn solver_answers_are_certified(v in prop::collection::vec(angle(), 2..4), m in 3usize..5, d in 2usize..4, seed in any::<u64>()) {
        let ms = AngleMultiset::from_radians(v).unwrap();
        prop_assume!(ms.len() <= 3 * m * (m - 1) * (m - 2) / 6);
        let r = solve_numeric(&ms, m, d, 5, seed).unwrap();
        if r.status == Status::Realized {
            let c = r.config.unwrap();
            prop_assert!(c.dim() <= d.min(m - 1));
            verify(&c, &ms, 1e-6).unwrap();
        } else {
            prop_assert!(r.config.is_none() && r.certificate.is_none());
        }
    }

    #[test]
    fn highdim_uses_one_point_per_d_targets(v in prop::collection::vec(0.4..PI - 0.4, 1..15), d in 2usize..5) {
        let Some(v) = distinct(v) else { return Ok(()) };
        let n = v.len();
        let ms = AngleMultiset::from_radians(v).unwrap();
        let r = realize_highdim_with(&ms, d, &HighdimOptions { eps: Some(0.4), ..Default::default() }).unwrap();
        prop_assert_eq!(r.movable, n.div_ceil(d));
        prop_assert!(r.config.len() <= n.div_ceil(d) + d + d * r.centers);
        verify(&r.config, &ms, 1e-8).unwrap();
    }
}
