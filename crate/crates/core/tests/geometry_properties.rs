use ics_core::geom::{
    circumcenter, circumsphere_in_hull, distance_to_hull, halfline_side_check, is_good_position,
    radius_sq_via_characteristic, Tolerance,
};
use ics_core::point::Point;
use ics_core::sample::{random_good_position, random_params, random_vector};
use ics_core::synthesis::build_from_params;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn random_simplex(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    (0..=dim).map(|_| random_vector(dim, rng)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn circumcenter_is_equidistant(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_simplex(dim, &mut rng);
        // random simplices can be nearly flat; those are reported, not silently wrong
        if let Ok(c) = circumcenter(&pts, &tol()) {
            let r0 = c.distance(&pts[0]);
            for p in &pts {
                prop_assert!((c.distance(p) - r0).abs() <= 1e-9 * r0);
            }
            let s = circumsphere_in_hull(&pts, &tol()).unwrap();
            prop_assert!(s.center.distance(&c) <= 1e-8 * r0);
        }
    }

    #[test]
    fn sphere_center_lies_in_hull(seed in any::<u64>(), dim in 2usize..=6, k in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = k.min(dim) + 1;
        let pts: Vec<Point> = (0..n).map(|_| random_vector(dim, &mut rng)).collect();
        if let Ok(s) = circumsphere_in_hull(&pts, &tol()) {
            prop_assert!(distance_to_hull(&s.center, &pts, &tol()).unwrap() <= 1e-9 * s.radius.max(1.0));
            for p in &pts {
                prop_assert!((s.center.distance(p) - s.radius).abs() <= 1e-9 * s.radius);
            }
        }
    }
}

#[test]
fn radius_from_lengths_matches_geometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for dim in 2..=6 {
        for n in 2..=dim + 1 {
            for _ in 0..20 {
                let pts = random_good_position(dim, n, &mut rng).unwrap();
                let b: Vec<f64> = pts.windows(2).map(|w| w[0].distance(&w[1])).collect();
                let via_f = radius_sq_via_characteristic(&b, &tol()).unwrap();
                let r = circumsphere_in_hull(&pts, &tol()).unwrap().radius;
                assert!(((via_f - r * r) / (r * r)).abs() < 1e-8, "dim={dim} n={n}");
            }
        }
    }
}

#[test]
fn nested_centers_are_perpendicular_and_on_the_half_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for dim in 2..=6 {
        for _ in 0..20 {
            let pts = random_good_position(dim, dim + 1, &mut rng).unwrap();
            for n in 3..=pts.len() {
                let q_n = circumsphere_in_hull(&pts[..n], &tol()).unwrap().center;
                let q_prev = circumsphere_in_hull(&pts[..n - 1], &tol()).unwrap().center;
                let p_n = &pts[n - 1];
                let axis = &q_n - p_n;
                let scale = axis.norm().max(1e-300);
                for i in 0..n - 1 {
                    for j in i + 1..n - 1 {
                        let edge = &pts[i] - &pts[j];
                        assert!(axis.dot(&edge).abs() <= 1e-8 * scale * edge.norm());
                    }
                }
                // Q_n = p_n + s (Q_{n-1} - p_n) with s > 0
                let toward = &q_prev - p_n;
                let s = axis.dot(&toward) / toward.norm_sq();
                assert!(s > 0.0);
                assert!(p_n.offset(&toward, s).distance(&q_n) <= 1e-8 * toward.norm());
            }
        }
    }
}

#[test]
fn halfline_holds_on_all_synthesized_windows() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for d in 2..=6 {
        for _ in 0..10 {
            let p = random_params(d, 0.05, &mut rng);
            let s = build_from_params(&p, 1.0, 3 * (d + 2), &tol()).unwrap();
            for window in s.points().windows(d + 1) {
                assert!(is_good_position(window, &tol()).unwrap());
                for n in 2..=d + 1 {
                    assert!(halfline_side_check(&window[..n], &tol()).unwrap());
                }
            }
        }
    }
}
