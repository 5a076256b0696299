use ics_core::geom::Tolerance;
use ics_core::lyness::{
    complete_cycle, cross_ratio_sequence, eval_f, f_range, in_u_d, is_critical_in_last,
    lyness_orbit, max_product, maximize_product_numeric, min_prefix_f, product_g, product_g_raw,
    ParamVector,
};
use ics_core::sample::random_params;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Direct sum over subsets of {1..n} with no two adjacent members.
fn f_by_enumeration(x: &[f64]) -> f64 {
    let n = x.len();
    let mut total = 0.0;
    for mask in 0u32..(1 << n) {
        if mask & (mask >> 1) != 0 {
            continue;
        }
        let mut term = 1.0;
        for (i, xi) in x.iter().enumerate() {
            if mask & (1 << i) != 0 {
                term *= -xi;
            }
        }
        total += term;
    }
    total
}

/// `1 - x_n / (1 - x_{n-1} / (... - x_2 / (1 - x_1)))` evaluated literally,
/// or `None` if a partial denominator vanishes.
fn nested_fraction(x: &[f64]) -> Option<f64> {
    let mut value = 1.0 - x[0];
    for xk in &x[1..] {
        if value.abs() < 1e-6 {
            return None;
        }
        value = 1.0 - xk / value;
    }
    Some(value)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

#[test]
fn enumeration_oracle_values() {
    assert!((f_by_enumeration(&[0.1, 0.2, 0.3, 0.4]) - 0.15).abs() < 1e-15);
    assert_eq!(f_by_enumeration(&[]), 1.0);
}

proptest! {
    #[test]
    fn f_matches_enumeration(x in prop::collection::vec(-2.0f64..2.0, 0..13)) {
        prop_assert!(rel_err(eval_f(&x), f_by_enumeration(&x)) < 1e-12);
    }

    #[test]
    fn f_recurrence(x in prop::collection::vec(-2.0f64..2.0, 2..13)) {
        let n = x.len();
        let rhs = eval_f(&x[..n - 1]) - x[n - 1] * eval_f(&x[..n - 2]);
        prop_assert!(rel_err(eval_f(&x), rhs) < 1e-12);
    }

    #[test]
    fn f_product_identity(x in prop::collection::vec(-2.0f64..2.0, 1..13)) {
        let n = x.len();
        let lhs = f_range(&x, 1, n - 1) * f_range(&x, 2, n) - eval_f(&x) * f_range(&x, 2, n - 1);
        let prod: f64 = x.iter().product();
        prop_assert!(rel_err(lhs, prod) < 1e-12, "{lhs} vs {prod}");
    }

    #[test]
    fn nested_fraction_is_f_quotient(x in prop::collection::vec(-0.9f64..0.9, 1..13)) {
        if let Some(v) = nested_fraction(&x) {
            let n = x.len();
            let q = eval_f(&x) / eval_f(&x[..n - 1]);
            prop_assert!(rel_err(v, q) < 1e-9);
        }
    }

    #[test]
    fn cycle_closure_and_rotation(seed in any::<u64>(), d in 2usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_params(d, 0.02, &mut rng);
        let c = complete_cycle(&p);
        for r in c.window_residuals() {
            prop_assert!(r.abs() < 1e-10);
        }
        for &x in &c.x {
            prop_assert!(x > 0.0 && x < 1.0);
        }
        // rotating the cycle by one gives the completion of the shifted prefix
        let shifted = ParamVector::new(c.x[1..d].to_vec()).unwrap();
        let c2 = complete_cycle(&shifted);
        let want = [c.x[d], c.x[d + 1], c.x[0]];
        for (got, w) in c2.x[d - 1..].iter().zip(want) {
            prop_assert!(rel_err(*got, w) < 1e-9);
        }
    }

    #[test]
    fn closed_form_product_matches_literal(seed in any::<u64>(), d in 2usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_params(d, 0.02, &mut rng);
        let c = complete_cycle(&p);
        let literal = c.x.iter().product::<f64>().sqrt();
        prop_assert!((product_g(&p) - literal).abs() <= 1e-12 * literal);
        prop_assert!((c.scale_factor * 2f64.powi(d as i32 + 2) * literal - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orbit_is_periodic(seed in any::<u64>(), d in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_params(d, 0.05, &mut rng);
        let orbit = lyness_orbit(&p, 4 * (d + 2)).unwrap();
        for i in 0..orbit.len() - d - 2 {
            prop_assert!(rel_err(orbit[i], orbit[i + d + 2]) < 1e-10);
        }
    }
}

#[test]
fn critical_point_sign_matches_finite_difference() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let h = 1e-6;
    for d in 3..=5 {
        for _ in 0..100 {
            let p = random_params(d, 0.05, &mut rng);
            let a = p.values().to_vec();
            let c = complete_cycle(&p);
            let gap = c.x[d - 1] - c.x[d];
            if gap.abs() < 1e-6 {
                continue;
            }
            let mut up = a.clone();
            up[d - 2] += h;
            let mut down = a.clone();
            down[d - 2] -= h;
            if !in_u_d(&up) || !in_u_d(&down) {
                continue;
            }
            let fd = (product_g_raw(&up) - product_g_raw(&down)) / (2.0 * h);
            // dG/dx_{d-1} > 0 exactly when x_d > x_{d+1}
            assert_eq!(fd > 0.0, gap > 0.0, "d={d} a={a:?} fd={fd} gap={gap}");
        }
    }
}

#[test]
fn fd_vanishes_at_symmetric_points() {
    let tol = Tolerance::default();
    for d in 3..=6 {
        let m = max_product(d).unwrap();
        let p = ParamVector::constant(d, m.t_star).unwrap();
        assert!(is_critical_in_last(&p, &tol));
        let h = 1e-6;
        let mut up = p.values().to_vec();
        up[d - 2] += h;
        let mut down = p.values().to_vec();
        down[d - 2] -= h;
        let fd = (product_g_raw(&up) - product_g_raw(&down)) / (2.0 * h);
        assert!(fd.abs() <= 1e-4, "d={d} fd={fd}");
    }
}

#[test]
fn numeric_ascent_reaches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for d in 2..=6 {
        let m = max_product(d).unwrap();
        for _ in 0..5 {
            let start = random_params(d, 0.1, &mut rng);
            let run = maximize_product_numeric(&start);
            assert!(
                ((run.value - m.g_max) / m.g_max).abs() < 1e-7,
                "d={d} value={} g_max={}",
                run.value,
                m.g_max
            );
        }
    }
}

#[test]
fn product_is_small_near_boundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in 3..=6 {
        let g_max = max_product(d).unwrap().g_max;
        let mut hits = 0;
        while hits < 20 {
            let p = random_params(d, 0.0, &mut rng);
            if min_prefix_f(p.values()) < 1e-3 {
                assert!(product_g(&p) < g_max);
                hits += 1;
            }
        }
    }
}

#[test]
fn cross_ratios_solve_the_recurrence() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for d in 2..=6 {
        let mut done = 0;
        while done < 20 {
            let x: Vec<f64> = (0..d + 2).map(|_| rng.random_range(-3.0..3.0)).collect();
            let Ok(a) = cross_ratio_sequence(&x, &tol) else {
                continue;
            };
            if a.iter().any(|v| v.abs() > 1e3) {
                continue;
            }
            let n = a.len();
            for i in 0..n {
                let window: Vec<f64> = (0..d).map(|k| a[(i + k) % n]).collect();
                assert!(eval_f(&window).abs() < 1e-9, "d={d} x={x:?}");
            }
            done += 1;
        }
    }
}
