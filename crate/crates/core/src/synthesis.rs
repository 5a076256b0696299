//! Construction of special ICSs from characteristic parameters.
//!
//! Seeds are built in a canonical gauge: `p_1` at the origin, `p_2` on the
//! first axis, and each further point lifted along the next coordinate axis
//! (always in the positive direction) above the circumcenter of the points
//! placed so far.

use crate::engine::{generate, IcsSequence, SeedSimplex};
use crate::error::{Error, Result};
use crate::geom::{circumsphere_in_hull, Tolerance};
use crate::lyness::{solve_periodic, ParamVector};
use crate::point::Point;

/// Builds a good-position seed whose characteristic prefix is `p`.
///
/// Segment lengths follow `b_i = b_{i-1} / (2 sqrt(a_{i-1}))`, and `p_{i+1}`
/// sits at height `sqrt(b_i^2 - R_i^2)` above the circumcenter of
/// `p_1..p_i`, so it is at distance `b_i` from all of them.
pub fn construct_seed(p: &ParamVector, b1: f64, tol: &Tolerance) -> Result<SeedSimplex> {
    if !(b1.is_finite() && b1 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "b1 must be positive, got {b1}"
        )));
    }
    let d = p.dim();
    let a = p.values();
    let mut points = vec![Point::origin(d), Point::on_axis(d, 0, b1)];
    let mut b = b1;
    for i in 2..=d {
        let sphere = circumsphere_in_hull(&points, tol)?;
        b /= 2.0 * a[i - 2].sqrt();
        let h_sq = b * b - sphere.radius * sphere.radius;
        if h_sq.is_nan() || h_sq <= 0.0 {
            return Err(Error::ConstraintViolation(format!(
                "segment b_{i} = {b:e} does not exceed circumradius {:e}",
                sphere.radius
            )));
        }
        points.push(
            sphere
                .center
                .offset(&Point::on_axis(d, i - 1, 1.0), h_sq.sqrt()),
        );
    }
    SeedSimplex::new(points, tol)
}

/// Seed from [`construct_seed`] iterated `n_steps` times.
pub fn build_from_params(
    p: &ParamVector,
    b1: f64,
    n_steps: usize,
    tol: &Tolerance,
) -> Result<IcsSequence> {
    let seed = construct_seed(p, b1, tol)?;
    generate(&seed, n_steps, tol)
}

/// A periodic ICS in dimension `d`, run for `n_cycles` full periods of
/// `2d + 4` steps.
///
/// The parameters are the first root of [`solve_periodic`] on the default
/// chord through the symmetric maximizer.
pub fn build_periodic(
    d: usize,
    n_cycles: usize,
    tol: &Tolerance,
) -> Result<(ParamVector, IcsSequence)> {
    if n_cycles == 0 {
        return Err(Error::InvalidArgument("n_cycles must be at least 1".into()));
    }
    let params = solve_periodic(d, &[])?.into_iter().next().ok_or_else(|| {
        Error::NumericInstability(format!("no periodic parameters found for d = {d}"))
    })?;
    let seq = build_from_params(&params, 1.0, n_cycles * (2 * d + 4), tol)?;
    Ok((params, seq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{detect_period, empirical_scale_factor, DEFAULT_PERIOD_TOL};
    use crate::geom::is_good_position;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn seed_d2_half() {
        let seed = construct_seed(&ParamVector::new(vec![0.5]).unwrap(), 1.0, &tol()).unwrap();
        let want = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.5]];
        for (p, w) in seed.points().iter().zip(want) {
            assert!(p.distance(&Point::from(w)) < 1e-15);
        }
    }

    #[test]
    fn seed_d3_segment_lengths() {
        let p = ParamVector::new(vec![0.3, 0.4]).unwrap();
        let seed = construct_seed(&p, 1.0, &tol()).unwrap();
        let pts = seed.points();
        assert!(is_good_position(pts, &tol()).unwrap());
        let b2 = 1.0 / (2.0 * 0.3f64.sqrt());
        let b3 = b2 / (2.0 * 0.4f64.sqrt());
        assert!((pts[1].distance(&pts[2]) - b2).abs() < 1e-14);
        assert!((pts[2].distance(&pts[3]) - b3).abs() < 1e-14);
        assert!((pts[0].distance(&pts[3]) - b3).abs() < 1e-14);
    }

    #[test]
    fn seed_is_homogeneous_in_b1() {
        let p = ParamVector::new(vec![0.2, 0.3, 0.25]).unwrap();
        let one = construct_seed(&p, 1.0, &tol()).unwrap();
        let two = construct_seed(&p, 2.0, &tol()).unwrap();
        for (a, b) in one.points().iter().zip(two.points()) {
            assert!((a * 2.0).distance(b) < 1e-14);
        }
        assert!(construct_seed(&p, 0.0, &tol()).is_err());
    }

    #[test]
    fn d4_constant_scale_factor() {
        let p = ParamVector::constant(4, 1.0 / 3.0).unwrap();
        let s = build_from_params(&p, 1.0, 12, &tol()).unwrap();
        assert!((empirical_scale_factor(&s).unwrap() - 27.0 / 64.0).abs() < 1e-10);
    }

    #[test]
    fn periodic_d2_has_period_8() {
        let (_, s) = build_periodic(2, 2, &tol()).unwrap();
        assert_eq!(detect_period(&s, DEFAULT_PERIOD_TOL), Some(8));
    }
}
