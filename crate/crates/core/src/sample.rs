//! Seeded random sampling of parameters and point configurations, used by
//! the numeric maximizer, property tests and benchmarks.

use rand::Rng;

use crate::error::Result;
use crate::geom::{circumsphere_in_hull, hull_basis, Tolerance};
use crate::lyness::ParamVector;
use crate::point::Point;

/// Draws a point of `U_d` coordinate by coordinate.
///
/// Given `a_1..a_{k-1}`, membership allows `0 < a_k < F[1,k-1] / F[1,k-2]`.
/// Each coordinate is drawn uniformly from the middle of that interval,
/// keeping a relative distance `margin` (in `[0, 0.5)`) from both ends.
pub fn random_params<R: Rng + ?Sized>(d: usize, margin: f64, rng: &mut R) -> ParamVector {
    assert!(d >= 2, "dimension must be at least 2");
    let margin = margin.clamp(0.0, 0.49);
    let mut a: Vec<f64> = Vec::with_capacity(d - 1);
    // (F[1, k-2], F[1, k-1])
    let (mut older, mut old) = (1.0, 1.0);
    for _ in 1..d {
        let bound = old / older;
        let u: f64 = rng.random_range(margin..1.0 - margin);
        let ak = u.max(1e-6) * bound;
        a.push(ak);
        (older, old) = (old, old - ak * older);
    }
    ParamVector::new(a).expect("sequential sampling stays inside U_d")
}

/// Uniform vector with entries in `[-1, 1)`.
pub fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Point {
    Point::from(
        (0..dim)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect::<Vec<f64>>(),
    )
}

/// Random `n` points in good position in `R^dim` (`2 <= n <= dim + 1`).
///
/// Each new point is placed above the circumcenter of the previous ones,
/// in a random direction perpendicular to their hull, which makes it
/// equidistant from all of them.
pub fn random_good_position<R: Rng + ?Sized>(
    dim: usize,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Point>> {
    assert!(n >= 2 && n <= dim + 1, "need 2 <= n <= dim + 1");
    let tol = Tolerance::default();
    let first = random_vector(dim, rng);
    let mut dir = random_vector(dim, rng);
    while dir.norm() < 0.1 {
        dir = random_vector(dim, rng);
    }
    let mut points = vec![first.clone(), first.offset(&dir, 1.0)];
    while points.len() < n {
        let sphere = circumsphere_in_hull(&points, &tol)?;
        let basis = hull_basis(&points, &tol)?;
        let normal = loop {
            let v = random_vector(dim, rng).to_dvector();
            let w = &v - &basis * (basis.transpose() * &v);
            if w.norm() > 0.1 {
                break Point::from_dvector(&(w.normalize()));
            }
        };
        let scale = points[points.len() - 1].distance(&points[points.len() - 2]);
        let height = scale * rng.random_range(0.2..1.5);
        points.push(sphere.center.offset(&normal, height));
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::is_good_position;
    use crate::lyness::in_u_d;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_params_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 2..=8 {
            for _ in 0..50 {
                assert!(in_u_d(random_params(d, 0.0, &mut rng).values()));
            }
        }
    }

    #[test]
    fn sampled_sets_are_in_good_position() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tol = Tolerance::default();
        for dim in 2..=5 {
            for n in 2..=dim + 1 {
                let pts = random_good_position(dim, n, &mut rng).unwrap();
                assert!(is_good_position(&pts, &tol).unwrap());
            }
        }
    }
}
