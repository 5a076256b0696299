//! Euclidean primitives in `R^d`: affine rank, general and good position
//! predicates, circumcenters of full simplices and circumspheres of point
//! sets inside their own affine hull.
//!
//! All predicates work in floating point with an explicit [`Tolerance`].
//! Rank decisions are relative to the largest singular value of the
//! difference vectors, so they do not depend on the overall scale of the
//! input.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lyness::eval_f;
use crate::point::{check_dims, Point};

/// Tolerance policy shared by the geometric predicates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    /// Relative tolerance (dimensionless).
    pub rel_eps: f64,
    /// Absolute floor used where relative comparisons break down near zero.
    pub abs_floor: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel_eps: 1e-9,
            abs_floor: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(rel_eps: f64, abs_floor: f64) -> Result<Self> {
        if !(rel_eps > 0.0 && abs_floor > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be positive (rel_eps={rel_eps}, abs_floor={abs_floor})"
            )));
        }
        Ok(Tolerance { rel_eps, abs_floor })
    }

    /// True if `a` and `b` agree relative to their magnitude.
    pub fn close(&self, a: f64, b: f64) -> bool {
        let scale = 0.5 * (a.abs() + b.abs());
        (a - b).abs() <= (self.rel_eps * scale).max(self.abs_floor)
    }
}

/// Center and radius of the sphere through a point set, taken inside the
/// affine hull of that set.
#[derive(Clone, Debug, PartialEq)]
pub struct CircumsphereResult {
    pub center: Point,
    pub radius: f64,
    pub hull_dimension: usize,
}

fn leading_dim(points: &[Point]) -> Result<usize> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty point list".into()))?;
    let dim = first.dim();
    check_dims(points, dim)?;
    Ok(dim)
}

/// `d x (n-1)` matrix whose columns are `p_i - p_1`.
fn difference_matrix(points: &[Point]) -> DMatrix<f64> {
    let dim = points[0].dim();
    let base = &points[0];
    DMatrix::from_fn(dim, points.len() - 1, |r, c| points[c + 1][r] - base[r])
}

/// Dimension of the affine hull, as the numerical rank of the difference
/// vectors `p_i - p_1`.
pub fn affine_rank(points: &[Point], tol: &Tolerance) -> Result<usize> {
    leading_dim(points)?;
    if points.len() == 1 {
        return Ok(0);
    }
    let sv = difference_matrix(points).singular_values();
    let smax = sv.iter().copied().fold(0.0f64, f64::max);
    if smax <= tol.abs_floor {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol.rel_eps * smax).count())
}

/// True iff the `n` points span an `(n-1)`-dimensional affine subspace.
pub fn is_general_position(points: &[Point], tol: &Tolerance) -> Result<bool> {
    let dim = leading_dim(points)?;
    if points.len() > dim + 1 {
        return Err(Error::InvalidArgument(format!(
            "{} points cannot be in general position in R^{dim}",
            points.len()
        )));
    }
    Ok(affine_rank(points, tol)? == points.len() - 1)
}

/// General position plus, for every `i >= 3`, `p_i` equidistant from all of
/// `p_1, ..., p_{i-1}`.
pub fn is_good_position(points: &[Point], tol: &Tolerance) -> Result<bool> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "good position needs at least two points".into(),
        ));
    }
    if !is_general_position(points, tol)? {
        return Ok(false);
    }
    Ok(equidistance_defect(points, tol) <= 1.0)
}

/// Worst equidistance violation over the chained conditions, in units of the
/// allowed slack. Values `<= 1` satisfy the good-position condition.
pub(crate) fn equidistance_defect(points: &[Point], tol: &Tolerance) -> f64 {
    let mut worst = 0.0f64;
    for i in 2..points.len() {
        let dists: Vec<f64> = points[..i].iter().map(|q| q.distance(&points[i])).collect();
        let mean = dists.iter().sum::<f64>() / dists.len() as f64;
        let slack = (tol.rel_eps * mean).max(tol.abs_floor);
        for d in &dists {
            worst = worst.max((d - mean).abs() / slack);
        }
    }
    worst
}

/// Orthonormal basis (as matrix columns) of the direction space of the
/// affine hull. Requires general position.
pub fn hull_basis(points: &[Point], tol: &Tolerance) -> Result<DMatrix<f64>> {
    if !is_general_position(points, tol)? {
        return Err(Error::Degenerate(
            "points are not in general position".into(),
        ));
    }
    let dim = points[0].dim();
    if points.len() == 1 {
        return Ok(DMatrix::zeros(dim, 0));
    }
    Ok(difference_matrix(points).qr().q())
}

/// Euclidean distance from `x` to the affine hull of `points`.
pub fn distance_to_hull(x: &Point, points: &[Point], tol: &Tolerance) -> Result<f64> {
    let dim = leading_dim(points)?;
    check_dims(std::slice::from_ref(x), dim)?;
    let q = hull_basis(points, tol)?;
    let rel = (x - &points[0]).to_dvector();
    let proj = &q * (q.transpose() * &rel);
    Ok((rel - proj).norm())
}

/// Circumcenter of a full simplex of `d + 1` points in `R^d`.
///
/// Solves `2 (p_i - p_1) . y = |p_i - p_1|^2` for `i = 2..=d+1` and returns
/// `p_1 + y`; working relative to `p_1` keeps the system translation
/// invariant.
pub fn circumcenter(points: &[Point], tol: &Tolerance) -> Result<Point> {
    let dim = leading_dim(points)?;
    if points.len() != dim + 1 {
        return Err(Error::InvalidArgument(format!(
            "circumcenter in R^{dim} needs {} points, got {}",
            dim + 1,
            points.len()
        )));
    }
    if !is_general_position(points, tol)? {
        return Err(Error::Degenerate(
            "simplex is not in general position".into(),
        ));
    }
    let base = &points[0];
    let diffs: Vec<Point> = points[1..].iter().map(|p| p - base).collect();
    let a = DMatrix::from_fn(dim, dim, |r, c| 2.0 * diffs[r][c]);
    let rhs = DVector::from_iterator(dim, diffs.iter().map(Point::norm_sq));
    let y = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Degenerate("singular circumcenter system".into()))?;
    let center = base.offset(&Point::from_dvector(&y), 1.0);
    check_equidistant(&center, points, tol)?;
    Ok(center)
}

fn check_equidistant(center: &Point, points: &[Point], tol: &Tolerance) -> Result<f64> {
    let dists: Vec<f64> = points.iter().map(|p| p.distance(center)).collect();
    let radius = dists.iter().sum::<f64>() / dists.len() as f64;
    let worst = dists
        .iter()
        .map(|d| (d - radius).abs())
        .fold(0.0f64, f64::max);
    if !center.is_finite() || worst > (tol.rel_eps * radius).max(tol.abs_floor) {
        return Err(Error::Degenerate(format!(
            "ill-conditioned circumsphere (equidistance residual {worst:e}, radius {radius:e})"
        )));
    }
    Ok(radius)
}

/// The sphere through `n <= d + 1` points in general position, inside their
/// affine hull.
///
/// The equidistance system is solved in an orthonormal basis of the hull
/// obtained from a QR factorization of the difference vectors. In that basis
/// the point coordinates are the columns of the triangular factor, so the
/// system is a single lower-triangular solve.
pub fn circumsphere_in_hull(points: &[Point], tol: &Tolerance) -> Result<CircumsphereResult> {
    let dim = leading_dim(points)?;
    if !is_general_position(points, tol)? {
        return Err(Error::Degenerate(
            "points are not in general position".into(),
        ));
    }
    let k = points.len() - 1;
    if k == 0 {
        return Ok(CircumsphereResult {
            center: points[0].clone(),
            radius: 0.0,
            hull_dimension: 0,
        });
    }
    let qr = difference_matrix(points).qr();
    let q = qr.q();
    let r = qr.r();
    let rhs = DVector::from_fn(k, |j, _| 0.5 * r.column(j).norm_squared());
    let z = r
        .transpose()
        .solve_lower_triangular(&rhs)
        .ok_or_else(|| Error::Degenerate("singular hull system".into()))?;
    let offset = q * z;
    debug_assert_eq!(offset.len(), dim);
    let center = points[0].offset(&Point::from_dvector(&offset), 1.0);
    let radius = check_equidistant(&center, points, tol)?;
    Ok(CircumsphereResult {
        center,
        radius,
        hull_dimension: k,
    })
}

/// Squared circumradius of good-position points `p_1..p_n` from their
/// consecutive segment lengths `b_i = |p_i - p_{i+1}|` alone.
///
/// With `a_i = b_i^2 / (4 b_{i+1}^2)` the radius is
/// `R_n^2 = (b_{n-1}^2 / 4) * F(a_1..a_{n-3}) / F(a_1..a_{n-2})`, the
/// closed form of the nested continued fraction.
pub fn radius_sq_via_characteristic(b: &[f64], _tol: &Tolerance) -> Result<f64> {
    let last = *b
        .last()
        .ok_or_else(|| Error::InvalidArgument("no segment lengths".into()))?;
    if let Some(bad) = b.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "segment lengths must be positive, got {bad}"
        )));
    }
    let a: Vec<f64> = b
        .windows(2)
        .map(|w| w[0] * w[0] / (4.0 * w[1] * w[1]))
        .collect();
    for k in 1..=a.len() {
        let f = eval_f(&a[..k]);
        if f <= 0.0 {
            return Err(Error::ConstraintViolation(format!(
                "prefix polynomial F[1,{k}] = {f:e} is not positive"
            )));
        }
    }
    let m = a.len();
    let quotient = if m == 0 {
        1.0
    } else {
        eval_f(&a[..m - 1]) / eval_f(&a[..m])
    };
    Ok(last * last / 4.0 * quotient)
}

/// For good-position points, checks that `p_1` and the circumcenter `Q_n`
/// lie strictly on the same side of `H(p_2, ..., p_n)` within the hull
/// `H(p_1, ..., p_n)`.
pub fn halfline_side_check(points: &[Point], tol: &Tolerance) -> Result<bool> {
    if !is_good_position(points, tol)? {
        if !is_general_position(points, tol)? {
            return Err(Error::Degenerate(
                "points are not in general position".into(),
            ));
        }
        return Err(Error::InvalidArgument(
            "points are not in good position".into(),
        ));
    }
    let center = circumsphere_in_hull(points, tol)?.center;
    let anchor = &points[1];
    let mut normal = (&points[0] - anchor).to_dvector();
    if points.len() > 2 {
        let q = hull_basis(&points[1..], tol)?;
        let proj = &q * (q.transpose() * &normal);
        normal -= proj;
    }
    let side = |x: &Point| normal.dot(&(x - anchor).to_dvector());
    let s_first = side(&points[0]);
    let s_center = side(&center);
    Ok(s_first > 0.0 && s_center > 0.0)
}
