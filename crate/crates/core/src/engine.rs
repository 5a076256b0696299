//! Forward iteration of the circumcenter map and analysis of the resulting
//! sequences.
//!
//! A special ICS with scale factor `r` obeys the affine law
//! `p_{i+d+2} = v - r p_i` for a fixed shift vector `v`, so it is periodic
//! exactly when `r = 1`, and then with period `2d + 4`.

use crate::error::{Error, Result};
use crate::geom::{
    circumcenter, equidistance_defect, is_general_position, is_good_position, Tolerance,
};
use crate::lyness::scale_factor_from_product;
use crate::point::{check_dims, diameter, Point};

/// Generation stops once a new segment is shorter than this fraction of the
/// seed diameter.
pub const CONTRACTION_LIMIT: f64 = 1e-9;
/// Generation stops once a coordinate exceeds this multiple of the seed
/// diameter.
pub const EXPANSION_LIMIT: f64 = 1e12;
/// Default relative tolerance for period detection.
pub const DEFAULT_PERIOD_TOL: f64 = 1e-7;

/// `d + 1` points in good position: the starting window of a special ICS.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedSimplex {
    points: Vec<Point>,
}

impl SeedSimplex {
    pub fn new(points: Vec<Point>, tol: &Tolerance) -> Result<Self> {
        let dim = points
            .first()
            .map(Point::dim)
            .ok_or_else(|| Error::InvalidArgument("empty seed".into()))?;
        check_dims(&points, dim)?;
        if dim < 2 {
            return Err(Error::InvalidArgument(format!("dimension {dim} < 2")));
        }
        if points.len() != dim + 1 {
            return Err(Error::InvalidArgument(format!(
                "a seed in R^{dim} has {} points, got {}",
                dim + 1,
                points.len()
            )));
        }
        if !is_general_position(&points, tol)? {
            return Err(Error::Degenerate("seed is not in general position".into()));
        }
        if !is_good_position(&points, tol)? {
            return Err(Error::ConstraintViolation(
                "seed is not in good position".into(),
            ));
        }
        Ok(SeedSimplex { points })
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }
}

/// Why [`generate`] returned fewer points than requested.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// Segments fell below [`CONTRACTION_LIMIT`] of the seed diameter.
    Contracted,
    /// Coordinates exceeded [`EXPANSION_LIMIT`] times the seed diameter.
    Expanded,
}

/// Derived quantities of a special ICS.
#[derive(Clone, Debug, PartialEq)]
pub struct IcsAnalysis {
    pub scale_factor: f64,
    pub shift_vector: Point,
    pub period: Option<usize>,
    /// Max of `|p_{i+d+2} - (v - r p_i)|` over the run, relative to its diameter.
    pub affine_residual: f64,
    /// Residual at the detected period, if any.
    pub period_residual: Option<f64>,
}

/// An ordered run of points in `R^d` with its characteristic sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct IcsSequence {
    d: usize,
    points: Vec<Point>,
    char_seq: Vec<f64>,
    pub analysis: Option<IcsAnalysis>,
    pub stop: Option<StopReason>,
}

impl IcsSequence {
    /// Wraps existing points. The characteristic sequence is filled in when
    /// there are at least three points.
    pub fn from_points(points: Vec<Point>, tol: &Tolerance) -> Result<Self> {
        let d = points
            .first()
            .map(Point::dim)
            .ok_or_else(|| Error::InvalidArgument("empty point sequence".into()))?;
        check_dims(&points, d)?;
        if d < 2 {
            return Err(Error::InvalidArgument(format!("dimension {d} < 2")));
        }
        let char_seq = if points.len() >= 3 {
            characteristic_sequence(&points, tol)?
        } else {
            Vec::new()
        };
        Ok(IcsSequence {
            d,
            points,
            char_seq,
            analysis: None,
            stop: None,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn char_seq(&self) -> &[f64] {
        &self.char_seq
    }

    pub fn diameter(&self) -> f64 {
        diameter(&self.points)
    }

    /// Computes and stores [`analyze`].
    pub fn with_analysis(mut self, period_tol: f64) -> Result<Self> {
        self.analysis = Some(analyze(&self, period_tol)?);
        Ok(self)
    }

    /// Applies `x -> scale * x + offset` to every point.
    pub fn transformed(&self, scale: f64, offset: &Point, tol: &Tolerance) -> Result<Self> {
        let pts = self
            .points
            .iter()
            .map(|p| (p * scale).offset(offset, 1.0))
            .collect();
        IcsSequence::from_points(pts, tol)
    }
}

/// One step of the circumcenter map.
pub fn step(window: &[Point], tol: &Tolerance) -> Result<Point> {
    circumcenter(window, tol)
}

/// Iterates the circumcenter map `n_steps` times from `seed`.
///
/// Every window is checked for good position on the way. Runs whose scale
/// factor is far from 1 end early with [`IcsSequence::stop`] set.
pub fn generate(seed: &SeedSimplex, n_steps: usize, tol: &Tolerance) -> Result<IcsSequence> {
    let d = seed.dim();
    let initial = diameter(seed.points());
    let mut points = seed.points().to_vec();
    points.reserve(n_steps);
    let mut stop = None;

    for k in 1..=n_steps {
        let window = &points[points.len() - d - 1..];
        let degenerate = |reason: String| Error::DegenerateStep { step: k, reason };
        if k > 1 && !is_good_position(window, tol)? {
            let reason = if is_general_position(window, tol)? {
                format!(
                    "window lost good position (defect {:.3e})",
                    equidistance_defect(window, tol)
                )
            } else {
                "window is not in general position".to_string()
            };
            return Err(degenerate(reason));
        }
        let next = step(window, tol).map_err(|e| degenerate(e.to_string()))?;
        let segment = next.distance(&points[points.len() - 1]);
        if segment < tol.abs_floor * initial {
            return Err(degenerate(format!(
                "segment length {segment:e} underflowed"
            )));
        }
        if segment < CONTRACTION_LIMIT * initial {
            stop = Some(StopReason::Contracted);
            break;
        }
        if next
            .coords()
            .iter()
            .any(|c| c.abs() > EXPANSION_LIMIT * initial)
        {
            stop = Some(StopReason::Expanded);
            break;
        }
        points.push(next);
    }

    let mut seq = IcsSequence::from_points(points, tol)?;
    seq.stop = stop;
    Ok(seq)
}

/// `a_i = |p_i - p_{i+1}|^2 / (4 |p_{i+1} - p_{i+2}|^2)` for every triple of
/// consecutive points.
pub fn characteristic_sequence(points: &[Point], tol: &Tolerance) -> Result<Vec<f64>> {
    if points.len() < 3 {
        return Err(Error::InsufficientLength {
            needed: 3,
            found: points.len(),
        });
    }
    let floor = tol.abs_floor * diameter(points).max(f64::MIN_POSITIVE);
    let b: Vec<f64> = points.windows(2).map(|w| w[0].distance(&w[1])).collect();
    if let Some(i) = b.iter().position(|&x| x <= floor) {
        return Err(Error::Degenerate(format!(
            "points {} and {} coincide",
            i + 1,
            i + 2
        )));
    }
    Ok(b.windows(2)
        .map(|w| w[0] * w[0] / (4.0 * w[1] * w[1]))
        .collect())
}

fn require_len(s: &IcsSequence, needed: usize) -> Result<()> {
    if s.len() < needed {
        return Err(Error::InsufficientLength {
            needed,
            found: s.len(),
        });
    }
    Ok(())
}

/// Mean of `|p_{i+d+2} - p_{i+d+3}| / |p_i - p_{i+1}|` over the run.
pub fn empirical_scale_factor(s: &IcsSequence) -> Result<f64> {
    let d = s.d();
    require_len(s, d + 4)?;
    let p = s.points();
    let ratios: Vec<f64> = (0..p.len() - d - 3)
        .map(|i| p[i + d + 2].distance(&p[i + d + 3]) / p[i].distance(&p[i + 1]))
        .collect();
    Ok(ratios.iter().sum::<f64>() / ratios.len() as f64)
}

/// Scale factor predicted from the first `d + 2` characteristic values.
pub fn predicted_scale_factor(s: &IcsSequence) -> Result<f64> {
    let d = s.d();
    if s.char_seq().len() < d + 2 {
        return Err(Error::InsufficientLength {
            needed: d + 4,
            found: s.len(),
        });
    }
    let prod: f64 = s.char_seq()[..d + 2].iter().product();
    Ok(scale_factor_from_product(d, prod.sqrt()))
}

/// Shift vector `v = p_{d+3} + r p_1` of the affine law, with the largest
/// residual `|p_{i+d+2} - (v - r p_i)|` relative to the run's diameter.
pub fn shift_vector(s: &IcsSequence) -> Result<(Point, f64)> {
    let d = s.d();
    require_len(s, 2 * d + 5)?;
    let r = empirical_scale_factor(s)?;
    let p = s.points();
    let v = p[d + 2].offset(&p[0], r);
    let worst = (0..p.len() - d - 2)
        .map(|i| p[i + d + 2].distance(&v.offset(&p[i], -r)))
        .fold(0.0f64, f64::max);
    Ok((v, worst / s.diameter()))
}

/// `max_i |p_{i+m} - p_i|` relative to the diameter, or `None` if the run is
/// not longer than `m`.
pub fn period_residual(s: &IcsSequence, m: usize) -> Option<f64> {
    let p = s.points();
    if m == 0 || p.len() <= m {
        return None;
    }
    let diam = s.diameter();
    let worst = (0..p.len() - m)
        .map(|i| p[i + m].distance(&p[i]))
        .fold(0.0f64, f64::max);
    Some(if diam > 0.0 { worst / diam } else { 0.0 })
}

/// Smallest `m <= n/2` whose period residual is within `rel_tol`.
pub fn detect_period(s: &IcsSequence, rel_tol: f64) -> Option<usize> {
    (1..=s.len() / 2).find(|&m| period_residual(s, m).is_some_and(|r| r <= rel_tol))
}

/// Scale factor, shift vector, affine-law residual and period of a run.
pub fn analyze(s: &IcsSequence, period_tol: f64) -> Result<IcsAnalysis> {
    let scale_factor = empirical_scale_factor(s)?;
    let (shift, affine_residual) = shift_vector(s)?;
    let period = detect_period(s, period_tol);
    Ok(IcsAnalysis {
        scale_factor,
        shift_vector: shift,
        period,
        affine_residual,
        period_residual: period.and_then(|m| period_residual(s, m)),
    })
}

/// Drops leading points until the first window is in good position.
///
/// Any ICS is special after a shift by `d - 1`, so at most that many points
/// are skipped.
pub fn special_tail<'a>(points: &'a [Point], tol: &Tolerance) -> Result<&'a [Point]> {
    let d = points
        .first()
        .map(Point::dim)
        .ok_or_else(|| Error::InvalidArgument("empty point sequence".into()))?;
    for skip in [0, d - 1] {
        if points.len() > skip + d && is_good_position(&points[skip..skip + d + 1], tol)? {
            return Ok(&points[skip..]);
        }
    }
    Err(Error::ConstraintViolation(
        "no good-position window at offset 0 or d-1".into(),
    ))
}

/// Largest deviation of a point from the circumcenter of the `d + 1`
/// points before it, relative to that circumradius. Zero for runs no
/// longer than one window.
pub fn circumcenter_defect(points: &[Point], tol: &Tolerance) -> Result<f64> {
    let d = points
        .first()
        .map(Point::dim)
        .ok_or_else(|| Error::InvalidArgument("empty point sequence".into()))?;
    let mut worst = 0.0f64;
    for i in d + 1..points.len() {
        let window = &points[i - d - 1..i];
        let center = circumcenter(window, tol)?;
        let radius = center.distance(&window[0]);
        worst = worst.max(points[i].distance(&center) / radius);
    }
    Ok(worst)
}
