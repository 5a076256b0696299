//! Algebra of characteristic sequences.
//!
//! The central object is the signed non-adjacent subset sum
//!
//! ```text
//! F(x_1, ..., x_n) = sum over A ⊂ {1..n} with no two adjacent indices of (-1)^|A| x_A
//! ```
//!
//! which satisfies `F(x_1..x_n) = F(x_1..x_{n-1}) - x_n F(x_1..x_{n-2})` and
//! `F = 1` for `n <= 0`. A characteristic sequence of a special ICS in
//! dimension `d` is `(d+2)`-periodic and determined by its first `d - 1`
//! entries, which range over the open set
//! `U_d = { a : a_i > 0, F(a_1..a_i) > 0 for i < d }`.
//!
//! Index notation: `F[i, j]` below means `F(x_i, ..., x_j)` with 1-based
//! inclusive bounds, and `F[i, j] = 1` whenever `j < i`.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geom::Tolerance;

/// Evaluates `F(x_1, ..., x_n)` by the three-term recurrence in `O(n)`.
pub fn eval_f(x: &[f64]) -> f64 {
    // (F^{(k-2)}, F^{(k-1)})
    let (mut older, mut old) = (1.0, 1.0);
    for &xk in x {
        let next = old - xk * older;
        older = old;
        old = next;
    }
    old
}

/// `F[i, j]` over a 1-based inclusive range of `x`; empty ranges give 1.
pub fn f_range(x: &[f64], i: usize, j: usize) -> f64 {
    if j < i {
        1.0
    } else {
        eval_f(&x[i - 1..j])
    }
}

/// Membership in `U_d` for `d = a.len() + 1`.
pub fn in_u_d(a: &[f64]) -> bool {
    if a.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
        return false;
    }
    let (mut older, mut old) = (1.0, 1.0);
    for &xk in a {
        let next = old - xk * older;
        if next <= 0.0 {
            return false;
        }
        older = old;
        old = next;
    }
    true
}

/// Smallest prefix value `min_i F[1, i]`, a distance-like measure to the
/// boundary of `U_d`.
pub fn min_prefix_f(a: &[f64]) -> f64 {
    (1..=a.len())
        .map(|i| f_range(a, 1, i))
        .fold(f64::INFINITY, f64::min)
}

/// A point `(a_1, ..., a_{d-1})` of `U_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamVector {
    a: Vec<f64>,
}

impl ParamVector {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument(
                "parameter vector needs at least one entry (d >= 2)".into(),
            ));
        }
        if !in_u_d(&a) {
            return Err(Error::ConstraintViolation(format!(
                "parameters {a:?} are not in U_{}",
                a.len() + 1
            )));
        }
        Ok(ParamVector { a })
    }

    /// The constant vector `(t, ..., t)` of length `d - 1`.
    pub fn constant(d: usize, t: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("dimension {d} < 2")));
        }
        ParamVector::new(vec![t; d - 1])
    }

    pub fn dim(&self) -> usize {
        self.a.len() + 1
    }

    pub fn values(&self) -> &[f64] {
        &self.a
    }
}

/// The full `(d+2)`-periodic characteristic cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct CharCycle {
    pub d: usize,
    pub x: Vec<f64>,
    /// `sqrt(x_1 ... x_{d+2})`
    pub product_sqrt: f64,
    /// `1 / (2^{d+2} product_sqrt)`
    pub scale_factor: f64,
}

impl CharCycle {
    /// `F^{(d)}` on each of the `d + 2` cyclic windows; all vanish on an
    /// exact cycle.
    pub fn window_residuals(&self) -> Vec<f64> {
        let n = self.x.len();
        (0..n)
            .map(|i| {
                let window: Vec<f64> = (0..self.d).map(|k| self.x[(i + k) % n]).collect();
                eval_f(&window)
            })
            .collect()
    }
}

fn product(x: &[f64]) -> f64 {
    x.iter().product()
}

/// The three completing entries `(x_d, x_{d+1}, x_{d+2})` for a prefix in
/// `U_d`.
fn completion(a: &[f64]) -> [f64; 3] {
    let d = a.len() + 1;
    let f1_dm1 = f_range(a, 1, d - 1);
    let f1_dm2 = f_range(a, 1, d - 2);
    let f2_dm1 = f_range(a, 2, d - 1);
    [
        f1_dm1 / f1_dm2,
        product(a) / (f1_dm2 * f2_dm1),
        f1_dm1 / f2_dm1,
    ]
}

/// Completes a prefix to the full cycle `(a_1, ..., a_{d-1}, x_d, x_{d+1}, x_{d+2})`.
pub fn complete_cycle(p: &ParamVector) -> CharCycle {
    let d = p.dim();
    let mut x = p.values().to_vec();
    x.extend_from_slice(&completion(p.values()));
    let product_sqrt = product_g(p);
    CharCycle {
        d,
        x,
        product_sqrt,
        scale_factor: scale_factor_from_product(d, product_sqrt),
    }
}

/// `r = 1 / (2^{d+2} sqrt(a_1 ... a_{d+2}))`.
pub fn scale_factor_from_product(d: usize, product_sqrt: f64) -> f64 {
    1.0 / (2f64.powi(d as i32 + 2) * product_sqrt)
}

/// Extends `(a_1, ..., a_{d-1})` by the Lyness recurrence to `n_terms`
/// entries.
///
/// Each new term is `a_{i+d-1} = F[i, i+d-2] / F[i, i+d-3]`, the closed form
/// of the nested continued fraction over the previous `d - 1` terms.
pub fn lyness_orbit(p: &ParamVector, n_terms: usize) -> Result<Vec<f64>> {
    let d = p.dim();
    if n_terms < d - 1 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} terms for d = {d}, asked for {n_terms}",
            d - 1
        )));
    }
    let mut seq = p.values().to_vec();
    seq.reserve(n_terms - seq.len());
    while seq.len() < n_terms {
        let window = &seq[seq.len() + 1 - d..];
        let num = eval_f(window);
        let den = eval_f(&window[..window.len() - 1]);
        if den.is_nan() || den <= 0.0 {
            return Err(Error::NumericInstability(format!(
                "non-positive denominator {den:e} at term {}",
                seq.len() + 1
            )));
        }
        seq.push(num / den);
    }
    Ok(seq)
}

/// `G = sqrt(x_1 ... x_{d+2}) = x_1 ... x_{d-1} F[1,d-1] / (F[1,d-2] F[2,d-1])`.
pub fn product_g(p: &ParamVector) -> f64 {
    product_g_raw(p.values())
}

/// [`product_g`] without the membership check; meaningful only on `U_d`.
pub fn product_g_raw(a: &[f64]) -> f64 {
    let d = a.len() + 1;
    product(a) * f_range(a, 1, d - 1) / (f_range(a, 1, d - 2) * f_range(a, 2, d - 1))
}

/// Whether `p` is a critical point of `G` in the last coordinate, which
/// happens exactly when `x_d = x_{d+1}`.
pub fn is_critical_in_last(p: &ParamVector, tol: &Tolerance) -> bool {
    let [xd, xd1, _] = completion(p.values());
    tol.close(xd, xd1)
}

/// Closed-form maximum of `G` over `U_d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaxProductResult {
    /// Common value of all coordinates at the maximizer.
    pub t_star: f64,
    pub g_max: f64,
    /// Smallest attainable scale factor.
    pub r_min: f64,
}

/// The maximum of `G` is attained at the constant point `(t, ..., t)` with
/// `t = (2 cos(pi/(d+2)))^{-2}` and equals `(2^{d+2} cos^{d+2}(pi/(d+2)))^{-1}`.
pub fn max_product(d: usize) -> Result<MaxProductResult> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension {d} < 2")));
    }
    let c = (PI / (d + 2) as f64).cos();
    let r_min = c.powi(d as i32 + 2);
    Ok(MaxProductResult {
        t_star: 1.0 / (4.0 * c * c),
        g_max: 1.0 / (2f64.powi(d as i32 + 2) * r_min),
        r_min,
    })
}

/// Outcome of the numeric ascent on `G`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericMaximum {
    pub argmax: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

const FD_STEP: f64 = 1e-6;

fn log_g(a: &[f64]) -> Option<f64> {
    in_u_d(a).then(|| product_g_raw(a).ln())
}

fn log_g_gradient(a: &[f64]) -> Vec<f64> {
    let mut probe = a.to_vec();
    (0..a.len())
        .map(|k| {
            let h = FD_STEP * a[k].max(1e-3);
            probe[k] = a[k] + h;
            let up = product_g_raw(&probe).ln();
            probe[k] = a[k] - h;
            let down = product_g_raw(&probe).ln();
            probe[k] = a[k];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Maximizes `G` from `start` by gradient ascent on `log G` with a
/// backtracking line search that never leaves `U_d`.
///
/// This is a cross-check for [`max_product`], not a replacement for it.
pub fn maximize_product_numeric(start: &ParamVector) -> NumericMaximum {
    let mut x = start.values().to_vec();
    let mut fx = product_g_raw(&x).ln();
    let mut step = 1e-2;
    let mut iterations = 0;
    while iterations < 20_000 {
        iterations += 1;
        let g = log_g_gradient(&x);
        let g_sq: f64 = g.iter().map(|v| v * v).sum();
        if g_sq.sqrt() < 1e-11 {
            break;
        }
        let mut accepted = false;
        while step > 1e-18 {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi + step * gi).collect();
            match log_g(&trial) {
                Some(ft) if ft > fx + 1e-4 * step * g_sq => {
                    x = trial;
                    fx = ft;
                    accepted = true;
                    break;
                }
                _ => step *= 0.5,
            }
        }
        if !accepted {
            break;
        }
        step *= 2.0;
    }
    NumericMaximum {
        value: product_g_raw(&x),
        argmax: x,
        iterations,
    }
}

/// Runs [`maximize_product_numeric`] from `starts` random interior points and
/// keeps the best result.
pub fn maximize_product_random_starts<R: Rng + ?Sized>(
    d: usize,
    starts: usize,
    rng: &mut R,
) -> Result<NumericMaximum> {
    if d < 2 || starts == 0 {
        return Err(Error::InvalidArgument(format!(
            "need d >= 2 and at least one start (d = {d}, starts = {starts})"
        )));
    }
    let mut best: Option<NumericMaximum> = None;
    for _ in 0..starts {
        let start = crate::sample::random_params(d, 0.1, rng);
        let run = maximize_product_numeric(&start);
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one start"))
}

const SCAN_SAMPLES: usize = 1024;
const BISECTION_STEPS: usize = 64;
const LEVEL_TOL: f64 = 1e-12;
const ROOT_SPACING: f64 = 1e-10;

/// Open interval of values for coordinate `k` (0-based) keeping `base` in
/// `U_d`, with all other coordinates held fixed.
///
/// Every `F[1, i]` is affine in each single coordinate, so the feasible set
/// is an intersection of half-lines.
fn axis_chord(base: &[f64], k: usize) -> Option<(f64, f64)> {
    if !in_u_d(&base[..k]) || base.iter().enumerate().any(|(j, &v)| j != k && v <= 0.0) {
        return None;
    }
    let mut probe = base.to_vec();
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for i in k + 1..=base.len() {
        probe[k] = 0.0;
        let alpha = eval_f(&probe[..i]);
        probe[k] = 1.0;
        let beta = eval_f(&probe[..i]) - alpha;
        if beta > 0.0 {
            lo = lo.max(-alpha / beta);
        } else if beta < 0.0 {
            hi = hi.min(-alpha / beta);
        } else if alpha <= 0.0 {
            return None;
        }
    }
    (hi.is_finite() && lo < hi).then_some((lo, hi))
}

/// Finds parameters where `G` equals `target` along a coordinate chord of
/// `U_d`.
///
/// `fixed` pins coordinates by 1-based index. The first coordinate that is
/// not pinned is scanned across its whole feasible interval; the remaining
/// free coordinates sit at the symmetric maximizer value `t*`, shrunk toward
/// zero if that is needed to make the chord non-empty. Roots are located by
/// sign changes on a uniform grid, refined by bisection, and returned in
/// increasing order of the scanned coordinate.
pub fn solve_product_level(
    d: usize,
    fixed: &[(usize, f64)],
    target: f64,
) -> Result<Vec<ParamVector>> {
    let t_star = max_product(d)?.t_star;
    if target.is_nan() || target <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "level {target} must be positive"
        )));
    }
    let mut pinned = vec![None; d - 1];
    for &(idx, val) in fixed {
        if idx == 0 || idx > d - 1 {
            return Err(Error::InvalidArgument(format!(
                "fixed index {idx} outside 1..={}",
                d - 1
            )));
        }
        if !(val.is_finite() && val > 0.0) {
            return Err(Error::ConstraintViolation(format!(
                "fixed value x_{idx} = {val} must be positive"
            )));
        }
        pinned[idx - 1] = Some(val);
    }
    let k = pinned.iter().position(Option::is_none).ok_or_else(|| {
        Error::InvalidArgument("all coordinates fixed, nothing to solve for".into())
    })?;

    let mut chord = None;
    let mut base = Vec::new();
    let mut shrink = 1.0;
    for _ in 0..40 {
        base = pinned
            .iter()
            .map(|v| v.unwrap_or(t_star * shrink))
            .collect();
        chord = axis_chord(&base, k);
        if chord.is_some() {
            break;
        }
        shrink *= 0.5;
    }
    let (lo, hi) = chord.ok_or_else(|| {
        Error::ConstraintViolation(format!(
            "fixed values {fixed:?} are inconsistent with U_{d}"
        ))
    })?;

    let level = |s: f64| {
        let mut x = base.clone();
        x[k] = s;
        product_g_raw(&x) - target
    };
    let grid: Vec<f64> = (1..=SCAN_SAMPLES)
        .map(|j| lo + (hi - lo) * j as f64 / (SCAN_SAMPLES + 1) as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&s| level(s)).collect();

    let mut roots: Vec<f64> = Vec::new();
    for j in 0..grid.len() - 1 {
        let (va, vb) = (values[j], values[j + 1]);
        let root = if va == 0.0 {
            grid[j]
        } else if va.signum() != vb.signum() && vb != 0.0 {
            bisect(&level, grid[j], grid[j + 1], va)
        } else {
            continue;
        };
        if roots.last().is_none_or(|&r| root - r > ROOT_SPACING) {
            roots.push(root);
        }
    }

    Ok(roots
        .into_iter()
        .filter(|&s| level(s).abs() <= LEVEL_TOL)
        .filter_map(|s| {
            let mut x = base.clone();
            x[k] = s;
            ParamVector::new(x).ok()
        })
        .collect())
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Parameters of ICSs with scale factor exactly 1, i.e. periodic ones:
/// the level set `G = 2^{-(d+2)}`.
///
/// An empty result means the scanned chord does not reach the level.
pub fn solve_periodic(d: usize, fixed: &[(usize, f64)]) -> Result<Vec<ParamVector>> {
    solve_scale_factor(d, fixed, 1.0)
}

/// Parameters along the scanned chord whose scale factor equals `r`.
pub fn solve_scale_factor(d: usize, fixed: &[(usize, f64)], r: f64) -> Result<Vec<ParamVector>> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension {d} < 2")));
    }
    if r.is_nan() || r <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "scale factor {r} must be positive"
        )));
    }
    solve_product_level(d, fixed, 1.0 / (2f64.powi(d as i32 + 2) * r))
}

/// Cross-ratio `C(a, b, c, e) = (a - b)(c - e) / ((a - c)(b - e))`.
pub fn cross_ratio(a: f64, b: f64, c: f64, e: f64, tol: &Tolerance) -> Result<f64> {
    let den = (a - c) * (b - e);
    if (a - c).abs() <= tol.abs_floor || (b - e).abs() <= tol.abs_floor {
        return Err(Error::Degenerate(format!(
            "cross-ratio denominator vanishes for ({a}, {b}, {c}, {e})"
        )));
    }
    Ok((a - b) * (c - e) / den)
}

/// `a_i = C(x_i, x_{i+1}, x_{i+2}, x_{i+3})` with indices taken cyclically,
/// one value per entry of `x`.
pub fn cross_ratio_sequence(x: &[f64], tol: &Tolerance) -> Result<Vec<f64>> {
    let n = x.len();
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "cross-ratio sequence needs at least 4 values, got {n}"
        )));
    }
    (0..n)
        .map(|i| cross_ratio(x[i], x[(i + 1) % n], x[(i + 2) % n], x[(i + 3) % n], tol))
        .collect()
}
