//! Iterated circumcenter sequences (ICSs) in `R^d`.
//!
//! An ICS is a sequence of points where each point is the circumcenter of
//! the `d + 1` points before it. This crate provides
//!
//! * [`geom`]: affine rank, general and good position, circumcenters and
//!   circumspheres inside an affine hull;
//! * [`lyness`]: the signed non-adjacent subset polynomials `F`, the
//!   parameter space `U_d`, completion of characteristic cycles, the
//!   product `G` with its maximum, periodic-parameter root finding and the
//!   cross-ratio parametrization;
//! * [`engine`]: iteration of the circumcenter map, characteristic
//!   sequences, scale factor, shift vector and period detection;
//! * [`synthesis`]: seeds and whole runs built from parameters;
//! * [`format`]: deterministic JSON/CSV files.
//!
//! ```
//! use ics_core::{build_periodic, detect_period, Tolerance};
//!
//! let (_, run) = build_periodic(3, 2, &Tolerance::default()).unwrap();
//! assert_eq!(detect_period(&run, 1e-7), Some(10));
//! ```

pub mod engine;
pub mod error;
pub mod format;
pub mod geom;
pub mod lyness;
pub mod point;
pub mod sample;
pub mod synthesis;

pub use engine::{
    analyze, characteristic_sequence, detect_period, empirical_scale_factor, generate,
    period_residual, shift_vector, step, IcsAnalysis, IcsSequence, SeedSimplex, StopReason,
};
pub use error::{Error, Result};
pub use format::PointsFile;
pub use geom::{
    affine_rank, circumcenter, circumsphere_in_hull, halfline_side_check, is_general_position,
    is_good_position, radius_sq_via_characteristic, CircumsphereResult, Tolerance,
};
pub use lyness::{
    complete_cycle, cross_ratio, eval_f, in_u_d, is_critical_in_last, lyness_orbit, max_product,
    product_g, solve_periodic, CharCycle, MaxProductResult, ParamVector,
};
pub use point::Point;
pub use synthesis::{build_from_params, build_periodic, construct_seed};
