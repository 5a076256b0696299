use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use ics_core::engine::{
    circumcenter_defect, detect_period, empirical_scale_factor, period_residual,
    predicted_scale_factor, shift_vector, special_tail, IcsSequence, SeedSimplex, StopReason,
    DEFAULT_PERIOD_TOL,
};
use ics_core::geom::{is_general_position, is_good_position, Tolerance};
use ics_core::lyness::{
    complete_cycle, lyness_orbit, max_product, maximize_product_random_starts, solve_periodic,
    ParamVector,
};
use ics_core::{build_from_params, generate as run_generate, Error, PointsFile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{
    AnalyzeArgs, FileFormat, GenerateArgs, LynessArgs, MaxprodArgs, PeriodicArgs, ReportFormat,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Core(Error),
    NoSolution(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::NoSolution(_) => 4,
            CliError::Core(e) => match e {
                Error::ConstraintViolation(_) => 2,
                Error::Degenerate(_)
                | Error::DegenerateStep { .. }
                | Error::NumericInstability(_) => 3,
                Error::DimensionMismatch { .. }
                | Error::InvalidArgument(_)
                | Error::InsufficientLength { .. }
                | Error::Format(_) => 1,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::NoSolution(msg) => f.write_str(msg),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn tolerance(rel_eps: f64) -> CliResult<Tolerance> {
    Ok(Tolerance::new(rel_eps, Tolerance::default().abs_floor)?)
}

fn params_for(dim: usize, values: Vec<f64>) -> CliResult<ParamVector> {
    if dim < 2 {
        return Err(CliError::Usage(format!(
            "--dim must be at least 2, got {dim}"
        )));
    }
    if values.len() + 1 != dim {
        return Err(CliError::Usage(format!(
            "--dim {dim} needs {} parameters, got {}",
            dim - 1,
            values.len()
        )));
    }
    let p = ParamVector::new(values)?;
    Ok(p)
}

fn read_points_file(path: &Path) -> CliResult<PointsFile> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let is_csv = path
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
    let file = if is_csv {
        PointsFile::from_csv(&text)?
    } else {
        PointsFile::from_json(&text)?
    };
    Ok(file)
}

fn emit(text: &str, out: Option<&Path>) -> CliResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("JSON values serialize")
    );
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn generate(args: GenerateArgs) -> CliResult {
    let tol = tolerance(args.tol)?;
    let (params, seq) = match (args.params, &args.seed_file) {
        (Some(values), _) => {
            let p = params_for(args.dim, values)?;
            let seq = build_from_params(&p, args.b1, args.steps, &tol)?;
            (Some(p.values().to_vec()), seq)
        }
        (None, Some(path)) => {
            let file = read_points_file(path)?;
            if file.dim != args.dim {
                return Err(Error::DimensionMismatch {
                    expected: args.dim,
                    found: file.dim,
                }
                .into());
            }
            let mut points = file.to_points()?;
            if points.len() < args.dim + 1 {
                return Err(Error::InsufficientLength {
                    needed: args.dim + 1,
                    found: points.len(),
                }
                .into());
            }
            if points.len() > args.dim + 1 {
                log::info!("using the first {} points of the seed file", args.dim + 1);
                points.truncate(args.dim + 1);
            }
            let seed = SeedSimplex::new(points, &tol)?;
            (None, run_generate(&seed, args.steps, &tol)?)
        }
        (None, None) => return Err(CliError::Usage("give --params or --seed-file".into())),
    };

    if let Some(reason) = seq.stop {
        let why = match reason {
            StopReason::Contracted => "contracted below resolution",
            StopReason::Expanded => "expanded past range",
        };
        eprintln!("note: run {why}; stopped after {} points", seq.len());
    }
    let seq = if seq.len() >= 2 * seq.d() + 5 {
        seq.with_analysis(DEFAULT_PERIOD_TOL)?
    } else {
        seq
    };
    log::debug!("generated {} points in R^{}", seq.len(), seq.d());

    let file = PointsFile::from_sequence(&seq, params.as_deref());
    let text = match args.format {
        FileFormat::Json => file.to_json(),
        FileFormat::Csv => file.to_csv(args.header)?,
    };
    emit(&text, args.out.as_deref())
}

struct Report {
    dim: usize,
    n_points: usize,
    general_position: bool,
    good_position: bool,
    skipped: usize,
    circumcenter_defect: f64,
    char_seq: Vec<f64>,
    predicted_r: Option<f64>,
    empirical_r: Option<f64>,
    shift: Option<(Vec<f64>, f64)>,
    period: Option<(usize, f64)>,
    period_tol: f64,
}

fn optional(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a (run too short)".to_string(), |v| v.to_string())
}

impl Report {
    fn text(&self) -> String {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let mut out = String::new();
        out.push_str(&format!("dimension: {}\n", self.dim));
        out.push_str(&format!("points: {}\n", self.n_points));
        out.push_str(&format!(
            "first window in general position: {}\n",
            yes_no(self.general_position)
        ));
        out.push_str(&format!(
            "first window in good position: {}\n",
            yes_no(self.good_position)
        ));
        if self.skipped > 0 {
            out.push_str(&format!(
                "analysis starts at point {} (first good window)\n",
                self.skipped + 1
            ));
        }
        out.push_str(&format!(
            "circumcenter defect: {:e}\n",
            self.circumcenter_defect
        ));
        out.push_str(&format!(
            "characteristic sequence: [{}]\n",
            join(&self.char_seq)
        ));
        out.push_str(&format!("r (predicted): {}\n", optional(self.predicted_r)));
        out.push_str(&format!("r (empirical): {}\n", optional(self.empirical_r)));
        match &self.shift {
            Some((v, residual)) => {
                out.push_str(&format!("v: ({})\n", join(v)));
                out.push_str(&format!("affine residual: {residual:e}\n"));
            }
            None => out.push_str("v: n/a (run too short)\n"),
        }
        match self.period {
            Some((m, residual)) => out.push_str(&format!("period: {m} (residual {residual:e})\n")),
            None => out.push_str(&format!(
                "period: aperiodic within tolerance {:e}\n",
                self.period_tol
            )),
        }
        out
    }

    fn json(&self) -> serde_json::Value {
        json!({
            "dim": self.dim,
            "points": self.n_points,
            "general_position": self.general_position,
            "good_position": self.good_position,
            "skipped": self.skipped,
            "circumcenter_defect": self.circumcenter_defect,
            "char_seq": self.char_seq,
            "r_predicted": self.predicted_r,
            "r": self.empirical_r,
            "v": self.shift.as_ref().map(|(v, _)| v),
            "affine_residual": self.shift.as_ref().map(|(_, r)| r),
            "period": self.period.map(|(m, _)| m),
            "period_residual": self.period.map(|(_, r)| r),
            "period_tol": self.period_tol,
        })
    }
}

pub fn analyze(args: AnalyzeArgs) -> CliResult {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {}",
            args.tol
        )));
    }
    let tol = Tolerance::default();
    let file = read_points_file(&args.input)?;
    let points = file.to_points()?;
    let d = file.dim;
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension {d} < 2")).into());
    }
    if points.len() < d + 1 {
        return Err(Error::InsufficientLength {
            needed: d + 1,
            found: points.len(),
        }
        .into());
    }

    let first = &points[..d + 1];
    let general_position = is_general_position(first, &tol)?;
    let good_position = general_position && is_good_position(first, &tol)?;
    let tail = match special_tail(&points, &tol) {
        Ok(tail) => tail,
        Err(e) => {
            let any_general = general_position
                || (points.len() >= 2 * d && is_general_position(&points[d - 1..2 * d], &tol)?);
            return Err(if any_general {
                e.into()
            } else {
                Error::Degenerate("no window of d + 1 points is in general position".into()).into()
            });
        }
    };
    let skipped = points.len() - tail.len();
    let defect = circumcenter_defect(tail, &tol)?;
    if defect > 1e-6 {
        log::warn!("points do not follow the circumcenter map (defect {defect:e})");
    }

    let seq = IcsSequence::from_points(tail.to_vec(), &tol)?;
    let shift = shift_vector(&seq).ok().map(|(v, r)| (v.into_coords(), r));
    let period =
        detect_period(&seq, args.tol).map(|m| (m, period_residual(&seq, m).unwrap_or(0.0)));
    let report = Report {
        dim: d,
        n_points: points.len(),
        general_position,
        good_position,
        skipped,
        circumcenter_defect: defect,
        char_seq: seq.char_seq().to_vec(),
        predicted_r: predicted_scale_factor(&seq).ok(),
        empirical_r: empirical_scale_factor(&seq).ok(),
        shift,
        period,
        period_tol: args.tol,
    };
    match args.format {
        ReportFormat::Text => print!("{}", report.text()),
        ReportFormat::Json => print_json(&report.json()),
    }
    Ok(())
}

pub fn periodic(args: PeriodicArgs) -> CliResult {
    let roots = solve_periodic(args.dim, &args.fix)?;
    if roots.is_empty() {
        let pinned = if args.fix.is_empty() {
            String::new()
        } else {
            let list: Vec<String> = args
                .fix
                .iter()
                .map(|(i, v)| format!("a_{i} = {v}"))
                .collect();
            format!(" with {}", list.join(", "))
        };
        return Err(CliError::NoSolution(format!(
            "no periodic parameters in U_{}{pinned} along the scanned chord",
            args.dim
        )));
    }
    match args.format {
        ReportFormat::Text => {
            println!("periodic parameters (r = 1) for d = {}:", args.dim);
            for p in &roots {
                let r = complete_cycle(p).scale_factor;
                println!("{}  (r - 1 = {:e})", join(p.values()), r - 1.0);
            }
        }
        ReportFormat::Json => {
            let list: Vec<&[f64]> = roots.iter().map(|p| p.values()).collect();
            print_json(&json!({ "dim": args.dim, "fixed": args.fix, "roots": list }));
        }
    }
    Ok(())
}

pub fn maxprod(args: MaxprodArgs) -> CliResult {
    let closed = max_product(args.dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.rng_seed);
    let numeric = maximize_product_random_starts(args.dim, args.starts, &mut rng)?;
    let diff = numeric.value - closed.g_max;
    match args.format {
        ReportFormat::Text => {
            println!("d = {}", args.dim);
            println!(
                "closed form:  G_max = {}  at a_i = {}",
                closed.g_max, closed.t_star
            );
            println!("              r_min = {}", closed.r_min);
            println!(
                "numeric:      G_max = {}  ({} starts, {} iterations)",
                numeric.value, args.starts, numeric.iterations
            );
            println!("              argmax = [{}]", join(&numeric.argmax));
            println!("difference:   {diff:e}");
        }
        ReportFormat::Json => print_json(&json!({
            "dim": args.dim,
            "closed": { "g_max": closed.g_max, "t_star": closed.t_star, "r_min": closed.r_min },
            "numeric": {
                "g_max": numeric.value,
                "argmax": numeric.argmax,
                "iterations": numeric.iterations,
                "starts": args.starts,
                "rng_seed": args.rng_seed,
            },
            "difference": diff,
        })),
    }
    Ok(())
}

pub fn lyness(args: LynessArgs) -> CliResult {
    let p = params_for(args.dim, args.params)?;
    let orbit = lyness_orbit(&p, args.terms)?;
    match args.format {
        ReportFormat::Text => {
            println!("i\ta_i");
            for (i, a) in orbit.iter().enumerate() {
                println!("{}\t{a}", i + 1);
            }
        }
        ReportFormat::Json => print_json(&json!({
            "dim": args.dim,
            "params": p.values(),
            "orbit": orbit,
        })),
    }
    Ok(())
}
