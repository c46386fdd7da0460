use crate::output::{Cell, Format, Table};
use crate::{Cli, Command, Failure, Global};
use clap::Args;
use serde::Serialize;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use thetazeta::counterexample::{ce_expansion, ce_expansion_ground_truth, ce_phi_closed, ce_phi_numeric, CounterexampleSpec};
use thetazeta::exec::ExecPolicy;
use thetazeta::prime_series::{check_eq5, check_eq6, check_eq7_holomorphy, default_eq7_grid, IdentityReport};
use thetazeta::primes::{generate_primes, read_index, save_table, PrimeTable};
use thetazeta::theta::{estimate_radius, task1_scan, theta_orders, RadiusMethod, ScanSettings, SCAN_ORDER_DEFAULT};
use thetazeta::zeta::{refine_zero, zeta, LISTED_ZERO_ORDINATES};
use thetazeta::{Complex64, Error, PrecisionConfig};

type Outcome = Result<(), Failure>;

/// Radius-estimate tolerance of the counterexample calibration.
const CALIBRATION_TOLERANCE: f64 = 0.05;
const CALIBRATION_ORDER: u32 = 20;
const CALIBRATION_GAMMA: f64 = 0.2;
/// Listed ordinates further than this from their refinement are flagged.
const ZERO_FLAG_DISTANCE: f64 = 0.01;
const TRANSFORM_TOLERANCE: f64 = 1e-8;

#[derive(Args, Debug)]
pub struct PrimesArgs {
    #[arg(long)]
    pub limit: u64,
}

#[derive(Args, Debug)]
pub struct IdentitiesArgs {
    /// Identity to check: 5, 6 or 7
    #[arg(long)]
    pub eq: u8,
    /// Evaluation point `re` or `re,im`; repeatable
    #[arg(long, allow_hyphen_values = true)]
    pub z: Vec<String>,
    /// Use the built-in grid for the chosen identity (`default`)
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000_000)]
    pub prime_limit: u64,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Grid of b values as `min:max:step`
    #[arg(long, allow_hyphen_values = true, default_value = "0:9:1")]
    pub b: String,
    #[arg(long = "N", default_value_t = SCAN_ORDER_DEFAULT)]
    pub n: u32,
    #[arg(long, default_value_t = 10_000_000)]
    pub prime_limit: u64,
    /// Truncation point; defaults to the prime limit
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long, default_value = "regression")]
    pub method: String,
    /// Check the estimator on the model kernel first and stop if it misses
    #[arg(long)]
    pub calibrate: bool,
}

#[derive(Args, Debug)]
pub struct ZerosArgs {
    #[arg(long, default_value_t = 60.0)]
    pub max_im: f64,
}

#[derive(Args, Debug)]
pub struct CounterexampleArgs {
    #[arg(long, default_value_t = CALIBRATION_GAMMA, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = thetazeta::counterexample::DEFAULT_FREQUENCY)]
    pub frequency: f64,
    #[arg(long = "T", default_value_t = 1e4)]
    pub t: f64,
    #[arg(long, default_value_t = CALIBRATION_ORDER)]
    pub order: u32,
    /// Add a point next to a pole, expected to fail with a pole error
    #[arg(long)]
    pub near_pole: bool,
}

#[derive(Args, Debug)]
pub struct ThetaArgs {
    /// Evaluation point `re,im`
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    /// Highest derivative order to report
    #[arg(long, default_value_t = 0)]
    pub order: u32,
    #[arg(long, default_value_t = 10_000_000)]
    pub prime_limit: u64,
    #[arg(long = "T")]
    pub t: Option<f64>,
}

/// Everything that determines a run's output, echoed into the CSV header.
#[derive(Debug, Serialize)]
struct RunConfig<'a> {
    command: &'a str,
    digits: u32,
    abs_tol: f64,
    rel_tol: f64,
    prime_limit: Option<u64>,
    #[serde(rename = "T")]
    t: Option<f64>,
    #[serde(rename = "N")]
    n: Option<u32>,
    epsilon: Option<f64>,
    b_grid: Option<Grid>,
    output_path: Option<String>,
    output_format: Format,
    cache_path: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    extra: Vec<(String, String)>,
}

impl<'a> RunConfig<'a> {
    fn new(command: &'a str, g: &Global) -> Self {
        RunConfig {
            command,
            digits: g.digits,
            abs_tol: g.abs_tol,
            rel_tol: g.rel_tol,
            prime_limit: None,
            t: None,
            n: None,
            epsilon: None,
            b_grid: None,
            output_path: g.out.as_ref().map(|p| p.display().to_string()),
            output_format: g.format,
            cache_path: g.cache.display().to_string(),
            extra: Vec::new(),
        }
    }

    fn header(&self) -> String {
        format!("thetazeta run_config={}", serde_json::to_string(self).expect("plain data serializes"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Grid {
    pub fn parse(s: &str) -> Result<Self, Failure> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Failure::Usage(format!("grid must be `min:max:step`, got `{s}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad());
        let g = Grid { min: num(parts[0])?, max: num(parts[1])?, step: num(parts[2])? };
        if !(g.step > 0.0 && g.min.is_finite() && g.max.is_finite() && g.max >= g.min) {
            return Err(Failure::Usage(format!("grid `{s}` is empty or has a nonpositive step")));
        }
        Ok(g)
    }

    /// Points min, min + step, … up to max (inclusive up to rounding).
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.min + i as f64 * self.step).collect()
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    let bad = || Failure::Usage(format!("expected `re` or `re,im`, got `{s}`"));
    let mut it = s.split(',');
    let re = it.next().ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())?;
    let im = match it.next() {
        Some(p) => p.trim().parse::<f64>().map_err(|_| bad())?,
        None => 0.0,
    };
    if it.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn precision(g: &Global) -> Result<PrecisionConfig, Failure> {
    let cfg = PrecisionConfig::new(g.digits, g.abs_tol, g.rel_tol)?;
    Ok(cfg.with_exec(if g.sequential { ExecPolicy::Sequential } else { ExecPolicy::default() }))
}

/// Sieve to `limit`, recording checkpoints in the cache when it covers less.
fn prime_table(limit: u64, cache: &Path) -> Result<PrimeTable, Failure> {
    if limit < 2 {
        return Err(Failure::Usage(format!("prime limit must be at least 2, got {limit}")));
    }
    let table = generate_primes(limit)?;
    let covered = cache.exists() && read_index(cache).map(|i| i.limit >= limit).unwrap_or(false);
    if !covered {
        if let Err(e) = write_cache(&table, cache) {
            eprintln!("thetazeta: warning: cache not updated: {e}");
        }
    }
    Ok(table)
}

fn write_cache(table: &PrimeTable, cache: &Path) -> Result<(), Error> {
    if let Some(dir) = cache.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    save_table(table, cache)
}

pub fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Primes(a) => cmd_primes(a, g),
        Command::Identities(a) => cmd_identities(a, g),
        Command::Scan(a) => cmd_scan(a, g),
        Command::Zeros(a) => cmd_zeros(a, g),
        Command::Counterexample(a) => cmd_counterexample(a, g),
        Command::Theta(a) => cmd_theta(a, g),
    }
}

fn out_path(g: &Global) -> Option<&Path> {
    g.out.as_deref()
}

fn cmd_primes(a: &PrimesArgs, g: &Global) -> Outcome {
    if a.limit < 2 {
        return Err(Failure::Usage(format!("--limit must be at least 2, got {}", a.limit)));
    }
    let cache: &PathBuf = &g.cache;
    if cache.exists() {
        let index = read_index(cache)?;
        if index.limit >= a.limit {
            println!("limit={} pi={}", a.limit, index.prime_count(a.limit)?);
            return Ok(());
        }
    }
    let table = generate_primes(a.limit)?;
    write_cache(&table, cache)?;
    println!("limit={} pi={}", a.limit, table.prime_count(a.limit as f64)?);
    Ok(())
}

fn eq5_grid() -> Vec<Complex64> {
    let mut out = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            out.push(Complex64::new(1.5 + 0.375 * i as f64, -2.0 + j as f64));
        }
    }
    out
}

fn cmd_identities(a: &IdentitiesArgs, g: &Global) -> Outcome {
    let cfg = precision(g)?;
    if !(a.tol > 0.0) {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    let mut points: Vec<Complex64> = a.z.iter().map(|s| parse_complex(s)).collect::<Result<_, _>>()?;
    if !matches!(a.eq, 5 | 6 | 7) {
        return Err(Failure::Usage(format!("--eq must be 5, 6 or 7, got {}", a.eq)));
    }
    if let Some(other) = a.grid.as_deref().filter(|g| *g != "default") {
        return Err(Failure::Usage(format!("unknown grid `{other}`; only `default` is built in")));
    }
    if a.grid.is_some() || points.is_empty() {
        points.extend(match a.eq {
            5 => eq5_grid(),
            6 => vec![Complex64::new(2.0, 0.0), Complex64::new(2.0, 1.0)],
            _ => default_eq7_grid(),
        });
    }
    let table = prime_table(a.prime_limit, &g.cache)?;
    let reports: Vec<IdentityReport> = match a.eq {
        5 => points.iter().map(|&z| check_eq5(z, &table, &cfg)).collect::<Result<_, _>>()?,
        6 => points.iter().map(|&z| check_eq6(z, &table, &cfg)).collect::<Result<_, _>>()?,
        _ => check_eq7_holomorphy(&points, &table, &cfg)?,
    };
    let mut t = Table::new(
        vec![
            "identity_id", "z_re", "z_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "tail_bound", "prime_limit", "integral_t",
            "pass", "extras", "notes",
        ],
        g.digits,
    );
    let mut failed = 0;
    for r in &reports {
        let pass = r.residual < a.tol;
        failed += usize::from(!pass);
        let extras = r.extras.iter().map(|(k, v)| format!("{k}={v:e}")).collect::<Vec<_>>().join(";");
        t.push(vec![
            r.identity_id.as_str().into(),
            r.z.re.into(),
            r.z.im.into(),
            r.lhs.re.into(),
            r.lhs.im.into(),
            r.rhs.re.into(),
            r.rhs.im.into(),
            r.residual.into(),
            r.tail_bound.into(),
            r.prime_limit.into(),
            r.integral_t.into(),
            pass.into(),
            extras.into(),
            r.notes.join("; ").into(),
        ]);
    }
    let mut rc = RunConfig::new("identities", g);
    rc.prime_limit = Some(a.prime_limit);
    rc.t = Some(a.prime_limit as f64);
    rc.extra = vec![("eq".into(), a.eq.to_string()), ("tol".into(), format!("{:e}", a.tol))];
    t.write(g.format, &rc.header(), out_path(g))?;
    if failed > 0 {
        return Err(Failure::Tolerance(format!("{failed} of {} residuals at or above tol = {:e}", reports.len(), a.tol)));
    }
    Ok(())
}

/// Regression on the model kernel's exact coefficients: (relative error, estimate, truth).
fn calibration(method: RadiusMethod) -> Result<(f64, f64, f64), Failure> {
    let spec = CounterexampleSpec::new(CALIBRATION_GAMMA)?;
    let a = Complex64::new(2.0, 0.0);
    let est = estimate_radius(&ce_expansion(a, &spec, CALIBRATION_ORDER)?, method)?;
    let truth = ce_expansion_ground_truth(a, &spec);
    let r = est.extrapolated_radius.unwrap_or(f64::INFINITY);
    Ok(((r / truth - 1.0).abs(), r, truth))
}

fn cmd_scan(a: &ScanArgs, g: &Global) -> Outcome {
    let cfg = precision(g)?;
    let grid = Grid::parse(&a.b)?;
    let method: RadiusMethod = a.method.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    if !(a.eps > 0.0) {
        return Err(Failure::Usage(format!("--eps must be positive, got {}", a.eps)));
    }
    let t = a.t.unwrap_or(a.prime_limit as f64);
    if t > a.prime_limit as f64 {
        return Err(Failure::Usage(format!("--T {t} exceeds --prime-limit {}", a.prime_limit)));
    }
    let mut rc = RunConfig::new("scan", g);
    if a.calibrate {
        let (err, r, truth) = calibration(method)?;
        eprintln!("calibration: method={method} estimate={r} truth={truth} relative_error={err:.4}");
        if !(err < CALIBRATION_TOLERANCE) {
            return Err(Failure::Tolerance(format!(
                "calibration missed: relative error {err:.4} is not below {CALIBRATION_TOLERANCE}; scan refused"
            )));
        }
        rc.extra.push(("calibration_relative_error".into(), format!("{err:e}")));
    }
    let table = prime_table(a.prime_limit, &g.cache)?;
    let settings = ScanSettings { epsilon: a.eps, order: a.n, truncation_t: t, method };
    let rows = task1_scan(&grid.points(), &settings, &table, &cfg)?;
    let mut out = Table::new(
        vec![
            "b", "epsilon", "N_used", "radius_estimate", "method", "noise_floor_order", "T", "prime_limit", "digits", "inside_3pi",
            "inside_4pi", "status",
        ],
        g.digits,
    );
    for r in &rows {
        let radius = match (r.radius_estimate, r.status.as_str()) {
            (Some(v), _) => Cell::Num(v),
            (None, "ok") => "unbounded-at-this-order".into(),
            (None, _) => Cell::Empty,
        };
        out.push(vec![
            r.b.into(),
            r.epsilon.into(),
            r.n_used.into(),
            radius,
            r.method.label().into(),
            r.noise_floor_order.into(),
            r.truncation_t.into(),
            r.prime_limit.into(),
            r.digits.into(),
            r.inside_3pi.into(),
            r.inside_4pi.into(),
            r.status.as_str().into(),
        ]);
    }
    rc.prime_limit = Some(a.prime_limit);
    rc.t = Some(t);
    rc.n = Some(a.n);
    rc.epsilon = Some(a.eps);
    rc.b_grid = Some(grid);
    rc.extra.push(("method".into(), method.to_string()));
    rc.extra.push(("proven_region".into(), format!("|b| < 3π = {}", 3.0 * PI)));
    out.write(g.format, &rc.header(), out_path(g))?;
    Ok(())
}

fn cmd_zeros(a: &ZerosArgs, g: &Global) -> Outcome {
    let cfg = precision(g)?;
    let mut t = Table::new(vec!["listed_value", "refined_value", "abs_zeta", "flagged", "status"], g.digits);
    for &y0 in LISTED_ZERO_ORDINATES.iter().filter(|&&y| y <= a.max_im) {
        match refine_zero(y0, &cfg) {
            Ok(y) => {
                let abs = zeta(Complex64::new(0.5, y), &cfg)?.value.norm();
                t.push(vec![y0.into(), y.into(), abs.into(), ((y - y0).abs() > ZERO_FLAG_DISTANCE).into(), "ok".into()]);
            }
            Err(e @ Error::NotAZero { .. }) => {
                t.push(vec![y0.into(), Cell::Empty, Cell::Empty, true.into(), e.to_string().into()]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut rc = RunConfig::new("zeros", g);
    rc.extra.push(("max_im".into(), a.max_im.to_string()));
    t.write(g.format, &rc.header(), out_path(g))?;
    Ok(())
}

fn cmd_counterexample(a: &CounterexampleArgs, g: &Global) -> Outcome {
    let cfg = precision(g)?;
    let spec = CounterexampleSpec::with_frequency(a.gamma, a.frequency).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut t = Table::new(
        vec!["kind", "z_re", "z_im", "closed_re", "closed_im", "numeric_re", "numeric_im", "residual", "error_bound", "status"],
        g.digits,
    );
    let mut worst: f64 = 0.0;
    let mut points = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            points.push(Complex64::new(1.1 + (3.0 - 1.1) * i as f64 / 3.0, -5.0 + 10.0 * j as f64 / 3.0));
        }
    }
    for z in points {
        let closed = ce_phi_closed(z, &spec)?;
        let num = ce_phi_numeric(z, &spec, &cfg, a.t)?;
        let res = (closed - num.value).norm();
        worst = worst.max(res);
        t.push(vec![
            "transform".into(),
            z.re.into(),
            z.im.into(),
            closed.re.into(),
            closed.im.into(),
            num.value.re.into(),
            num.value.im.into(),
            res.into(),
            num.error_bound.into(),
            "ok".into(),
        ]);
    }
    if a.near_pole {
        let z = spec.pole_pair()[0] + Complex64::new(1e-10, 0.0);
        let status = match ce_phi_closed(z, &spec) {
            Err(e) => e.to_string(),
            Ok(_) => "unexpectedly finite".into(),
        };
        t.push(vec![
            "near_pole".into(),
            z.re.into(),
            z.im.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            status.into(),
        ]);
    }
    let center = Complex64::new(2.0, 0.0);
    let truth = ce_expansion_ground_truth(center, &spec);
    let est = estimate_radius(&ce_expansion(center, &spec, a.order)?, RadiusMethod::Regression)?;
    let r = est.extrapolated_radius.unwrap_or(f64::INFINITY);
    let rel = (r / truth - 1.0).abs();
    let calibrated = rel < CALIBRATION_TOLERANCE;
    t.push(vec![
        "calibration".into(),
        center.re.into(),
        center.im.into(),
        truth.into(),
        Cell::Empty,
        r.into(),
        Cell::Empty,
        rel.into(),
        Cell::Empty,
        if calibrated { "ok".into() } else { "missed".into() },
    ]);
    let mut rc = RunConfig::new("counterexample", g);
    rc.t = Some(a.t);
    rc.n = Some(a.order);
    rc.extra = vec![("gamma".into(), a.gamma.to_string()), ("frequency".into(), a.frequency.to_string())];
    t.write(g.format, &rc.header(), out_path(g))?;
    if !(worst < TRANSFORM_TOLERANCE) {
        return Err(Failure::Tolerance(format!("closed form and quadrature differ by {worst:e}")));
    }
    if !calibrated {
        return Err(Failure::Tolerance(format!("radius calibration off by {rel:.4}")));
    }
    Ok(())
}

fn cmd_theta(a: &ThetaArgs, g: &Global) -> Outcome {
    let cfg = precision(g)?;
    let z = parse_complex(&a.z)?;
    let t = a.t.unwrap_or(a.prime_limit as f64);
    if t > a.prime_limit as f64 {
        return Err(Failure::Usage(format!("--T {t} exceeds --prime-limit {}", a.prime_limit)));
    }
    let table = prime_table(a.prime_limit, &g.cache)?;
    let orders = theta_orders(z, a.order, &table, &cfg, t)?;
    let mut out = Table::new(
        vec![
            "z_re", "z_im", "order", "value_re", "value_im", "error_bound", "numerical_error", "tail_bound", "tail_model", "alt_tail_model",
            "alt_tail_bound", "T", "prime_limit", "digits", "notes",
        ],
        g.digits,
    );
    for (k, r) in orders.iter().enumerate() {
        out.push(vec![
            z.re.into(),
            z.im.into(),
            (k as u64).into(),
            r.value.re.into(),
            r.value.im.into(),
            r.error_bound.into(),
            r.numerical_error.into(),
            r.tail_bound.into(),
            r.tail_model.label().into(),
            r.alt_tail.map(|(m, _)| m.label()).into(),
            r.alt_tail.map(|(_, b)| b).into(),
            t.into(),
            table.limit().into(),
            g.digits.into(),
            r.notes.join("; ").into(),
        ]);
    }
    let mut rc = RunConfig::new("theta", g);
    rc.prime_limit = Some(a.prime_limit);
    rc.t = Some(t);
    rc.n = Some(a.order);
    out.write(g.format, &rc.header(), out_path(g))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_inclusive() {
        assert_eq!(Grid::parse("0:10:0.5").ok().unwrap().points().len(), 21);
        let p = Grid::parse("-5:5:1").ok().unwrap().points();
        assert_eq!(p.len(), 11);
        assert_eq!(p[0], -5.0);
        assert_eq!(p[10], 5.0);
        assert!(Grid::parse("1:0:1").is_err());
        assert!(Grid::parse("0:1").is_err());
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("2").ok().unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("1.5,-2").ok().unwrap(), Complex64::new(1.5, -2.0));
        assert!(parse_complex("a,b").is_err());
        assert!(parse_complex("1,2,3").is_err());
    }
}
