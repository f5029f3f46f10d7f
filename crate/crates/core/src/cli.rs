//! The `qw` command-line front end.
//!
//! Subcommands write plot-ready CSV (or a JSON report for `verify`). Exit codes:
//! 0 ok, 1 verification failed, 2 bad flags, 3 I/O error, 4 degenerate angle.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::closedform::{closedform_distribution, folding_relation_check, Formula};
use crate::coin::{CoinAngle, Protocol};
use crate::correspond::verify_lemma1;
use crate::error::WalkError;
use crate::limit::{self, LimitSpec, LineCoefficients, WalkKind};
use crate::measure::{kolmogorov_distance, total_variation, Component, Distribution};
use crate::walk::{evolve, trajectory, HalfLineState, LineState, Walk};

/// Tolerance on `|alpha|^2 + |beta|^2 = 1` for typed-in coefficients, which are
/// renormalized afterwards.
pub const CLI_NORM_TOL: f64 = 1e-9;

pub const LEMMA1_THRESHOLD: f64 = 1e-11;
pub const LEMMA2_THRESHOLD: f64 = 1e-12;
pub const LINE_IMAG_THRESHOLD: f64 = 1e-13;
pub const FOLDING_THRESHOLD: f64 = 1e-12;
pub const CLOSEDFORM_THRESHOLD: f64 = 1e-9;
/// Largest time checked against the closed forms by `verify`.
pub const CLOSEDFORM_MAX_T: usize = 30;

pub const DEFAULT_TIMES: [usize; 5] = [125, 250, 500, 1000, 2000];

#[derive(Debug, Parser)]
#[command(name = "qw", version, about = "Two-period quantum walks on the half line and the line")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve a walk and write its finding probabilities.
    Simulate(CommonArgs),
    /// Check the half-line/line correspondences and the closed forms; JSON report.
    Verify(CommonArgs),
    /// Tabulate limit densities and CDFs, or the finite-time approximation.
    Limit(CommonArgs),
    /// Kolmogorov distance to the limit law along a schedule of times.
    Converge(CommonArgs),
    /// Closed-form probabilities of the single-coin half-line walk against simulation.
    Closedform(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub run: RunConfig,
    /// Read parameters from a TOML file; flags override it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Print a flat JSON summary on stdout.
    #[arg(long)]
    pub json: bool,
    /// Print the resolved configuration as TOML and exit.
    #[arg(long)]
    pub dump_config: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkArg {
    Halfline,
    Line,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitArg {
    /// `|0>(alpha|0> + beta|1>)`.
    Localized,
    /// The two-site line start built from the real and imaginary parts of alpha, beta.
    Delocalized,
}

/// Every parameter a subcommand may read. Unused ones are ignored.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walk: Option<WalkArg>,
    /// Initial state of a line walk (default: delocalized).
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init: Option<InitArg>,
    /// Coin angle at even times: radians, `pi/N` or `K*pi/N`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta1: Option<String>,
    /// Coin angle at odd times.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta2: Option<String>,
    /// Inner-state-0 coefficient as `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    /// Inner-state-1 coefficient as `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    /// Number of steps / horizon.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    /// Also write a `t,x,p_total` series every k steps.
    #[arg(long, value_name = "K")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub every: Option<usize>,
    /// Destination of the `--every` series (default: `<out>.series.csv`).
    #[arg(long, value_name = "PATH")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<PathBuf>,
    /// Output path (default: stdout).
    #[arg(long, value_name = "PATH")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Number of y-grid points for `limit`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// `limit`: emit the finite-time approximation on integer x instead.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<bool>,
    /// Comma-separated schedule for `converge`.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<usize>>,
    /// Number of randomized protocol/state draws for `verify`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<u64>,
    /// Base seed of the randomized draws.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    /// Fills unset fields from `base`.
    pub fn or(self, base: RunConfig) -> RunConfig {
        RunConfig {
            walk: self.walk.or(base.walk),
            init: self.init.or(base.init),
            theta1: self.theta1.or(base.theta1),
            theta2: self.theta2.or(base.theta2),
            alpha: self.alpha.or(base.alpha),
            beta: self.beta.or(base.beta),
            t: self.t.or(base.t),
            every: self.every.or(base.every),
            series: self.series.or(base.series),
            out: self.out.or(base.out),
            grid: self.grid.or(base.grid),
            approx: self.approx.or(base.approx),
            times: self.times.or(base.times),
            seeds: self.seeds.or(base.seeds),
            seed: self.seed.or(base.seed),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Verification,
    BadFlag { flag: &'static str, msg: String },
    Io { path: PathBuf, source: std::io::Error },
    Degenerate { flag: &'static str, theta: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification => 1,
            CliError::BadFlag { .. } => 2,
            CliError::Io { .. } => 3,
            CliError::Degenerate { .. } => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Verification => write!(f, "verification failed"),
            CliError::BadFlag { flag, msg } => write!(f, "invalid value for {flag}: {msg}"),
            CliError::Io { path, source } => write!(f, "cannot write {}: {source}", path.display()),
            CliError::Degenerate { flag, theta } => write!(
                f,
                "{flag} = {theta} is an excluded angle (0, pi/2, pi, 3pi/2) for limit computations"
            ),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn bad(flag: &'static str, msg: impl Into<String>) -> CliError {
    CliError::BadFlag { flag, msg: msg.into() }
}

/// Parses `1.047`, `pi`, `pi/3`, `3*pi/4`, `2pi/5`.
pub fn parse_angle(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Some(v);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().ok()?),
        None => (s, 1.0),
    };
    let k = num.strip_suffix("pi")?.trim().trim_end_matches('*').trim();
    let k = match k {
        "" => 1.0,
        "-" => -1.0,
        k => k.parse::<f64>().ok()?,
    };
    Some(k * std::f64::consts::PI / den)
}

/// Parses `re,im` or a bare real part.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let mut parts = s.split(',').map(str::trim);
    let re = parts.next()?.parse::<f64>().ok()?;
    let im = match parts.next() {
        Some(p) => p.parse::<f64>().ok()?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return None;
    }
    Some(Complex64::new(re, im))
}

struct Resolved {
    cfg: RunConfig,
    theta1: CoinAngle,
    theta2: CoinAngle,
    alpha: Complex64,
    beta: Complex64,
    notes: Vec<String>,
}

const DEFAULT_THETA1: &str = "pi/3";
const DEFAULT_THETA2: &str = "pi/4";
const DEFAULT_ALPHA: &str = "0.7071067811865476,0";
const DEFAULT_BETA: &str = "0,0.7071067811865476";

fn angle_flag(value: &str, flag: &'static str) -> CliResult<CoinAngle> {
    let theta = parse_angle(value).ok_or_else(|| bad(flag, format!("cannot parse angle {value:?}")))?;
    CoinAngle::new(theta).map_err(|_| bad(flag, format!("{theta} is outside [0, 2pi)")))
}

fn resolve(cfg: RunConfig) -> CliResult<Resolved> {
    let theta1 = angle_flag(cfg.theta1.as_deref().unwrap_or(DEFAULT_THETA1), "--theta1")?;
    let theta2 = angle_flag(cfg.theta2.as_deref().unwrap_or(DEFAULT_THETA2), "--theta2")?;
    let a = cfg.alpha.as_deref().unwrap_or(DEFAULT_ALPHA);
    let b = cfg.beta.as_deref().unwrap_or(DEFAULT_BETA);
    let alpha = parse_complex(a).ok_or_else(|| bad("--alpha", format!("expected re,im, got {a:?}")))?;
    let beta = parse_complex(b).ok_or_else(|| bad("--beta", format!("expected re,im, got {b:?}")))?;
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sqr - 1.0).abs() > CLI_NORM_TOL {
        return Err(bad(
            "--alpha/--beta",
            format!("|alpha|^2 + |beta|^2 = {norm_sqr}, not 1 within {CLI_NORM_TOL}"),
        ));
    }
    let mut notes = Vec::new();
    let scale = norm_sqr.sqrt();
    let (alpha, beta) = if (norm_sqr - 1.0).abs() > 4.0 * f64::EPSILON {
        notes.push(format!("renormalized alpha, beta (|alpha|^2 + |beta|^2 was {norm_sqr:.17})"));
        (alpha / scale, beta / scale)
    } else {
        (alpha, beta)
    };
    Ok(Resolved {
        cfg,
        theta1,
        theta2,
        alpha,
        beta,
        notes,
    })
}

impl Resolved {
    fn protocol(&self) -> Protocol {
        Protocol::new(self.theta1, self.theta2)
    }

    fn nondegenerate(&self, which: &[u8]) -> CliResult<()> {
        for &k in which {
            let (flag, theta) = if k == 1 { ("--theta1", self.theta1) } else { ("--theta2", self.theta2) };
            if theta.is_degenerate() {
                return Err(CliError::Degenerate {
                    flag,
                    theta: theta.radians(),
                });
            }
        }
        Ok(())
    }
}

/// Formats a value with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn num_or_na(v: Option<f64>) -> Value {
    match v {
        Some(v) if v.is_finite() => json!(v),
        _ => json!("NA"),
    }
}

/// Writes `contents` through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file_name = path
        .file_name()
        .ok_or_else(|| io(std::io::Error::new(std::io::ErrorKind::InvalidInput, "no file name")))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, contents).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io(e)
    })
}

fn emit(path: Option<&Path>, contents: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => write_atomic(p, contents.as_bytes()),
        None => stdout.write_all(contents.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn distribution_csv(d: &Distribution) -> String {
    let mut s = String::from("x,p0,p1,p_total\n");
    for (x, p) in d.iter() {
        let _ = writeln!(s, "{x},{},{},{}", fmt_f64(p.p0), fmt_f64(p.p1), fmt_f64(p.total));
    }
    s
}

fn series_path(r: &Resolved) -> CliResult<PathBuf> {
    if let Some(p) = &r.cfg.series {
        return Ok(p.clone());
    }
    match &r.cfg.out {
        Some(out) => {
            let mut name = out.file_stem().unwrap_or_default().to_os_string();
            name.push(".series.csv");
            Ok(out.with_file_name(name))
        }
        None => Err(bad("--every", "needs --series or --out to place the series file")),
    }
}

fn run_series<W: Walk>(protocol: &Protocol, start: W, steps: usize, every: usize) -> (Distribution, String) {
    let mut series = String::from("t,x,p_total\n");
    let mut last = None;
    for state in trajectory(protocol, start).take(steps + 1) {
        if state.time() % every == 0 {
            for (x, p) in state.distribution().iter() {
                let _ = writeln!(series, "{},{x},{}", state.time(), fmt_f64(p.total));
            }
        }
        last = Some(state);
    }
    (last.expect("at least the initial state").distribution(), series)
}

fn cmd_simulate(r: &Resolved, json_summary: bool, stdout: &mut dyn Write) -> CliResult<()> {
    let protocol = r.protocol();
    let steps = r.cfg.t.unwrap_or(500);
    let walk = r.cfg.walk.unwrap_or(WalkArg::Halfline);
    let every = match r.cfg.every {
        Some(0) => return Err(bad("--every", "must be at least 1")),
        e => e,
    };
    let (dist, series) = match walk {
        WalkArg::Halfline => {
            let start = HalfLineState::localized(r.alpha, r.beta).map_err(|e| bad("--alpha/--beta", e.to_string()))?;
            match every {
                Some(k) => {
                    let (d, s) = run_series(&protocol, start, steps, k);
                    (d, Some(s))
                }
                None => (evolve(&protocol, &start, steps).distribution(), None),
            }
        }
        WalkArg::Line => {
            let start = match r.cfg.init.unwrap_or(InitArg::Delocalized) {
                InitArg::Delocalized => LineState::delocalized(r.alpha, r.beta),
                InitArg::Localized => LineState::localized(r.alpha, r.beta),
            }
            .map_err(|e| bad("--alpha/--beta", e.to_string()))?;
            match every {
                Some(k) => {
                    let (d, s) = run_series(&protocol, start, steps, k);
                    (d, Some(s))
                }
                None => (evolve(&protocol, &start, steps).distribution(), None),
            }
        }
    };
    if let Some(series) = series {
        write_atomic(&series_path(r)?, series.as_bytes())?;
    }
    emit(r.cfg.out.as_deref(), &distribution_csv(&dist), stdout)?;
    if json_summary {
        let summary = json!({
            "command": "simulate",
            "t": dist.time(),
            "xmin": dist.xmin(),
            "xmax": dist.xmax(),
            "mass": dist.mass(Component::Total),
        });
        let _ = writeln!(stdout, "{summary}");
    }
    Ok(())
}

/// A uniformly random protocol and normalized initial pair.
pub fn random_case(seed: u64) -> (Protocol, Complex64, Complex64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = std::f64::consts::TAU;
    let protocol = Protocol::from_radians(rng.gen_range(0.0..tau), rng.gen_range(0.0..tau)).expect("in range");
    let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (
        protocol,
        Complex64::new(v[0] / n, v[1] / n),
        Complex64::new(v[2] / n, v[3] / n),
    )
}

/// Builds the `verify` report; `pass` is false if any sub-check exceeds its threshold.
pub fn verify_report(
    protocol: &Protocol,
    alpha: Complex64,
    beta: Complex64,
    horizon: usize,
    seeds: u64,
    base_seed: u64,
) -> std::result::Result<Map<String, Value>, WalkError> {
    let mut pass = true;
    let lemma = verify_lemma1(protocol, alpha, beta, horizon)?;
    pass &= lemma.max_amp_residual < LEMMA1_THRESHOLD;
    pass &= lemma.max_prob_residual < LEMMA2_THRESHOLD;
    pass &= lemma.max_line_imag < LINE_IMAG_THRESHOLD;

    let folding = if horizon >= 1 {
        let f = folding_relation_check(protocol.theta1, alpha, beta, horizon)?;
        pass &= f.max_residual < FOLDING_THRESHOLD && f.one_term_zero;
        Some(f)
    } else {
        None
    };

    let cf_horizon = horizon.min(CLOSEDFORM_MAX_T);
    let closed = if cf_horizon >= 1 && !protocol.theta1.is_degenerate() {
        let single = Protocol::constant(protocol.theta1);
        let mut worst: f64 = 0.0;
        let start = HalfLineState::localized(alpha, beta)?;
        for state in trajectory(&single, start).skip(1).take(cf_horizon) {
            let exact = closedform_distribution(protocol.theta1, alpha, beta, state.time())?;
            let sim = state.distribution();
            for (x, p) in sim.iter() {
                worst = worst.max((exact.total(x) - p.total).abs());
            }
        }
        pass &= worst < CLOSEDFORM_THRESHOLD;
        Some(worst)
    } else {
        None
    };

    let (mut rand_amp, mut rand_prob): (f64, f64) = (0.0, 0.0);
    for i in 0..seeds {
        let (p, a, b) = random_case(base_seed.wrapping_add(i));
        let r = verify_lemma1(&p, a, b, horizon)?;
        rand_amp = rand_amp.max(r.max_amp_residual);
        rand_prob = rand_prob.max(r.max_prob_residual);
    }
    if seeds > 0 {
        pass &= rand_amp < LEMMA1_THRESHOLD && rand_prob < LEMMA2_THRESHOLD;
    }

    let mut m = Map::new();
    m.insert("T".into(), json!(horizon));
    m.insert("theta1".into(), json!(protocol.theta1.radians()));
    m.insert("theta2".into(), json!(protocol.theta2.radians()));
    m.insert("max_amp_residual".into(), json!(lemma.max_amp_residual));
    m.insert("max_prob_residual".into(), json!(lemma.max_prob_residual));
    m.insert("max_line_imag".into(), json!(lemma.max_line_imag));
    m.insert("amp_threshold".into(), json!(LEMMA1_THRESHOLD));
    m.insert("prob_threshold".into(), json!(LEMMA2_THRESHOLD));
    m.insert("line_imag_threshold".into(), json!(LINE_IMAG_THRESHOLD));
    m.insert("folding_max_residual".into(), num_or_na(folding.map(|f| f.max_residual)));
    m.insert(
        "folding_one_term_zero".into(),
        folding.map_or(json!("NA"), |f| json!(f.one_term_zero)),
    );
    m.insert("folding_threshold".into(), json!(FOLDING_THRESHOLD));
    m.insert("closedform_horizon".into(), json!(cf_horizon));
    m.insert("closedform_max_residual".into(), num_or_na(closed));
    m.insert("closedform_threshold".into(), json!(CLOSEDFORM_THRESHOLD));
    m.insert("random_cases".into(), json!(seeds));
    m.insert("random_max_amp_residual".into(), num_or_na((seeds > 0).then_some(rand_amp)));
    m.insert("random_max_prob_residual".into(), num_or_na((seeds > 0).then_some(rand_prob)));
    m.insert("pass".into(), json!(pass));
    Ok(m)
}

fn cmd_verify(r: &Resolved, stdout: &mut dyn Write) -> CliResult<()> {
    let horizon = r.cfg.t.unwrap_or(100);
    let report = verify_report(
        &r.protocol(),
        r.alpha,
        r.beta,
        horizon,
        r.cfg.seeds.unwrap_or(0),
        r.cfg.seed.unwrap_or(0),
    )
    .map_err(|e| bad("--alpha/--beta", e.to_string()))?;
    let pass = report["pass"] == json!(true);
    let mut text = Value::Object(report).to_string();
    text.push('\n');
    emit(r.cfg.out.as_deref(), &text, stdout)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}

fn limit_spec(r: &Resolved, which: WalkKind) -> CliResult<LimitSpec> {
    r.nondegenerate(&[1, 2])?;
    let protocol = r.protocol();
    let spec = match which {
        WalkKind::Halfline => LimitSpec::halfline(&protocol),
        WalkKind::Line => {
            let coeffs = match r.cfg.init.unwrap_or(InitArg::Delocalized) {
                InitArg::Delocalized => LineCoefficients::from_localized(r.alpha, r.beta),
                InitArg::Localized => {
                    return Err(bad("--init", "line limit densities need the delocalized start"));
                }
            };
            LimitSpec::line(&protocol, &coeffs)
        }
    };
    spec.map_err(|e| match e {
        WalkError::DegenerateAngle { theta } => CliError::Degenerate { flag: "--theta1", theta },
        e => bad("--theta1", e.to_string()),
    })
}

fn cmd_limit(r: &Resolved, json_summary: bool, stdout: &mut dyn Write) -> CliResult<()> {
    let which = match r.cfg.walk.unwrap_or(WalkArg::Halfline) {
        WalkArg::Halfline => WalkKind::Halfline,
        WalkArg::Line => WalkKind::Line,
    };
    let spec = limit_spec(r, which)?;
    let mut s = String::new();
    let mut last_cdf = 0.0;
    if r.cfg.approx.unwrap_or(false) {
        let t = r.cfg.t.unwrap_or(500);
        if t == 0 {
            return Err(bad("--t", "the approximation needs t >= 1"));
        }
        s.push_str("x,a0,a1,a_total\n");
        for x in 0..=t as i64 {
            let a = |c| limit::finite_time_approximation(x, t, c, &spec).expect("t >= 1");
            let _ = writeln!(
                s,
                "{x},{},{},{}",
                fmt_f64(a(Component::Inner0)),
                fmt_f64(a(Component::Inner1)),
                fmt_f64(a(Component::Total))
            );
        }
    } else {
        let n = r.cfg.grid.unwrap_or(201);
        if n < 2 {
            return Err(bad("--grid", "needs at least 2 points"));
        }
        let (lo, hi) = (spec.lower(which) - 0.05, spec.edge() + 0.05);
        s.push_str("y,f0,f1,f_total,F_total\n");
        for i in 0..n {
            let y = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let f = |c| limit::limit_density(y, c, &spec, which);
            last_cdf = limit::limit_cdf(y, Component::Total, &spec, which);
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                fmt_f64(y),
                fmt_f64(f(Component::Inner0)),
                fmt_f64(f(Component::Inner1)),
                fmt_f64(f(Component::Total)),
                fmt_f64(last_cdf)
            );
        }
    }
    emit(r.cfg.out.as_deref(), &s, stdout)?;
    if json_summary {
        let summary = json!({
            "command": "limit",
            "xi": spec.xi,
            "edge": spec.edge(),
            "eta_slope": spec.eta_slope,
            "final_cdf": last_cdf,
        });
        let _ = writeln!(stdout, "{summary}");
    }
    Ok(())
}

/// Initial states compared by `converge` (and by the limit's independence check).
pub fn reference_states() -> [(Complex64, Complex64); 3] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        (Complex64::new(h, 0.0), Complex64::new(0.0, h)),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergeRow {
    pub t: usize,
    pub component: Component,
    pub kolmogorov: f64,
    pub init_pair_tv: f64,
}

/// Kolmogorov distance between the rescaled exact CDF and the limit CDF per
/// time and component, plus the largest pairwise total variation among the
/// reference initial states.
pub fn converge_rows(
    protocol: &Protocol,
    alpha: Complex64,
    beta: Complex64,
    times: &[usize],
) -> crate::Result<Vec<ConvergeRow>> {
    let spec = LimitSpec::halfline(protocol)?;
    let start = HalfLineState::localized(alpha, beta)?;
    let refs = reference_states()
        .iter()
        .map(|&(a, b)| HalfLineState::localized(a, b))
        .collect::<crate::Result<Vec<_>>>()?;
    let per_time: Vec<crate::Result<Vec<ConvergeRow>>> = times
        .par_iter()
        .map(|&t| {
            let dist = evolve(protocol, &start, t).distribution();
            let ref_dists: Vec<Distribution> = refs.iter().map(|s| evolve(protocol, s, t).distribution()).collect();
            Component::ALL
                .iter()
                .map(|&component| {
                    let cdf = dist.rescaled_cdf(component)?;
                    let kolmogorov = kolmogorov_distance(&cdf, |y| {
                        limit::limit_cdf(y, component, &spec, WalkKind::Halfline)
                    });
                    let mut tv: f64 = 0.0;
                    for i in 0..ref_dists.len() {
                        for j in i + 1..ref_dists.len() {
                            tv = tv.max(total_variation(&ref_dists[i], &ref_dists[j], component));
                        }
                    }
                    Ok(ConvergeRow {
                        t,
                        component,
                        kolmogorov,
                        init_pair_tv: tv,
                    })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_time {
        rows.extend(r?);
    }
    Ok(rows)
}

fn cmd_converge(r: &Resolved, json_summary: bool, stdout: &mut dyn Write) -> CliResult<()> {
    r.nondegenerate(&[1, 2])?;
    let times = r.cfg.times.clone().unwrap_or_else(|| DEFAULT_TIMES.to_vec());
    if times.contains(&0) {
        return Err(bad("--times", "times must be at least 1"));
    }
    let rows = converge_rows(&r.protocol(), r.alpha, r.beta, &times).map_err(|e| bad("--times", e.to_string()))?;
    let mut s = String::from("t,component,kolmogorov,init_pair_tv\n");
    for row in &rows {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            row.t,
            row.component,
            fmt_f64(row.kolmogorov),
            fmt_f64(row.init_pair_tv)
        );
    }
    emit(r.cfg.out.as_deref(), &s, stdout)?;
    if json_summary {
        let last = rows.iter().rev().find(|row| row.component == Component::Total);
        let summary = json!({
            "command": "converge",
            "times": times,
            "final_total_kolmogorov": num_or_na(last.map(|row| row.kolmogorov)),
        });
        let _ = writeln!(stdout, "{summary}");
    }
    Ok(())
}

fn cmd_closedform(r: &Resolved, json_summary: bool, stdout: &mut dyn Write) -> CliResult<()> {
    r.nondegenerate(&[1])?;
    let t = r.cfg.t.unwrap_or(20);
    if t == 0 {
        return Err(bad("--t", "closed forms are stated for t >= 1"));
    }
    let exact = closedform_distribution(r.theta1, r.alpha, r.beta, t).map_err(|e| bad("--alpha/--beta", e.to_string()))?;
    let start = HalfLineState::localized(r.alpha, r.beta).map_err(|e| bad("--alpha/--beta", e.to_string()))?;
    let sim = evolve(&Protocol::constant(r.theta1), &start, t).distribution();
    let mut s = String::from("x,p_closedform,p_simulated,abs_diff,formula\n");
    let mut worst: f64 = 0.0;
    for x in 0..=t {
        let (pc, ps) = (exact.total(x as i64), sim.total(x as i64));
        worst = worst.max((pc - ps).abs());
        let _ = writeln!(
            s,
            "{x},{},{},{},{}",
            fmt_f64(pc),
            fmt_f64(ps),
            fmt_f64((pc - ps).abs()),
            Formula::for_site(t, x).label()
        );
    }
    emit(r.cfg.out.as_deref(), &s, stdout)?;
    if json_summary {
        let summary = json!({ "command": "closedform", "t": t, "max_abs_diff": worst });
        let _ = writeln!(stdout, "{summary}");
    }
    Ok(())
}

fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| bad("--config", format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| bad("--config", e.to_string()))
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let (kind, args) = match cli.command {
        Command::Simulate(a) => ("simulate", a),
        Command::Verify(a) => ("verify", a),
        Command::Limit(a) => ("limit", a),
        Command::Converge(a) => ("converge", a),
        Command::Closedform(a) => ("closedform", a),
    };
    let file_cfg = match &args.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    let cfg = args.run.or(file_cfg);
    if args.dump_config {
        let text = toml::to_string(&cfg).map_err(|e| bad("--dump-config", e.to_string()))?;
        let _ = stdout.write_all(text.as_bytes());
        return Ok(());
    }
    if args.json && cfg.out.is_none() && kind != "verify" {
        return Err(bad("--json", "needs --out so the CSV and the summary do not share stdout"));
    }
    let r = resolve(cfg)?;
    for note in &r.notes {
        let _ = writeln!(stderr, "note: {note}");
    }
    match kind {
        "simulate" => cmd_simulate(&r, args.json, stdout),
        "verify" => cmd_verify(&r, stdout),
        "limit" => cmd_limit(&r, args.json, stdout),
        "converge" => cmd_converge(&r, args.json, stdout),
        _ => cmd_closedform(&r, args.json, stdout),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "qw: {e}");
            e.exit_code()
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi/3"), Some(PI / 3.0));
        assert_eq!(parse_angle("3*pi/4"), Some(3.0 * PI / 4.0));
        assert_eq!(parse_angle("2pi/5"), Some(2.0 * PI / 5.0));
        assert_eq!(parse_angle("pi"), Some(PI));
        assert_eq!(parse_angle("0.25"), Some(0.25));
        assert_eq!(parse_angle("tau"), None);
        assert_eq!(parse_angle("x*pi/2"), None);
    }

    #[test]
    fn complexes() {
        assert_eq!(parse_complex("0.6,-0.8"), Some(Complex64::new(0.6, -0.8)));
        assert_eq!(parse_complex("1"), Some(Complex64::new(1.0, 0.0)));
        assert_eq!(parse_complex("1,2,3"), None);
        assert_eq!(parse_complex("a,b"), None);
    }

    #[test]
    fn config_merge_prefers_flags() {
        let flags = RunConfig {
            t: Some(3),
            ..Default::default()
        };
        let file = RunConfig {
            t: Some(9),
            theta1: Some("pi/6".into()),
            ..Default::default()
        };
        let m = flags.or(file);
        assert_eq!(m.t, Some(3));
        assert_eq!(m.theta1.as_deref(), Some("pi/6"));
    }

    #[test]
    fn typed_coefficients_are_renormalized() {
        let r = resolve(RunConfig {
            alpha: Some("0.70710678118".into()),
            beta: Some("0,0.70710678118".into()),
            ..Default::default()
        })
        .unwrap();
        assert!((r.alpha.norm_sqr() + r.beta.norm_sqr() - 1.0).abs() < 1e-15);
        assert_eq!(r.notes.len(), 1);
        assert!(resolve(RunConfig {
            alpha: Some("0.7".into()),
            ..Default::default()
        })
        .is_err());
    }

    #[test]
    fn random_cases_are_normalized_and_reproducible() {
        let (p, a, b) = random_case(7);
        assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-14);
        assert_eq!(random_case(7), (p, a, b));
    }
}
