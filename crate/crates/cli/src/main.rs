//! `conevac`: point evaluation, scans, figure datasets and the verification suite.
//!
//! Exit status: 0 on success, 1 when verification fails or a run hits a
//! numerical or I/O error, 2 for usage and domain errors.

// `!(x > 0.0)` is the idiom for rejecting NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod figures;
mod parse;
mod scan;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use conevac_core::stress::COMPONENT_NAMES;
use conevac_core::{
    run_oracle_suite, stress_at, stress_t0, tbar, BoundaryCondition, Coupling, FieldPoint, Geometry, KernelForm,
    Ladder, PointPair, RenormMode,
};
use serde::Serialize;

use parse::Cutoff;
use scan::{Quantity, ScanSpec, Spacing, SweepVar};

#[derive(Parser)]
#[command(
    name = "conevac",
    version,
    about = "Vacuum stress of a massless scalar on cones, wedges and flat space",
    args_override_self = true,
    after_help = "Any subcommand flag can also come from `--config FILE` (lines of `key = value`); \
                  command-line flags win."
)]
struct Cli {
    /// Read flags from a `key = value` file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel and stress at a single point.
    Eval(EvalArgs),
    /// Sweep r, θ or θ₁ and write CSV plus a JSON sidecar.
    Scan(ScanArgs),
    /// Write the datasets of a published figure.
    Figure(FigureArgs),
    /// Run the oracle suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryKind {
    Minkowski,
    Cone,
    Dowker,
    Wedge,
    Periodic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Bc {
    Dirichlet,
    Neumann,
}

#[derive(Clone, Copy, ValueEnum)]
enum NamedCoupling {
    /// ξ = 0
    Minimal,
    /// ξ = 1/6
    Conformal,
    /// ξ = 1/4
    Quarter,
}

#[derive(Clone, Copy, ValueEnum)]
enum Renorm {
    /// Subtract the flat kernel before differentiating.
    Kernel,
    /// Subtract the flat zero-point stress afterwards.
    Component,
    /// No subtraction.
    Raw,
}

impl From<Renorm> for RenormMode {
    fn from(r: Renorm) -> Self {
        match r {
            Renorm::Kernel => RenormMode::KernelSubtraction,
            Renorm::Component => RenormMode::ComponentSubtraction,
            Renorm::Raw => RenormMode::Raw,
        }
    }
}

#[derive(Args)]
struct GeometryArgs {
    #[arg(long, value_enum)]
    geometry: GeometryKind,
    /// Cone period, e.g. `0.8pi`.
    #[arg(long, value_parser = parse::angle)]
    theta1: Option<f64>,
    /// Wedge opening angle, e.g. `pi/2`.
    #[arg(long, value_parser = parse::angle)]
    theta0: Option<f64>,
    #[arg(long, value_enum, default_value = "dirichlet")]
    bc: Bc,
    /// Period along z for `--geometry periodic`.
    #[arg(long, value_parser = parse::real)]
    period: Option<f64>,
}

impl GeometryArgs {
    fn geometry(&self) -> Result<Geometry> {
        let need = |v: Option<f64>, flag: &str, what: &str| {
            v.ok_or_else(|| usage(format!("--geometry {what} needs --{flag}")))
        };
        let g = match self.geometry {
            GeometryKind::Minkowski => Geometry::Minkowski,
            GeometryKind::Dowker => Geometry::Dowker,
            GeometryKind::Cone => Geometry::Cone {
                theta1: need(self.theta1, "theta1", "cone")?,
            },
            GeometryKind::Wedge => Geometry::Wedge {
                theta0: need(self.theta0, "theta0", "wedge")?,
                bc: match self.bc {
                    Bc::Dirichlet => BoundaryCondition::Dirichlet,
                    Bc::Neumann => BoundaryCondition::Neumann,
                },
            },
            GeometryKind::Periodic => Geometry::PeriodicLine {
                period: need(self.period, "period", "periodic")?,
            },
        };
        g.validate()?;
        Ok(g)
    }
}

#[derive(Args)]
struct CouplingArgs {
    /// β = ξ - 1/4 (default 0).
    #[arg(long, value_parser = parse::real, conflicts_with_all = ["xi", "coupling"])]
    beta: Option<f64>,
    #[arg(long, value_parser = parse::real, conflicts_with = "coupling")]
    xi: Option<f64>,
    #[arg(long, value_enum)]
    coupling: Option<NamedCoupling>,
}

impl CouplingArgs {
    fn coupling(&self) -> Coupling {
        if let Some(b) = self.beta {
            Coupling::new(b)
        } else if let Some(x) = self.xi {
            Coupling::from_xi(x)
        } else {
            match self.coupling {
                Some(NamedCoupling::Minimal) => Coupling::minimal(),
                Some(NamedCoupling::Conformal) => Coupling::conformal(),
                Some(NamedCoupling::Quarter) | None => Coupling::quarter(),
            }
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    #[arg(long, value_parser = parse::real)]
    r: f64,
    /// Defaults to `--r`; differing primed coordinates need `--kernel-only`.
    #[arg(long, value_parser = parse::real)]
    rprime: Option<f64>,
    #[arg(long, value_parser = parse::angle)]
    theta: Option<f64>,
    #[arg(long, value_parser = parse::angle)]
    thetaprime: Option<f64>,
    #[arg(long, value_parser = parse::real, default_value = "0")]
    z: f64,
    #[arg(long, value_parser = parse::real)]
    zprime: Option<f64>,
    /// Euclidean time split; `0` extrapolates the stress to t -> 0.
    #[arg(long, value_parser = parse::cutoff, default_value = "1")]
    t: Cutoff,
    #[command(flatten)]
    coupling: CouplingArgs,
    #[arg(long, value_enum, default_value = "kernel")]
    renorm: Renorm,
    /// Print only the kernel.
    #[arg(long)]
    kernel_only: bool,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    #[arg(long, value_enum)]
    sweep: SweepVar,
    /// Start of the sweep (defaults: r 0.1, θ just inside the wedge, θ₁ 0.25pi).
    #[arg(long, value_parser = parse::angle)]
    from: Option<f64>,
    /// End of the sweep (defaults: r 10, θ just inside the wedge, θ₁ 4pi).
    #[arg(long, value_parser = parse::angle)]
    to: Option<f64>,
    #[arg(long, default_value_t = 200)]
    points: usize,
    /// Default: log for r, linear otherwise.
    #[arg(long, value_enum)]
    spacing: Option<Spacing>,
    #[arg(long, value_parser = parse::real, default_value = "1")]
    r: f64,
    /// Fixed angle (default 0, or mid-wedge).
    #[arg(long, value_parser = parse::angle)]
    theta: Option<f64>,
    #[arg(long, value_parser = parse::real, default_value = "0")]
    z: f64,
    #[command(flatten)]
    coupling: CouplingArgs,
    /// Report stress(β=1) - stress(β=0) instead of the stress.
    #[arg(long)]
    beta_correction: bool,
    /// Comma-separated cutoffs; `0` extrapolates to t -> 0.
    #[arg(long, default_value = "1")]
    cutoff: String,
    /// Comma-separated subset of T00,Trr,Tperp,Tzz.
    #[arg(long, default_value = "T00,Trr,Tperp,Tzz")]
    components: String,
    /// Renormalization at finite cutoff.
    #[arg(long, value_enum, default_value = "kernel")]
    renorm: Renorm,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct FigureArgs {
    /// One of: fig1 fig1b fig2mis fig2ext fig2b fig3 fig3b fig4 coneang1 coneang2 fig5 fig5b fig6 fig6b fig7 fig7b
    id: String,
    #[arg(long, default_value = "figures")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only these oracles (repeatable or comma-separated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also write the reports as JSON.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

/// A user mistake, reported with exit status 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<Usage>() {
            return 2;
        }
        if let Some(core) = cause.downcast_ref::<conevac_core::Error>() {
            return match core {
                conevac_core::Error::Domain(_) | conevac_core::Error::Singular(_) => 2,
                _ => 1,
            };
        }
    }
    1
}

fn main() -> ExitCode {
    let args = match config::merge_args(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Eval(a) => eval(a),
        Command::Scan(a) => with_workers(a.workers, || scan_cmd(&a)),
        Command::Figure(a) => with_workers(a.workers, || figure_cmd(&a)),
        Command::Verify(a) => with_workers(a.workers, || verify_cmd(&a)),
    }
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if workers == Some(0) {
        return Err(usage("--workers must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .context("starting the worker pool")?;
    pool.install(f)
}

#[derive(Serialize)]
struct EvalReport {
    geometry: Geometry,
    t: f64,
    r: f64,
    r_prime: f64,
    theta: f64,
    theta_prime: f64,
    z: f64,
    z_prime: f64,
    beta: f64,
    xi: f64,
    kernel: Option<f64>,
    kernel_renormalized: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stress: Option<EvalStress>,
}

#[derive(Serialize)]
struct EvalStress {
    renorm: RenormMode,
    /// `"t->0"` or the split value.
    cutoff: String,
    t00: f64,
    t_rr: f64,
    t_perp: f64,
    t_zz: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_estimate: Option<[f64; 4]>,
}

fn eval(a: EvalArgs) -> Result<ExitCode> {
    let geometry = a.geometry.geometry()?;
    let coupling = a.coupling.coupling();
    let theta = match (a.theta, geometry) {
        (Some(th), _) => th,
        (None, Geometry::Wedge { theta0, .. }) => theta0 / 2.0,
        (None, _) => 0.0,
    };
    let r_prime = a.rprime.unwrap_or(a.r);
    let theta_prime = a.thetaprime.unwrap_or(theta);
    let z_prime = a.zprime.unwrap_or(a.z);
    let split = (r_prime, theta_prime, z_prime) != (a.r, theta, a.z);
    if split && !a.kernel_only {
        return Err(usage(
            "--rprime/--thetaprime/--zprime only apply to the kernel; add --kernel-only",
        ));
    }
    let t = match a.t {
        Cutoff::At(t) => t,
        Cutoff::Zero => 0.0,
    };
    let pair = PointPair::new(t, a.r, r_prime, theta, theta_prime, a.z, z_prime)?;
    geometry.check_angle(theta)?;
    geometry.check_angle(theta_prime)?;

    let full = tbar(&geometry, &pair, KernelForm::Full);
    let renormalized = tbar(&geometry, &pair, KernelForm::Renormalized);
    if a.kernel_only {
        if let (Err(e), Err(_)) = (&full, &renormalized) {
            return Err(e.clone().into());
        }
    }

    let stress = if a.kernel_only {
        None
    } else {
        let point = FieldPoint::new(a.r, theta, a.z)?;
        Some(match a.t {
            Cutoff::At(t) => {
                let s = stress_at(&geometry, &point, coupling, t, a.renorm.into())?;
                EvalStress {
                    renorm: s.renorm_mode,
                    cutoff: a.t.label(),
                    t00: s.t00,
                    t_rr: s.t_rr,
                    t_perp: s.t_perp,
                    t_zz: s.t_zz,
                    error_estimate: None,
                }
            }
            Cutoff::Zero => {
                if !matches!(a.renorm, Renorm::Kernel) {
                    return Err(usage("the t -> 0 limit exists only for --renorm kernel"));
                }
                let e = stress_t0(&geometry, &point, coupling, &Ladder::default())?;
                EvalStress {
                    renorm: e.stress.renorm_mode,
                    cutoff: a.t.label(),
                    t00: e.stress.t00,
                    t_rr: e.stress.t_rr,
                    t_perp: e.stress.t_perp,
                    t_zz: e.stress.t_zz,
                    error_estimate: Some(e.error),
                }
            }
        })
    };

    let report = EvalReport {
        geometry,
        t,
        r: a.r,
        r_prime,
        theta,
        theta_prime,
        z: a.z,
        z_prime,
        beta: coupling.beta,
        xi: coupling.xi(),
        kernel: full.as_ref().ok().copied(),
        kernel_renormalized: renormalized.as_ref().ok().copied(),
        stress,
    };
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(ExitCode::SUCCESS);
    }
    println!("geometry  {}", geometry.label());
    println!(
        "point     t={} r={} r'={} theta={} theta'={} z={} z'={}",
        t, a.r, r_prime, theta, theta_prime, a.z, z_prime
    );
    let show = |k: &conevac_core::Result<f64>| match k {
        Ok(v) => format!("{v:?}"),
        Err(e) => format!("undefined ({e})"),
    };
    println!("kernel    {}", show(&full));
    println!("kernel (flat subtracted)  {}", show(&renormalized));
    if let Some(s) = &report.stress {
        println!("coupling  beta={} xi={}", coupling.beta, coupling.xi());
        println!("renorm    {:?}, cutoff {}", s.renorm, s.cutoff);
        let values = [s.t00, s.t_rr, s.t_perp, s.t_zz];
        for (i, name) in COMPONENT_NAMES.iter().enumerate() {
            match s.error_estimate {
                Some(err) => println!("{name:<6} {:?}  (+- {:.1e})", values[i], err[i]),
                None => println!("{name:<6} {:?}", values[i]),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_list<T>(text: &str, flag: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| f(s.trim()).map_err(|e| usage(format!("--{flag}: {e}"))))
        .collect()
}

fn component_index(name: &str) -> Result<usize, String> {
    COMPONENT_NAMES
        .iter()
        .position(|c| c.eq_ignore_ascii_case(name))
        .ok_or_else(|| format!("unknown component `{name}`; use {}", COMPONENT_NAMES.join(",")))
}

fn scan_cmd(a: &ScanArgs) -> Result<ExitCode> {
    let geometry = match a.sweep {
        // the angle is the swept quantity; any positive placeholder validates
        SweepVar::Theta1 if matches!(a.geometry.geometry, GeometryKind::Cone) && a.geometry.theta1.is_none() => {
            Geometry::Cone { theta1: std::f64::consts::TAU }
        }
        _ => a.geometry.geometry()?,
    };
    let wedge = match geometry {
        Geometry::Wedge { theta0, .. } => Some(theta0),
        _ => None,
    };
    let (from, to) = match a.sweep {
        SweepVar::R => (0.1, 10.0),
        SweepVar::Theta1 => (0.25 * std::f64::consts::PI, 4.0 * std::f64::consts::PI),
        SweepVar::Theta => match wedge {
            Some(t0) => (t0 / 500.0, t0 * (1.0 - 1.0 / 500.0)),
            None => (0.0, std::f64::consts::TAU),
        },
    };
    let spec = ScanSpec {
        geometry,
        sweep: a.sweep,
        from: a.from.unwrap_or(from),
        to: a.to.unwrap_or(to),
        points: a.points,
        spacing: a.spacing.unwrap_or(if a.sweep == SweepVar::R { Spacing::Log } else { Spacing::Linear }),
        r: a.r,
        theta: a.theta.unwrap_or(wedge.map_or(0.0, |t0| t0 / 2.0)),
        z: a.z,
        beta: a.coupling.coupling().beta,
        quantity: if a.beta_correction { Quantity::BetaCorrection } else { Quantity::Stress },
        cutoffs: parse_list(&a.cutoff, "cutoff", parse::cutoff)?,
        renorm: a.renorm.into(),
        components: parse_list(&a.components, "components", component_index)?,
    };
    if spec.cutoffs.contains(&Cutoff::Zero) && spec.renorm != RenormMode::KernelSubtraction {
        return Err(usage("the t -> 0 limit exists only for --renorm kernel"));
    }
    spec.validate().map_err(|e| usage(format!("{e:#}")))?;
    let table = scan::run(&spec)?;
    report_warnings(&table.warnings);
    scan::write(&spec, &table, &a.out)?;
    eprintln!("wrote {} rows to {}", table.rows.len(), a.out.display());
    Ok(ExitCode::SUCCESS)
}

fn report_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn figure_cmd(a: &FigureArgs) -> Result<ExitCode> {
    let curves = figures::curves(&a.id, a.points).map_err(|e| usage(e.to_string()))?;
    let dir = a.out_dir.join(&a.id);
    for c in &curves {
        let table = scan::run(&c.spec).with_context(|| format!("{}/{}", a.id, c.name))?;
        report_warnings(&table.warnings);
        let path = dir.join(format!("{}.csv", c.name));
        scan::write(&c.spec, &table, &path)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(a: &VerifyArgs) -> Result<ExitCode> {
    for name in &a.only {
        if conevac_core::oracles::resolve_oracle(name).is_none() {
            return Err(usage(format!(
                "unknown oracle `{name}`; known: {}",
                conevac_core::ORACLE_NAMES.join(", ")
            )));
        }
    }
    let reports = run_oracle_suite(&a.only, a.seed);
    for r in &reports {
        println!("{}", r.line());
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("{} oracles, {} failed (seed {})", reports.len(), failed, a.seed);
    if let Some(path) = &a.json {
        #[derive(Serialize)]
        struct Out<'a> {
            seed: u64,
            passed: bool,
            reports: &'a [conevac_core::OracleReport],
        }
        let mut text = serde_json::to_string_pretty(&Out {
            seed: a.seed,
            passed: failed == 0,
            reports: &reports,
        })?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
