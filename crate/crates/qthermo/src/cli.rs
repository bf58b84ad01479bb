//! Command-line front end.
//!
//! Console output uses 6 significant digits; CSV carries full double
//! precision. Flags take laboratory units (cm^2, ms, nm, g) and are
//! converted to SI at the boundary; `--explain-units` prints the table.
//! Exit codes: 0 success, 1 runtime/numeric failure, 2 usage/validation.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::channel::ChannelParams;
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::fock;
use crate::gaussian::{make_gaussian_state, InputStateParams};
use crate::material::{omega_from_wavelength, Material};
use crate::metrology::{cramer_rao, qfi_phase, qfi_temperature, AsymptoticKind};
use crate::optimize::{
    analytic_energy_optimum, optimize_nbar, optimize_state_at_nbar, sweep_nbar, ProbeContext,
};
use crate::pyrometer::{pyrometer_precision, pyrometer_precision_fisher, PyrometerConfig};

/// Environment variable naming a directory with a `constants.cfg` override
/// (testing only; production uses the built-in CODATA values).
pub const CONSTANTS_DIR_ENV: &str = "QTHERMO_CONSTANTS_DIR";

#[derive(Parser)]
#[command(
    name = "qthermo",
    version,
    about = "Precision bounds for optical interferometric thermometry of transparent solids"
)]
struct Cli {
    /// Print the unit conversion table and exit.
    #[arg(long, global = true)]
    explain_units: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Resolution of an ideal blackbody pyrometer.
    Pyrometer(PyrometerArgs),
    /// Sweep precision bounds over probe energy; emits CSV.
    Sweep(SweepArgs),
    /// Optimal probe energy and state for a material.
    Optimize(OptimizeArgs),
    /// Cross-check the Gaussian QFI against the Fock-basis route.
    OracleCheck(OracleArgs),
    /// Single-point QFI evaluation for a state and channel.
    Qfi(QfiArgs),
}

#[derive(Args)]
struct PyrometerArgs {
    /// Sample temperature, K.
    #[arg(long = "T", allow_negative_numbers = true)]
    temperature: f64,
    /// Detector area, cm^2.
    #[arg(long)]
    area_cm2: f64,
    /// Integration time, ms.
    #[arg(long)]
    dt_ms: f64,
}

/// Probe/material selection shared by the interferometric subcommands.
#[derive(Args)]
struct ProbeArgs {
    /// Built-in material name or path to a key=value config file.
    #[arg(long, default_value = "ppktp")]
    material: String,
    /// Probe wavelength, nm.
    #[arg(long, default_value_t = 1064.0)]
    wavelength_nm: f64,
    /// Sample temperature, K (sets the reservoir occupation).
    #[arg(long = "T", default_value_t = 298.0, allow_negative_numbers = true)]
    temperature: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    probe: ProbeArgs,
    /// Lowest mean photon number.
    #[arg(long, default_value_t = 1e8)]
    nbar_min: f64,
    /// Highest mean photon number.
    #[arg(long, default_value_t = 1e16)]
    nbar_max: f64,
    /// Number of log-spaced grid points.
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// Base seed for the optimizer restarts (row i uses seed + i).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the sweep (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Comma-separated column selection: exact,squeezed,coherent,pyrometer.
    #[arg(long, default_value = "exact,squeezed,coherent,pyrometer")]
    kinds: String,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Pyrometer reference detector area, cm^2.
    #[arg(long, default_value_t = 1.0)]
    area_cm2: f64,
    /// Pyrometer reference integration time, ms.
    #[arg(long, default_value_t = 10.0)]
    dt_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OptimizeKind {
    /// Closed-form optimum of the large-energy squeezed-probe bound.
    Squeezed,
    /// Closed-form optimum of the large-energy coherent-probe bound.
    Coherent,
    /// Numerical optimum over all Gaussian probes.
    Exact,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    probe: ProbeArgs,
    #[arg(long, value_enum, default_value_t = OptimizeKind::Squeezed)]
    kind: OptimizeKind,
    /// Fixed energy: optimize the state only (exact kind).
    #[arg(long)]
    nbar: Option<f64>,
    /// Energy search range, lower edge (exact kind without --nbar).
    #[arg(long, default_value_t = 1e10)]
    nbar_min: f64,
    /// Energy search range, upper edge (exact kind without --nbar).
    #[arg(long, default_value_t = 1e16)]
    nbar_max: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    /// Maximum tolerated relative QFI deviation.
    #[arg(long, default_value_t = 1e-3)]
    tolerance: f64,
    /// Trace tail tolerated when truncating states.
    #[arg(long, default_value_t = 1e-10)]
    tail_tol: f64,
    /// Force a truncation dimension instead of the automatic choice.
    #[arg(long)]
    dim: Option<usize>,
    /// Drop grid rows above this mean photon number (quick runs).
    #[arg(long, default_value_t = 4.0)]
    max_nbar: f64,
    /// Deliberately corrupt the covariance update to prove sensitivity.
    #[arg(long, hide = true)]
    inject_sigma_bug: bool,
}

#[derive(Args)]
struct QfiArgs {
    /// Mean x quadrature of the input state.
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    /// Mean p quadrature of the input state.
    #[arg(long, default_value_t = 0.0)]
    p0: f64,
    /// Thermal occupation of the input state.
    #[arg(long, default_value_t = 0.0)]
    n0: f64,
    /// Squeezing parameter of the input state.
    #[arg(long, default_value_t = 0.0)]
    r0: f64,
    /// Channel phase, rad.
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Channel transmissivity.
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Reservoir occupation.
    #[arg(long, default_value_t = 0.0)]
    n_res: f64,
    #[command(flatten)]
    probe: ProbeArgs,
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    if cli.explain_units {
        print_units();
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (try --help)");
        return ExitCode::from(2);
    };
    match dispatch(command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidParameter { .. }
                | Error::Parse { .. }
                | Error::Validation(_)
                | Error::Range(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Pyrometer(a) => cmd_pyrometer(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Optimize(a) => cmd_optimize(&a),
        Command::OracleCheck(a) => cmd_oracle_check(&a),
        Command::Qfi(a) => cmd_qfi(&a),
    }
}

fn print_units() {
    println!("unit conversions applied to CLI flags and config files:");
    println!("  cm^2  -> 1e-4 m^2   (--area-cm2)");
    println!("  ms    -> 1e-3 s     (--dt-ms)");
    println!("  nm    -> 1e-9 m     (--wavelength-nm)");
    for (unit, si, factor) in crate::material::UNIT_WHITELIST {
        println!("  {unit:<5} -> {factor:<5e} {si}   (material config)");
    }
    println!("all other quantities are SI: K, kg, J/(kg K), rad/s, 1/m.");
}

/// Hard-coded CODATA values unless the test-only directory override is set.
fn load_constants() -> Result<PhysicalConstants> {
    let Some(dir) = std::env::var_os(CONSTANTS_DIR_ENV) else {
        return Ok(PhysicalConstants::codata());
    };
    let path = Path::new(&dir).join("constants.cfg");
    let text = std::fs::read_to_string(&path)?;
    let (mut hbar, mut k_b, mut c) = (None, None, None);
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                field: line.to_string(),
                reason: "expected `key = value`".into(),
            });
        };
        let v: f64 = value.trim().parse().map_err(|_| Error::Parse {
            field: key.trim().to_string(),
            reason: "not a number".into(),
        })?;
        match key.trim() {
            "hbar" => hbar = Some(v),
            "k_b" => k_b = Some(v),
            "c" => c = Some(v),
            other => {
                return Err(Error::Parse {
                    field: other.to_string(),
                    reason: "unknown constant".into(),
                })
            }
        }
    }
    match (hbar, k_b, c) {
        (Some(h), Some(k), Some(c)) => Ok(PhysicalConstants::from_base(h, k, c)),
        _ => Err(Error::Parse {
            field: "constants.cfg".into(),
            reason: "need hbar, k_b and c".into(),
        }),
    }
}

fn resolve_material(selector: &str) -> Result<Material> {
    if let Some(m) = Material::builtin(selector) {
        return Ok(m);
    }
    let path = Path::new(selector);
    if path.exists() {
        Material::load(path)
    } else {
        Err(Error::Parse {
            field: "material".into(),
            reason: format!("`{selector}` is neither a built-in material nor an existing file"),
        })
    }
}

fn probe_context(probe: &ProbeArgs) -> Result<ProbeContext> {
    let pc = load_constants()?;
    let material = resolve_material(&probe.material)?;
    if !probe.temperature.is_finite() || probe.temperature < 0.0 {
        return Err(Error::Validation(format!(
            "sample temperature {} K must be >= 0",
            probe.temperature
        )));
    }
    let omega = omega_from_wavelength(&pc, probe.wavelength_nm * 1e-9)?;
    ProbeContext::new(pc, material, omega, 1.0)?.with_sample_temperature(probe.temperature)
}

// -- pyrometer --

fn cmd_pyrometer(args: &PyrometerArgs) -> Result<ExitCode> {
    let pc = load_constants()?;
    let cfg = PyrometerConfig::new(
        args.area_cm2 * 1e-4,
        args.dt_ms * 1e-3,
        args.temperature,
    )?;
    let dt = pyrometer_precision(&pc, &cfg)?;
    let dt_fisher = pyrometer_precision_fisher(&pc, &cfg)?;
    let delta = (dt - dt_fisher).abs() / dt;
    println!("pyrometer bound: {dt:.5e} K");
    println!("quadrature cross-check: fisher route {dt_fisher:.5e} K, relative delta {delta:.5e}");
    Ok(ExitCode::SUCCESS)
}

// -- sweep --

#[derive(Clone, Copy, PartialEq, Eq)]
enum SweepColumn {
    Exact,
    Squeezed,
    Coherent,
    Pyrometer,
}

fn parse_kinds(selector: &str) -> Result<Vec<SweepColumn>> {
    let mut kinds = Vec::new();
    for raw in selector.split(',') {
        let k = raw.trim();
        if k.is_empty() {
            continue;
        }
        kinds.push(match k {
            "exact" => SweepColumn::Exact,
            "squeezed" => SweepColumn::Squeezed,
            "coherent" => SweepColumn::Coherent,
            "pyrometer" => SweepColumn::Pyrometer,
            other => {
                return Err(Error::Validation(format!(
                    "unknown kind `{other}`; choose from exact, squeezed, coherent, pyrometer"
                )))
            }
        });
    }
    if kinds.is_empty() {
        return Err(Error::Validation("kinds list is empty".into()));
    }
    Ok(kinds)
}

fn cmd_sweep(args: &SweepArgs) -> Result<ExitCode> {
    let kinds = parse_kinds(&args.kinds)?;
    let ctx = probe_context(&args.probe)?;
    let pyro = PyrometerConfig::new(
        args.area_cm2 * 1e-4,
        args.dt_ms * 1e-3,
        args.probe.temperature,
    )?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| Error::Validation(format!("cannot build worker pool: {e}")))?;
    let rows = pool.install(|| {
        sweep_nbar(
            &ctx,
            (args.nbar_min, args.nbar_max),
            args.points,
            args.seed,
            &pyro,
        )
    })?;

    let mut csv = String::new();
    csv.push_str("nbar");
    for k in &kinds {
        csv.push_str(match k {
            SweepColumn::Exact => ",dt_exact",
            SweepColumn::Squeezed => ",dt_sq_asym",
            SweepColumn::Coherent => ",dt_coh_asym",
            SweepColumn::Pyrometer => ",dt_pyro",
        });
    }
    csv.push('\n');
    for row in &rows {
        csv.push_str(&format!("{:.16e}", row.nbar));
        for k in &kinds {
            let v = match k {
                SweepColumn::Exact => row.dt_exact,
                SweepColumn::Squeezed => row.dt_sq_asym,
                SweepColumn::Coherent => row.dt_coh_asym,
                SweepColumn::Pyrometer => row.dt_pyro,
            };
            csv.push_str(&format!(",{v:.16e}"));
        }
        csv.push('\n');
    }
    match &args.out {
        Some(path) => {
            std::fs::write(path, csv)?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => {
            std::io::stdout().write_all(csv.as_bytes())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

// -- optimize --

fn cmd_optimize(args: &OptimizeArgs) -> Result<ExitCode> {
    let ctx = probe_context(&args.probe)?;
    match args.kind {
        OptimizeKind::Squeezed | OptimizeKind::Coherent => {
            let kind = match args.kind {
                OptimizeKind::Squeezed => AsymptoticKind::Squeezed,
                _ => AsymptoticKind::Coherent,
            };
            let (nbar_star, dt_min) = analytic_energy_optimum(&ctx, kind, ctx.n_res)?;
            let heating = dt_min / 3.0;
            let params = match kind {
                AsymptoticKind::Squeezed => InputStateParams::squeezed_vacuum(nbar_star),
                AsymptoticKind::Coherent => InputStateParams::coherent(nbar_star),
            };
            println!("kind          = {:?}", args.kind);
            println!("nbar_star     = {nbar_star:.5e}");
            println!("delta_t_min   = {dt_min:.5e} K");
            println!("  statistical = {:.5e} K", dt_min - heating);
            println!("  heating     = {heating:.5e} K");
            print_state(&params);
            println!("converged     = true");
        }
        OptimizeKind::Exact => {
            if let Some(nbar) = args.nbar {
                let res = optimize_state_at_nbar(&ctx, nbar, args.seed)?;
                println!("kind          = Exact (fixed nbar)");
                println!("nbar          = {:.5e}", res.nbar);
                println!("qfi_t         = {:.5e} 1/K^2", res.qfi_t);
                println!("delta_t       = {:.5e} K (statistical)", res.delta_t);
                print_state(&res.params);
                println!("evaluations   = {}", res.evaluations);
                println!("converged     = {}", res.converged);
            } else {
                let opt = optimize_nbar(&ctx, (args.nbar_min, args.nbar_max), args.seed)?;
                println!("kind          = Exact");
                println!("nbar_star     = {:.5e}", opt.result.nbar);
                println!("delta_t_min   = {:.5e} K", opt.total);
                println!("  statistical = {:.5e} K", opt.result.delta_t);
                println!("  heating     = {:.5e} K", opt.heating);
                print_state(&opt.result.params);
                println!("evaluations   = {}", opt.result.evaluations);
                println!("converged     = {}", opt.result.converged);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_state(p: &InputStateParams) {
    println!(
        "state         = x0 {:.5e}, p0 {:.5e}, n0 {:.5e}, r0 {:.5e}",
        p.x0, p.p0, p.n0, p.r0
    );
}

// -- oracle-check --

/// Named constructor for one family of probe states on the oracle grid.
type StateMaker = fn(f64) -> InputStateParams;

fn cmd_oracle_check(args: &OracleArgs) -> Result<ExitCode> {
    let kinds: [(&str, StateMaker); 3] = [
        ("coherent", InputStateParams::coherent),
        ("squeezed-vacuum", InputStateParams::squeezed_vacuum),
        ("displaced-thermal", |nbar| {
            InputStateParams::new(nbar.sqrt(), 0.0, nbar / 2.0, 0.0)
                .expect("positive occupancy")
        }),
    ];
    let mut worst: (f64, String) = (0.0, "none".into());
    let mut rows = 0usize;
    for nbar in [0.5, 1.0, 2.0, 4.0] {
        if nbar > args.max_nbar {
            continue;
        }
        for (name, make) in &kinds {
            let params = make(nbar);
            for eta in [1.0, 0.8] {
                for n_res in [0.0, 0.2] {
                    let ch = ChannelParams::new(0.01, eta, n_res)?;
                    let report =
                        fock::compare_channel_qfi(&params, &ch, args.tail_tol, args.dim)?;
                    let qfi_gaussian = if args.inject_sigma_bug {
                        perturbed_gaussian_qfi(&params, &ch)?
                    } else {
                        report.qfi_gaussian
                    };
                    let scale = qfi_gaussian.abs().max(report.qfi_fock.abs()).max(1e-30);
                    let dev = (qfi_gaussian - report.qfi_fock).abs() / scale;
                    rows += 1;
                    let label = format!(
                        "{name} nbar={nbar:.5e} eta={eta:.5e} n_res={n_res:.5e}"
                    );
                    println!(
                        "{label:<60} dim={:<4} q_gauss={qfi_gaussian:.5e} q_fock={:.5e} rel_dev={dev:.5e}",
                        report.dim, report.qfi_fock
                    );
                    if dev > worst.0 {
                        worst = (dev, label);
                    }
                }
            }
        }
    }
    println!("checked {rows} rows; worst relative deviation {:.5e} at {}", worst.0, worst.1);
    if worst.0 > args.tolerance {
        eprintln!(
            "error: deviation {:.5e} exceeds tolerance {:.5e} ({})",
            worst.0, args.tolerance, worst.1
        );
        return Ok(ExitCode::FAILURE);
    }
    println!("all rows within tolerance {:.5e}", args.tolerance);
    Ok(ExitCode::SUCCESS)
}

/// Covariance update with a deliberate 1e-2 error on one matrix element.
fn perturbed_gaussian_qfi(params: &InputStateParams, ch: &ChannelParams) -> Result<f64> {
    let state = make_gaussian_state(params)?;
    let mut out = crate::channel::apply_channel(&state, ch)?;
    out.cov[(0, 0)] *= 1.0 + 1e-2;
    qfi_phase(&out)
}

// -- qfi --

fn cmd_qfi(args: &QfiArgs) -> Result<ExitCode> {
    let params = InputStateParams::new(args.x0, args.p0, args.n0, args.r0)?;
    let ch = ChannelParams::new(args.phi, args.eta, args.n_res)?;
    let state = make_gaussian_state(&params)?;
    let out = crate::channel::apply_channel(&state, &ch)?;
    let q_phi = qfi_phase(&out)?;
    println!("nbar_in = {:.5e}", params.mean_photon_number());
    println!("q_phi   = {q_phi:.5e}");
    let ctx = probe_context(&args.probe)?;
    let alpha = ctx.phase_coupling();
    let q_t = qfi_temperature(q_phi, alpha);
    println!("alpha   = {alpha:.5e} 1/K");
    println!("q_t     = {q_t:.5e} 1/K^2");
    match cramer_rao(q_t, 1.0) {
        Ok(dt) => println!("delta_t = {dt:.5e} K (single shot)"),
        Err(_) => println!("delta_t = inf (no information)"),
    }
    Ok(ExitCode::SUCCESS)
}
