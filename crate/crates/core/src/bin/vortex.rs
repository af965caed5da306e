//! `vortex`: simulate point-vortex systems, locate the two-vortex cusp
//! bifurcation, sweep and classify encounter regimes, verify the analytic
//! suites, and render trajectory plots.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use point_vortex::bifurcation::{
    classify_regime, critical_w, cross_ratio, encounter_trajectory, find_cusp_by_simulation, Method,
};
use point_vortex::error::VortexError;
use point_vortex::integrate::{integrate, IntegratorConfig, Termination, Trajectory};
use point_vortex::io::{
    plot_svg, read_config, read_trajectory_csv, series_svg, write_manifest_json,
    write_trajectory_csv, Marker, PlotOptions, RunManifest,
};
use point_vortex::model::{Domain, Point, VortexState, VortexSystem};
use point_vortex::suite::run_suite;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;

#[derive(Parser)]
#[command(
    name = "vortex",
    version,
    about = "Point-vortex dynamics in the plane and half-plane",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)] // parsed once, immediately consumed
enum Command {
    /// Integrate a vortex system and write CSV/manifest/SVG outputs.
    Simulate(SimulateArgs),
    /// Critical interaction parameter of the two-vortex cusp bifurcation.
    Bifurcate(BifurcateArgs),
    /// Classify encounter regimes over a grid of W values.
    Sweep(SweepArgs),
    /// Run the verification suites; nonzero exit if any check fails.
    Verify(VerifyArgs),
    /// Render a trajectory CSV as a static SVG plot.
    Plot(PlotArgs),
    /// Cross-ratio of four collinear points.
    CrossRatio(CrossRatioArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Flow domain: plane or half-plane.
    #[arg(long, value_parser = parse_domain, required_unless_present = "config")]
    domain: Option<Domain>,
    /// Comma-separated strengths, e.g. 1,-1
    #[arg(long, allow_hyphen_values = true, required_unless_present = "config")]
    gamma: Option<String>,
    /// Comma-separated x:y positions, e.g. 0:0.5,0:1
    #[arg(long, allow_hyphen_values = true, required_unless_present = "config")]
    pos: Option<String>,
    #[arg(long, required_unless_present = "config")]
    t_end: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    max_step: Option<f64>,
    #[arg(long)]
    output_interval: Option<f64>,
    #[arg(long)]
    collision_guard: Option<f64>,
    #[arg(long)]
    event_refine_tol: Option<f64>,
    /// Vortex pairs to watch for vertical alignment, e.g. 0:1,0:2
    #[arg(long)]
    watch: Option<String>,
    /// Replay inputs from a run manifest (conflicts with the flags above).
    #[arg(long, conflicts_with_all = ["domain", "gamma", "pos", "t_end", "rel_tol",
        "abs_tol", "max_step", "output_interval", "collision_guard", "event_refine_tol", "watch"])]
    config: Option<PathBuf>,
    /// Trajectory CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run manifest JSON output path.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Trajectory SVG output path.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct BifurcateArgs {
    /// Strength ratio λ = Γ₂/Γ₁ (±1 for the simulation method).
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    /// algebraic or simulate
    #[arg(long, default_value = "algebraic")]
    method: String,
    /// Height-ratio bracket a,b for the simulation method.
    #[arg(long, allow_hyphen_values = true)]
    bracket: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    /// W grid as start:end:count, e.g. 1.3:2.0:8
    #[arg(long)]
    w_grid: String,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// all, bifurcation, cusp, conservation, scenarios, regimes, grobli, oracle
    #[arg(long, default_value = "all")]
    suite: String,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 900.0)]
    width: f64,
}

#[derive(Args)]
struct CrossRatioArgs {
    #[arg(allow_hyphen_values = true)]
    a: f64,
    #[arg(allow_hyphen_values = true)]
    b: f64,
    #[arg(allow_hyphen_values = true)]
    c: f64,
    #[arg(allow_hyphen_values = true)]
    d: f64,
}

fn parse_domain(s: &str) -> Result<Domain, String> {
    match s {
        "plane" => Ok(Domain::Plane),
        "half-plane" => Ok(Domain::HalfPlane),
        other => Err(format!(
            "unknown domain {other:?} (expected plane or half-plane)"
        )),
    }
}

fn parse_gamma(s: &str) -> Result<Vec<f64>, VortexError> {
    s.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| VortexError::InvalidArgument(format!("bad strength {f:?}")))
        })
        .collect()
}

fn parse_positions(s: &str) -> Result<Vec<Point>, VortexError> {
    s.split(',')
        .map(|pair| {
            let parts: Vec<&str> = pair.trim().split(':').collect();
            if parts.len() != 2 {
                return Err(VortexError::InvalidArgument(format!(
                    "bad position {pair:?}, expected x:y"
                )));
            }
            match (parts[0].parse::<f64>(), parts[1].parse::<f64>()) {
                (Ok(x), Ok(y)) => Ok(Point::new(x, y)),
                _ => Err(VortexError::InvalidArgument(format!(
                    "bad position {pair:?}"
                ))),
            }
        })
        .collect()
}

fn parse_watch(s: &str) -> Result<Vec<(usize, usize)>, VortexError> {
    s.split(',')
        .map(|pair| {
            let parts: Vec<&str> = pair.trim().split(':').collect();
            if parts.len() != 2 {
                return Err(VortexError::InvalidArgument(format!(
                    "bad watch pair {pair:?}, expected i:j"
                )));
            }
            match (parts[0].parse(), parts[1].parse()) {
                (Ok(i), Ok(j)) => Ok((i, j)),
                _ => Err(VortexError::InvalidArgument(format!(
                    "bad watch pair {pair:?}"
                ))),
            }
        })
        .collect()
}

fn exit_code_for(err: &VortexError) -> u8 {
    match err {
        VortexError::IntegrationFailure(_)
        | VortexError::Unresolved(_)
        | VortexError::Diagnostic(_)
        | VortexError::SearchFailure(_, _)
        | VortexError::NoSignChange { .. } => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, VortexError> {
    match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Bifurcate(args) => cmd_bifurcate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Plot(args) => cmd_plot(args),
        Command::CrossRatio(args) => {
            let cr = cross_ratio(args.a, args.b, args.c, args.d)?;
            println!("CR = {cr:.16}");
            Ok(0)
        }
    }
}

fn simulate_inputs(
    args: &SimulateArgs,
) -> Result<(VortexSystem, VortexState, IntegratorConfig), VortexError> {
    if let Some(path) = &args.config {
        return Ok(read_config(path)?.run_inputs());
    }
    let sys = VortexSystem::new(
        parse_gamma(args.gamma.as_ref().expect("required by clap"))?,
        args.domain.expect("required by clap"),
    )?;
    let state = VortexState::new(parse_positions(
        args.pos.as_ref().expect("required by clap"),
    )?);
    let mut cfg = IntegratorConfig::with_t_end(args.t_end.expect("required by clap"));
    if let Some(v) = args.rel_tol {
        cfg.rel_tol = v;
    }
    if let Some(v) = args.abs_tol {
        cfg.abs_tol = v;
    }
    if let Some(v) = args.max_step {
        cfg.max_step = v;
    }
    if let Some(v) = args.output_interval {
        cfg.output_interval = v;
    }
    if let Some(v) = args.collision_guard {
        cfg.collision_guard = v;
    }
    if let Some(v) = args.event_refine_tol {
        cfg.event_refine_tol = v;
    }
    if let Some(w) = &args.watch {
        cfg.watch_pairs = Some(parse_watch(w)?);
    }
    Ok((sys, state, cfg))
}

fn print_run_summary(traj: &Trajectory) {
    println!(
        "terminated by {} at t = {:.6} with {} samples",
        traj.terminated_by,
        traj.final_time(),
        traj.times.len()
    );
    for e in &traj.events {
        println!(
            "event: {} at t = {:.9} (vortices {}, {})",
            e.kind, e.time, e.vortex_indices.0, e.vortex_indices.1
        );
    }
    for (name, drift) in &traj.invariant_drift {
        println!("max |Δ{name}| = {drift:.3e}");
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<u8, VortexError> {
    let (sys, state, cfg) = simulate_inputs(&args)?;
    let command: Vec<String> = std::env::args().collect();
    let started = Instant::now();
    let traj = integrate(&sys, &state, &cfg)?;
    let wall = started.elapsed().as_secs_f64();

    if let Some(path) = &args.out {
        write_trajectory_csv(&traj, path)?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = &args.manifest {
        let manifest = RunManifest::from_run(command.join(" "), &state, &cfg, &traj, wall);
        write_manifest_json(&manifest, path)?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = &args.svg {
        plot_svg(&traj, path, &PlotOptions::default())?;
        println!("wrote {}", path.display());
    }
    if args.out.is_none() && args.manifest.is_none() && args.svg.is_none() {
        print_run_summary(&traj);
    }

    if traj.terminated_by == Termination::TimeEnd {
        Ok(0)
    } else {
        eprintln!("run ended early: {}", traj.terminated_by);
        Ok(EXIT_NUMERICAL)
    }
}

fn cmd_bifurcate(args: BifurcateArgs) -> Result<u8, VortexError> {
    let result = match args.method.as_str() {
        "algebraic" => critical_w(args.lambda)?,
        "simulate" | "simulation" => {
            let bracket = match &args.bracket {
                Some(s) => {
                    let parts: Vec<&str> = s.split(',').collect();
                    let parsed = if parts.len() == 2 {
                        (
                            parts[0].trim().parse::<f64>(),
                            parts[1].trim().parse::<f64>(),
                        )
                    } else {
                        ("x".parse::<f64>(), "x".parse::<f64>())
                    };
                    match parsed {
                        (Ok(a), Ok(b)) => (a, b),
                        _ => {
                            return Err(VortexError::InvalidArgument(format!(
                                "bracket must be a,b with numeric endpoints, got {s:?}"
                            )))
                        }
                    }
                }
                None if args.lambda == -1.0 => (0.1, 0.4),
                None if args.lambda == 1.0 => (3.0, 6.0),
                None => {
                    return Err(VortexError::InvalidArgument(
                        "simulation method needs --bracket for lambda outside ±1".to_string(),
                    ))
                }
            };
            find_cusp_by_simulation(args.lambda, bracket, &IntegratorConfig::default())?
        }
        other => {
            return Err(VortexError::InvalidArgument(format!(
                "unknown method {other:?} (expected algebraic or simulate)"
            )))
        }
    };
    println!("W* = {:.16}", result.critical_w);
    println!("stop height ratio = {:.16}", result.stop_ratio);
    println!("cross-ratio at stop = {:.16}", result.cross_ratio_at_stop);
    if result.method == Method::Simulation {
        println!("residual |xdot1| = {:.3e}", result.residual);
    }
    Ok(0)
}

fn cmd_sweep(args: SweepArgs) -> Result<u8, VortexError> {
    let parts: Vec<&str> = args.w_grid.split(':').collect();
    if parts.len() != 3 {
        return Err(VortexError::InvalidArgument(format!(
            "w-grid must be start:end:count, got {:?}",
            args.w_grid
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| VortexError::InvalidArgument("bad w-grid start".to_string()))?;
    let end: f64 = parts[1]
        .parse()
        .map_err(|_| VortexError::InvalidArgument("bad w-grid end".to_string()))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| VortexError::InvalidArgument("bad w-grid count".to_string()))?;
    if count < 1 {
        return Err(VortexError::InvalidArgument(
            "w-grid count must be ≥ 1".to_string(),
        ));
    }

    let cfg = IntegratorConfig::default();
    let mut rows = vec![
        "lambda,w,regime,alignments,xdot_sign_changes,min_distance,final_distance".to_string(),
    ];
    for k in 0..count {
        let w = if count == 1 {
            start
        } else {
            start + (end - start) * k as f64 / (count - 1) as f64
        };
        let row = match encounter_trajectory(args.lambda, w, &cfg)
            .and_then(|traj| classify_regime(&traj, args.lambda))
        {
            Ok(regime) => format!(
                "{},{:.6},{},{},{},{:.6},{:.6}",
                args.lambda,
                w,
                regime.tag,
                regime.evidence["alignments"],
                regime.evidence["xdot_sign_changes_1"] + regime.evidence["xdot_sign_changes_2"],
                regime.evidence["min_distance"],
                regime.evidence["final_distance"],
            ),
            Err(VortexError::Unresolved(_)) => {
                format!("{},{:.6},unresolved,,,,", args.lambda, w)
            }
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    let doc = rows.join("\n") + "\n";
    match &args.out {
        Some(path) => {
            std::fs::write(path, doc).map_err(|e| VortexError::io(path, e))?;
            println!("wrote {}", path.display());
        }
        None => print!("{doc}"),
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, VortexError> {
    let checks = run_suite(&args.suite)?;
    let mut failures = 0;
    for check in &checks {
        println!("{check}");
        if !check.passed {
            failures += 1;
        }
    }
    println!(
        "{} checks, {} failed ({})",
        checks.len(),
        failures,
        if failures == 0 { "ok" } else { "FAIL" }
    );
    Ok(if failures == 0 { 0 } else { EXIT_NUMERICAL })
}

fn cmd_plot(args: PlotArgs) -> Result<u8, VortexError> {
    let loaded = read_trajectory_csv(&args.input)?;
    let markers: Vec<Marker> = loaded
        .events
        .iter()
        .filter_map(|e| {
            // nearest recorded sample to the event time
            let k = loaded
                .times
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - e.time).abs().total_cmp(&(b.1 - e.time).abs()))?
                .0;
            let pi = *loaded.paths.get(e.i)?.get(k)?;
            let pj = *loaded.paths.get(e.j)?.get(k)?;
            Some(match e.kind.as_str() {
                "instantaneous-stop" => Marker::Diamond(pi),
                "near-collision" => Marker::Cross((pi + pj) * 0.5),
                _ => Marker::Segment(pi, pj),
            })
        })
        .collect();
    let opts = PlotOptions {
        width: args.width,
        ..Default::default()
    };
    let svg = series_svg(&loaded.paths, loaded.is_half_plane(), &markers, &opts)?;
    std::fs::write(&args.out, svg).map_err(|e| VortexError::io(&args.out, e))?;
    println!("wrote {}", args.out.display());
    Ok(0)
}
