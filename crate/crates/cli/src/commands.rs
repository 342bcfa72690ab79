use std::fmt::Write as _;
use std::time::Instant;

use serde_json::json;
use sierpinski_walks::dynamics::{
    alpha_bound, average_return_classical, average_return_quantum, ctqw_transition,
    ctrw_transition, dominant_eigenvalue_approx, exact_return_cosine, TimeGrid, TimeSeries,
};
use sierpinski_walks::graph::generate;
use sierpinski_walks::recurrence::{BootstrapConfig, RecurrenceVerdict};
use sierpinski_walks::spectral::{
    chi_lb, counting_function, default_tolerance, degeneracies, SpectralDecomposition,
};
use sierpinski_walks::trapping::{
    classical_trap_spectrum, complex_spectrum, complex_spectrum_with_modes, dark_state_count, effective_hamiltonian,
    survival_classical_from, survival_quantum, TrapConfig, TrapReport, TrapScheme,
    DEFAULT_RELATIVE_THRESHOLD,
};
use sierpinski_walks::{Error, Network};

use crate::cache::SpectrumCache;
use crate::manifest::{Artifacts, Manifest};
use crate::spec::{
    Command, CountingArgs, DynamicsArgs, ExperimentSpec, GridArgs, GridKind, NetworkArgs,
    ObservableArg, RecurrenceArgs, SchemeArg, SpectrumArgs, TablesArgs, TrapArgs,
};
use crate::tables;
use crate::CliError;

struct Context<'a> {
    spec: &'a ExperimentSpec,
    cache: SpectrumCache,
    artifacts: Artifacts,
}

impl Context<'_> {
    fn spectrum(&self, network: &Network, vectors: bool) -> Result<SpectralDecomposition, Error> {
        let lap = network.laplacian();
        Ok(self.cache.spectrum(network, &lap, vectors)?.0)
    }
}

/// Executes `spec`, writes its artifacts and manifest, and returns the
/// summary printed on stdout.
pub fn execute(spec: &ExperimentSpec) -> Result<(serde_json::Value, Manifest), CliError> {
    if let Command::Run(run) = &spec.command {
        let text = std::fs::read_to_string(&run.spec)?;
        let replay: ExperimentSpec = serde_json::from_str(&text).map_err(Error::from)?;
        if matches!(replay.command, Command::Run(_)) {
            return Err(CliError::Usage("a replayed spec cannot itself be `run`".into()));
        }
        return execute(&replay);
    }
    let started = Instant::now();
    let mut ctx = Context {
        spec,
        cache: SpectrumCache::configure(spec.common.cache_dir.as_deref(), spec.common.no_cache),
        artifacts: Artifacts::new(&spec.common.out)?,
    };
    let summary = match &spec.command {
        Command::Generate(args) => generate_cmd(&mut ctx, args)?,
        Command::Spectrum(args) => spectrum_cmd(&mut ctx, args)?,
        Command::Dynamics(args) => dynamics_cmd(&mut ctx, args)?,
        Command::Trap(args) => trap_cmd(&mut ctx, args)?,
        Command::Recurrence(args) => recurrence_cmd(&mut ctx, args)?,
        Command::Counting(args) => counting_cmd(&mut ctx, args)?,
        Command::ReportTables(args) => tables_cmd(&mut ctx, args)?,
        Command::Run(_) => unreachable!("handled above"),
    };
    let spec_json = serde_json::to_string_pretty(spec).map_err(Error::from)?;
    ctx.artifacts.write("spec.json", spec_json)?;
    let manifest = ctx
        .artifacts
        .finish(spec, started.elapsed().as_secs_f64())?;
    Ok((summary, manifest))
}

fn load_network(args: &NetworkArgs) -> Result<Network, CliError> {
    match (&args.graph, args.kind, args.generation) {
        (Some(path), _, _) => Ok(Network::load(path)?),
        (None, Some(kind), Some(g)) => Ok(generate(kind, g)?),
        _ => Err(CliError::Usage("either --graph or both --kind and --g are required".into())),
    }
}

fn identity(network: &Network) -> serde_json::Value {
    json!({
        "kind": network.kind(),
        "g": network.generation(),
        "N": network.node_count(),
        "laplacian_hash": network.laplacian().content_hash(),
    })
}

/// Grid from the flags, falling back to per-scheme defaults.
fn build_grid(args: &GridArgs, seed: u64, default_points: Option<usize>) -> Result<TimeGrid, Error> {
    match args.grid {
        GridKind::Lin => TimeGrid::linear(
            args.tmin.unwrap_or(0.0),
            args.tmax.unwrap_or(200.0),
            args.npoints.or(default_points).unwrap_or(4000),
        ),
        GridKind::Log => TimeGrid::logarithmic(
            args.tmin.unwrap_or(1e-2),
            args.tmax.unwrap_or(1e4),
            args.npoints.or(default_points).unwrap_or(400),
        ),
        GridKind::Poisson => {
            if args.tmin.is_some() || args.tmax.is_some() {
                return Err(Error::InvalidGrid(
                    "Poissonian grids take --rate and --npoints, not a time range".into(),
                ));
            }
            TimeGrid::poissonian(args.rate, args.npoints.or(default_points).unwrap_or(10_000), seed)
        }
    }
}

fn series_sidecar(series: &TimeSeries, network: &Network, seed: u64, extra: serde_json::Value) -> String {
    let value = json!({
        "observable": series.observable,
        "network": identity(network),
        "grid": series.grid.scheme(),
        "points": series.len(),
        "seed": seed,
        "parameters": extra,
    });
    serde_json::to_string_pretty(&value).expect("sidecar serializes")
}

fn generate_cmd(ctx: &mut Context, args: &NetworkArgs) -> Result<serde_json::Value, CliError> {
    let network = load_network(args)?;
    ctx.artifacts.write("graph.json", network.to_json())?;
    Ok(json!({
        "kind": network.kind(),
        "g": network.generation(),
        "n": network.node_count(),
        "edges": network.edge_count(),
    }))
}

fn spectrum_cmd(ctx: &mut Context, args: &SpectrumArgs) -> Result<serde_json::Value, CliError> {
    let network = load_network(&args.network)?;
    let spec = ctx.spectrum(&network, false)?;
    let tol = args
        .tolerance
        .unwrap_or_else(|| default_tolerance(spec.max_eigenvalue()));
    let dos = degeneracies(&spec, tol);
    let mut values = String::from("n,E\n");
    for (i, e) in spec.eigenvalues().iter().enumerate() {
        let _ = writeln!(values, "{i},{e}");
    }
    ctx.artifacts.write("eigenvalues.csv", values)?;
    let mut levels = String::from("E,D,rho\n");
    for l in dos.levels() {
        let _ = writeln!(levels, "{},{},{}", dos.snapped_energy(l), l.degeneracy, l.rho);
    }
    ctx.artifacts.write("levels.csv", levels)?;
    let summary = json!({
        "network": identity(&network),
        "levels": dos.levels().len(),
        "E_max": spec.max_eigenvalue(),
        "tolerance": tol,
        "chi_lb": chi_lb(&dos),
        "most_degenerate": dos.most_degenerate().first(),
    });
    ctx.artifacts
        .write("summary.json", serde_json::to_string_pretty(&summary).map_err(Error::from)?)?;
    Ok(summary)
}

fn dynamics_cmd(ctx: &mut Context, args: &DynamicsArgs) -> Result<serde_json::Value, CliError> {
    let network = load_network(&args.network)?;
    let grid = build_grid(&args.grid, ctx.spec.common.seed, None)?;
    let needs_vectors = matches!(
        args.observable,
        ObservableArg::PKj | ObservableArg::PiKj | ObservableArg::ExactCosine | ObservableArg::PiBar
    );
    let spec = ctx.spectrum(&network, needs_vectors)?;
    let dos = || degeneracies(&spec, default_tolerance(spec.max_eigenvalue()));
    let series = match args.observable {
        ObservableArg::PKj => ctrw_transition(&spec, args.k, args.j, &grid)?,
        ObservableArg::PiKj => ctqw_transition(&spec, args.k, args.j, &grid)?,
        ObservableArg::ExactCosine => exact_return_cosine(&spec, args.k, &grid)?,
        ObservableArg::PBar => average_return_classical(&spec, &grid)?,
        ObservableArg::AlphaBound => alpha_bound(&dos(), &grid)?,
        ObservableArg::PiBar => average_return_quantum(&spec, &grid)?,
        ObservableArg::DominantApprox => {
            let dos = dos();
            let energy = match args.energy {
                Some(e) => e,
                None => dos.most_degenerate()[0].energy,
            };
            dominant_eigenvalue_approx(&dos, energy, &grid)?
        }
    };
    ctx.artifacts.write("series.csv", series.to_csv())?;
    let extra = json!({ "k": args.k, "j": args.j, "energy": args.energy });
    ctx.artifacts
        .write("series.json", series_sidecar(&series, &network, ctx.spec.common.seed, extra))?;
    Ok(json!({
        "observable": series.observable,
        "points": series.len(),
        "first": series.values.first(),
        "last": series.values.last(),
        "time_average": series.time_average(),
    }))
}

fn trap_config(network: &Network, args: &TrapArgs) -> Result<TrapConfig, Error> {
    let scheme = match args.scheme {
        SchemeArg::Outer => TrapScheme::OuterCorners,
        SchemeArg::Inner => TrapScheme::InnerHoleCorners,
        SchemeArg::Explicit => TrapScheme::Explicit(args.traps.clone()),
    };
    if !matches!(scheme, TrapScheme::Explicit(_)) && !args.traps.is_empty() {
        return Err(Error::InvalidParameter("--traps needs --scheme explicit".into()));
    }
    TrapConfig::resolve(network, scheme, args.gamma)
}

fn trap_cmd(ctx: &mut Context, args: &TrapArgs) -> Result<serde_json::Value, CliError> {
    let network = load_network(&args.network)?;
    let config = trap_config(&network, args)?;
    let lap = network.laplacian();
    let h = effective_hamiltonian(&lap, &config)?;
    let threshold = args.threshold.unwrap_or(DEFAULT_RELATIVE_THRESHOLD);
    let spectrum = if args.survival {
        complex_spectrum_with_modes(&h, threshold)?
    } else {
        complex_spectrum(&h, threshold)?
    };
    if !spectrum.is_stable() {
        eprintln!(
            "warning: zero-rate count {} changes within one decade of the threshold ({} / {})",
            spectrum.n0(),
            spectrum.sensitivity().lo,
            spectrum.sensitivity().hi
        );
    }
    let exact = if args.exact {
        Some(dark_state_count(&lap, &config)?)
    } else {
        None
    };
    ctx.artifacts.write("complex_spectrum.csv", spectrum.to_csv())?;
    if args.survival {
        let grid = build_grid(&args.grid, ctx.spec.common.seed, None)?;
        let quantum = survival_quantum(&spectrum, &grid)?;
        ctx.artifacts.write("survival_q.csv", quantum.to_csv())?;
        let classical = survival_classical_from(&classical_trap_spectrum(&lap, &config)?, &grid)?;
        ctx.artifacts.write("survival_cl.csv", classical.to_csv())?;
    }
    let report = TrapReport::new(&config, &spectrum, exact);
    ctx.artifacts.write("trap_report.json", report.to_json()?)?;
    Ok(serde_json::to_value(&report).map_err(Error::from)?)
}

fn recurrence_cmd(ctx: &mut Context, args: &RecurrenceArgs) -> Result<serde_json::Value, CliError> {
    let network = load_network(&args.network)?;
    // dense enough to resolve oscillations near t = 1000
    let mut grid_args = args.grid.clone();
    if grid_args.grid == GridKind::Log {
        grid_args.tmin.get_or_insert(1e-1);
        grid_args.tmax.get_or_insert(1e3);
    }
    let grid = build_grid(&grid_args, ctx.spec.common.seed, Some(20_000))?;
    let spec = ctx.spectrum(&network, true)?;
    let series = ctqw_transition(&spec, args.node, args.node, &grid)?;
    ctx.artifacts.write("return_probability.csv", series.to_csv())?;
    let config = BootstrapConfig {
        resamples: args.resamples,
        seed: ctx.spec.common.seed,
        ..BootstrapConfig::default()
    };
    let verdict = RecurrenceVerdict::assess(&series, config)?;
    ctx.artifacts.write("verdict.json", verdict.to_json()?)?;
    Ok(serde_json::to_value(&verdict).map_err(Error::from)?)
}

fn counting_cmd(ctx: &mut Context, args: &CountingArgs) -> Result<serde_json::Value, CliError> {
    let network = load_network(&args.network)?;
    if args.npoints < 2 {
        return Err(Error::InvalidParameter("--npoints must be at least 2".into()).into());
    }
    let spec = ctx.spectrum(&network, false)?;
    let xs: Vec<f64> = (0..args.npoints)
        .map(|i| i as f64 / (args.npoints - 1) as f64)
        .collect();
    let curve = counting_function(&spec, &xs);
    let mut csv = String::from("x,N\n");
    for (x, y) in xs.iter().zip(&curve) {
        let _ = writeln!(csv, "{x},{y}");
    }
    ctx.artifacts.write("counting.csv", csv)?;
    Ok(json!({ "network": identity(&network), "points": xs.len() }))
}

fn tables_cmd(ctx: &mut Context, args: &TablesArgs) -> Result<serde_json::Value, CliError> {
    let ids: Vec<&str> = match &args.table {
        Some(id) => vec![id.as_str()],
        None => tables::TABLE_IDS.to_vec(),
    };
    let mut summary = Vec::new();
    for id in ids {
        let report = tables::report(id, args.max_g, args.n0_method, &ctx.cache)?;
        ctx.artifacts
            .write(&format!("table_{}.csv", report.id), &report.csv)?;
        summary.push(json!({
            "table": report.id,
            "matched": report.matched,
            "mismatched": report.mismatched,
            "skipped": report.skipped,
        }));
    }
    Ok(serde_json::Value::Array(summary))
}
