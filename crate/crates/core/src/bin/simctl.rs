//! Experiment driver: runs spec files and built-in sweep presets, and
//! prints the closed-form bound and signaling ledgers.
//!
//! Data goes to files (paths printed on stdout), progress and errors to
//! stderr. Exit code 0 only if everything asked for was produced.

use aoisim::analytics::{self, BoundInputs};
use aoisim::experiment::{self, fmt_float, ExperimentSpec};
use aoisim::signaling::{self, SymbolBudget};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "simctl",
    version,
    about = "Slotted-time AoI simulator for two-hop relay networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Output directory for the CSV tables
    /// [default: $SIMCTL_OUT_DIR, then ./results]
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Override the spec's base seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the spec's horizon, in slots
    #[arg(long)]
    horizon: Option<u64>,
    /// Override the spec's replication count
    #[arg(long)]
    replications: Option<u32>,
    /// Worker threads for the sweep [default: all cores]
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long, default_value_t = 30)]
    n_eds: u32,
    #[arg(long, default_value_t = 2)]
    n_channels: u32,
    #[arg(long, default_value_t = 5)]
    n_relays: u32,
    /// Phase-1 erasure rate
    #[arg(long, default_value_t = 0.1)]
    erasure_p1: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment spec from a TOML file
    Run {
        /// Path to the spec file
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a built-in sweep preset
    Preset {
        /// One of: f3 f4 f5 f6 f7 f8 f9 f10 hetnet
        name: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the closed-form references at one parameter point
    Bound {
        #[command(flatten)]
        point: PointArgs,
        /// Evaluate at this activation probability as well as the optimum
        #[arg(long)]
        activation_prob: Option<f64>,
    },
    /// Print the per-policy signaling ledger for a symbol budget
    Signaling {
        #[arg(long, default_value_t = 30)]
        n_eds: u32,
        #[arg(long, default_value_t = 5)]
        n_relays: u32,
        /// Slot length in symbols
        #[arg(long, default_value_t = SymbolBudget::default().t_total)]
        t_total: u64,
        /// Pilot length in symbols
        #[arg(long, default_value_t = SymbolBudget::default().t_pilot)]
        t_pilot: u64,
        /// Packet ID length in symbols
        #[arg(long, default_value_t = SymbolBudget::default().t_id)]
        t_id: u64,
        /// Relay ID length in symbols
        #[arg(long, default_value_t = SymbolBudget::default().t_relay_id)]
        t_relay_id: u64,
        /// RTS length in symbols
        #[arg(long, default_value_t = SymbolBudget::default().t_rts)]
        t_rts: u64,
        /// Buffer depth assumed for the buffered rows
        #[arg(long, default_value_t = SymbolBudget::default().buffer_size)]
        buffer_size: u64,
    },
}

fn main() -> ExitCode {
    // Die quietly when stdout is a closed pipe (`simctl signaling | head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { spec, run } => run_spec_file(&spec, &run),
        Command::Preset { name, run } => {
            experiment::figure_preset(&name)
                .map_err(|e| Box::new(e) as Box<dyn std::error::Error>)
                .and_then(|spec| execute(spec, &run))
        }
        Command::Bound {
            point,
            activation_prob,
        } => print_bound(&point, activation_prob),
        Command::Signaling {
            n_eds,
            n_relays,
            t_total,
            t_pilot,
            t_id,
            t_relay_id,
            t_rts,
            buffer_size,
        } => print_signaling(
            n_eds,
            n_relays,
            SymbolBudget {
                t_total,
                t_pilot,
                t_id,
                t_relay_id,
                t_rts,
                buffer_size,
            },
        ),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = err.source();
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            ExitCode::FAILURE
        }
    }
}

fn run_spec_file(path: &PathBuf, run: &RunArgs) -> Result<(), Box<dyn std::error::Error>> {
    let spec = ExperimentSpec::load(path)?;
    execute(spec, run)
}

fn execute(mut spec: ExperimentSpec, run: &RunArgs) -> Result<(), Box<dyn std::error::Error>> {
    if let Some(seed) = run.seed {
        spec.config.seed = seed;
    }
    if let Some(horizon) = run.horizon {
        spec.config.horizon_slots = horizon;
    }
    if let Some(replications) = run.replications {
        spec.replications = replications;
    }
    if let Some(threads) = run.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    let dir = run
        .out_dir
        .clone()
        .or_else(|| spec.out_dir.clone())
        .or_else(|| std::env::var_os("SIMCTL_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"));
    let started = std::time::Instant::now();
    let result = experiment::run(&spec)?;
    let written = result.write_all(&dir)?;
    log::info!(
        "{}: {} rows in {:.1?}",
        spec.name,
        result.rows.len(),
        started.elapsed()
    );
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn print_bound(
    point: &PointArgs,
    activation_prob: Option<f64>,
) -> Result<(), Box<dyn std::error::Error>> {
    let p_star = analytics::optimize_activation(
        point.n_eds,
        point.n_channels,
        point.n_relays,
        point.erasure_p1,
    )?;
    let p = activation_prob.unwrap_or(p_star);
    let bound = analytics::aoi_bound(&BoundInputs {
        n_eds: point.n_eds,
        activation_prob: p,
        n_channels: point.n_channels,
        n_relays: point.n_relays,
        erasure_p1: point.erasure_p1,
    });
    println!("n_eds               {}", point.n_eds);
    println!("n_channels          {}", point.n_channels);
    println!("n_relays            {}", point.n_relays);
    println!("erasure_p1          {}", fmt_float(point.erasure_p1));
    println!("optimal_activation  {}", fmt_float(p_star));
    println!("activation_prob     {}", fmt_float(p));
    println!("success_prob        {}", fmt_float(bound.success_prob));
    println!("delivery_rate       {}", fmt_float(bound.delivery_rate));
    println!("p_ratio             {}", fmt_float(bound.p_ratio()));
    println!("aaoi                {}", fmt_float(bound.aaoi));
    println!("paoi                {}", fmt_float(bound.paoi));
    Ok(())
}

fn print_signaling(
    n_eds: u32,
    n_relays: u32,
    budget: SymbolBudget,
) -> Result<(), Box<dyn std::error::Error>> {
    budget.validate_for(n_eds, n_relays)?;
    println!(
        "symbol budget: T={} T_p={} T_i={} T_k={} T_r={} B={} (N={}, K={})",
        budget.t_total,
        budget.t_pilot,
        budget.t_id,
        budget.t_relay_id,
        budget.t_rts,
        budget.buffer_size,
        n_eds,
        n_relays
    );
    println!();
    println!(
        "{:<18} {:>6} {:>10} {:>6} {:>5} {:>5} {:>8} {:>12}",
        "scheme", "pilot", "packet_id", "grant", "rts", "cts", "payload", "acknowledge"
    );
    for row in signaling::ledger(&budget, n_relays) {
        println!(
            "{:<18} {:>6} {:>10} {:>6} {:>5} {:>5} {:>8} {:>12}",
            row.scheme,
            row.pilot,
            row.packet_id,
            row.grant,
            row.rts,
            row.cts,
            row.payload,
            row.acknowledge
        );
    }
    println!();
    for kind in aoisim::sched::ALL_SCHEDULERS {
        println!(
            "overhead {:<14} {:>4} symbols, payload {:>4}",
            kind.to_string(),
            signaling::overhead_symbols(kind, &budget, n_relays),
            signaling::payload_symbols(kind, &budget, n_relays)
        );
    }
    println!();
    println!(
        "max_rts_budget memoryless {}",
        signaling::max_rts_budget(&budget, n_relays, false)
    );
    println!(
        "max_rts_budget buffered   {}",
        signaling::max_rts_budget(&budget, n_relays, true)
    );
    Ok(())
}
