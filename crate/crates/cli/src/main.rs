use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdds_cli::config::{EmitFlags, ExperimentConfig, Function};
use qdds_cli::experiment::{run_experiment, ExperimentOutcome};
use qdds_cli::presets::{all_presets, find_preset};
use qdds_cli::validate::run_validation;
use qdds_cli::HarnessError;
use qdds_core::{RebindPolicy, UpdateMode};

const EXIT_USAGE: u8 = 1;
const EXIT_RUNTIME: u8 = 2;
const EXIT_VALIDATE: u8 = 3;

#[derive(Parser)]
#[command(name = "qdds", version, about = "Quantum double delta swarm optimiser")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark function experiment.
    Bench(ExperimentArgs),
    /// Design a lowpass FIR filter.
    Fir(ExperimentArgs),
    /// Run the deterministic oracle suite.
    Validate,
    /// List or run the canonical experiment cells.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    /// Print every preset name with its settings.
    List,
    /// Run the named presets, or all of them with --all.
    Run {
        names: Vec<String>,
        #[arg(long)]
        all: bool,
        /// Parent directory; each preset writes into <out>/<name>.
        #[arg(long, default_value = "out/presets")]
        out: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_parser = parse_emit)]
        emit: Option<EmitFlags>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Literal,
    Sweep,
}

#[derive(Clone, Copy, ValueEnum)]
enum RebindArg {
    Post,
    Pre,
}

/// Overrides applied on top of the config file (or the defaults).
#[derive(Args)]
struct ExperimentArgs {
    /// JSON file mirroring the experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_function)]
    function: Option<Function>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    rebind: Option<RebindArg>,
    /// Use |λ| instead of the signed draw.
    #[arg(long)]
    lambda_abs: bool,
    /// Fixed λ for every trial.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Initial interval as LO,HI.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    init_range: Option<[f64; 2]>,
    /// FIR coefficient count.
    #[arg(long)]
    order: Option<usize>,
    /// Passband edge as a fraction of π.
    #[arg(long)]
    wp: Option<f64>,
    /// Stopband edge as a fraction of π.
    #[arg(long)]
    ws: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    symmetric: Option<bool>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma separated subset of traces,plots,report (or none).
    #[arg(long, value_parser = parse_emit)]
    emit: Option<EmitFlags>,
    #[arg(long)]
    workers: Option<usize>,
}

fn parse_function(s: &str) -> Result<Function, String> {
    s.parse().map_err(|e: HarnessError| e.to_string())
}

fn parse_emit(s: &str) -> Result<EmitFlags, String> {
    s.parse().map_err(|e: HarnessError| e.to_string())
}

fn parse_range(s: &str) -> Result<[f64; 2], String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo = lo.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = hi.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok([lo, hi])
}

impl ExperimentArgs {
    fn resolve(&self, fir: bool) -> Result<ExperimentConfig, HarnessError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_json_file(path)
                .map_err(|e| HarnessError::Config(e.to_string()))?,
            None if fir => ExperimentConfig {
                function: Function::Fir,
                pop: 1000,
                trials: 10,
                ..ExperimentConfig::default()
            },
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field.clone() {
                    cfg.$field = v;
                }
            )*};
        }
        set!(function, dim, pop, iters, trials, seed, k, epsilon, order, wp, ws, eta, grid);
        set!(symmetric, out, emit, workers);
        if let Some(m) = self.mode {
            cfg.mode = match m {
                ModeArg::Literal => UpdateMode::Literal,
                ModeArg::Sweep => UpdateMode::Sweep,
            };
        }
        if let Some(r) = self.rebind {
            cfg.rebind = match r {
                RebindArg::Post => RebindPolicy::Post,
                RebindArg::Pre => RebindPolicy::Pre,
            };
        }
        if self.lambda_abs {
            cfg.lambda_abs = true;
        }
        if self.lambda.is_some() {
            cfg.lambda = self.lambda;
        }
        if self.init_range.is_some() {
            cfg.init_range = self.init_range;
        }
        match (fir, cfg.function == Function::Fir) {
            (true, false) => Err(HarnessError::Config(format!(
                "the fir command cannot run function '{}'",
                cfg.function
            ))),
            (false, true) => Err(HarnessError::Config(
                "use the fir command for filter design".into(),
            )),
            _ => Ok(cfg),
        }
    }
}

fn print_outcome(label: &str, outcome: &ExperimentOutcome) {
    let r = &outcome.report;
    let s = &r.stats;
    println!(
        "{label}: {} dim={} trials={} mean={:.6e} std={:.6e} best={:.6e} worst={:.6e} ({:.2?})",
        r.objective.name,
        r.objective.dimension,
        s.count,
        s.mean,
        s.std,
        s.best,
        s.worst,
        outcome.elapsed
    );
    if let Some(fir) = &r.fir {
        println!(
            "  best filter: E_p={:.6e} E_s={:.6e} attenuation={:.4} dB",
            fir.e_p, fir.e_s, fir.delta_db
        );
    }
    for path in &outcome.artifacts {
        println!("  wrote {}", path.display());
    }
}

fn failure(err: &HarnessError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(if err.is_config() {
        EXIT_USAGE
    } else {
        EXIT_RUNTIME
    })
}

fn experiment(args: &ExperimentArgs, fir: bool) -> ExitCode {
    let result = args.resolve(fir).and_then(|cfg| run_experiment(&cfg));
    match result {
        Ok(outcome) => {
            print_outcome(if fir { "fir" } else { "bench" }, &outcome);
            ExitCode::SUCCESS
        }
        Err(e) => failure(&e),
    }
}

fn validate() -> ExitCode {
    let checks = run_validation();
    for check in &checks {
        println!("{check}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {failed} failed", checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VALIDATE)
    }
}

fn presets(action: &PresetAction) -> ExitCode {
    match action {
        PresetAction::List => {
            for p in all_presets() {
                let c = &p.config;
                let dim = c.objective_dimension();
                println!(
                    "{:<22} function={} dim={dim} pop={} iters={} trials={}",
                    p.name, c.function, c.pop, c.iters, c.trials
                );
            }
            ExitCode::SUCCESS
        }
        PresetAction::Run {
            names,
            all,
            out,
            trials,
            seed,
            workers,
            emit,
        } => {
            let selected = if *all {
                all_presets()
            } else if names.is_empty() {
                eprintln!("error: name at least one preset or pass --all");
                return ExitCode::from(EXIT_USAGE);
            } else {
                let mut selected = Vec::new();
                for name in names {
                    match find_preset(name) {
                        Some(p) => selected.push(p),
                        None => {
                            eprintln!("error: unknown preset '{name}'");
                            return ExitCode::from(EXIT_USAGE);
                        }
                    }
                }
                selected
            };
            for mut preset in selected {
                let cfg = &mut preset.config;
                cfg.out = out.join(&preset.name);
                cfg.trials = trials.unwrap_or(cfg.trials);
                cfg.seed = seed.unwrap_or(cfg.seed);
                cfg.workers = workers.unwrap_or(cfg.workers);
                cfg.emit = emit.unwrap_or(cfg.emit);
                match run_experiment(cfg) {
                    Ok(outcome) => print_outcome(&preset.name, &outcome),
                    Err(e) => return failure(&e),
                }
            }
            ExitCode::SUCCESS
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match &cli.command {
        Command::Bench(args) => experiment(args, false),
        Command::Fir(args) => experiment(args, true),
        Command::Validate => validate(),
        Command::Presets { action } => presets(action),
    }
}
