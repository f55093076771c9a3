//! `ccopt` — run and compare transform-wrapped gradient-descent benchmarks.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use ccopt::bench::{
    aggregate, compare, render_csv, render_json, run_trials, write_results, BenchConfig,
    BenchError, OutputFormat, SeedSpec,
};

#[derive(Parser)]
#[command(name = "ccopt", about = "Coordinate-transform gradient descent benchmark harness")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration over a seed list and report statistics.
    Run(Box<RunArgs>),
    /// Run two config files on matched seeds and compare them.
    Compare(CompareArgs),
    /// List the registered benchmark tasks.
    ListTasks,
}

#[derive(Args)]
struct RunArgs {
    /// Flat key = value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    task: Option<String>,
    /// none | hyperspherical | rotation | pad
    #[arg(long)]
    transform: Option<String>,
    /// gd | momentum | adam
    #[arg(long)]
    rule: Option<String>,
    /// always | adaptive | alternate
    #[arg(long)]
    policy: Option<String>,
    #[arg(long)]
    lr: Option<f64>,
    /// Learning rate inside transformed coordinates (defaults to --lr).
    #[arg(long)]
    transform_lr: Option<f64>,
    /// Rotation angle, broadcast over all coordinates.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    inner_steps: Option<usize>,
    #[arg(long)]
    pad_dims: Option<usize>,
    /// Seed count `N` (runs 0..N) or explicit list `a,b,c`.
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Success threshold; defaults to the task's own.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    grad_floor: Option<f64>,
    #[arg(long)]
    grad_tol: Option<f64>,
    #[arg(long)]
    patience: Option<usize>,
    #[arg(long)]
    period: Option<usize>,
    #[arg(long)]
    momentum: Option<f64>,
    #[arg(long)]
    reset_moments: bool,
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long)]
    layers: Option<usize>,
    /// Iris CSV path (iris task).
    #[arg(long)]
    data: Option<PathBuf>,
    /// Pauli Hamiltonian file (vqe_file task).
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    /// Output file; without it the CSV goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    /// Embed full trajectories in JSON output.
    #[arg(long)]
    traces: bool,
}

#[derive(Args)]
struct CompareArgs {
    /// Baseline config file.
    baseline: PathBuf,
    /// Candidate config file.
    candidate: PathBuf,
    /// Shared seed spec overriding both configs.
    #[arg(long)]
    seeds: Option<String>,
    /// Write the comparison report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.cmd {
        Command::Run(args) => cmd_run(*args),
        Command::Compare(args) => cmd_compare(args),
        Command::ListTasks => {
            for (name, desc) in BenchConfig::registry() {
                println!("{name:<18} {desc}");
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                BenchError::UnknownTask(_)
                | BenchError::InvalidConfig { .. }
                | BenchError::SeedMismatch(_)
                | BenchError::EmptyInput => 1,
                _ => 2,
            }
        }
    }
}

fn build_config(args: RunArgs) -> Result<BenchConfig, BenchError> {
    let mut cfg = BenchConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    macro_rules! flag {
        ($field:ident) => {
            if let Some(v) = args.$field {
                cfg.$field = v;
            }
        };
    }
    flag!(task);
    flag!(transform);
    flag!(rule);
    flag!(policy);
    flag!(lr);
    flag!(alpha);
    flag!(inner_steps);
    flag!(pad_dims);
    flag!(max_iters);
    flag!(grad_floor);
    flag!(grad_tol);
    flag!(patience);
    flag!(period);
    flag!(momentum);
    flag!(qubits);
    flag!(layers);
    flag!(format);
    if let Some(v) = args.transform_lr {
        cfg.transform_lr = Some(v);
    }
    if let Some(v) = args.threshold {
        cfg.threshold = Some(v);
    }
    if let Some(s) = &args.seeds {
        cfg.seeds = SeedSpec::parse(s).map_err(|msg| BenchError::InvalidConfig {
            field: "--seeds".into(),
            msg,
        })?;
    }
    if args.reset_moments {
        cfg.reset_moments = true;
    }
    if args.traces {
        cfg.traces = true;
    }
    if let Some(p) = args.data {
        cfg.data = Some(p);
    }
    if let Some(p) = args.hamiltonian {
        cfg.hamiltonian = Some(p);
    }
    if let Some(p) = args.out {
        cfg.out = Some(p);
    }
    Ok(cfg)
}

fn cmd_run(args: RunArgs) -> Result<(), BenchError> {
    let cfg = build_config(args)?;
    if cfg.task.is_empty() {
        return Err(BenchError::InvalidConfig {
            field: "--task".into(),
            msg: "no task selected".into(),
        });
    }
    let format = OutputFormat::from_str(&cfg.format).map_err(|msg| BenchError::InvalidConfig {
        field: "--format".into(),
        msg,
    })?;

    let run = run_trials(&cfg)?;
    let stats =
        (!run.runs.is_empty()).then(|| aggregate(&run.results(), &run.id).expect("non-empty"));

    match &cfg.out {
        Some(path) => {
            write_results(&run, stats.as_ref(), path, format, cfg.traces)?;
            if let Some(s) = &stats {
                println!(
                    "task={} transform={} rule={} policy={} trials={} summary={} success_rate={:.2} mean_final_cost={:.6e}",
                    s.task,
                    s.transform,
                    s.rule,
                    s.policy,
                    s.n_trials,
                    s.success_summary(),
                    s.success_rate,
                    s.mean_final_cost
                );
            }
            println!("wrote {}", path.display());
        }
        None => {
            match format {
                OutputFormat::Csv => print!("{}", render_csv(&run)),
                OutputFormat::Json => println!("{}", render_json(&run, stats.as_ref(), cfg.traces)?),
            }
            if let Some(s) = &stats {
                eprintln!(
                    "summary: {} (success_rate {:.2}, mean_final_cost {:.6e})",
                    s.success_summary(),
                    s.success_rate,
                    s.mean_final_cost
                );
            }
        }
    }
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<(), BenchError> {
    let mut base_cfg = BenchConfig::default();
    base_cfg.apply_file(&args.baseline)?;
    let mut cand_cfg = BenchConfig::default();
    cand_cfg.apply_file(&args.candidate)?;

    if let Some(s) = &args.seeds {
        let spec = SeedSpec::parse(s).map_err(|msg| BenchError::InvalidConfig {
            field: "--seeds".into(),
            msg,
        })?;
        base_cfg.seeds = spec.clone();
        cand_cfg.seeds = spec;
    } else if base_cfg.seeds != cand_cfg.seeds {
        return Err(BenchError::SeedMismatch(
            "config files disagree on seeds and no --seeds override was given".into(),
        ));
    }

    let base_run = run_trials(&base_cfg)?;
    let cand_run = run_trials(&cand_cfg)?;
    let report = compare(&base_run, &cand_run)?;
    print!("{}", report.render());
    if let Some(path) = &args.out {
        let text = serde_json::to_string_pretty(&report)
            .map_err(|e| BenchError::Io(std::io::Error::other(e)))?;
        std::fs::write(path, text)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
