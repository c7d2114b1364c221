use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gpm::geometry::estimate_fp;
use gpm::graph_stats::{l_trace_summary, stats_report, StatsSelection, DEFAULT_EPS, DEFAULT_MIN_PI};
use gpm::harness::{run_experiment_with_threads, write_results, OutputFormat, THREADS_ENV};
use gpm::io::{read_graph_file, write_graph};
use gpm::theory::predict_all;
use gpm::{generate_with, ExperimentConfig, GpmError, GpmParams, KernelTable, TraceMode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// Geometric preferential attachment graphs on the unit-area sphere.
#[derive(Parser)]
#[command(name = "gpm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one graph and write it as line-delimited JSON.
    Generate(GenerateArgs),
    /// Print a JSON statistics report for a graph file.
    Stats(StatsArgs),
    /// Print the asymptotic predictions for a parameter set.
    Predict(PredictArgs),
    /// Estimate the triangle amplification factor F_p by Monte Carlo.
    Fp(FpArgs),
    /// Run an ensemble experiment described by a TOML file.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Sphere dimension.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Edges per new vertex.
    #[arg(long)]
    m: usize,
    /// Fitness parameter, > 0.
    #[arg(long, allow_negative_numbers = true)]
    delta: f64,
    /// Area fraction of the detection region, in (0, 1].
    #[arg(long, allow_negative_numbers = true)]
    p: f64,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file, or `-` for standard output.
    #[arg(long)]
    out: PathBuf,
    /// `indicator`, or `table:<file>` with two columns `distance weight`.
    #[arg(long, default_value = "indicator")]
    kernel: String,
    /// Record the L(n) trace for every k-th vertex; 0 records none.
    #[arg(long, default_value_t = 1)]
    trace_stride: usize,
}

#[derive(Args)]
struct StatsArgs {
    /// Graph file written by `generate`.
    file: PathBuf,
    #[arg(long)]
    skip_triangles: bool,
    #[arg(long)]
    skip_diameter: bool,
    #[arg(long)]
    skip_histogram: bool,
}

#[derive(Args)]
struct PredictArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// F_p value; estimated when omitted.
    #[arg(long)]
    fp: Option<f64>,
    /// Include the n-dependent predictions for this n.
    #[arg(long)]
    n: Option<u64>,
    /// Samples for the F_p estimate when --fp is omitted.
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct FpArgs {
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, allow_negative_numbers = true)]
    p: f64,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment description (TOML).
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Results file, or `-` for standard output. Defaults to the config's
    /// `output` entry, then to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = THREADS_ENV)]
    threads: Option<usize>,
}

/// Bad flag values exit with status 2, like clap's own usage errors;
/// `GpmError::InvalidParameter` is treated the same way.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn params(model: &ModelArgs) -> Result<GpmParams> {
    Ok(GpmParams::new(model.d, model.m, model.delta, model.p)?)
}

fn open_out(path: &Path) -> Result<Box<dyn Write>> {
    if path == Path::new("-") {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    }
    let file = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(Box::new(BufWriter::new(file)))
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn generate(args: GenerateArgs) -> Result<()> {
    let mut params = params(&args.model)?;
    if args.n == 0 {
        return Err(Usage("--n must be at least 1".into()).into());
    }
    match args.kernel.as_str() {
        "indicator" => {}
        spec => {
            let Some(path) = spec.strip_prefix("table:") else {
                return Err(Usage(format!("--kernel must be `indicator` or `table:<file>`, got `{spec}`")).into());
            };
            let text = fs::read_to_string(path).with_context(|| format!("cannot read kernel table {path}"))?;
            params = params.with_kernel_table(KernelTable::parse(&text)?);
        }
    }
    let mode = match args.trace_stride {
        0 => TraceMode::Off,
        1 => TraceMode::Full,
        k => TraceMode::Every(k),
    };
    let (graph, trace) = generate_with(&params, args.n, args.seed, mode)?;
    let mut out = open_out(&args.out)?;
    write_graph(&mut out, &graph, &trace.rows)?;
    out.flush()?;
    drop(out);

    let l = l_trace_summary(&params, &trace.rows, DEFAULT_EPS, DEFAULT_MIN_PI)?;
    let summary = json!({
        "n": graph.n(),
        "edges": graph.edges.len(),
        "self_loops": graph.edges.iter().filter(|e| e.is_self_loop()).count(),
        "l_rows": l.map(|s| s.rows),
        "l_band_fraction": l.map(|s| s.band_fraction),
    });
    // Keep standard output clean when the graph itself goes there.
    if args.out == Path::new("-") {
        eprintln!("{summary}");
    } else {
        println!("{summary}");
    }
    Ok(())
}

fn stats(args: StatsArgs) -> Result<()> {
    let file = read_graph_file(&args.file).with_context(|| format!("cannot read {}", args.file.display()))?;
    let select = StatsSelection {
        skip_triangles: args.skip_triangles,
        skip_diameter: args.skip_diameter,
        skip_histogram: args.skip_histogram,
    };
    print_json(&stats_report(&file.graph, &file.trace, select)?)
}

fn predict(args: PredictArgs) -> Result<()> {
    let params = params(&args.model)?;
    let (fp, estimated) = match args.fp {
        Some(fp) => (fp, None),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let est = estimate_fp(params.d, params.p, args.samples, &mut rng)?;
            (est.mean, Some(est))
        }
    };
    let predictions = predict_all(&params, fp, args.n)?;
    print_json(&json!({ "params": params, "fp": fp, "fp_estimate": estimated, "predictions": predictions }))
}

fn fp(args: FpArgs) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let est = estimate_fp(args.d, args.p, args.samples, &mut rng)?;
    print_json(&json!({ "d": args.d, "p": args.p, "samples": args.samples, "mean": est.mean, "stderr": est.stderr }))
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let config =
        ExperimentConfig::load(&args.config).with_context(|| format!("cannot load {}", args.config.display()))?;
    let rows = run_experiment_with_threads(&config, args.threads.filter(|&t| t > 0))?;
    let format = match args.format {
        Format::Csv => OutputFormat::Csv,
        Format::Jsonl => OutputFormat::Jsonl,
    };
    let target = args.out.or_else(|| config.output.as_ref().map(PathBuf::from)).unwrap_or_else(|| "-".into());
    let mut out = open_out(&target)?;
    write_results(&mut out, &rows, &config, format)?;
    out.flush()?;
    eprintln!("{} rows, config sha256 {}", rows.len(), config.digest());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => generate(args),
        Command::Stats(args) => stats(args),
        Command::Predict(args) => predict(args),
        Command::Fp(args) => fp(args),
        Command::Experiment(args) => experiment(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.downcast_ref::<Usage>().is_some()
                || matches!(e.downcast_ref::<GpmError>(), Some(GpmError::InvalidParameter(_)));
            if usage {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
