use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use knapsack_bnb::bench::{emit_records_csv, emit_table, run_suite_jobs, BenchConfig, Layout, TableFormat};
use knapsack_bnb::bnb::{solve, Limits, Strategy, Termination};
use knapsack_bnb::gen::{generate, CorrelationClass, GeneratorConfig};
use knapsack_bnb::io::{display_decimal, export_trace, parse_instance, write_instance};
use knapsack_bnb::model::{canonicalize, Instance, Rational};
use knapsack_bnb::oracle::{brute_force, dp_solve};

const EXIT_TIMEOUT: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_DISAGREE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "kpbb",
    version,
    about = "Branch-and-bound solvers for the 0-1 knapsack problem"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file
    Generate(GenerateArgs),
    /// Solve an instance file
    Solve(SolveArgs),
    /// Run the benchmark suite and print the aggregate tables
    Bench(BenchArgs),
    /// Cross-check all strategies against the exact oracles
    Check(CheckArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value = "uncorrelated")]
    class: CorrelationClass,
    /// Number of items
    #[arg(short, long)]
    n: usize,
    /// Data range R (weights drawn from 1..=R)
    #[arg(short = 'r', long, default_value_t = GeneratorConfig::DEFAULT_RANGE)]
    range: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance name (defaults to class, size, range and seed)
    #[arg(long)]
    name: Option<String>,
    /// Output file; stdout when omitted
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(short, long, default_value = "cascade")]
    strategy: Strategy,
    #[command(flatten)]
    limits: LimitArgs,
    /// Write the search tree as Graphviz DOT
    #[arg(long, value_name = "OUT")]
    trace: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct LimitArgs {
    /// Time limit per solve, in seconds
    #[arg(long, default_value_t = 3600.0)]
    time_limit: f64,
    /// Stop after this many nodes
    #[arg(long)]
    node_limit: Option<u64>,
}

impl LimitArgs {
    fn limits(self) -> Result<Limits> {
        Ok(Limits::new(self.duration()?, self.node_limit)?)
    }

    fn duration(self) -> Result<Duration> {
        Duration::try_from_secs_f64(self.time_limit)
            .map_err(|_| input_error(format!("invalid time limit {}", self.time_limit)))
    }
}

#[derive(Args)]
struct SuiteArgs {
    /// Instance sizes, comma separated
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Correlation classes, comma separated
    #[arg(long, value_delimiter = ',')]
    classes: Option<Vec<CorrelationClass>>,
    /// Instances per (size, class) cell
    #[arg(long)]
    per_cell: Option<usize>,
    /// Base seed of the suite
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(short = 'r', long, default_value_t = GeneratorConfig::DEFAULT_RANGE)]
    range: u64,
}

impl SuiteArgs {
    fn config(&self, sizes: &[usize], per_cell: usize, limits: LimitArgs) -> Result<BenchConfig> {
        let config = BenchConfig {
            sizes: self.sizes.clone().unwrap_or_else(|| sizes.to_vec()),
            classes: self.classes.clone().unwrap_or_else(|| CorrelationClass::ALL.to_vec()),
            instances_per_cell: self.per_cell.unwrap_or(per_cell),
            range: self.range,
            base_seed: self.seed,
            time_limit: limits.duration()?,
            node_limit: limits.node_limit,
            strategies: Strategy::ALL.to_vec(),
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Md,
    Csv,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    suite: SuiteArgs,
    #[command(flatten)]
    limits: LimitArgs,
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
    /// Worker threads; 1 runs sequentially
    #[arg(short, long, default_value_t = default_jobs())]
    jobs: usize,
    /// Write the tables here instead of stdout
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write one CSV line per run
    #[arg(long)]
    records: Option<PathBuf>,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Args)]
struct CheckArgs {
    /// Instance file; without it a generated suite is checked
    file: Option<PathBuf>,
    #[command(flatten)]
    suite: SuiteArgs,
    #[command(flatten)]
    limits: LimitArgs,
}

/// Errors caused by the user's input rather than by the environment.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_error(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let input = err
        .chain()
        .any(|e| e.is::<knapsack_bnb::Error>() || e.is::<InputError>());
    if input {
        EXIT_INPUT
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Check(args) => cmd_check(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing to stdout"),
    }
}

fn exact_and_decimal(value: Rational) -> String {
    format!("{} ({})", value, display_decimal(value))
}

fn cmd_generate(args: GenerateArgs) -> Result<u8> {
    let config = GeneratorConfig::new(args.class, args.n, args.seed).with_range(args.range);
    let mut instance = generate(&config)?;
    if let Some(name) = args.name {
        instance = canonicalize(instance.input_items(), instance.capacity(), name)?;
    }
    write_output(args.out.as_deref(), &write_instance(&instance))?;
    eprintln!(
        "{}: n={} C={} class={} R={} seed={}",
        args.out
            .as_deref()
            .map_or("<stdout>".into(), |p| p.display().to_string()),
        instance.len(),
        instance.capacity(),
        config.class,
        config.range,
        config.seed
    );
    Ok(0)
}

fn cmd_solve(args: SolveArgs) -> Result<u8> {
    let instance = read_instance(&args.file)?;
    let report = solve(&instance, args.strategy, args.limits.limits()?, args.trace.is_some())?;
    if let Some(path) = &args.trace {
        let dot = export_trace(report.trace.as_ref())?;
        fs::write(path, dot).with_context(|| format!("writing {}", path.display()))?;
    }
    let selection: Vec<&str> = instance
        .to_input_order(&report.best.selection)
        .into_iter()
        .map(|x| if x { "1" } else { "0" })
        .collect();
    println!(
        "instance:  {} ({} items, capacity {})",
        instance.name(),
        instance.len(),
        instance.capacity()
    );
    println!("strategy:  {}", report.strategy.display_name());
    println!("value:     {}", exact_and_decimal(report.best.value));
    println!("weight:    {}", report.best.weight);
    println!("selection: {}", selection.join(" "));
    println!("nodes:     {}", report.nodes_evaluated);
    println!("time:      {:.6} s", report.wall_time.as_secs_f64());
    println!("optimal:   {}", if report.optimal { "yes" } else { "no" });
    Ok(match report.termination {
        Termination::Optimal => 0,
        Termination::TimeLimit | Termination::NodeLimit => {
            eprintln!("search stopped at a limit; best known solution shown");
            EXIT_TIMEOUT
        }
    })
}

fn cmd_bench(args: BenchArgs) -> Result<u8> {
    let config = args.suite.config(&[10, 20, 30, 40, 50], 5, args.limits)?;
    if args.jobs == 0 {
        return Err(input_error("--jobs must be at least 1"));
    }
    let report = run_suite_jobs(&config, args.jobs)?;
    if let Some(path) = &args.records {
        fs::write(path, emit_records_csv(&report)).with_context(|| format!("writing {}", path.display()))?;
    }
    let format = match args.format {
        Format::Md => TableFormat::Markdown,
        Format::Csv => TableFormat::Csv,
    };
    let sections = [
        (Layout::Overall, "Average over all instances"),
        (Layout::BySizeAndClassTime, "Average run time (s.)"),
        (Layout::BySizeAndClassNodes, "Average node number"),
    ];
    let mut out = String::new();
    if report.included().next().is_none() {
        out.push_str("no instance finished within the limits\n");
    } else {
        for (i, (layout, title)) in sections.into_iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            match format {
                TableFormat::Markdown => out.push_str(&format!("### {title}\n\n")),
                TableFormat::Csv => out.push_str(&format!("# {title}\n")),
            }
            out.push_str(&emit_table(&report, layout, format)?);
        }
    }
    write_output(args.out.as_deref(), &out)?;
    if !report.excluded.is_empty() {
        eprintln!(
            "{} instance(s) hit a limit and were left out of the averages: {}",
            report.excluded.len(),
            report.excluded.join(", ")
        );
    }
    Ok(0)
}

struct CheckOutcome {
    agree: bool,
    timed_out: bool,
}

fn check_instance(instance: &Instance, limits: Limits) -> Result<CheckOutcome> {
    let mut results = vec![
        ("dp", dp_solve(instance)?.value),
        ("brute-force", brute_force(instance)?.value),
    ];
    let mut timed_out = false;
    for strategy in Strategy::ALL {
        let report = solve(instance, strategy, limits, false)?;
        timed_out |= !report.optimal;
        results.push((strategy.key(), report.best.value));
    }
    let agree = results.iter().all(|(_, v)| *v == results[0].1);
    if !agree {
        println!("DISAGREE {}", instance.name());
        for (who, value) in &results {
            println!("  {who:<12} {}", exact_and_decimal(*value));
        }
        println!("--- instance ---");
        print!("{}", write_instance(instance));
        println!("----------------");
    } else if timed_out {
        println!("TIMEOUT  {} (a strategy stopped at a limit)", instance.name());
    }
    Ok(CheckOutcome { agree, timed_out })
}

fn cmd_check(args: CheckArgs) -> Result<u8> {
    let limits = args.limits.limits()?;
    let instances = match &args.file {
        Some(path) => vec![read_instance(path)?],
        None => {
            let config = args.suite.config(&[10, 15, 20], 10, args.limits)?;
            config
                .instances()
                .into_iter()
                .map(|entry| {
                    let inst = generate(&entry.generator)?;
                    Ok(canonicalize(inst.input_items(), inst.capacity(), entry.id)?)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let (mut disagreements, mut timeouts) = (0, 0);
    for instance in &instances {
        let outcome = check_instance(instance, limits)?;
        disagreements += usize::from(!outcome.agree);
        timeouts += usize::from(outcome.timed_out);
    }
    if instances.len() == 1 && disagreements == 0 && timeouts == 0 {
        let value = dp_solve(&instances[0])?.value;
        println!("agree: {} at value {}", instances[0].name(), exact_and_decimal(value));
    } else {
        println!(
            "checked {} instance(s): {} disagreement(s), {} timeout(s)",
            instances.len(),
            disagreements,
            timeouts
        );
    }
    if disagreements > 0 {
        Ok(EXIT_DISAGREE)
    } else if timeouts > 0 {
        Ok(EXIT_TIMEOUT)
    } else {
        Ok(0)
    }
}
