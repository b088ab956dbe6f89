//! Experiment harness: generates the instance suite, runs every strategy on
//! every instance and aggregates node counts and run times.
//!
//! Instances on which any strategy hit a limit are kept in the record list
//! but left out of every average, so the three columns always average over
//! the same instances.

use std::fmt::Write as _;
use std::time::Duration;

use crate::bnb::{solve, Limits, Strategy};
use crate::error::{Error, Result};
use crate::gen::{generate, CorrelationClass, GeneratorConfig, SplitMix64};
use crate::model::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub classes: Vec<CorrelationClass>,
    pub instances_per_cell: usize,
    pub range: u64,
    pub base_seed: u64,
    pub time_limit: Duration,
    pub node_limit: Option<u64>,
    pub strategies: Vec<Strategy>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![10, 20, 30, 40, 50],
            classes: CorrelationClass::ALL.to_vec(),
            instances_per_cell: 5,
            range: GeneratorConfig::DEFAULT_RANGE,
            base_seed: 42,
            time_limit: Limits::DEFAULT_TIME_LIMIT,
            node_limit: None,
            strategies: Strategy::ALL.to_vec(),
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.instances_per_cell < 1 {
            return Err(Error::InvalidConfig("instances_per_cell must be at least 1".into()));
        }
        if self.sizes.is_empty() || self.classes.is_empty() || self.strategies.is_empty() {
            return Err(Error::InvalidConfig(
                "sizes, classes and strategies must be non-empty".into(),
            ));
        }
        Limits::new(self.time_limit, self.node_limit)?;
        for &n in &self.sizes {
            GeneratorConfig::new(CorrelationClass::Uncorrelated, n, 0)
                .with_range(self.range)
                .validate()?;
        }
        Ok(())
    }

    pub fn limits(&self) -> Limits {
        Limits {
            time_limit: self.time_limit,
            node_limit: self.node_limit,
        }
    }

    /// Generator configurations in suite order: class, then size, then k.
    pub fn instances(&self) -> Vec<SuiteInstance> {
        let mut out = Vec::new();
        for &class in &self.classes {
            for &n in &self.sizes {
                for k in 0..self.instances_per_cell {
                    let seed = cell_seed(self.base_seed, class, n, k);
                    out.push(SuiteInstance {
                        id: format!("{}-n{}-k{}", class, n, k),
                        generator: GeneratorConfig::new(class, n, seed).with_range(self.range),
                    });
                }
            }
        }
        out
    }
}

/// Seed of instance `k` in cell `(class, n)`: one SplitMix64 step from the
/// base seed with the cell coordinates folded in.
pub fn cell_seed(base_seed: u64, class: CorrelationClass, n: usize, k: usize) -> u64 {
    let state = base_seed ^ (class.index() << 56) ^ ((n as u64) << 24) ^ k as u64;
    SplitMix64::new(state).next_u64()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteInstance {
    pub id: String,
    pub generator: GeneratorConfig,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub instance_id: String,
    pub class: CorrelationClass,
    pub n: usize,
    pub strategy: Strategy,
    pub nodes: u64,
    pub wall_time: Duration,
    pub optimal: bool,
    pub value: Rational,
}

/// How suite runs are scheduled. Individual solves are always sequential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Instances run concurrently on the global thread pool. Falls back to
    /// sequential execution without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

fn run_instance(entry: &SuiteInstance, strategies: &[Strategy], limits: Limits) -> Result<Vec<RunRecord>> {
    let instance = generate(&entry.generator)?;
    strategies
        .iter()
        .map(|&strategy| {
            let report = solve(&instance, strategy, limits, false)?;
            Ok(RunRecord {
                instance_id: entry.id.clone(),
                class: entry.generator.class,
                n: entry.generator.n,
                strategy,
                nodes: report.nodes_evaluated,
                wall_time: report.wall_time,
                optimal: report.optimal,
                value: report.best.value,
            })
        })
        .collect()
}

pub fn run_suite(config: &BenchConfig) -> Result<BenchReport> {
    run_suite_with(config, Execution::default())
}

pub fn run_suite_with(config: &BenchConfig, execution: Execution) -> Result<BenchReport> {
    config.validate()?;
    let specs = config.instances();
    let limits = config.limits();
    let runs: Vec<Vec<RunRecord>> = match execution {
        Execution::Sequential => specs
            .iter()
            .map(|s| run_instance(s, &config.strategies, limits))
            .collect::<Result<_>>()?,
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            specs
                .par_iter()
                .map(|s| run_instance(s, &config.strategies, limits))
                .collect::<Result<_>>()?
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel => specs
            .iter()
            .map(|s| run_instance(s, &config.strategies, limits))
            .collect::<Result<_>>()?,
    };
    Ok(BenchReport::from_records(
        runs.into_iter().flatten().collect(),
        config.sizes.clone(),
        config.classes.clone(),
        config.strategies.clone(),
    ))
}

/// Runs the suite on a dedicated pool of `jobs` worker threads; `jobs <= 1`
/// runs sequentially.
pub fn run_suite_jobs(config: &BenchConfig, jobs: usize) -> Result<BenchReport> {
    if jobs <= 1 {
        return run_suite_with(config, Execution::Sequential);
    }
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
        pool.install(|| run_suite_with(config, Execution::Parallel))
    }
    #[cfg(not(feature = "parallel"))]
    run_suite_with(config, Execution::Sequential)
}

/// Average over the included runs of one strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Average {
    pub runs: u64,
    pub nodes: Rational,
    /// Mean run time in seconds.
    pub seconds: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchReport {
    pub records: Vec<RunRecord>,
    /// Instances where at least one strategy did not finish.
    pub excluded: Vec<String>,
    pub sizes: Vec<usize>,
    pub classes: Vec<CorrelationClass>,
    pub strategies: Vec<Strategy>,
}

impl BenchReport {
    pub fn from_records(
        records: Vec<RunRecord>,
        sizes: Vec<usize>,
        classes: Vec<CorrelationClass>,
        strategies: Vec<Strategy>,
    ) -> Self {
        let mut excluded: Vec<String> = records
            .iter()
            .filter(|r| !r.optimal)
            .map(|r| r.instance_id.clone())
            .collect();
        excluded.sort();
        excluded.dedup();
        BenchReport {
            records,
            excluded,
            sizes,
            classes,
            strategies,
        }
    }

    pub fn is_excluded(&self, instance_id: &str) -> bool {
        self.excluded.binary_search_by(|e| e.as_str().cmp(instance_id)).is_ok()
    }

    /// Records that enter the averages.
    pub fn included(&self) -> impl Iterator<Item = &RunRecord> {
        self.records.iter().filter(|r| !self.is_excluded(&r.instance_id))
    }

    pub fn instance_count(&self) -> usize {
        let mut ids: Vec<&str> = self.records.iter().map(|r| r.instance_id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// Exact average over included runs of `strategy` matching `filter`.
    pub fn average(&self, strategy: Strategy, filter: impl Fn(&RunRecord) -> bool) -> Result<Option<Average>> {
        let mut runs = 0u64;
        let mut nodes = 0u64;
        let mut nanos = 0u128;
        for r in self.included().filter(|r| r.strategy == strategy && filter(r)) {
            runs += 1;
            nodes = nodes.checked_add(r.nodes).ok_or(Error::Overflow("node sum"))?;
            nanos += r.wall_time.as_nanos();
        }
        if runs == 0 {
            return Ok(None);
        }
        let to_i64 = |x: u128| i64::try_from(x).map_err(|_| Error::Overflow("average"));
        Ok(Some(Average {
            runs,
            nodes: Rational::new(to_i64(nodes as u128)?, to_i64(runs as u128)?)?,
            seconds: Rational::new(to_i64(nanos)?, to_i64(runs as u128 * 1_000_000_000)?)?,
        }))
    }

    fn rows(&self, layout: Layout) -> Result<Vec<(String, Vec<Option<Average>>)>> {
        let row = |label: String, filter: &dyn Fn(&RunRecord) -> bool| -> Result<_> {
            let cells = self
                .strategies
                .iter()
                .map(|&s| self.average(s, filter))
                .collect::<Result<Vec<_>>>()?;
            Ok((label, cells))
        };
        let mut rows = Vec::new();
        match layout {
            Layout::Overall => {
                let cells = row(String::new(), &|_| true)?.1;
                rows.push(("Average node number".to_string(), cells.clone()));
                rows.push(("Average run time (s.)".to_string(), cells));
            }
            Layout::BySizeAndClassTime | Layout::BySizeAndClassNodes => {
                for &n in &self.sizes {
                    rows.push(row(format!("Instances size {n}"), &|r| r.n == n)?);
                }
                for &c in &self.classes {
                    rows.push(row(format!("{} instances", class_label(c)), &|r| r.class == c)?);
                }
                rows.push(row("Average all instances".to_string(), &|_| true)?);
            }
        }
        Ok(rows)
    }
}

fn class_label(class: CorrelationClass) -> &'static str {
    match class {
        CorrelationClass::Uncorrelated => "Uncorrelated",
        CorrelationClass::WeaklyCorrelated => "Weakly correlated",
        CorrelationClass::StronglyCorrelated => "Strongly correlated",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Average node number and run time over all included instances.
    Overall,
    /// Mean run time per size and per class.
    BySizeAndClassTime,
    /// Mean node count per size and per class.
    BySizeAndClassNodes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Markdown,
    Csv,
}

pub fn format_nodes(avg: &Average) -> String {
    avg.nodes.to_decimal(0)
}

pub fn format_seconds(avg: &Average) -> String {
    avg.seconds.to_decimal(3)
}

/// Renders one aggregate table. Columns follow the report's strategy order.
pub fn emit_table(report: &BenchReport, layout: Layout, format: TableFormat) -> Result<String> {
    if report.included().next().is_none() {
        return Err(Error::EmptyReport);
    }
    let rows = report.rows(layout)?;
    let first = match layout {
        Layout::Overall => "Algorithm",
        _ => "Instances",
    };
    let mut header = vec![first.to_string()];
    header.extend(report.strategies.iter().map(|s| s.display_name().to_string()));
    let body: Vec<Vec<String>> = rows
        .iter()
        .enumerate()
        .map(|(i, (label, cells))| {
            let time = match layout {
                Layout::Overall => i == 1,
                Layout::BySizeAndClassTime => true,
                Layout::BySizeAndClassNodes => false,
            };
            let mut line = vec![label.clone()];
            line.extend(cells.iter().map(|c| match c {
                None => "-".to_string(),
                Some(avg) if time => format_seconds(avg),
                Some(avg) => format_nodes(avg),
            }));
            line
        })
        .collect();
    let mut out = String::new();
    match format {
        TableFormat::Markdown => {
            let _ = writeln!(out, "| {} |", header.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
            for line in &body {
                let _ = writeln!(out, "| {} |", line.join(" | "));
            }
        }
        TableFormat::Csv => {
            let _ = writeln!(
                out,
                "{}",
                header.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(",")
            );
            for line in &body {
                let _ = writeln!(
                    out,
                    "{}",
                    line.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(",")
                );
            }
        }
    }
    Ok(out)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const RECORD_CSV_HEADER: &str = "instance_id,class,n,strategy,nodes,time_s,optimal,value_num,value_den";

/// One line per run, excluded runs included.
pub fn emit_records_csv(report: &BenchReport) -> String {
    let mut out = String::from(RECORD_CSV_HEADER);
    out.push('\n');
    for r in &report.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.6},{},{},{}",
            csv_field(&r.instance_id),
            r.class,
            r.n,
            r.strategy.key(),
            r.nodes,
            r.wall_time.as_secs_f64(),
            r.optimal,
            r.value.numer(),
            r.value.denom()
        );
    }
    out
}
