//! Runs the default 75-instance suite and prints the three aggregate tables.

use std::time::Instant;

use knapsack_bnb::bench::{emit_table, run_suite, BenchConfig, Layout, TableFormat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let start = Instant::now();
    let report = run_suite(&BenchConfig::default())?;
    for layout in [Layout::Overall, Layout::BySizeAndClassTime, Layout::BySizeAndClassNodes] {
        println!("{}", emit_table(&report, layout, TableFormat::Markdown)?);
    }
    if !report.excluded.is_empty() {
        println!("excluded: {}", report.excluded.join(", "));
    }
    let worst = report.records.iter().max_by_key(|r| r.nodes).unwrap();
    println!(
        "largest run: {} {} with {} nodes in {:.3}s",
        worst.instance_id,
        worst.strategy.key(),
        worst.nodes,
        worst.wall_time.as_secs_f64()
    );
    println!("total {:.1}s", start.elapsed().as_secs_f64());
    Ok(())
}
