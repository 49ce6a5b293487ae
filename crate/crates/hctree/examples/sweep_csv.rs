//! Programmatic phase sweep: classify a grid of activities and emit the
//! same CSV rows the command-line `sweep` subcommand prints, plus the
//! JSON form of one report.

use hctree::cli::fmt_sig;
use hctree::phase::{sweep, Model};

fn main() -> hctree::Result<()> {
    let grid: Vec<f64> = (0..=10).map(|j| 1.0 + j as f64 * 0.7).collect();
    let reports = sweep(Model::WpIndex4, 2, &grid)?;

    println!("lambda,regime,ti_count,wp_count,roots");
    for r in &reports {
        let roots: Vec<String> = r.roots.iter().map(|&x| fmt_sig(x, 10)).collect();
        println!(
            "{},{},{},{},{}",
            fmt_sig(r.lambda, 10),
            r.regime,
            r.ti_count,
            r.wp_count,
            roots.join(";")
        );
    }

    let last = reports.last().expect("nonempty grid");
    println!("\n{}", serde_json::to_string_pretty(last).expect("serializable"));
    Ok(())
}
