//! Regret as the horizon grows, with ten thousand offline samples per arm,
//! written as CSV plus an SVG per bias level.
//!
//! ```text
//! cargo run --release --example horizon_sweep -- out/ 20
//! ```

use std::path::PathBuf;

use warmstart::io::write_atomic;
use warmstart::plot::render_plot;
use warmstart::sim::{presets, run_experiment};

fn run() -> warmstart::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "runs".into()));
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    for exp in presets::fig2()? {
        let result = run_experiment(&exp.trials(trials), 0)?;
        for path in result.write_csv(&out)? {
            println!("wrote {}", path.display());
        }
        if let Some(svg) = render_plot(&result.name, "T", &result.summary) {
            let path = out.join(format!("{}.svg", result.name));
            write_atomic(&path, svg.as_bytes())?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
