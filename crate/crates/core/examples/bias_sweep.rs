//! Optimistic and pessimistic bias sweeps: mean final regret per policy and bias level.
//!
//! ```text
//! cargo run --release --example bias_sweep -- 50
//! ```
//! The optional argument is the trial count (default 10).

use warmstart::sim::{presets, run_experiment, ExperimentResult};
use warmstart::PolicyKind;

fn table(result: &ExperimentResult) {
    print!("{:>5}", result.param_name);
    for k in PolicyKind::ALL {
        print!("{:>18}", k.name());
    }
    println!();
    for v in presets::bias_grid() {
        print!("{v:>5.1}");
        for k in PolicyKind::ALL {
            let r = result.row(k.name(), v).expect("every cell is summarized");
            print!("{:>11.1} ± {:>4.0}", r.mean, r.std);
        }
        println!();
    }
}

fn run() -> warmstart::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    for exp in [presets::fig1a()?, presets::fig1b()?] {
        let result = run_experiment(&exp.trials(trials).seed(1), 0)?;
        println!("\n{} ({trials} trials)", result.name);
        table(&result);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
