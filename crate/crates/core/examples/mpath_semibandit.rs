//! MIN-COMB-UCB on disjoint paths with semi-bandit feedback, with and
//! without a usable bias bound.
//!
//! ```text
//! cargo run --release --example mpath_semibandit -- 20
//! ```

use warmstart::bounds::comb_dep_upper;
use warmstart::comb::RewardModel;
use warmstart::model::BiasBound;
use warmstart::sim::{presets, run_experiment};

fn run() -> warmstart::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let inst = presets::comb_mpath(10, 2, 1000, 10_000)?;
    for v in [BiasBound::uniform(10, 0.0)?, BiasBound::infinite(10)] {
        let b = comb_dep_upper(&inst, &v, &RewardModel::Linear)?;
        println!("order-level dependent bound with V = {}: {:.1}", v.get(0), b.value);
    }
    let result = run_experiment(&presets::comb_mpath_sweep()?.trials(trials), 0)?;
    for row in &result.summary {
        println!("T_S = {:>4} {:>18}: {:>8.1} ± {:.1}", row.param, row.policy, row.mean, row.std);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
