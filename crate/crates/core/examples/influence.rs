//! Influence maximization on a small graph: edges are base arms, a seed set
//! observes its out-edges, and the greedy oracle picks seeds.
//!
//! ```text
//! cargo run --release --example influence
//! ```

use warmstart::comb::{oracle_solve, OracleSpec, RewardModel};
use warmstart::sim::{presets, run_experiment};

fn run() -> warmstart::Result<()> {
    let (inst, _) = presets::influence(0, 0.05, 2000, 2)?;
    let spec = OracleSpec::default_for(inst.family());
    let mu = inst.base().mu_on();
    let best = oracle_solve(&spec, &RewardModel::Influence, &inst, &mu)?;
    println!(
        "greedy seeds {best} reach {:.3} nodes in expectation (alpha = {:.3})",
        RewardModel::Influence.evaluate(&inst, &mu, &best),
        spec.alpha()
    );
    let result = run_experiment(&presets::influence_sweep()?.trials(5), 0)?;
    for row in &result.summary {
        println!("T_S = {:>4} {:>18}: scaled regret {:>8.1} ± {:.1}", row.param, row.policy, row.mean, row.std);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
