//! MIN-UCB against the three baselines on one instance with helpful offline data.
//!
//! ```text
//! cargo run --example warm_start
//! ```

use warmstart::model::gap_profile;
use warmstart::sim::{presets, run_trial, TrialConfig};
use warmstart::PolicyKind;

fn run() -> warmstart::Result<()> {
    // Offline means are off by 0.2, and the learner knows V(a) exactly.
    let (instance, bias) = presets::optimistic(0.2)?;
    let gaps = gap_profile(&instance);
    println!("K = {}, T = {}, T_S = {:?}", instance.k(), instance.horizon(), instance.offline_counts());
    for kind in PolicyKind::ALL {
        let config = TrialConfig::mab(instance.clone(), kind, bias.clone()).with_seed(7);
        let result = run_trial(&config)?;
        let wasted: u64 = result.pulls.iter().zip(&gaps.delta).filter(|(_, &d)| d > 0.0).map(|(n, _)| n).sum();
        println!("{:>9}: regret {:>8.1}, sub-optimal pulls {wasted}", kind.name(), result.final_regret());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
