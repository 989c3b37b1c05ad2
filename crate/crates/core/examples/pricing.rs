//! Posted pricing where last season's customers valued the product higher.
//!
//! ```text
//! cargo run --release --example pricing
//! ```

use warmstart::model::gap_profile;
use warmstart::sim::presets::{self, Utility};
use warmstart::sim::{run_trial, TrialConfig};
use warmstart::PolicyKind;

fn run() -> warmstart::Result<()> {
    let prices: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let (instance, bias) = presets::pricing(&prices, Utility::Uniform { lo: 0.0, hi: 1.0 }, 0.1, 500, 10_000)?;
    let gaps = gap_profile(&instance);
    println!("revenue per price online: {:?}", instance.mu_on());
    println!("best price: {}", prices[gaps.optimal_arms[0]]);
    for kind in PolicyKind::ALL {
        let r = run_trial(&TrialConfig::mab(instance.clone(), kind, bias.clone()).with_seed(3))?;
        println!("{:>9}: regret {:.2}", kind.name(), r.final_regret());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
