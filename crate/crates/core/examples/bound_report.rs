//! Every analytic quantity for one instance: discrepancies, saving terms,
//! τ*, the explicit dependent bound and the order-level profiles.
//!
//! ```text
//! cargo run --example bound_report -- 0.3
//! ```

use warmstart::bounds::{BoundQuery, BoundReport};
use warmstart::comb::{ActionFamily, CombInstance, RewardModel};
use warmstart::sim::presets;

fn run() -> warmstart::Result<()> {
    let v = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.3);
    let (instance, bias) = presets::optimistic(v)?;
    let query = BoundQuery::default();
    let comb = CombInstance::new(instance.clone(), ActionFamily::MPath { m: 2 })?;
    let report = BoundReport::new(&instance, &bias, &query)?
        .with_comb(&comb, &bias, &RewardModel::Linear, query.delta)?;
    print!("{}", report.to_key_values());
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
