//! Two instances with identical offline data but different optimal arms.
//! Trusting the offline data (MonUCB) pays linear regret on the second one,
//! while ignoring it (PURE-UCB) stays logarithmic.
//!
//! ```text
//! cargo run --release --example impossibility -- 10
//! ```

use warmstart::sim::{presets, run_experiment};

fn run() -> warmstart::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let params = presets::IMPOSSIBILITY_DEMO;
    let pair = presets::impossibility(&params)?;
    println!("C = {} < T^eps/(4 ln T) = {:.4}", params.c, pair.threshold);
    println!("I_P online means {:?}", pair.p.mu_on());
    println!("I_Q online means {:?}", pair.q.mu_on());
    println!("shared offline means {:?}", pair.p.mu_off());
    let result = run_experiment(&presets::impossibility_demo(&params)?.trials(trials), 0)?;
    for row in &result.summary {
        let which = if row.param == 0.0 { "I_P" } else { "I_Q" };
        println!("{which} {:>9}: {:>9.1} ± {:.1}", row.policy, row.mean, row.std);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
