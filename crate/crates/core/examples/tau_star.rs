//! The water-filling level τ* and the per-arm allocation n* for a few offline profiles.
//!
//! ```text
//! cargo run --example tau_star
//! ```

use warmstart::bounds::tau_star_waterfill;

fn run() -> warmstart::Result<()> {
    let cases: [(&str, Vec<u64>, u64); 3] = [
        ("uniform", vec![1000; 10], 10_000),
        ("half warm", [vec![100; 5], vec![0; 5]].concat(), 1000),
        ("mostly warm", [vec![1000; 8], vec![0; 2]].concat(), 1000),
    ];
    for (name, t_s, t) in cases {
        let wf = tau_star_waterfill(&t_s, t)?;
        println!("{name:>12}: tau* = {} ({:.3})", wf.tau, wf.tau_star());
        for (a, (ts, n)) in t_s.iter().zip(&wf.n_star).enumerate() {
            println!("{:>16} arm {a}: T_S = {ts:>5}, n* = {n}", "");
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
