//! Exact solution of the water-filling LP
//!
//! ```text
//! max τ  s.t.  τ ≤ T_S(a) + n(a),  Σ_a n(a) = mass,  τ, n ≥ 0
//! ```
//!
//! whose optimum is the unique root of `Σ_a max(τ − T_S(a), 0) = mass`, with
//! `n*(a) = max(τ* − T_S(a), 0)`. The left side is piecewise linear and
//! strictly increasing above `min T_S`, so sorting the counts and scanning the
//! breakpoints finds the active segment; the root on it is a ratio of integers.

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Optimum `(τ*, n*)` of the water-filling LP, in exact arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterFill {
    pub tau: Rational,
    pub n_star: Vec<Rational>,
}

fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl WaterFill {
    pub fn tau_star(&self) -> f64 {
        to_f64(&self.tau)
    }

    pub fn n_star_f64(&self) -> Vec<f64> {
        self.n_star.iter().map(to_f64).collect()
    }
}

/// Solve the LP for offline counts `t_s` and online mass `mass` (`T` for
/// multi-armed bandits, `mT` for combinatorial ones).
pub fn tau_star_waterfill(t_s: &[u64], mass: u64) -> Result<WaterFill> {
    if t_s.is_empty() {
        return Err(Error::invalid("water-filling needs at least one arm"));
    }
    if mass == 0 {
        return Err(Error::invalid("water-filling mass must be positive"));
    }
    let mut sorted: Vec<i128> = t_s.iter().map(|&x| x as i128).collect();
    sorted.sort_unstable();
    let mass = mass as i128;
    let mut prefix: i128 = 0;
    let mut tau = None;
    for j in 1..=sorted.len() {
        prefix += sorted[j - 1];
        // Candidate root when the j lowest arms are filled: (mass + prefix) / j.
        let numer = mass + prefix;
        let fits = match sorted.get(j) {
            Some(&next) => numer <= next * j as i128,
            None => true,
        };
        if fits {
            tau = Some(Rational::new(numer, j as i128));
            break;
        }
    }
    let tau = tau.expect("the last segment always fits");
    let zero = Rational::from_integer(0);
    let n_star = t_s
        .iter()
        .map(|&s| {
            let gap = tau - Rational::from_integer(s as i128);
            if gap > zero {
                gap
            } else {
                zero
            }
        })
        .collect();
    Ok(WaterFill { tau, n_star })
}
