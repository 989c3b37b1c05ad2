//! Instance families and the named experiments built from them.

use std::sync::Arc;

use super::{Cell, Experiment, TrialConfig};
use crate::bounds::{impossibility_pair, ImpossibilityPair, ImpossibilityParams};
use crate::comb::{ActionFamily, CombInstance, Graph, OracleSpec, RewardModel};
use crate::error::{Error, Result};
use crate::model::{ArmPair, BiasBound, MabInstance, Noise};
use crate::policy::PolicyKind;

const K: usize = 10;
const HORIZON: u64 = 10_000;
const OFFLINE: u64 = 1_000;

/// Bias levels `0.1, 0.2, …, 1.0`.
pub fn bias_grid() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}

/// Horizons of the horizon sweep.
pub const T_GRID: [u64; 6] = [50, 500, 1500, 3000, 5000, 7000];

fn best_first(k: usize) -> Vec<f64> {
    let mut mu = vec![0.0; k];
    mu[0] = 1.0;
    mu
}

fn with_exact_bias(arms: Vec<ArmPair>, t_s: u64, horizon: u64) -> Result<(MabInstance, BiasBound)> {
    let k = arms.len();
    let inst = MabInstance::new(arms, vec![t_s; k], horizon)?;
    let v = BiasBound::exact(&inst);
    Ok((inst, v))
}

/// Offline data under-reports the best arm by `v` and over-reports the rest by `v`.
pub fn optimistic(v: f64) -> Result<(MabInstance, BiasBound)> {
    optimistic_shape(v, OFFLINE, HORIZON)
}

fn optimistic_shape(v: f64, t_s: u64, horizon: u64) -> Result<(MabInstance, BiasBound)> {
    let arms = best_first(K)
        .into_iter()
        .enumerate()
        .map(|(a, on)| ArmPair::new(on, if a == 0 { on - v } else { on + v }))
        .collect();
    with_exact_bias(arms, t_s, horizon)
}

/// Offline data under-reports every arm by `v`.
pub fn pessimistic(v: f64) -> Result<(MabInstance, BiasBound)> {
    let arms = best_first(K).into_iter().map(|on| ArmPair::new(on, on - v)).collect();
    with_exact_bias(arms, OFFLINE, HORIZON)
}

/// The optimistic shape with `T_S = 10⁴` and horizon `t`.
pub fn t_sweep(v: f64, t: u64) -> Result<(MabInstance, BiasBound)> {
    optimistic_shape(v, 10_000, t)
}

/// Customer utility law of the pricing family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Utility {
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
}

impl Utility {
    /// `Pr(U ≥ x)`.
    pub fn survival(&self, x: f64) -> f64 {
        match *self {
            Utility::Uniform { lo, hi } => ((hi - x) / (hi - lo)).clamp(0.0, 1.0),
            Utility::Exponential { rate } => (-rate * x.max(0.0)).exp(),
        }
    }
}

/// Posted-price selling: arm `a` is a price, a sale pays the price. Online
/// customers draw utility from `utility`, offline ones from `utility + shift`.
pub fn pricing(
    prices: &[f64],
    utility: Utility,
    shift: f64,
    t_s: u64,
    horizon: u64,
) -> Result<(MabInstance, BiasBound)> {
    if prices.is_empty() || prices.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
        return Err(Error::invalid("prices must be positive and finite"));
    }
    let arms = prices
        .iter()
        .map(|&p| ArmPair::new(p * utility.survival(p), p * utility.survival(p - shift)))
        .collect();
    let inst = MabInstance::with_noise(
        arms,
        vec![t_s; prices.len()],
        horizon,
        Noise::ScaledBernoulli { scales: prices.to_vec() },
    )?;
    let v = BiasBound::exact(&inst);
    Ok((inst, v))
}

/// The two-instance construction with `offline_count` samples per arm.
pub fn impossibility(params: &ImpossibilityParams) -> Result<ImpossibilityPair> {
    impossibility_pair(params)
}

/// `K/m` paths of `m` arms; path 0 has mean 1 per arm, the rest 0. Offline
/// data is unbiased.
pub fn comb_mpath(k: usize, m: usize, t_s: u64, horizon: u64) -> Result<CombInstance> {
    let mu: Vec<f64> = (0..k).map(|a| if a < m { 1.0 } else { 0.0 }).collect();
    CombInstance::new(MabInstance::aligned(&mu, vec![t_s; k], horizon)?, ActionFamily::MPath { m })
}

/// A fixed 8-node graph whose offline edge probabilities run `shift` higher
/// than online ones. Feedback per edge is Bernoulli.
pub fn influence(t_s: u64, shift: f64, horizon: u64, budget: usize) -> Result<(CombInstance, BiasBound)> {
    let edges = vec![
        (0, 1, 0.6), (0, 2, 0.5), (1, 3, 0.4), (2, 3, 0.3),
        (3, 4, 0.7), (4, 5, 0.2), (5, 6, 0.5), (6, 7, 0.4),
        (7, 0, 0.3), (2, 6, 0.6), (5, 1, 0.1), (4, 7, 0.5),
    ];
    let graph = Graph::new(8, edges.clone())?;
    let arms = edges
        .iter()
        .map(|&(_, _, p)| ArmPair::new(p, (p + shift).clamp(0.0, 1.0)))
        .collect();
    let base = MabInstance::with_noise(
        arms,
        vec![t_s; edges.len()],
        horizon,
        Noise::ScaledBernoulli { scales: vec![1.0; edges.len()] },
    )?;
    let v = BiasBound::exact(&base);
    let inst = CombInstance::new(base, ActionFamily::Influence { graph: Arc::new(graph), budget })?;
    Ok((inst, v))
}

pub fn mab_cells(instance: &MabInstance, v: &BiasBound, param: f64) -> Vec<Cell> {
    PolicyKind::ALL
        .iter()
        .map(|&k| Cell {
            policy: k.name().to_string(),
            param,
            config: TrialConfig::mab(instance.clone(), k, v.clone()),
        })
        .collect()
}

fn bias_sweep(name: &str, build: fn(f64) -> Result<(MabInstance, BiasBound)>) -> Result<Experiment> {
    let mut cells = Vec::new();
    for v in bias_grid() {
        let (inst, bound) = build(v)?;
        cells.extend(mab_cells(&inst, &bound, v));
    }
    Ok(Experiment::new(name, "v", cells))
}

/// Optimistic bias sweep, four policies by ten bias levels.
pub fn fig1a() -> Result<Experiment> {
    bias_sweep("fig1a", optimistic)
}

/// Pessimistic bias sweep.
pub fn fig1b() -> Result<Experiment> {
    bias_sweep("fig1b", pessimistic)
}

/// Horizon sweeps at `v ∈ {0.4, 0.5, 0.6}`, one experiment per bias level.
pub fn fig2() -> Result<Vec<Experiment>> {
    [0.4, 0.5, 0.6]
        .iter()
        .map(|&v| {
            let mut cells = Vec::new();
            for t in T_GRID {
                let (inst, bound) = t_sweep(v, t)?;
                cells.extend(mab_cells(&inst, &bound, t as f64));
            }
            Ok(Experiment::new(format!("fig2_v{v}"), "T", cells))
        })
        .collect()
}

/// Offline market shifted by `shift ∈ {0, 0.1, 0.2, 0.3}`, nine prices.
pub fn pricing_sweep() -> Result<Experiment> {
    let prices: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let mut cells = Vec::new();
    for shift in [0.0, 0.1, 0.2, 0.3] {
        let (inst, v) = pricing(&prices, Utility::Uniform { lo: 0.0, hi: 1.0 }, shift, 500, HORIZON)?;
        cells.extend(mab_cells(&inst, &v, shift));
    }
    Ok(Experiment::new("pricing", "shift", cells))
}

/// Parameters of the simulated impossibility demo.
pub const IMPOSSIBILITY_DEMO: ImpossibilityParams = ImpossibilityParams {
    beta: 0.25,
    eps: 0.2,
    c: 0.2,
    horizon: 100_000,
    offline_count: 100_000,
};

/// Every policy on `I_P` (param 0) and `I_Q` (param 1), unbounded bias.
pub fn impossibility_demo(params: &ImpossibilityParams) -> Result<Experiment> {
    let pair = impossibility(params)?;
    let mut cells = mab_cells(&pair.p, &BiasBound::infinite(2), 0.0);
    cells.extend(mab_cells(&pair.q, &BiasBound::infinite(2), 1.0));
    Ok(Experiment::new("impossibility", "instance", cells))
}

/// Policy labels of the combinatorial presets.
pub const COMB_WARM: &str = "min-comb-ucb";
pub const COMB_COLD: &str = "min-comb-ucb-vinf";

pub fn comb_cells(instance: &CombInstance, model: &RewardModel, v: &BiasBound, param: f64) -> Vec<Cell> {
    let oracle = OracleSpec::default_for(instance.family());
    [(COMB_WARM, v.clone()), (COMB_COLD, BiasBound::infinite(instance.k()))]
        .into_iter()
        .map(|(label, bound)| Cell {
            policy: label.to_string(),
            param,
            config: TrialConfig::comb(instance.clone(), model.clone(), oracle, bound),
        })
        .collect()
}

/// m-path instance `K = 10, m = 2`, exact bias bound 0 against `V = ∞`,
/// offline samples per arm in `{0, 1000}`.
pub fn comb_mpath_sweep() -> Result<Experiment> {
    let mut cells = Vec::new();
    for t_s in [0, OFFLINE] {
        let inst = comb_mpath(K, 2, t_s, HORIZON)?;
        cells.extend(comb_cells(&inst, &RewardModel::Linear, &BiasBound::uniform(K, 0.0)?, t_s as f64));
    }
    Ok(Experiment::new("comb_mpath", "t_s", cells))
}

/// Influence maximization with two seeds, offline probabilities shifted by 0.05.
pub fn influence_sweep() -> Result<Experiment> {
    let mut cells = Vec::new();
    for t_s in [0, 200, 1000] {
        let (inst, v) = influence(t_s, 0.05, 2000, 2)?;
        cells.extend(comb_cells(&inst, &RewardModel::Influence, &v, t_s as f64));
    }
    Ok(Experiment::new("influence", "t_s", cells))
}

/// Names accepted by [`experiment_preset`].
pub const EXPERIMENT_PRESETS: [&str; 7] =
    ["fig1a", "fig1b", "fig2", "pricing", "impossibility", "comb-mpath", "influence"];

/// The experiments of a named preset.
pub fn experiment_preset(name: &str) -> Result<Vec<Experiment>> {
    Ok(match name {
        "fig1a" => vec![fig1a()?],
        "fig1b" => vec![fig1b()?],
        "fig2" => fig2()?,
        "pricing" => vec![pricing_sweep()?],
        "impossibility" => vec![impossibility_demo(&IMPOSSIBILITY_DEMO)?],
        "comb-mpath" => vec![comb_mpath_sweep()?],
        "influence" => vec![influence_sweep()?],
        _ => {
            return Err(Error::Unknown {
                what: "preset",
                name: name.to_string(),
            })
        }
    })
}
