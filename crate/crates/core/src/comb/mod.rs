//! Combinatorial semi-bandits with offline data.
//!
//! Base arms carry the same offline/online mean pairs as in the multi-armed
//! setting; the learner plays a feasible subset of base arms each round and
//! observes every member's outcome.

mod influence;
mod oracle;
mod policy;

use std::fmt;
use std::path::Path;
use std::sync::Arc;

pub use influence::{influence_expected_reward, Graph};
pub use oracle::{oracle_solve, OracleSpec, Solver};
pub use policy::{
    comb_regret, min_comb_ucb_round, optimal_value, CombPolicyState, CombRegret, OptimalValue,
};

use crate::error::{Error, Result};
use crate::model::MabInstance;

/// Largest explicit or enumerated action collection handled.
pub const MAX_ENUMERATED_ACTIONS: usize = 1_000_000;

/// A feasible action: the base arms it observes and, for influence
/// maximization, the seed nodes that expose them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action {
    pub arms: Vec<usize>,
    pub seeds: Option<Vec<usize>>,
}

impl Action {
    pub fn of_arms(mut arms: Vec<usize>) -> Self {
        arms.sort_unstable();
        Action { arms, seeds: None }
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        match &self.seeds {
            Some(s) => write!(f, "seeds[{}]", join(s)),
            None => write!(f, "{{{}}}", join(&self.arms)),
        }
    }
}

/// The collection of feasible actions.
#[derive(Debug, Clone, PartialEq)]
pub enum ActionFamily {
    /// An enumerated list of base-arm subsets.
    Explicit(Vec<Vec<usize>>),
    /// Every subset of exactly `m` base arms.
    TopM { m: usize },
    /// `K/m` disjoint paths `{jm, …, jm + m − 1}`.
    MPath { m: usize },
    /// Seed sets of size `budget`; the action observes the seeds' out-edges.
    Influence { graph: Arc<Graph>, budget: usize },
}

impl ActionFamily {
    /// Parse an actions file: one action per line, space-separated base-arm indices.
    pub fn parse_actions(text: &str, path: &Path) -> Result<Self> {
        let mut actions = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let arms = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::Parse {
                        path: path.to_path_buf(),
                        line: no + 1,
                        msg: format!("bad arm index `{tok}`"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            actions.push(arms);
        }
        Ok(ActionFamily::Explicit(actions))
    }

    pub fn tag(&self) -> String {
        match self {
            ActionFamily::Explicit(b) => format!("explicit({})", b.len()),
            ActionFamily::TopM { m } => format!("topm:{m}"),
            ActionFamily::MPath { m } => format!("mpath:{m}"),
            ActionFamily::Influence { budget, .. } => format!("influence:{budget}"),
        }
    }
}

/// Expected action reward as a function of the base-arm mean vector.
#[derive(Clone)]
pub enum RewardModel {
    /// `r_u(A) = Σ_{a∈A} u(a)`.
    Linear,
    /// Expected one-step spread; `u` holds edge probabilities (clamped to `[0, 1]`).
    Influence,
    /// A caller-provided monotone evaluator with smoothness modulus `γ x^ρ`.
    Smooth {
        evaluator: Arc<dyn Fn(&[f64], &Action) -> f64 + Send + Sync>,
        gamma: f64,
        rho: f64,
    },
}

impl fmt::Debug for RewardModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewardModel::Linear => f.write_str("Linear"),
            RewardModel::Influence => f.write_str("Influence"),
            RewardModel::Smooth { gamma, rho, .. } => f
                .debug_struct("Smooth")
                .field("gamma", gamma)
                .field("rho", rho)
                .finish_non_exhaustive(),
        }
    }
}

impl RewardModel {
    pub fn smooth(
        evaluator: impl Fn(&[f64], &Action) -> f64 + Send + Sync + 'static,
        gamma: f64,
        rho: f64,
    ) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::invalid("smoothness γ must be positive"));
        }
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::invalid("smoothness ρ must lie in (0, 1]"));
        }
        Ok(RewardModel::Smooth {
            evaluator: Arc::new(evaluator),
            gamma,
            rho,
        })
    }

    /// `r_u(A)` on instance `instance`.
    pub fn evaluate(&self, instance: &CombInstance, u: &[f64], action: &Action) -> f64 {
        match self {
            RewardModel::Linear => action.arms.iter().map(|&a| u[a]).sum(),
            RewardModel::Influence => {
                let ActionFamily::Influence { graph, .. } = instance.family() else {
                    unreachable!("influence model is only paired with an influence family")
                };
                let p: Vec<f64> = u.iter().map(|x| x.clamp(0.0, 1.0)).collect();
                let seeds = action.seeds.as_deref().unwrap_or(&[]);
                influence_expected_reward(graph, &p, seeds)
            }
            RewardModel::Smooth { evaluator, .. } => evaluator(u, action),
        }
    }

    /// `(γ, ρ)` of the smoothness modulus `f(x) = γ x^ρ`.
    pub fn smoothness(&self, instance: &CombInstance) -> (f64, f64) {
        match self {
            RewardModel::Linear => (instance.m() as f64, 1.0),
            RewardModel::Influence => match instance.family() {
                ActionFamily::Influence { graph, .. } => {
                    ((graph.nodes() * graph.edge_count()) as f64, 1.0)
                }
                _ => (f64::INFINITY, 1.0),
            },
            RewardModel::Smooth { gamma, rho, .. } => (*gamma, *rho),
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, RewardModel::Linear)
    }
}

/// A combinatorial instance: base arms plus feasible actions.
#[derive(Debug, Clone, PartialEq)]
pub struct CombInstance {
    base: MabInstance,
    family: ActionFamily,
    m: usize,
}

impl CombInstance {
    pub fn new(base: MabInstance, family: ActionFamily) -> Result<Self> {
        let k = base.k();
        let m = match &family {
            ActionFamily::Explicit(actions) => {
                if actions.is_empty() {
                    return Err(Error::invalid("feasible action collection is empty"));
                }
                if actions.len() > MAX_ENUMERATED_ACTIONS {
                    return Err(Error::invalid(format!(
                        "{} explicit actions exceed the enumeration cap",
                        actions.len()
                    )));
                }
                for (i, a) in actions.iter().enumerate() {
                    if a.is_empty() {
                        return Err(Error::invalid(format!("action {i} is empty")));
                    }
                    if a.iter().any(|&x| x >= k) {
                        return Err(Error::invalid(format!("action {i} names an arm ≥ K = {k}")));
                    }
                    let mut s = a.clone();
                    s.sort_unstable();
                    s.dedup();
                    if s.len() != a.len() {
                        return Err(Error::invalid(format!("action {i} repeats an arm")));
                    }
                }
                actions.iter().map(Vec::len).max().unwrap_or(0)
            }
            ActionFamily::TopM { m } => {
                if *m == 0 || *m > k {
                    return Err(Error::invalid(format!("top-m needs 1 ≤ m ≤ K, got m = {m}")));
                }
                *m
            }
            ActionFamily::MPath { m } => {
                if *m == 0 || k % m != 0 {
                    return Err(Error::invalid(format!(
                        "m-path needs K/m to be an integer, got K = {k}, m = {m}"
                    )));
                }
                *m
            }
            ActionFamily::Influence { graph, budget } => {
                if graph.edge_count() != k {
                    return Err(Error::invalid(format!(
                        "influence instance needs one base arm per edge ({} edges, K = {k})",
                        graph.edge_count()
                    )));
                }
                if *budget == 0 || *budget > graph.nodes() {
                    return Err(Error::invalid("seed budget must lie in 1..=|V|"));
                }
                graph.max_action_size(*budget)
            }
        };
        Ok(CombInstance { base, family, m })
    }

    pub fn base(&self) -> &MabInstance {
        &self.base
    }

    pub fn family(&self) -> &ActionFamily {
        &self.family
    }

    pub fn k(&self) -> usize {
        self.base.k()
    }

    /// Maximum action cardinality.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn horizon(&self) -> u64 {
        self.base.horizon()
    }

    /// Number of feasible actions, saturating.
    pub fn action_count(&self) -> u128 {
        match &self.family {
            ActionFamily::Explicit(b) => b.len() as u128,
            ActionFamily::TopM { m } => binomial(self.k(), *m),
            ActionFamily::MPath { m } => (self.k() / m) as u128,
            ActionFamily::Influence { graph, budget } => binomial(graph.nodes(), *budget),
        }
    }

    /// Every feasible action, in a fixed order. Rejects collections larger than
    /// [`MAX_ENUMERATED_ACTIONS`].
    pub fn actions(&self) -> Result<Vec<Action>> {
        if self.action_count() > MAX_ENUMERATED_ACTIONS as u128 {
            return Err(Error::invalid(format!(
                "{} actions exceed the enumeration cap",
                self.action_count()
            )));
        }
        Ok(match &self.family {
            ActionFamily::Explicit(b) => b.iter().cloned().map(Action::of_arms).collect(),
            ActionFamily::TopM { m } => combinations(self.k(), *m)
                .into_iter()
                .map(|arms| Action { arms, seeds: None })
                .collect(),
            ActionFamily::MPath { m } => (0..self.k() / m)
                .map(|j| Action {
                    arms: (j * m..(j + 1) * m).collect(),
                    seeds: None,
                })
                .collect(),
            ActionFamily::Influence { graph, budget } => combinations(graph.nodes(), *budget)
                .into_iter()
                .map(|seeds| Action {
                    arms: graph.action_arms(&seeds),
                    seeds: Some(seeds),
                })
                .collect(),
        })
    }

    /// Whether `model` can be evaluated on this family.
    pub fn check_model(&self, model: &RewardModel) -> Result<()> {
        let influence_family = matches!(self.family, ActionFamily::Influence { .. });
        let influence_model = matches!(model, RewardModel::Influence);
        if influence_family != influence_model {
            return Err(Error::invalid(
                "the influence reward model goes with the influence action family",
            ));
        }
        Ok(())
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
