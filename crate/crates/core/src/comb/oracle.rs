//! Optimization oracles over feasible actions.
//!
//! Inputs may contain `+∞` entries (base arms not yet observed). Actions are
//! ranked first by how many `+∞` members they contain, then by the reward of
//! their finite part (infinite entries replaced by zero), then by the
//! lexicographic order of their sorted arms, smaller first. Under this rule
//! the initialization phase of MIN-COMB-UCB always covers a new arm.

use std::cmp::Ordering;

use super::{Action, ActionFamily, CombInstance, RewardModel};
use crate::error::{Error, Result};

/// Which maximizer backs the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    /// The `m` largest entries of the input; top-m families only.
    ExactTopM,
    /// Scan every feasible action.
    ExactEnumerate,
    /// Greedy seed selection on the one-step spread; influence families only.
    GreedyInfluence,
}

/// An `(α, β)`-oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSpec {
    solver: Solver,
    alpha: f64,
    beta: f64,
}

impl OracleSpec {
    pub fn new(solver: Solver) -> Self {
        let alpha = match solver {
            Solver::ExactTopM | Solver::ExactEnumerate => 1.0,
            Solver::GreedyInfluence => 1.0 - (-1.0f64).exp(),
        };
        OracleSpec {
            solver,
            alpha,
            beta: 1.0,
        }
    }

    pub fn solver(&self) -> Solver {
        self.solver
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Whether the oracle's output is exactly optimal.
    pub fn is_exact(&self) -> bool {
        self.solver != Solver::GreedyInfluence
    }

    /// The natural oracle for a family.
    pub fn default_for(family: &ActionFamily) -> Self {
        OracleSpec::new(match family {
            ActionFamily::TopM { .. } => Solver::ExactTopM,
            ActionFamily::Influence { .. } => Solver::GreedyInfluence,
            _ => Solver::ExactEnumerate,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Score {
    infinite: usize,
    finite: f64,
}

impl Score {
    fn cmp(&self, other: &Score) -> Ordering {
        self.infinite
            .cmp(&other.infinite)
            .then(self.finite.partial_cmp(&other.finite).unwrap_or(Ordering::Equal))
    }
}

/// Whether `(score, action)` beats `(best_score, best)`.
fn beats(score: Score, action: &Action, best_score: Score, best: &Action) -> bool {
    match score.cmp(&best_score) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => (&action.arms, &action.seeds) < (&best.arms, &best.seeds),
    }
}

fn finite_part(u: &[f64]) -> Vec<f64> {
    u.iter()
        .map(|&x| if x.is_infinite() { 0.0 } else { x })
        .collect()
}

fn score(model: &RewardModel, instance: &CombInstance, u: &[f64], finite: &[f64], a: &Action) -> Score {
    Score {
        infinite: a.arms.iter().filter(|&&i| u[i].is_infinite()).count(),
        finite: model.evaluate(instance, finite, a),
    }
}

/// Return the oracle's action for per-arm values `u`.
pub fn oracle_solve(
    spec: &OracleSpec,
    model: &RewardModel,
    instance: &CombInstance,
    u: &[f64],
) -> Result<Action> {
    if u.len() != instance.k() {
        return Err(Error::invalid(format!(
            "oracle input has {} entries for {} base arms",
            u.len(),
            instance.k()
        )));
    }
    if u.iter().any(|x| x.is_nan() || *x == f64::NEG_INFINITY) {
        return Err(Error::invalid("oracle input must be finite or +∞"));
    }
    instance.check_model(model)?;
    match spec.solver {
        Solver::ExactTopM => {
            let ActionFamily::TopM { m } = instance.family() else {
                return Err(Error::invalid("the top-m oracle needs a top-m family"));
            };
            if !model.is_linear() {
                return Err(Error::invalid("the top-m oracle needs linear rewards"));
            }
            Ok(top_m(u, *m))
        }
        Solver::ExactEnumerate => {
            let finite = finite_part(u);
            let mut best: Option<(Score, Action)> = None;
            for a in instance.actions()? {
                let s = score(model, instance, u, &finite, &a);
                let better = match &best {
                    None => true,
                    Some((bs, b)) => beats(s, &a, *bs, b),
                };
                if better {
                    best = Some((s, a));
                }
            }
            best.map(|(_, a)| a)
                .ok_or_else(|| Error::invalid("feasible action collection is empty"))
        }
        Solver::GreedyInfluence => {
            let ActionFamily::Influence { graph, budget } = instance.family() else {
                return Err(Error::invalid("the greedy oracle needs an influence family"));
            };
            let finite = finite_part(u);
            let mut seeds: Vec<usize> = Vec::with_capacity(*budget);
            for _ in 0..*budget {
                let mut pick: Option<(Score, Action)> = None;
                for node in (0..graph.nodes()).filter(|n| !seeds.contains(n)) {
                    let mut cand = seeds.clone();
                    cand.push(node);
                    cand.sort_unstable();
                    let a = Action {
                        arms: graph.action_arms(&cand),
                        seeds: Some(cand),
                    };
                    let s = score(model, instance, u, &finite, &a);
                    // Strict improvement keeps the lowest node index on ties.
                    if pick.as_ref().is_none_or(|(ps, _)| s.cmp(ps) == Ordering::Greater) {
                        pick = Some((s, a));
                    }
                }
                let (_, a) = pick.expect("budget never exceeds the node count");
                seeds = a.seeds.expect("influence actions carry seeds");
            }
            Ok(Action {
                arms: graph.action_arms(&seeds),
                seeds: Some(seeds),
            })
        }
    }
}

/// The `m` largest entries, `+∞` first, lowest index on ties.
fn top_m(u: &[f64], m: usize) -> Action {
    let mut order: Vec<usize> = (0..u.len()).collect();
    order.sort_by(|&i, &j| {
        u[j].partial_cmp(&u[i])
            .unwrap_or(Ordering::Equal)
            .then(i.cmp(&j))
    });
    order.truncate(m);
    Action::of_arms(order)
}
