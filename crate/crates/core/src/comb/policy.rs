//! MIN-COMB-UCB and combinatorial regret.

use super::{oracle_solve, Action, ActionFamily, CombInstance, OracleSpec, RewardModel};
use crate::error::{Error, Result};
use crate::model::{BiasBound, OfflineDataset, OnlineRewards};
use crate::policy::{arm_index, ArmStats, DeltaSchedule};

/// Per-base-arm statistics of one MIN-COMB-UCB run.
#[derive(Debug, Clone)]
pub struct CombPolicyState {
    n: Vec<u64>,
    /// Running online means; `+∞` until an arm is first observed.
    r_hat: Vec<f64>,
    /// Next round to play, 1-based.
    t: u64,
    /// First round after the initialization loop, once it has ended.
    t0: Option<u64>,
    v: BiasBound,
    t_s: Vec<u64>,
    offline_means: Vec<Option<f64>>,
    schedule: DeltaSchedule,
}

impl CombPolicyState {
    pub fn new(dataset: &OfflineDataset, v: BiasBound, schedule: DeltaSchedule) -> Result<Self> {
        let k = dataset.k();
        if v.len() != k {
            return Err(Error::invalid(format!(
                "bias bound has {} entries for {k} base arms",
                v.len()
            )));
        }
        Ok(CombPolicyState {
            n: vec![0; k],
            r_hat: vec![f64::INFINITY; k],
            t: 1,
            t0: None,
            v,
            t_s: dataset.counts(),
            offline_means: dataset.means().to_vec(),
            schedule,
        })
    }

    pub fn counts(&self) -> &[u64] {
        &self.n
    }

    pub fn means(&self) -> &[f64] {
        &self.r_hat
    }

    pub fn round(&self) -> u64 {
        self.t
    }

    /// First round played with confidence indices, if initialization is over.
    pub fn init_end(&self) -> Option<u64> {
        self.t0
    }

    pub fn initializing(&self) -> bool {
        self.n.contains(&0)
    }

    /// Oracle input at the current round: the running means (with `+∞`
    /// sentinels) while initializing, then `min{UCB, UCB^S}` per base arm.
    pub fn oracle_input(&self) -> Vec<f64> {
        if self.initializing() {
            return self.r_hat.clone();
        }
        let dt = self.schedule.delta_t(self.t, self.n.len());
        (0..self.n.len())
            .map(|a| {
                arm_index(
                    self.t,
                    dt,
                    ArmStats {
                        n: self.n[a],
                        r_hat: self.r_hat[a],
                        t_s: self.t_s[a],
                        offline_mean: self.offline_means[a],
                        v: self.v.get(a),
                    },
                )
                .min()
            })
            .collect()
    }

    pub fn choose(
        &self,
        instance: &CombInstance,
        model: &RewardModel,
        spec: &OracleSpec,
    ) -> Result<Action> {
        oracle_solve(spec, model, instance, &self.oracle_input())
    }

    /// Semi-bandit update with the outcomes of every member of the played action.
    pub fn observe(&mut self, outcomes: &[(usize, f64)]) {
        for &(a, r) in outcomes {
            let n = self.n[a] as f64;
            self.r_hat[a] = if self.n[a] == 0 {
                r
            } else {
                n * self.r_hat[a] / (n + 1.0) + r / (n + 1.0)
            };
            self.n[a] += 1;
        }
        self.t += 1;
        if self.t0.is_none() && !self.initializing() {
            self.t0 = Some(self.t);
        }
    }
}

/// Play one round: choose with the oracle, draw every member's online outcome
/// and fold it in. Returns the action played.
pub fn min_comb_ucb_round(
    state: &mut CombPolicyState,
    instance: &CombInstance,
    model: &RewardModel,
    spec: &OracleSpec,
    rewards: &mut OnlineRewards,
) -> Result<Action> {
    let action = state.choose(instance, model, spec)?;
    let outcomes: Vec<(usize, f64)> = action
        .arms
        .iter()
        .map(|&a| (a, rewards.draw(instance.base(), a)))
        .collect();
    state.observe(&outcomes);
    Ok(action)
}

/// Benchmark value `r*` under the true online means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalValue {
    pub value: f64,
    /// True when `r*` comes from an approximate oracle.
    pub approximate: bool,
}

/// `r*_{μ_on}`: exact by enumeration or structure, greedy for influence.
pub fn optimal_value(instance: &CombInstance, model: &RewardModel) -> Result<OptimalValue> {
    instance.check_model(model)?;
    let mu = instance.base().mu_on();
    let exact = |instance: &CombInstance| -> Result<f64> {
        Ok(instance
            .actions()?
            .iter()
            .map(|a| model.evaluate(instance, &mu, a))
            .fold(f64::NEG_INFINITY, f64::max))
    };
    match (instance.family(), model) {
        (ActionFamily::TopM { m }, RewardModel::Linear) => {
            let mut sorted = mu.clone();
            sorted.sort_by(|a, b| b.total_cmp(a));
            Ok(OptimalValue {
                value: sorted.iter().take(*m).sum(),
                approximate: false,
            })
        }
        (ActionFamily::Influence { .. }, _) => {
            let a = oracle_solve(&OracleSpec::new(super::Solver::GreedyInfluence), model, instance, &mu)?;
            Ok(OptimalValue {
                value: model.evaluate(instance, &mu, &a),
                approximate: true,
            })
        }
        _ => Ok(OptimalValue {
            value: exact(instance)?,
            approximate: false,
        }),
    }
}

/// Scaled regret of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombRegret {
    pub value: f64,
    pub approximate: bool,
}

/// `Σ_t (α β r* − r_{μ_on}(A_t))`.
pub fn comb_regret(
    actions: &[Action],
    instance: &CombInstance,
    model: &RewardModel,
    spec: &OracleSpec,
) -> Result<CombRegret> {
    let opt = optimal_value(instance, model)?;
    let mu = instance.base().mu_on();
    let target = spec.alpha() * spec.beta() * opt.value;
    let value = actions
        .iter()
        .map(|a| target - model.evaluate(instance, &mu, a))
        .sum();
    Ok(CombRegret {
        value,
        approximate: opt.approximate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::Solver;
    use crate::model::{sample_offline, MabInstance};

    fn mpath(mu: &[f64], m: usize) -> CombInstance {
        CombInstance::new(
            MabInstance::aligned(mu, vec![0; mu.len()], 100).unwrap(),
            ActionFamily::MPath { m },
        )
        .unwrap()
    }

    #[test]
    fn initialization_covers_one_path_per_round() {
        let c = mpath(&[0.5, 0.1, 0.9, 0.3, 0.2, 0.4], 2);
        let data = sample_offline(c.base(), 1);
        let mut s = CombPolicyState::new(&data, BiasBound::infinite(6), DeltaSchedule::InstanceDependent).unwrap();
        let spec = OracleSpec::new(Solver::ExactEnumerate);
        let mut rewards = OnlineRewards::new(c.base(), 3);
        let mut rounds = 0;
        while s.initializing() {
            let before: usize = s.counts().iter().filter(|&&n| n == 0).count();
            let a = min_comb_ucb_round(&mut s, &c, &RewardModel::Linear, &spec, &mut rewards).unwrap();
            let after: usize = s.counts().iter().filter(|&&n| n == 0).count();
            assert_eq!(before - after, a.len());
            rounds += 1;
        }
        assert_eq!(rounds, 3);
        assert_eq!(s.init_end(), Some(4));
        assert!(s.counts().iter().all(|&n| n >= 1));
        assert!(s.oracle_input().iter().all(|x| x.is_finite()));
    }

    #[test]
    fn regret_definitions() {
        let c = mpath(&[1.0, 1.0, 0.0, 3.0], 2);
        let spec = OracleSpec::new(Solver::ExactEnumerate);
        let bad = Action::of_arms(vec![0, 1]);
        let good = Action::of_arms(vec![2, 3]);
        let r = comb_regret(&vec![bad; 10], &c, &RewardModel::Linear, &spec).unwrap();
        assert_eq!(r.value, 10.0);
        assert!(!r.approximate);
        let r = comb_regret(&vec![good; 7], &c, &RewardModel::Linear, &spec).unwrap();
        assert_eq!(r.value, 0.0);

        let top = CombInstance::new(
            MabInstance::aligned(&[0.3, 0.9, 0.5], vec![0; 3], 10).unwrap(),
            ActionFamily::TopM { m: 1 },
        )
        .unwrap();
        let r = comb_regret(&[Action::of_arms(vec![2])], &top, &RewardModel::Linear, &OracleSpec::new(Solver::ExactTopM)).unwrap();
        assert!((r.value - 0.4).abs() < 1e-12);
    }
}
