//! Index policies for multi-armed bandits with offline data.
//!
//! [`PolicyKind::MinUcb`] keeps two upper confidence bounds per arm, the
//! vanilla one built from online samples only and a warm-start one that pools
//! the offline samples and pays an extra `T_S/(N+T_S)·V(a)` for their possible
//! bias, and plays the arm whose smaller bound is largest. The other kinds are
//! the baselines it is compared against.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{scaled_bias, BiasBound, MabInstance, OfflineDataset};

/// Which index the policy maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    /// `max_a min{UCB, UCB^S}`.
    MinUcb,
    /// Vanilla UCB, offline data ignored.
    PureUcb,
    /// Warm-start index only.
    UcbSOnly,
    /// Vanilla UCB whose counts and means are seeded with the offline data,
    /// as if the offline and online laws were equal.
    MonUcbPooled,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [
        PolicyKind::MinUcb,
        PolicyKind::PureUcb,
        PolicyKind::UcbSOnly,
        PolicyKind::MonUcbPooled,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::MinUcb => "min-ucb",
            PolicyKind::PureUcb => "pure-ucb",
            PolicyKind::UcbSOnly => "ucbs",
            PolicyKind::MonUcbPooled => "monucb",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unknown {
                what: "policy",
                name: s.to_string(),
            })
    }
}

/// Confidence schedule `t ↦ δ_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaSchedule {
    /// `δ_t = 1 / (2 K t²)`.
    InstanceDependent,
    /// `δ_t = δ / (2 K t²)`.
    InstanceIndependent { delta: f64 },
}

impl DeltaSchedule {
    /// Build a schedule from its tag (`dep` or `indep`).
    pub fn from_tag(tag: &str, delta: Option<f64>) -> Result<Self> {
        match (tag, delta) {
            ("dep", _) => Ok(DeltaSchedule::InstanceDependent),
            ("indep", Some(d)) if d > 0.0 && d < 1.0 => {
                Ok(DeltaSchedule::InstanceIndependent { delta: d })
            }
            ("indep", Some(d)) => Err(Error::Config(format!("δ = {d} is outside (0, 1)"))),
            ("indep", None) => Err(Error::Config(
                "the instance-independent schedule needs a global δ".into(),
            )),
            (other, _) => Err(Error::Unknown {
                what: "schedule",
                name: other.to_string(),
            }),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            DeltaSchedule::InstanceDependent => "dep",
            DeltaSchedule::InstanceIndependent { .. } => "indep",
        }
    }

    /// `δ_t` at round `t ≥ 1` with `k` arms.
    pub fn delta_t(&self, t: u64, k: usize) -> f64 {
        let base = 1.0 / (2.0 * k as f64 * (t as f64) * (t as f64));
        match self {
            DeltaSchedule::InstanceDependent => base,
            DeltaSchedule::InstanceIndependent { delta } => delta * base,
        }
    }
}

/// Convenience wrapper over [`DeltaSchedule::from_tag`] and [`DeltaSchedule::delta_t`].
pub fn delta_t(tag: &str, t: u64, k: usize, global_delta: Option<f64>) -> Result<f64> {
    Ok(DeltaSchedule::from_tag(tag, global_delta)?.delta_t(t, k))
}

/// Confidence radii of one arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radii {
    /// `sqrt(2 log(2t/δ_t) / N)`.
    pub rad: f64,
    /// `sqrt(2 log(2t/δ_t) / (N + T_S)) + T_S/(N + T_S) · V`, possibly `+∞`.
    pub rad_s: f64,
}

#[inline]
fn log_term(t: u64, dt: f64) -> f64 {
    2.0 * (2.0 * t as f64 / dt).ln()
}

#[inline]
fn radii_from_log(log2: f64, n: u64, t_s: u64, v: f64) -> Radii {
    let n_f = n as f64;
    let rad = (log2 / n_f).sqrt();
    if t_s == 0 {
        return Radii { rad, rad_s: rad };
    }
    let pooled = n_f + t_s as f64;
    let rad_s = (log2 / pooled).sqrt() + scaled_bias(t_s as f64 / pooled, v);
    Radii { rad, rad_s }
}

/// Radii at round `t` with confidence `dt`, for an arm pulled `n ≥ 1` times
/// online with `t_s` offline samples and bias bound `v`.
pub fn compute_radii(t: u64, dt: f64, n: u64, t_s: u64, v: f64) -> Radii {
    radii_from_log(log_term(t, dt), n, t_s, v)
}

/// Both indices of one arm plus their radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmIndex {
    pub ucb: f64,
    pub ucb_s: f64,
    pub rad: f64,
    pub rad_s: f64,
}

impl ArmIndex {
    pub fn min(&self) -> f64 {
        self.ucb.min(self.ucb_s)
    }
}

/// Statistics the two indices of one arm are built from.
#[derive(Debug, Clone, Copy)]
pub struct ArmStats {
    pub n: u64,
    pub r_hat: f64,
    pub t_s: u64,
    pub offline_mean: Option<f64>,
    pub v: f64,
}

#[inline]
fn arm_index_from_log(log2: f64, s: ArmStats) -> ArmIndex {
    let Radii { rad, rad_s } = radii_from_log(log2, s.n, s.t_s, s.v);
    let ucb = s.r_hat + rad;
    let pooled_mean = match (s.t_s, s.offline_mean) {
        (0, _) | (_, None) => s.r_hat,
        (t_s, Some(x)) => {
            (s.n as f64 * s.r_hat + t_s as f64 * x) / (s.n as f64 + t_s as f64)
        }
    };
    let ucb_s = if s.t_s == 0 { ucb } else { pooled_mean + rad_s };
    ArmIndex {
        ucb,
        ucb_s,
        rad,
        rad_s,
    }
}

/// `UCB_t(a)` and `UCB^S_t(a)` for one arm at round `t`.
pub fn arm_index(t: u64, dt: f64, stats: ArmStats) -> ArmIndex {
    arm_index_from_log(log_term(t, dt), stats)
}

/// Per-arm indices at one round, as reported to the selection rule.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexPair {
    pub ucb: Vec<f64>,
    pub ucb_s: Vec<f64>,
    pub rad: Vec<f64>,
    pub rad_s: Vec<f64>,
}

impl IndexPair {
    pub fn min_index(&self) -> Vec<f64> {
        self.ucb
            .iter()
            .zip(&self.ucb_s)
            .map(|(u, s)| u.min(*s))
            .collect()
    }
}

/// Smallest index attaining the maximum of `values`.
pub fn argmax_lowest(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, v) in values.into_iter().enumerate() {
        if v > best_v || (i == 0 && v == best_v) {
            best = i;
            best_v = v;
        }
    }
    best
}

/// Mutable state of one policy run.
#[derive(Debug, Clone)]
pub struct PolicyState {
    kind: PolicyKind,
    /// Sample counts behind `r_hat` (pooled with the offline data for MonUCB).
    n: Vec<u64>,
    r_hat: Vec<f64>,
    /// Online pulls per arm.
    pulls: Vec<u64>,
    /// Next round to play, 1-based.
    t: u64,
    schedule: DeltaSchedule,
    v: BiasBound,
    offline_means: Vec<Option<f64>>,
    t_s: Vec<u64>,
}

impl PolicyState {
    pub fn new(
        kind: PolicyKind,
        dataset: &OfflineDataset,
        v: BiasBound,
        schedule: DeltaSchedule,
    ) -> Result<Self> {
        let k = dataset.k();
        if k == 0 {
            return Err(Error::invalid("policy needs at least one arm"));
        }
        if v.len() != k {
            return Err(Error::invalid(format!(
                "bias bound has {} entries for {k} arms",
                v.len()
            )));
        }
        let t_s = dataset.counts();
        let offline_means = dataset.means().to_vec();
        let (n, r_hat) = match kind {
            PolicyKind::MonUcbPooled => (
                t_s.clone(),
                offline_means.iter().map(|m| m.unwrap_or(0.0)).collect(),
            ),
            _ => (vec![0; k], vec![0.0; k]),
        };
        Ok(PolicyState {
            kind,
            n,
            r_hat,
            pulls: vec![0; k],
            t: 1,
            schedule,
            v,
            offline_means,
            t_s,
        })
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.n.len()
    }

    /// Next round to play (1-based).
    pub fn round(&self) -> u64 {
        self.t
    }

    pub fn counts(&self) -> &[u64] {
        &self.n
    }

    pub fn means(&self) -> &[f64] {
        &self.r_hat
    }

    pub fn pulls(&self) -> &[u64] {
        &self.pulls
    }

    pub fn offline_counts(&self) -> &[u64] {
        &self.t_s
    }

    pub fn offline_means(&self) -> &[Option<f64>] {
        &self.offline_means
    }

    pub fn bias_bound(&self) -> &BiasBound {
        &self.v
    }

    pub fn schedule(&self) -> DeltaSchedule {
        self.schedule
    }

    /// `δ_t` for the next round.
    pub fn current_delta(&self) -> f64 {
        self.schedule.delta_t(self.t, self.k())
    }

    /// Overwrite the running statistics, e.g. to evaluate the indices of a
    /// synthetic state. Online pulls are set to the given counts.
    pub fn set_statistics(&mut self, n: Vec<u64>, r_hat: Vec<f64>, t: u64) -> Result<()> {
        if n.len() != self.k() || r_hat.len() != self.k() || t == 0 {
            return Err(Error::invalid("statistics do not match the policy shape"));
        }
        self.pulls = n.clone();
        self.n = n;
        self.r_hat = r_hat;
        self.t = t;
        Ok(())
    }

    fn stats(&self, a: usize) -> ArmStats {
        ArmStats {
            n: self.n[a],
            r_hat: self.r_hat[a],
            t_s: self.t_s[a],
            offline_mean: self.offline_means[a],
            v: self.v.get(a),
        }
    }

    /// Indices at the current round. Every arm must have been pulled online.
    pub fn compute_indices(&self) -> Result<IndexPair> {
        if let Some(a) = self.pulls.iter().position(|&p| p == 0) {
            return Err(Error::Contract(format!(
                "arm {a} has not been initialized"
            )));
        }
        let k = self.k();
        let log2 = log_term(self.t, self.current_delta());
        let mut out = IndexPair {
            ucb: Vec::with_capacity(k),
            ucb_s: Vec::with_capacity(k),
            rad: Vec::with_capacity(k),
            rad_s: Vec::with_capacity(k),
        };
        for a in 0..k {
            let mut idx = match self.kind {
                PolicyKind::MonUcbPooled => {
                    let rad = (log2 / self.n[a] as f64).sqrt();
                    ArmIndex {
                        ucb: self.r_hat[a] + rad,
                        ucb_s: f64::INFINITY,
                        rad,
                        rad_s: f64::INFINITY,
                    }
                }
                _ => arm_index_from_log(log2, self.stats(a)),
            };
            match self.kind {
                PolicyKind::PureUcb => idx.ucb_s = f64::INFINITY,
                PolicyKind::UcbSOnly => idx.ucb = f64::INFINITY,
                _ => {}
            }
            out.ucb.push(idx.ucb);
            out.ucb_s.push(idx.ucb_s);
            out.rad.push(idx.rad);
            out.rad_s.push(idx.rad_s);
        }
        Ok(out)
    }

    /// Arm to play given the indices: round-robin for the first `K` rounds,
    /// then the lowest-index maximizer of `min{UCB, UCB^S}`.
    pub fn select_arm(&self, indices: &IndexPair) -> usize {
        if self.t <= self.k() as u64 {
            return (self.t - 1) as usize;
        }
        argmax_lowest(indices.ucb.iter().zip(&indices.ucb_s).map(|(u, s)| u.min(*s)))
    }

    /// Arm to play at the current round.
    pub fn next_arm(&self) -> usize {
        if self.t <= self.k() as u64 {
            return (self.t - 1) as usize;
        }
        let indices = self
            .compute_indices()
            .expect("round-robin initialization pulls every arm");
        self.select_arm(&indices)
    }

    /// Fold the reward of `arm` into its running mean and advance the round.
    pub fn update(&mut self, arm: usize, reward: f64) {
        let n = self.n[arm] as f64;
        self.r_hat[arm] = n * self.r_hat[arm] / (n + 1.0) + reward / (n + 1.0);
        self.n[arm] += 1;
        self.pulls[arm] += 1;
        self.t += 1;
    }
}

/// Construct a fresh policy state.
pub fn init_policy(
    kind: PolicyKind,
    dataset: &OfflineDataset,
    v: BiasBound,
    schedule: DeltaSchedule,
) -> Result<PolicyState> {
    PolicyState::new(kind, dataset, v, schedule)
}

/// Whether the accurate-estimation event holds at round `t` with confidence
/// `dt`, judged against the true means of `instance`.
///
/// For every arm both envelopes must hold:
/// `μ_on ≤ UCB ≤ μ_on + 2 rad` and
/// `μ_on ≤ UCB^S ≤ μ_on + rad^S + sqrt(2 log(2t/δ_t)/(N+T_S)) + T_S(μ_off − μ_on)/(N+T_S)`.
/// The indices are recomputed from the state's online statistics with the
/// MIN-UCB formulas, whatever the state's kind; pooled MonUCB states are rejected.
pub fn xi_holds(instance: &MabInstance, state: &PolicyState, t: u64, dt: f64) -> Result<bool> {
    if state.kind == PolicyKind::MonUcbPooled {
        return Err(Error::Contract(
            "pooled MonUCB statistics do not define the warm-start index".into(),
        ));
    }
    if instance.k() != state.k() {
        return Err(Error::invalid("instance and state disagree on K"));
    }
    if let Some(a) = state.n.iter().position(|&n| n == 0) {
        return Err(Error::Contract(format!("arm {a} has not been initialized")));
    }
    let log2 = log_term(t, dt);
    Ok((0..state.k()).all(|a| {
        let p = instance.arms()[a];
        let s = state.stats(a);
        let idx = arm_index_from_log(log2, s);
        let vanilla = p.mu_on <= idx.ucb && idx.ucb <= p.mu_on + 2.0 * idx.rad;
        let pooled = s.n as f64 + s.t_s as f64;
        let upper = p.mu_on
            + idx.rad_s
            + (log2 / pooled).sqrt()
            + s.t_s as f64 * (p.mu_off - p.mu_on) / pooled;
        let warm = p.mu_on <= idx.ucb_s && idx.ucb_s <= upper;
        vanilla && warm
    }))
}

/// Online count beyond which a sub-optimal arm can no longer be selected
/// while the accurate-estimation event holds:
/// `32 log(4 K t⁴)/Δ² − T_S · max{1 − ω/Δ, 0}²`.
pub fn elimination_threshold(k: usize, t: u64, gap: f64, t_s: u64, omega: f64) -> f64 {
    let t = t as f64;
    let factor = (1.0 - omega / gap).max(0.0);
    32.0 * (4.0 * k as f64 * t.powi(4)).ln() / (gap * gap) - t_s as f64 * factor * factor
}
