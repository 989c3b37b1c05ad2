//! Problem instances, offline datasets, bias bounds and gap primitives.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{self, purpose};

/// Offline and online mean rewards of one arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmPair {
    pub mu_on: f64,
    pub mu_off: f64,
}

impl ArmPair {
    pub fn new(mu_on: f64, mu_off: f64) -> Self {
        ArmPair { mu_on, mu_off }
    }
}

/// Reward law around each arm's mean.
///
/// `Gaussian` is `N(mean, 1)` in both phases. `ScaledBernoulli` draws
/// `scale[a] * Bernoulli(mean / scale[a])`, used for posted-price and
/// edge-activation arms.
#[derive(Debug, Clone, PartialEq)]
pub enum Noise {
    Gaussian,
    ScaledBernoulli { scales: Vec<f64> },
}

/// Which phase a draw belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Offline,
    Online,
}

/// A warm-start bandit instance: arms, offline sample counts `T_S(a)` and horizon `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct MabInstance {
    arms: Vec<ArmPair>,
    offline_counts: Vec<u64>,
    horizon: u64,
    noise: Noise,
}

impl MabInstance {
    pub fn new(arms: Vec<ArmPair>, offline_counts: Vec<u64>, horizon: u64) -> Result<Self> {
        Self::with_noise(arms, offline_counts, horizon, Noise::Gaussian)
    }

    pub fn with_noise(
        arms: Vec<ArmPair>,
        offline_counts: Vec<u64>,
        horizon: u64,
        noise: Noise,
    ) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::invalid("instance needs at least one arm"));
        }
        if horizon == 0 {
            return Err(Error::invalid("horizon must be positive"));
        }
        if offline_counts.len() != arms.len() {
            return Err(Error::invalid(format!(
                "{} offline counts for {} arms",
                offline_counts.len(),
                arms.len()
            )));
        }
        if let Some(a) = arms
            .iter()
            .position(|p| !p.mu_on.is_finite() || !p.mu_off.is_finite())
        {
            return Err(Error::invalid(format!("arm {a} has a non-finite mean")));
        }
        if let Noise::ScaledBernoulli { scales } = &noise {
            if scales.len() != arms.len() {
                return Err(Error::invalid("one Bernoulli scale per arm is required"));
            }
            for (a, (&s, p)) in scales.iter().zip(&arms).enumerate() {
                let ok = |m: f64| (0.0..=1.0).contains(&(m / s));
                if !(s.is_finite() && s > 0.0) || !ok(p.mu_on) || !ok(p.mu_off) {
                    return Err(Error::invalid(format!(
                        "arm {a}: means must lie in [0, scale] with scale > 0"
                    )));
                }
            }
        }
        Ok(MabInstance {
            arms,
            offline_counts,
            horizon,
            noise,
        })
    }

    /// Instance whose offline law equals the online one.
    pub fn aligned(mu_on: &[f64], offline_counts: Vec<u64>, horizon: u64) -> Result<Self> {
        let arms = mu_on.iter().map(|&m| ArmPair::new(m, m)).collect();
        Self::new(arms, offline_counts, horizon)
    }

    pub fn k(&self) -> usize {
        self.arms.len()
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn arms(&self) -> &[ArmPair] {
        &self.arms
    }

    pub fn offline_counts(&self) -> &[u64] {
        &self.offline_counts
    }

    pub fn noise(&self) -> &Noise {
        &self.noise
    }

    pub fn mu_on(&self) -> Vec<f64> {
        self.arms.iter().map(|p| p.mu_on).collect()
    }

    pub fn mu_off(&self) -> Vec<f64> {
        self.arms.iter().map(|p| p.mu_off).collect()
    }

    /// Same arms and offline counts with another horizon.
    pub fn with_horizon(&self, horizon: u64) -> Result<Self> {
        Self::with_noise(
            self.arms.clone(),
            self.offline_counts.clone(),
            horizon,
            self.noise.clone(),
        )
    }

    /// Same arms and horizon with other offline counts.
    pub fn with_offline_counts(&self, offline_counts: Vec<u64>) -> Result<Self> {
        Self::with_noise(
            self.arms.clone(),
            offline_counts,
            self.horizon,
            self.noise.clone(),
        )
    }

    /// One reward draw for `arm` in `phase`.
    pub fn draw<R: Rng + ?Sized>(&self, arm: usize, phase: Phase, rng: &mut R) -> f64 {
        let p = self.arms[arm];
        let mean = match phase {
            Phase::Offline => p.mu_off,
            Phase::Online => p.mu_on,
        };
        match &self.noise {
            Noise::Gaussian => mean + rng::standard_normal(rng),
            Noise::ScaledBernoulli { scales } => {
                let s = scales[arm];
                if rng.random::<f64>() < mean / s {
                    s
                } else {
                    0.0
                }
            }
        }
    }
}

/// Per-arm offline samples with cached means (`None` when `T_S(a) = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct OfflineDataset {
    samples: Vec<Vec<f64>>,
    means: Vec<Option<f64>>,
}

impl OfflineDataset {
    pub fn from_samples(samples: Vec<Vec<f64>>) -> Self {
        let means = samples
            .iter()
            .map(|s| (!s.is_empty()).then(|| s.iter().sum::<f64>() / s.len() as f64))
            .collect();
        OfflineDataset { samples, means }
    }

    /// Draw `T_S(a)` offline samples for every arm from the streams of `seed`.
    pub fn sample(instance: &MabInstance, seed: u64) -> Self {
        let samples = (0..instance.k())
            .map(|a| {
                let mut rng = rng::stream(seed, purpose::OFFLINE, a as u64);
                (0..instance.offline_counts()[a])
                    .map(|_| instance.draw(a, Phase::Offline, &mut rng))
                    .collect()
            })
            .collect();
        Self::from_samples(samples)
    }

    pub fn k(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self, arm: usize) -> &[f64] {
        &self.samples[arm]
    }

    pub fn counts(&self) -> Vec<u64> {
        self.samples.iter().map(|s| s.len() as u64).collect()
    }

    /// `X̂(a)`, undefined for arms without offline samples.
    pub fn mean(&self, arm: usize) -> Option<f64> {
        self.means[arm]
    }

    pub fn means(&self) -> &[Option<f64>] {
        &self.means
    }

    /// True when the per-arm sample counts equal `T_S`.
    pub fn matches(&self, offline_counts: &[u64]) -> bool {
        self.counts() == offline_counts
    }
}

/// Draw the offline dataset of `instance` under `seed`.
pub fn sample_offline(instance: &MabInstance, seed: u64) -> OfflineDataset {
    OfflineDataset::sample(instance, seed)
}

/// Online reward source: one independent stream per arm, so the `j`-th pull of
/// an arm sees the same draw whatever policy is running.
#[derive(Debug, Clone)]
pub struct OnlineRewards {
    streams: Vec<rng::Stream>,
}

impl OnlineRewards {
    pub fn new(instance: &MabInstance, seed: u64) -> Self {
        OnlineRewards {
            streams: (0..instance.k())
                .map(|a| rng::stream(seed, purpose::ONLINE, a as u64))
                .collect(),
        }
    }

    pub fn draw(&mut self, instance: &MabInstance, arm: usize) -> f64 {
        instance.draw(arm, Phase::Online, &mut self.streams[arm])
    }
}

/// Per-arm bias bound `V(a) ∈ [0, +∞]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasBound(Vec<f64>);

impl BiasBound {
    pub fn new(v: Vec<f64>) -> Result<Self> {
        if let Some(a) = v.iter().position(|x| x.is_nan() || *x < 0.0) {
            return Err(Error::invalid(format!(
                "bias bound for arm {a} must be non-negative"
            )));
        }
        Ok(BiasBound(v))
    }

    /// `V(a) = +∞` everywhere: no knowledge about the shift.
    pub fn infinite(k: usize) -> Self {
        BiasBound(vec![f64::INFINITY; k])
    }

    pub fn uniform(k: usize, v: f64) -> Result<Self> {
        Self::new(vec![v; k])
    }

    /// The tightest valid bound, `|μ_off(a) − μ_on(a)|`.
    pub fn exact(instance: &MabInstance) -> Self {
        BiasBound(
            instance
                .arms()
                .iter()
                .map(|p| (p.mu_off - p.mu_on).abs())
                .collect(),
        )
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, arm: usize) -> f64 {
        self.0[arm]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `V_max`.
    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }
}

/// Whether `bound` dominates the true offline/online shift on every arm.
pub fn validate_bias_bound(instance: &MabInstance, bound: &BiasBound) -> Result<bool> {
    if bound.len() != instance.k() {
        return Err(Error::invalid(format!(
            "bias bound has {} entries for {} arms",
            bound.len(),
            instance.k()
        )));
    }
    Ok(instance
        .arms()
        .iter()
        .zip(bound.values())
        .all(|(p, &v)| v >= (p.mu_off - p.mu_on).abs()))
}

/// Optimality gaps of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    pub delta: Vec<f64>,
    pub mu_star: f64,
    pub optimal_arms: Vec<usize>,
}

impl GapProfile {
    pub fn delta_max(&self) -> f64 {
        self.delta.iter().copied().fold(0.0, f64::max)
    }

    /// Pseudo-regret `Σ_a pulls[a] · Δ(a)`.
    pub fn regret_of_counts(&self, pulls: &[u64]) -> f64 {
        pulls
            .iter()
            .zip(&self.delta)
            .map(|(&n, d)| n as f64 * d)
            .sum()
    }
}

pub fn gap_profile(instance: &MabInstance) -> GapProfile {
    let mu_star = instance
        .arms()
        .iter()
        .map(|p| p.mu_on)
        .fold(f64::NEG_INFINITY, f64::max);
    let delta = instance.arms().iter().map(|p| mu_star - p.mu_on).collect();
    let optimal_arms = instance
        .arms()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.mu_on == mu_star)
        .map(|(a, _)| a)
        .collect();
    GapProfile {
        delta,
        mu_star,
        optimal_arms,
    }
}

/// `count · v` with the convention `0 · (+∞) = 0`.
#[inline]
pub fn scaled_bias(count: f64, v: f64) -> f64 {
    if count == 0.0 {
        0.0
    } else {
        count * v
    }
}
