//! Closed-form analytic quantities: discrepancy, saving terms, the
//! water-filling `τ*`, regret-bound profiles and the two-instance
//! impossibility construction.
//!
//! Only [`dep_upper_explicit`] carries explicit constants. The other profiles
//! are order-level: every hidden constant is set to 1 and both branches of a
//! `min{…}` are reported.

mod waterfill;

pub use waterfill::{tau_star_waterfill, Rational, WaterFill};

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::comb::{CombInstance, RewardModel};
use crate::error::{Error, Result};
use crate::io::{fmt_opt, fmt_sig9};
use crate::model::{gap_profile, ArmPair, BiasBound, MabInstance};

/// Parameters of the lower-bound and high-probability quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundQuery {
    /// `ε ∈ (0, 1]`.
    pub epsilon: f64,
    /// Consistency constant `C > 0`.
    pub consistency_c: f64,
    /// Consistency exponent `p ∈ (0, 1)`.
    pub consistency_p: f64,
    /// Confidence level `δ ∈ (0, 1)` of the instance-independent bounds.
    pub delta: f64,
}

impl Default for BoundQuery {
    fn default() -> Self {
        BoundQuery {
            epsilon: 0.5,
            consistency_c: 1.0,
            consistency_p: 0.5,
            delta: 0.1,
        }
    }
}

impl BoundQuery {
    pub fn validate(&self) -> Result<()> {
        let open01 = |x: f64| x > 0.0 && x < 1.0;
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::invalid(format!("epsilon {} outside (0, 1]", self.epsilon)));
        }
        if !(self.consistency_c > 0.0 && self.consistency_c.is_finite()) {
            return Err(Error::invalid(format!("C {} must be positive", self.consistency_c)));
        }
        if !open01(self.consistency_p) {
            return Err(Error::invalid(format!("p {} outside (0, 1)", self.consistency_p)));
        }
        if !open01(self.delta) {
            return Err(Error::invalid(format!("delta {} outside (0, 1)", self.delta)));
        }
        Ok(())
    }
}

/// Discrepancy `ω(a) = V(a) + μ_off(a) − μ_on(a)`.
pub fn omega(v: f64, mu_off: f64, mu_on: f64) -> f64 {
    v + (mu_off - mu_on)
}

fn clamp_sq(x: f64) -> f64 {
    let c = x.max(0.0);
    c * c
}

/// `T_S · Δ · max{1 − ω/Δ, 0}²`; defined for sub-optimal arms only.
pub fn sav0(t_s: u64, gap: f64, omega: f64) -> Result<f64> {
    if !(gap > 0.0) {
        return Err(Error::invalid(format!("saving needs a positive gap, got {gap}")));
    }
    Ok(t_s as f64 * gap * clamp_sq(1.0 - omega / gap))
}

/// `(Sav_ε, κ_ε)` of the lower bound for `(C, p)`-consistent policies.
pub fn sav_eps_and_kappa(query: &BoundQuery, t_s: u64, gap: f64, omega: f64) -> Result<(f64, f64)> {
    if !(gap > 0.0) {
        return Err(Error::invalid(format!("saving needs a positive gap, got {gap}")));
    }
    if !(query.epsilon > 0.0 && query.epsilon <= 1.0) {
        return Err(Error::invalid(format!("epsilon {} outside (0, 1]", query.epsilon)));
    }
    let e1 = 1.0 + query.epsilon;
    let sav = t_s as f64 * gap * clamp_sq(1.0 - omega / (e1 * gap));
    let kappa = (query.epsilon * gap / (8.0 * query.consistency_c)).ln() / (2.0 * e1 * e1 * gap);
    Ok((sav, kappa))
}

fn check_bias_len(instance: &MabInstance, v: &BiasBound) -> Result<()> {
    if v.len() != instance.k() {
        return Err(Error::invalid(format!(
            "bias bound has {} entries for {} arms",
            v.len(),
            instance.k()
        )));
    }
    Ok(())
}

fn omegas(instance: &MabInstance, v: &BiasBound) -> Vec<f64> {
    instance
        .arms()
        .iter()
        .zip(v.values())
        .map(|(p, &v)| omega(v, p.mu_off, p.mu_on))
        .collect()
}

/// Fully explicit instance-dependent upper bound for MIN-UCB with `δ_t = 1/(2Kt²)`:
/// `(π²/6) Δ_max + Σ_{Δ(a)>0} max{32 ln(4KT⁴)/Δ(a) − Sav₀(a), Δ(a)}`.
pub fn dep_upper_explicit(instance: &MabInstance, v: &BiasBound) -> Result<f64> {
    check_bias_len(instance, v)?;
    let gaps = gap_profile(instance);
    let k = instance.k() as f64;
    let t = instance.horizon() as f64;
    let log_term = 32.0 * (4.0 * k * t.powi(4)).ln();
    let om = omegas(instance, v);
    let mut sum = PI * PI / 6.0 * gaps.delta_max();
    for (a, &d) in gaps.delta.iter().enumerate() {
        if d > 0.0 {
            let s = sav0(instance.offline_counts()[a], d, om[a])?;
            sum += (log_term / d - s).max(d);
        }
    }
    Ok(sum)
}

/// Both branches of an order-level `min{·, ·}` bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branches {
    pub ucb: f64,
    pub warm: f64,
}

impl Branches {
    pub fn min(&self) -> f64 {
        self.ucb.min(self.warm)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta {delta} outside (0, 1)")));
    }
    Ok(())
}

/// Order-level instance-independent profile:
/// `sqrt(K T ln(T/δ))` versus `(sqrt(ln(T/δ)/τ*) + V_max) · T`.
pub fn indep_upper_profile(instance: &MabInstance, v: &BiasBound, delta: f64) -> Result<Branches> {
    check_bias_len(instance, v)?;
    check_delta(delta)?;
    let (k, t) = (instance.k() as u64, instance.horizon());
    if k < 2 || k > t {
        return Err(Error::precondition(format!(
            "instance-independent bound needs 2 <= K <= T, got K = {k}, T = {t}"
        )));
    }
    let tf = t as f64;
    let log = (tf / delta).ln();
    let tau = tau_star_waterfill(instance.offline_counts(), t)?.tau_star();
    Ok(Branches {
        ucb: (k as f64 * tf * log).sqrt(),
        warm: ((log / tau).sqrt() + v.max()) * tf,
    })
}

/// Order-level combinatorial instance-independent profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombIndepProfile {
    /// `τ*` at mass `T`.
    pub tau_star: f64,
    /// `τ*^C` at mass `mT`.
    pub tau_star_c: f64,
    pub t1: f64,
    pub t2: f64,
    /// `γ · min{T₁, T₂}`.
    pub general: f64,
    /// Linear-reward branches, when requested.
    pub linear: Option<Branches>,
}

pub fn comb_indep_upper_profile(
    instance: &MabInstance,
    v: &BiasBound,
    delta: f64,
    gamma: f64,
    rho: f64,
    m: usize,
    linear: bool,
) -> Result<CombIndepProfile> {
    check_bias_len(instance, v)?;
    check_delta(delta)?;
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::invalid(format!("rho {rho} outside (0, 1]")));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(format!("gamma {gamma} must be positive")));
    }
    if m == 0 || m > instance.k() {
        return Err(Error::invalid(format!("m = {m} outside 1..={}", instance.k())));
    }
    let t = instance.horizon();
    let (kf, tf, mf) = (instance.k() as f64, t as f64, m as f64);
    let log = (tf / delta).ln();
    let vmax = v.max();
    let tau = tau_star_waterfill(instance.offline_counts(), t)?.tau_star();
    let mass_c = t.checked_mul(m as u64).ok_or_else(|| Error::invalid("m·T overflows"))?;
    let tau_c = tau_star_waterfill(instance.offline_counts(), mass_c)?.tau_star();
    let t1 = (kf * log).powf(rho / 2.0) * tf.powf(1.0 - rho / 2.0);
    let t2 = (vmax.powf(rho) + log.powf(rho / 2.0) * tau.powf(-rho / 2.0)) * tf;
    let linear = linear.then(|| Branches {
        ucb: (mf * kf * tf * log).sqrt(),
        warm: ((log / tau_c).sqrt() + vmax) * mf * tf,
    });
    Ok(CombIndepProfile {
        tau_star: tau,
        tau_star_c: tau_c,
        t1,
        t2,
        general: gamma * t1.min(t2),
        linear,
    })
}

/// Action-level gaps of a linear combinatorial instance.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaMinProfile {
    /// Smallest gap of a sub-optimal action containing each arm; `None` when
    /// the arm lies in no sub-optimal action.
    pub delta_min: Vec<Option<f64>>,
    pub delta_max: f64,
    /// Base arms belonging to some optimal action.
    pub in_optimal: Vec<bool>,
}

/// Gaps up to this relative size count as zero (sums of means are inexact).
fn is_optimal_gap(gap: f64, r_star: f64) -> bool {
    gap <= 1e-12 * (1.0 + r_star.abs())
}

pub fn delta_min_profile(instance: &CombInstance, model: &RewardModel) -> Result<DeltaMinProfile> {
    if !model.is_linear() {
        return Err(Error::precondition("gap profile needs the linear reward model"));
    }
    let actions = instance.actions()?;
    let mu = instance.base().mu_on();
    let values: Vec<f64> = actions.iter().map(|a| a.arms.iter().map(|&i| mu[i]).sum()).collect();
    let r_star = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let k = instance.k();
    let mut delta_min: Vec<Option<f64>> = vec![None; k];
    let mut in_optimal = vec![false; k];
    let mut delta_max: f64 = 0.0;
    for (action, value) in actions.iter().zip(&values) {
        let gap = r_star - value;
        if is_optimal_gap(gap, r_star) {
            for &a in &action.arms {
                in_optimal[a] = true;
            }
            continue;
        }
        delta_max = delta_max.max(gap);
        for &a in &action.arms {
            delta_min[a] = Some(delta_min[a].map_or(gap, |d| d.min(gap)));
        }
    }
    Ok(DeltaMinProfile {
        delta_min,
        delta_max,
        in_optimal,
    })
}

/// `m · T_S · Δ_min · max{1 − ω/Δ_min, 0}²`.
pub fn sav_com(m: usize, t_s: u64, delta_min: f64, omega: f64) -> Result<f64> {
    Ok(m as f64 * sav0(t_s, delta_min, omega)?)
}

/// Order-level linear-reward instance-dependent bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CombDepBound {
    pub value: f64,
    pub sav_com: Vec<Option<f64>>,
    pub gaps: DeltaMinProfile,
}

/// `Σ_{a ∉ A*, Δ_min(a) defined} max{m ln T/Δ_min(a) − Sav^Com(a), Δ_max}`.
///
/// Arms that sit in an optimal action are left out of the sum.
pub fn comb_dep_upper(instance: &CombInstance, v: &BiasBound, model: &RewardModel) -> Result<CombDepBound> {
    check_bias_len(instance.base(), v)?;
    let gaps = delta_min_profile(instance, model)?;
    let base = instance.base();
    let om = omegas(base, v);
    let m = instance.m();
    let log_t = (instance.horizon() as f64).ln();
    let mut value = 0.0;
    let mut savings = vec![None; instance.k()];
    for a in 0..instance.k() {
        let Some(dm) = gaps.delta_min[a] else { continue };
        let s = sav_com(m, base.offline_counts()[a], dm, om[a])?;
        savings[a] = Some(s);
        if !gaps.in_optimal[a] {
            value += (m as f64 * log_t / dm - s).max(gaps.delta_max);
        }
    }
    Ok(CombDepBound {
        value,
        sav_com: savings,
        gaps,
    })
}

/// Inputs of the two-instance construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpossibilityParams {
    /// `β ∈ (0, 1/2)`.
    pub beta: f64,
    /// `ε ∈ (0, β)`.
    pub eps: f64,
    /// Consistency constant `C > 0`.
    pub c: f64,
    pub horizon: u64,
    /// Offline sample count given to both arms.
    pub offline_count: u64,
}

impl ImpossibilityParams {
    /// The admissibility threshold `T^ε / (4 ln T)`; `C` must lie strictly below it.
    pub fn threshold(&self) -> f64 {
        let t = self.horizon as f64;
        t.powf(self.eps) / (4.0 * t.ln())
    }
}

/// The pair `(I_P, I_Q)`: identical offline laws, different optimal arms.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpossibilityPair {
    pub p: MabInstance,
    pub q: MabInstance,
    pub threshold: f64,
    /// `T^{−β}`, the gap of `I_P`.
    pub gap_p: f64,
}

pub fn impossibility_pair(params: &ImpossibilityParams) -> Result<ImpossibilityPair> {
    let ImpossibilityParams { beta, eps, c, horizon, offline_count } = *params;
    if !(beta > 0.0 && beta < 0.5) {
        return Err(Error::invalid(format!("beta {beta} outside (0, 1/2)")));
    }
    if !(eps > 0.0 && eps < beta) {
        return Err(Error::invalid(format!("eps {eps} outside (0, beta)")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid(format!("C {c} must be positive")));
    }
    if horizon < 2 {
        return Err(Error::invalid("horizon must be at least 2"));
    }
    let threshold = params.threshold();
    if !(c < threshold) {
        return Err(Error::precondition(format!(
            "C = {} is not below T^eps/(4 ln T) = {}",
            fmt_sig9(c),
            fmt_sig9(threshold)
        )));
    }
    let t = horizon as f64;
    let gap_p = t.powf(-beta);
    let q2 = 1.0 / ((c * t.ln()).sqrt() * t.powf(beta - eps / 2.0)) - gap_p;
    if !(q2 > gap_p && gap_p > 0.0) {
        return Err(Error::Contract(format!(
            "constructed arm-2 mean {q2} does not exceed T^-beta = {gap_p}"
        )));
    }
    let counts = vec![offline_count; 2];
    let p = MabInstance::new(
        vec![ArmPair::new(0.0, 0.0), ArmPair::new(-gap_p, -gap_p)],
        counts.clone(),
        horizon,
    )?;
    let q = MabInstance::new(
        vec![ArmPair::new(0.0, 0.0), ArmPair::new(q2, -gap_p)],
        counts,
        horizon,
    )?;
    Ok(ImpossibilityPair { p, q, threshold, gap_p })
}

/// Every analytic quantity for one instance and bias bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub k: usize,
    pub horizon: u64,
    pub omega: Vec<f64>,
    pub gap: Vec<f64>,
    /// `None` on optimal arms.
    pub sav0: Vec<Option<f64>>,
    pub sav_eps: Vec<Option<f64>>,
    pub kappa_eps: Vec<Option<f64>>,
    pub dep_upper_explicit: f64,
    pub tau_star: f64,
    pub n_star: Vec<f64>,
    /// `None` when `K < 2` or `K > T`.
    pub indep: Option<Branches>,
    pub comb: Option<CombReport>,
}

/// Combinatorial part of a [`BoundReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct CombReport {
    pub m: usize,
    pub indep: CombIndepProfile,
    pub dep: Option<CombDepBound>,
}

impl BoundReport {
    pub fn new(instance: &MabInstance, v: &BiasBound, query: &BoundQuery) -> Result<Self> {
        check_bias_len(instance, v)?;
        query.validate()?;
        let gaps = gap_profile(instance);
        let om = omegas(instance, v);
        let t_s = instance.offline_counts();
        let mut sav0s = Vec::with_capacity(instance.k());
        let mut eps = Vec::with_capacity(instance.k());
        let mut kappas = Vec::with_capacity(instance.k());
        for a in 0..instance.k() {
            let d = gaps.delta[a];
            if d > 0.0 {
                sav0s.push(Some(sav0(t_s[a], d, om[a])?));
                let (s, k) = sav_eps_and_kappa(query, t_s[a], d, om[a])?;
                eps.push(Some(s));
                kappas.push(Some(k));
            } else {
                sav0s.push(None);
                eps.push(None);
                kappas.push(None);
            }
        }
        let wf = tau_star_waterfill(t_s, instance.horizon())?;
        let indep = match indep_upper_profile(instance, v, query.delta) {
            Ok(b) => Some(b),
            Err(Error::Precondition(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(BoundReport {
            k: instance.k(),
            horizon: instance.horizon(),
            omega: om,
            gap: gaps.delta,
            sav0: sav0s,
            sav_eps: eps,
            kappa_eps: kappas,
            dep_upper_explicit: dep_upper_explicit(instance, v)?,
            tau_star: wf.tau_star(),
            n_star: wf.n_star_f64(),
            indep,
            comb: None,
        })
    }

    /// Add the combinatorial quantities. The dependent bound is filled in for
    /// linear rewards only.
    #[allow(clippy::too_many_arguments)]
    pub fn with_comb(
        mut self,
        instance: &CombInstance,
        v: &BiasBound,
        model: &RewardModel,
        delta: f64,
    ) -> Result<Self> {
        let (gamma, rho) = model.smoothness(instance);
        let indep = comb_indep_upper_profile(
            instance.base(),
            v,
            delta,
            gamma,
            rho,
            instance.m(),
            model.is_linear(),
        )?;
        let dep = if model.is_linear() {
            Some(comb_dep_upper(instance, v, model)?)
        } else {
            None
        };
        self.comb = Some(CombReport {
            m: instance.m(),
            indep,
            dep,
        });
        Ok(self)
    }

    /// Flat `key=value` lines; per-arm values are comma-separated and `undef`
    /// marks quantities that do not exist for that arm.
    pub fn to_key_values(&self) -> String {
        let reals = |xs: &[f64]| xs.iter().map(|&x| fmt_sig9(x)).collect::<Vec<_>>().join(",");
        let opts = |xs: &[Option<f64>]| xs.iter().map(|&x| fmt_opt(x)).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("k", self.k.to_string());
        kv("t", self.horizon.to_string());
        kv("gap", reals(&self.gap));
        kv("omega", reals(&self.omega));
        kv("sav0", opts(&self.sav0));
        kv("sav_eps", opts(&self.sav_eps));
        kv("kappa_eps", opts(&self.kappa_eps));
        kv("dep_upper_explicit", fmt_sig9(self.dep_upper_explicit));
        kv("tau_star", fmt_sig9(self.tau_star));
        kv("n_star", reals(&self.n_star));
        kv("indep_profile", "order-level".into());
        kv("indep_branch_ucb", fmt_opt(self.indep.map(|b| b.ucb)));
        kv("indep_branch_warm", fmt_opt(self.indep.map(|b| b.warm)));
        kv("indep_min", fmt_opt(self.indep.map(|b| b.min())));
        if let Some(c) = &self.comb {
            kv("m", c.m.to_string());
            kv("tau_star_c", fmt_sig9(c.indep.tau_star_c));
            kv("comb_indep_t1", fmt_sig9(c.indep.t1));
            kv("comb_indep_t2", fmt_sig9(c.indep.t2));
            kv("comb_indep_general", fmt_sig9(c.indep.general));
            if let Some(l) = c.indep.linear {
                kv("comb_indep_linear_ucb", fmt_sig9(l.ucb));
                kv("comb_indep_linear_warm", fmt_sig9(l.warm));
                kv("comb_indep_linear_min", fmt_sig9(l.min()));
            }
            if let Some(d) = &c.dep {
                kv("delta_min", opts(&d.gaps.delta_min));
                kv("delta_max", fmt_sig9(d.gaps.delta_max));
                kv("sav_com", opts(&d.sav_com));
                kv("comb_dep_upper", fmt_sig9(d.value));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::ActionFamily;
    use approx::assert_relative_eq;

    #[test]
    fn discrepancy_and_savings() {
        assert_relative_eq!(omega(0.3, 0.3, 0.0), 0.6);
        assert_eq!(omega(0.0, 0.5, 0.5), 0.0);
        assert_eq!(sav0(1000, 1.0, 1.5).unwrap(), 0.0);
        assert_eq!(sav0(1000, 1.0, 0.0).unwrap(), 1000.0);
        assert_relative_eq!(sav0(1000, 1.0, 0.4).unwrap(), 360.0, max_relative = 1e-12);
        assert_eq!(sav0(1000, 1.0, f64::INFINITY).unwrap(), 0.0);
        assert!(sav0(10, 0.0, 0.0).is_err());
    }

    #[test]
    fn epsilon_saving_and_kappa() {
        let q = |eps, c| BoundQuery { epsilon: eps, consistency_c: c, ..BoundQuery::default() };
        let (s, _) = sav_eps_and_kappa(&q(1e-8, 1.0), 1000, 1.0, 0.4).unwrap();
        assert!((s - 360.0).abs() <= 1e-6 * 1000.0);
        assert_eq!(sav_eps_and_kappa(&q(1.0, 1.0), 1000, 1.0, 2.0).unwrap().0, 0.0);
        assert_eq!(sav_eps_and_kappa(&q(1.0, 0.125), 1000, 1.0, 0.0).unwrap().1, 0.0);
    }

    #[test]
    fn explicit_dependent_bound() {
        let flat = MabInstance::aligned(&[0.5, 0.5], vec![0, 0], 100).unwrap();
        assert_eq!(dep_upper_explicit(&flat, &BiasBound::infinite(2)).unwrap(), 0.0);

        let two = MabInstance::aligned(&[1.0, 0.0], vec![0, 0], 10_000).unwrap();
        let expect = PI * PI / 6.0 + 32.0 * (8e16f64).ln();
        let got = dep_upper_explicit(&two, &BiasBound::infinite(2)).unwrap();
        assert!((got - expect).abs() < 1e-9 && (got - 1247.11).abs() < 0.01);

        let warm = two.with_offline_counts(vec![0, 1_000_000]).unwrap();
        let got = dep_upper_explicit(&warm, &BiasBound::uniform(2, 0.0).unwrap()).unwrap();
        assert_relative_eq!(got, PI * PI / 6.0 + 1.0, max_relative = 1e-12);
    }

    #[test]
    fn independent_profile() {
        let mut mu = vec![0.0; 10];
        mu[0] = 1.0;
        let inst = MabInstance::aligned(&mu, vec![1000; 10], 10_000).unwrap();
        let b = indep_upper_profile(&inst, &BiasBound::uniform(10, 0.0).unwrap(), 0.1).unwrap();
        assert_relative_eq!(b.warm, 1e4 * ((1e5f64).ln() / 2000.0).sqrt(), max_relative = 1e-12);
        assert!((b.warm - 758.8).abs() < 0.1);

        let inf = indep_upper_profile(&inst, &BiasBound::infinite(10), 0.1).unwrap();
        assert_eq!(inf.warm, f64::INFINITY);
        assert_eq!(inf.min(), inf.ucb);

        let cold = inst.with_offline_counts(vec![0; 10]).unwrap();
        let b = indep_upper_profile(&cold, &BiasBound::uniform(10, 0.0).unwrap(), 0.1).unwrap();
        assert_relative_eq!(b.warm, b.ucb, max_relative = 1e-12);

        let wide = MabInstance::aligned(&mu, vec![0; 10], 5).unwrap();
        assert!(indep_upper_profile(&wide, &BiasBound::infinite(10), 0.1).is_err());
    }

    #[test]
    fn combinatorial_profiles_reduce() {
        let inst = MabInstance::aligned(&[1.0, 0.5, 0.2, 0.0], vec![30, 0, 400, 7], 10_000).unwrap();
        let v = BiasBound::uniform(4, 0.05).unwrap();
        let mab = indep_upper_profile(&inst, &v, 0.1).unwrap();
        let c = comb_indep_upper_profile(&inst, &v, 0.1, 1.0, 1.0, 1, true).unwrap();
        assert_relative_eq!(c.t1, mab.ucb, max_relative = 1e-12);
        let lin = c.linear.unwrap();
        assert_relative_eq!(lin.ucb, mab.ucb, max_relative = 1e-12);
        assert_relative_eq!(lin.warm, mab.warm, max_relative = 1e-12);
        assert_eq!(c.tau_star, c.tau_star_c);
        assert!(comb_indep_upper_profile(&inst, &v, 0.1, 1.0, 1.5, 1, true).is_err());
        assert!(comb_indep_upper_profile(&inst, &v, 0.1, 1.0, 0.0, 1, true).is_err());

        let cold = inst.with_offline_counts(vec![0; 4]).unwrap();
        let c = comb_indep_upper_profile(&cold, &v, 0.1, 1.0, 1.0, 2, true).unwrap();
        assert_eq!(c.tau_star_c, 5000.0);
    }

    fn comb(mu: &[f64], family: ActionFamily, t_s: u64) -> CombInstance {
        CombInstance::new(MabInstance::aligned(mu, vec![t_s; mu.len()], 1000).unwrap(), family).unwrap()
    }

    #[test]
    fn action_gaps() {
        let c = comb(&[1.0, 1.0, 0.0, 3.0], ActionFamily::MPath { m: 2 }, 0);
        let g = delta_min_profile(&c, &RewardModel::Linear).unwrap();
        assert_eq!(g.delta_min, vec![Some(1.0), Some(1.0), None, None]);
        assert_eq!(g.delta_max, 1.0);

        let single = comb(&[1.0, 2.0], ActionFamily::Explicit(vec![vec![0, 1]]), 0);
        let g = delta_min_profile(&single, &RewardModel::Linear).unwrap();
        assert_eq!(g.delta_min, vec![None, None]);
        assert_eq!(g.delta_max, 0.0);

        let top = comb(&[2.0, 1.0, 0.0], ActionFamily::Explicit(vec![vec![0], vec![1], vec![2]]), 0);
        let g = delta_min_profile(&top, &RewardModel::Linear).unwrap();
        assert_eq!(g.delta_min, vec![None, Some(1.0), Some(2.0)]);
        assert_eq!(g.delta_max, 2.0);
    }

    #[test]
    fn combinatorial_dependent_bound() {
        assert_eq!(sav_com(2, 50, 1.0, 0.0).unwrap(), 100.0);
        let top = comb(&[2.0, 1.0, 0.0], ActionFamily::Explicit(vec![vec![0], vec![1], vec![2]]), 50);
        let blind = comb_dep_upper(&top, &BiasBound::infinite(3), &RewardModel::Linear).unwrap();
        let cold = comb(&[2.0, 1.0, 0.0], ActionFamily::Explicit(vec![vec![0], vec![1], vec![2]]), 0);
        let none = comb_dep_upper(&cold, &BiasBound::uniform(3, 0.0).unwrap(), &RewardModel::Linear).unwrap();
        assert_relative_eq!(blind.value, none.value, max_relative = 1e-12);
        let ln = 1000f64.ln();
        assert_relative_eq!(none.value, (ln / 1.0).max(2.0) + (ln / 2.0).max(2.0), max_relative = 1e-12);
    }

    #[test]
    fn impossibility_construction() {
        let params = ImpossibilityParams { beta: 0.25, eps: 0.2, c: 0.5, horizon: 100_000_000, offline_count: 0 };
        let pair = impossibility_pair(&params).unwrap();
        assert!((pair.threshold - 0.540).abs() < 1e-3);
        let q2 = pair.q.arms()[1].mu_on;
        assert!((q2 - 0.0108).abs() < 1e-4 && q2 > 0.01);
        assert_eq!(pair.p.mu_off(), pair.q.mu_off());
        assert!(impossibility_pair(&ImpossibilityParams { c: 0.6, ..params }).is_err());
    }

    #[test]
    fn report_renders_every_key() {
        let inst = MabInstance::aligned(&[1.0, 0.0, 0.0], vec![100, 100, 0], 1000).unwrap();
        let r = BoundReport::new(&inst, &BiasBound::uniform(3, 0.1).unwrap(), &BoundQuery::default()).unwrap();
        let text = r.to_key_values();
        for key in ["omega=", "sav0=undef,", "tau_star=", "n_star=", "indep_branch_ucb=", "dep_upper_explicit="] {
            assert!(text.contains(key), "{key} missing in\n{text}");
        }
    }
}
