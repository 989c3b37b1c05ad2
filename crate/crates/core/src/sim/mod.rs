//! Seeded trials, parallel multi-trial experiments and result files.
//!
//! Every trial derives its randomness from one root seed: the offline dataset
//! from the offline streams, online rewards from one stream per arm. Trial `i`
//! of an experiment uses [`rng::trial_seed`]`(seed, i)` in every cell, so
//! policies and parameter values are compared on common random numbers and the
//! worker count never changes a result.

pub mod presets;

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::comb::{comb_regret, min_comb_ucb_round, optimal_value, Action, CombInstance, CombPolicyState, OracleSpec, RewardModel};
use crate::error::{Error, Result};
use crate::io::{fmt_sig9, write_atomic};
use crate::model::{gap_profile, sample_offline, validate_bias_bound, BiasBound, MabInstance, OnlineRewards};
use crate::policy::{DeltaSchedule, PolicyKind, PolicyState};
use crate::rng::{self, purpose};

/// What a trial plays.
#[derive(Debug, Clone)]
pub enum Problem {
    Mab { instance: MabInstance, policy: PolicyKind },
    /// MIN-COMB-UCB on a combinatorial instance.
    Comb {
        instance: CombInstance,
        model: RewardModel,
        oracle: OracleSpec,
    },
}

impl Problem {
    pub fn base(&self) -> &MabInstance {
        match self {
            Problem::Mab { instance, .. } => instance,
            Problem::Comb { instance, .. } => instance.base(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub problem: Problem,
    pub bias: BiasBound,
    pub schedule: DeltaSchedule,
    pub seed: u64,
    /// Run even when the bias bound is not valid for the instance.
    pub allow_invalid_bias: bool,
    pub record_actions: bool,
}

impl TrialConfig {
    pub fn mab(instance: MabInstance, policy: PolicyKind, bias: BiasBound) -> Self {
        TrialConfig {
            problem: Problem::Mab { instance, policy },
            bias,
            schedule: DeltaSchedule::InstanceDependent,
            seed: 0,
            allow_invalid_bias: false,
            record_actions: false,
        }
    }

    pub fn comb(instance: CombInstance, model: RewardModel, oracle: OracleSpec, bias: BiasBound) -> Self {
        TrialConfig {
            problem: Problem::Comb { instance, model, oracle },
            bias,
            schedule: DeltaSchedule::InstanceDependent,
            seed: 0,
            allow_invalid_bias: false,
            record_actions: false,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Check the bias bound; errors unless it is valid or explicitly allowed.
    pub fn validate(&self) -> Result<()> {
        let valid = validate_bias_bound(self.problem.base(), &self.bias)?;
        if !valid && !self.allow_invalid_bias {
            return Err(Error::precondition(
                "bias bound is not valid for the instance (allow it explicitly for robustness runs)",
            ));
        }
        Ok(())
    }
}

/// Actions played in a trial.
#[derive(Debug, Clone, PartialEq)]
pub enum ActionLog {
    Arms(Vec<usize>),
    Actions(Vec<Action>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    /// Cumulative pseudo-regret after each round.
    pub trajectory: Vec<f64>,
    /// Online pulls per (base) arm.
    pub pulls: Vec<u64>,
    pub actions: Option<ActionLog>,
    /// True when the combinatorial benchmark came from an approximate oracle.
    pub approximate: bool,
}

impl TrialResult {
    pub fn final_regret(&self) -> f64 {
        self.trajectory.last().copied().unwrap_or(0.0)
    }
}

/// Run one trial with the offline data and online rewards of `config.seed`.
pub fn run_trial(config: &TrialConfig) -> Result<TrialResult> {
    run_seeded(config, config.seed, config.seed)
}

fn run_seeded(config: &TrialConfig, seed: u64, offline_seed: u64) -> Result<TrialResult> {
    config.validate()?;
    match &config.problem {
        Problem::Mab { instance, policy } => run_mab(config, instance, *policy, seed, offline_seed),
        Problem::Comb { instance, model, oracle } => {
            run_comb(config, instance, model, oracle, seed, offline_seed)
        }
    }
}

fn run_mab(
    config: &TrialConfig,
    instance: &MabInstance,
    policy: PolicyKind,
    seed: u64,
    offline_seed: u64,
) -> Result<TrialResult> {
    let data = sample_offline(instance, offline_seed);
    let mut state = PolicyState::new(policy, &data, config.bias.clone(), config.schedule)?;
    let mut rewards = OnlineRewards::new(instance, seed);
    let gaps = gap_profile(instance);
    let horizon = instance.horizon() as usize;
    let mut trajectory = Vec::with_capacity(horizon);
    let mut log = config.record_actions.then(|| Vec::with_capacity(horizon));
    let mut regret = 0.0;
    for _ in 0..horizon {
        let arm = state.next_arm();
        let r = rewards.draw(instance, arm);
        state.update(arm, r);
        regret += gaps.delta[arm];
        trajectory.push(regret);
        if let Some(l) = log.as_mut() {
            l.push(arm);
        }
    }
    Ok(TrialResult {
        trajectory,
        pulls: state.pulls().to_vec(),
        actions: log.map(ActionLog::Arms),
        approximate: false,
    })
}

fn run_comb(
    config: &TrialConfig,
    instance: &CombInstance,
    model: &RewardModel,
    oracle: &OracleSpec,
    seed: u64,
    offline_seed: u64,
) -> Result<TrialResult> {
    let base = instance.base();
    let data = sample_offline(base, offline_seed);
    let mut state = CombPolicyState::new(&data, config.bias.clone(), config.schedule)?;
    let mut rewards = OnlineRewards::new(base, seed);
    let opt = optimal_value(instance, model)?;
    let target = oracle.alpha() * oracle.beta() * opt.value;
    let mu = base.mu_on();
    let horizon = instance.horizon() as usize;
    let mut trajectory = Vec::with_capacity(horizon);
    let mut log = config.record_actions.then(|| Vec::with_capacity(horizon));
    let mut regret = 0.0;
    for _ in 0..horizon {
        let action = min_comb_ucb_round(&mut state, instance, model, oracle, &mut rewards)?;
        regret += target - model.evaluate(instance, &mu, &action);
        trajectory.push(regret);
        if let Some(l) = log.as_mut() {
            l.push(action);
        }
    }
    Ok(TrialResult {
        trajectory,
        pulls: state.counts().to_vec(),
        actions: log.map(ActionLog::Actions),
        approximate: opt.approximate,
    })
}

/// Scaled regret of a logged combinatorial run, recomputed from its actions.
pub fn scaled_regret(actions: &[Action], config: &TrialConfig) -> Result<f64> {
    match &config.problem {
        Problem::Comb { instance, model, oracle } => Ok(comb_regret(actions, instance, model, oracle)?.value),
        Problem::Mab { .. } => Err(Error::invalid("scaled regret applies to combinatorial runs")),
    }
}

/// One line of a sweep: a policy label at a parameter value.
#[derive(Debug, Clone)]
pub struct Cell {
    pub policy: String,
    pub param: f64,
    pub config: TrialConfig,
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub name: String,
    /// Name of the swept parameter, used as the plot's x label.
    pub param_name: String,
    pub cells: Vec<Cell>,
    pub trials: u64,
    pub seed: u64,
    /// Share one offline dataset across all trials instead of resampling.
    pub fixed_dataset: bool,
    pub keep_trajectories: bool,
}

impl Experiment {
    pub fn new(name: impl Into<String>, param_name: impl Into<String>, cells: Vec<Cell>) -> Self {
        Experiment {
            name: name.into(),
            param_name: param_name.into(),
            cells,
            trials: 50,
            seed: 0,
            fixed_dataset: false,
            keep_trajectories: false,
        }
    }

    pub fn trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub policy: String,
    pub param: f64,
    pub mean: f64,
    /// Unbiased sample standard deviation; 0 for a single trial.
    pub std: f64,
    pub trials: u64,
    /// False when `std` is the single-trial placeholder.
    pub std_defined: bool,
}

impl SummaryRow {
    /// Standard error of the mean.
    pub fn se(&self) -> f64 {
        self.std / (self.trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    pub policy: String,
    pub param: f64,
    pub trial: u64,
    pub final_regret: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub policy: String,
    pub param: f64,
    pub trial: u64,
    pub cum_regret: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub name: String,
    pub param_name: String,
    pub summary: Vec<SummaryRow>,
    pub raw: Vec<RawRow>,
    pub trajectories: Option<Vec<TrajectoryRow>>,
}

impl ExperimentResult {
    pub fn row(&self, policy: &str, param: f64) -> Option<&SummaryRow> {
        self.summary.iter().find(|r| r.policy == policy && r.param == param)
    }
}

/// Mean and unbiased standard deviation; the deviation of one value is 0.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Run every cell for every trial on `workers` threads (0 = all cores).
/// Results are merged in (cell, trial) order.
pub fn run_experiment(exp: &Experiment, workers: usize) -> Result<ExperimentResult> {
    if exp.trials == 0 {
        return Err(Error::invalid("an experiment needs at least one trial"));
    }
    for cell in &exp.cells {
        cell.config.validate()?;
    }
    let jobs: Vec<(usize, u64)> = (0..exp.cells.len())
        .flat_map(|c| (0..exp.trials).map(move |t| (c, t)))
        .collect();
    let fixed = rng::child_seed(exp.seed, purpose::FIXED_DATASET, 0);
    let run = |&(c, t): &(usize, u64)| -> Result<TrialResult> {
        let seed = rng::trial_seed(exp.seed, t);
        let offline = if exp.fixed_dataset { fixed } else { seed };
        let mut r = run_seeded(&exp.cells[c].config, seed, offline)?;
        if !exp.keep_trajectories {
            r.trajectory = vec![r.final_regret()];
        }
        Ok(r)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let results: Vec<TrialResult> = pool.install(|| jobs.par_iter().map(run).collect::<Result<_>>())?;

    let mut summary = Vec::with_capacity(exp.cells.len());
    let mut raw = Vec::with_capacity(jobs.len());
    let mut trajectories = exp.keep_trajectories.then(Vec::new);
    for ((c, t), r) in jobs.iter().zip(results) {
        let cell = &exp.cells[*c];
        raw.push(RawRow {
            policy: cell.policy.clone(),
            param: cell.param,
            trial: *t,
            final_regret: r.final_regret(),
        });
        if let Some(tr) = trajectories.as_mut() {
            tr.push(TrajectoryRow {
                policy: cell.policy.clone(),
                param: cell.param,
                trial: *t,
                cum_regret: r.trajectory,
            });
        }
    }
    for (c, cell) in exp.cells.iter().enumerate() {
        let start = c * exp.trials as usize;
        let finals: Vec<f64> = raw[start..start + exp.trials as usize]
            .iter()
            .map(|r| r.final_regret)
            .collect();
        let (mean, std) = mean_std(&finals);
        summary.push(SummaryRow {
            policy: cell.policy.clone(),
            param: cell.param,
            mean,
            std,
            trials: exp.trials,
            std_defined: exp.trials > 1,
        });
    }
    Ok(ExperimentResult {
        name: exp.name.clone(),
        param_name: exp.param_name.clone(),
        summary,
        raw,
        trajectories,
    })
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.into_inner()
        .map_err(|e| Error::Csv(csv::Error::from(e.into_error())))
}

impl ExperimentResult {
    pub fn summary_csv(&self) -> Result<Vec<u8>> {
        csv_bytes(
            &["experiment", "policy", "param", "mean", "std", "trials"],
            self.summary.iter().map(|r| {
                vec![
                    self.name.clone(),
                    r.policy.clone(),
                    fmt_sig9(r.param),
                    fmt_sig9(r.mean),
                    fmt_sig9(r.std),
                    r.trials.to_string(),
                ]
            }),
        )
    }

    pub fn raw_csv(&self) -> Result<Vec<u8>> {
        csv_bytes(
            &["experiment", "policy", "param", "trial", "final_regret"],
            self.raw.iter().map(|r| {
                vec![
                    self.name.clone(),
                    r.policy.clone(),
                    fmt_sig9(r.param),
                    r.trial.to_string(),
                    fmt_sig9(r.final_regret),
                ]
            }),
        )
    }

    pub fn trajectories_csv(&self) -> Result<Option<Vec<u8>>> {
        let Some(rows) = &self.trajectories else { return Ok(None) };
        csv_bytes(
            &["experiment", "policy", "param", "trial", "t", "cum_regret"],
            rows.iter().flat_map(|r| {
                r.cum_regret.iter().enumerate().map(move |(i, x)| {
                    vec![
                        self.name.clone(),
                        r.policy.clone(),
                        fmt_sig9(r.param),
                        r.trial.to_string(),
                        (i + 1).to_string(),
                        fmt_sig9(*x),
                    ]
                })
            }),
        )
        .map(Some)
    }

    /// Write `<name>_summary.csv`, `<name>_raw.csv` and, when kept,
    /// `<name>_trajectories.csv` into `dir`. Returns the paths written.
    pub fn write_csv(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        let mut put = |suffix: &str, bytes: Vec<u8>| -> Result<()> {
            let path = dir.join(format!("{}_{suffix}.csv", self.name));
            write_atomic(&path, &bytes)?;
            written.push(path);
            Ok(())
        };
        put("summary", self.summary_csv()?)?;
        put("raw", self.raw_csv()?)?;
        if let Some(bytes) = self.trajectories_csv()? {
            put("trajectories", bytes)?;
        }
        Ok(written)
    }
}
