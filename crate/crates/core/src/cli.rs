//! The `warmstart` command-line tool.
//!
//! Every run echoes a replay line to stderr; errors print one line
//! `error code=<tag> exit=<n>: <message>` and exit with 2 (usage),
//! 3 (precondition) or 4 (I/O, malformed file).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::bounds::{impossibility_pair, tau_star_waterfill, BoundQuery, BoundReport, ImpossibilityParams};
use crate::comb::{ActionFamily, CombInstance, Graph, RewardModel};
use crate::error::{Error, Result};
use crate::io::{fmt_sig9, write_atomic, InstanceFile};
use crate::model::BiasBound;
use crate::plot::render_plot;
use crate::policy::{DeltaSchedule, PolicyKind};
use crate::sim::presets::{self, comb_cells, mab_cells, Utility};
use crate::sim::{run_experiment, Experiment};

#[derive(Debug, Clone, Parser)]
#[command(name = "warmstart", version, about = "Bandits with possibly biased offline data")]
pub struct Cli {
    /// Root seed of every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = "runs")]
    pub out: PathBuf,
    /// Worker threads for trials (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Also write per-round cumulative regret.
    #[arg(long, global = true)]
    pub trajectories: bool,
    /// Also write an SVG plot per experiment.
    #[arg(long, global = true)]
    pub plot: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run a preset experiment or an instance file.
    Simulate(SimulateArgs),
    /// Print the analytic quantities of an instance as key=value lines.
    Bounds(BoundsArgs),
    /// Solve the water-filling problem for τ* and print n* as CSV.
    Tau(TauArgs),
    /// Emit instance files of a preset family.
    Preset(PresetArgs),
    /// Build the two-instance impossibility pair.
    Pair(PairArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// fig1a | fig1b | fig2 | pricing | impossibility | comb-mpath | influence
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub preset: Option<String>,
    /// Instance file (key = value).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    pub trials: u64,
    /// Comma-separated policies for instance files.
    #[arg(long, value_delimiter = ',', default_values_t = PolicyKind::ALL.map(|k| k.name().to_string()))]
    pub policies: Vec<String>,
    /// dep | indep
    #[arg(long, default_value = "dep")]
    pub schedule: String,
    /// Confidence level of the `indep` schedule.
    #[arg(long)]
    pub delta: Option<f64>,
    /// topm:M | mpath:M | influence:GRAPH[:BUDGET] | explicit:ACTIONS
    #[arg(long)]
    pub family: Option<String>,
    /// Share one offline dataset across trials.
    #[arg(long)]
    pub fixed_dataset: bool,
    /// Run even if the file's bias bound is not valid.
    #[arg(long)]
    pub allow_invalid_v: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    /// Consistency constant C.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Consistency exponent p.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Add the combinatorial quantities for this family.
    #[arg(long)]
    pub family: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct TauArgs {
    /// Offline counts, e.g. `1000x10` or `100,100,0` or `100x5,0x5`.
    #[arg(long)]
    pub ts: String,
    /// Horizon.
    #[arg(long)]
    pub t: String,
    /// Mass to distribute (defaults to T).
    #[arg(long)]
    pub mass: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct PresetArgs {
    /// optimistic | pessimistic | t-sweep | pricing | comb-mpath
    pub name: String,
    /// Grid of the swept parameter (v, T, shift or T_S).
    #[arg(long, value_delimiter = ',')]
    pub grid: Vec<f64>,
    /// Bias level of `t-sweep`.
    #[arg(long, default_value_t = 0.4)]
    pub v: f64,
    /// Write one file per grid point into --out instead of printing.
    #[arg(long)]
    pub write: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub c: f64,
    /// Horizon; scientific notation allowed.
    #[arg(long)]
    pub t: String,
    /// Offline samples per arm.
    #[arg(long, default_value_t = 0)]
    pub ts: u64,
}

/// Parse a non-negative integer that may be written as `1e8`.
pub fn parse_count(s: &str) -> Result<u64> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < u64::MAX as f64 => Ok(x as u64),
        _ => Err(Error::invalid(format!("`{s}` is not a non-negative integer"))),
    }
}

/// Parse offline counts: comma-separated entries, each `n` or `nxk` (k copies of n).
pub fn parse_counts(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('x') {
            Some((n, k)) => {
                let n = parse_count(n)?;
                let k = parse_count(k)?;
                out.extend(std::iter::repeat_n(n, k as usize));
            }
            None => out.push(parse_count(part)?),
        }
    }
    if out.is_empty() {
        return Err(Error::invalid("offline counts are empty"));
    }
    Ok(out)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Parse `topm:M | mpath:M | influence:GRAPH[:BUDGET] | explicit:ACTIONS`.
pub fn parse_family(spec: &str) -> Result<ActionFamily> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("family `{spec}` needs the form kind:arg")))?;
    let m = || -> Result<usize> {
        rest.parse()
            .map_err(|_| Error::Config(format!("family `{spec}` needs an integer size")))
    };
    match kind {
        "topm" => Ok(ActionFamily::TopM { m: m()? }),
        "mpath" => Ok(ActionFamily::MPath { m: m()? }),
        "explicit" => {
            let path = Path::new(rest);
            ActionFamily::parse_actions(&read_text(path)?, path)
        }
        "influence" => {
            let (file, budget) = match rest.rsplit_once(':') {
                Some((f, b)) if b.parse::<usize>().is_ok() => (f, b.parse().unwrap()),
                _ => (rest, 1),
            };
            let path = Path::new(file);
            let graph = Graph::parse(&read_text(path)?, path)?;
            Ok(ActionFamily::Influence { graph: Arc::new(graph), budget })
        }
        _ => Err(Error::Unknown { what: "family", name: kind.to_string() }),
    }
}

fn model_for(family: &ActionFamily) -> RewardModel {
    match family {
        ActionFamily::Influence { .. } => RewardModel::Influence,
        _ => RewardModel::Linear,
    }
}

/// The normalized argument echo that reproduces a run.
pub fn replay_line(cli: &Cli) -> String {
    let mut parts = vec![
        "warmstart".to_string(),
        format!("--seed {}", cli.seed),
        format!("--out {}", cli.out.display()),
        format!("--workers {}", cli.workers),
    ];
    if cli.trajectories {
        parts.push("--trajectories".into());
    }
    if cli.plot {
        parts.push("--plot".into());
    }
    let opt = |name: &str, v: &Option<String>| v.as_ref().map(|v| format!("--{name} {v}"));
    match &cli.command {
        Command::Simulate(a) => {
            parts.push("simulate".into());
            parts.extend(opt("preset", &a.preset));
            parts.extend(a.config.as_ref().map(|p| format!("--config {}", p.display())));
            parts.push(format!("--trials {}", a.trials));
            if a.config.is_some() {
                parts.push(format!("--policies {}", a.policies.join(",")));
                parts.push(format!("--schedule {}", a.schedule));
                parts.extend(a.delta.map(|d| format!("--delta {d}")));
                parts.extend(opt("family", &a.family));
                if a.allow_invalid_v {
                    parts.push("--allow-invalid-v".into());
                }
            }
            if a.fixed_dataset {
                parts.push("--fixed-dataset".into());
            }
        }
        Command::Bounds(a) => {
            parts.push(format!(
                "bounds --config {} --epsilon {} --c {} --p {} --delta {}",
                a.config.display(),
                a.epsilon,
                a.c,
                a.p,
                a.delta
            ));
            parts.extend(opt("family", &a.family));
        }
        Command::Tau(a) => {
            parts.push(format!("tau --ts {} --t {}", a.ts, a.t));
            parts.extend(opt("mass", &a.mass));
        }
        Command::Preset(a) => {
            let grid: Vec<String> = a.grid.iter().map(|x| x.to_string()).collect();
            parts.push(format!("preset {} --v {}", a.name, a.v));
            if !grid.is_empty() {
                parts.push(format!("--grid {}", grid.join(",")));
            }
            if a.write {
                parts.push("--write".into());
            }
        }
        Command::Pair(a) => parts.push(format!(
            "pair --beta {} --eps {} --c {} --t {} --ts {}",
            a.beta, a.eps, a.c, a.t, a.ts
        )),
    }
    parts.join(" ")
}

fn simulate(cli: &Cli, a: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let mut experiments = match (&a.preset, &a.config) {
        (Some(name), _) => presets::experiment_preset(name)?,
        (None, Some(path)) => vec![file_experiment(a, path)?],
        (None, None) => return Err(Error::Config("simulate needs --preset or --config".into())),
    };
    for exp in &mut experiments {
        exp.trials = a.trials;
        exp.seed = cli.seed;
        exp.fixed_dataset = a.fixed_dataset;
        exp.keep_trajectories = cli.trajectories;
    }
    for exp in &experiments {
        let result = run_experiment(exp, cli.workers)?;
        for path in result.write_csv(&cli.out)? {
            writeln!(out, "wrote {}", path.display()).map_err(|e| Error::io(&path, e))?;
        }
        if cli.plot {
            let path = cli.out.join(format!("{}.svg", result.name));
            match render_plot(&result.name, &result.param_name, &result.summary) {
                Some(svg) => {
                    write_atomic(&path, svg.as_bytes())?;
                    writeln!(out, "wrote {}", path.display()).map_err(|e| Error::io(&path, e))?;
                }
                None => eprintln!("warning: {} has nothing to plot", result.name),
            }
        }
    }
    Ok(())
}

fn file_experiment(a: &SimulateArgs, path: &Path) -> Result<Experiment> {
    let file = InstanceFile::read(path)?;
    let schedule = DeltaSchedule::from_tag(&a.schedule, a.delta)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into());
    let mut cells = match &a.family {
        None => {
            let kinds = a
                .policies
                .iter()
                .map(|p| p.parse::<PolicyKind>())
                .collect::<Result<Vec<_>>>()?;
            mab_cells(&file.instance, &file.bias, 0.0)
                .into_iter()
                .filter(|c| kinds.iter().any(|k| k.name() == c.policy))
                .collect::<Vec<_>>()
        }
        Some(spec) => {
            let family = parse_family(spec)?;
            let model = model_for(&family);
            let inst = CombInstance::new(file.instance.clone(), family)?;
            comb_cells(&inst, &model, &file.bias, 0.0)
        }
    };
    for c in &mut cells {
        c.config.schedule = schedule;
        c.config.allow_invalid_bias = a.allow_invalid_v;
    }
    Ok(Experiment::new(name, "param", cells))
}

fn bounds(a: &BoundsArgs, out: &mut dyn Write) -> Result<()> {
    let file = InstanceFile::read(&a.config)?;
    let query = BoundQuery {
        epsilon: a.epsilon,
        consistency_c: a.c,
        consistency_p: a.p,
        delta: a.delta,
    };
    let mut report = BoundReport::new(&file.instance, &file.bias, &query)?;
    if let Some(spec) = &a.family {
        let family = parse_family(spec)?;
        let model = model_for(&family);
        let inst = CombInstance::new(file.instance.clone(), family)?;
        report = report.with_comb(&inst, &file.bias, &model, a.delta)?;
    }
    out.write_all(report.to_key_values().as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn tau(a: &TauArgs, out: &mut dyn Write) -> Result<()> {
    let t_s = parse_counts(&a.ts)?;
    let t = parse_count(&a.t)?;
    let mass = a.mass.as_deref().map(parse_count).transpose()?.unwrap_or(t);
    let wf = tau_star_waterfill(&t_s, mass)?;
    let mut s = format!("tau_star={}\narm,t_s,n_star\n", fmt_sig9(wf.tau_star()));
    for (a, (ts, n)) in t_s.iter().zip(wf.n_star_f64()).enumerate() {
        s.push_str(&format!("{a},{ts},{}\n", fmt_sig9(n)));
    }
    out.write_all(s.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

/// Names accepted by the `preset` subcommand.
pub const INSTANCE_PRESETS: [&str; 5] = ["optimistic", "pessimistic", "t-sweep", "pricing", "comb-mpath"];

fn preset(cli: &Cli, a: &PresetArgs, out: &mut dyn Write) -> Result<()> {
    let default_grid: Vec<f64> = match a.name.as_str() {
        "optimistic" | "pessimistic" => presets::bias_grid(),
        "t-sweep" => presets::T_GRID.iter().map(|&t| t as f64).collect(),
        "pricing" => vec![0.0, 0.1, 0.2, 0.3],
        "comb-mpath" => vec![0.0, 1000.0],
        other => return Err(Error::Unknown { what: "preset", name: other.to_string() }),
    };
    let grid = if a.grid.is_empty() { default_grid } else { a.grid.clone() };
    let count = |x: f64| -> Result<u64> {
        if x >= 0.0 && x.fract() == 0.0 {
            Ok(x as u64)
        } else {
            Err(Error::invalid(format!("grid value {x} must be a non-negative integer")))
        }
    };
    for x in grid {
        let (instance, bias) = match a.name.as_str() {
            "optimistic" => presets::optimistic(x)?,
            "pessimistic" => presets::pessimistic(x)?,
            "t-sweep" => presets::t_sweep(a.v, count(x)?.max(1))?,
            "pricing" => {
                let prices: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
                presets::pricing(&prices, Utility::Uniform { lo: 0.0, hi: 1.0 }, x, 500, 10_000)?
            }
            _ => {
                let inst = presets::comb_mpath(10, 2, count(x)?, 10_000)?;
                (inst.base().clone(), BiasBound::uniform(10, 0.0)?)
            }
        };
        let text = InstanceFile { instance, bias }.render();
        let label = format!("{}_{}", a.name, fmt_sig9(x));
        if a.write {
            let path = cli.out.join(format!("{label}.txt"));
            write_atomic(&path, text.as_bytes())?;
            writeln!(out, "wrote {}", path.display()).map_err(|e| Error::io(&path, e))?;
        } else {
            write!(out, "# {label}\n{text}\n").map_err(|e| Error::io("<stdout>", e))?;
        }
    }
    Ok(())
}

fn pair(a: &PairArgs, out: &mut dyn Write) -> Result<()> {
    let params = ImpossibilityParams {
        beta: a.beta,
        eps: a.eps,
        c: a.c,
        horizon: parse_count(&a.t)?,
        offline_count: a.ts,
    };
    let threshold = params.threshold();
    let pair = impossibility_pair(&params)?;
    let fmt = |xs: Vec<f64>| xs.into_iter().map(fmt_sig9).collect::<Vec<_>>().join(",");
    let s = format!(
        "threshold={}\nhypothesis=C<threshold ({} < {})\nP.mu_on={}\nP.mu_off={}\nQ.mu_on={}\nQ.mu_off={}\ngap_p={}\n",
        fmt_sig9(threshold),
        fmt_sig9(a.c),
        fmt_sig9(threshold),
        fmt(pair.p.mu_on()),
        fmt(pair.p.mu_off()),
        fmt(pair.q.mu_on()),
        fmt(pair.q.mu_off()),
        fmt_sig9(pair.gap_p),
    );
    out.write_all(s.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

/// Execute a parsed command, writing human/machine output to `out`.
pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Simulate(a) => simulate(cli, a, out),
        Command::Bounds(a) => bounds(a, out),
        Command::Tau(a) => tau(a, out),
        Command::Preset(a) => preset(cli, a, out),
        Command::Pair(a) => pair(a, out),
    }
}

/// Parse `args`, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            if code != 0 {
                eprintln!("error code=usage exit=2: invalid arguments");
            }
            return code;
        }
    };
    eprintln!("# replay: {}", replay_line(&cli));
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match dispatch(&cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error code={} exit={}: {e}", e.code(), e.exit_code());
            e.exit_code()
        }
    }
}
