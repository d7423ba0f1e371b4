//! Experiment configuration: algorithm registry, objective specs and the
//! TOML file format.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use serde::Deserialize;

use crate::bpso::BpsoParams;
use crate::classic::{AbcConfig, AcoParams, AloParams, Mutation, SaSchedule};
use crate::error::{Error, Result};
use crate::grid::Symmetry;
use crate::objective::Objective;
use crate::objectives::{
    ExternalConfig, ExternalEvaluator, OneMax, Surrogate, SurrogateProfile, Trap,
};
use crate::rlbpso::{ActorCritic, ExemplarMode, ParamSource, RlbpsoParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Bpso,
    SaRandom,
    SaSwap,
    Abc,
    Aco,
    Alo,
    Rlbpso,
}

impl Algorithm {
    /// Canonical row order for comparison tables.
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Bpso,
        Algorithm::SaRandom,
        Algorithm::SaSwap,
        Algorithm::Abc,
        Algorithm::Aco,
        Algorithm::Alo,
        Algorithm::Rlbpso,
    ];

    /// One configuration per optimizer, SA with random mutation.
    pub const OPTIMIZERS: [Algorithm; 6] = [
        Algorithm::Bpso,
        Algorithm::SaRandom,
        Algorithm::Abc,
        Algorithm::Aco,
        Algorithm::Alo,
        Algorithm::Rlbpso,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bpso => "bpso",
            Algorithm::SaRandom => "sa-random",
            Algorithm::SaSwap => "sa-swap",
            Algorithm::Abc => "abc",
            Algorithm::Aco => "aco",
            Algorithm::Alo => "alo",
            Algorithm::Rlbpso => "rlbpso",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Algorithm::Bpso => "BPSO",
            Algorithm::SaRandom => "SA with Random Mutation",
            Algorithm::SaSwap => "SA with Swap Mutation",
            Algorithm::Abc => "ABC",
            Algorithm::Aco => "ACO",
            Algorithm::Alo => "ALO",
            Algorithm::Rlbpso => "RLBPSO",
        }
    }

    pub fn table_rank(self) -> usize {
        Self::ALL.iter().position(|&a| a == self).expect("listed")
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "sa" {
            return Ok(Algorithm::SaRandom);
        }
        Self::ALL
            .into_iter()
            .find(|a| a.name() == lower)
            .ok_or_else(|| {
                Error::config(format!(
                    "unknown algorithm `{s}` (expected one of: sa, {})",
                    Self::ALL.map(Algorithm::name).join(", ")
                ))
            })
    }
}

/// Which cost function to optimize.
#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveSpec {
    Surrogate {
        profile: String,
        symmetry: Symmetry,
    },
    OneMax {
        dim: usize,
    },
    Trap {
        dim: usize,
        block: usize,
    },
    External {
        command: String,
        dim: usize,
        timeout: Duration,
    },
}

impl Default for ObjectiveSpec {
    fn default() -> Self {
        ObjectiveSpec::Surrogate {
            profile: "idc1500".into(),
            symmetry: Symmetry::Mirror,
        }
    }
}

impl ObjectiveSpec {
    pub fn dim(&self) -> Result<usize> {
        Ok(match self {
            ObjectiveSpec::Surrogate { profile, .. } => {
                SurrogateProfile::by_name(profile)?.shape.free_cells()
            }
            ObjectiveSpec::OneMax { dim } | ObjectiveSpec::Trap { dim, .. } => *dim,
            ObjectiveSpec::External { dim, .. } => *dim,
        })
    }

    pub fn build(&self) -> Result<Box<dyn Objective>> {
        Ok(match self {
            ObjectiveSpec::Surrogate { profile, symmetry } => Box::new(Surrogate::new(
                SurrogateProfile::by_name(profile)?.with_symmetry(*symmetry),
            )?),
            ObjectiveSpec::OneMax { dim } => {
                check_dim(*dim)?;
                Box::new(OneMax::new(*dim))
            }
            ObjectiveSpec::Trap { dim, block } => {
                check_dim(*dim)?;
                Box::new(Trap::new(*dim, *block)?)
            }
            ObjectiveSpec::External {
                command,
                dim,
                timeout,
            } => {
                check_dim(*dim)?;
                let mut config = ExternalConfig::shell(command, *dim);
                config.timeout = *timeout;
                Box::new(ExternalEvaluator::new(config)?)
            }
        })
    }

    /// Override the symmetry of a surrogate; other kinds ignore it.
    pub fn with_symmetry(self, symmetry: Symmetry) -> Self {
        match self {
            ObjectiveSpec::Surrogate { profile, .. } => {
                ObjectiveSpec::Surrogate { profile, symmetry }
            }
            other => other,
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::config("objective dimension must be at least 1"));
    }
    Ok(())
}

impl fmt::Display for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveSpec::Surrogate { profile, symmetry } => {
                write!(f, "surrogate:{profile} ({symmetry})")
            }
            ObjectiveSpec::OneMax { dim } => write!(f, "onemax:{dim}"),
            ObjectiveSpec::Trap { dim, block } => write!(f, "trap:{dim}:{block}"),
            ObjectiveSpec::External { command, dim, .. } => write!(f, "external[{dim}]:{command}"),
        }
    }
}

const EXTERNAL_TIMEOUT: Duration = Duration::from_secs(600);

/// Command-line form: `surrogate[:profile]`, `onemax[:D]`, `trap[:D[:k]]`,
/// `external:<shell command>` (D = 96).
impl FromStr for ObjectiveSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = match s.split_once(':') {
            Some((k, r)) => (k, Some(r)),
            None => (s, None),
        };
        let num = |text: &str, what: &str| -> Result<usize> {
            text.parse().map_err(|_| {
                Error::config(format!(
                    "objective `{s}`: {what} must be an integer, got `{text}`"
                ))
            })
        };
        match kind {
            "surrogate" => {
                let profile = rest.unwrap_or("idc1500").to_string();
                SurrogateProfile::by_name(&profile)?;
                Ok(ObjectiveSpec::Surrogate {
                    profile,
                    symmetry: Symmetry::Mirror,
                })
            }
            "onemax" => Ok(ObjectiveSpec::OneMax {
                dim: rest
                    .map(|r| num(r, "dimension"))
                    .transpose()?
                    .unwrap_or(crate::IDC_BITS),
            }),
            "trap" => {
                let mut parts = rest
                    .map(|r| r.split(':').collect::<Vec<_>>())
                    .unwrap_or_default();
                if parts.len() > 2 {
                    return Err(Error::config(format!(
                        "objective `{s}`: expected trap[:D[:k]]"
                    )));
                }
                parts.resize(2, "");
                let dim = if parts[0].is_empty() {
                    crate::IDC_BITS
                } else {
                    num(parts[0], "dimension")?
                };
                let block = if parts[1].is_empty() {
                    4
                } else {
                    num(parts[1], "block size")?
                };
                Ok(ObjectiveSpec::Trap { dim, block })
            }
            "external" => match rest {
                Some(cmd) if !cmd.trim().is_empty() => Ok(ObjectiveSpec::External {
                    command: cmd.to_string(),
                    dim: crate::IDC_BITS,
                    timeout: EXTERNAL_TIMEOUT,
                }),
                _ => Err(Error::config(
                    "objective `external` needs a command: external:<cmd>",
                )),
            },
            other => Err(Error::config(format!(
                "unknown objective `{other}` (expected surrogate, onemax, trap or external)"
            ))),
        }
    }
}

/// Hyperparameters for every algorithm; defaults are the reference settings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AlgorithmSettings {
    pub bpso: BpsoParams,
    pub rlbpso: RlbpsoParams,
    pub sa: SaSchedule,
    pub abc: AbcConfig,
    pub aco: AcoParams,
    pub alo: AloParams,
}

impl AlgorithmSettings {
    pub fn sa_for(&self, algorithm: Algorithm) -> SaSchedule {
        let mutation = if algorithm == Algorithm::SaSwap {
            Mutation::Swap
        } else {
            Mutation::Random
        };
        SaSchedule {
            mutation,
            ..self.sa.clone()
        }
    }

    /// Evaluations used when only the iteration cap binds.
    pub fn natural_budget(&self, algorithm: Algorithm) -> u64 {
        match algorithm {
            Algorithm::Bpso => self.bpso.natural_budget(),
            Algorithm::SaRandom | Algorithm::SaSwap => self.sa.natural_budget(),
            Algorithm::Abc => self.abc.natural_budget(),
            Algorithm::Aco => self.aco.natural_budget(),
            Algorithm::Alo => self.alo.natural_budget(),
            Algorithm::Rlbpso => self.rlbpso.natural_budget(),
        }
    }

    /// Set the population size of `algorithm` where it has one.
    pub fn set_population(&mut self, algorithm: Algorithm, n: usize) {
        match algorithm {
            Algorithm::Bpso => self.bpso.swarm = n,
            Algorithm::Rlbpso => self.rlbpso.swarm = n,
            Algorithm::Abc => {
                self.abc.employed = n;
                self.abc.onlookers = n;
                self.abc.total = 2 * n;
            }
            Algorithm::Aco => self.aco.ants = n,
            Algorithm::Alo => self.alo.population = n,
            Algorithm::SaRandom | Algorithm::SaSwap => {}
        }
    }

    pub fn set_max_iter(&mut self, algorithm: Algorithm, max_iter: usize) {
        match algorithm {
            Algorithm::Bpso => self.bpso.max_iter = max_iter,
            Algorithm::Rlbpso => self.rlbpso.max_iter = max_iter,
            Algorithm::Abc => self.abc.max_iter = max_iter,
            Algorithm::Aco => self.aco.max_iter = max_iter,
            Algorithm::Alo => self.alo.max_iter = max_iter,
            Algorithm::SaRandom | Algorithm::SaSwap => self.sa.max_iter = max_iter,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.bpso.validate()?;
        self.rlbpso.validate()?;
        self.sa.validate()?;
        self.abc.validate()?;
        self.aco.validate()?;
        self.alo.validate()
    }

    /// One line per algorithm in the layout of the hyperparameter table.
    pub fn describe(&self, algorithm: Algorithm) -> String {
        match algorithm {
            Algorithm::Bpso => {
                let p = &self.bpso;
                format!(
                    "Maximum Iterations = {}, Swarm size = {}, w = {}, c1 = {}, c2 = {}, e = {}, d = {}, v_clamp = {}",
                    p.max_iter,
                    p.swarm,
                    p.w,
                    p.c1,
                    p.c2,
                    p.e,
                    p.d,
                    p.v_clamp.map_or("none".to_string(), |v| v.to_string())
                )
            }
            Algorithm::Rlbpso => {
                let p = &self.rlbpso;
                format!(
                    "Maximum Iterations = {}, Swarm size = {}, groups = {}, v_clamp = {}, stall flag = {}",
                    p.max_iter, p.swarm, p.groups, p.v_clamp, p.stall_flag
                )
            }
            Algorithm::SaRandom | Algorithm::SaSwap => {
                let p = self.sa_for(algorithm);
                format!(
                    "Maximum Iterations = {}, T0 = {}, T_end = {} T0, alpha = {}",
                    p.max_iter,
                    p.t0.map_or("calibrated".to_string(), |t| t.to_string()),
                    p.t_end_ratio,
                    p.alpha
                )
            }
            Algorithm::Abc => {
                let p = &self.abc;
                format!(
                    "Maximum Iterations = {}, Total bees = {}, Employed bees = {}, Onlooker bees = {}, Scout bees = {}, limit = {}",
                    p.max_iter,
                    p.total,
                    p.employed,
                    p.onlookers,
                    p.scouts(),
                    p.limit
                )
            }
            Algorithm::Aco => {
                let p = &self.aco;
                format!(
                    "Maximum Iterations = {}, Ants Pop. = {}, rho = {}, Q = {}, tau = [{}, {}]",
                    p.max_iter, p.ants, p.rho, p.q, p.tau_min, p.tau_max
                )
            }
            Algorithm::Alo => {
                let p = &self.alo;
                format!(
                    "Maximum Iterations = {}, Antlion Agents = {}",
                    p.max_iter, p.population
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithms: Vec<Algorithm>,
    pub objective: ObjectiveSpec,
    pub seeds: Vec<u64>,
    /// `None`: each algorithm gets its natural budget.
    pub budget: Option<u64>,
    pub out: PathBuf,
    pub settings: AlgorithmSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algorithms: vec![Algorithm::Bpso],
            objective: ObjectiveSpec::default(),
            seeds: vec![42],
            budget: None,
            out: PathBuf::from("results"),
            settings: AlgorithmSettings::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn budget_for(&self, algorithm: Algorithm) -> u64 {
        self.budget
            .unwrap_or_else(|| self.settings.natural_budget(algorithm))
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::config(
                "algorithms: at least one algorithm is required",
            ));
        }
        if self.seeds.is_empty() {
            return Err(Error::config("seeds: at least one seed is required"));
        }
        if self.budget == Some(0) {
            return Err(Error::config("budget: must be at least 1"));
        }
        self.objective.dim()?;
        self.settings.validate()
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    algorithm: Option<String>,
    algorithms: Option<Vec<String>>,
    seed: Option<u64>,
    seeds: Option<Vec<u64>>,
    budget: Option<u64>,
    out: Option<PathBuf>,
    objective: Option<RawObjective>,
    bpso: Option<RawBpso>,
    rlbpso: Option<RawRlbpso>,
    sa: Option<RawSa>,
    abc: Option<RawAbc>,
    aco: Option<RawAco>,
    alo: Option<RawAlo>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObjective {
    kind: Option<String>,
    profile: Option<String>,
    symmetry: Option<String>,
    dim: Option<usize>,
    block: Option<usize>,
    command: Option<String>,
    timeout_secs: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBpso {
    swarm: Option<usize>,
    max_iter: Option<usize>,
    w: Option<f64>,
    c1: Option<f64>,
    c2: Option<f64>,
    e: Option<f64>,
    d: Option<f64>,
    /// 0 disables clamping.
    v_clamp: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRlbpso {
    swarm: Option<usize>,
    max_iter: Option<usize>,
    groups: Option<usize>,
    v_clamp: Option<f64>,
    stall_flag: Option<usize>,
    exemplar: Option<String>,
    learn_prob: Option<f64>,
    refresh_gap: Option<usize>,
    actor_lr: Option<f64>,
    critic_lr: Option<f64>,
    gamma: Option<f64>,
    noise_start: Option<f64>,
    noise_end: Option<f64>,
    replay_capacity: Option<usize>,
    batch: Option<usize>,
    weights: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSa {
    max_iter: Option<usize>,
    t0: Option<f64>,
    t_end_ratio: Option<f64>,
    alpha: Option<f64>,
    calibration_samples: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAbc {
    total: Option<usize>,
    employed: Option<usize>,
    onlookers: Option<usize>,
    limit: Option<usize>,
    max_iter: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAco {
    ants: Option<usize>,
    max_iter: Option<usize>,
    rho: Option<f64>,
    q: Option<f64>,
    tau0: Option<f64>,
    tau_min: Option<f64>,
    tau_max: Option<f64>,
    elitist_weight: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlo {
    population: Option<usize>,
    max_iter: Option<usize>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn conflict(a: &str, b: &str) -> Error {
    Error::config(format!(
        "`{a}` and `{b}` are mutually exclusive; set only one"
    ))
}

/// Parse a TOML configuration. Relative paths inside it resolve against `base`.
pub fn parse_config(text: &str, base: &Path) -> Result<ExperimentConfig> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| Error::config(e.to_string().trim_end()))?;
    let mut cfg = ExperimentConfig::default();

    match (raw.algorithm, raw.algorithms) {
        (Some(_), Some(_)) => return Err(conflict("algorithm", "algorithms")),
        (Some(a), None) => {
            cfg.algorithms = vec![a
                .parse()
                .map_err(|e: Error| Error::config(format!("algorithm: {}", inner(&e))))?]
        }
        (None, Some(list)) => {
            cfg.algorithms = list
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    a.parse().map_err(|e: Error| {
                        Error::config(format!("algorithms[{i}]: {}", inner(&e)))
                    })
                })
                .collect::<Result<_>>()?;
        }
        (None, None) => {}
    }
    match (raw.seed, raw.seeds) {
        (Some(_), Some(_)) => return Err(conflict("seed", "seeds")),
        (Some(s), None) => cfg.seeds = vec![s],
        (None, Some(list)) => cfg.seeds = list,
        (None, None) => {}
    }
    cfg.budget = raw.budget;
    if let Some(out) = raw.out {
        cfg.out = base.join(out);
    }
    if let Some(o) = raw.objective {
        cfg.objective = objective_from_raw(o)?;
    }

    let s = &mut cfg.settings;
    if let Some(b) = raw.bpso {
        let p = &mut s.bpso;
        set(&mut p.swarm, b.swarm);
        set(&mut p.max_iter, b.max_iter);
        set(&mut p.w, b.w);
        set(&mut p.c1, b.c1);
        set(&mut p.c2, b.c2);
        set(&mut p.e, b.e);
        set(&mut p.d, b.d);
        if let Some(v) = b.v_clamp {
            p.v_clamp = (v != 0.0).then_some(v);
        }
    }
    if let Some(r) = raw.rlbpso {
        let p = &mut s.rlbpso;
        set(&mut p.swarm, r.swarm);
        set(&mut p.max_iter, r.max_iter);
        set(&mut p.groups, r.groups);
        set(&mut p.v_clamp, r.v_clamp);
        set(&mut p.stall_flag, r.stall_flag);
        set(&mut p.actor_lr, r.actor_lr);
        set(&mut p.critic_lr, r.critic_lr);
        set(&mut p.gamma, r.gamma);
        set(&mut p.noise_start, r.noise_start);
        set(&mut p.noise_end, r.noise_end);
        set(&mut p.replay_capacity, r.replay_capacity);
        set(&mut p.batch, r.batch);
        let (mut learn_prob, mut refresh_gap) = (0.3, 7);
        if let ExemplarMode::Comprehensive {
            learn_prob: lp,
            refresh_gap: rg,
        } = p.exemplar
        {
            (learn_prob, refresh_gap) = (lp, rg);
        }
        set(&mut learn_prob, r.learn_prob);
        set(&mut refresh_gap, r.refresh_gap);
        p.exemplar = match r.exemplar.as_deref() {
            None | Some("comprehensive") => ExemplarMode::Comprehensive {
                learn_prob,
                refresh_gap,
            },
            Some("self") => {
                if r.learn_prob.is_some() || r.refresh_gap.is_some() {
                    return Err(Error::config(
                        "rlbpso: learn_prob and refresh_gap need exemplar = \"comprehensive\"",
                    ));
                }
                ExemplarMode::SelfOnly
            }
            Some(other) => {
                return Err(Error::config(format!(
                    "rlbpso.exemplar: unknown mode `{other}` (expected comprehensive or self)"
                )))
            }
        };
        if let Some(path) = r.weights {
            let path = base.join(path);
            let text = std::fs::read_to_string(&path).map_err(|e| {
                Error::config(format!(
                    "rlbpso.weights: cannot read {}: {e}",
                    path.display()
                ))
            })?;
            let ac = ActorCritic::from_snapshot(&text, p.effective_groups())
                .map_err(|e| Error::config(format!("rlbpso.weights: {}", inner(&e))))?;
            p.params = ParamSource::Learned {
                warm_start: Some(ac),
            };
        }
    }
    if let Some(r) = raw.sa {
        let p = &mut s.sa;
        set(&mut p.max_iter, r.max_iter);
        if r.t0.is_some() {
            p.t0 = r.t0;
        }
        set(&mut p.t_end_ratio, r.t_end_ratio);
        set(&mut p.alpha, r.alpha);
        set(&mut p.calibration_samples, r.calibration_samples);
    }
    if let Some(r) = raw.abc {
        let p = &mut s.abc;
        set(&mut p.total, r.total);
        set(&mut p.employed, r.employed);
        set(&mut p.onlookers, r.onlookers);
        set(&mut p.limit, r.limit);
        set(&mut p.max_iter, r.max_iter);
    }
    if let Some(r) = raw.aco {
        let p = &mut s.aco;
        set(&mut p.ants, r.ants);
        set(&mut p.max_iter, r.max_iter);
        set(&mut p.rho, r.rho);
        set(&mut p.q, r.q);
        set(&mut p.tau0, r.tau0);
        set(&mut p.tau_min, r.tau_min);
        set(&mut p.tau_max, r.tau_max);
        set(&mut p.elitist_weight, r.elitist_weight);
    }
    if let Some(r) = raw.alo {
        let p = &mut s.alo;
        set(&mut p.population, r.population);
        set(&mut p.max_iter, r.max_iter);
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Message of a config error without the "config error: " prefix.
fn inner(e: &Error) -> String {
    match e {
        Error::Config(m) => m.clone(),
        other => other.to_string(),
    }
}

fn objective_from_raw(o: RawObjective) -> Result<ObjectiveSpec> {
    let kind = o.kind.as_deref().unwrap_or("surrogate");
    let only = |field: &str, present: bool, kinds: &str| -> Result<()> {
        if present {
            Err(Error::config(format!(
                "objective.{field}: only valid for kind = {kinds}, not \"{kind}\""
            )))
        } else {
            Ok(())
        }
    };
    only(
        "profile",
        o.profile.is_some() && kind != "surrogate",
        "\"surrogate\"",
    )?;
    only(
        "symmetry",
        o.symmetry.is_some() && kind != "surrogate",
        "\"surrogate\"",
    )?;
    only(
        "dim",
        o.dim.is_some() && kind == "surrogate",
        "onemax, trap or external",
    )?;
    only("block", o.block.is_some() && kind != "trap", "\"trap\"")?;
    only(
        "command",
        o.command.is_some() && kind != "external",
        "\"external\"",
    )?;
    only(
        "timeout_secs",
        o.timeout_secs.is_some() && kind != "external",
        "\"external\"",
    )?;
    let dim = o.dim.unwrap_or(crate::IDC_BITS);
    match kind {
        "surrogate" => {
            let profile = o.profile.unwrap_or_else(|| "idc1500".into());
            SurrogateProfile::by_name(&profile)
                .map_err(|e| Error::config(format!("objective.profile: {}", inner(&e))))?;
            let symmetry = match o.symmetry {
                Some(s) => s
                    .parse()
                    .map_err(|e: Error| Error::config(format!("objective.symmetry: {}", inner(&e))))?,
                None => Symmetry::Mirror,
            };
            Ok(ObjectiveSpec::Surrogate { profile, symmetry })
        }
        "onemax" => Ok(ObjectiveSpec::OneMax { dim }),
        "trap" => Ok(ObjectiveSpec::Trap {
            dim,
            block: o.block.unwrap_or(4),
        }),
        "external" => {
            let command = o
                .command
                .ok_or_else(|| Error::config("objective.command: required for kind = \"external\""))?;
            let secs = o.timeout_secs.unwrap_or(EXTERNAL_TIMEOUT.as_secs_f64());
            if !(secs > 0.0 && secs.is_finite()) {
                return Err(Error::config("objective.timeout_secs: must be positive"));
            }
            Ok(ObjectiveSpec::External {
                command,
                dim,
                timeout: Duration::from_secs_f64(secs),
            })
        }
        other => Err(Error::config(format!(
            "objective.kind: unknown objective `{other}` (expected surrogate, onemax, trap or external)"
        ))),
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config(&text, base)
        .map_err(|e| Error::config(format!("{}: {}", path.display(), inner(&e))))
}
