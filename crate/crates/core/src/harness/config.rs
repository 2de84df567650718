//! Experiment configuration and its `key = value` file form.
//!
//! ```text
//! mode = mab
//! n = 10000
//! runs = 50
//! seed = 1
//! arms = 10
//! family = bernoulli
//! means = uniform(0.25,0.75)
//! means.redraw = per-run
//! tie = uniform
//!
//! policy.kind = giro
//! policy.name = giro-a1
//! policy.a = 1
//!
//! policy.kind = ucb1
//! ```
//!
//! Every `policy.kind` line opens a new policy block; the `policy.*` keys
//! after it belong to that block. Blank lines and lines starting with `#`
//! are ignored.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::analysis::Grid;
use crate::contextual::ModelKind;
use crate::env::Family;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Mab,
    Contextual,
    Lemma1,
    VerifyBounds,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeanRule {
    /// Means drawn i.i.d. uniform on `[lo, hi]`.
    Uniform {
        lo: f64,
        hi: f64,
    },
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Redraw {
    PerRun,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieMode {
    Uniform,
    /// A preference `Z ~ Ber(1/2)` drawn per run and policy before round 1.
    Fixed,
}

/// Epsilon-greedy schedule constant, given directly or as a target
/// fraction of exploration rounds over the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    B(f64),
    Explore(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolicyKind {
    Giro {
        a: f64,
    },
    Ucb1,
    KlUcb,
    Ts,
    EpsGreedy {
        schedule: Schedule,
    },
    ContextualGiro {
        a: u32,
        model: ModelKind,
        refit: u64,
    },
    LinUcb {
        alpha: f64,
    },
    LinTs {
        scale: f64,
    },
    ContextualEpsGreedy {
        schedule: Schedule,
        model: ModelKind,
    },
    Random,
}

impl PolicyKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            PolicyKind::Giro { .. } => "giro",
            PolicyKind::Ucb1 => "ucb1",
            PolicyKind::KlUcb => "klucb",
            PolicyKind::Ts => "ts",
            PolicyKind::EpsGreedy { .. } => "egreedy",
            PolicyKind::ContextualGiro { .. } => "cgiro",
            PolicyKind::LinUcb { .. } => "linucb",
            PolicyKind::LinTs { .. } => "lints",
            PolicyKind::ContextualEpsGreedy { .. } => "cegreedy",
            PolicyKind::Random => "random",
        }
    }

    pub fn is_contextual(&self) -> bool {
        matches!(
            self,
            PolicyKind::ContextualGiro { .. }
                | PolicyKind::LinUcb { .. }
                | PolicyKind::LinTs { .. }
                | PolicyKind::ContextualEpsGreedy { .. }
                | PolicyKind::Random
        )
    }

    fn default_for(keyword: &str) -> Option<Self> {
        Some(match keyword {
            "giro" => PolicyKind::Giro { a: 1.0 },
            "ucb1" => PolicyKind::Ucb1,
            "klucb" => PolicyKind::KlUcb,
            "ts" => PolicyKind::Ts,
            "egreedy" => PolicyKind::EpsGreedy {
                schedule: Schedule::Explore(0.01),
            },
            "cgiro" => PolicyKind::ContextualGiro {
                a: 1,
                model: ModelKind::Logistic,
                refit: 1,
            },
            "linucb" => PolicyKind::LinUcb { alpha: 1.0 },
            "lints" => PolicyKind::LinTs { scale: 1.0 },
            "cegreedy" => PolicyKind::ContextualEpsGreedy {
                schedule: Schedule::Explore(0.01),
                model: ModelKind::Logistic,
            },
            "random" => PolicyKind::Random,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicySpec {
    pub name: String,
    pub kind: PolicyKind,
}

impl PolicySpec {
    pub fn new(name: impl Into<String>, kind: PolicyKind) -> Self {
        Self {
            name: name.into(),
            kind,
        }
    }
}

/// Settings used only in contextual mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextualSettings {
    /// Feature dimension of the synthetic logistic environment.
    pub dim: usize,
    /// Standard deviation of the synthetic arm parameters.
    pub theta_scale: f64,
    /// Check sample invariants every this many rounds; 0 disables.
    pub audit_every: u64,
    /// Dataset CSV; the synthetic environment is used when absent.
    pub data: Option<String>,
}

impl Default for ContextualSettings {
    fn default() -> Self {
        Self {
            dim: 5,
            theta_scale: 1.0,
            audit_every: 0,
            data: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub n: u64,
    pub runs: u64,
    pub seed: u64,
    pub arms: usize,
    pub family: Family,
    pub means: MeanRule,
    pub redraw: Redraw,
    pub tie: TieMode,
    /// Give each policy its own reward draws instead of a shared tape.
    pub independent_draws: bool,
    pub out: Option<String>,
    pub grid: Grid,
    pub contextual: ContextualSettings,
    pub policies: Vec<PolicySpec>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Mab,
            n: 10_000,
            runs: 50,
            seed: 1,
            arms: 10,
            family: Family::Bernoulli,
            means: MeanRule::Uniform { lo: 0.25, hi: 0.75 },
            redraw: Redraw::PerRun,
            tie: TieMode::Uniform,
            independent_draws: false,
            out: None,
            grid: Grid::Small,
            contextual: ContextualSettings::default(),
            policies: Vec::new(),
        }
    }
}

fn keyword<T: Copy>(
    table: &[(&str, T)],
    value: &str,
    what: &str,
) -> std::result::Result<T, String> {
    table
        .iter()
        .find(|(k, _)| *k == value)
        .map(|(_, v)| *v)
        .ok_or_else(|| {
            let options: Vec<&str> = table.iter().map(|(k, _)| *k).collect();
            format!(
                "unknown {what} {value:?}, expected one of {}",
                options.join("|")
            )
        })
}

fn name_of<T: Copy + PartialEq>(table: &[(&'static str, T)], value: T) -> &'static str {
    table
        .iter()
        .find(|(_, v)| *v == value)
        .map(|(k, _)| *k)
        .unwrap_or("?")
}

const MODES: &[(&str, Mode)] = &[
    ("mab", Mode::Mab),
    ("contextual", Mode::Contextual),
    ("lemma1", Mode::Lemma1),
    ("verify-bounds", Mode::VerifyBounds),
];
const REDRAWS: &[(&str, Redraw)] = &[("per-run", Redraw::PerRun), ("fixed", Redraw::Fixed)];
const TIES: &[(&str, TieMode)] = &[("uniform", TieMode::Uniform), ("fixed", TieMode::Fixed)];
const GRIDS: &[(&str, Grid)] = &[("small", Grid::Small), ("full", Grid::Full)];
const MODELS: &[(&str, ModelKind)] = &[
    ("linear", ModelKind::Linear),
    ("logistic", ModelKind::Logistic),
];
const BOOLS: &[(&str, bool)] = &[("true", true), ("false", false)];

fn number<T: FromStr>(value: &str, what: &str) -> std::result::Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("{what} {value:?} is not a valid number"))
}

fn parse_means(value: &str) -> std::result::Result<MeanRule, String> {
    if let Some(inner) = value
        .strip_prefix("uniform(")
        .and_then(|v| v.strip_suffix(')'))
    {
        let (lo, hi) = inner.split_once(',').ok_or("uniform needs two bounds")?;
        return Ok(MeanRule::Uniform {
            lo: number(lo.trim(), "lower bound")?,
            hi: number(hi.trim(), "upper bound")?,
        });
    }
    value
        .split(',')
        .map(|v| number(v.trim(), "mean"))
        .collect::<std::result::Result<Vec<f64>, _>>()
        .map(MeanRule::Explicit)
}

fn parse_family(value: &str) -> std::result::Result<Family, String> {
    if value == "bernoulli" {
        return Ok(Family::Bernoulli);
    }
    if let Some(v) = value
        .strip_prefix("beta(")
        .and_then(|v| v.strip_suffix(')'))
    {
        return Ok(Family::Beta {
            v: number(v.trim(), "beta concentration")?,
        });
    }
    Err(format!(
        "unknown family {value:?}, expected bernoulli|beta(v)"
    ))
}

fn set_policy_param(
    spec: &mut PolicySpec,
    key: &str,
    value: &str,
) -> std::result::Result<(), String> {
    let unknown = format!(
        "policy kind {} has no parameter {key:?}",
        spec.kind.keyword()
    );
    match (&mut spec.kind, key) {
        (_, "name") => spec.name = value.to_string(),
        (PolicyKind::Giro { a }, "a") => *a = number(value, "a")?,
        (PolicyKind::ContextualGiro { a, .. }, "a") => *a = number(value, "a")?,
        (PolicyKind::ContextualGiro { model, .. }, "model")
        | (PolicyKind::ContextualEpsGreedy { model, .. }, "model") => {
            *model = keyword(MODELS, value, "model")?
        }
        (PolicyKind::ContextualGiro { refit, .. }, "refit") => *refit = number(value, "refit")?,
        (PolicyKind::LinUcb { alpha }, "alpha") => *alpha = number(value, "alpha")?,
        (PolicyKind::LinTs { scale }, "scale") => *scale = number(value, "scale")?,
        (PolicyKind::EpsGreedy { schedule }, "b")
        | (PolicyKind::ContextualEpsGreedy { schedule, .. }, "b") => {
            *schedule = Schedule::B(number(value, "b")?)
        }
        (PolicyKind::EpsGreedy { schedule }, "explore")
        | (PolicyKind::ContextualEpsGreedy { schedule, .. }, "explore") => {
            *schedule = Schedule::Explore(number(value, "explore")?)
        }
        _ => return Err(unknown),
    }
    Ok(())
}

impl ExperimentConfig {
    /// Parses the file form. Unset keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = ExperimentConfig::default();
        let mut seen: Vec<String> = Vec::new();
        let mut block_keys: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fail = |msg: String| Error::Config { line: line_no, msg };
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| fail(format!("expected `key = value`, found {line:?}")))?;
            if let Some(param) = key.strip_prefix("policy.") {
                if param == "kind" {
                    let kind = PolicyKind::default_for(value)
                        .ok_or_else(|| fail(format!("unknown policy kind {value:?}")))?;
                    let name = format!("{value}-{}", config.policies.len() + 1);
                    config.policies.push(PolicySpec { name, kind });
                    block_keys.clear();
                    continue;
                }
                let spec = config
                    .policies
                    .last_mut()
                    .ok_or_else(|| fail(format!("{key} before any policy.kind")))?;
                if block_keys.iter().any(|k| k == param) {
                    return Err(fail(format!("duplicate {key} in one policy block")));
                }
                block_keys.push(param.to_string());
                set_policy_param(spec, param, value).map_err(fail)?;
                continue;
            }
            if seen.iter().any(|k| k == key) {
                return Err(fail(format!("duplicate key {key}")));
            }
            seen.push(key.to_string());
            config.set(key, value).map_err(fail)?;
        }
        Ok(config)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "mode" => self.mode = keyword(MODES, value, "mode")?,
            "n" => self.n = number(value, "n")?,
            "runs" => self.runs = number(value, "runs")?,
            "seed" => self.seed = number(value, "seed")?,
            "arms" => self.arms = number(value, "arms")?,
            "family" => self.family = parse_family(value)?,
            "means" => self.means = parse_means(value)?,
            "means.redraw" => self.redraw = keyword(REDRAWS, value, "redraw rule")?,
            "tie" => self.tie = keyword(TIES, value, "tie rule")?,
            "independent_draws" => self.independent_draws = keyword(BOOLS, value, "flag")?,
            "out" => self.out = Some(value.to_string()),
            "grid" => self.grid = keyword(GRIDS, value, "grid")?,
            "contextual.dim" => self.contextual.dim = number(value, "dimension")?,
            "contextual.theta_scale" => self.contextual.theta_scale = number(value, "scale")?,
            "contextual.audit_every" => self.contextual.audit_every = number(value, "period")?,
            "contextual.data" => self.contextual.data = Some(value.to_string()),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    /// Arm count: the number of explicit means, else `arms`.
    pub fn arm_count(&self) -> usize {
        match &self.means {
            MeanRule::Explicit(m) => m.len(),
            MeanRule::Uniform { .. } => self.arms,
        }
    }

    /// Rejects parameter combinations before any round is played.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.runs == 0 {
            return bad("runs must be >= 1".into());
        }
        if self.n == 0 && self.mode != Mode::VerifyBounds {
            return bad("n must be >= 1".into());
        }
        match &self.means {
            MeanRule::Uniform { lo, hi } => {
                if !(0.0 <= *lo && lo <= hi && *hi <= 1.0) {
                    return bad(format!("uniform({lo},{hi}) is not inside [0, 1]"));
                }
            }
            MeanRule::Explicit(m) => {
                if m.is_empty() || m.iter().any(|v| !(0.0..=1.0).contains(v)) {
                    return bad("explicit means must be non-empty and inside [0, 1]".into());
                }
            }
        }
        if self.arm_count() == 0 {
            return bad("need at least one arm".into());
        }
        if let Family::Beta { v } = self.family {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("beta concentration {v} must be > 0"));
            }
        }
        if matches!(self.mode, Mode::Mab | Mode::Contextual) && self.policies.is_empty() {
            return bad("no policies configured".into());
        }
        if self.mode == Mode::Lemma1 {
            match &self.means {
                MeanRule::Explicit(m) if m.len() == 2 && m[0] > m[1] => {}
                _ => return bad("lemma1 needs two explicit means with mu1 > mu2".into()),
            }
        }
        for p in &self.policies {
            let contextual = self.mode == Mode::Contextual;
            if p.kind.is_contextual() != contextual {
                return bad(format!("policy {} does not fit mode", p.name));
            }
            let ok = match p.kind {
                PolicyKind::Giro { a } => a.is_finite() && a >= 0.0,
                PolicyKind::EpsGreedy { schedule }
                | PolicyKind::ContextualEpsGreedy { schedule, .. } => match schedule {
                    Schedule::B(b) => b.is_finite() && b >= 0.0,
                    Schedule::Explore(f) => f > 0.0 && f <= 1.0,
                },
                PolicyKind::ContextualGiro { refit, .. } => refit >= 1,
                PolicyKind::LinUcb { alpha } => alpha.is_finite() && alpha >= 0.0,
                PolicyKind::LinTs { scale } => scale.is_finite() && scale >= 0.0,
                _ => true,
            };
            if !ok {
                return bad(format!("policy {} has invalid parameters", p.name));
            }
        }
        if self.mode == Mode::Contextual
            && self.contextual.data.is_none()
            && (self.contextual.dim == 0 || !self.contextual.theta_scale.is_finite())
        {
            return bad(
                "synthetic contextual environment needs dim >= 1 and a finite scale".into(),
            );
        }
        Ok(())
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        let _ = writeln!(s, "mode = {}", name_of(MODES, self.mode));
        let _ = writeln!(s, "n = {}", self.n);
        let _ = writeln!(s, "runs = {}", self.runs);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "arms = {}", self.arms);
        let _ = match self.family {
            Family::Bernoulli => writeln!(s, "family = bernoulli"),
            Family::Beta { v } => writeln!(s, "family = beta({v})"),
        };
        let _ = match &self.means {
            MeanRule::Uniform { lo, hi } => writeln!(s, "means = uniform({lo},{hi})"),
            MeanRule::Explicit(m) => {
                let list: Vec<String> = m.iter().map(f64::to_string).collect();
                writeln!(s, "means = {}", list.join(","))
            }
        };
        let _ = writeln!(s, "means.redraw = {}", name_of(REDRAWS, self.redraw));
        let _ = writeln!(s, "tie = {}", name_of(TIES, self.tie));
        let _ = writeln!(s, "independent_draws = {}", self.independent_draws);
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out = {out}");
        }
        let _ = writeln!(s, "grid = {}", name_of(GRIDS, self.grid));
        let _ = writeln!(s, "contextual.dim = {}", self.contextual.dim);
        let _ = writeln!(
            s,
            "contextual.theta_scale = {}",
            self.contextual.theta_scale
        );
        let _ = writeln!(
            s,
            "contextual.audit_every = {}",
            self.contextual.audit_every
        );
        if let Some(data) = &self.contextual.data {
            let _ = writeln!(s, "contextual.data = {data}");
        }
        for p in &self.policies {
            let _ = writeln!(s, "\npolicy.kind = {}", p.kind.keyword());
            let _ = writeln!(s, "policy.name = {}", p.name);
            let schedule = |s: &mut String, sch: &Schedule| {
                let _ = match sch {
                    Schedule::B(b) => writeln!(s, "policy.b = {b}"),
                    Schedule::Explore(x) => writeln!(s, "policy.explore = {x}"),
                };
            };
            match &p.kind {
                PolicyKind::Giro { a } => {
                    let _ = writeln!(s, "policy.a = {a}");
                }
                PolicyKind::EpsGreedy { schedule: sch } => schedule(&mut s, sch),
                PolicyKind::ContextualGiro { a, model, refit } => {
                    let _ = writeln!(s, "policy.a = {a}");
                    let _ = writeln!(s, "policy.model = {}", name_of(MODELS, *model));
                    let _ = writeln!(s, "policy.refit = {refit}");
                }
                PolicyKind::LinUcb { alpha } => {
                    let _ = writeln!(s, "policy.alpha = {alpha}");
                }
                PolicyKind::LinTs { scale } => {
                    let _ = writeln!(s, "policy.scale = {scale}");
                }
                PolicyKind::ContextualEpsGreedy {
                    schedule: sch,
                    model,
                } => {
                    schedule(&mut s, sch);
                    let _ = writeln!(s, "policy.model = {}", name_of(MODELS, *model));
                }
                PolicyKind::Ucb1 | PolicyKind::KlUcb | PolicyKind::Ts | PolicyKind::Random => {}
            }
        }
        f.write_str(&s)
    }
}
