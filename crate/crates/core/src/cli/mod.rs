//! The `newcomb` command line.
//!
//! Exit codes: 0 success, 2 invalid scenario or unwritable output,
//! 3 impossible evidence or action, 4 usage error.

mod render;

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bayes_net::{Assignment, Inference, NetworkError};
use crate::decision::{self, DecisionError, Surgery, Theory, TransformSummary};
use crate::dot::{self, DotStyle};
use crate::scenarios::{self, CalculatorParams, CalculatorVariant, CommonCause, PdParams, ScenarioError, TdtPdParams, ToxoplasmosisParams};
use crate::Scenario;

pub use render::format_significant;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_IMPOSSIBLE: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "newcomb", version, about = "EDT, CDT and TDT on causal Bayesian networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pick the action with the highest expected utility under a theory.
    Decide(DecideArgs),
    /// Print a conditional distribution.
    Query(QueryArgs),
    /// Show the network a theory queries, optionally as DOT files.
    Explain(ExplainArgs),
    /// Print a scenario as a JSON document.
    Scenario(ScenarioArgs),
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub params: BuiltinParams,
    #[arg(long)]
    pub theory: Theory,
    #[arg(long, value_enum, default_value_t = OutputMode::Human)]
    pub output: OutputMode,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub params: BuiltinParams,
    /// Target node ids, comma separated or repeated.
    #[arg(long = "target", required = true, value_delimiter = ',')]
    pub targets: Vec<String>,
    /// Evidence as node=state pairs, comma separated.
    #[arg(long, default_value = "")]
    pub evidence: String,
    #[arg(long, value_enum, default_value_t = Method::Elimination)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = OutputMode::Human)]
    pub output: OutputMode,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub params: BuiltinParams,
    #[arg(long)]
    pub theory: Theory,
    /// Directory for `original.dot` and `transformed.dot`.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputMode::Human)]
    pub output: OutputMode,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub params: BuiltinParams,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Scenario document (JSON).
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Built-in problem.
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Toxoplasmosis,
    Pd,
    Calculators,
    TdtPd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Elimination,
    Enumeration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Variant {
    Naive,
    Physical,
    #[default]
    Logical,
}

/// Parameters of the built-in problems. Unset flags keep the defaults:
/// toxoplasmosis P(T)=0.3, P(C|T)=0.6, P(C|not T)=0.2, P(N|T)=0.4,
/// P(N|not T)=0.05, B=100, s=1; utilities 1,2,3,4; no common cause with
/// both players cooperating half the time; P(opponent runs TDT)=1.
#[derive(Debug, Args, Default)]
pub struct BuiltinParams {
    #[arg(long, help_heading = "Toxoplasmosis")]
    pub p_t: Option<f64>,
    #[arg(long, help_heading = "Toxoplasmosis")]
    pub p_c_given_t: Option<f64>,
    #[arg(long, help_heading = "Toxoplasmosis")]
    pub p_c_given_not_t: Option<f64>,
    #[arg(long, help_heading = "Toxoplasmosis")]
    pub p_n_given_t: Option<f64>,
    #[arg(long, help_heading = "Toxoplasmosis")]
    pub p_n_given_not_t: Option<f64>,
    /// Harm from symptoms.
    #[arg(long = "b", help_heading = "Toxoplasmosis")]
    pub harm: Option<f64>,
    /// Utility of adoring cats.
    #[arg(long = "s", help_heading = "Toxoplasmosis")]
    pub joy: Option<f64>,

    /// Payoffs u1,u2,u3,u4.
    #[arg(long = "u", value_delimiter = ',', help_heading = "Prisoner's dilemma")]
    pub payoffs: Option<Vec<f64>>,
    /// Prior over common-cause states.
    #[arg(long, value_delimiter = ',', help_heading = "Prisoner's dilemma")]
    pub cause_prior: Option<Vec<f64>>,
    /// P(you cooperate | cause) per cause state.
    #[arg(long, value_delimiter = ',', help_heading = "Prisoner's dilemma")]
    pub p_you_cooperate: Option<Vec<f64>>,
    /// P(opponent cooperates | cause) per cause state.
    #[arg(long, value_delimiter = ',', help_heading = "Prisoner's dilemma")]
    pub p_opponent_cooperates: Option<Vec<f64>>,
    /// P(opponent runs TDT).
    #[arg(long, help_heading = "Prisoner's dilemma")]
    pub p_tdt: Option<f64>,
    /// P(C_n),P(D_n) of the non-TDT algorithm.
    #[arg(long, value_delimiter = ',', help_heading = "Prisoner's dilemma")]
    pub not_tdt_prior: Option<Vec<f64>>,

    #[arg(long, value_enum, default_value_t = Variant::Logical, help_heading = "Calculators")]
    pub variant: Variant,
    #[arg(long, value_delimiter = ',', help_heading = "Calculators")]
    pub correlation_prior: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', help_heading = "Calculators")]
    pub p_maya_mult: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', help_heading = "Calculators")]
    pub p_china_mult: Option<Vec<f64>>,
    #[arg(long, help_heading = "Calculators")]
    pub p_even: Option<f64>,
    #[arg(long, help_heading = "Calculators")]
    pub p_even_if_faulty: Option<f64>,
    #[arg(long, value_delimiter = ',', help_heading = "Calculators")]
    pub logical_prior: Option<Vec<f64>>,
}

/// A failed command: exit code plus a one-line diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn validation(message: impl fmt::Display) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.to_string(),
        }
    }

    fn usage(message: impl fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        Self::validation(e)
    }
}

impl From<NetworkError> for CliError {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::ImpossibleEvidence => Self {
                code: EXIT_IMPOSSIBLE,
                message: e.to_string(),
            },
            other => Self::validation(other),
        }
    }
}

impl From<DecisionError> for CliError {
    fn from(e: DecisionError) -> Self {
        match e {
            DecisionError::ImpossibleAction(_) | DecisionError::Network(NetworkError::ImpossibleEvidence) => Self {
                code: EXIT_IMPOSSIBLE,
                message: e.to_string(),
            },
            other => Self::validation(other),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RenderOptions {
    pub color: bool,
}

/// Runs a parsed command and returns what it prints on standard output.
pub fn run(cli: &Cli, options: RenderOptions) -> Result<String, CliError> {
    match &cli.command {
        Command::Decide(args) => {
            let scenario = load_source(&args.source, &args.params)?;
            let problem = scenario.problem()?;
            let report = decision::decide(&problem, args.theory)?;
            Ok(match args.output {
                OutputMode::Human => render::decision_human(&scenario, &report, options),
                OutputMode::Json => render::decision_json(&report),
            })
        }
        Command::Query(args) => {
            let scenario = load_source(&args.source, &args.params)?;
            let evidence: Assignment = args.evidence.parse().map_err(CliError::usage)?;
            let net = scenario.world_network().map_err(CliError::validation)?;
            let method = match args.method {
                Method::Elimination => Inference::VariableElimination,
                Method::Enumeration => Inference::Enumeration,
            };
            let dist = net.query_with(&args.targets, &evidence, method)?;
            Ok(match args.output {
                OutputMode::Human => render::distribution_human(&dist, &evidence),
                OutputMode::Json => render::distribution_json(&dist, &evidence),
            })
        }
        Command::Explain(args) => {
            let scenario = load_source(&args.source, &args.params)?;
            let summary = explain_summary(&scenario, args.theory)?;
            let mut written = Vec::new();
            if let Some(dir) = &args.dot {
                written = write_dot(dir, &scenario, &summary)?;
            }
            Ok(match args.output {
                OutputMode::Human => render::explain_human(&scenario, &summary, &written),
                OutputMode::Json => render::explain_json(&scenario, &summary, &written),
            })
        }
        Command::Scenario(args) => {
            let scenario = load_source(&args.source, &args.params)?;
            Ok(scenarios::serialize(&(&scenario).into()))
        }
    }
}

/// Scenario named by `--scenario` or `--builtin`.
pub fn load_source(source: &Source, params: &BuiltinParams) -> Result<Scenario, CliError> {
    match (&source.scenario, source.builtin) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
            Ok(scenarios::load(&text)?)
        }
        (None, Some(b)) => builtin(b, params),
        _ => Err(CliError::usage("give exactly one of --scenario or --builtin")),
    }
}

fn builtin(which: Builtin, p: &BuiltinParams) -> Result<Scenario, CliError> {
    for (flag, values, n) in [
        ("--u", &p.payoffs, 4),
        ("--not-tdt-prior", &p.not_tdt_prior, 2),
        ("--logical-prior", &p.logical_prior, 2),
    ] {
        if let Some(v) = values {
            if v.len() != n {
                return Err(CliError::usage(format!("{flag} takes {n} comma-separated values, got {}", v.len())));
            }
        }
    }
    let common = || {
        let default = CommonCause::default();
        CommonCause {
            prior: p.cause_prior.clone().unwrap_or(default.prior),
            p_you_cooperate: p.p_you_cooperate.clone().unwrap_or(default.p_you_cooperate),
            p_opponent_cooperates: p.p_opponent_cooperates.clone().unwrap_or(default.p_opponent_cooperates),
        }
    };
    let payoffs = || -> [f64; 4] {
        match &p.payoffs {
            Some(u) => [u[0], u[1], u[2], u[3]],
            None => PdParams::default().u,
        }
    };
    Ok(match which {
        Builtin::Toxoplasmosis => {
            let d = ToxoplasmosisParams::default();
            let params = ToxoplasmosisParams {
                p_t: p.p_t.unwrap_or(d.p_t),
                p_c_given_t: p.p_c_given_t.unwrap_or(d.p_c_given_t),
                p_c_given_not_t: p.p_c_given_not_t.unwrap_or(d.p_c_given_not_t),
                p_n_given_t: p.p_n_given_t.unwrap_or(d.p_n_given_t),
                p_n_given_not_t: p.p_n_given_not_t.unwrap_or(d.p_n_given_not_t),
                b: p.harm.unwrap_or(d.b),
                s: p.joy.unwrap_or(d.s),
            };
            Scenario::from_problem("toxoplasmosis", &scenarios::toxoplasmosis(&params)?)
        }
        Builtin::Pd => {
            let params = PdParams {
                u: payoffs(),
                common_cause: common(),
            };
            Scenario::from_problem("prisoners-dilemma", &scenarios::prisoners_dilemma(&params)?)
        }
        Builtin::TdtPd => {
            let d = TdtPdParams::default();
            let params = TdtPdParams {
                u: payoffs(),
                p_opponent_uses_tdt: p.p_tdt.unwrap_or(d.p_opponent_uses_tdt),
                not_tdt_prior: p.not_tdt_prior.as_ref().map_or(d.not_tdt_prior, |v| [v[0], v[1]]),
                common_cause: common(),
            };
            Scenario::from_problem("tdt-prisoners-dilemma", &scenarios::tdt_prisoners_dilemma(&params)?)
        }
        Builtin::Calculators => {
            let d = CalculatorParams::default();
            let params = CalculatorParams {
                correlation_prior: p.correlation_prior.clone().unwrap_or(d.correlation_prior),
                p_maya_mult: p.p_maya_mult.clone().unwrap_or(d.p_maya_mult),
                p_china_mult: p.p_china_mult.clone().unwrap_or(d.p_china_mult),
                p_even: p.p_even.unwrap_or(d.p_even),
                p_even_if_faulty: p.p_even_if_faulty.unwrap_or(d.p_even_if_faulty),
                logical_prior: p.logical_prior.as_ref().map_or(d.logical_prior, |v| [v[0], v[1]]),
            };
            let variant = match p.variant {
                Variant::Naive => CalculatorVariant::Naive,
                Variant::Physical => CalculatorVariant::Physical,
                Variant::Logical => CalculatorVariant::Logical,
            };
            scenarios::calculator_scenario(variant, &params)?
        }
    })
}

/// The transform `theory` applies. Scenarios without a decision node can
/// still show EDT (nothing to do) and TDT (logical node insertion).
pub fn explain_summary(scenario: &Scenario, theory: Theory) -> Result<TransformSummary, CliError> {
    if scenario.has_decision() {
        return Ok(decision::transform(&scenario.problem()?, theory)?);
    }
    let (network, inserted, rewired) = match theory {
        Theory::Edt => (scenario.network.clone(), Vec::new(), Vec::new()),
        Theory::Cdt => return Err(CliError::validation("CDT needs a scenario with a decision node")),
        Theory::Tdt => (
            scenario.world_network().map_err(CliError::validation)?,
            scenario.logical.iter().map(|l| l.id.clone()).collect(),
            scenario
                .logical
                .iter()
                .flat_map(|l| l.rewires.iter().map(|r| r.target.clone()))
                .collect(),
        ),
    };
    Ok(TransformSummary {
        theory,
        surgery: Surgery::Condition,
        decision_node: String::new(),
        severed_edges: Vec::new(),
        inserted_nodes: inserted,
        rewired_nodes: rewired,
        network,
    })
}

/// Writes `original.dot` and `transformed.dot` under `dir`.
pub fn write_dot(dir: &Path, scenario: &Scenario, summary: &TransformSummary) -> Result<Vec<PathBuf>, CliError> {
    let unwritable = |e: std::io::Error| CliError::validation(format!("cannot write DOT files to {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(unwritable)?;
    let decision = scenario.decision.as_ref().map(|(d, _)| d.clone());
    let original = dot::render(
        &format!("{} original", scenario.name),
        &scenario.network,
        &DotStyle {
            decision: decision.clone(),
            ..Default::default()
        },
    );
    let transformed_decision = if summary.decision_node.is_empty() {
        decision
    } else {
        Some(summary.decision_node.clone())
    };
    let transformed = dot::render(
        &format!("{} {}", scenario.name, summary.theory),
        &summary.network,
        &DotStyle {
            decision: transformed_decision,
            logical: summary.inserted_nodes.clone(),
            severed: summary.severed_edges.clone(),
        },
    );
    let mut written = Vec::new();
    for (file, text) in [("original.dot", original), ("transformed.dot", transformed)] {
        let path = dir.join(file);
        std::fs::write(&path, text).map_err(unwritable)?;
        written.push(path);
    }
    Ok(written)
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    let first = e.to_string();
                    let line = first.lines().next().unwrap_or("usage error").trim_start_matches("error: ");
                    eprintln!("newcomb: {line}");
                    EXIT_USAGE
                }
            };
        }
    };
    let color = std::env::var_os("NEWCOMB_NO_COLOR").is_none() && std::io::IsTerminal::is_terminal(&std::io::stdout());
    match run(&cli, RenderOptions { color }) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("newcomb: {}", e.message);
            e.code
        }
    }
}
