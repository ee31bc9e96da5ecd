//! Command-line front end.
//!
//! Exit codes: 0 success (and, for `verify`, stable and fair), 1 usage,
//! input or infeasibility error, 2 stable but not fair, 3 not stable,
//! 4 oracle divergence.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::allocation::{core_segment, is_stable, shapley, Allocation};
use crate::isr_game::{IsrError, IsrGame};
use crate::number::{format_util, parse_util, util, BadNumber};
use crate::scenario_io::{
    emit_report, load_scenario, render_core_plot, AnalysisReport, PlotError, ProposalRecord,
    ProposalSource, ReportFormat, ScenarioError,
};
use crate::tu_core::{in_core_oracle, is_subadditive, is_submodular, shapley_oracle, GameError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_STABLE_UNFAIR: i32 = 2;
pub const EXIT_UNSTABLE: i32 = 3;
pub const EXIT_ORACLE_DIVERGENCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "isr-games",
    version,
    about = "Stable and fair cost splits for industrial symbiotic relations"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Print the game summary, core segment and Shapley allocation
    Analyze(CommonArgs),
    /// Judge a proposed cost split for stability and fairness
    Verify(CommonArgs),
    /// Write the core/Shapley diagram as SVG
    Plot(CommonArgs),
    /// Cross-check the closed forms against the brute-force oracles
    OracleCheck(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Scenario file (JSON)
    scenario: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Proposed split as `<provider>,<receiver>`; overrides the scenario's proposal
    #[arg(long, value_name = "A,B", allow_hyphen_values = true)]
    proposal: Option<String>,
    /// Write output here instead of stdout (required for `plot`)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Verify,
    Plot,
    OracleCheck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliConfig {
    pub command: Command,
    pub scenario_path: PathBuf,
    pub proposal_override: Option<(String, String)>,
    pub format: ReportFormat,
    pub output_path: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Scenario {
        path: PathBuf,
        source: ScenarioError,
    },
    #[error(transparent)]
    Isr(#[from] IsrError),
    #[error("--proposal: {0}")]
    Proposal(String),
    #[error(transparent)]
    Plot(#[from] PlotError),
    #[error(transparent)]
    Game(#[from] GameError),
}

impl CliConfig {
    /// Parses command-line arguments (including the program name).
    pub fn from_args<I, T>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args)?;
        let (command, args) = match cli.command {
            CliCommand::Analyze(a) => (Command::Analyze, a),
            CliCommand::Verify(a) => (Command::Verify, a),
            CliCommand::Plot(a) => (Command::Plot, a),
            CliCommand::OracleCheck(a) => (Command::OracleCheck, a),
        };
        let proposal_override = args.proposal.map(|p| match p.split_once(',') {
            Some((a, b)) => (a.to_string(), b.to_string()),
            None => (p, String::new()),
        });
        Ok(CliConfig {
            command,
            scenario_path: args.scenario,
            proposal_override,
            format: match args.format {
                FormatArg::Text => ReportFormat::Text,
                FormatArg::Json => ReportFormat::Json,
            },
            output_path: args.output,
        })
    }
}

/// Parses arguments and runs; clap errors map to exit 1 so that exit codes
/// 2 and 3 keep their verdict meanings.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match CliConfig::from_args(args) {
        Ok(config) => run(&config, stdout, stderr),
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_OK
            };
            let rendered = err.render().to_string();
            if err.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            code
        }
    }
}

pub fn run(config: &CliConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match execute(config, stdout) {
        Ok(code) => code,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            EXIT_ERROR
        }
    }
}

fn parse_proposal(a: &str, b: &str) -> Result<Allocation, CliError> {
    let parse = |text: &str| {
        parse_util(text).map_err(|BadNumber { text }| {
            CliError::Proposal(format!(
                "`{text}` is not an exact decimal; expected <provider>,<receiver>"
            ))
        })
    };
    Ok(Allocation::new(parse(a)?, parse(b)?))
}

fn execute(config: &CliConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let path = &config.scenario_path;
    let bytes = fs::read(path).map_err(|source| CliError::Read {
        path: path.clone(),
        source,
    })?;
    let scenario = load_scenario(&bytes).map_err(|source| CliError::Scenario {
        path: path.clone(),
        source,
    })?;
    let isr = scenario.to_isr_game()?;
    let proposal = match &config.proposal_override {
        Some((a, b)) => Some(ProposalRecord {
            allocation: parse_proposal(a, b)?,
            source: ProposalSource::CommandLine,
        }),
        None => scenario.proposal.clone().map(|allocation| ProposalRecord {
            allocation,
            source: ProposalSource::ScenarioFile,
        }),
    };

    match config.command {
        Command::Analyze => {
            let report = AnalysisReport::new(&isr, proposal, scenario.unit.clone());
            emit(config, stdout, &emit_report(&report, config.format))?;
            Ok(EXIT_OK)
        }
        Command::Verify => {
            if proposal.is_none() {
                return Err(CliError::Usage(
                    "verify needs a proposal: pass --proposal <provider>,<receiver> or add one to the scenario".into(),
                ));
            }
            let report = AnalysisReport::new(&isr, proposal, scenario.unit.clone());
            emit(config, stdout, &emit_report(&report, config.format))?;
            let verdict = report
                .verdict
                .as_ref()
                .expect("verdict for supplied proposal");
            Ok(match (verdict.stable, verdict.fair) {
                (true, true) => EXIT_OK,
                (true, false) => EXIT_STABLE_UNFAIR,
                (false, _) => EXIT_UNSTABLE,
            })
        }
        Command::Plot => {
            let Some(output) = &config.output_path else {
                return Err(CliError::Usage("plot needs --output <file.svg>".into()));
            };
            let svg = render_core_plot(&core_segment(&isr), &shapley(&isr), &isr)?;
            fs::write(output, svg).map_err(|source| CliError::Write {
                path: output.clone(),
                source,
            })?;
            Ok(EXIT_OK)
        }
        Command::OracleCheck => {
            let checks = oracle_checks(&isr, proposal.as_ref().map(|p| &p.allocation))?;
            let all_agree = checks.iter().all(|c| c.agree);
            let out = match config.format {
                ReportFormat::Text => {
                    let mut text = String::new();
                    for check in &checks {
                        let status = if check.agree { "agree" } else { "DIVERGE" };
                        text.push_str(&format!("{status}: {} ({})\n", check.name, check.detail));
                    }
                    text.push_str(if all_agree {
                        "all oracle checks agree\n"
                    } else {
                        "oracle divergence detected\n"
                    });
                    text.into_bytes()
                }
                ReportFormat::Json => {
                    let entries: Vec<_> = checks
                        .iter()
                        .map(|c| serde_json::json!({"name": c.name, "agree": c.agree, "detail": c.detail}))
                        .collect();
                    let mut text =
                        serde_json::json!({"agree": all_agree, "checks": entries}).to_string();
                    text.push('\n');
                    text.into_bytes()
                }
            };
            emit(config, stdout, &out)?;
            Ok(if all_agree {
                EXIT_OK
            } else {
                EXIT_ORACLE_DIVERGENCE
            })
        }
    }
}

fn emit(config: &CliConfig, stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    match &config.output_path {
        Some(path) => fs::write(path, bytes).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        }),
        None => stdout.write_all(bytes).map_err(|source| CliError::Write {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCheck {
    pub name: String,
    pub agree: bool,
    pub detail: String,
}

/// Compares closed forms with the `tu_core` oracles on one game: the game is
/// subadditive and submodular, the Shapley formulas match the permutation
/// average, and core membership matches coalition rationality on a set of
/// probe allocations.
pub fn oracle_checks(
    isr: &IsrGame,
    proposal: Option<&Allocation>,
) -> Result<Vec<OracleCheck>, GameError> {
    let tu = isr.to_tu_game();
    let mut checks = Vec::new();

    let subadditive = is_subadditive(&tu)?;
    checks.push(OracleCheck {
        name: "game is subadditive".into(),
        agree: subadditive.holds,
        detail: format!("exhaustive check holds = {}", subadditive.holds),
    });
    let submodular = is_submodular(&tu)?;
    checks.push(OracleCheck {
        name: "game is submodular".into(),
        agree: submodular.holds,
        detail: format!("exhaustive check holds = {}", submodular.holds),
    });

    let closed = shapley(isr);
    let brute = shapley_oracle(&tu)?;
    checks.push(OracleCheck {
        name: "Shapley closed form matches permutation oracle".into(),
        agree: closed.to_vec() == brute,
        detail: format!(
            "closed form {closed}, oracle ⟨{}⟩",
            brute.iter().map(format_util).collect::<Vec<_>>().join(", ")
        ),
    });

    let segment = core_segment(isr);
    let one = util(1);
    let mut probes = vec![
        ("alpha", segment.alpha.clone()),
        ("beta", segment.beta.clone()),
        ("Shapley point", closed.clone()),
        (
            "below alpha",
            Allocation::new(
                &segment.alpha.provider_share - &one,
                &segment.alpha.receiver_share + &one,
            ),
        ),
        (
            "above beta",
            Allocation::new(
                &segment.beta.provider_share + &one,
                &segment.beta.receiver_share - &one,
            ),
        ),
        (
            "inefficient",
            Allocation::new(
                segment.alpha.provider_share.clone(),
                &segment.alpha.receiver_share + &one,
            ),
        ),
    ];
    if let Some(p) = proposal {
        probes.push(("proposal", p.clone()));
    }
    for (name, point) in probes {
        let closed_verdict = is_stable(isr, &point).stable;
        let oracle_verdict = in_core_oracle(&tu, &point.to_vec())?.holds;
        checks.push(OracleCheck {
            name: format!("core membership of {name}"),
            agree: closed_verdict == oracle_verdict,
            detail: format!("{point}: closed form {closed_verdict}, oracle {oracle_verdict}"),
        });
    }
    Ok(checks)
}
