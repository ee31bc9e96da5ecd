//! Analysis reports in text and JSON form.
//!
//! JSON output is a single line with fixed key order and `", "` / `": "`
//! separators. Every amount is an exact string (see [`format_util`]).

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::allocation::{
    classify, core_segment, shapley, shapley_warnings, u_bound, Allocation, CoreSegment,
    ShapleyWarning, Verdict, Violation,
};
use crate::isr_game::{FirmRole, IsrGame, OperationalBreakdown, Role};
use crate::number::{format_util, Util};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProposalSource {
    CommandLine,
    ScenarioFile,
}

impl ProposalSource {
    fn describe(self) -> &'static str {
        match self {
            ProposalSource::CommandLine => "command line",
            ProposalSource::ScenarioFile => "scenario file",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProposalRecord {
    pub allocation: Allocation,
    pub source: ProposalSource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub unit: Option<String>,
    pub provider: FirmRole,
    pub receiver: FirmRole,
    pub t_sigma: Util,
    pub t_bar_provider: Util,
    pub t_bar_receiver: Util,
    pub breakdown: Option<OperationalBreakdown>,
    pub total_saving: Util,
    pub u_provider: Util,
    pub u_receiver: Util,
    pub core: CoreSegment,
    pub shapley: Allocation,
    pub proposal: Option<ProposalRecord>,
    pub verdict: Option<Verdict>,
    pub warnings: Vec<ShapleyWarning>,
}

impl AnalysisReport {
    pub fn new(isr: &IsrGame, proposal: Option<ProposalRecord>, unit: Option<String>) -> Self {
        let verdict = proposal.as_ref().map(|p| classify(isr, &p.allocation));
        Self {
            unit,
            provider: isr.provider().clone(),
            receiver: isr.receiver().clone(),
            t_sigma: isr.t_sigma().clone(),
            t_bar_provider: isr.traditional(Role::Provider).clone(),
            t_bar_receiver: isr.traditional(Role::Receiver).clone(),
            breakdown: isr.breakdown().cloned(),
            total_saving: isr.total_saving(),
            u_provider: u_bound(isr, Role::Provider),
            u_receiver: u_bound(isr, Role::Receiver),
            core: core_segment(isr),
            shapley: shapley(isr),
            proposal,
            verdict,
            warnings: shapley_warnings(isr),
        }
    }
}

pub fn emit_report(report: &AnalysisReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Text => render_text(report).into_bytes(),
        ReportFormat::Json => {
            let mut out = Vec::new();
            let mut ser = serde_json::Serializer::with_formatter(&mut out, InlineFormatter);
            JsonReport::from(report)
                .serialize(&mut ser)
                .expect("report serializes");
            out.push(b'\n');
            out
        }
    }
}

/// Verdict outcome label shared by the text and JSON forms.
pub fn outcome_label(verdict: &Verdict) -> &'static str {
    match (verdict.stable, verdict.fair) {
        (true, true) => "stable and fair",
        (true, false) => "stable, not fair",
        (false, true) => "fair, not stable",
        (false, false) => "neither stable nor fair",
    }
}

fn render_text(report: &AnalysisReport) -> String {
    let f = format_util;
    let mut out = String::new();
    let mut line = |text: String| {
        out.push_str(&text);
        out.push('\n');
    };
    line(format!(
        "ISR: {} (provider) / {} (receiver)",
        report.provider.label, report.receiver.label
    ));
    if let Some(unit) = &report.unit {
        line(format!("unit: {unit}"));
    }
    line(format!("operational cost T(σ): {}", f(&report.t_sigma)));
    if let Some(b) = &report.breakdown {
        line(format!(
            "  treatment {}, transportation {}, transaction {}",
            f(&b.treatment),
            f(&b.transportation),
            f(&b.transaction)
        ));
    }
    line(format!(
        "traditional cost T_A(σ̄) provider: {}",
        f(&report.t_bar_provider)
    ));
    line(format!(
        "traditional cost T_B(σ̄) receiver: {}",
        f(&report.t_bar_receiver)
    ));
    line(format!("total saving: {}", f(&report.total_saving)));
    line(format!(
        "U_A(σ): {}, U_B(σ): {}",
        f(&report.u_provider),
        f(&report.u_receiver)
    ));
    line(format!(
        "core segment (provider share): [{}, {}]",
        f(&report.core.provider_lower),
        f(&report.core.provider_upper)
    ));
    line(format!("  alpha: {}", report.core.alpha));
    line(format!("  beta: {}", report.core.beta));
    line(format!(
        "  non-negativity clamp: {}",
        if report.core.clamp_active {
            "active"
        } else {
            "inactive"
        }
    ));
    line(format!("shapley: {}", report.shapley));
    if let Some(proposal) = &report.proposal {
        line(format!(
            "proposal ({}): {}",
            proposal.source.describe(),
            proposal.allocation
        ));
    }
    if let Some(verdict) = &report.verdict {
        line(format!("verdict: {}", outcome_label(verdict)));
        line(format!("  stable: {}", verdict.stable));
        line(format!("  fair: {}", verdict.fair));
        for violation in &verdict.violated_conditions {
            line(format!("  violation: {violation}"));
        }
        line(format!(
            "  shapley distance: {}",
            f(&verdict.shapley_distance)
        ));
    }
    for warning in &report.warnings {
        line(format!("warning: {warning}"));
    }
    out
}

#[derive(Serialize)]
struct JsonReport<'a> {
    schema_version: &'static str,
    unit: Option<&'a str>,
    game: JsonGame<'a>,
    core: JsonCore,
    shapley: JsonPair,
    proposal: Option<JsonProposal>,
    verdict: Option<JsonVerdict>,
    warnings: Vec<JsonWarning>,
}

#[derive(Serialize)]
struct JsonGame<'a> {
    provider: &'a str,
    receiver: &'a str,
    operational_cost: String,
    breakdown: Option<JsonBreakdown>,
    traditional: JsonPair,
    total_saving: String,
    u_bounds: JsonPair,
}

#[derive(Serialize)]
struct JsonBreakdown {
    treatment: String,
    transportation: String,
    transaction: String,
}

#[derive(Serialize)]
struct JsonPair {
    provider: String,
    receiver: String,
}

impl JsonPair {
    fn new(provider: &Util, receiver: &Util) -> Self {
        Self {
            provider: format_util(provider),
            receiver: format_util(receiver),
        }
    }

    fn of(allocation: &Allocation) -> Self {
        Self::new(&allocation.provider_share, &allocation.receiver_share)
    }
}

#[derive(Serialize)]
struct JsonCore {
    provider_lower: String,
    provider_upper: String,
    alpha: JsonPair,
    beta: JsonPair,
    clamp_active: bool,
}

#[derive(Serialize)]
struct JsonProposal {
    source: ProposalSource,
    provider: String,
    receiver: String,
}

#[derive(Serialize)]
struct JsonVerdict {
    outcome: &'static str,
    stable: bool,
    fair: bool,
    violations: Vec<JsonViolation>,
    shapley_distance: String,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum JsonViolation {
    NonNegativity { firm: Role, share: String },
    Efficiency { gap: String },
    IndividualRationality { firm: Role, excess: String },
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum JsonWarning {
    NegativeShapleyShare { firm: Role, share: String },
}

impl<'a> From<&'a AnalysisReport> for JsonReport<'a> {
    fn from(r: &'a AnalysisReport) -> Self {
        JsonReport {
            schema_version: super::scenario::SCHEMA_VERSION,
            unit: r.unit.as_deref(),
            game: JsonGame {
                provider: &r.provider.label,
                receiver: &r.receiver.label,
                operational_cost: format_util(&r.t_sigma),
                breakdown: r.breakdown.as_ref().map(|b| JsonBreakdown {
                    treatment: format_util(&b.treatment),
                    transportation: format_util(&b.transportation),
                    transaction: format_util(&b.transaction),
                }),
                traditional: JsonPair::new(&r.t_bar_provider, &r.t_bar_receiver),
                total_saving: format_util(&r.total_saving),
                u_bounds: JsonPair::new(&r.u_provider, &r.u_receiver),
            },
            core: JsonCore {
                provider_lower: format_util(&r.core.provider_lower),
                provider_upper: format_util(&r.core.provider_upper),
                alpha: JsonPair::of(&r.core.alpha),
                beta: JsonPair::of(&r.core.beta),
                clamp_active: r.core.clamp_active,
            },
            shapley: JsonPair::of(&r.shapley),
            proposal: r.proposal.as_ref().map(|p| JsonProposal {
                source: p.source,
                provider: format_util(&p.allocation.provider_share),
                receiver: format_util(&p.allocation.receiver_share),
            }),
            verdict: r.verdict.as_ref().map(|v| JsonVerdict {
                outcome: match (v.stable, v.fair) {
                    (true, true) => "stable_fair",
                    (true, false) => "stable_unfair",
                    (false, true) => "unstable_fair",
                    (false, false) => "unstable_unfair",
                },
                stable: v.stable,
                fair: v.fair,
                violations: v
                    .violated_conditions
                    .iter()
                    .map(|violation| match violation {
                        Violation::NonNegativity { firm, share } => JsonViolation::NonNegativity {
                            firm: *firm,
                            share: format_util(share),
                        },
                        Violation::Efficiency { gap } => JsonViolation::Efficiency {
                            gap: format_util(gap),
                        },
                        Violation::IndividualRationality { firm, excess } => {
                            JsonViolation::IndividualRationality {
                                firm: *firm,
                                excess: format_util(excess),
                            }
                        }
                    })
                    .collect(),
                shapley_distance: format_util(&v.shapley_distance),
            }),
            warnings: r
                .warnings
                .iter()
                .map(|w| match w {
                    ShapleyWarning::NegativeShapleyShare { firm, share } => {
                        JsonWarning::NegativeShapleyShare {
                            firm: *firm,
                            share: format_util(share),
                        }
                    }
                })
                .collect(),
        }
    }
}

/// Single-line JSON with a space after `:` and `,`.
struct InlineFormatter;

impl Formatter for InlineFormatter {
    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            writer.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            writer.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        writer.write_all(b": ")
    }
}
