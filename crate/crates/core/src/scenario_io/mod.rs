//! Scenario ingestion, analysis reports and the core/Shapley diagram.

mod plot;
mod report;
mod scenario;

pub use plot::{plot_transform, quantize, render_core_plot, AxisTransform, PlotError, QUANTUM};
pub use report::{
    emit_report, outcome_label, AnalysisReport, ProposalRecord, ProposalSource, ReportFormat,
};
pub use scenario::{
    emit_scenario, load_scenario, FirmInfo, Scenario, ScenarioError, ScenarioOperational,
    SCHEMA_VERSION,
};
