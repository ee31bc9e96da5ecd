//! Scenario files: one bilateral relation per JSON document.
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "unit": "kEUR",
//!   "provider": {"label": "A: glass manufacturer", "resource_out": "glass powder"},
//!   "receiver": {"label": "B: ceramics manufacturer", "resource_in": "primary input"},
//!   "traditional": {"discharge": "7", "purchasing": "11"},
//!   "operational": {"total": "15"},
//!   "proposal": {"provider_share": "5.5", "receiver_share": "9.5"}
//! }
//! ```
//!
//! `operational` holds either `total`, the three itemized costs
//! (`treatment`, `transportation`, `transaction`), or both when they agree.
//! Amounts are strings so they parse exactly.

use num::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::allocation::Allocation;
use crate::isr_game::{
    build_isr_game, FirmRole, IsrError, IsrGame, OperationalBreakdown, OperationalCost,
    TraditionalCosts,
};
use crate::number::{format_util, parse_util, Util};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("{0} must not be negative")]
    NegativeCost(String),
    #[error("{field}: `{text}` is not an exact decimal")]
    BadDecimal { field: String, text: String },
    #[error("unsupported schema_version `{0}` (expected \"{SCHEMA_VERSION}\")")]
    SchemaVersionUnsupported(String),
    #[error(
        "operational: itemized costs sum to {} but total is {}",
        format_util(.itemized), format_util(.total)
    )]
    OperationalConflict { itemized: Util, total: Util },
    #[error("operational: missing `{0}` (give `total` or all of treatment, transportation, transaction)")]
    IncompleteOperational(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirmInfo {
    pub label: String,
    /// Resource the firm sends (provider) or receives (receiver).
    pub resource: Option<String>,
}

/// Operational cost as written in the file. At least one of the two forms
/// is present, and when both are they agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioOperational {
    pub total: Option<Util>,
    pub breakdown: Option<OperationalBreakdown>,
}

impl ScenarioOperational {
    pub fn cost(&self) -> OperationalCost {
        match (&self.breakdown, &self.total) {
            (Some(breakdown), _) => OperationalCost::Itemized(breakdown.clone()),
            (None, Some(total)) => OperationalCost::Total(total.clone()),
            (None, None) => unreachable!("scenario operational cost has neither form"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub schema_version: String,
    pub description: Option<String>,
    /// Free-text unit, echoed in reports and never interpreted.
    pub unit: Option<String>,
    pub provider: FirmInfo,
    pub receiver: FirmInfo,
    pub traditional: TraditionalCosts,
    pub operational: ScenarioOperational,
    pub proposal: Option<Allocation>,
}

impl Scenario {
    /// Builds the game; fails if the relation is infeasible.
    pub fn to_isr_game(&self) -> Result<IsrGame, IsrError> {
        build_isr_game(
            FirmRole::provider(self.provider.label.clone()),
            FirmRole::receiver(self.receiver.label.clone()),
            self.traditional.clone(),
            self.operational.cost(),
        )
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit: Option<String>,
    provider: RawProvider,
    receiver: RawReceiver,
    traditional: RawTraditional,
    operational: RawOperational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    proposal: Option<RawProposal>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProvider {
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    resource_out: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReceiver {
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    resource_in: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTraditional {
    discharge: String,
    purchasing: String,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperational {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    total: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    treatment: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transportation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transaction: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProposal {
    provider_share: String,
    receiver_share: String,
}

fn classify_json_error(err: serde_json::Error) -> ScenarioError {
    let message = err.to_string();
    if let Some(rest) = message.strip_prefix("unknown field `") {
        if let Some((name, _)) = rest.split_once('`') {
            return ScenarioError::UnknownField(name.to_string());
        }
    }
    let message = match message.rfind(" at line ") {
        Some(cut) => message[..cut].to_string(),
        None => message,
    };
    ScenarioError::Parse {
        location: format!("line {} column {}", err.line(), err.column()),
        message,
    }
}

fn amount(field: &str, text: &str) -> Result<Util, ScenarioError> {
    parse_util(text).map_err(|_| ScenarioError::BadDecimal {
        field: field.to_string(),
        text: text.to_string(),
    })
}

fn cost(field: &str, text: &str) -> Result<Util, ScenarioError> {
    let value = amount(field, text)?;
    if value.is_negative() {
        return Err(ScenarioError::NegativeCost(field.to_string()));
    }
    Ok(value)
}

pub fn load_scenario(bytes: &[u8]) -> Result<Scenario, ScenarioError> {
    let raw: RawScenario = serde_json::from_slice(bytes).map_err(classify_json_error)?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(ScenarioError::SchemaVersionUnsupported(raw.schema_version));
    }
    let traditional = TraditionalCosts {
        discharge: cost("traditional.discharge", &raw.traditional.discharge)?,
        purchasing: cost("traditional.purchasing", &raw.traditional.purchasing)?,
    };
    let operational = operational(&raw.operational)?;
    let proposal = raw
        .proposal
        .map(|p| -> Result<Allocation, ScenarioError> {
            Ok(Allocation::new(
                amount("proposal.provider_share", &p.provider_share)?,
                amount("proposal.receiver_share", &p.receiver_share)?,
            ))
        })
        .transpose()?;
    Ok(Scenario {
        schema_version: raw.schema_version,
        description: raw.description,
        unit: raw.unit,
        provider: FirmInfo {
            label: raw.provider.label,
            resource: raw.provider.resource_out,
        },
        receiver: FirmInfo {
            label: raw.receiver.label,
            resource: raw.receiver.resource_in,
        },
        traditional,
        operational,
        proposal,
    })
}

fn operational(raw: &RawOperational) -> Result<ScenarioOperational, ScenarioError> {
    let total = raw
        .total
        .as_deref()
        .map(|t| cost("operational.total", t))
        .transpose()?;
    let items = [
        ("treatment", &raw.treatment),
        ("transportation", &raw.transportation),
        ("transaction", &raw.transaction),
    ];
    let breakdown = if items.iter().all(|(_, v)| v.is_none()) {
        if total.is_none() {
            return Err(ScenarioError::IncompleteOperational("total"));
        }
        None
    } else {
        let mut values = Vec::with_capacity(3);
        for (name, value) in items {
            let text = value
                .as_deref()
                .ok_or(ScenarioError::IncompleteOperational(name))?;
            values.push(cost(&format!("operational.{name}"), text)?);
        }
        let [treatment, transportation, transaction]: [Util; 3] =
            values.try_into().expect("three itemized costs");
        Some(OperationalBreakdown {
            treatment,
            transportation,
            transaction,
        })
    };
    if let (Some(breakdown), Some(total)) = (&breakdown, &total) {
        let itemized = breakdown.total();
        if itemized != *total {
            return Err(ScenarioError::OperationalConflict {
                itemized,
                total: total.clone(),
            });
        }
    }
    Ok(ScenarioOperational { total, breakdown })
}

/// Serializes a scenario back to pretty-printed JSON. Amounts use the exact
/// string forms of [`format_util`], so [`load_scenario`] reproduces them.
pub fn emit_scenario(scenario: &Scenario) -> String {
    let fmt = format_util;
    let raw = RawScenario {
        schema_version: scenario.schema_version.clone(),
        description: scenario.description.clone(),
        unit: scenario.unit.clone(),
        provider: RawProvider {
            label: scenario.provider.label.clone(),
            resource_out: scenario.provider.resource.clone(),
        },
        receiver: RawReceiver {
            label: scenario.receiver.label.clone(),
            resource_in: scenario.receiver.resource.clone(),
        },
        traditional: RawTraditional {
            discharge: fmt(&scenario.traditional.discharge),
            purchasing: fmt(&scenario.traditional.purchasing),
        },
        operational: RawOperational {
            total: scenario.operational.total.as_ref().map(fmt),
            treatment: scenario
                .operational
                .breakdown
                .as_ref()
                .map(|b| fmt(&b.treatment)),
            transportation: scenario
                .operational
                .breakdown
                .as_ref()
                .map(|b| fmt(&b.transportation)),
            transaction: scenario
                .operational
                .breakdown
                .as_ref()
                .map(|b| fmt(&b.transaction)),
        },
        proposal: scenario.proposal.as_ref().map(|p| RawProposal {
            provider_share: fmt(&p.provider_share),
            receiver_share: fmt(&p.receiver_share),
        }),
    };
    let mut out = serde_json::to_string_pretty(&raw).expect("scenario serializes");
    out.push('\n');
    out
}
