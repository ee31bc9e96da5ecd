//! Bilateral industrial symbiotic relations as two-player cost games.
//!
//! The provider discharges an excess resource that substitutes the
//! receiver's primary input. Without the relation each firm pays its
//! traditional cost (discharge, purchasing); with it the pair jointly pays
//! the operational cost (treatment, transportation, transaction).

use std::fmt;

use num::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::number::{format_util, Util};
use crate::tu_core::{PlayerId, TuGame};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Provider,
    Receiver,
}

impl Role {
    pub fn other(self) -> Role {
        match self {
            Role::Provider => Role::Receiver,
            Role::Receiver => Role::Provider,
        }
    }

    /// Player index in the derived TU game.
    pub fn index(self) -> usize {
        match self {
            Role::Provider => 0,
            Role::Receiver => 1,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Provider => "provider",
            Role::Receiver => "receiver",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirmRole {
    pub role: Role,
    pub label: String,
}

impl FirmRole {
    pub fn provider(label: impl Into<String>) -> Self {
        Self {
            role: Role::Provider,
            label: label.into(),
        }
    }

    pub fn receiver(label: impl Into<String>) -> Self {
        Self {
            role: Role::Receiver,
            label: label.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationalBreakdown {
    pub treatment: Util,
    pub transportation: Util,
    pub transaction: Util,
}

impl OperationalBreakdown {
    pub fn total(&self) -> Util {
        &self.treatment + &self.transportation + &self.transaction
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraditionalCosts {
    /// Provider's cost of discharging the excess resource.
    pub discharge: Util,
    /// Receiver's cost of purchasing the substituted input.
    pub purchasing: Util,
}

/// Operational cost of running the relation, pooled or itemized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperationalCost {
    Total(Util),
    Itemized(OperationalBreakdown),
}

impl OperationalCost {
    pub fn total(&self) -> Util {
        match self {
            OperationalCost::Total(total) => total.clone(),
            OperationalCost::Itemized(breakdown) => breakdown.total(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsrError {
    #[error(
        "infeasible ISR: operational cost T(σ) = {} exceeds total traditional cost \
         T_A(σ̄) + T_B(σ̄) = {}; a relation is feasible only if T(σ) ≤ T_A(σ̄) + T_B(σ̄)",
        format_util(.t_sigma), format_util(.sum_traditional)
    )]
    InfeasibleIsr {
        t_sigma: Util,
        sum_traditional: Util,
    },
    #[error("{field} is negative ({})", format_util(.value))]
    NegativeCost { field: &'static str, value: Util },
    #[error("{field} must be a {expected} firm")]
    RoleMismatch { field: &'static str, expected: Role },
}

/// A validated ISR game: `c({A}) = T_A(σ̄)`, `c({B}) = T_B(σ̄)`,
/// `c({A,B}) = T(σ)` with `T(σ) <= T_A(σ̄) + T_B(σ̄)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsrGame {
    provider: FirmRole,
    receiver: FirmRole,
    t_sigma: Util,
    t_bar_provider: Util,
    t_bar_receiver: Util,
    breakdown: Option<OperationalBreakdown>,
}

fn non_negative(field: &'static str, value: &Util) -> Result<(), IsrError> {
    if value.is_negative() {
        return Err(IsrError::NegativeCost {
            field,
            value: value.clone(),
        });
    }
    Ok(())
}

pub fn build_isr_game(
    provider: FirmRole,
    receiver: FirmRole,
    traditional: TraditionalCosts,
    operational: OperationalCost,
) -> Result<IsrGame, IsrError> {
    if provider.role != Role::Provider {
        return Err(IsrError::RoleMismatch {
            field: "provider",
            expected: Role::Provider,
        });
    }
    if receiver.role != Role::Receiver {
        return Err(IsrError::RoleMismatch {
            field: "receiver",
            expected: Role::Receiver,
        });
    }
    non_negative("traditional.discharge", &traditional.discharge)?;
    non_negative("traditional.purchasing", &traditional.purchasing)?;
    let breakdown = match operational {
        OperationalCost::Total(total) => {
            non_negative("operational.total", &total)?;
            return finish(provider, receiver, traditional, total, None);
        }
        OperationalCost::Itemized(breakdown) => breakdown,
    };
    non_negative("operational.treatment", &breakdown.treatment)?;
    non_negative("operational.transportation", &breakdown.transportation)?;
    non_negative("operational.transaction", &breakdown.transaction)?;
    let total = breakdown.total();
    finish(provider, receiver, traditional, total, Some(breakdown))
}

fn finish(
    provider: FirmRole,
    receiver: FirmRole,
    traditional: TraditionalCosts,
    t_sigma: Util,
    breakdown: Option<OperationalBreakdown>,
) -> Result<IsrGame, IsrError> {
    let sum_traditional = &traditional.discharge + &traditional.purchasing;
    if t_sigma > sum_traditional {
        return Err(IsrError::InfeasibleIsr {
            t_sigma,
            sum_traditional,
        });
    }
    Ok(IsrGame {
        provider,
        receiver,
        t_sigma,
        t_bar_provider: traditional.discharge,
        t_bar_receiver: traditional.purchasing,
        breakdown,
    })
}

impl IsrGame {
    /// Shorthand for a game with default firm labels and a pooled total.
    pub fn from_totals(
        t_sigma: Util,
        t_bar_provider: Util,
        t_bar_receiver: Util,
    ) -> Result<Self, IsrError> {
        build_isr_game(
            FirmRole::provider("A"),
            FirmRole::receiver("B"),
            TraditionalCosts {
                discharge: t_bar_provider,
                purchasing: t_bar_receiver,
            },
            OperationalCost::Total(t_sigma),
        )
    }

    pub fn provider(&self) -> &FirmRole {
        &self.provider
    }

    pub fn receiver(&self) -> &FirmRole {
        &self.receiver
    }

    pub fn firm(&self, role: Role) -> &FirmRole {
        match role {
            Role::Provider => &self.provider,
            Role::Receiver => &self.receiver,
        }
    }

    /// Operational cost `T(σ)`.
    pub fn t_sigma(&self) -> &Util {
        &self.t_sigma
    }

    /// Traditional cost `T_i(σ̄)` of the firm in `role`.
    pub fn traditional(&self, role: Role) -> &Util {
        match role {
            Role::Provider => &self.t_bar_provider,
            Role::Receiver => &self.t_bar_receiver,
        }
    }

    pub fn breakdown(&self) -> Option<&OperationalBreakdown> {
        self.breakdown.as_ref()
    }

    pub fn to_tu_game(&self) -> TuGame {
        let players = vec![
            PlayerId::new(Role::Provider.index(), self.provider.label.clone()),
            PlayerId::new(Role::Receiver.index(), self.receiver.label.clone()),
        ];
        let costs = vec![
            Util::zero(),
            self.t_bar_provider.clone(),
            self.t_bar_receiver.clone(),
            self.t_sigma.clone(),
        ];
        TuGame::from_dense(players, costs).expect("ISR game invariants imply a valid TU game")
    }

    /// `T_A(σ̄) + T_B(σ̄) - T(σ)`, never negative.
    pub fn total_saving(&self) -> Util {
        &self.t_bar_provider + &self.t_bar_receiver - &self.t_sigma
    }

    /// Multiplies every cost by `factor`; `None` unless `factor > 0`.
    pub fn scaled(&self, factor: &Util) -> Option<IsrGame> {
        if !factor.is_positive() {
            return None;
        }
        let scale = |v: &Util| v * factor;
        Some(IsrGame {
            provider: self.provider.clone(),
            receiver: self.receiver.clone(),
            t_sigma: scale(&self.t_sigma),
            t_bar_provider: scale(&self.t_bar_provider),
            t_bar_receiver: scale(&self.t_bar_receiver),
            breakdown: self.breakdown.as_ref().map(|b| OperationalBreakdown {
                treatment: scale(&b.treatment),
                transportation: scale(&b.transportation),
                transaction: scale(&b.transaction),
            }),
        })
    }
}
