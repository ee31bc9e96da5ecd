//! Closed-form core segment and Shapley allocation for ISR games, and the
//! stability/fairness verdicts built on them.
//!
//! With `U_A = T(σ) - T_B(σ̄)` and `U_B = T(σ) - T_A(σ̄)`, the core is the set
//! of efficient splits with the provider paying between
//! `max(0, U_A)` and `min(T(σ), T_A(σ̄))`. The Shapley allocation charges each
//! firm `(T(σ) + T_i(σ̄) - T_j(σ̄)) / 2`.

use std::fmt;

use num::{Signed, Zero};

use crate::isr_game::{IsrGame, Role};
use crate::number::{format_util, ratio, Util};

/// Costs charged to the two firms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    pub provider_share: Util,
    pub receiver_share: Util,
}

impl Allocation {
    pub fn new(provider_share: Util, receiver_share: Util) -> Self {
        Self {
            provider_share,
            receiver_share,
        }
    }

    pub fn share(&self, role: Role) -> &Util {
        match role {
            Role::Provider => &self.provider_share,
            Role::Receiver => &self.receiver_share,
        }
    }

    pub fn total(&self) -> Util {
        &self.provider_share + &self.receiver_share
    }

    pub fn midpoint(&self, other: &Allocation) -> Allocation {
        let half = ratio(1, 2);
        Allocation::new(
            (&self.provider_share + &other.provider_share) * &half,
            (&self.receiver_share + &other.receiver_share) * &half,
        )
    }

    /// `|ΔA| + |ΔB|`.
    pub fn l1_distance(&self, other: &Allocation) -> Util {
        (&self.provider_share - &other.provider_share).abs()
            + (&self.receiver_share - &other.receiver_share).abs()
    }

    /// Shares in player-index order (provider first).
    pub fn to_vec(&self) -> Vec<Util> {
        vec![self.provider_share.clone(), self.receiver_share.clone()]
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "⟨{}, {}⟩",
            format_util(&self.provider_share),
            format_util(&self.receiver_share)
        )
    }
}

/// The stable allocations of a game: a segment on the efficiency line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreSegment {
    /// Provider pays its minimum stable share.
    pub alpha: Allocation,
    /// Provider pays its maximum stable share.
    pub beta: Allocation,
    pub provider_lower: Util,
    pub provider_upper: Util,
    /// True when non-negativity cuts the segment short of a `U_i` bound.
    pub clamp_active: bool,
}

impl CoreSegment {
    pub fn is_degenerate(&self) -> bool {
        self.provider_lower == self.provider_upper
    }

    pub fn contains_provider_share(&self, share: &Util) -> bool {
        self.provider_lower <= *share && *share <= self.provider_upper
    }
}

/// `U_i(σ) = T(σ) - T_j(σ̄)`: the least firm `i` can pay in a stable split,
/// ignoring non-negativity. May be negative.
pub fn u_bound(isr: &IsrGame, role: Role) -> Util {
    isr.t_sigma() - isr.traditional(role.other())
}

pub fn core_segment(isr: &IsrGame) -> CoreSegment {
    let t_sigma = isr.t_sigma();
    let u_provider = u_bound(isr, Role::Provider);
    let u_receiver = u_bound(isr, Role::Receiver);
    let provider_lower = u_provider.clone().max(Util::zero());
    let provider_upper = t_sigma.clone().min(isr.traditional(Role::Provider).clone());
    debug_assert!(provider_lower <= provider_upper, "ISR core is never empty");
    CoreSegment {
        alpha: Allocation::new(provider_lower.clone(), t_sigma - &provider_lower),
        beta: Allocation::new(provider_upper.clone(), t_sigma - &provider_upper),
        clamp_active: u_provider.is_negative() || u_receiver.is_negative(),
        provider_lower,
        provider_upper,
    }
}

pub fn shapley(isr: &IsrGame) -> Allocation {
    let share = |role: Role| {
        (isr.t_sigma() + isr.traditional(role) - isr.traditional(role.other())) * ratio(1, 2)
    };
    Allocation::new(share(Role::Provider), share(Role::Receiver))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapleyWarning {
    /// The Shapley formula charges a firm a negative amount, so the point
    /// falls outside the core. Happens iff `T(σ) < |T_A(σ̄) - T_B(σ̄)|`.
    NegativeShapleyShare { firm: Role, share: Util },
}

impl fmt::Display for ShapleyWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapleyWarning::NegativeShapleyShare { firm, share } => write!(
                f,
                "NegativeShapleyShare: {firm} Shapley share is {}, so the Shapley point lies outside the core",
                format_util(share)
            ),
        }
    }
}

pub fn shapley_warnings(isr: &IsrGame) -> Vec<ShapleyWarning> {
    let point = shapley(isr);
    [Role::Provider, Role::Receiver]
        .into_iter()
        .filter(|&role| point.share(role).is_negative())
        .map(|firm| ShapleyWarning::NegativeShapleyShare {
            firm,
            share: point.share(firm).clone(),
        })
        .collect()
}

/// A failed core condition with its magnitude.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonNegativity {
        firm: Role,
        share: Util,
    },
    /// Shares sum to `T(σ) + gap`.
    Efficiency {
        gap: Util,
    },
    /// The firm is charged `excess` above its traditional cost.
    IndividualRationality {
        firm: Role,
        excess: Util,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonNegativity { firm, share } => {
                write!(f, "NonNegativity({firm}, {})", format_util(share))
            }
            Violation::Efficiency { gap } => write!(f, "Efficiency({})", format_util(gap)),
            Violation::IndividualRationality { firm, excess } => {
                write!(f, "IndividualRationality({firm}, {})", format_util(excess))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityCheck {
    pub stable: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FairnessCheck {
    pub fair: bool,
    pub shapley: Allocation,
    pub shapley_distance: Util,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub stable: bool,
    pub fair: bool,
    pub violated_conditions: Vec<Violation>,
    pub shapley_distance: Util,
}

/// Checks non-negativity, efficiency and individual rationality, listing
/// every failure in that order (provider before receiver). Boundary values
/// are stable.
pub fn is_stable(isr: &IsrGame, proposal: &Allocation) -> StabilityCheck {
    let firms = [Role::Provider, Role::Receiver];
    let mut violations: Vec<Violation> = firms
        .iter()
        .filter(|&&role| proposal.share(role).is_negative())
        .map(|&firm| Violation::NonNegativity {
            firm,
            share: proposal.share(firm).clone(),
        })
        .collect();
    let gap = proposal.total() - isr.t_sigma();
    if !gap.is_zero() {
        violations.push(Violation::Efficiency { gap });
    }
    for firm in firms {
        let excess = proposal.share(firm) - isr.traditional(firm);
        if excess.is_positive() {
            violations.push(Violation::IndividualRationality { firm, excess });
        }
    }
    StabilityCheck {
        stable: violations.is_empty(),
        violations,
    }
}

/// Fair iff the proposal is exactly the Shapley allocation.
pub fn is_fair(isr: &IsrGame, proposal: &Allocation) -> FairnessCheck {
    let shapley = shapley(isr);
    let shapley_distance = proposal.l1_distance(&shapley);
    FairnessCheck {
        fair: shapley_distance.is_zero(),
        shapley,
        shapley_distance,
    }
}

pub fn classify(isr: &IsrGame, proposal: &Allocation) -> Verdict {
    let stability = is_stable(isr, proposal);
    let fairness = is_fair(isr, proposal);
    Verdict {
        stable: stability.stable,
        fair: fairness.fair,
        violated_conditions: stability.violations,
        shapley_distance: fairness.shapley_distance,
    }
}
