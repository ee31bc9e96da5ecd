//! Cost allocation for bilateral industrial symbiotic relations (ISRs).
//!
//! An ISR between a provider firm (which discharges a resource) and a
//! receiver firm (which would otherwise purchase it) is a two-player TU cost
//! game. This crate builds those games, computes their core segment and
//! Shapley allocation in closed form, judges proposed cost splits for
//! stability and fairness, and checks all of it against brute-force
//! n-player oracles in [`tu_core`].

#![allow(clippy::result_large_err)]

pub mod allocation;
pub mod cli;
pub mod isr_game;
pub mod number;
pub mod scenario_io;
pub mod tu_core;

pub use allocation::{
    classify, core_segment, is_fair, is_stable, shapley, u_bound, Allocation, CoreSegment, Verdict,
    Violation,
};
pub use isr_game::{build_isr_game, FirmRole, IsrError, IsrGame, Role};
pub use number::{format_util, parse_util, Util};
