//! General n-player TU cost games and brute-force checkers.
//!
//! These are the reference implementations the closed-form two-firm results
//! are validated against. Every checker enumerates exhaustively, so player
//! counts are capped: [`MAX_PAIRWISE_PLAYERS`] for coalition-pair checks and
//! [`MAX_PERMUTATION_PLAYERS`] for the permutation Shapley value.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num::{BigInt, BigRational, Signed, Zero};
use thiserror::Error;

use crate::number::{format_util, Util};

pub const MAX_PAIRWISE_PLAYERS: usize = 12;
pub const MAX_PERMUTATION_PLAYERS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlayerId {
    pub index: usize,
    pub label: String,
}

impl PlayerId {
    pub fn new(index: usize, label: impl Into<String>) -> Self {
        Self {
            index,
            label: label.into(),
        }
    }
}

/// A set of players encoded as a bitmask over player indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_bits(bits: u32) -> Self {
        Coalition(bits)
    }

    pub fn from_members(members: impl IntoIterator<Item = usize>) -> Self {
        Coalition(members.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn singleton(index: usize) -> Self {
        Coalition(1 << index)
    }

    /// The coalition of all `n` players.
    pub fn grand(n: usize) -> Self {
        Coalition(((1u64 << n) - 1) as u32)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 & (1 << index) != 0
    }

    pub fn with(self, index: usize) -> Self {
        Coalition(self.0 | (1 << index))
    }

    pub fn without(self, index: usize) -> Self {
        Coalition(self.0 & !(1 << index))
    }

    pub fn union(self, other: Self) -> Self {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Coalition(self.0 & other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// All `2^n` coalitions over `n` players in ascending bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = Coalition> {
        (0..(1u32 << n)).map(Coalition)
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.members().join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("cost function does not cover coalition {0}")]
    MissingCoalition(Coalition),
    #[error("coalition {0} has negative cost {}", format_util(.1))]
    NegativeCost(Coalition, Util),
    #[error("empty coalition must cost 0, got {}", format_util(.0))]
    NonzeroEmptyCost(Util),
    #[error("player indices must be 0..n in order")]
    BadPlayerIndices,
    #[error("cost map names coalition {0}, which contains unknown players")]
    UnknownPlayers(Coalition),
    #[error("game has {0} players, above the enumeration bound of {1}")]
    GameTooLarge(usize, usize),
    #[error("games are defined over different player sets")]
    PlayerSetMismatch,
    #[error("allocation has {got} entries for a {expected}-player game")]
    LengthMismatch { expected: usize, got: usize },
}

/// A validated TU cost game `(N, c)`. The cost function is stored densely,
/// indexed by coalition bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuGame {
    players: Vec<PlayerId>,
    costs: Vec<Util>,
}

pub fn make_game(
    players: Vec<PlayerId>,
    cost: &BTreeMap<Coalition, Util>,
) -> Result<TuGame, GameError> {
    let n = players.len();
    if n > MAX_PAIRWISE_PLAYERS {
        return Err(GameError::GameTooLarge(n, MAX_PAIRWISE_PLAYERS));
    }
    if players.iter().enumerate().any(|(i, p)| p.index != i) {
        return Err(GameError::BadPlayerIndices);
    }
    let grand = Coalition::grand(n);
    if let Some(stray) = cost.keys().find(|s| s.union(grand) != grand) {
        return Err(GameError::UnknownPlayers(*stray));
    }
    let costs = Coalition::all(n)
        .map(|s| cost.get(&s).cloned().ok_or(GameError::MissingCoalition(s)))
        .collect::<Result<Vec<_>, _>>()?;
    TuGame::from_dense(players, costs)
}

impl TuGame {
    /// Builds a game from costs listed in ascending bitmask order.
    pub fn from_dense(players: Vec<PlayerId>, costs: Vec<Util>) -> Result<Self, GameError> {
        let n = players.len();
        if n > MAX_PAIRWISE_PLAYERS {
            return Err(GameError::GameTooLarge(n, MAX_PAIRWISE_PLAYERS));
        }
        if players.iter().enumerate().any(|(i, p)| p.index != i) {
            return Err(GameError::BadPlayerIndices);
        }
        if costs.len() < 1 << n {
            return Err(GameError::MissingCoalition(Coalition::from_bits(
                costs.len() as u32,
            )));
        }
        if costs.len() > 1 << n {
            return Err(GameError::UnknownPlayers(Coalition::from_bits(1 << n)));
        }
        if !costs[0].is_zero() {
            return Err(GameError::NonzeroEmptyCost(costs[0].clone()));
        }
        if let Some((bits, value)) = costs.iter().enumerate().find(|(_, c)| c.is_negative()) {
            return Err(GameError::NegativeCost(
                Coalition::from_bits(bits as u32),
                value.clone(),
            ));
        }
        Ok(Self { players, costs })
    }

    /// Builds a game with default labels `P0, P1, ...`.
    pub fn from_costs(costs: Vec<Util>) -> Result<Self, GameError> {
        let n = costs.len().max(1).trailing_zeros() as usize;
        let players = (0..n).map(|i| PlayerId::new(i, format!("P{i}"))).collect();
        Self::from_dense(players, costs)
    }

    /// The all-zero game over `players`.
    pub fn zero(players: Vec<PlayerId>) -> Result<Self, GameError> {
        let len = 1usize << players.len();
        Self::from_dense(players, vec![Util::zero(); len])
    }

    pub fn players(&self) -> &[PlayerId] {
        &self.players
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::grand(self.num_players())
    }

    pub fn cost(&self, coalition: Coalition) -> &Util {
        &self.costs[coalition.bits() as usize]
    }

    pub fn costs(&self) -> &[Util] {
        &self.costs
    }
}

/// A pair-inequality failure: the four cost values of `(S, T)` as evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairViolation {
    pub s: Coalition,
    pub t: Coalition,
    pub cost_s: Util,
    pub cost_t: Util,
    pub cost_union: Util,
    pub cost_intersection: Util,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    Pair(PairViolation),
    /// Allocated total differs from `c(N)`.
    Efficiency {
        allocated: Util,
        grand_cost: Util,
    },
    NegativeShare {
        player: usize,
        share: Util,
    },
    /// The members of `coalition` are charged more than `c(coalition)`.
    Coalition {
        coalition: Coalition,
        allocated: Util,
        cost: Util,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyWitness {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

impl PropertyWitness {
    fn holds() -> Self {
        Self {
            holds: true,
            counterexample: None,
        }
    }

    fn fails(counterexample: Counterexample) -> Self {
        Self {
            holds: false,
            counterexample: Some(counterexample),
        }
    }
}

fn check_pairwise_bound(game: &TuGame) -> Result<(), GameError> {
    let n = game.num_players();
    if n > MAX_PAIRWISE_PLAYERS {
        return Err(GameError::GameTooLarge(n, MAX_PAIRWISE_PLAYERS));
    }
    Ok(())
}

fn pair_violation(game: &TuGame, s: Coalition, t: Coalition) -> PairViolation {
    PairViolation {
        s,
        t,
        cost_s: game.cost(s).clone(),
        cost_t: game.cost(t).clone(),
        cost_union: game.cost(s.union(t)).clone(),
        cost_intersection: game.cost(s.intersection(t)).clone(),
    }
}

/// `c(S) + c(T) >= c(S ∪ T)` for every disjoint pair. Pairs are scanned with
/// `S` ascending, then `T` ascending; the first failure is reported.
pub fn is_subadditive(game: &TuGame) -> Result<PropertyWitness, GameError> {
    check_pairwise_bound(game)?;
    let n = game.num_players();
    for s in Coalition::all(n) {
        for t in Coalition::all(n).filter(|t| t.is_disjoint(s)) {
            if game.cost(s) + game.cost(t) < *game.cost(s.union(t)) {
                return Ok(PropertyWitness::fails(Counterexample::Pair(
                    pair_violation(game, s, t),
                )));
            }
        }
    }
    Ok(PropertyWitness::holds())
}

/// `c(S) + c(T) >= c(S ∪ T) + c(S ∩ T)` for every pair. The inequality is
/// symmetric in `S` and `T`, so only `T >= S` (as bitmasks) is scanned.
pub fn is_submodular(game: &TuGame) -> Result<PropertyWitness, GameError> {
    check_pairwise_bound(game)?;
    let n = game.num_players();
    let count = 1u32 << n;
    for s in 0..count {
        let s = Coalition::from_bits(s);
        for t in s.bits()..count {
            let t = Coalition::from_bits(t);
            let lhs = game.cost(s) + game.cost(t);
            let rhs = game.cost(s.union(t)) + game.cost(s.intersection(t));
            if lhs < rhs {
                return Ok(PropertyWitness::fails(Counterexample::Pair(
                    pair_violation(game, s, t),
                )));
            }
        }
    }
    Ok(PropertyWitness::holds())
}

pub fn add_games(g1: &TuGame, g2: &TuGame) -> Result<TuGame, GameError> {
    if g1.players != g2.players {
        return Err(GameError::PlayerSetMismatch);
    }
    let costs = g1.costs.iter().zip(&g2.costs).map(|(a, b)| a + b).collect();
    Ok(TuGame {
        players: g1.players.clone(),
        costs,
    })
}

/// Shapley value by enumerating all `n!` orderings and averaging each
/// player's marginal cost `c(P ∪ {i}) - c(P)`.
pub fn shapley_oracle(game: &TuGame) -> Result<Vec<Util>, GameError> {
    let n = game.num_players();
    if n > MAX_PERMUTATION_PLAYERS {
        return Err(GameError::GameTooLarge(n, MAX_PERMUTATION_PLAYERS));
    }
    let mut totals = vec![Util::zero(); n];
    let mut orderings: u64 = 0;
    for order in (0..n).permutations(n) {
        let mut preceding = Coalition::EMPTY;
        for player in order {
            let joined = preceding.with(player);
            totals[player] += game.cost(joined) - game.cost(preceding);
            preceding = joined;
        }
        orderings += 1;
    }
    let orderings = BigRational::from_integer(BigInt::from(orderings));
    Ok(totals.into_iter().map(|t| t / &orderings).collect())
}

/// Core membership by coalition rationality: efficiency, non-negative
/// shares, then `Σ_{i∈S} x_i <= c(S)` for each non-empty `S` in ascending
/// order. The first failed condition is the counterexample.
pub fn in_core_oracle(game: &TuGame, allocation: &[Util]) -> Result<PropertyWitness, GameError> {
    check_pairwise_bound(game)?;
    let n = game.num_players();
    if allocation.len() != n {
        return Err(GameError::LengthMismatch {
            expected: n,
            got: allocation.len(),
        });
    }
    let charged = |s: Coalition| -> Util { s.members().map(|i| &allocation[i]).sum() };

    let grand = game.grand_coalition();
    let allocated = charged(grand);
    if allocated != *game.cost(grand) {
        return Ok(PropertyWitness::fails(Counterexample::Efficiency {
            allocated,
            grand_cost: game.cost(grand).clone(),
        }));
    }
    if let Some(player) = allocation.iter().position(|x| x.is_negative()) {
        return Ok(PropertyWitness::fails(Counterexample::NegativeShare {
            player,
            share: allocation[player].clone(),
        }));
    }
    for s in Coalition::all(n).skip(1) {
        let allocated = charged(s);
        if allocated > *game.cost(s) {
            return Ok(PropertyWitness::fails(Counterexample::Coalition {
                coalition: s,
                allocated,
                cost: game.cost(s).clone(),
            }));
        }
    }
    Ok(PropertyWitness::holds())
}

impl PairViolation {
    /// Re-evaluates the subadditivity inequality on the recorded values.
    pub fn violates_subadditivity(&self) -> bool {
        self.s.is_disjoint(self.t) && &self.cost_s + &self.cost_t < self.cost_union
    }

    pub fn violates_submodularity(&self) -> bool {
        &self.cost_s + &self.cost_t < &self.cost_union + &self.cost_intersection
    }
}
