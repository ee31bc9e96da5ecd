//! Seeded generators and independent reference checks shared by the
//! integration suites. The reference checks work on explicit member sets and
//! the subset-weight Shapley formula, not on the library's bitmask loops or
//! permutation enumeration.
#![allow(dead_code)]

use std::collections::BTreeSet;

use isr_games::allocation::{core_segment, shapley, Allocation};
use isr_games::isr_game::{IsrGame, Role};
use isr_games::number::{ratio, util, Util};
use isr_games::tu_core::{Coalition, TuGame};
use num::{BigInt, BigRational, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const DENOMINATORS: [i64; 8] = [1, 1, 2, 3, 4, 5, 7, 10];

pub fn random_util(rng: &mut TestRng, max_numer: i64) -> Util {
    let denom = *DENOMINATORS.choose(rng).unwrap();
    ratio(rng.gen_range(0..=max_numer), denom)
}

/// A feasible ISR game: `T(σ)` is a random fraction of `T_A + T_B`, with
/// some draws pinned to the edges (no surplus, zero cost, zero traditional
/// cost on one side).
pub fn random_isr(rng: &mut TestRng) -> IsrGame {
    let a = random_util(rng, 200);
    let b = random_util(rng, 200);
    let sum = &a + &b;
    let t = match rng.gen_range(0..20) {
        0 => sum.clone(),
        1 => Util::zero(),
        _ => {
            let m = rng.gen_range(1..=12);
            &sum * ratio(rng.gen_range(0..=m), m)
        }
    };
    let (a, b) = match rng.gen_range(0..25) {
        0 => (Util::zero(), sum.clone()),
        1 => (sum.clone(), Util::zero()),
        _ => (a, b),
    };
    IsrGame::from_totals(t.min(&a + &b), a, b).expect("generated game is feasible")
}

/// Games where the Shapley point stays non-negative: `T(σ) >= |T_A - T_B|`.
pub fn random_isr_shapley_in_core(rng: &mut TestRng) -> IsrGame {
    loop {
        let game = random_isr(rng);
        let gap = (game.traditional(Role::Provider) - game.traditional(Role::Receiver)).abs();
        if *game.t_sigma() >= gap {
            return game;
        }
    }
}

/// Ten proposals per game covering the interior, both endpoints, the
/// Shapley point and several kinds of out-of-core splits.
pub fn probe_proposals(isr: &IsrGame, rng: &mut TestRng) -> Vec<Allocation> {
    let seg = core_segment(isr);
    let t = isr.t_sigma().clone();
    let on_line = |provider: Util| Allocation::new(provider.clone(), &t - provider);
    let width = &seg.provider_upper - &seg.provider_lower;
    let m = rng.gen_range(1..=9);
    let interior = &seg.provider_lower + &width * ratio(rng.gen_range(0..=m), m);
    let nudge = random_util(rng, 20) + ratio(1, 10);
    vec![
        seg.alpha.clone(),
        seg.beta.clone(),
        shapley(isr),
        on_line(interior.clone()),
        on_line(&seg.provider_lower - &nudge),
        on_line(&seg.provider_upper + &nudge),
        Allocation::new(interior.clone(), &t - &interior + &nudge),
        Allocation::new(interior.clone(), &t - &interior - &nudge),
        Allocation::new(-nudge.clone(), &t + &nudge),
        Allocation::new(random_util(rng, 400), random_util(rng, 400)),
    ]
}

/// Random TU game with `n` players and non-negative costs.
pub fn random_tu_game(rng: &mut TestRng, n: usize) -> TuGame {
    let mut costs: Vec<Util> = (0..1usize << n).map(|_| random_util(rng, 60)).collect();
    costs[0] = Util::zero();
    TuGame::from_costs(costs).unwrap()
}

/// Random game in which players `i` and `j` are interchangeable.
pub fn random_symmetric_game(rng: &mut TestRng, n: usize, i: usize, j: usize) -> TuGame {
    let mut costs = vec![Util::zero(); 1 << n];
    for bits in 1..(1u32 << n) {
        let s = Coalition::from_bits(bits);
        // canonical representative: if exactly one of i, j is present, use i
        let canonical = if s.contains(j) && !s.contains(i) {
            s.without(j).with(i)
        } else {
            s
        };
        if canonical == s {
            costs[bits as usize] = random_util(rng, 60);
        }
    }
    for bits in 1..(1u32 << n) {
        let s = Coalition::from_bits(bits);
        if s.contains(j) && !s.contains(i) {
            costs[bits as usize] = costs[s.without(j).with(i).bits() as usize].clone();
        }
    }
    TuGame::from_costs(costs).unwrap()
}

/// Random game in which player `dummy` always adds exactly `c({dummy})`.
pub fn random_dummy_game(rng: &mut TestRng, n: usize, dummy: usize) -> TuGame {
    let own = random_util(rng, 60);
    let mut costs = vec![Util::zero(); 1 << n];
    for bits in 1..(1u32 << n) {
        let s = Coalition::from_bits(bits);
        if !s.contains(dummy) {
            costs[bits as usize] = random_util(rng, 60);
        }
    }
    for bits in 1..(1u32 << n) {
        let s = Coalition::from_bits(bits);
        if s.contains(dummy) {
            costs[bits as usize] = &costs[s.without(dummy).bits() as usize] + &own;
        }
    }
    TuGame::from_costs(costs).unwrap()
}

// ---- reference checks on explicit sets ----

pub fn subsets(n: usize) -> Vec<BTreeSet<usize>> {
    let mut all = vec![BTreeSet::new()];
    for player in 0..n {
        let with: Vec<_> = all
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.insert(player);
                s
            })
            .collect();
        all.extend(with);
    }
    all
}

pub fn cost_of(game: &TuGame, members: &BTreeSet<usize>) -> Util {
    game.cost(Coalition::from_members(members.iter().copied()))
        .clone()
}

pub fn reference_subadditive(game: &TuGame) -> bool {
    let all = subsets(game.num_players());
    all.iter().all(|s| {
        all.iter().filter(|t| s.is_disjoint(t)).all(|t| {
            let union: BTreeSet<usize> = s.union(t).copied().collect();
            cost_of(game, s) + cost_of(game, t) >= cost_of(game, &union)
        })
    })
}

pub fn reference_submodular(game: &TuGame) -> bool {
    let all = subsets(game.num_players());
    all.iter().all(|s| {
        all.iter().all(|t| {
            let union: BTreeSet<usize> = s.union(t).copied().collect();
            let inter: BTreeSet<usize> = s.intersection(t).copied().collect();
            cost_of(game, s) + cost_of(game, t) >= cost_of(game, &union) + cost_of(game, &inter)
        })
    })
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, x| acc * BigInt::from(x))
}

/// Shapley value via `Σ_S |S|!(n-|S|-1)!/n! · (c(S∪i) - c(S))`.
pub fn reference_shapley(game: &TuGame) -> Vec<Util> {
    let n = game.num_players();
    let n_fact = factorial(n);
    (0..n)
        .map(|i| {
            subsets(n)
                .into_iter()
                .filter(|s| !s.contains(&i))
                .map(|s| {
                    let weight = BigRational::new(
                        factorial(s.len()) * factorial(n - s.len() - 1),
                        n_fact.clone(),
                    );
                    let mut with = s.clone();
                    with.insert(i);
                    weight * (cost_of(game, &with) - cost_of(game, &s))
                })
                .sum()
        })
        .collect()
}

/// Two-firm core membership written straight from the three conditions.
pub fn reference_two_firm_core(t: &Util, t_a: &Util, t_b: &Util, x: &Allocation) -> bool {
    let zero = util(0);
    x.provider_share >= zero
        && x.receiver_share >= zero
        && &x.provider_share + &x.receiver_share == *t
        && x.provider_share <= *t_a
        && x.receiver_share <= *t_b
}
