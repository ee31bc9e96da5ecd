mod common;

use common::*;
use isr_games::allocation::{
    classify, core_segment, is_fair, is_stable, shapley, shapley_warnings, u_bound, Allocation,
};
use isr_games::isr_game::{IsrGame, Role};
use isr_games::isr_game::{OperationalBreakdown, TraditionalCosts};
use isr_games::number::{ratio, util, Util};
use isr_games::scenario_io::{
    emit_scenario, load_scenario, plot_transform, quantize, render_core_plot, FirmInfo, Scenario,
    ScenarioOperational,
};
use isr_games::tu_core::{
    add_games, in_core_oracle, is_subadditive, is_submodular, shapley_oracle, Counterexample,
    TuGame,
};
use num::{Signed, Zero};
use proptest::prelude::*;

fn util_strategy() -> impl Strategy<Value = Util> {
    (
        0i64..400,
        prop::sample::select(vec![1i64, 2, 3, 4, 5, 6, 8, 10]),
    )
        .prop_map(|(n, d)| ratio(n, d))
}

fn isr_strategy() -> impl Strategy<Value = IsrGame> {
    (util_strategy(), util_strategy(), 1i64..=16)
        .prop_flat_map(|(a, b, m)| (Just(a), Just(b), Just(m), 0..=m))
        .prop_map(|(a, b, m, k)| {
            let t = (&a + &b) * ratio(k, m);
            IsrGame::from_totals(t, a, b).unwrap()
        })
}

fn tu_game_strategy(max_players: usize) -> impl Strategy<Value = TuGame> {
    (1..=max_players).prop_flat_map(|n| {
        prop::collection::vec(util_strategy(), 1usize << n).prop_map(|mut costs| {
            costs[0] = Util::zero();
            TuGame::from_costs(costs).unwrap()
        })
    })
}

fn allocation_strategy() -> impl Strategy<Value = Allocation> {
    ((-50i64..450, 1i64..6), (-50i64..450, 1i64..6))
        .prop_map(|((a, da), (b, db))| Allocation::new(ratio(a, da), ratio(b, db)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // ---- tu_core ----

    #[test]
    fn pair_checks_match_reference(game in tu_game_strategy(4)) {
        let sub = is_subadditive(&game).unwrap();
        let modular = is_submodular(&game).unwrap();
        prop_assert_eq!(sub.holds, reference_subadditive(&game));
        prop_assert_eq!(modular.holds, reference_submodular(&game));
        if let Some(Counterexample::Pair(pair)) = &sub.counterexample {
            prop_assert!(pair.violates_subadditivity());
        }
        if let Some(Counterexample::Pair(pair)) = &modular.counterexample {
            prop_assert!(pair.violates_submodularity());
        }
        // with c(∅) = 0, submodularity implies subadditivity
        if modular.holds {
            prop_assert!(sub.holds);
        }
    }

    #[test]
    fn permutation_shapley_matches_subset_formula(game in tu_game_strategy(4)) {
        let value = shapley_oracle(&game).unwrap();
        prop_assert_eq!(&value, &reference_shapley(&game));
        let total: Util = value.iter().sum();
        prop_assert_eq!(&total, game.cost(game.grand_coalition()));
    }

    #[test]
    fn shapley_oracle_is_additive(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = rng(seed);
        let g1 = random_tu_game(&mut rng, n);
        let g2 = random_tu_game(&mut rng, n);
        let sum = add_games(&g1, &g2).unwrap();
        let expected: Vec<Util> = shapley_oracle(&g1).unwrap().iter()
            .zip(shapley_oracle(&g2).unwrap())
            .map(|(a, b)| a + b)
            .collect();
        prop_assert_eq!(shapley_oracle(&sum).unwrap(), expected);
    }

    #[test]
    fn sums_preserve_pair_properties(g1 in tu_game_strategy(3), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let g2 = random_tu_game(&mut rng, g1.num_players());
        let sum = add_games(&g1, &g2).unwrap();
        if is_subadditive(&g1).unwrap().holds && is_subadditive(&g2).unwrap().holds {
            prop_assert!(is_subadditive(&sum).unwrap().holds);
        }
        if is_submodular(&g1).unwrap().holds && is_submodular(&g2).unwrap().holds {
            prop_assert!(is_submodular(&sum).unwrap().holds);
        }
        let doubled = add_games(&g1, &g1).unwrap();
        prop_assert_eq!(is_submodular(&doubled).unwrap().holds, is_submodular(&g1).unwrap().holds);
    }

    #[test]
    fn in_core_witness_is_a_real_violation(game in tu_game_strategy(3), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let allocation: Vec<Util> = (0..game.num_players()).map(|_| random_util(&mut rng, 40)).collect();
        let witness = in_core_oracle(&game, &allocation).unwrap();
        match witness.counterexample {
            None => prop_assert!(witness.holds),
            Some(Counterexample::Coalition { coalition, allocated, cost }) => {
                let charged: Util = coalition.members().map(|i| &allocation[i]).sum();
                prop_assert_eq!(&charged, &allocated);
                prop_assert!(allocated > cost);
                prop_assert_eq!(&cost, game.cost(coalition));
            }
            Some(Counterexample::Efficiency { allocated, grand_cost }) => {
                prop_assert_ne!(allocated, grand_cost);
            }
            Some(Counterexample::NegativeShare { share, .. }) => prop_assert!(share.is_negative()),
            Some(Counterexample::Pair(_)) => prop_assert!(false, "pair witness from core oracle"),
        }
    }

    // ---- isr_game ----

    #[test]
    fn isr_games_are_subadditive_and_submodular(isr in isr_strategy()) {
        let tu = isr.to_tu_game();
        prop_assert!(is_subadditive(&tu).unwrap().holds);
        prop_assert!(is_submodular(&tu).unwrap().holds);
        let saving = isr.total_saving();
        prop_assert!(!saving.is_negative());
        let sum = isr.traditional(Role::Provider) + isr.traditional(Role::Receiver);
        prop_assert_eq!(saving.is_zero(), *isr.t_sigma() == sum);
    }

    // ---- allocation ----

    #[test]
    fn core_segment_invariants(isr in isr_strategy()) {
        let seg = core_segment(&isr);
        prop_assert!(seg.provider_lower <= seg.provider_upper);
        prop_assert_eq!(&seg.alpha.provider_share, &seg.provider_lower);
        prop_assert_eq!(&seg.beta.provider_share, &seg.provider_upper);
        prop_assert_eq!(&seg.alpha.total(), isr.t_sigma());
        prop_assert_eq!(&seg.beta.total(), isr.t_sigma());
        prop_assert_eq!(&shapley(&isr).total(), isr.t_sigma());
        prop_assert!(is_stable(&isr, &seg.alpha).stable);
        prop_assert!(is_stable(&isr, &seg.beta).stable);
    }

    #[test]
    fn stability_matches_oracles(isr in isr_strategy(), proposal in allocation_strategy()) {
        let stable = is_stable(&isr, &proposal).stable;
        let oracle = in_core_oracle(&isr.to_tu_game(), &proposal.to_vec()).unwrap().holds;
        prop_assert_eq!(stable, oracle);
        let direct = reference_two_firm_core(
            isr.t_sigma(),
            isr.traditional(Role::Provider),
            isr.traditional(Role::Receiver),
            &proposal,
        );
        prop_assert_eq!(stable, direct);
        let seg = core_segment(&isr);
        let on_segment = proposal.total() == *isr.t_sigma() && seg.contains_provider_share(&proposal.provider_share);
        prop_assert_eq!(stable, on_segment);
    }

    #[test]
    fn shapley_matches_oracle_and_is_rational(isr in isr_strategy()) {
        let point = shapley(&isr);
        prop_assert_eq!(point.to_vec(), shapley_oracle(&isr.to_tu_game()).unwrap());
        for role in [Role::Provider, Role::Receiver] {
            prop_assert!(point.share(role) <= isr.traditional(role));
        }
        let verdict = classify(&isr, &point);
        prop_assert!(verdict.fair);
        let gap = (isr.traditional(Role::Provider) - isr.traditional(Role::Receiver)).abs();
        prop_assert_eq!(verdict.stable, *isr.t_sigma() >= gap);
        prop_assert_eq!(shapley_warnings(&isr).is_empty(), *isr.t_sigma() >= gap);
    }

    #[test]
    fn fair_and_unstable_never_happens_inside_the_region(isr in isr_strategy(), proposal in allocation_strategy()) {
        let gap = (isr.traditional(Role::Provider) - isr.traditional(Role::Receiver)).abs();
        let verdict = classify(&isr, &proposal);
        prop_assert_eq!(verdict.fair, verdict.shapley_distance.is_zero());
        prop_assert_eq!(verdict.stable, verdict.violated_conditions.is_empty());
        if *isr.t_sigma() >= gap && verdict.fair {
            prop_assert!(verdict.stable);
        }
        prop_assert_eq!(verdict.fair, is_fair(&isr, &proposal).fair);
    }

    #[test]
    fn shapley_is_segment_midpoint_when_unclamped(isr in isr_strategy()) {
        let seg = core_segment(&isr);
        let unclamped = !u_bound(&isr, Role::Provider).is_negative()
            && !u_bound(&isr, Role::Receiver).is_negative();
        prop_assert_eq!(unclamped, !seg.clamp_active);
        if unclamped {
            prop_assert_eq!(shapley(&isr), seg.alpha.midpoint(&seg.beta));
        }
    }

    #[test]
    fn allocations_scale_with_costs(isr in isr_strategy(), k in 1i64..50, d in 1i64..7) {
        let factor = ratio(k, d);
        let scaled = isr.scaled(&factor).unwrap();
        let scale = |a: &Allocation| Allocation::new(&a.provider_share * &factor, &a.receiver_share * &factor);
        prop_assert_eq!(shapley(&scaled), scale(&shapley(&isr)));
        let (seg, scaled_seg) = (core_segment(&isr), core_segment(&scaled));
        prop_assert_eq!(scaled_seg.alpha, scale(&seg.alpha));
        prop_assert_eq!(scaled_seg.beta, scale(&seg.beta));
    }

    // ---- scenario_io ----

    #[test]
    fn scenario_round_trip(
        discharge in util_strategy(),
        purchasing in util_strategy(),
        legs in (util_strategy(), util_strategy(), util_strategy()),
        itemized in any::<bool>(),
        with_total in any::<bool>(),
        proposal in prop::option::of(allocation_strategy()),
    ) {
        let breakdown = OperationalBreakdown { treatment: legs.0, transportation: legs.1, transaction: legs.2 };
        let operational = if itemized {
            ScenarioOperational { total: with_total.then(|| breakdown.total()), breakdown: Some(breakdown) }
        } else {
            ScenarioOperational { total: Some(breakdown.total()), breakdown: None }
        };
        let scenario = Scenario {
            schema_version: "1".into(),
            description: None,
            unit: Some("kEUR".into()),
            provider: FirmInfo { label: "A \"glass\"".into(), resource: Some("powder".into()) },
            receiver: FirmInfo { label: "B".into(), resource: None },
            traditional: TraditionalCosts { discharge, purchasing },
            operational,
            proposal,
        };
        let emitted = emit_scenario(&scenario);
        prop_assert_eq!(load_scenario(emitted.as_bytes()).unwrap(), scenario.clone());
        prop_assert_eq!(emit_scenario(&scenario), emitted);
    }

    #[test]
    fn svg_places_points_exactly(isr in isr_strategy()) {
        let seg = core_segment(&isr);
        let point = shapley(&isr);
        let svg = String::from_utf8(render_core_plot(&seg, &point, &isr).unwrap()).unwrap();
        prop_assert_eq!(&svg, &String::from_utf8(render_core_plot(&seg, &point, &isr).unwrap()).unwrap());
        let tf = plot_transform(&seg, &point, &isr);
        for (name, p) in [("alpha", &seg.alpha), ("beta", &seg.beta), ("gamma", &point)] {
            let (cx, cy) = marker_position(&svg, name).expect("marker present");
            prop_assert_eq!(cx, quantize(&tf.x(&p.provider_share)));
            prop_assert_eq!(cy, quantize(&tf.y(&p.receiver_share)));
        }
        // exact pre-quantization check: α and β lie on the drawn efficiency line
        let t = isr.t_sigma();
        for p in [&seg.alpha, &seg.beta] {
            let lhs = (tf.x(&p.provider_share) - tf.x(&util(0))) + (tf.y(&util(0)) - tf.y(&p.receiver_share));
            prop_assert_eq!(lhs, tf.x(t) - tf.x(&util(0)));
        }
    }
}

/// Finds the circle whose id names `point` (alone or merged with others).
pub fn marker_position(svg: &str, point: &str) -> Option<(String, String)> {
    svg.lines()
        .filter(|l| l.starts_with("<circle id=\""))
        .find(|l| {
            let id = l.split('"').nth(1).unwrap_or("");
            id.split('-').any(|part| part == point)
        })
        .map(|l| {
            let attr = |name: &str| {
                let start = l.find(&format!("{name}=\"")).unwrap() + name.len() + 2;
                l[start..].split('"').next().unwrap().to_string()
            };
            (attr("cx"), attr("cy"))
        })
}

#[test]
fn symmetric_and_dummy_players() {
    let mut rng = rng(7);
    for n in 2..=4 {
        for _ in 0..50 {
            let game = random_symmetric_game(&mut rng, n, 0, n - 1);
            let value = shapley_oracle(&game).unwrap();
            assert_eq!(value[0], value[n - 1]);

            let game = random_dummy_game(&mut rng, n, 1);
            let value = shapley_oracle(&game).unwrap();
            assert_eq!(
                &value[1],
                game.cost(isr_games::tu_core::Coalition::singleton(1))
            );
        }
    }
}

#[test]
fn clamped_game_draws_alpha_on_vertical_axis() {
    let isr = IsrGame::from_totals(util(1), util(1), util(10)).unwrap();
    let seg = core_segment(&isr);
    let svg = String::from_utf8(render_core_plot(&seg, &shapley(&isr), &isr).unwrap()).unwrap();
    let (alpha_x, _) = marker_position(&svg, "alpha").unwrap();
    let axis = svg
        .lines()
        .find(|l| l.starts_with("<line id=\"y-axis\""))
        .unwrap();
    assert!(
        axis.contains(&format!("x1=\"{alpha_x}\"")),
        "{axis} vs {alpha_x}"
    );
}
