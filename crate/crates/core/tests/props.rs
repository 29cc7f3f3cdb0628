//! Property tests for the structural invariants: exact arithmetic, class
//! index inequalities, conservation, irrevocability, offer consistency,
//! solver agreement, and player-model equivalences.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ocg_core::game::{ArrivalOrder, Coalition, CoalitionStructure, Game, PlayerId};
use ocg_core::lab::{check_non_wasteful, check_trace_blocks, random_instance};
use ocg_core::policy::PolicySpec;
use ocg_core::sim::{
    simulate, simulate_all_branches, PlayerModel, TieBreak, DEFAULT_BRANCH_CAP,
};
use ocg_core::solver::{brute_force_partition, for_each_partition, optimal_partition};
use ocg_core::value::Value;

fn v(s: &str) -> Value {
    s.parse().unwrap()
}

fn arb_bounds() -> impl Strategy<Value = (Value, Value)> {
    // min = a/b in (0, 4], max = min + c/d with c/d in [0, 6].
    (1i64..=8, 1i64..=4, 0i64..=12, 1i64..=4).prop_map(|(a, b, c, d)| {
        let min = Value::ratio(a, b);
        let max = &min + &Value::ratio(c, d);
        (min, max)
    })
}

fn seeded_order(seed: u64, n: usize) -> ArrivalOrder {
    use rand::seq::SliceRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<PlayerId> = (0..n).map(PlayerId).collect();
    ids.shuffle(&mut rng);
    ArrivalOrder::new(ids).unwrap()
}

#[test]
fn rational_normalization_and_comparison_cross_multiply() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let p: i64 = rng.gen_range(-10_000..=10_000);
        let q: i64 = rng.gen_range(1..=10_000);
        let r: i64 = rng.gen_range(-10_000..=10_000);
        let s: i64 = rng.gen_range(1..=10_000);
        let a = Value::ratio(p, q);
        let b = Value::ratio(r, s);
        // Lowest terms.
        let g = num_integer::gcd(a.numer().clone(), a.denom().clone());
        assert!(g == 1.into() || (a.numer() == &0.into() && a.denom() == &1.into()));
        // Ordering agrees with cross-multiplication.
        assert_eq!(a < b, p * s < r * q);
        assert_eq!(a == b, p * s == r * q);
    }
}

#[test]
fn class_index_brackets_the_bound_ratio() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..1000 {
        let min = Value::ratio(rng.gen_range(1..=50), rng.gen_range(1..=20));
        let max = &min + &Value::ratio(rng.gen_range(0..=120), rng.gen_range(1..=20));
        let game = Game::new(
            1,
            vec![Value::zero(), min.clone()],
            min.clone(),
            max.clone(),
        )
        .unwrap();
        let d = game.delta().value();
        assert!(&min * d <= max);
        assert!(&min * (d + 1) > max);
    }
}

proptest! {
    #[test]
    fn social_welfare_is_additive_over_disjoint_structures(
        seed in any::<u64>(),
        split in 0u8..8,
    ) {
        let game = random_instance(5, &v("1"), &v("3"), seed, None).unwrap();
        // Take a partition and split its blocks into two structures.
        let mut partitions: Vec<Vec<Coalition>> = Vec::new();
        for_each_partition(5, |blocks| partitions.push(blocks.to_vec()));
        let blocks = partitions[(seed % partitions.len() as u64) as usize].clone();
        let cut = (split as usize) % (blocks.len() + 1);
        let left = CoalitionStructure::new(blocks[..cut].to_vec()).unwrap();
        let right = CoalitionStructure::new(blocks[cut..].to_vec()).unwrap();
        let whole = CoalitionStructure::new(blocks).unwrap();
        prop_assert_eq!(
            whole.social_welfare(&game),
            left.social_welfare(&game) + right.social_welfare(&game)
        );
    }

    #[test]
    fn validation_accepts_exactly_monotone_bounded_tables(seed in any::<u64>()) {
        // Raw tables drawn without the monotone-closure repair.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 3usize;
        let min = v("1");
        let max = v("3");
        let pool = ["1/2", "1", "3/2", "2", "5/2", "3", "7/2"];
        let mut values = vec![Value::zero()];
        for _ in 1..(1 << n) {
            values.push(v(pool[rng.gen_range(0..pool.len())]));
        }
        let monotone = (1..(1 << n)).all(|m: usize| {
            (0..n).all(|j| {
                let bit = 1 << j;
                m & bit == 0 || values[m ^ bit] <= values[m]
            })
        });
        let bounded = values[1..].iter().all(|x| x >= &min && x <= &max);
        let accepted = Game::new(n, values, min, max).is_ok();
        prop_assert_eq!(accepted, monotone && bounded);
    }

    #[test]
    fn zero_threshold_matches_plain_marginal_contributions(
        seed in any::<u64>(),
        n in 2usize..=5,
    ) {
        let game = random_instance(n, &v("1"), &v("3"), seed, None).unwrap();
        let order = seeded_order(seed ^ 0xff, n);
        let amc = PolicySpec::Amc.bind(&game).unwrap();
        let amc0 = PolicySpec::AmcH { h: v("0") }.bind(&game).unwrap();
        for tie in [TieBreak::NewFirst, TieBreak::EarliestCoalition] {
            let a = simulate(&game, &order, &amc, PlayerModel::Greedy, tie).unwrap();
            let b = simulate(&game, &order, &amc0, PlayerModel::Greedy, tie).unwrap();
            prop_assert_eq!(&a.final_ledger, &b.final_ledger);
            prop_assert_eq!(&a.final_structure, &b.final_structure);
            for (sa, sb) in a.steps.iter().zip(&b.steps) {
                prop_assert_eq!(&sa.ledger, &sb.ledger);
            }
        }
    }

    #[test]
    fn every_policy_conserves_value_on_every_branch(
        seed in any::<u64>(),
        n in 2usize..=5,
    ) {
        let game = random_instance(n, &v("1"), &v("4"), seed, None).unwrap();
        let order = seeded_order(seed ^ 0xabc, n);
        let eps = Value::one() / Value::integer(2 * (n * n) as i64);
        let specs = [
            PolicySpec::Amc,
            PolicySpec::AmcH { h: v("1") },
            PolicySpec::OraclePair,
            PolicySpec::BankGreedy { mu: v("1") },
            PolicySpec::BankPessimistic { mu: v("1/2"), eps },
        ];
        for spec in specs {
            let policy = spec.bind(&game).unwrap();
            let traces = simulate_all_branches(
                &game, &order, &policy, PlayerModel::Greedy, DEFAULT_BRANCH_CAP,
            ).unwrap();
            for trace in traces {
                let verdict = check_non_wasteful(&trace, &game);
                prop_assert!(verdict.holds, "{:?}", verdict.counterexample);
                // Banks never go negative.
                for step in &trace.steps {
                    for (_, bank) in step.ledger.banks() {
                        prop_assert!(!bank.amount.is_negative());
                    }
                }
            }
        }
    }

    #[test]
    fn irrevocable_policies_never_reduce_firm_shares_and_stay_consistent(
        seed in any::<u64>(),
        n in 2usize..=5,
    ) {
        let game = random_instance(n, &v("1"), &v("4"), seed, None).unwrap();
        let order = seeded_order(seed ^ 0x11, n);
        for spec in [
            PolicySpec::Amc,
            PolicySpec::AmcH { h: v("3/2") },
            PolicySpec::OraclePair,
        ] {
            let policy = spec.bind(&game).unwrap();
            let trace =
                simulate(&game, &order, &policy, PlayerModel::Greedy, TieBreak::NewFirst)
                    .unwrap();
            prop_assert!(ocg_core::lab::check_irrevocable(&trace).holds);
            // Offer/apply consistency: the chosen offer's total is exactly
            // the joiner's firm increment, and it dominates founding.
            let mut prev = vec![Value::zero(); n];
            for step in &trace.steps {
                let chosen = step
                    .offers
                    .iter()
                    .find(|o| o.target == step.chosen)
                    .unwrap();
                let increment =
                    step.ledger.firm(step.player).clone() - prev[step.player.index()].clone();
                prop_assert_eq!(&chosen.total, &increment);
                let founding = step.offers.iter().find(|o| o.target.is_empty()).unwrap();
                prop_assert!(chosen.total >= founding.total);
                prop_assert!(
                    &chosen.total >= game.value(Coalition::singleton(step.player))
                );
                for (i, slot) in prev.iter_mut().enumerate() {
                    *slot = step.ledger.firm(PlayerId(i)).clone();
                }
            }
        }
    }

    #[test]
    fn player_models_agree_under_irrevocable_policies(
        seed in any::<u64>(),
        n in 2usize..=5,
    ) {
        let game = random_instance(n, &v("1"), &v("7/2"), seed, None).unwrap();
        let order = seeded_order(seed ^ 0x77, n);
        for spec in [PolicySpec::Amc, PolicySpec::AmcH { h: v("1/2") }] {
            let policy = spec.bind(&game).unwrap();
            let a = simulate(&game, &order, &policy, PlayerModel::Greedy, TieBreak::NewFirst)
                .unwrap();
            let b = simulate(
                &game, &order, &policy, PlayerModel::Pessimistic, TieBreak::NewFirst,
            )
            .unwrap();
            prop_assert_eq!(a.final_structure, b.final_structure);
            prop_assert_eq!(a.final_ledger, b.final_ledger);
        }
    }

    #[test]
    fn bank_policies_form_the_same_structure_for_both_player_models(
        seed in any::<u64>(),
        n in 2usize..=6,
    ) {
        let game = random_instance(n, &v("1"), &v("4"), seed, None).unwrap();
        let order = seeded_order(seed ^ 0xb4, n);
        let greedy = PolicySpec::BankGreedy { mu: v("1") }.bind(&game).unwrap();
        let eps = Value::one() / Value::integer(2 * (n * n) as i64);
        let pess = PolicySpec::BankPessimistic { mu: v("1"), eps }
            .bind(&game)
            .unwrap();
        let a = simulate(
            &game, &order, &greedy, PlayerModel::Greedy, TieBreak::EarliestCoalition,
        )
        .unwrap();
        let b = simulate(
            &game, &order, &pess, PlayerModel::Pessimistic, TieBreak::EarliestCoalition,
        )
        .unwrap();
        prop_assert_eq!(a.final_structure, b.final_structure);
    }

    #[test]
    fn solvers_agree_and_bound_every_greedy_outcome(
        seed in any::<u64>(),
        n in 2usize..=6,
    ) {
        let game = random_instance(n, &v("1"), &v("3"), seed, None).unwrap();
        let dp = optimal_partition(&game).unwrap();
        let bf = brute_force_partition(&game).unwrap();
        prop_assert_eq!(&dp.welfare, &bf.welfare);
        prop_assert_eq!(&dp.structure, &bf.structure);
        prop_assert!(dp.welfare >= game.min() * n as u64);
        prop_assert!(dp.welfare <= game.max() * n as u64);
        let order = seeded_order(seed ^ 0x50, n);
        let policy = PolicySpec::Amc.bind(&game).unwrap();
        let trace =
            simulate(&game, &order, &policy, PlayerModel::Greedy, TieBreak::NewFirst).unwrap();
        prop_assert!(dp.welfare >= trace.social_welfare(&game));
    }

    #[test]
    fn greedy_blocks_respect_lemma_bounds(
        seed in any::<u64>(),
        n in 2usize..=5,
    ) {
        let game = random_instance(n, &v("1"), &v("9/2"), seed, None).unwrap();
        let order = seeded_order(seed ^ 0x1e, n);
        for h in [v("0"), v("1"), ocg_core::policy::paper_threshold(&game)] {
            let policy = PolicySpec::AmcH { h: h.clone() }.bind(&game).unwrap();
            let traces = simulate_all_branches(
                &game, &order, &policy, PlayerModel::Greedy, DEFAULT_BRANCH_CAP,
            )
            .unwrap();
            for trace in traces {
                prop_assert!(check_trace_blocks(&game, &trace, &h).is_ok());
            }
        }
    }
}
