//! Axiom checkers over complete simulation traces: conservation of value,
//! irrevocability, non-anticipation, individual rationality and temporal
//! stability. Every failed check carries a counterexample that can be
//! re-verified independently of the checker.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::game::{ArrivalOrder, Coalition, Game, PlayerId};
use crate::policy::{Policy, PolicySpec};
use crate::sim::{hypothetical_allocation, SimError, Trace};
use crate::value::Value;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Axiom {
    NonWasteful,
    Irrevocable,
    NonAnticipative,
    IndividualRationality,
    TemporalNashStability,
}

/// Evidence for a failed check.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum Counterexample {
    Conservation {
        step: usize,
        coalition: Coalition,
        coalition_value: Value,
        allocated: Value,
    },
    BankMismatch {
        step: usize,
        coalition: Coalition,
        bank: Value,
        promised: Value,
    },
    FirmDecrease {
        step: usize,
        player: PlayerId,
        before: Value,
        after: Value,
    },
    ProvisionalNonzero {
        step: usize,
        player: PlayerId,
        provisional: Value,
    },
    Anticipation {
        prefix_len: usize,
        mutated_coalition: Coalition,
        original_value: Value,
        mutated_value: Value,
        allocation: Vec<(PlayerId, Value)>,
        mutated_allocation: Vec<(PlayerId, Value)>,
    },
    IrViolation {
        step: usize,
        player: PlayerId,
        allocation: Value,
        singleton_value: Value,
    },
    TnsViolation {
        player: PlayerId,
        own_block: Coalition,
        alternative: Coalition,
        actual: Value,
        hypothetical: Value,
    },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

impl AxiomVerdict {
    fn ok(axiom: Axiom) -> Self {
        AxiomVerdict {
            axiom,
            holds: true,
            counterexample: None,
        }
    }

    fn fail(axiom: Axiom, ce: Counterexample) -> Self {
        AxiomVerdict {
            axiom,
            holds: false,
            counterexample: Some(ce),
        }
    }
}

/// Conservation: at every step and after the final payout, each coalition's
/// firm mass plus promised mass equals its value exactly, and each bank holds
/// exactly the promised mass of its coalition.
pub fn check_non_wasteful(trace: &Trace, game: &Game) -> AxiomVerdict {
    for step in &trace.steps {
        for &block in step.structure.blocks() {
            let mut allocated = Value::zero();
            let mut promised = Value::zero();
            for p in block.players() {
                allocated += step.ledger.firm(p);
                allocated += step.ledger.provisional(p);
                promised += step.ledger.provisional(p);
            }
            let worth = game.value(block);
            if &allocated != worth {
                return AxiomVerdict::fail(
                    Axiom::NonWasteful,
                    Counterexample::Conservation {
                        step: step.t,
                        coalition: block,
                        coalition_value: worth.clone(),
                        allocated,
                    },
                );
            }
            let bank = step
                .ledger
                .bank(block)
                .map(|b| b.amount.clone())
                .unwrap_or_else(Value::zero);
            if bank != promised {
                return AxiomVerdict::fail(
                    Axiom::NonWasteful,
                    Counterexample::BankMismatch {
                        step: step.t,
                        coalition: block,
                        bank,
                        promised,
                    },
                );
            }
        }
    }
    // After payout the firm shares alone must carry each coalition's value.
    for &block in trace.final_structure.blocks() {
        let mut allocated = Value::zero();
        for p in block.players() {
            allocated += trace.final_ledger.firm(p);
            allocated += trace.final_ledger.provisional(p);
        }
        let worth = game.value(block);
        if &allocated != worth {
            return AxiomVerdict::fail(
                Axiom::NonWasteful,
                Counterexample::Conservation {
                    step: trace.steps.len() + 1,
                    coalition: block,
                    coalition_value: worth.clone(),
                    allocated,
                },
            );
        }
    }
    AxiomVerdict::ok(Axiom::NonWasteful)
}

/// Irrevocability: firm shares never decrease step over step and nothing is
/// ever provisional.
pub fn check_irrevocable(trace: &Trace) -> AxiomVerdict {
    let n = trace.order.n();
    let mut prev = vec![Value::zero(); n];
    for step in &trace.steps {
        for i in 0..n {
            let p = PlayerId(i);
            let firm = step.ledger.firm(p);
            if *firm < prev[i] {
                return AxiomVerdict::fail(
                    Axiom::Irrevocable,
                    Counterexample::FirmDecrease {
                        step: step.t,
                        player: p,
                        before: prev[i].clone(),
                        after: firm.clone(),
                    },
                );
            }
            let prov = step.ledger.provisional(p);
            if !prov.is_zero() {
                return AxiomVerdict::fail(
                    Axiom::Irrevocable,
                    Counterexample::ProvisionalNonzero {
                        step: step.t,
                        player: p,
                        provisional: prov.clone(),
                    },
                );
            }
            prev[i] = firm.clone();
        }
    }
    for i in 0..n {
        if *trace.final_ledger.firm(PlayerId(i)) < prev[i] {
            return AxiomVerdict::fail(
                Axiom::Irrevocable,
                Counterexample::FirmDecrease {
                    step: trace.steps.len() + 1,
                    player: PlayerId(i),
                    before: prev[i].clone(),
                    after: trace.final_ledger.firm(PlayerId(i)).clone(),
                },
            );
        }
    }
    AxiomVerdict::ok(Axiom::Irrevocable)
}

/// Individual rationality: at every step each member's current allocation
/// (firm plus promised) is at least her singleton value; after the final
/// payout the firm share alone must reach it.
pub fn check_ir(trace: &Trace, game: &Game) -> AxiomVerdict {
    for step in &trace.steps {
        for &block in step.structure.blocks() {
            for p in block.players() {
                let total = step.ledger.total(p);
                let own = game.value(Coalition::singleton(p));
                if &total < own {
                    return AxiomVerdict::fail(
                        Axiom::IndividualRationality,
                        Counterexample::IrViolation {
                            step: step.t,
                            player: p,
                            allocation: total,
                            singleton_value: own.clone(),
                        },
                    );
                }
            }
        }
    }
    for p in game.players() {
        let total = trace.final_ledger.total(p);
        let own = game.value(Coalition::singleton(p));
        if &total < own {
            return AxiomVerdict::fail(
                Axiom::IndividualRationality,
                Counterexample::IrViolation {
                    step: trace.steps.len() + 1,
                    player: p,
                    allocation: total,
                    singleton_value: own.clone(),
                },
            );
        }
    }
    AxiomVerdict::ok(Axiom::IndividualRationality)
}

/// Temporal stability: no player could have done strictly better by joining,
/// at her arrival time, a coalition of the final structure that had already
/// started forming (or by staying alone).
pub fn check_tns(trace: &Trace, game: &Game, policy: &Policy) -> Result<AxiomVerdict, SimError> {
    let order = &trace.order;
    for p in game.players() {
        let own = trace
            .final_structure
            .block_of(p)
            .expect("every player ends in a block");
        let actual = trace.final_allocation(p).clone();
        let arrived = order.arrival_index(p);
        // Staying alone is always an alternative.
        let alone = game.value(Coalition::singleton(p));
        if alone > &actual {
            return Ok(AxiomVerdict::fail(
                Axiom::TemporalNashStability,
                Counterexample::TnsViolation {
                    player: p,
                    own_block: own,
                    alternative: Coalition::EMPTY,
                    actual,
                    hypothetical: alone.clone(),
                },
            ));
        }
        for &block in trace.final_structure.blocks() {
            if block == own {
                continue;
            }
            let first_arrival = block
                .players()
                .map(|q| order.arrival_index(q))
                .min()
                .expect("blocks are nonempty");
            if first_arrival >= arrived {
                continue;
            }
            let alloc = hypothetical_allocation(policy, game, block.with(p), order)?;
            let hypothetical = alloc
                .into_iter()
                .find(|(q, _)| *q == p)
                .map(|(_, v)| v)
                .expect("player is a member of the hypothetical coalition");
            if hypothetical > actual {
                return Ok(AxiomVerdict::fail(
                    Axiom::TemporalNashStability,
                    Counterexample::TnsViolation {
                        player: p,
                        own_block: own,
                        alternative: block,
                        actual,
                        hypothetical,
                    },
                ));
            }
        }
    }
    Ok(AxiomVerdict::ok(Axiom::TemporalNashStability))
}

/// Outcome of the randomized non-anticipation check. `holds` means no
/// violation was found across `comparisons` mutated games; it is statistical
/// evidence, not a proof. A failure is a hard counterexample.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct NaReport {
    pub verdict: AxiomVerdict,
    /// Mutated games actually compared.
    pub comparisons: u64,
    /// Prefixes where no valid mutation existed (bound-corner games).
    pub no_room: u64,
}

/// Non-anticipation: for each proper prefix of the order, the policy's
/// allocation over the prefix must not change when values involving future
/// players are perturbed. Perturbations stay inside the monotonicity window
/// of the mutated coalition so every mutant is a valid game.
pub fn check_non_anticipative(
    spec: &PolicySpec,
    game: &Game,
    order: &ArrivalOrder,
    trials_per_prefix: u64,
    seed: u64,
) -> Result<NaReport, SimError> {
    let n = game.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comparisons = 0u64;
    let mut no_room = 0u64;
    let policy = spec.bind(game)?;
    for k in 1..n {
        let prefix = Coalition::from_players((0..k).map(|t| order.player_at(t)));
        let base = hypothetical_allocation(&policy, game, prefix, order)?;
        let mut found_any = false;
        for _ in 0..trials_per_prefix {
            let Some((target, mutated_value)) = draw_mutation(game, prefix, &mut rng) else {
                continue;
            };
            found_any = true;
            let mut values = game.table().to_vec();
            let original = values[target.mask() as usize].clone();
            values[target.mask() as usize] = mutated_value.clone();
            let mutant = Game::new(n, values, game.min().clone(), game.max().clone())
                .expect("mutation stays inside the monotonicity window");
            let mutant_policy = spec.bind(&mutant)?;
            let alloc = hypothetical_allocation(&mutant_policy, &mutant, prefix, order)?;
            comparisons += 1;
            if alloc != base {
                return Ok(NaReport {
                    verdict: AxiomVerdict::fail(
                        Axiom::NonAnticipative,
                        Counterexample::Anticipation {
                            prefix_len: k,
                            mutated_coalition: target,
                            original_value: original,
                            mutated_value,
                            allocation: base,
                            mutated_allocation: alloc,
                        },
                    ),
                    comparisons,
                    no_room,
                });
            }
        }
        if !found_any && trials_per_prefix > 0 {
            no_room += 1;
        }
    }
    Ok(NaReport {
        verdict: AxiomVerdict::ok(Axiom::NonAnticipative),
        comparisons,
        no_room,
    })
}

/// Picks a coalition containing at least one player outside `prefix` and a
/// fresh value inside its monotonicity window. Returns None when no room was
/// found after a bounded number of attempts.
fn draw_mutation(
    game: &Game,
    prefix: Coalition,
    rng: &mut ChaCha8Rng,
) -> Option<(Coalition, Value)> {
    let n = game.n();
    let size = 1u32 << n;
    const RESOLUTION: u64 = 16;
    for _ in 0..64 {
        let mask = rng.gen_range(1..size);
        let target = Coalition(mask);
        if target.is_subset_of(prefix) {
            continue;
        }
        // Window: above every subset, below every superset, inside bounds.
        let mut lo = game.min().clone();
        let mut hi = game.max().clone();
        for j in 0..n {
            let bit = 1u32 << j;
            if mask & bit != 0 {
                let sub = Coalition(mask ^ bit);
                if !sub.is_empty() && game.value(sub) > &lo {
                    lo = game.value(sub).clone();
                }
            } else {
                let sup = Coalition(mask | bit);
                if game.value(sup) < &hi {
                    hi = game.value(sup).clone();
                }
            }
        }
        if lo >= hi {
            continue;
        }
        let span = &hi - &lo;
        let current = game.value(target);
        for _ in 0..8 {
            let j = rng.gen_range(0..=RESOLUTION);
            let candidate = &lo + &(&(&span * j) / &Value::integer(RESOLUTION as i64));
            if &candidate != current {
                return Some((target, candidate));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::CoalitionStructure;
    use crate::lab::instances::{paper_instances, PaperCase};
    use crate::sim::{simulate, PlayerModel, TieBreak};

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    fn bound_instance() -> (Game, ArrivalOrder) {
        let inst = paper_instances(&PaperCase::ThmIrrV3 {
            min: v("1"),
            max: v("5"),
        })
        .unwrap()
        .remove(0);
        (inst.game, inst.order)
    }

    #[test]
    fn amc_trace_passes_every_axiom() {
        let (g, o) = bound_instance();
        let spec = PolicySpec::Amc;
        let policy = spec.bind(&g).unwrap();
        let trace = simulate(&g, &o, &policy, PlayerModel::Greedy, TieBreak::NewFirst).unwrap();
        assert!(check_non_wasteful(&trace, &g).holds);
        assert!(check_irrevocable(&trace).holds);
        assert!(check_ir(&trace, &g).holds);
        assert!(check_tns(&trace, &g, &policy).unwrap().holds);
        let na = check_non_anticipative(&spec, &g, &o, 30, 7).unwrap();
        assert!(na.verdict.holds);
        assert!(na.comparisons > 0);
    }

    #[test]
    fn corrupted_ledger_fails_conservation_with_the_offending_coalition() {
        let (g, o) = bound_instance();
        let policy = PolicySpec::Amc.bind(&g).unwrap();
        let mut trace =
            simulate(&g, &o, &policy, PlayerModel::Greedy, TieBreak::NewFirst).unwrap();
        *trace.final_ledger.firm_mut(PlayerId(1)) += Value::one();
        let verdict = check_non_wasteful(&trace, &g);
        assert!(!verdict.holds);
        match verdict.counterexample.unwrap() {
            Counterexample::Conservation { coalition, .. } => {
                assert_eq!(coalition, Coalition(0b010));
            }
            other => panic!("unexpected counterexample {other:?}"),
        }
    }

    #[test]
    fn bank_promise_movement_is_not_irrevocable_and_breaks_ir() {
        let (g, o) = bound_instance();
        let policy = PolicySpec::BankGreedy { mu: v("1") }.bind(&g).unwrap();
        let trace = simulate(&g, &o, &policy, PlayerModel::Greedy, TieBreak::NewFirst).unwrap();
        let verdict = check_irrevocable(&trace);
        assert!(!verdict.holds);
        // Under founding-first ties, x and y stay single; z then joins {x}
        // and takes over the whole promise, stripping x below her singleton
        // value — the individual-rationality failure after a2 arrives.
        let verdict = check_ir(&trace, &g);
        assert!(!verdict.holds);
        match verdict.counterexample.unwrap() {
            Counterexample::IrViolation { step, player, .. } => {
                assert_eq!(step, 3);
                assert_eq!(player, PlayerId(0));
            }
            other => panic!("unexpected counterexample {other:?}"),
        }
    }

    #[test]
    fn single_player_trace_is_trivially_irrevocable() {
        let g = Game::new(1, vec![v("0"), v("2")], v("2"), v("2")).unwrap();
        let o = ArrivalOrder::identity(1);
        for spec in [
            PolicySpec::Amc,
            PolicySpec::BankGreedy { mu: v("1") },
        ] {
            let policy = spec.bind(&g).unwrap();
            let trace =
                simulate(&g, &o, &policy, PlayerModel::Greedy, TieBreak::NewFirst).unwrap();
            if spec.is_irrevocable() {
                assert!(check_irrevocable(&trace).holds);
            }
            assert!(check_non_wasteful(&trace, &g).holds);
            assert!(check_ir(&trace, &g).holds);
        }
    }

    #[test]
    fn oracle_policy_is_anticipative() {
        // Class-two game whose best pairing flips when a value involving the
        // third player moves: the allocation over the first two arrivals
        // changes with it.
        let values = vec![
            Value::zero(),
            v("1"),
            v("1"),
            v("5/2"),
            v("1"),
            v("2"),
            v("1"),
            v("5/2"),
        ];
        let g = Game::new(3, values, v("1"), v("5/2")).unwrap();
        let o = ArrivalOrder::identity(3);
        let report =
            check_non_anticipative(&PolicySpec::OraclePair, &g, &o, 200, 11).unwrap();
        assert!(!report.verdict.holds);
        match report.verdict.counterexample.unwrap() {
            Counterexample::Anticipation {
                allocation,
                mutated_allocation,
                ..
            } => assert_ne!(allocation, mutated_allocation),
            other => panic!("unexpected counterexample {other:?}"),
        }
    }

    #[test]
    fn threshold_policy_breaks_temporal_stability_on_the_witness() {
        let inst = paper_instances(&PaperCase::PropHtnsWitness {
            min: v("1"),
            h: v("1"),
        })
        .unwrap()
        .remove(0);
        let spec = PolicySpec::AmcH { h: v("1") };
        let policy = spec.bind(&inst.game).unwrap();
        let trace = simulate(
            &inst.game,
            &inst.order,
            &policy,
            PlayerModel::Greedy,
            TieBreak::NewFirst,
        )
        .unwrap();
        // The trace forms {{a1,a4},{a2,a3}}.
        assert_eq!(
            trace.final_structure,
            CoalitionStructure::new(vec![Coalition(0b1001), Coalition(0b0110)]).unwrap()
        );
        let verdict = check_tns(&trace, &inst.game, &policy).unwrap();
        assert!(!verdict.holds);
        let Counterexample::TnsViolation {
            player,
            alternative,
            actual,
            hypothetical,
            ..
        } = verdict.counterexample.unwrap()
        else {
            panic!("expected a stability violation");
        };
        assert_eq!(player, PlayerId(2));
        assert_eq!(alternative, Coalition(0b1001));
        // Re-check the witness independently of the checker.
        let alloc = hypothetical_allocation(
            &policy,
            &inst.game,
            alternative.with(player),
            &inst.order,
        )
        .unwrap();
        let recomputed = alloc.into_iter().find(|(q, _)| *q == player).unwrap().1;
        assert_eq!(recomputed, hypothetical);
        assert!(recomputed > actual);
        assert_eq!(actual, v("2"));
        assert_eq!(hypothetical, v("5/2"));
    }

    #[test]
    fn zero_threshold_restores_stability_on_the_witness() {
        let inst = paper_instances(&PaperCase::PropHtnsWitness {
            min: v("1"),
            h: v("1"),
        })
        .unwrap()
        .remove(0);
        let spec = PolicySpec::AmcH { h: v("0") };
        let policy = spec.bind(&inst.game).unwrap();
        let trace = simulate(
            &inst.game,
            &inst.order,
            &policy,
            PlayerModel::Greedy,
            TieBreak::NewFirst,
        )
        .unwrap();
        assert!(check_tns(&trace, &inst.game, &policy).unwrap().holds);
    }
}
