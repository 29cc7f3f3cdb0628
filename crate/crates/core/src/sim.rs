//! The arrival loop: offers, the greedy/pessimistic choice rule, tie
//! handling, and full simulation traces.
//!
//! Players see only the structure formed so far; there is no API to revisit
//! or leave a coalition, so irrevocability of decisions is structural.

use serde::Serialize;

use crate::game::{ArrivalOrder, Coalition, CoalitionStructure, Game, PlayerId};
use crate::policy::{Ledger, Offer, Policy, PolicyError, SimState};
use crate::value::Value;

pub const DEFAULT_BRANCH_CAP: u64 = 1_000_000;

/// What an arriving player maximizes: the whole offer, or only the firm
/// (non-redistributable) part.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum PlayerModel {
    Greedy,
    Pessimistic,
}

/// How argmax ties between join options are resolved.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TieBreak {
    /// Prefer founding a new coalition, then the earliest-founded coalition.
    NewFirst,
    /// Prefer the earliest-founded coalition, then founding.
    EarliestCoalition,
    /// Branch on every maximal option (only via [`simulate_all_branches`]).
    Enumerate,
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("tie enumeration exceeded the branch cap of {cap}")]
    BranchExplosion { cap: u64 },
    #[error("simulate does not take the enumerating tie rule; use simulate_all_branches")]
    EnumerateRequiresBranching,
    #[error("hypothetical allocation needs a nonempty coalition")]
    EmptyCoalition,
    #[error("replayed choice {chosen} at step {step} is not a maximal option")]
    BadReplayChoice { step: usize, chosen: Coalition },
}

/// One simulation step: the arriving player, every offer she evaluated, the
/// option she took, and snapshots of structure and ledger after the join.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    /// 1-based arrival time.
    pub t: usize,
    pub player: PlayerId,
    pub offers: Vec<Offer>,
    pub chosen: Coalition,
    pub structure: CoalitionStructure,
    pub ledger: Ledger,
}

/// A complete run: per-step records plus the final structure and the ledger
/// after the end-of-run bank payout.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Trace {
    pub order: ArrivalOrder,
    pub steps: Vec<Step>,
    pub final_structure: CoalitionStructure,
    pub final_ledger: Ledger,
}

impl Trace {
    pub fn social_welfare(&self, game: &Game) -> Value {
        self.final_structure.social_welfare(game)
    }

    /// A player's allocation after the final payout.
    pub fn final_allocation(&self, p: PlayerId) -> &Value {
        self.final_ledger.firm(p)
    }

    /// The sequence of chosen targets, one per step; enough to replay the
    /// exact tie branch.
    pub fn choices(&self) -> Vec<Coalition> {
        self.steps.iter().map(|s| s.chosen).collect()
    }
}

/// Offers for every option available to `player`, founding first, then the
/// existing blocks in founding order.
fn collect_offers(
    game: &Game,
    policy: &Policy,
    state: &SimState,
    player: PlayerId,
) -> Result<Vec<Offer>, PolicyError> {
    let mut offers = Vec::with_capacity(state.blocks.len() + 1);
    offers.push(policy.offer(game, state, player, Coalition::EMPTY)?);
    for block in &state.blocks {
        offers.push(policy.offer(game, state, player, block.mask)?);
    }
    Ok(offers)
}

fn objective<'a>(offer: &'a Offer, model: PlayerModel) -> &'a Value {
    match model {
        PlayerModel::Greedy => &offer.total,
        PlayerModel::Pessimistic => &offer.firm,
    }
}

/// Indices into `offers` attaining the maximal objective, in the order
/// founding-first then blocks by founding time.
fn maximal_options(offers: &[Offer], model: PlayerModel) -> Vec<usize> {
    let best = offers
        .iter()
        .map(|o| objective(o, model))
        .max()
        .expect("founding is always an option");
    offers
        .iter()
        .enumerate()
        .filter(|(_, o)| objective(o, model) == best)
        .map(|(i, _)| i)
        .collect()
}

fn pick(candidates: &[usize], tie: TieBreak) -> usize {
    match tie {
        // Index 0 is the founding option; block candidates are already
        // sorted by founding time.
        TieBreak::NewFirst => candidates[0],
        TieBreak::EarliestCoalition => {
            let first_block = candidates.iter().copied().find(|&i| i != 0);
            first_block.unwrap_or(candidates[0])
        }
        TieBreak::Enumerate => unreachable!("enumeration handled by the branching simulator"),
    }
}

/// Runs one deterministic trace under a fixed tie rule.
pub fn simulate(
    game: &Game,
    order: &ArrivalOrder,
    policy: &Policy,
    model: PlayerModel,
    tie: TieBreak,
) -> Result<Trace, SimError> {
    if tie == TieBreak::Enumerate {
        return Err(SimError::EnumerateRequiresBranching);
    }
    let mut state = SimState::new(game.n());
    let mut steps = Vec::with_capacity(order.n());
    for t in 0..order.n() {
        let player = order.player_at(t);
        let offers = collect_offers(game, policy, &state, player)?;
        let candidates = maximal_options(&offers, model);
        let chosen = offers[pick(&candidates, tie)].target;
        policy.apply_join(game, &mut state, player, chosen)?;
        steps.push(Step {
            t: t + 1,
            player,
            offers,
            chosen,
            structure: state.structure(),
            ledger: state.ledger.clone(),
        });
    }
    policy.finalize(&mut state);
    Ok(Trace {
        order: order.clone(),
        steps,
        final_structure: state.structure(),
        final_ledger: state.ledger,
    })
}

/// Explores every sequence of tie resolutions and returns one trace per
/// distinct final structure. The first entry is the `NewFirst` trace.
pub fn simulate_all_branches(
    game: &Game,
    order: &ArrivalOrder,
    policy: &Policy,
    model: PlayerModel,
    cap: u64,
) -> Result<Vec<Trace>, SimError> {
    simulate_all_branches_counted(game, order, policy, model, cap).map(|(traces, _)| traces)
}

/// Same as [`simulate_all_branches`] but also reports how many tie-resolution
/// leaves were explored before deduplication.
pub fn simulate_all_branches_counted(
    game: &Game,
    order: &ArrivalOrder,
    policy: &Policy,
    model: PlayerModel,
    cap: u64,
) -> Result<(Vec<Trace>, u64), SimError> {
    struct Dfs<'a> {
        game: &'a Game,
        order: &'a ArrivalOrder,
        policy: &'a Policy,
        model: PlayerModel,
        cap: u64,
        leaves: u64,
        out: Vec<Trace>,
    }

    impl Dfs<'_> {
        fn run(&mut self, state: SimState, steps: Vec<Step>, t: usize) -> Result<(), SimError> {
            if t == self.order.n() {
                self.leaves += 1;
                if self.leaves > self.cap {
                    return Err(SimError::BranchExplosion { cap: self.cap });
                }
                let mut state = state;
                self.policy.finalize(&mut state);
                let trace = Trace {
                    order: self.order.clone(),
                    steps,
                    final_structure: state.structure(),
                    final_ledger: state.ledger,
                };
                if !self
                    .out
                    .iter()
                    .any(|tr| tr.final_structure == trace.final_structure)
                {
                    self.out.push(trace);
                }
                return Ok(());
            }
            let player = self.order.player_at(t);
            let offers = collect_offers(self.game, self.policy, &state, player)?;
            let candidates = maximal_options(&offers, self.model);
            for &c in &candidates {
                let chosen = offers[c].target;
                let mut next = state.clone();
                self.policy.apply_join(self.game, &mut next, player, chosen)?;
                let mut next_steps = steps.clone();
                next_steps.push(Step {
                    t: t + 1,
                    player,
                    offers: offers.clone(),
                    chosen,
                    structure: next.structure(),
                    ledger: next.ledger.clone(),
                });
                self.run(next, next_steps, t + 1)?;
            }
            Ok(())
        }
    }

    let mut dfs = Dfs {
        game,
        order,
        policy,
        model,
        cap,
        leaves: 0,
        out: Vec::new(),
    };
    dfs.run(SimState::new(game.n()), Vec::new(), 0)?;
    Ok((dfs.out, dfs.leaves))
}

/// Replays a recorded branch, checking each choice was a maximal option.
pub fn simulate_with_choices(
    game: &Game,
    order: &ArrivalOrder,
    policy: &Policy,
    model: PlayerModel,
    choices: &[Coalition],
) -> Result<Trace, SimError> {
    let mut state = SimState::new(game.n());
    let mut steps = Vec::with_capacity(order.n());
    for t in 0..order.n() {
        let player = order.player_at(t);
        let offers = collect_offers(game, policy, &state, player)?;
        let candidates = maximal_options(&offers, model);
        let chosen = choices[t];
        if !candidates.iter().any(|&i| offers[i].target == chosen) {
            return Err(SimError::BadReplayChoice {
                step: t + 1,
                chosen,
            });
        }
        policy.apply_join(game, &mut state, player, chosen)?;
        steps.push(Step {
            t: t + 1,
            player,
            offers,
            chosen,
            structure: state.structure(),
            ledger: state.ledger.clone(),
        });
    }
    policy.finalize(&mut state);
    Ok(Trace {
        order: order.clone(),
        steps,
        final_structure: state.structure(),
        final_ledger: state.ledger,
    })
}

/// The allocation the policy would produce if exactly `coalition` formed,
/// members joining in their relative arrival order, including the end-of-run
/// bank payout. This is the counterfactual the stability checker evaluates.
pub fn hypothetical_allocation(
    policy: &Policy,
    game: &Game,
    coalition: Coalition,
    order: &ArrivalOrder,
) -> Result<Vec<(PlayerId, Value)>, SimError> {
    if coalition.is_empty() {
        return Err(SimError::EmptyCoalition);
    }
    let members = order.sub_order(coalition).players;
    let mut state = SimState::new(game.n());
    let mut mask = Coalition::EMPTY;
    for &p in &members {
        policy.apply_join(game, &mut state, p, mask)?;
        mask = mask.with(p);
    }
    policy.finalize(&mut state);
    Ok(members
        .into_iter()
        .map(|p| (p, state.ledger.firm(p).clone()))
        .collect())
}
