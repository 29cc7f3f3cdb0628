//! Worst-case competitive-ratio evaluation: exact minimum of greedy welfare
//! over optimal welfare across arrival orders and tie branches, and family
//! runs over instance collections.
//!
//! Bound certification always enumerates tie branches; fixed-tie and sampled
//! modes exist for speed and never back a bound claim. Order evaluation is
//! parallel; the reduction keys on (welfare, order index) so results are
//! identical at any worker count.

use std::sync::atomic::{AtomicU64, Ordering};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::game::{ArrivalOrder, Coalition, CoalitionStructure, Game, PlayerId};
use crate::policy::{Policy, PolicyError, PolicySpec};
use crate::sim::{
    simulate, simulate_all_branches_counted, PlayerModel, SimError, TieBreak, Trace,
};
use crate::solver::{optimal_partition, TooManyPlayers};
use crate::value::Value;

/// Exhaustive order enumeration is capped here (`8! = 40320` orders).
pub const ALL_ORDERS_MAX_PLAYERS: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RatioMode {
    /// Exact worst case: every order, every tie branch.
    AllOrdersAllTies,
    /// Every order under one deterministic tie rule.
    AllOrdersFixedTie(TieBreak),
    /// Seeded uniform orders with tie enumeration; the minimum found is a
    /// certified upper bound on the true worst case.
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum RatioError {
    #[error(transparent)]
    TooManyPlayers(#[from] TooManyPlayers),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("family run exceeded its simulation budget of {budget}")]
    BudgetExceeded { budget: u64 },
}

/// Worst case found, with a witness that replays exactly: the order, the
/// per-step chosen targets, and the final structure they produce.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RatioReport {
    pub ratio: Value,
    pub greedy_welfare: Value,
    pub optimal_welfare: Value,
    pub witness_order: Vec<PlayerId>,
    pub witness_structure: CoalitionStructure,
    pub witness_choices: Vec<Coalition>,
    pub orders_examined: u64,
    pub branches_examined: u64,
}

struct OrderOutcome {
    welfare: Value,
    order_idx: usize,
    structure: CoalitionStructure,
    choices: Vec<Coalition>,
    order: ArrivalOrder,
}

fn worst_branch(
    game: &Game,
    policy: &Policy,
    model: PlayerModel,
    order: &ArrivalOrder,
    order_idx: usize,
    mode_tie: Option<TieBreak>,
    branch_cap: u64,
    branches: &AtomicU64,
) -> Result<OrderOutcome, SimError> {
    let (worst, leaves) = match mode_tie {
        Some(tie) => {
            let trace = simulate(game, order, policy, model, tie)?;
            (trace, 1)
        }
        None => {
            let (traces, leaves) =
                simulate_all_branches_counted(game, order, policy, model, branch_cap)?;
            let worst = traces
                .into_iter()
                .map(|t| (t.social_welfare(game), t))
                .min_by(|a, b| a.0.cmp(&b.0))
                .map(|(_, t)| t)
                .expect("at least one branch");
            (worst, leaves)
        }
    };
    branches.fetch_add(leaves, Ordering::Relaxed);
    Ok(OrderOutcome {
        welfare: worst.social_welfare(game),
        order_idx,
        structure: worst.final_structure.clone(),
        choices: worst.choices(),
        order: order.clone(),
    })
}

fn reduce_outcomes(a: OrderOutcome, b: OrderOutcome) -> OrderOutcome {
    if (&b.welfare, b.order_idx) < (&a.welfare, a.order_idx) {
        b
    } else {
        a
    }
}

/// All `n!` arrival orders.
pub fn all_orders(n: usize) -> Vec<ArrivalOrder> {
    (0..n)
        .permutations(n)
        .map(|p| ArrivalOrder::new(p.into_iter().map(PlayerId).collect()).unwrap())
        .collect()
}

/// Exact or sampled worst-case ratio for one game and policy.
pub fn competitive_ratio(
    game: &Game,
    spec: &PolicySpec,
    model: PlayerModel,
    mode: RatioMode,
    branch_cap: u64,
) -> Result<RatioReport, RatioError> {
    let policy = spec.bind(game)?;
    let (orders, mode_tie) = match mode {
        RatioMode::AllOrdersAllTies | RatioMode::AllOrdersFixedTie(_) => {
            if game.n() > ALL_ORDERS_MAX_PLAYERS {
                return Err(TooManyPlayers {
                    n: game.n(),
                    limit: ALL_ORDERS_MAX_PLAYERS,
                }
                .into());
            }
            let tie = match mode {
                RatioMode::AllOrdersFixedTie(t) => Some(t),
                _ => None,
            };
            (all_orders(game.n()), tie)
        }
        RatioMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut orders = Vec::with_capacity(samples as usize);
            for _ in 0..samples {
                let mut ids: Vec<PlayerId> = game.players().collect();
                ids.shuffle(&mut rng);
                orders.push(ArrivalOrder::new(ids).unwrap());
            }
            (orders, None)
        }
    };
    ratio_over_orders(game, &policy, model, &orders, mode_tie, branch_cap)
}

/// Worst tie branch of a single order; the reproduction mode for the named
/// instances whose argument fixes the arrival order.
pub fn ratio_for_order(
    game: &Game,
    spec: &PolicySpec,
    model: PlayerModel,
    order: &ArrivalOrder,
    branch_cap: u64,
) -> Result<RatioReport, RatioError> {
    let policy = spec.bind(game)?;
    ratio_over_orders(
        game,
        &policy,
        model,
        std::slice::from_ref(order),
        None,
        branch_cap,
    )
}

fn ratio_over_orders(
    game: &Game,
    policy: &Policy,
    model: PlayerModel,
    orders: &[ArrivalOrder],
    mode_tie: Option<TieBreak>,
    branch_cap: u64,
) -> Result<RatioReport, RatioError> {
    let optimal = optimal_partition(game)?;
    let branches = AtomicU64::new(0);
    let worst = orders
        .par_iter()
        .enumerate()
        .map(|(idx, order)| {
            worst_branch(
                game, policy, model, order, idx, mode_tie, branch_cap, &branches,
            )
        })
        .try_reduce_with(|a, b| Ok(reduce_outcomes(a, b)))
        .expect("at least one order")?;
    let ratio = &worst.welfare / &optimal.welfare;
    Ok(RatioReport {
        ratio,
        greedy_welfare: worst.welfare,
        optimal_welfare: optimal.welfare,
        witness_order: worst.order.players().to_vec(),
        witness_structure: worst.structure,
        witness_choices: worst.choices,
        orders_examined: orders.len() as u64,
        branches_examined: branches.load(Ordering::Relaxed),
    })
}

/// Re-simulates a report's witness and checks it reproduces the recorded
/// welfare and structure exactly.
pub fn verify_witness(
    game: &Game,
    spec: &PolicySpec,
    model: PlayerModel,
    report: &RatioReport,
) -> Result<Trace, RatioError> {
    let policy = spec.bind(game)?;
    let order = ArrivalOrder::new(report.witness_order.clone())
        .expect("witness order is a permutation");
    let trace = crate::sim::simulate_with_choices(
        game,
        &order,
        &policy,
        model,
        &report.witness_choices,
    )?;
    assert_eq!(trace.final_structure, report.witness_structure);
    assert_eq!(trace.social_welfare(game), report.greedy_welfare);
    Ok(trace)
}

/// One instance's result inside a family run.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyRow {
    pub index: usize,
    pub delta: u64,
    pub report: RatioReport,
}

/// Family-wide worst case: per-instance exact ratios and the infimum row.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub rows: Vec<FamilyRow>,
    pub infimum: usize,
    pub total_branches: u64,
}

impl FamilyReport {
    pub fn infimum_row(&self) -> &FamilyRow {
        &self.rows[self.infimum]
    }

    pub fn infimum_ratio(&self) -> &Value {
        &self.infimum_row().report.ratio
    }

    /// Rows whose exact ratio falls below a bound.
    pub fn violations<'a>(&'a self, bound: &'a Value) -> impl Iterator<Item = &'a FamilyRow> {
        self.rows.iter().filter(move |r| &r.report.ratio < bound)
    }
}

/// Exact worst-case ratio of every instance in the family (all orders, all
/// tie branches each). `budget` caps the total number of simulated branches.
pub fn family_ratio(
    games: &[Game],
    spec: &PolicySpec,
    model: PlayerModel,
    branch_cap: u64,
    budget: Option<u64>,
) -> Result<FamilyReport, RatioError> {
    let spent = AtomicU64::new(0);
    let rows: Vec<FamilyRow> = games
        .par_iter()
        .enumerate()
        .map(|(index, game)| {
            let report =
                competitive_ratio(game, spec, model, RatioMode::AllOrdersAllTies, branch_cap)?;
            if let Some(budget) = budget {
                let total = spent.fetch_add(report.branches_examined, Ordering::Relaxed)
                    + report.branches_examined;
                if total > budget {
                    return Err(RatioError::BudgetExceeded { budget });
                }
            }
            Ok(FamilyRow {
                index,
                delta: game.delta().value(),
                report,
            })
        })
        .collect::<Result<_, _>>()?;
    assert!(!rows.is_empty(), "family must contain at least one instance");
    let infimum = rows
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| {
            (&a.report.ratio, ia).cmp(&(&b.report.ratio, ib))
        })
        .map(|(i, _)| i)
        .unwrap();
    Ok(FamilyReport {
        rows,
        infimum,
        total_branches: spent.load(Ordering::Relaxed),
    })
}
