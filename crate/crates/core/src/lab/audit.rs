//! Block-size and block-value bounds that every greedy or optimal structure
//! must satisfy: a `delta`-class game caps optimal blocks at `delta` players,
//! marginal-contribution traces at `delta` players with `v(S) >= |S|*min`,
//! and thresholded traces at `ceil(delta*min/(min+h))` players with
//! `v(S) >= min + (|S|-1)(min+h)`.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::game::{Coalition, CoalitionStructure, Game};
use crate::sim::Trace;
use crate::value::Value;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, thiserror::Error)]
#[error("block {block} breaks its bound: size {size} (cap {size_cap}), value {value} (floor {value_floor})")]
pub struct BlockBoundViolation {
    pub block: Coalition,
    pub size: usize,
    pub size_cap: u64,
    pub value: Value,
    pub value_floor: Value,
}

/// Size cap for blocks formed under the threshold-`h` policy; `h = 0` gives
/// the plain marginal-contribution cap `delta`.
pub fn greedy_size_cap(game: &Game, h: &Value) -> u64 {
    let delta = game.delta().value();
    let numerator = game.min() * delta;
    let denominator = game.min() + h;
    (&numerator / &denominator)
        .ceil_int()
        .to_u64()
        .expect("size cap fits in u64")
}

/// Checks one block of a greedy trace against the threshold-`h` bounds.
fn check_block(game: &Game, block: Coalition, h: &Value) -> Result<(), BlockBoundViolation> {
    let size = block.len();
    let size_cap = greedy_size_cap(game, h);
    let value = game.value(block).clone();
    // min + (|S|-1)(min+h); for h = 0 this is |S|*min.
    let value_floor = game.min() + &((game.min() + h) * (size as u64 - 1));
    if size as u64 > size_cap || value < value_floor {
        return Err(BlockBoundViolation {
            block,
            size,
            size_cap,
            value,
            value_floor,
        });
    }
    Ok(())
}

/// Every block of every step of a greedy trace satisfies the threshold
/// bounds. Returns the number of blocks checked.
pub fn check_trace_blocks(
    game: &Game,
    trace: &Trace,
    h: &Value,
) -> Result<usize, BlockBoundViolation> {
    let mut checked = 0;
    for step in &trace.steps {
        for &block in step.structure.blocks() {
            check_block(game, block, h)?;
            checked += 1;
        }
    }
    Ok(checked)
}

/// Every block of a welfare-optimal structure has at most `delta` players.
/// Returns the number of blocks checked.
pub fn check_optimal_structure(
    game: &Game,
    structure: &CoalitionStructure,
) -> Result<usize, BlockBoundViolation> {
    let delta = game.delta().value();
    for &block in structure.blocks() {
        if block.len() as u64 > delta {
            return Err(BlockBoundViolation {
                block,
                size: block.len(),
                size_cap: delta,
                value: game.value(block).clone(),
                value_floor: Value::zero(),
            });
        }
    }
    Ok(structure.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{ArrivalOrder, PlayerId};
    use crate::lab::instances::random_instance;
    use crate::policy::{paper_threshold, PolicySpec};
    use crate::sim::{simulate_all_branches, PlayerModel, DEFAULT_BRANCH_CAP};
    use crate::solver::brute_force_all_optimal;

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    #[test]
    fn size_cap_examples() {
        // delta = 5, h = 0: cap 5. h = 2: ceil(5/3) = 2.
        let g = random_instance(2, &v("1"), &v("5"), 1, None).unwrap();
        assert_eq!(greedy_size_cap(&g, &v("0")), 5);
        assert_eq!(greedy_size_cap(&g, &v("2")), 2);
        assert_eq!(greedy_size_cap(&g, &v("1/2")), 4);
    }

    #[test]
    fn greedy_and_optimal_blocks_respect_their_caps() {
        for seed in 0..40 {
            let g = random_instance(4, &v("1"), &v("3"), seed, None).unwrap();
            let order = ArrivalOrder::new(
                [3, 1, 0, 2].iter().map(|&i| PlayerId(i)).collect(),
            )
            .unwrap();
            for spec in [
                PolicySpec::Amc,
                PolicySpec::AmcH {
                    h: paper_threshold(&g),
                },
            ] {
                let h = match &spec {
                    PolicySpec::AmcH { h } => h.clone(),
                    _ => Value::zero(),
                };
                let policy = spec.bind(&g).unwrap();
                for trace in simulate_all_branches(
                    &g,
                    &order,
                    &policy,
                    PlayerModel::Greedy,
                    DEFAULT_BRANCH_CAP,
                )
                .unwrap()
                {
                    check_trace_blocks(&g, &trace, &h).unwrap();
                }
            }
            let (_, optima) = brute_force_all_optimal(&g).unwrap();
            for structure in optima {
                check_optimal_structure(&g, &structure).unwrap();
            }
        }
    }
}
