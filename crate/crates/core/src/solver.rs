//! Exact maximum-welfare coalition structures.
//!
//! Two independent routes: a subset dynamic program (the product path,
//! `n <= 16`) and a full set-partition enumerator over restricted-growth
//! strings (the correctness oracle, `n <= 8`). Both resolve welfare ties to
//! the structure whose sorted block-mask list is lexicographically smallest,
//! so their outputs are comparable block for block.

use std::collections::HashMap;

use crate::game::{Coalition, CoalitionStructure, Game};
use crate::value::Value;

pub const DP_MAX_PLAYERS: usize = 16;
pub const BRUTE_FORCE_MAX_PLAYERS: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Debug, thiserror::Error)]
#[error("{n} players exceeds the {limit}-player limit of this solver")]
pub struct TooManyPlayers {
    pub n: usize,
    pub limit: usize,
}

/// A maximum-welfare structure with its exact welfare.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OptimalResult {
    pub welfare: Value,
    pub structure: CoalitionStructure,
    /// Number of distinct optimal partitions, when the solver counted them.
    pub optimal_count: Option<u64>,
}

/// Subset-DP solver: `best[mask] = max over submasks s of v(s) + best[mask \ s]`.
pub fn optimal_partition(game: &Game) -> Result<OptimalResult, TooManyPlayers> {
    let n = game.n();
    if n > DP_MAX_PLAYERS {
        return Err(TooManyPlayers {
            n,
            limit: DP_MAX_PLAYERS,
        });
    }
    let full = (1usize << n) - 1;
    let mut best = vec![Value::zero(); full + 1];
    let mut count = vec![0u64; full + 1];
    count[0] = 1;
    for mask in 1..=full {
        // Every partition of `mask` has a unique block containing its lowest
        // player, so iterating those submasks visits each partition once.
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut best_here: Option<Value> = None;
        let mut count_here = 0u64;
        let mut sub = rest;
        loop {
            let block = sub | low;
            let cand = game.value(Coalition(block as u32)) + &best[mask ^ block];
            match &best_here {
                Some(b) if cand < *b => {}
                Some(b) if cand == *b => count_here += count[mask ^ block],
                _ => {
                    best_here = Some(cand);
                    count_here = count[mask ^ block];
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        best[mask] = best_here.expect("nonempty mask has at least one split");
        count[mask] = count_here;
    }

    let mut memo: HashMap<usize, Vec<Coalition>> = HashMap::new();
    let structure = CoalitionStructure::new(reconstruct(game, &best, full, &mut memo))
        .expect("reconstructed blocks are disjoint");
    Ok(OptimalResult {
        welfare: best[full].clone(),
        structure,
        optimal_count: Some(count[full]),
    })
}

/// Lex-smallest sorted block list among optimal partitions of `mask`.
///
/// Inserting a fixed block into two sorted lists preserves their relative
/// lexicographic order, so the minimum over splits of
/// `insert(reconstruct(rest), block)` is the global minimum.
fn reconstruct(
    game: &Game,
    best: &[Value],
    mask: usize,
    memo: &mut HashMap<usize, Vec<Coalition>>,
) -> Vec<Coalition> {
    if mask == 0 {
        return Vec::new();
    }
    if let Some(hit) = memo.get(&mask) {
        return hit.clone();
    }
    let low = mask & mask.wrapping_neg();
    let rest = mask ^ low;
    let mut best_list: Option<Vec<Coalition>> = None;
    let mut sub = rest;
    loop {
        let block = sub | low;
        let cand = game.value(Coalition(block as u32)) + &best[mask ^ block];
        if cand == best[mask] {
            let mut list = reconstruct(game, best, mask ^ block, memo);
            let c = Coalition(block as u32);
            let at = list.partition_point(|b| *b < c);
            list.insert(at, c);
            if best_list.as_ref().is_none_or(|cur| list < *cur) {
                best_list = Some(list);
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    let out = best_list.expect("some split attains best[mask]");
    memo.insert(mask, out.clone());
    out
}

/// Visits every partition of `{0, .., n-1}` exactly once, encoded as sorted
/// block masks, via restricted-growth strings.
pub fn for_each_partition<F: FnMut(&[Coalition])>(n: usize, mut f: F) {
    assert!(n >= 1 && n <= BRUTE_FORCE_MAX_PLAYERS);
    let mut rgs = vec![0usize; n];
    loop {
        let blocks_needed = rgs.iter().copied().max().unwrap() + 1;
        let mut blocks = vec![Coalition::EMPTY; blocks_needed];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b] = Coalition(blocks[b].mask() | (1 << i));
        }
        blocks.sort_unstable();
        f(&blocks);

        // Next restricted-growth string: rgs[i] <= max(rgs[..i]) + 1.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            let cap = rgs[..i].iter().copied().max().unwrap() + 1;
            if rgs[i] < cap {
                rgs[i] += 1;
                for slot in rgs[i + 1..].iter_mut() {
                    *slot = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Independent oracle: enumerate all set partitions and take the maximum.
pub fn brute_force_partition(game: &Game) -> Result<OptimalResult, TooManyPlayers> {
    let n = game.n();
    if n > BRUTE_FORCE_MAX_PLAYERS {
        return Err(TooManyPlayers {
            n,
            limit: BRUTE_FORCE_MAX_PLAYERS,
        });
    }
    let mut best: Option<(Value, Vec<Coalition>)> = None;
    let mut count = 0u64;
    for_each_partition(n, |blocks| {
        let mut w = Value::zero();
        for &b in blocks {
            w += game.value(b);
        }
        match &mut best {
            Some((bw, bl)) => {
                if w > *bw {
                    *bw = w;
                    *bl = blocks.to_vec();
                    count = 1;
                } else if w == *bw {
                    count += 1;
                    if blocks < &bl[..] {
                        *bl = blocks.to_vec();
                    }
                }
            }
            None => {
                best = Some((w, blocks.to_vec()));
                count = 1;
            }
        }
    });
    let (welfare, blocks) = best.expect("at least one partition");
    Ok(OptimalResult {
        welfare,
        structure: CoalitionStructure::new(blocks).expect("partition blocks are disjoint"),
        optimal_count: Some(count),
    })
}

/// All optimal structures found by exhaustive enumeration.
pub fn brute_force_all_optimal(
    game: &Game,
) -> Result<(Value, Vec<CoalitionStructure>), TooManyPlayers> {
    let n = game.n();
    if n > BRUTE_FORCE_MAX_PLAYERS {
        return Err(TooManyPlayers {
            n,
            limit: BRUTE_FORCE_MAX_PLAYERS,
        });
    }
    let mut best = Value::zero();
    let mut all: Vec<CoalitionStructure> = Vec::new();
    for_each_partition(n, |blocks| {
        let mut w = Value::zero();
        for &b in blocks {
            w += game.value(b);
        }
        if all.is_empty() || w > best {
            best = w;
            all.clear();
            all.push(CoalitionStructure::new(blocks.to_vec()).unwrap());
        } else if w == best {
            all.push(CoalitionStructure::new(blocks.to_vec()).unwrap());
        }
    });
    Ok((best, all))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::PlayerId;
    use crate::value::Value;

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    fn game_from(n: usize, vals: &[&str], min: &str, max: &str) -> Game {
        let mut values = vec![Value::zero()];
        values.extend(vals.iter().map(|s| v(s)));
        Game::new(n, values, v(min), v(max)).unwrap()
    }

    #[test]
    fn partition_counts_match_bell_numbers() {
        for (n, bell) in [(1, 1u64), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)] {
            let mut count = 0;
            for_each_partition(n, |_| count += 1);
            assert_eq!(count, bell, "n = {n}");
        }
    }

    #[test]
    fn grand_coalition_wins_on_bound_instance() {
        // Singletons at 1, {a0,a1} at 1, other pairs at 2, grand at 5.
        let g = game_from(
            3,
            &["1", "1", "1", "1", "2", "2", "5"],
            "1",
            "5",
        );
        let dp = optimal_partition(&g).unwrap();
        assert_eq!(dp.welfare, v("5"));
        assert_eq!(dp.structure.blocks(), &[Coalition(0b111)]);
        let bf = brute_force_partition(&g).unwrap();
        assert_eq!(bf.welfare, dp.welfare);
        assert_eq!(bf.structure, dp.structure);
    }

    #[test]
    fn additive_game_returns_all_singletons() {
        let mut values = vec![Value::zero(); 8];
        for m in 1usize..8 {
            values[m] = Value::integer(m.count_ones() as i64);
        }
        let g = Game::new(3, values, v("1"), v("3")).unwrap();
        let dp = optimal_partition(&g).unwrap();
        assert_eq!(dp.welfare, v("3"));
        assert_eq!(
            dp.structure.blocks(),
            &[Coalition(0b001), Coalition(0b010), Coalition(0b100)]
        );
        // Every one of the 5 partitions of 3 players is optimal here.
        assert_eq!(dp.optimal_count, Some(5));
        let bf = brute_force_partition(&g).unwrap();
        assert_eq!(bf.structure, dp.structure);
        assert_eq!(bf.optimal_count, Some(5));
    }

    #[test]
    fn lex_tie_break_prefers_smallest_sorted_mask_list() {
        // Two optimal partitions: {{a0},{a1,a2}} and {{a0,a1},{a2}}, both 4.
        let g = game_from(3, &["1", "1", "3", "1", "1", "3", "3"], "1", "3");
        // Sorted mask lists: [1, 6] vs [3, 4]; [1, 6] is smaller.
        let dp = optimal_partition(&g).unwrap();
        let bf = brute_force_partition(&g).unwrap();
        assert_eq!(dp.structure.blocks(), &[Coalition(0b001), Coalition(0b110)]);
        assert_eq!(dp.optimal_count, Some(2));
        assert_eq!(bf.structure, dp.structure);
        assert_eq!(bf.optimal_count, Some(2));
    }

    #[test]
    fn rejects_oversized_inputs() {
        let n = 9;
        let mut values = vec![Value::zero(); 1 << n];
        for m in 1usize..(1 << n) {
            values[m] = v("1");
        }
        let g = Game::with_limit(n, values, v("1"), v("1"), 16).unwrap();
        assert!(brute_force_partition(&g).is_err());
        assert!(optimal_partition(&g).is_ok());
    }

    #[test]
    fn welfare_bounds_hold() {
        let g = game_from(
            3,
            &["1", "1", "3/2", "1", "2", "2", "5/2"],
            "1",
            "5/2",
        );
        let dp = optimal_partition(&g).unwrap();
        let n = g.n() as u64;
        assert!(dp.welfare >= g.min() * n);
        assert!(dp.welfare <= g.max() * n);
        let singles = CoalitionStructure::new(
            g.players().map(Coalition::singleton).collect(),
        )
        .unwrap();
        assert!(dp.welfare >= singles.social_welfare(&g));
        let _ = PlayerId(0);
    }
}
