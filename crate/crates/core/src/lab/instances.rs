//! Instance generators: the named worst-case constructions behind the
//! certified bounds, seeded random games, and exhaustive grid families.
//!
//! Constructions fix only the coalition values their argument touches; the
//! rest of the table is completed by monotone closure (max over completed
//! subsets) clamped to `[min, max]`.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{
    ArrivalOrder, Coalition, Game, PlayerId, ValidationError, DEFAULT_MAX_PLAYERS,
};
use crate::value::Value;

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("bad instance parameters: {0}")]
    BadParams(String),
    #[error("generated table failed validation: {0:?}")]
    Invalid(Vec<ValidationError>),
}

fn bad(msg: impl Into<String>) -> InstanceError {
    InstanceError::BadParams(msg.into())
}

/// Partial value table; `build` completes it by clamped monotone closure.
pub struct TableBuilder {
    n: usize,
    entries: Vec<Option<Value>>,
}

impl TableBuilder {
    pub fn new(n: usize) -> Self {
        TableBuilder {
            n,
            entries: vec![None; 1 << n],
        }
    }

    pub fn set(&mut self, mask: Coalition, value: Value) -> &mut Self {
        self.entries[mask.mask() as usize] = Some(value);
        self
    }

    /// Fills unspecified masks with `clamp(max over subsets, min, max)` and
    /// validates the result.
    pub fn build(&self, min: &Value, max: &Value) -> Result<Game, InstanceError> {
        let size = 1usize << self.n;
        let mut values = vec![Value::zero(); size];
        for mask in 1..size {
            values[mask] = match &self.entries[mask] {
                Some(v) => v.clone(),
                None => {
                    let mut lower = Value::zero();
                    for j in 0..self.n {
                        let bit = 1usize << j;
                        if mask & bit != 0 {
                            let sub = mask ^ bit;
                            if sub != 0 && values[sub] > lower {
                                lower = values[sub].clone();
                            }
                        }
                    }
                    lower.max(min.clone()).min(max.clone())
                }
            };
        }
        Game::new(self.n, values, min.clone(), max.clone()).map_err(InstanceError::Invalid)
    }
}

/// The named instance constructions, keyed the way the verification CLI
/// spells them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PaperCase {
    /// Three players; no irrevocable (or individually rational) policy can
    /// beat welfare `3min` against optimum `max` under the order (x, y, z).
    ThmIrrV3 { min: Value, max: Value },
    /// Chain of `2·m·delta` players where consecutive joiners crowd out the
    /// high-value pairings: drives the plain marginal-contribution policy to
    /// `2min/max` as `eps` shrinks.
    ExAmcChain {
        delta: u64,
        m: u64,
        min: Value,
        max: Value,
        eps: Value,
    },
    /// Four players showing the thresholded policy's `1/2` guarantee is
    /// tight: greedy welfare `4min + eps + 2min` against optimum `2max`.
    ThmAmchLb3Tight { min: Value, max: Value, eps: Value },
    /// Four players on which any positive threshold breaks temporal
    /// stability: the last joiner of one block would collect the initiator
    /// bonus in the other.
    PropHtnsWitness { min: Value, h: Value },
    /// Same table as `ThmIrrV3`; the binding instance for individually
    /// rational non-irrevocable policies.
    ThmNirrIrUb { min: Value, max: Value },
    /// Two adversary branches against non-anticipative policies: one traps
    /// policies that split early, the other traps policies that keep joining.
    ThmNirrUbFamily {
        k: usize,
        min: Value,
        max: Value,
        eps: Value,
    },
    /// `2k` players where bank policies fill one coalition to `mu*max` and
    /// strand the tail: ratio `(mu*max + min) / (mu*max + (k-1)*max)`.
    ThmNirrLbWorst {
        k: usize,
        min: Value,
        max: Value,
        mu: Value,
    },
}

/// A generated instance: the game, the arrival order its argument uses, and
/// display aliases for the players.
#[derive(Clone, Debug)]
pub struct NamedInstance {
    pub label: String,
    pub game: Game,
    pub order: ArrivalOrder,
    pub aliases: Vec<(String, usize)>,
}

fn alias_a1(n: usize) -> Vec<(String, usize)> {
    (0..n).map(|i| (format!("a{}", i + 1), i)).collect()
}

fn identity_order(n: usize) -> ArrivalOrder {
    ArrivalOrder::identity(n)
}

/// Builds the instances for a case. Every case yields one instance except
/// the two-branch adversary family.
pub fn paper_instances(case: &PaperCase) -> Result<Vec<NamedInstance>, InstanceError> {
    match case {
        PaperCase::ThmIrrV3 { min, max } => {
            Ok(vec![bound_counterexample(min, max, "thm-irrv3")?])
        }
        PaperCase::ThmNirrIrUb { min, max } => {
            Ok(vec![bound_counterexample(min, max, "thm-nirrirub")?])
        }
        PaperCase::ExAmcChain {
            delta,
            m,
            min,
            max,
            eps,
        } => Ok(vec![chain_instance(*delta, *m, min, max, eps)?]),
        PaperCase::ThmAmchLb3Tight { min, max, eps } => {
            Ok(vec![tightness_instance(min, max, eps)?])
        }
        PaperCase::PropHtnsWitness { min, h } => Ok(vec![stability_witness(min, h)?]),
        PaperCase::ThmNirrUbFamily { k, min, max, eps } => Ok(vec![
            split_trap_instance(*k, min, max, eps)?,
            join_trap_instance(*k, min, max, eps)?,
        ]),
        PaperCase::ThmNirrLbWorst { k, min, max, mu } => {
            Ok(vec![bank_worst_instance(*k, min, max, mu)?])
        }
    }
}

/// Singletons and {x,y} at `min`, {x,z} and {y,z} at `2min`, grand coalition
/// at `max`.
fn bound_counterexample(
    min: &Value,
    max: &Value,
    label: &str,
) -> Result<NamedInstance, InstanceError> {
    if !min.is_positive() {
        return Err(bad("min must be positive"));
    }
    if *max < min * 3u64 {
        return Err(bad("needs max >= 3*min to sit in class three or higher"));
    }
    let mut b = TableBuilder::new(3);
    let two_min = min * 2u64;
    for i in 0..3 {
        b.set(Coalition::singleton(PlayerId(i)), min.clone());
    }
    b.set(Coalition(0b011), min.clone());
    b.set(Coalition(0b101), two_min.clone());
    b.set(Coalition(0b110), two_min);
    b.set(Coalition(0b111), max.clone());
    let game = b.build(min, max)?;
    Ok(NamedInstance {
        label: label.to_string(),
        game,
        order: identity_order(3),
        aliases: vec![
            ("x".to_string(), 0),
            ("y".to_string(), 1),
            ("z".to_string(), 2),
        ],
    })
}

/// `n = 2*m*delta` players: runs of consecutive players gain `min + eps`
/// per joiner up to length `delta`; players `delta` apart pair for `max`.
fn chain_instance(
    delta: u64,
    m: u64,
    min: &Value,
    max: &Value,
    eps: &Value,
) -> Result<NamedInstance, InstanceError> {
    if delta < 2 || m < 1 {
        return Err(bad("chain needs delta >= 2 and m >= 1"));
    }
    let n = (2 * m * delta) as usize;
    if n > DEFAULT_MAX_PLAYERS {
        return Err(bad(format!(
            "chain would have {n} players, above the {DEFAULT_MAX_PLAYERS}-player ceiling"
        )));
    }
    if !eps.is_positive() {
        return Err(bad("eps must be positive"));
    }
    if &(min * delta) > max || &(min * (delta + 1)) <= max {
        return Err(bad("bounds must satisfy delta*min <= max < (delta+1)*min"));
    }
    let longest_run = min + &((min + eps) * (delta - 1));
    if longest_run > *max {
        return Err(bad("eps too large: a full run would exceed max"));
    }
    let mut b = TableBuilder::new(n);
    for i in 0..n {
        b.set(Coalition::singleton(PlayerId(i)), min.clone());
    }
    // Consecutive runs a_i..a_{i+len-1} for len <= delta.
    for start in 0..n {
        for len in 2..=(delta as usize) {
            if start + len > n {
                break;
            }
            let mask = Coalition::from_players((start..start + len).map(PlayerId));
            let value = min + &((min + eps) * (len as u64 - 1));
            b.set(mask, value);
        }
    }
    // Pairs delta apart are worth the maximum.
    for i in 0..n {
        let j = i + delta as usize;
        if j < n {
            b.set(
                Coalition::from_players([PlayerId(i), PlayerId(j)]),
                max.clone(),
            );
        }
    }
    let game = b.build(min, max)?;
    Ok(NamedInstance {
        label: "ex-amc-chain".to_string(),
        game,
        order: identity_order(n),
        aliases: alias_a1(n),
    })
}

/// Four players: v({a1,a2}) = 4min + eps, the "cross" pairs worth `max`,
/// blocking pairs worth `2min`.
fn tightness_instance(
    min: &Value,
    max: &Value,
    eps: &Value,
) -> Result<NamedInstance, InstanceError> {
    if !min.is_positive() || !eps.is_positive() {
        return Err(bad("min and eps must be positive"));
    }
    let lure = &(min * 4u64) + eps;
    if lure > *max {
        return Err(bad("needs 4*min + eps <= max"));
    }
    let two_min = min * 2u64;
    let mut b = TableBuilder::new(4);
    for i in 0..4 {
        b.set(Coalition::singleton(PlayerId(i)), min.clone());
    }
    b.set(Coalition(0b0011), lure); // {a1,a2}
    b.set(Coalition(0b1100), two_min.clone()); // {a3,a4}
    b.set(Coalition(0b1001), two_min.clone()); // {a1,a4}
    b.set(Coalition(0b0110), two_min); // {a2,a3}
    b.set(Coalition(0b0101), max.clone()); // {a1,a3}
    b.set(Coalition(0b1010), max.clone()); // {a2,a4}
    let game = b.build(min, max)?;
    Ok(NamedInstance {
        label: "thm-amchlb3-tight".to_string(),
        game,
        order: identity_order(4),
        aliases: alias_a1(4),
    })
}

/// Four players on which the threshold policy with this `h > 0` is not
/// temporally stable. Derivation: a3 joins {a2} and keeps `2min`; had the
/// final block {a1,a4} formed around her instead, she would keep
/// `2min - s` and collect a4's marginal contribution `s + b <= h` on top,
/// for a strict gain of `b - ... = h/2` with `s = min(h/4, min/2)`,
/// `b = h/2`.
fn stability_witness(min: &Value, h: &Value) -> Result<NamedInstance, InstanceError> {
    if !min.is_positive() {
        return Err(bad("min must be positive"));
    }
    if !h.is_positive() {
        return Err(bad("the stability witness needs h > 0"));
    }
    let s = (h / &Value::integer(4)).min(min / &Value::integer(2));
    let b_bonus = h / &Value::integer(2);
    let three_min = min * 3u64;
    let mut t = TableBuilder::new(4);
    for i in 0..4 {
        t.set(Coalition::singleton(PlayerId(i)), min.clone());
    }
    t.set(Coalition(0b0011), min * 2u64); // {a1,a2}
    t.set(Coalition(0b0110), &three_min + h); // {a2,a3}
    t.set(Coalition(0b0101), &(&three_min + h) - &s); // {a1,a3}
    t.set(Coalition(0b1001), &three_min + h); // {a1,a4}
    let v134 = &(&(&three_min + h) - &s) + &(&s + &b_bonus);
    t.set(Coalition(0b1101), v134.clone()); // {a1,a3,a4}
    let max = v134;
    let game = t.build(min, &max)?;
    Ok(NamedInstance {
        label: "prop-htns-witness".to_string(),
        game,
        order: identity_order(4),
        aliases: alias_a1(4),
    })
}

/// Adversary branch for policies that split off a new coalition after a run
/// of near-flat joiners: `k + 1` players where every option at the end is
/// worth `3min` against optimum `max`.
fn split_trap_instance(
    k: usize,
    min: &Value,
    max: &Value,
    eps: &Value,
) -> Result<NamedInstance, InstanceError> {
    check_trap_params(k, min, max, eps, k + 1)?;
    let n = k + 1;
    let mut b = TableBuilder::new(n);
    for i in 0..n {
        b.set(Coalition::singleton(PlayerId(i)), min.clone());
    }
    for i in 2..=k {
        let mask = Coalition::from_players((0..i).map(PlayerId));
        b.set(mask, min + &(eps * (i as u64 - 1)));
    }
    let two_min = min * 2u64;
    let mut detour = Coalition::from_players((0..k - 1).map(PlayerId));
    detour = detour.with(PlayerId(k));
    b.set(detour, two_min.clone());
    b.set(
        Coalition::from_players([PlayerId(k - 1), PlayerId(k)]),
        two_min,
    );
    b.set(Coalition::full(n), max.clone());
    let game = b.build(min, max)?;
    Ok(NamedInstance {
        label: "thm-nirrub-family-split".to_string(),
        game,
        order: identity_order(n),
        aliases: alias_a1(n),
    })
}

/// Adversary branch for policies that keep joining: `2k` players where the
/// first coalition saturates at `max` and the tail can only add `min` each,
/// while crossing pairs would each have been worth `max`.
fn join_trap_instance(
    k: usize,
    min: &Value,
    max: &Value,
    eps: &Value,
) -> Result<NamedInstance, InstanceError> {
    check_trap_params(k, min, max, eps, 2 * k)?;
    if &(min * (k as u64 - 1)) > max {
        return Err(bad("tail group would exceed max: needs (k-1)*min <= max"));
    }
    let n = 2 * k;
    let mut b = TableBuilder::new(n);
    for i in 0..n {
        b.set(Coalition::singleton(PlayerId(i)), min.clone());
    }
    for i in 2..=k {
        let mask = Coalition::from_players((0..i).map(PlayerId));
        b.set(mask, min + &(eps * (i as u64 - 1)));
    }
    b.set(Coalition::from_players((0..=k).map(PlayerId)), max.clone());
    for i in 0..k {
        b.set(
            Coalition::from_players([PlayerId(i), PlayerId(k + i)]),
            max.clone(),
        );
    }
    // The tail is additive at min per player.
    let tail: Vec<usize> = (k + 1..n).collect();
    for mask_bits in 1u32..(1 << tail.len()) {
        let members = tail
            .iter()
            .enumerate()
            .filter(|(j, _)| mask_bits & (1 << j) != 0)
            .map(|(_, &i)| PlayerId(i));
        let mask = Coalition::from_players(members);
        b.set(mask, min * mask_bits.count_ones() as u64);
    }
    let game = b.build(min, max)?;
    Ok(NamedInstance {
        label: "thm-nirrub-family-join".to_string(),
        game,
        order: identity_order(n),
        aliases: alias_a1(n),
    })
}

fn check_trap_params(
    k: usize,
    min: &Value,
    max: &Value,
    eps: &Value,
    n: usize,
) -> Result<(), InstanceError> {
    if k < 2 {
        return Err(bad("needs k >= 2"));
    }
    if n > DEFAULT_MAX_PLAYERS {
        return Err(bad(format!(
            "instance would have {n} players, above the {DEFAULT_MAX_PLAYERS}-player ceiling"
        )));
    }
    if !min.is_positive() || !eps.is_positive() {
        return Err(bad("min and eps must be positive"));
    }
    if *max < min * 3u64 {
        return Err(bad("needs max >= 3*min"));
    }
    if &(eps * (k as u64 - 1)) >= min {
        return Err(bad("eps too large: needs (k-1)*eps < min"));
    }
    Ok(())
}

/// `2k` players: the first group is flat at `min`, `{a1, a_{k+1}}` is worth
/// `mu*max`, the remaining crossing pairs are worth `max`, and the tail
/// group is flat at `min`.
fn bank_worst_instance(
    k: usize,
    min: &Value,
    max: &Value,
    mu: &Value,
) -> Result<NamedInstance, InstanceError> {
    if k < 2 {
        return Err(bad("needs k >= 2 (more than two players)"));
    }
    let n = 2 * k;
    if n > DEFAULT_MAX_PLAYERS {
        return Err(bad(format!(
            "instance would have {n} players, above the {DEFAULT_MAX_PLAYERS}-player ceiling"
        )));
    }
    if !mu.is_positive() || *mu > Value::one() {
        return Err(bad("mu must be in (0, 1]"));
    }
    if *max < min * 3u64 {
        return Err(bad("needs max >= 3*min"));
    }
    let threshold = mu * max;
    if threshold < *min {
        return Err(bad("needs mu*max >= min to stay monotone"));
    }
    let mut b = TableBuilder::new(n);
    for i in 0..n {
        b.set(Coalition::singleton(PlayerId(i)), min.clone());
    }
    b.set(
        Coalition::from_players([PlayerId(0), PlayerId(k)]),
        threshold,
    );
    for i in 1..k {
        b.set(
            Coalition::from_players([PlayerId(i), PlayerId(k + i)]),
            max.clone(),
        );
    }
    let game = b.build(min, max)?;
    Ok(NamedInstance {
        label: "thm-nirrlb-worst".to_string(),
        game,
        order: identity_order(n),
        aliases: alias_a1(n),
    })
}

/// Draws every nonempty coalition value uniformly from `[min, max]` (on the
/// grid when a step is given, otherwise on a fine thousandth grid), then
/// enforces monotonicity by upward closure. Deterministic per seed.
pub fn random_instance(
    n: usize,
    min: &Value,
    max: &Value,
    seed: u64,
    grid_step: Option<&Value>,
) -> Result<Game, InstanceError> {
    if n < 1 || n > DEFAULT_MAX_PLAYERS {
        return Err(bad(format!("n must be in [1, {DEFAULT_MAX_PLAYERS}]")));
    }
    if !min.is_positive() || max < min {
        return Err(bad("needs 0 < min <= max"));
    }
    let span = max - min;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = 1usize << n;
    let mut values = vec![Value::zero(); size];
    match grid_step {
        Some(step) => {
            if !step.is_positive() {
                return Err(bad("grid step must be positive"));
            }
            let slots = (&span / step).floor_int().to_u64().unwrap_or(0);
            for value in values.iter_mut().skip(1) {
                let j = rng.gen_range(0..=slots);
                *value = min + &(step * j);
            }
        }
        None => {
            for value in values.iter_mut().skip(1) {
                let j = rng.gen_range(0..=1000u64);
                *value = min + &(&(&span * j) / &Value::integer(1000));
            }
        }
    }
    // Upward closure in ascending mask order repairs monotonicity.
    for mask in 1..size {
        for j in 0..n {
            let bit = 1usize << j;
            if mask & bit != 0 {
                let sub = mask ^ bit;
                if sub != 0 && values[sub] > values[mask] {
                    values[mask] = values[sub].clone();
                }
            }
        }
    }
    Game::new(n, values, min.clone(), max.clone()).map_err(InstanceError::Invalid)
}

/// Evenly spaced grid of `points >= 2` values from `min` to `max` inclusive.
pub fn grid_points(min: &Value, max: &Value, points: usize) -> Vec<Value> {
    assert!(points >= 2);
    let step = &(max - min) / &Value::integer(points as i64 - 1);
    (0..points)
        .map(|j| min + &(&step * j as u64))
        .collect()
}

/// Enumerates every monotone value table over the given grid points and
/// hands each validated game to `f`. Exhaustive: intended for small `n`.
pub fn for_each_grid_game<F: FnMut(Game)>(
    n: usize,
    min: &Value,
    max: &Value,
    points: &[Value],
    f: &mut F,
) {
    assert!(n >= 1 && n <= 3, "exhaustive grid enumeration is for n <= 3");
    let size = 1usize << n;
    let mut idx = vec![0usize; size];
    fill(n, min, max, points, &mut idx, 1, f);

    fn fill<F: FnMut(Game)>(
        n: usize,
        min: &Value,
        max: &Value,
        points: &[Value],
        idx: &mut Vec<usize>,
        mask: usize,
        f: &mut F,
    ) {
        if mask == 1 << n {
            let values: Vec<Value> = (0..1usize << n)
                .map(|m| {
                    if m == 0 {
                        Value::zero()
                    } else {
                        points[idx[m]].clone()
                    }
                })
                .collect();
            let game = Game::new(n, values, min.clone(), max.clone())
                .expect("grid tables are monotone and bounded by construction");
            f(game);
            return;
        }
        let mut lower = 0usize;
        for j in 0..n {
            let bit = 1usize << j;
            if mask & bit != 0 {
                let sub = mask ^ bit;
                if sub != 0 {
                    lower = lower.max(idx[sub]);
                }
            }
        }
        for p in lower..points.len() {
            idx[mask] = p;
            fill(n, min, max, points, idx, mask + 1, f);
        }
    }
}

/// Collects the whole exhaustive grid family into a vector.
pub fn grid_family(n: usize, min: &Value, max: &Value, points: &[Value]) -> Vec<Game> {
    let mut out = Vec::new();
    for_each_grid_game(n, min, max, points, &mut |g| out.push(g));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    #[test]
    fn bound_counterexample_matches_expected_table() {
        let inst = &paper_instances(&PaperCase::ThmIrrV3 {
            min: v("1"),
            max: v("5"),
        })
        .unwrap()[0];
        let g = &inst.game;
        assert_eq!(g.value(Coalition(0b011)), &v("1"));
        assert_eq!(g.value(Coalition(0b101)), &v("2"));
        assert_eq!(g.value(Coalition(0b110)), &v("2"));
        assert_eq!(g.value(Coalition(0b111)), &v("5"));
        assert_eq!(g.delta().value(), 5);
        assert_eq!(inst.aliases[0].0, "x");
        // Too small a max is refused.
        assert!(paper_instances(&PaperCase::ThmIrrV3 {
            min: v("1"),
            max: v("5/2"),
        })
        .is_err());
    }

    #[test]
    fn chain_instance_closure_values() {
        let inst = &paper_instances(&PaperCase::ExAmcChain {
            delta: 2,
            m: 1,
            min: v("1"),
            max: v("5/2"),
            eps: v("1/100"),
        })
        .unwrap()[0];
        let g = &inst.game;
        assert_eq!(g.n(), 4);
        // Consecutive pairs at 2 + eps, crossing pairs at max.
        assert_eq!(g.value(Coalition(0b0011)), &v("201/100"));
        assert_eq!(g.value(Coalition(0b0110)), &v("201/100"));
        assert_eq!(g.value(Coalition(0b1100)), &v("201/100"));
        assert_eq!(g.value(Coalition(0b0101)), &v("5/2"));
        assert_eq!(g.value(Coalition(0b1010)), &v("5/2"));
        // {a1,a4} is pinned by nothing: closure leaves it at min.
        assert_eq!(g.value(Coalition(0b1001)), &v("1"));
        // Every triple contains a crossing pair.
        assert_eq!(g.value(Coalition(0b0111)), &v("5/2"));
    }

    #[test]
    fn tightness_instance_table() {
        let inst = &paper_instances(&PaperCase::ThmAmchLb3Tight {
            min: v("1"),
            max: v("6"),
            eps: v("1/10"),
        })
        .unwrap()[0];
        let g = &inst.game;
        assert_eq!(g.value(Coalition(0b0011)), &v("41/10"));
        assert_eq!(g.value(Coalition(0b0101)), &v("6"));
        assert_eq!(g.value(Coalition(0b1111)), &v("6"));
        assert_eq!(g.value(Coalition(0b0111)), &v("6"));
        assert_eq!(g.delta().value(), 6);
    }

    #[test]
    fn bank_worst_instance_matches_expected_values() {
        let inst = &paper_instances(&PaperCase::ThmNirrLbWorst {
            k: 2,
            min: v("1"),
            max: v("10"),
            mu: v("1"),
        })
        .unwrap()[0];
        let g = &inst.game;
        assert_eq!(g.value(Coalition(0b0011)), &v("1")); // flat first group
        assert_eq!(g.value(Coalition(0b0101)), &v("10")); // {a1,a3} = mu*max
        assert_eq!(g.value(Coalition(0b0111)), &v("10")); // closure
        assert_eq!(g.value(Coalition(0b1010)), &v("10")); // {a2,a4}
        assert_eq!(g.value(Coalition(0b1000)), &v("1"));
    }

    #[test]
    fn random_instances_are_deterministic_and_valid() {
        let a = random_instance(4, &v("1"), &v("3"), 42, None).unwrap();
        let b = random_instance(4, &v("1"), &v("3"), 42, None).unwrap();
        assert_eq!(a, b);
        let c = random_instance(4, &v("1"), &v("3"), 43, None).unwrap();
        assert_ne!(a, c);
        for seed in 0..200 {
            let g = random_instance(3, &v("1"), &v("3"), seed, None).unwrap();
            assert!(g.delta().value() == 3);
        }
    }

    #[test]
    fn two_point_grid_draws_only_endpoints() {
        let step = v("2"); // max - min
        let g = random_instance(3, &v("1"), &v("3"), 7, Some(&step)).unwrap();
        for m in 1..8 {
            let val = g.value(Coalition(m));
            assert!(val == &v("1") || val == &v("3"));
        }
    }

    #[test]
    fn grid_family_counts_monotone_tables() {
        let points = grid_points(&v("1"), &v("3"), 3);
        assert_eq!(points, vec![v("1"), v("2"), v("3")]);
        // n = 2: indices (a, b, c) for {a0}, {a1}, {a0,a1} with c >= max(a,b).
        // Count = sum over c of (c+1)^2 = 1 + 4 + 9 = 14.
        let family = grid_family(2, &v("1"), &v("3"), &points);
        assert_eq!(family.len(), 14);
    }

    #[test]
    fn stability_witness_is_valid_for_assorted_thresholds() {
        for h in ["1/2", "1", "3/2", "2", "3", "7"] {
            let inst = &paper_instances(&PaperCase::PropHtnsWitness {
                min: v("1"),
                h: v(h),
            })
            .unwrap()[0];
            assert!(inst.game.delta().value() >= 3);
        }
        assert!(paper_instances(&PaperCase::PropHtnsWitness {
            min: v("1"),
            h: v("0"),
        })
        .is_err());
    }
}
