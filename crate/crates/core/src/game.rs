//! Characteristic functions, coalitions, arrival orders and social welfare.
//!
//! A game assigns an exact [`Value`] to every subset of players and carries
//! declared bounds `min`/`max` with `0 < min <= v(S) <= max` for every
//! nonempty `S`, and monotonicity `v(S) <= v(T)` for `S ⊆ T`. The empty
//! coalition is fixed at zero so a coalition founder's marginal contribution
//! equals her singleton value.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::value::Value;

/// Default ceiling on the player count for validated games.
pub const DEFAULT_MAX_PLAYERS: usize = 10;

/// A player, identified by an arrival-independent index in `[0, n)`.
/// Player `i` corresponds to bit `i` of a coalition mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerId(pub usize);

impl PlayerId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

impl fmt::Debug for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

/// A subset of players encoded as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coalition(pub u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn singleton(p: PlayerId) -> Self {
        Coalition(1 << p.0)
    }

    pub fn full(n: usize) -> Self {
        Coalition(((1u64 << n) - 1) as u32)
    }

    pub fn from_players<I: IntoIterator<Item = PlayerId>>(players: I) -> Self {
        let mut mask = 0u32;
        for p in players {
            mask |= 1 << p.0;
        }
        Coalition(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, p: PlayerId) -> bool {
        self.0 & (1 << p.0) != 0
    }

    pub fn with(self, p: PlayerId) -> Self {
        Coalition(self.0 | (1 << p.0))
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Coalition) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: Coalition) -> Self {
        Coalition(self.0 | other.0)
    }

    pub fn players(self) -> impl Iterator<Item = PlayerId> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(PlayerId(i))
            }
        })
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, p) in self.players().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The class index of a bounded game: the unique integer with
/// `delta * min <= max < (delta + 1) * min`, i.e. `floor(max/min)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeltaClass(pub u64);

impl DeltaClass {
    pub fn value(self) -> u64 {
        self.0
    }
}

/// Constraint violations reported by game validation. Validation collects
/// every violated constraint rather than stopping at the first.
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error, Serialize)]
pub enum ValidationError {
    #[error("value table has {got} entries, expected {expected}")]
    WrongTableSize { expected: usize, got: usize },
    #[error("player count {n} exceeds limit {limit}")]
    TooManyPlayers { n: usize, limit: usize },
    #[error("bad bounds: min={min}, max={max} (need 0 < min <= max)")]
    BadBounds { min: Value, max: Value },
    #[error("empty coalition must have value 0, got {value}")]
    EmptyNotZero { value: Value },
    #[error("not monotone: v({subset}) = {subset_value} > {superset_value} = v({superset})")]
    NotMonotone {
        subset: Coalition,
        superset: Coalition,
        subset_value: Value,
        superset_value: Value,
    },
    #[error("v({coalition}) = {value} outside [min, max]")]
    OutOfBounds { coalition: Coalition, value: Value },
}

/// A validated monotone bounded characteristic function.
///
/// Immutable after construction; safe to share read-only across workers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Game {
    n: usize,
    values: Vec<Value>,
    min: Value,
    max: Value,
    delta: DeltaClass,
}

impl Game {
    /// Validates and builds a game. `values[m]` is the value of the coalition
    /// with mask `m`; the table must have `2^n` entries with `values[0] == 0`.
    /// On failure returns every violated constraint.
    pub fn new(
        n: usize,
        values: Vec<Value>,
        min: Value,
        max: Value,
    ) -> Result<Self, Vec<ValidationError>> {
        Self::with_limit(n, values, min, max, DEFAULT_MAX_PLAYERS)
    }

    pub fn with_limit(
        n: usize,
        values: Vec<Value>,
        min: Value,
        max: Value,
        limit: usize,
    ) -> Result<Self, Vec<ValidationError>> {
        let mut errors = Vec::new();
        if n < 1 || n > limit {
            errors.push(ValidationError::TooManyPlayers { n, limit });
            return Err(errors);
        }
        let expected = 1usize << n;
        if values.len() != expected {
            errors.push(ValidationError::WrongTableSize {
                expected,
                got: values.len(),
            });
            return Err(errors);
        }
        if !min.is_positive() || max < min {
            errors.push(ValidationError::BadBounds {
                min: min.clone(),
                max: max.clone(),
            });
        }
        if !values[0].is_zero() {
            errors.push(ValidationError::EmptyNotZero {
                value: values[0].clone(),
            });
        }
        for m in 1..expected {
            let c = Coalition(m as u32);
            if values[m] < min || values[m] > max {
                errors.push(ValidationError::OutOfBounds {
                    coalition: c,
                    value: values[m].clone(),
                });
            }
            // Adjacent pairs S ⊂ S ∪ {j} witness every monotonicity failure.
            for j in 0..n {
                let bit = 1usize << j;
                if m & bit == 0 {
                    let sup = m | bit;
                    if values[m] > values[sup] {
                        errors.push(ValidationError::NotMonotone {
                            subset: c,
                            superset: Coalition(sup as u32),
                            subset_value: values[m].clone(),
                            superset_value: values[sup].clone(),
                        });
                    }
                }
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        let delta = DeltaClass(
            (&max / &min)
                .floor_int()
                .to_u64()
                .expect("delta class fits in u64"),
        );
        Ok(Game {
            n,
            values,
            min,
            max,
            delta,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn players(&self) -> impl Iterator<Item = PlayerId> {
        (0..self.n).map(PlayerId)
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::full(self.n)
    }

    /// `v(S)`; the empty coalition is worth zero.
    pub fn value(&self, c: Coalition) -> &Value {
        &self.values[c.0 as usize]
    }

    pub fn min(&self) -> &Value {
        &self.min
    }

    pub fn max(&self) -> &Value {
        &self.max
    }

    /// Class index `floor(max/min)` of the declared bounds.
    pub fn delta(&self) -> DeltaClass {
        self.delta
    }

    pub fn table(&self) -> &[Value] {
        &self.values
    }
}

/// Errors building a coalition structure.
#[derive(Clone, Copy, PartialEq, Eq, Debug, thiserror::Error)]
pub enum StructureError {
    #[error("blocks {a} and {b} overlap")]
    OverlappingBlocks { a: Coalition, b: Coalition },
    #[error("empty block")]
    EmptyBlock,
}

/// A set of nonempty pairwise-disjoint coalitions, kept sorted by mask so
/// that equal structures compare equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct CoalitionStructure {
    blocks: Vec<Coalition>,
}

impl CoalitionStructure {
    pub fn empty() -> Self {
        CoalitionStructure { blocks: Vec::new() }
    }

    pub fn new(mut blocks: Vec<Coalition>) -> Result<Self, StructureError> {
        let mut seen = Coalition::EMPTY;
        for &b in &blocks {
            if b.is_empty() {
                return Err(StructureError::EmptyBlock);
            }
            if seen.intersects(b) {
                let other = *blocks
                    .iter()
                    .find(|&&a| a != b && a.intersects(b))
                    .unwrap_or(&b);
                return Err(StructureError::OverlappingBlocks { a: other, b });
            }
            seen = seen.union(b);
        }
        blocks.sort_unstable();
        Ok(CoalitionStructure { blocks })
    }

    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Union of all blocks.
    pub fn union_mask(&self) -> Coalition {
        self.blocks
            .iter()
            .fold(Coalition::EMPTY, |acc, &b| acc.union(b))
    }

    pub fn contains_block(&self, c: Coalition) -> bool {
        self.blocks.binary_search(&c).is_ok()
    }

    /// Block containing player `p`, if any.
    pub fn block_of(&self, p: PlayerId) -> Option<Coalition> {
        self.blocks.iter().copied().find(|b| b.contains(p))
    }

    /// Exact social welfare `Σ_{S∈C} v(S)`.
    pub fn social_welfare(&self, game: &Game) -> Value {
        let mut sum = Value::zero();
        for &b in &self.blocks {
            sum += game.value(b);
        }
        sum
    }
}

impl fmt::Display for CoalitionStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, thiserror::Error)]
#[error("sequence is not a permutation of the {n} players")]
pub struct OrderError {
    pub n: usize,
}

/// An arrival order: a permutation of the players. Position `t` (0-based)
/// holds the player arriving at step `t + 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ArrivalOrder {
    seq: Vec<PlayerId>,
    pos: Vec<usize>,
}

/// The players of a coalition in their relative arrival order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubOrder {
    pub players: Vec<PlayerId>,
    /// True iff the coalition is exactly the earliest `|S|` arrivals.
    pub is_prefix: bool,
}

impl ArrivalOrder {
    pub fn new(seq: Vec<PlayerId>) -> Result<Self, OrderError> {
        let n = seq.len();
        let mut pos = vec![usize::MAX; n];
        for (t, p) in seq.iter().enumerate() {
            if p.0 >= n || pos[p.0] != usize::MAX {
                return Err(OrderError { n });
            }
            pos[p.0] = t;
        }
        Ok(ArrivalOrder { seq, pos })
    }

    pub fn identity(n: usize) -> Self {
        ArrivalOrder {
            seq: (0..n).map(PlayerId).collect(),
            pos: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.seq.len()
    }

    pub fn players(&self) -> &[PlayerId] {
        &self.seq
    }

    /// Player arriving at 0-based position `t`.
    pub fn player_at(&self, t: usize) -> PlayerId {
        self.seq[t]
    }

    /// 0-based arrival position of a player.
    pub fn arrival_index(&self, p: PlayerId) -> usize {
        self.pos[p.0]
    }

    /// Players of `coalition` filtered in arrival order, with the prefix flag.
    pub fn sub_order(&self, coalition: Coalition) -> SubOrder {
        let players: Vec<PlayerId> = self
            .seq
            .iter()
            .copied()
            .filter(|p| coalition.contains(*p))
            .collect();
        let k = players.len();
        let is_prefix = self.seq[..k].iter().all(|p| coalition.contains(*p));
        SubOrder { players, is_prefix }
    }
}

impl fmt::Display for ArrivalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.seq.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    /// Three-player upper-bound instance: singletons and {a0,a1} at min,
    /// the other pairs at 2min, grand coalition at max.
    pub fn three_player_bound_game(min: i64, max: i64) -> Game {
        let min = Value::integer(min);
        let max = Value::integer(max);
        let two_min = &min + &min;
        let values = vec![
            Value::zero(),
            min.clone(),      // {a0}
            min.clone(),      // {a1}
            min.clone(),      // {a0,a1}
            min.clone(),      // {a2}
            two_min.clone(),  // {a0,a2}
            two_min.clone(),  // {a1,a2}
            max.clone(),      // grand
        ];
        Game::new(3, values, min, max).unwrap()
    }

    #[test]
    fn validates_bound_instance() {
        let g = three_player_bound_game(1, 5);
        assert_eq!(g.delta().value(), 5);
        assert_eq!(g.value(Coalition(0b111)), &Value::integer(5));
    }

    #[test]
    fn detects_monotonicity_violation() {
        // v({a1}) = 1 but v({a1,a2}) = 1/2.
        let values = vec![
            Value::zero(),
            v("1"),
            v("1"),
            v("1/2"),
            v("1"),
            v("1"),
            v("1"),
            v("1"),
        ];
        let errs = Game::new(3, values, v("1/2"), v("1")).unwrap_err();
        assert!(errs.iter().any(|e| matches!(
            e,
            ValidationError::NotMonotone { subset, superset, .. }
                if *subset == Coalition(0b01) && *superset == Coalition(0b11)
        ) || matches!(
            e,
            ValidationError::NotMonotone { subset, superset, .. }
                if *subset == Coalition(0b10) && *superset == Coalition(0b11)
        )));
    }

    #[test]
    fn additive_game_is_valid_with_delta_three() {
        let mut values = vec![Value::zero(); 8];
        for m in 1usize..8 {
            values[m] = Value::integer(m.count_ones() as i64);
        }
        let g = Game::new(3, values, Value::one(), Value::integer(3)).unwrap();
        assert_eq!(g.delta().value(), 3);
    }

    #[test]
    fn collects_every_violation() {
        // Bad bounds and a nonzero empty set at once.
        let values = vec![v("1"), v("1"), v("1"), v("1")];
        let errs = Game::new(2, values, v("2"), v("1")).unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, ValidationError::BadBounds { .. })));
        assert!(errs
            .iter()
            .any(|e| matches!(e, ValidationError::EmptyNotZero { .. })));
    }

    #[test]
    fn delta_class_examples() {
        let mk = |min: &str, max: &str| {
            let min = v(min);
            let max = v(max);
            Game::new(
                1,
                vec![Value::zero(), min.clone()],
                min.clone(),
                max.clone(),
            )
            .unwrap()
            .delta()
            .value()
        };
        assert_eq!(mk("1", "5"), 5);
        assert_eq!(mk("1", "5/2"), 2);
        assert_eq!(mk("2", "6"), 3);
    }

    #[test]
    fn delta_class_tight_inequalities() {
        // delta*min <= max < (delta+1)*min on assorted rational bounds.
        for (min, max) in [("1", "1"), ("2/3", "7/3"), ("3/7", "15/7"), ("5", "26")] {
            let min = v(min);
            let max = v(max);
            let g = Game::new(
                1,
                vec![Value::zero(), min.clone()],
                min.clone(),
                max.clone(),
            )
            .unwrap();
            let d = g.delta().value();
            assert!(&min * d <= max);
            assert!(&min * (d + 1) > max);
        }
    }

    #[test]
    fn social_welfare_examples() {
        let g = three_player_bound_game(1, 5);
        let singletons = CoalitionStructure::new(vec![
            Coalition(0b001),
            Coalition(0b010),
            Coalition(0b100),
        ])
        .unwrap();
        assert_eq!(singletons.social_welfare(&g), Value::integer(3));
        let grand = CoalitionStructure::new(vec![Coalition(0b111)]).unwrap();
        assert_eq!(grand.social_welfare(&g), Value::integer(5));
        assert_eq!(
            CoalitionStructure::empty().social_welfare(&g),
            Value::zero()
        );
    }

    #[test]
    fn overlapping_blocks_rejected() {
        let err =
            CoalitionStructure::new(vec![Coalition(0b011), Coalition(0b110)]).unwrap_err();
        assert!(matches!(err, StructureError::OverlappingBlocks { .. }));
        assert!(matches!(
            CoalitionStructure::new(vec![Coalition::EMPTY]),
            Err(StructureError::EmptyBlock)
        ));
    }

    #[test]
    fn sub_order_examples() {
        // (x,y,z) = (a0,a1,a2)
        let order = ArrivalOrder::identity(3);
        let s = order.sub_order(Coalition(0b101));
        assert_eq!(s.players, vec![PlayerId(0), PlayerId(2)]);
        assert!(!s.is_prefix);
        let s = order.sub_order(Coalition(0b011));
        assert_eq!(s.players, vec![PlayerId(0), PlayerId(1)]);
        assert!(s.is_prefix);
        let rev = ArrivalOrder::new(vec![PlayerId(2), PlayerId(1), PlayerId(0)]).unwrap();
        let s = rev.sub_order(Coalition(0b001));
        assert_eq!(s.players, vec![PlayerId(0)]);
        assert!(!s.is_prefix);
    }

    #[test]
    fn arrival_order_rejects_non_permutations() {
        assert!(ArrivalOrder::new(vec![PlayerId(0), PlayerId(0)]).is_err());
        assert!(ArrivalOrder::new(vec![PlayerId(0), PlayerId(2)]).is_err());
    }
}
