//! Distribution policies: per-arrival allocation updates and the offers that
//! arriving players evaluate.
//!
//! The irrevocable family (`amc`, `amc-h`, `oracle-pair`) only ever grows a
//! player's firm share. The bank family (`bank-greedy`, `bank-pessimistic`)
//! escrows a redistributable promise per coalition; the promise is paid out to
//! its final holder when the run ends.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::game::{Coalition, CoalitionStructure, Game, PlayerId};
use crate::solver;
use crate::value::{sqrt_lower, Value};

/// Scale used when the class-two threshold needs a square root: the rational
/// approximation is within 1e-12 relative error.
const SQRT_SCALE: u64 = 1_000_000_000_000;

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum PolicyError {
    #[error("player {player} is already a member of {coalition}")]
    PlayerAlreadyMember {
        player: PlayerId,
        coalition: Coalition,
    },
    #[error("coalition {coalition} is not part of the current structure")]
    UnknownCoalition { coalition: Coalition },
    #[error("bank of {coalition} would go negative ({amount}); invalid mu/eps combination")]
    NegativeBank { coalition: Coalition, amount: Value },
    #[error("bad policy parameters: {0}")]
    BadParams(String),
}

/// Which policy to run, with its parameters. Serializes to the wire form
/// `{"kind": "amc-h", "h": "2"}` etc.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum PolicySpec {
    #[serde(rename = "amc")]
    Amc,
    #[serde(rename = "amc-h")]
    AmcH { h: Value },
    #[serde(rename = "oracle-pair")]
    OraclePair,
    #[serde(rename = "bank-greedy")]
    BankGreedy { mu: Value },
    #[serde(rename = "bank-pessimistic")]
    BankPessimistic { mu: Value, eps: Value },
}

impl PolicySpec {
    pub fn kind_str(&self) -> &'static str {
        match self {
            PolicySpec::Amc => "amc",
            PolicySpec::AmcH { .. } => "amc-h",
            PolicySpec::OraclePair => "oracle-pair",
            PolicySpec::BankGreedy { .. } => "bank-greedy",
            PolicySpec::BankPessimistic { .. } => "bank-pessimistic",
        }
    }

    /// True for policies that never redistribute an allocated share.
    pub fn is_irrevocable(&self) -> bool {
        matches!(
            self,
            PolicySpec::Amc | PolicySpec::AmcH { .. } | PolicySpec::OraclePair
        )
    }

    /// Validates parameters against a game and precomputes whatever the
    /// policy needs (the pairing target for `oracle-pair`).
    pub fn bind(&self, game: &Game) -> Result<Policy, PolicyError> {
        match self {
            PolicySpec::AmcH { h } => {
                if h.is_negative() {
                    return Err(PolicyError::BadParams(format!("h = {h} must be >= 0")));
                }
            }
            PolicySpec::BankGreedy { mu } | PolicySpec::BankPessimistic { mu, .. } => {
                if !mu.is_positive() || *mu > Value::one() {
                    return Err(PolicyError::BadParams(format!("mu = {mu} must be in (0,1]")));
                }
            }
            _ => {}
        }
        if let PolicySpec::BankPessimistic { eps, .. } = self {
            let n = game.n() as u64;
            let bound = Value::one() / Value::integer((n * n) as i64);
            if !eps.is_positive() || *eps >= bound {
                return Err(PolicyError::BadParams(format!(
                    "eps = {eps} must satisfy 0 < eps < 1/n^2 = {bound}"
                )));
            }
        }
        let oracle_target = match self {
            PolicySpec::OraclePair => Some(
                solver::optimal_partition(game)
                    .map_err(|e| PolicyError::BadParams(e.to_string()))?
                    .structure,
            ),
            _ => None,
        };
        Ok(Policy {
            spec: self.clone(),
            oracle_target,
        })
    }
}

/// The threshold the class-dependent guarantees call for:
/// zero on class 1, `sqrt(min*(min+4max)) - 3min` (rational approximation)
/// on class 2, `min` on class 3, `2min` from class 4 up.
pub fn paper_threshold(game: &Game) -> Value {
    let min = game.min();
    let max = game.max();
    match game.delta().value() {
        1 => Value::zero(),
        2 => {
            let four_max = max * 4u64;
            let inner = min * &(min + &four_max);
            let root = sqrt_lower(&inner, SQRT_SCALE);
            let h = root - &(min * 3u64);
            // Rounding can dip a hair below zero when max = 2min exactly.
            h.max(Value::zero())
        }
        3 => min.clone(),
        _ => min * 2u64,
    }
}

/// Exact `v(S ∪ {i}) - v(S)`; nonnegative by monotonicity.
pub fn marginal_contribution(
    game: &Game,
    before: Coalition,
    player: PlayerId,
) -> Result<Value, PolicyError> {
    if before.contains(player) {
        return Err(PolicyError::PlayerAlreadyMember {
            player,
            coalition: before,
        });
    }
    Ok(game.value(before.with(player)) - game.value(before))
}

/// What a player would be allocated at the moment of joining `target`
/// (empty target means founding a new coalition). Greedy players rank by
/// `total`, pessimistic players by `firm`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Offer {
    pub target: Coalition,
    pub total: Value,
    pub firm: Value,
}

/// Escrowed promise of one coalition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bank {
    pub amount: Value,
    pub promisee: PlayerId,
}

/// Per-player firm and provisional shares plus per-coalition banks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ledger {
    firm: Vec<Value>,
    provisional: Vec<Value>,
    banks: BTreeMap<Coalition, Bank>,
}

impl Ledger {
    pub fn new(n: usize) -> Self {
        Ledger {
            firm: vec![Value::zero(); n],
            provisional: vec![Value::zero(); n],
            banks: BTreeMap::new(),
        }
    }

    pub fn firm(&self, p: PlayerId) -> &Value {
        &self.firm[p.0]
    }

    pub fn provisional(&self, p: PlayerId) -> &Value {
        &self.provisional[p.0]
    }

    /// Firm plus promised share.
    pub fn total(&self, p: PlayerId) -> Value {
        &self.firm[p.0] + &self.provisional[p.0]
    }

    pub fn firm_shares(&self) -> &[Value] {
        &self.firm
    }

    pub fn provisional_shares(&self) -> &[Value] {
        &self.provisional
    }

    pub fn bank(&self, c: Coalition) -> Option<&Bank> {
        self.banks.get(&c)
    }

    pub fn banks(&self) -> impl Iterator<Item = (&Coalition, &Bank)> {
        self.banks.iter()
    }

    #[cfg(test)]
    pub(crate) fn firm_mut(&mut self, p: PlayerId) -> &mut Value {
        &mut self.firm[p.0]
    }
}

/// One formed coalition with its members in join order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockState {
    pub mask: Coalition,
    pub members: Vec<PlayerId>,
}

impl BlockState {
    pub fn last_joiner(&self) -> PlayerId {
        *self.members.last().expect("blocks are never empty")
    }
}

/// The evolving simulation state: formed blocks in founding order plus the
/// allocation ledger.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimState {
    pub blocks: Vec<BlockState>,
    pub ledger: Ledger,
}

impl SimState {
    pub fn new(n: usize) -> Self {
        SimState {
            blocks: Vec::new(),
            ledger: Ledger::new(n),
        }
    }

    pub fn find_block(&self, mask: Coalition) -> Option<usize> {
        self.blocks.iter().position(|b| b.mask == mask)
    }

    pub fn structure(&self) -> CoalitionStructure {
        CoalitionStructure::new(self.blocks.iter().map(|b| b.mask).collect())
            .expect("simulation blocks stay disjoint")
    }
}

/// A policy bound to a game, ready to quote offers and apply joins.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Policy {
    spec: PolicySpec,
    oracle_target: Option<CoalitionStructure>,
}

impl Policy {
    pub fn spec(&self) -> &PolicySpec {
        &self.spec
    }

    pub fn is_irrevocable(&self) -> bool {
        self.spec.is_irrevocable()
    }

    /// The precomputed structure an `oracle-pair` policy steers toward.
    pub fn oracle_target(&self) -> Option<&CoalitionStructure> {
        self.oracle_target.as_ref()
    }

    fn below_threshold(&self, game: &Game, target: Coalition, mu: &Value) -> bool {
        game.value(target) < &(mu * game.max())
    }

    /// The exact split a player would receive for joining `target` now.
    pub fn offer(
        &self,
        game: &Game,
        state: &SimState,
        player: PlayerId,
        target: Coalition,
    ) -> Result<Offer, PolicyError> {
        if target.is_empty() {
            let founding = game.value(Coalition::singleton(player)).clone();
            let firm = match &self.spec {
                PolicySpec::BankGreedy { .. } => Value::zero(),
                PolicySpec::BankPessimistic { eps, .. } => eps * game.min(),
                _ => founding.clone(),
            };
            return Ok(Offer {
                target,
                total: founding,
                firm,
            });
        }
        if state.find_block(target).is_none() {
            return Err(PolicyError::UnknownCoalition { coalition: target });
        }
        let mc = marginal_contribution(game, target, player)?;
        let (total, firm) = match &self.spec {
            PolicySpec::Amc => (mc.clone(), mc),
            PolicySpec::AmcH { h } => {
                let kept = if mc > *h { mc - h } else { Value::zero() };
                (kept.clone(), kept)
            }
            PolicySpec::OraclePair => {
                let correct = self
                    .oracle_target
                    .as_ref()
                    .expect("oracle-pair carries its target")
                    .contains_block(target.with(player));
                if correct {
                    (mc.clone(), mc)
                } else {
                    (Value::zero(), Value::zero())
                }
            }
            PolicySpec::BankGreedy { mu } => {
                if self.below_threshold(game, target, mu) {
                    (game.value(target.with(player)).clone(), Value::zero())
                } else {
                    (Value::zero(), Value::zero())
                }
            }
            PolicySpec::BankPessimistic { mu, eps } => {
                if self.below_threshold(game, target, mu) {
                    let firm = eps * &(game.min() * (target.len() as u64 + 1));
                    let bank = state
                        .ledger
                        .bank(target)
                        .map(|b| b.amount.clone())
                        .unwrap_or_else(Value::zero);
                    (bank + &mc, firm)
                } else {
                    (Value::zero(), Value::zero())
                }
            }
        };
        debug_assert!(!firm.is_negative() && total >= firm);
        Ok(Offer {
            target,
            total,
            firm,
        })
    }

    /// Applies the join, updating blocks and ledger so that every coalition's
    /// firm mass plus bank equals its value.
    pub fn apply_join(
        &self,
        game: &Game,
        state: &mut SimState,
        player: PlayerId,
        target: Coalition,
    ) -> Result<(), PolicyError> {
        if target.is_empty() {
            self.apply_found(game, state, player)
        } else {
            self.apply_existing(game, state, player, target)
        }
    }

    fn apply_found(
        &self,
        game: &Game,
        state: &mut SimState,
        player: PlayerId,
    ) -> Result<(), PolicyError> {
        let mask = Coalition::singleton(player);
        let worth = game.value(mask).clone();
        match &self.spec {
            PolicySpec::BankGreedy { .. } => {
                state.ledger.provisional[player.0] = worth.clone();
                state.ledger.banks.insert(
                    mask,
                    Bank {
                        amount: worth,
                        promisee: player,
                    },
                );
            }
            PolicySpec::BankPessimistic { eps, .. } => {
                let firm = eps * game.min();
                let promised = worth - &firm;
                if promised.is_negative() {
                    return Err(PolicyError::NegativeBank {
                        coalition: mask,
                        amount: promised,
                    });
                }
                state.ledger.firm[player.0] += firm;
                state.ledger.provisional[player.0] = promised.clone();
                state.ledger.banks.insert(
                    mask,
                    Bank {
                        amount: promised,
                        promisee: player,
                    },
                );
            }
            // Founder keeps her founding value; she is her own predecessor.
            _ => state.ledger.firm[player.0] += worth,
        }
        state.blocks.push(BlockState {
            mask,
            members: vec![player],
        });
        Ok(())
    }

    fn apply_existing(
        &self,
        game: &Game,
        state: &mut SimState,
        player: PlayerId,
        target: Coalition,
    ) -> Result<(), PolicyError> {
        let idx = state
            .find_block(target)
            .ok_or(PolicyError::UnknownCoalition { coalition: target })?;
        let mc = marginal_contribution(game, target, player)?;
        let last = state.blocks[idx].last_joiner();
        let grown = target.with(player);
        match &self.spec {
            PolicySpec::Amc => state.ledger.firm[player.0] += mc,
            PolicySpec::AmcH { h } => {
                if mc <= *h {
                    state.ledger.firm[last.0] += mc;
                } else {
                    state.ledger.firm[last.0] += h;
                    state.ledger.firm[player.0] += mc - h;
                }
            }
            PolicySpec::OraclePair => {
                let correct = self
                    .oracle_target
                    .as_ref()
                    .expect("oracle-pair carries its target")
                    .contains_block(grown);
                if correct {
                    state.ledger.firm[player.0] += mc;
                } else {
                    state.ledger.firm[last.0] += mc;
                }
            }
            PolicySpec::BankGreedy { mu } => {
                let bank = state
                    .ledger
                    .banks
                    .remove(&target)
                    .expect("bank policies bank every coalition");
                if self.below_threshold(game, target, mu) {
                    let worth = game.value(grown).clone();
                    state.ledger.provisional[bank.promisee.0] -= bank.amount;
                    state.ledger.provisional[player.0] += &worth;
                    state.ledger.banks.insert(
                        grown,
                        Bank {
                            amount: worth,
                            promisee: player,
                        },
                    );
                } else {
                    state.ledger.firm[last.0] += mc;
                    state.ledger.banks.insert(grown, bank);
                }
            }
            PolicySpec::BankPessimistic { mu, eps } => {
                let bank = state
                    .ledger
                    .banks
                    .remove(&target)
                    .expect("bank policies bank every coalition");
                if self.below_threshold(game, target, mu) {
                    let firm = eps * &(game.min() * (target.len() as u64 + 1));
                    let amount = &bank.amount + &mc - &firm;
                    if amount.is_negative() {
                        return Err(PolicyError::NegativeBank {
                            coalition: grown,
                            amount,
                        });
                    }
                    state.ledger.firm[player.0] += firm;
                    state.ledger.provisional[bank.promisee.0] -= bank.amount;
                    state.ledger.provisional[player.0] += &amount;
                    state.ledger.banks.insert(
                        grown,
                        Bank {
                            amount,
                            promisee: player,
                        },
                    );
                } else {
                    state.ledger.firm[last.0] += mc;
                    state.ledger.banks.insert(grown, bank);
                }
            }
        }
        let block = &mut state.blocks[idx];
        block.mask = grown;
        block.members.push(player);
        Ok(())
    }

    /// End-of-run bank payout: every promise becomes firm.
    pub fn finalize(&self, state: &mut SimState) {
        let banks = std::mem::take(&mut state.ledger.banks);
        for (_, bank) in banks {
            state.ledger.provisional[bank.promisee.0] -= &bank.amount;
            state.ledger.firm[bank.promisee.0] += bank.amount;
        }
    }
}
