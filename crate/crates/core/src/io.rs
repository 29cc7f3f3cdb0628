//! Wire formats: the instance JSON contract, trace exports, and report
//! serialization.
//!
//! Instance files look like
//! `{"n": 3, "min": "1", "max": "5", "values": {"1": "1", ...}}` with one
//! entry per nonempty coalition mask (decimal key). Rationals serialize as
//! `"p/q"`, with `/q` omitted when the denominator is one. A `"0"` entry is
//! optional and must be zero. An optional `"aliases"` object maps display
//! names (like `"x"` or `"a1"`) to player indices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::game::{Coalition, Game, PlayerId, ValidationError};
use crate::lab::ratio::RatioReport;
use crate::policy::Ledger;
use crate::sim::Trace;
use crate::solver::OptimalResult;
use crate::value::Value;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad instance file: {0}")]
    BadInstance(String),
    #[error("instance failed validation: {0:?}")]
    Validation(Vec<ValidationError>),
}

/// On-disk instance representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub min: Value,
    pub max: Value,
    pub values: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aliases: Option<BTreeMap<String, usize>>,
}

/// Maps players to display names and back. Aliases win over the canonical
/// `a<index>` names when present.
#[derive(Clone, Debug, Default)]
pub struct PlayerNames {
    n: usize,
    aliases: Vec<(String, usize)>,
}

impl PlayerNames {
    pub fn canonical(n: usize) -> Self {
        PlayerNames {
            n,
            aliases: Vec::new(),
        }
    }

    pub fn with_aliases(n: usize, aliases: Vec<(String, usize)>) -> Self {
        PlayerNames { n, aliases }
    }

    pub fn name(&self, p: PlayerId) -> String {
        self.aliases
            .iter()
            .find(|(_, i)| *i == p.index())
            .map(|(name, _)| name.clone())
            .unwrap_or_else(|| format!("a{}", p.index()))
    }

    pub fn resolve(&self, token: &str) -> Option<PlayerId> {
        if let Some((_, i)) = self.aliases.iter().find(|(name, _)| name == token) {
            return Some(PlayerId(*i));
        }
        let idx: usize = token.strip_prefix('a')?.parse().ok()?;
        (idx < self.n).then_some(PlayerId(idx))
    }

    pub fn aliases(&self) -> &[(String, usize)] {
        &self.aliases
    }
}

impl InstanceFile {
    pub fn from_game(game: &Game, names: &PlayerNames) -> Self {
        let mut values = BTreeMap::new();
        for mask in 1u32..(1 << game.n()) {
            values.insert(mask.to_string(), game.value(Coalition(mask)).clone());
        }
        let aliases = if names.aliases().is_empty() {
            None
        } else {
            Some(
                names
                    .aliases()
                    .iter()
                    .map(|(s, i)| (s.clone(), *i))
                    .collect(),
            )
        };
        InstanceFile {
            n: game.n(),
            min: game.min().clone(),
            max: game.max().clone(),
            values,
            aliases,
        }
    }

    pub fn into_game(self) -> Result<(Game, PlayerNames), IoError> {
        if self.n < 1 || self.n > 16 {
            return Err(IoError::BadInstance(format!("n = {} out of range", self.n)));
        }
        let size = 1usize << self.n;
        let mut values = vec![Value::zero(); size];
        let mut seen = vec![false; size];
        seen[0] = true;
        for (key, value) in &self.values {
            let mask: usize = key
                .parse()
                .map_err(|_| IoError::BadInstance(format!("bad mask key {key:?}")))?;
            if mask >= size {
                return Err(IoError::BadInstance(format!(
                    "mask {key} out of range for n = {}",
                    self.n
                )));
            }
            if mask == 0 {
                if !value.is_zero() {
                    return Err(IoError::BadInstance(format!(
                        "the empty coalition must be 0, got {value}"
                    )));
                }
                continue;
            }
            values[mask] = value.clone();
            seen[mask] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(IoError::BadInstance(format!(
                "missing value for mask {missing}"
            )));
        }
        let game =
            Game::new(self.n, values, self.min, self.max).map_err(IoError::Validation)?;
        let aliases = self
            .aliases
            .map(|m| {
                for (name, idx) in &m {
                    if *idx >= game.n() {
                        return Err(IoError::BadInstance(format!(
                            "alias {name:?} points at player {idx}, out of range"
                        )));
                    }
                }
                Ok(m.into_iter().collect::<Vec<_>>())
            })
            .transpose()?
            .unwrap_or_default();
        let n = game.n();
        Ok((game, PlayerNames::with_aliases(n, aliases)))
    }
}

pub fn instance_to_json(game: &Game, names: &PlayerNames) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_game(game, names)).expect("serializable")
}

pub fn instance_from_json(text: &str) -> Result<(Game, PlayerNames), IoError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    file.into_game()
}

fn players_of(c: Coalition) -> Vec<usize> {
    c.players().map(|p| p.index()).collect()
}

fn ledger_json(ledger: &Ledger, names: &PlayerNames) -> serde_json::Value {
    json!({
        "firm": ledger.firm_shares(),
        "provisional": ledger.provisional_shares(),
        "banks": ledger
            .banks()
            .map(|(c, b)| json!({
                "coalition": players_of(*c),
                "amount": b.amount,
                "promisee": names.name(b.promisee),
            }))
            .collect::<Vec<_>>(),
    })
}

/// Full trace export: per-step offer tables, chosen targets, structures and
/// ledger snapshots, then the final structure and allocation.
pub fn trace_to_json(trace: &Trace, game: &Game, names: &PlayerNames) -> serde_json::Value {
    json!({
        "order": trace.order.players().iter().map(|&p| names.name(p)).collect::<Vec<_>>(),
        "steps": trace.steps.iter().map(|s| json!({
            "t": s.t,
            "player": names.name(s.player),
            "offers": s.offers.iter().map(|o| json!({
                "target": players_of(o.target),
                "total": o.total,
                "firm": o.firm,
            })).collect::<Vec<_>>(),
            "chosen": players_of(s.chosen),
            "structure": s.structure.blocks().iter().map(|&b| players_of(b)).collect::<Vec<_>>(),
            "ledger": ledger_json(&s.ledger, names),
        })).collect::<Vec<_>>(),
        "final_structure": trace.final_structure.blocks().iter().map(|&b| players_of(b)).collect::<Vec<_>>(),
        "final_allocation": trace.final_ledger.firm_shares(),
        "social_welfare": trace.social_welfare(game),
    })
}

/// Ratio report export: exact rational plus a decimal approximation, witness
/// order as player names, witness structure as masks.
pub fn ratio_report_json(report: &RatioReport, names: &PlayerNames) -> serde_json::Value {
    json!({
        "ratio": report.ratio,
        "ratio_decimal": report.ratio.to_f64(),
        "greedy_welfare": report.greedy_welfare,
        "optimal_welfare": report.optimal_welfare,
        "witness_order": report.witness_order.iter().map(|&p| names.name(p)).collect::<Vec<_>>(),
        "witness_structure": report.witness_structure.blocks().iter().map(|b| b.mask()).collect::<Vec<_>>(),
        "witness_choices": report.witness_choices.iter().map(|c| c.mask()).collect::<Vec<_>>(),
        "orders_examined": report.orders_examined,
        "branches_examined": report.branches_examined,
    })
}

/// Optimal-structure export: welfare plus blocks as player index lists.
pub fn optimal_json(result: &OptimalResult) -> serde_json::Value {
    json!({
        "welfare": result.welfare,
        "blocks": result.structure.blocks().iter().map(|&b| players_of(b)).collect::<Vec<_>>(),
        "optimal_count": result.optimal_count,
    })
}
