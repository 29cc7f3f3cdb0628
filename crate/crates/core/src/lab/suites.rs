//! Named verification suites behind `verify --suite <name>`: each one runs a
//! bound reproduction, a policy guarantee over random or exhaustive
//! families, or an axiom battery, and reports one pass/fail line per check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::game::{ArrivalOrder, Game, PlayerId};
use crate::lab::audit::{check_optimal_structure, check_trace_blocks};
use crate::lab::axioms::{
    check_ir, check_irrevocable, check_non_anticipative, check_non_wasteful, check_tns,
};
use crate::lab::instances::{
    grid_family, grid_points, paper_instances, random_instance, InstanceError, PaperCase,
};
use crate::lab::ratio::{competitive_ratio, family_ratio, RatioError, RatioMode};
use crate::policy::{paper_threshold, PolicyError, PolicySpec};
use crate::sim::{
    hypothetical_allocation, simulate, simulate_all_branches, PlayerModel, SimError, TieBreak,
    DEFAULT_BRANCH_CAP,
};
use crate::solver::optimal_partition;
use crate::value::{sqrt_upper, Value};

pub const SUITE_NAMES: &[&str] = &[
    "thm4.1", "thm4.2", "lemma4.5", "lemma4.10", "prop4.1", "prop4.2", "prop4.9", "thm4.11",
    "thm4.12", "thm5.3", "axioms",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub trials: u64,
    pub seed: u64,
    pub max_n: usize,
    pub grid_points: usize,
    pub h: Option<Value>,
    pub policy: Option<PolicySpec>,
    pub branch_cap: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials: 200,
            seed: 7,
            max_n: 5,
            grid_points: 5,
            h: None,
            policy: None,
            branch_cap: DEFAULT_BRANCH_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteCheck {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}; known suites: {}", SUITE_NAMES.join(", "))]
    UnknownSuite(String),
    #[error(transparent)]
    Ratio(#[from] RatioError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Solver(#[from] crate::solver::TooManyPlayers),
}

fn v(s: &str) -> Value {
    s.parse().expect("literal rational")
}

fn check(label: &str, pass: bool, detail: impl Into<String>) -> SuiteCheck {
    SuiteCheck {
        label: label.to_string(),
        pass,
        detail: detail.into(),
    }
}

/// Guarantee of the plain marginal-contribution policy on classes >= 2.
pub fn amc_guarantee(min: &Value, max: &Value) -> Value {
    &(min * 2u64) / max
}

/// Cap no irrevocable (or individually rational) policy can beat on
/// classes >= 3.
pub fn irrevocable_cap(min: &Value, max: &Value) -> Value {
    &(min * 3u64) / max
}

/// Guarantee of the thresholded policy on classes >= 3.
pub fn class_ge3_guarantee(min: &Value, max: &Value) -> Value {
    irrevocable_cap(min, max).min(v("1/2"))
}

/// Conservative floor for the class-two guarantee
/// `(min + sqrt(min(min+4max))) / (2max)`, shifted down by `1e-6` to absorb
/// the rational approximation of the threshold.
pub fn class_two_guarantee_floor(min: &Value, max: &Value) -> Value {
    let inner = min * &(min + &(max * 4u64));
    let root = sqrt_upper(&inner, 1_000_000_000_000);
    &(min + &root) / &(max * 2u64) - &v("1/1000000")
}

struct GamePool {
    games: Vec<Game>,
}

fn seeded_games(
    count: u64,
    seed: u64,
    min: &Value,
    max: &Value,
    n_lo: usize,
    n_hi: usize,
    grid_step: Option<&Value>,
) -> GamePool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let games = (0..count)
        .map(|_| {
            let n = rng.gen_range(n_lo..=n_hi);
            let game_seed = rng.gen::<u64>();
            random_instance(n, min, max, game_seed, grid_step)
                .expect("random instances always validate")
        })
        .collect();
    GamePool { games }
}

fn random_order(rng: &mut ChaCha8Rng, n: usize) -> ArrivalOrder {
    use rand::seq::SliceRandom;
    let mut ids: Vec<PlayerId> = (0..n).map(PlayerId).collect();
    ids.shuffle(rng);
    ArrivalOrder::new(ids).unwrap()
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let checks = match name {
        "thm4.1" => suite_class_one_optimality(cfg)?,
        "thm4.2" => suite_oracle_pairing(cfg)?,
        "lemma4.5" => suite_block_bounds(cfg, false)?,
        "lemma4.10" => suite_block_bounds(cfg, true)?,
        "prop4.1" => suite_individual_rationality(cfg)?,
        "prop4.2" => suite_temporal_stability(cfg)?,
        "prop4.9" => suite_threshold_instability(cfg)?,
        "thm4.11" => suite_class_two_grid(cfg)?,
        "thm4.12" => suite_class_ge3_grid(cfg)?,
        "thm5.3" => suite_bank_policies(cfg)?,
        "axioms" => suite_axioms(cfg)?,
        other => return Err(SuiteError::UnknownSuite(other.to_string())),
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        checks,
    })
}

/// Class 1: the marginal-contribution policy forms all singletons under any
/// order and any tie branch, hitting the optimum exactly.
fn suite_class_one_optimality(cfg: &SuiteConfig) -> Result<Vec<SuiteCheck>, SuiteError> {
    let pool = seeded_games(
        cfg.trials,
        cfg.seed,
        &v("1"),
        &v("3/2"),
        2,
        cfg.max_n.min(6),
        None,
    );
    let outcomes: Result<Vec<(bool, bool)>, RatioError> = pool
        .games
        .par_iter()
        .map(|g| {
            let report = competitive_ratio(
                g,
                &PolicySpec::Amc,
                PlayerModel::Greedy,
                RatioMode::AllOrdersAllTies,
                cfg.branch_cap,
            )?;
            let ratio_one = report.ratio == Value::one();
            let singles = report.witness_structure.blocks().iter().all(|b| b.len() == 1);
            Ok((ratio_one, singles))
        })
        .collect();
    let outcomes = outcomes?;
    let all_ratio_one = outcomes.iter().all(|(r, _)| *r);
    let all_single = outcomes.iter().all(|(_, s)| *s);
    Ok(vec![
        check(
            "class-1 ratio is exactly 1 on every random game",
            all_ratio_one,
            format!("{} games, all orders, all tie branches", outcomes.len()),
        ),
        check(
            "class-1 worst-case structures are all singletons",
            all_single,
            "witness structures contain only singleton blocks",
        ),
    ])
}

/// Class 2 with the anticipative pairing policy: optimum reached on every
/// order, the formed structure is exactly the precomputed target, and the
/// policy demonstrably uses future information.
fn suite_oracle_pairing(cfg: &SuiteConfig) -> Result<Vec<SuiteCheck>, SuiteError> {
    let pool = seeded_games(
        cfg.trials,
        cfg.seed,
        &v("1"),
        &v("5/2"),
        2,
        cfg.max_n.min(6),
        None,
    );
    let outcomes: Result<Vec<(bool, bool)>, SuiteError> = pool
        .games
        .par_iter()
        .map(|g| {
            let report = competitive_ratio(
                g,
                &PolicySpec::OraclePair,
                PlayerModel::Greedy,
                RatioMode::AllOrdersAllTies,
                cfg.branch_cap,
            )?;
            let ratio_one = report.ratio == Value::one();
            let policy = PolicySpec::OraclePair.bind(g)?;
            let target = policy.oracle_target().unwrap().clone();
            let mut formed_target = true;
            for order in crate::lab::ratio::all_orders(g.n()) {
                let trace = simulate(
                    g,
                    &order,
                    &policy,
                    PlayerModel::Greedy,
                    TieBreak::EarliestCoalition,
                )?;
                if trace.final_structure != target {
                    formed_target = false;
                    break;
                }
            }
            Ok((ratio_one, formed_target))
        })
        .collect();
    let outcomes = outcomes?;
    let all_ratio_one = outcomes.iter().all(|(r, _)| *r);
    let all_target = outcomes.iter().all(|(_, t)| *t);

    // The pairing policy reads values involving future players: a violation
    // witness exists on a game whose best pairing flips with one of them.
    let fixture = anticipation_fixture();
    let na = check_non_anticipative(
        &PolicySpec::OraclePair,
        &fixture,
        &ArrivalOrder::identity(3),
        200,
        cfg.seed,
    )?;
    Ok(vec![
        check(
            "pairing policy reaches the optimum on every class-2 game",
            all_ratio_one,
            format!("{} games, all orders, all tie branches", outcomes.len()),
        ),
        check(
            "formed structure equals the precomputed target on every order",
            all_target,
            "join-preferring tie rule",
        ),
        check(
            "anticipation witness found against the pairing policy",
            !na.verdict.holds,
            na.verdict
                .counterexample
                .map(|ce| serde_json::to_string(&ce).unwrap())
                .unwrap_or_else(|| "no violation found".to_string()),
        ),
    ])
}

/// Class-2 game whose optimal pairing flips when a value involving the last
/// arrival changes; the allocation over the first two arrivals moves with it.
pub fn anticipation_fixture() -> Game {
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
    Game::new(3, values, v("1"), v("5/2")).unwrap()
}

/// Greedy blocks under the (thresholded) marginal-contribution policy stay
/// within their size cap and value floor at every step of every branch.
fn suite_block_bounds(cfg: &SuiteConfig, thresholded: bool) -> Result<Vec<SuiteCheck>, SuiteError> {
    let pool = seeded_games(cfg.trials, cfg.seed, &v("1"), &v("4"), 2, cfg.max_n, None);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let orders: Vec<ArrivalOrder> = pool
        .games
        .iter()
        .map(|g| random_order(&mut rng, g.n()))
        .collect();
    let mut blocks_checked = 0usize;
    for (g, order) in pool.games.iter().zip(&orders) {
        let h = if thresholded {
            cfg.h.clone().unwrap_or_else(|| paper_threshold(g))
        } else {
            Value::zero()
        };
        let spec = if thresholded {
            PolicySpec::AmcH { h: h.clone() }
        } else {
            PolicySpec::Amc
        };
        let policy = spec.bind(g)?;
        for trace in
            simulate_all_branches(g, order, &policy, PlayerModel::Greedy, cfg.branch_cap)?
        {
            match check_trace_blocks(g, &trace, &h) {
                Ok(n) => blocks_checked += n,
                Err(violation) => {
                    return Ok(vec![check(
                        "greedy block bounds",
                        false,
                        serde_json::to_string(&violation).unwrap(),
                    )])
                }
            }
        }
        let opt = optimal_partition(g)?;
        if let Err(violation) = check_optimal_structure(g, &opt.structure) {
            return Ok(vec![check(
                "optimal block size cap",
                false,
                serde_json::to_string(&violation).unwrap(),
            )]);
        }
    }
    Ok(vec![check(
        if thresholded {
            "thresholded greedy blocks respect size cap and value floor"
        } else {
            "greedy blocks respect size cap and value floor"
        },
        true,
        format!(
            "{} games, {} step-blocks checked",
            pool.games.len(),
            blocks_checked
        ),
    )])
}

/// Every irrevocable policy leaves each member at or above her singleton
/// value at all times.
fn suite_individual_rationality(cfg: &SuiteConfig) -> Result<Vec<SuiteCheck>, SuiteError> {
    let pool = seeded_games(cfg.trials, cfg.seed, &v("1"), &v("4"), 2, cfg.max_n, None);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x1e55);
    let mut traces = 0u64;
    for g in &pool.games {
        let order = random_order(&mut rng, g.n());
        for spec in [
            PolicySpec::Amc,
            PolicySpec::AmcH {
                h: paper_threshold(g),
            },
            PolicySpec::OraclePair,
        ] {
            let policy = spec.bind(g)?;
            for trace in
                simulate_all_branches(g, &order, &policy, PlayerModel::Greedy, cfg.branch_cap)?
            {
                traces += 1;
                let verdict = check_ir(&trace, g);
                if !verdict.holds {
                    return Ok(vec![check(
                        "individual rationality of irrevocable policies",
                        false,
                        serde_json::to_string(&verdict.counterexample).unwrap(),
                    )]);
                }
            }
        }
    }
    Ok(vec![check(
        "individual rationality of irrevocable policies",
        true,
        format!("{} games, {traces} traces", pool.games.len()),
    )])
}

/// The plain marginal-contribution policy is temporally stable.
fn suite_temporal_stability(cfg: &SuiteConfig) -> Result<Vec<SuiteCheck>, SuiteError> {
    let pool = seeded_games(cfg.trials, cfg.seed, &v("1"), &v("4"), 2, cfg.max_n, None);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7a5);
    let mut traces = 0u64;
    for g in &pool.games {
        let order = random_order(&mut rng, g.n());
        let policy = PolicySpec::Amc.bind(g)?;
        for trace in
            simulate_all_branches(g, &order, &policy, PlayerModel::Greedy, cfg.branch_cap)?
        {
            traces += 1;
            let verdict = check_tns(&trace, g, &policy)?;
            if !verdict.holds {
                return Ok(vec![check(
                    "temporal stability of marginal contributions",
                    false,
                    serde_json::to_string(&verdict.counterexample).unwrap(),
                )]);
            }
        }
    }
    Ok(vec![check(
        "temporal stability of marginal contributions",
        true,
        format!("{} games, {traces} traces", pool.games.len()),
    )])
}

/// Any positive threshold admits a stability violation; the witness instance
/// produces one for each tested threshold, and none at threshold zero.
fn suite_threshold_instability(cfg: &SuiteConfig) -> Result<Vec<SuiteCheck>, SuiteError> {
    let thresholds = match &cfg.h {
        Some(h) => vec![h.clone()],
        None => vec![v("1/2"), v("1"), v("3/2"), v("2"), v("3")],
    };
    let mut checks = Vec::new();
    for h in &thresholds {
        let inst = paper_instances(&PaperCase::PropHtnsWitness {
            min: v("1"),
            h: h.clone(),
        })?
        .remove(0);
        let spec = PolicySpec::AmcH { h: h.clone() };
        let policy = spec.bind(&inst.game)?;
        let trace = simulate(
            &inst.game,
            &inst.order,
            &policy,
            PlayerModel::Greedy,
            TieBreak::NewFirst,
        )?;
        let verdict = check_tns(&trace, &inst.game, &policy)?;
        let mut witness_ok = false;
        if let Some(crate::lab::axioms::Counterexample::TnsViolation {
            player,
            alternative,
            actual,
            hypothetical,
            ..
        }) = &verdict.counterexample
        {
            // Re-derive the hypothetical allocation independently.
            let alloc =
                hypothetical_allocation(&policy, &inst.game, alternative.with(*player), &inst.order)?;
            let recomputed = alloc
                .into_iter()
                .find(|(q, _)| q == player)
                .map(|(_, val)| val)
                .unwrap();
            witness_ok = recomputed == *hypothetical && recomputed > *actual;
        }
        checks.push(check(
            &format!("stability violation found and re-checked at h = {h}"),
            !verdict.holds && witness_ok,
            verdict
                .counterexample
                .map(|ce| serde_json::to_string(&ce).unwrap())
                .unwrap_or_else(|| "no violation".to_string()),
        ));
        // Threshold zero on the same table is stable.
        let zero = PolicySpec::AmcH { h: Value::zero() }.bind(&inst.game)?;
        let trace = simulate(
            &inst.game,
            &inst.order,
            &zero,
            PlayerModel::Greedy,
            TieBreak::NewFirst,
        )?;
        checks.push(check(
            &format!("no violation at h = 0 on the h = {h} witness table"),
            check_tns(&trace, &inst.game, &zero)?.holds,
            "",
        ));
    }
    Ok(checks)
}

fn paper_h_spec(game: &Game) -> PolicySpec {
    PolicySpec::AmcH {
        h: paper_threshold(game),
    }
}

/// Class-2 grid certification of the thresholded policy's guarantee.
fn suite_class_two_grid(cfg: &SuiteConfig) -> Result<Vec<SuiteCheck>, SuiteError> {
    let (min, max) = (v("1"), v("5/2"));
    let points = grid_points(&min, &max, cfg.grid_points);
    let mut games = Vec::new();
    for n in 2..=cfg.max_n.min(3) {
        games.extend(grid_family(n, &min, &max, &points));
    }
    let exhaustive = games.len();
    if cfg.max_n >= 4 {
        let step = &points[1] - &points[0];
        let pool = seeded_games(cfg.trials, cfg.seed, &min, &max, 4, 4, Some(&step));
        games.extend(pool.games);
    }
    let spec = paper_h_spec(&games[0]);
    let family = family_ratio(&games, &spec, PlayerModel::Greedy, cfg.branch_cap, None)?;
    let floor = class_two_guarantee_floor(&min, &max);
    let violations = family.violations(&floor).count();
    Ok(vec![check(
        "class-2 grid infimum stays above the guarantee",
        family.infimum_ratio() >= &floor && violations == 0,
        format!(
            "{} instances ({exhaustive} exhaustive), infimum {} >= floor {}",
            games.len(),
            family.infimum_ratio(),
            floor
        ),
    )])
}

/// Class >= 3 grid certification: `min(1/2, 3min/max)` with the class-based
/// threshold.
fn suite_class_ge3_grid(cfg: &SuiteConfig) -> Result<Vec<SuiteCheck>, SuiteError> {
    let (min, max) = (v("1"), v("5"));
    let points = grid_points(&min, &max, cfg.grid_points);
    let games = grid_family(3, &min, &max, &points);
    let spec = paper_h_spec(&games[0]);
    let family = family_ratio(&games, &spec, PlayerModel::Greedy, cfg.branch_cap, None)?;
    let bound = class_ge3_guarantee(&min, &max);
    let violations = family.violations(&bound).count();
    Ok(vec![check(
        "class->=3 grid infimum stays above min(1/2, 3min/max)",
        family.infimum_ratio() >= &bound && violations == 0,
        format!(
            "{} instances, infimum {} >= bound {}",
            games.len(),
            family.infimum_ratio(),
            bound
        ),
    )])
}

/// Bank policies: identical structures under both player models, the exact
/// ratio on the stranded-tail instance, and structure coincidence on random
/// games.
fn suite_bank_policies(cfg: &SuiteConfig) -> Result<Vec<SuiteCheck>, SuiteError> {
    let greedy_spec = PolicySpec::BankGreedy { mu: v("1") };
    let pess_spec = PolicySpec::BankPessimistic {
        mu: v("1"),
        eps: v("1/100"),
    };
    let inst = paper_instances(&PaperCase::ThmNirrLbWorst {
        k: 2,
        min: v("1"),
        max: v("10"),
        mu: v("1"),
    })?
    .remove(0);
    let g = &inst.game;
    let greedy = greedy_spec.bind(g)?;
    let pess = pess_spec.bind(g)?;
    let tg = simulate(
        g,
        &inst.order,
        &greedy,
        PlayerModel::Greedy,
        TieBreak::EarliestCoalition,
    )?;
    let tp = simulate(
        g,
        &inst.order,
        &pess,
        PlayerModel::Pessimistic,
        TieBreak::EarliestCoalition,
    )?;
    let same_structure = tg.final_structure == tp.final_structure;
    let opt = optimal_partition(g)?;
    let ratio = &tg.social_welfare(g) / &opt.welfare;
    let two_over_n = &v("2") / &Value::integer(g.n() as i64);
    let mut checks = vec![
        check(
            "both player models form the same structure on the stranded-tail instance",
            same_structure,
            format!("{} vs {}", tg.final_structure, tp.final_structure),
        ),
        check(
            "stranded-tail ratio is exactly 11/20 and at least 2/n",
            ratio == v("11/20") && ratio >= two_over_n,
            format!("ratio {ratio}"),
        ),
    ];

    // Structure coincidence over random games, join-preferring ties.
    let pool = seeded_games(
        cfg.trials,
        cfg.seed,
        &v("1"),
        &v("4"),
        2,
        cfg.max_n.min(6),
        None,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xba2c);
    let mut coincide = true;
    for g in &pool.games {
        let order = random_order(&mut rng, g.n());
        let greedy = greedy_spec.bind(g)?;
        let pess = pess_spec.bind(g)?;
        let a = simulate(
            g,
            &order,
            &greedy,
            PlayerModel::Greedy,
            TieBreak::EarliestCoalition,
        )?;
        let b = simulate(
            g,
            &order,
            &pess,
            PlayerModel::Pessimistic,
            TieBreak::EarliestCoalition,
        )?;
        if a.final_structure != b.final_structure {
            coincide = false;
            break;
        }
    }
    checks.push(check(
        "bank structures coincide across player models on random games",
        coincide,
        format!("{} games", pool.games.len()),
    ));
    Ok(checks)
}

/// Claimed-axiom battery for one policy over random games.
fn suite_axioms(cfg: &SuiteConfig) -> Result<Vec<SuiteCheck>, SuiteError> {
    let spec = cfg.policy.clone().unwrap_or(PolicySpec::Amc);
    let claims_irrevocable = spec.is_irrevocable();
    let claims_ir = spec.is_irrevocable();
    let claims_tns = matches!(spec, PolicySpec::Amc);
    let claims_na = !matches!(spec, PolicySpec::OraclePair);

    let pool = seeded_games(cfg.trials, cfg.seed, &v("1"), &v("4"), 2, cfg.max_n, None);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa40);
    let mut na_comparisons = 0u64;
    let mut failures: Vec<(String, String)> = Vec::new();
    for g in &pool.games {
        // Bank parameters must respect the per-game eps ceiling.
        let spec = spec.clone();
        let order = random_order(&mut rng, g.n());
        let policy = spec.bind(g)?;
        let trace = simulate(g, &order, &policy, PlayerModel::Greedy, TieBreak::NewFirst)?;
        let nw = check_non_wasteful(&trace, g);
        if !nw.holds {
            failures.push((
                "non-wasteful".into(),
                serde_json::to_string(&nw.counterexample).unwrap(),
            ));
        }
        if claims_irrevocable {
            let verdict = check_irrevocable(&trace);
            if !verdict.holds {
                failures.push((
                    "irrevocable".into(),
                    serde_json::to_string(&verdict.counterexample).unwrap(),
                ));
            }
        }
        if claims_ir {
            let verdict = check_ir(&trace, g);
            if !verdict.holds {
                failures.push((
                    "individually-rational".into(),
                    serde_json::to_string(&verdict.counterexample).unwrap(),
                ));
            }
        }
        if claims_tns {
            let verdict = check_tns(&trace, g, &policy)?;
            if !verdict.holds {
                failures.push((
                    "temporal-stability".into(),
                    serde_json::to_string(&verdict.counterexample).unwrap(),
                ));
            }
        }
        if claims_na {
            let na = check_non_anticipative(&spec, g, &order, 5, rng.gen())?;
            na_comparisons += na.comparisons;
            if !na.verdict.holds {
                failures.push((
                    "non-anticipative".into(),
                    serde_json::to_string(&na.verdict.counterexample).unwrap(),
                ));
            }
        }
    }
    let mut checks = vec![check(
        &format!("non-wasteful ({})", spec.kind_str()),
        !failures.iter().any(|(k, _)| k == "non-wasteful"),
        format!("{} games", pool.games.len()),
    )];
    for (claimed, key, label) in [
        (claims_irrevocable, "irrevocable", "irrevocable"),
        (claims_ir, "individually-rational", "individually rational"),
        (claims_tns, "temporal-stability", "temporally stable"),
    ] {
        if claimed {
            checks.push(check(
                &format!("{label} ({})", spec.kind_str()),
                !failures.iter().any(|(k, _)| k == key),
                format!("{} games", pool.games.len()),
            ));
        }
    }
    if claims_na {
        checks.push(check(
            &format!("non-anticipative ({})", spec.kind_str()),
            !failures.iter().any(|(k, _)| k == "non-anticipative"),
            format!("{na_comparisons} mutation comparisons"),
        ));
    }
    if let Some((_, detail)) = failures.first() {
        checks.push(check("first counterexample", false, detail.clone()));
    }
    Ok(checks)
}
