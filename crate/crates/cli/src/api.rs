//! Query handling shared by the CLI and the HTTP endpoint. Both front ends
//! build a [`Query`], run it through [`execute`] and render the same
//! [`Response`], so their answers cannot drift apart.

use risk_odds::stats::DEFAULT_THRESHOLD_LIMIT;
use risk_odds::{
    expected_survivors, garrison_thresholds, multi_territory, plan_attacker_losses,
    simulate_partitioned, AttackPlan, Error, RuleSet, SimConfig, SimReport,
};
use serde::{Deserialize, Serialize};

use crate::render::{decimal, fraction_text, masses, real, Exact, Mass, Stats, Table};

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Odds,
    Dist,
    Expect,
    Survivors,
    Threshold,
    Simulate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Odds => "odds",
            Command::Dist => "dist",
            Command::Expect => "expect",
            Command::Survivors => "survivors",
            Command::Threshold => "threshold",
            Command::Simulate => "simulate",
        }
    }
}

/// Request body. `waves` are attacking forces in the order they engage.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    #[serde(default)]
    pub waves: Vec<u32>,
    pub defenders: Option<u32>,
    #[serde(default)]
    pub bonus_attack_die: bool,
    #[serde(default)]
    pub bonus_defense_die: bool,
    pub limit: Option<u32>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub partitions: Option<u32>,
}

impl Query {
    pub fn rules(&self) -> RuleSet {
        let mut rules = RuleSet::standard();
        if self.bonus_attack_die {
            rules = rules.with_bonus_attack_die();
        }
        if self.bonus_defense_die {
            rules = rules.with_bonus_defense_die();
        }
        rules
    }

    fn plan(&self) -> Result<AttackPlan, ApiError> {
        let defenders = self
            .defenders
            .ok_or_else(|| ApiError::bad_request("defenders", "required"))?;
        Ok(AttackPlan::new(
            self.waves.clone(),
            defenders,
            self.rules(),
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    BadRequest,
    Internal,
}

/// Machine-readable failure: the offending field and what is wrong with it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApiError {
    pub field: String,
    pub message: String,
    #[serde(skip)]
    pub kind: ErrorKind,
}

impl ApiError {
    pub fn bad_request(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
            kind: ErrorKind::BadRequest,
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self {
            field: "internal".into(),
            message: message.into(),
            kind: ErrorKind::Internal,
        }
    }
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        let field = match err.field() {
            "attackers" => "waves",
            other => other,
        };
        let message = match &err {
            Error::Domain { message, .. } => message.clone(),
            other => other.to_string(),
        };
        ApiError::bad_request(field, message)
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for ApiError {}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OddsResponse {
    pub waves: Vec<u32>,
    pub defenders: u32,
    pub rules: RuleSet,
    pub win: Exact,
    pub repel: Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistResponse {
    pub waves: Vec<u32>,
    pub defenders: u32,
    pub rules: RuleSet,
    pub win: Exact,
    pub defenders_left: Vec<Mass>,
    pub attacker_losses: Vec<Mass>,
    pub attackers_left_given_conquest: Vec<Mass>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectResponse {
    pub waves: Vec<u32>,
    pub defenders: u32,
    pub rules: RuleSet,
    pub win: Exact,
    pub attacker_losses: Stats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivorsResponse {
    pub waves: Vec<u32>,
    pub defenders: u32,
    pub rules: RuleSet,
    pub repel: Exact,
    /// Defenders left standing; the spread equals that of defenders lost.
    pub survivors: Stats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResponse {
    pub waves: Vec<u32>,
    pub rules: RuleSet,
    pub limit: u32,
    /// Smallest garrison with at least one expected survivor; null if none within the limit.
    pub expected_survivor: Option<u32>,
    /// Smallest garrison repelling the attack with probability at least 1/2; null if none.
    pub repel_half: Option<u32>,
    pub interpretation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateResponse {
    pub waves: Vec<u32>,
    pub defenders: u32,
    pub rules: RuleSet,
    pub exact_win: Exact,
    /// `(win_rate - exact) / standard_error_win`
    pub z_score: f64,
    pub report: SimReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Response {
    Odds(OddsResponse),
    Dist(DistResponse),
    Expect(ExpectResponse),
    Survivors(SurvivorsResponse),
    Threshold(ThresholdResponse),
    Simulate(SimulateResponse),
}

pub fn execute(command: Command, query: &Query) -> Result<Response, ApiError> {
    Ok(match command {
        Command::Odds => Response::Odds(odds(query)?),
        Command::Dist => Response::Dist(dist(query)?),
        Command::Expect => Response::Expect(expect(query)?),
        Command::Survivors => Response::Survivors(survivors(query)?),
        Command::Threshold => Response::Threshold(threshold(query)?),
        Command::Simulate => Response::Simulate(simulate(query)?),
    })
}

fn odds(query: &Query) -> Result<OddsResponse, ApiError> {
    let plan = query.plan()?;
    let result = multi_territory(&plan)?;
    Ok(OddsResponse {
        waves: plan.waves().to_vec(),
        defenders: plan.defenders(),
        rules: *plan.rules(),
        win: Exact::new(&result.win_probability),
        repel: Exact::new(&result.repel_probability()),
    })
}

fn dist(query: &Query) -> Result<DistResponse, ApiError> {
    let plan = query.plan()?;
    let result = multi_territory(&plan)?;
    Ok(DistResponse {
        waves: plan.waves().to_vec(),
        defenders: plan.defenders(),
        rules: *plan.rules(),
        win: Exact::new(&result.win_probability),
        defenders_left: masses(&result.defenders_left_dist),
        attacker_losses: masses(&result.attacker_losses_dist),
        attackers_left_given_conquest: masses(&result.attackers_left_dist),
    })
}

fn expect(query: &Query) -> Result<ExpectResponse, ApiError> {
    let plan = query.plan()?;
    let result = multi_territory(&plan)?;
    let losses = plan_attacker_losses(&plan)?;
    Ok(ExpectResponse {
        waves: plan.waves().to_vec(),
        defenders: plan.defenders(),
        rules: *plan.rules(),
        win: Exact::new(&result.win_probability),
        attacker_losses: Stats::from(&losses),
    })
}

fn survivors(query: &Query) -> Result<SurvivorsResponse, ApiError> {
    let plan = query.plan()?;
    let result = multi_territory(&plan)?;
    let stats = expected_survivors(&plan)?;
    Ok(SurvivorsResponse {
        waves: plan.waves().to_vec(),
        defenders: plan.defenders(),
        rules: *plan.rules(),
        repel: Exact::new(&result.repel_probability()),
        survivors: Stats::from(&stats),
    })
}

fn threshold(query: &Query) -> Result<ThresholdResponse, ApiError> {
    if query.defenders.is_some() {
        return Err(ApiError::bad_request(
            "defenders",
            "threshold scans defender counts itself; drop this field",
        ));
    }
    let rules = query.rules();
    let limit = query.limit.unwrap_or(DEFAULT_THRESHOLD_LIMIT);
    let report = garrison_thresholds(&query.waves, &rules, limit)?;
    let interpretation = format!(
        "{} troops attacking as waves {:?}, each wave fighting to elimination before the next",
        report.waves.iter().sum::<u32>(),
        report.waves
    );
    Ok(ThresholdResponse {
        waves: report.waves,
        rules,
        limit,
        expected_survivor: report.min_defenders_expected_survivor,
        repel_half: report.min_defenders_repel_prob_half,
        interpretation,
    })
}

fn simulate(query: &Query) -> Result<SimulateResponse, ApiError> {
    let plan = query.plan()?;
    let exact = multi_territory(&plan)?.win_probability;
    let config = SimConfig::new(
        plan.clone(),
        query.trials.unwrap_or(DEFAULT_TRIALS),
        query.seed.unwrap_or(DEFAULT_SEED),
    )?;
    let report = simulate_partitioned(&config, query.partitions.unwrap_or(1))?;
    let exact_win = Exact::new(&exact);
    let z_score = if report.standard_error_win > 0.0 {
        (report.win_rate - exact_win.approx) / report.standard_error_win
    } else {
        0.0
    };
    Ok(SimulateResponse {
        waves: plan.waves().to_vec(),
        defenders: plan.defenders(),
        rules: *plan.rules(),
        exact_win,
        z_score,
        report,
    })
}

fn waves_label(waves: &[u32]) -> String {
    waves
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join("+")
}

fn exact_row(name: &str, exact: &Exact) -> Vec<String> {
    vec![
        name.to_string(),
        exact.value.to_string(),
        decimal(&exact.value),
    ]
}

fn mass_rows(table: &mut Table, name: &str, rows: &[Mass]) {
    for m in rows {
        table.push(vec![
            name.to_string(),
            m.value.to_string(),
            m.p.value.to_string(),
            decimal(&m.p.value),
        ]);
    }
}

fn stats_rows(table: &mut Table, name: &str, stats: &Stats) {
    table.push(exact_row(&format!("{name}_mean"), &stats.mean));
    table.push(exact_row(&format!("{name}_variance"), &stats.variance));
    table.push(vec![
        format!("{name}_std_dev"),
        String::new(),
        real(stats.std_dev),
    ]);
    table.push(vec![
        format!("{name}_minus_sd"),
        String::new(),
        real(stats.band[0]),
    ]);
    table.push(vec![
        format!("{name}_plus_sd"),
        String::new(),
        real(stats.band[1]),
    ]);
}

impl Response {
    /// One-line description of the scenario, printed above text tables.
    pub fn heading(&self) -> String {
        let (waves, defenders, rules) = match self {
            Response::Odds(r) => (&r.waves, Some(r.defenders), &r.rules),
            Response::Dist(r) => (&r.waves, Some(r.defenders), &r.rules),
            Response::Expect(r) => (&r.waves, Some(r.defenders), &r.rules),
            Response::Survivors(r) => (&r.waves, Some(r.defenders), &r.rules),
            Response::Threshold(r) => (&r.waves, None, &r.rules),
            Response::Simulate(r) => (&r.waves, Some(r.defenders), &r.rules),
        };
        let against = defenders
            .map(|d| format!(" vs {d} defenders"))
            .unwrap_or_default();
        format!(
            "attack {}{} (dice {}v{}, d{})",
            waves_label(waves),
            against,
            rules.attacker_max_dice,
            rules.defender_max_dice,
            rules.faces
        )
    }

    pub fn table(&self) -> Table {
        match self {
            Response::Odds(r) => {
                let mut t = Table::new(&["quantity", "fraction", "decimal"]);
                t.push(exact_row("win", &r.win));
                t.push(exact_row("repel", &r.repel));
                t
            }
            Response::Dist(r) => {
                let mut t = Table::new(&["series", "value", "fraction", "decimal"]);
                mass_rows(&mut t, "defenders_left", &r.defenders_left);
                mass_rows(&mut t, "attacker_losses", &r.attacker_losses);
                mass_rows(
                    &mut t,
                    "attackers_left_given_conquest",
                    &r.attackers_left_given_conquest,
                );
                t
            }
            Response::Expect(r) => {
                let mut t = Table::new(&["quantity", "fraction", "decimal"]);
                t.push(exact_row("win", &r.win));
                stats_rows(&mut t, "attacker_losses", &r.attacker_losses);
                t
            }
            Response::Survivors(r) => {
                let mut t = Table::new(&["quantity", "fraction", "decimal"]);
                t.push(exact_row("repel", &r.repel));
                stats_rows(&mut t, "survivors", &r.survivors);
                t
            }
            Response::Threshold(r) => {
                let found = |v: Option<u32>| match v {
                    Some(n) => n.to_string(),
                    None => format!("not found within {}", r.limit),
                };
                let mut t = Table::new(&["criterion", "min_defenders"]);
                t.push(vec![
                    "expected_survivors_at_least_1".into(),
                    found(r.expected_survivor),
                ]);
                t.push(vec![
                    "repel_probability_at_least_half".into(),
                    found(r.repel_half),
                ]);
                t
            }
            Response::Simulate(r) => {
                let rep = &r.report;
                let mut t = Table::new(&["quantity", "value"]);
                t.push(vec!["generator".into(), rep.generator.into()]);
                t.push(vec!["seed".into(), rep.seed.to_string()]);
                t.push(vec!["trials".into(), rep.trials.to_string()]);
                t.push(vec!["partitions".into(), rep.partitions.to_string()]);
                t.push(vec!["wins".into(), rep.wins.to_string()]);
                t.push(vec!["win_rate".into(), real(rep.win_rate)]);
                t.push(vec![
                    "standard_error_win".into(),
                    real(rep.standard_error_win),
                ]);
                t.push(vec!["exact_win".into(), fraction_text(&r.exact_win.value)]);
                t.push(vec!["z_score".into(), format!("{:.3}", r.z_score)]);
                t.push(vec![
                    "mean_attacker_losses".into(),
                    real(rep.mean_attacker_losses),
                ]);
                t.push(vec!["mean_survivors".into(), real(rep.mean_survivors)]);
                t
            }
        }
    }
}
