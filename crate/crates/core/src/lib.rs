//! Exact odds for Risk-style dice combat.
//!
//! Probabilities are exact rationals throughout; floats only appear where a
//! square root is taken or a value is printed. The pieces build on each other:
//!
//! * [`orderstats`] - order statistics of fair dice and the best-die duel.
//! * [`combat`] - single battles fought to elimination and multi-territory
//!   attacks chained against one defender.
//! * [`stats`] - expectations, spreads and garrison thresholds.
//! * [`sim`] - a seeded Monte Carlo simulator that shares no probability
//!   code with the exact engine and serves as its oracle.

pub mod combat;
pub mod dist;
pub mod error;
pub mod orderstats;
pub mod rational;
pub mod sim;
pub mod stats;

pub use combat::{
    battle, dice_for, multi_territory, round_distribution, terminal_states, wave_order_matters,
    waves_for_troops, AttackPlan, BattleResult, BattleState, RoundOutcome, RuleSet,
};
pub use dist::Dist;
pub use error::{Error, Result};
pub use orderstats::{
    attacker_wins_best, order_stat_cdf, order_stat_pmf, top_two_joint_pmf, DieSpec, OrderStatQuery,
};
pub use rational::Rational;
pub use sim::{simulate, simulate_partitioned, SimConfig, SimReport};
pub use stats::{
    expectation, expected_attacker_losses, expected_survivors, garrison_thresholds,
    plan_attacker_losses, SummaryStats, ThresholdReport,
};
