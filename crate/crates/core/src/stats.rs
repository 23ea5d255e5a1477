//! Expectations, spreads and garrison thresholds over battle outcomes.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::combat::{battle, multi_territory, AttackPlan, RuleSet};
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::rational::{integer, ratio, to_f64, Rational};

/// Default upper bound for garrison threshold scans.
pub const DEFAULT_THRESHOLD_LIMIT: u32 = 30;

/// Mean and spread of an integer-valued outcome. Mean and variance are
/// exact; the standard deviation is the nearest float to its square root.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    pub mean: Rational,
    pub variance: Rational,
    pub std_dev: f64,
}

impl SummaryStats {
    pub fn of(dist: &Dist) -> Result<Self> {
        let mean = expectation(dist, |&x| integer(x.into()))?;
        let second = expectation(dist, |&x| integer(x.into()) * integer(x.into()))?;
        Ok(Self::from_moments(mean, second))
    }

    fn from_moments(mean: Rational, second_moment: Rational) -> Self {
        let variance = second_moment - &mean * &mean;
        let std_dev = to_f64(&variance).sqrt();
        Self {
            mean,
            variance,
            std_dev,
        }
    }

    /// `mean - std_dev`, `mean + std_dev`
    pub fn band(&self) -> (f64, f64) {
        let mean = to_f64(&self.mean);
        (mean - self.std_dev, mean + self.std_dev)
    }
}

/// `E[u(X)]` for a normalized distribution.
pub fn expectation<K: Ord + Clone>(
    dist: &Dist<K>,
    mut u: impl FnMut(&K) -> Rational,
) -> Result<Rational> {
    let total = dist.total();
    if !total.is_one() {
        return Err(Error::Unnormalized {
            total: total.to_string(),
        });
    }
    Ok(dist
        .iter()
        .fold(Rational::zero(), |acc, (x, p)| acc + u(x) * p))
}

/// Troops the attacker can expect to lose attacking from one territory.
pub fn expected_attacker_losses(
    attackers: u32,
    defenders: u32,
    rules: &RuleSet,
) -> Result<SummaryStats> {
    let plan = AttackPlan::new(vec![attackers], defenders, *rules)?;
    plan_attacker_losses(&plan)
}

/// Attacker losses over a whole plan.
///
/// `p(e)` for `e < n` is the probability of conquering while losing `e`
/// troops; every other outcome loses all `n` committed troops, so the mean is
/// `(1 - sum p(e)) n + sum e p(e)`.
pub fn plan_attacker_losses(plan: &AttackPlan) -> Result<SummaryStats> {
    let result = multi_territory(plan)?;
    let committed = result.attackers;
    let losses = &result.attacker_losses_dist;
    if !losses.is_normalized() {
        return Err(Error::Unnormalized {
            total: losses.total().to_string(),
        });
    }

    let conquered = (0..committed).map(|e| losses.mass(&e));
    let success = conquered.clone().fold(Rational::zero(), |acc, p| acc + p);
    let failure = Rational::one() - &success;
    let n = integer(committed.into());

    let mean = conquered
        .clone()
        .enumerate()
        .skip(1)
        .fold(&failure * &n, |acc, (e, p)| acc + p * integer(e as i64));
    let second = conquered
        .enumerate()
        .skip(1)
        .fold(&failure * &n * &n, |acc, (e, p)| {
            acc + p * integer((e * e) as i64)
        });
    Ok(SummaryStats::from_moments(mean, second))
}

/// Defending troops expected to survive `plan`.
///
/// The mean is `n_d - E[X_L]` with `X_L` the defenders lost; the spread is
/// that of `X_L`, which a constant shift leaves unchanged.
pub fn expected_survivors(plan: &AttackPlan) -> Result<SummaryStats> {
    let result = multi_territory(plan)?;
    let lost = result
        .defenders_left_dist
        .map(|&left| plan.defenders() - left);
    let lost_stats = SummaryStats::of(&lost)?;
    Ok(SummaryStats {
        mean: integer(plan.defenders().into()) - lost_stats.mean,
        variance: lost_stats.variance,
        std_dev: lost_stats.std_dev,
    })
}

/// Smallest garrisons that hold against a given attack.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub waves: Vec<u32>,
    pub limit: u32,
    /// Smallest defender count with at least one expected survivor.
    pub min_defenders_expected_survivor: Option<u32>,
    /// Smallest defender count repelling the attack with probability at least one half.
    pub min_defenders_repel_prob_half: Option<u32>,
}

/// Scans defender counts `1..=limit` for the two garrison criteria.
/// A criterion with no solution inside the limit is reported as `None`.
pub fn garrison_thresholds(waves: &[u32], rules: &RuleSet, limit: u32) -> Result<ThresholdReport> {
    if limit == 0 {
        return Err(Error::domain("limit", "search limit must be at least 1"));
    }
    let plan = AttackPlan::new(waves.to_vec(), 1, *rules)?;
    let half = ratio(1, 2);
    let one = Rational::one();

    let mut survivor = None;
    let mut repel = None;
    for defenders in 1..=limit {
        if survivor.is_some() && repel.is_some() {
            break;
        }
        let plan = plan.against(defenders)?;
        if survivor.is_none() && expected_survivors(&plan)?.mean >= one {
            survivor = Some(defenders);
        }
        if repel.is_none() && multi_territory(&plan)?.repel_probability() >= half {
            repel = Some(defenders);
        }
    }
    Ok(ThresholdReport {
        waves: waves.to_vec(),
        limit,
        min_defenders_expected_survivor: survivor,
        min_defenders_repel_prob_half: repel,
    })
}

/// Convenience for the single-territory loss distribution.
pub fn attacker_loss_dist(attackers: u32, defenders: u32, rules: &RuleSet) -> Result<Dist> {
    Ok(battle(attackers, defenders, rules)?.attacker_losses_dist)
}
