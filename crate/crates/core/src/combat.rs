//! Battle resolution: single engagements fought to elimination and
//! multi-territory attacks that chain engagements against one defender.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::orderstats::{for_each_roll, MAX_ENUMERATED_OUTCOMES};
use crate::rational::Rational;

/// Dice caps for one engagement.
///
/// The base game rolls at most three attacking and two defending dice; a
/// bonus die raises either cap by one, but only the best two pairs are ever
/// compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleSet {
    pub attacker_max_dice: u32,
    pub defender_max_dice: u32,
    pub compared_pairs_cap: u32,
    pub faces: u32,
}

impl Default for RuleSet {
    fn default() -> Self {
        Self::standard()
    }
}

impl RuleSet {
    pub const fn standard() -> Self {
        Self {
            attacker_max_dice: 3,
            defender_max_dice: 2,
            compared_pairs_cap: 2,
            faces: 6,
        }
    }

    pub fn new(attacker_max_dice: u32, defender_max_dice: u32, faces: u32) -> Result<Self> {
        let rules = Self {
            attacker_max_dice,
            defender_max_dice,
            compared_pairs_cap: 2,
            faces,
        };
        rules.validate()?;
        Ok(rules)
    }

    pub fn with_bonus_attack_die(mut self) -> Self {
        self.attacker_max_dice += 1;
        self
    }

    pub fn with_bonus_defense_die(mut self) -> Self {
        self.defender_max_dice += 1;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.attacker_max_dice) {
            return Err(Error::domain(
                "attacker_max_dice",
                format!("{} outside 1..=4", self.attacker_max_dice),
            ));
        }
        if !(1..=3).contains(&self.defender_max_dice) {
            return Err(Error::domain(
                "defender_max_dice",
                format!("{} outside 1..=3", self.defender_max_dice),
            ));
        }
        if self.compared_pairs_cap != 2 {
            return Err(Error::domain("compared_pairs_cap", "must be 2"));
        }
        if self.faces == 0 {
            return Err(Error::domain("faces", "a die needs at least one face"));
        }
        let rolls =
            (self.faces as u64).saturating_pow(self.attacker_max_dice + self.defender_max_dice);
        if rolls > MAX_ENUMERATED_OUTCOMES {
            return Err(Error::domain(
                "faces",
                format!("{} faces make a round too large to enumerate", self.faces),
            ));
        }
        Ok(())
    }
}

/// Troops remaining on each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BattleState {
    pub attackers: u32,
    pub defenders: u32,
}

impl BattleState {
    pub const fn new(attackers: u32, defenders: u32) -> Self {
        Self {
            attackers,
            defenders,
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.attackers == 0 || self.defenders == 0
    }
}

/// Troops lost by each side in one round, with its probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundOutcome {
    pub attacker_losses: u32,
    pub defender_losses: u32,
    pub probability: Rational,
}

/// Dice thrown by each side from `state`.
pub fn dice_for(state: BattleState, rules: &RuleSet) -> Result<(u32, u32)> {
    if state.is_terminal() {
        return Err(Error::domain(
            "state",
            format!(
                "battle already decided ({} attackers, {} defenders)",
                state.attackers, state.defenders
            ),
        ));
    }
    Ok((
        state.attackers.min(rules.attacker_max_dice),
        state.defenders.min(rules.defender_max_dice),
    ))
}

type RoundKey = (u32, u32, u32, u32);
type RoundCache = RwLock<HashMap<RoundKey, Arc<Vec<RoundOutcome>>>>;

fn round_cache() -> &'static RoundCache {
    static CACHE: OnceLock<RoundCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn round_table(
    attack_dice: u32,
    defence_dice: u32,
    rules: &RuleSet,
) -> Result<Arc<Vec<RoundOutcome>>> {
    rules.validate()?;
    if !(1..=rules.attacker_max_dice).contains(&attack_dice) {
        return Err(Error::domain(
            "attack_dice",
            format!("{attack_dice} outside 1..={}", rules.attacker_max_dice),
        ));
    }
    if !(1..=rules.defender_max_dice).contains(&defence_dice) {
        return Err(Error::domain(
            "defence_dice",
            format!("{defence_dice} outside 1..={}", rules.defender_max_dice),
        ));
    }
    let key = (
        attack_dice,
        defence_dice,
        rules.compared_pairs_cap,
        rules.faces,
    );
    if let Some(hit) = round_cache().read().unwrap().get(&key) {
        return Ok(Arc::clone(hit));
    }

    let pairs = rules.compared_pairs_cap.min(attack_dice).min(defence_dice) as usize;
    let split = attack_dice as usize;
    // counts[defender_losses]; attacker losses are pairs - defender_losses
    let mut counts = vec![0u64; pairs + 1];
    let mut attack = Vec::with_capacity(split);
    let mut defence = Vec::with_capacity(defence_dice as usize);
    for_each_roll(rules.faces, split + defence_dice as usize, |roll| {
        attack.clear();
        attack.extend_from_slice(&roll[..split]);
        defence.clear();
        defence.extend_from_slice(&roll[split..]);
        attack.sort_unstable_by(|a, b| b.cmp(a));
        defence.sort_unstable_by(|a, b| b.cmp(a));
        let wins = attack
            .iter()
            .zip(&defence)
            .take(pairs)
            .filter(|(a, d)| a > d)
            .count();
        counts[wins] += 1;
    });

    let total = BigInt::from(rules.faces).pow(attack_dice + defence_dice);
    let table: Vec<RoundOutcome> = counts
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c > 0)
        .map(|(defender_losses, &c)| RoundOutcome {
            attacker_losses: (pairs - defender_losses) as u32,
            defender_losses: defender_losses as u32,
            probability: Rational::new(BigInt::from(c), total.clone()),
        })
        .collect();

    let mut cache = round_cache().write().unwrap();
    Ok(Arc::clone(
        cache.entry(key).or_insert_with(|| Arc::new(table)),
    ))
}

/// Exact loss distribution of one round, by exhaustive enumeration of every
/// roll. Outcomes are ordered by increasing attacker losses.
pub fn round_distribution(
    attack_dice: u32,
    defence_dice: u32,
    rules: &RuleSet,
) -> Result<Vec<RoundOutcome>> {
    round_table(attack_dice, defence_dice, rules).map(|t| t.as_ref().clone())
}

type BattleCache = RwLock<HashMap<(RuleSet, BattleState), Arc<Dist<BattleState>>>>;

fn battle_cache() -> &'static BattleCache {
    static CACHE: OnceLock<BattleCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn resolve(state: BattleState, rules: &RuleSet) -> Result<Arc<Dist<BattleState>>> {
    if state.is_terminal() {
        return Ok(Arc::new(Dist::point(state)));
    }
    if let Some(hit) = battle_cache().read().unwrap().get(&(*rules, state)) {
        return Ok(Arc::clone(hit));
    }
    let (attack_dice, defence_dice) = dice_for(state, rules)?;
    let mut terminal = Dist::new();
    for outcome in round_table(attack_dice, defence_dice, rules)?.iter() {
        let next = BattleState::new(
            state.attackers - outcome.attacker_losses,
            state.defenders - outcome.defender_losses,
        );
        let tail = resolve(next, rules)?;
        terminal.accumulate(&tail, &outcome.probability);
    }
    let mut cache = battle_cache().write().unwrap();
    Ok(Arc::clone(
        cache
            .entry((*rules, state))
            .or_insert_with(|| Arc::new(terminal)),
    ))
}

/// Distribution over the terminal states reachable from `start`.
pub fn terminal_states(start: BattleState, rules: &RuleSet) -> Result<Arc<Dist<BattleState>>> {
    rules.validate()?;
    resolve(start, rules)
}

/// Outcome of an attack fought to the end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BattleResult {
    /// Attacking troops committed, over all waves.
    pub attackers: u32,
    /// Defending troops at the start.
    pub defenders: u32,
    pub win_probability: Rational,
    /// Defenders remaining at the end; mass at zero is the conquest probability.
    pub defenders_left_dist: Dist,
    /// Attacking troops remaining, conditional on conquest.
    pub attackers_left_dist: Dist,
    /// Attacking troops lost; mass at `attackers` is the failure probability.
    pub attacker_losses_dist: Dist,
}

impl BattleResult {
    /// Builds the result from the joint law of (defenders left, attacker losses).
    fn from_joint(attackers: u32, defenders: u32, joint: &Dist<(u32, u32)>) -> Self {
        let defenders_left_dist = joint.map(|&(left, _)| left);
        let win_probability = defenders_left_dist.mass(&0);
        let attackers_left_dist = joint
            .conditional(|&(left, _)| left == 0)
            .map(|&(_, lost)| attackers - lost);
        Self {
            attackers,
            defenders,
            win_probability,
            defenders_left_dist,
            attackers_left_dist,
            attacker_losses_dist: joint.map(|&(_, lost)| lost),
        }
    }

    pub fn repel_probability(&self) -> Rational {
        Rational::one() - &self.win_probability
    }

    /// Probability that exactly `left` defenders remain at the end.
    pub fn defenders_left_probability(&self, left: u32) -> Rational {
        self.defenders_left_dist.mass(&left)
    }
}

/// Fights `attackers` against `defenders` until one side is gone.
///
/// Zero defenders is a conquered territory with probability one.
pub fn battle(attackers: u32, defenders: u32, rules: &RuleSet) -> Result<BattleResult> {
    if attackers == 0 {
        return Err(Error::domain(
            "attackers",
            "an attack needs at least one troop",
        ));
    }
    let terminal = terminal_states(BattleState::new(attackers, defenders), rules)?;
    let joint = terminal.map(|s| (s.defenders, attackers - s.attackers));
    Ok(BattleResult::from_joint(attackers, defenders, &joint))
}

/// Attacking forces from several territories, engaging one defending
/// territory in the given order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttackPlan {
    waves: Vec<u32>,
    defenders: u32,
    rules: RuleSet,
}

impl AttackPlan {
    pub fn new(waves: Vec<u32>, defenders: u32, rules: RuleSet) -> Result<Self> {
        if waves.is_empty() {
            return Err(Error::domain("waves", "need at least one attacking wave"));
        }
        if let Some(pos) = waves.iter().position(|&w| w == 0) {
            return Err(Error::domain(
                "waves",
                format!("wave {} has no troops", pos + 1),
            ));
        }
        if defenders == 0 {
            return Err(Error::domain(
                "defenders",
                "need at least one defending troop",
            ));
        }
        rules.validate()?;
        Ok(Self {
            waves,
            defenders,
            rules,
        })
    }

    pub fn waves(&self) -> &[u32] {
        &self.waves
    }

    pub fn defenders(&self) -> u32 {
        self.defenders
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn total_attackers(&self) -> u32 {
        self.waves.iter().sum()
    }

    /// Same waves against a different defender count.
    pub fn against(&self, defenders: u32) -> Result<Self> {
        Self::new(self.waves.clone(), defenders, self.rules)
    }
}

/// Splits `troops` into waves of at most `per_territory`, full waves first.
/// Nine troops with a cap of three become `[3, 3, 3]`; seven become `[3, 3, 1]`.
pub fn waves_for_troops(troops: u32, per_territory: u32) -> Result<Vec<u32>> {
    if troops == 0 {
        return Err(Error::domain("troops", "need at least one troop"));
    }
    if per_territory == 0 {
        return Err(Error::domain(
            "per_territory",
            "need at least one troop per territory",
        ));
    }
    let mut waves = vec![per_territory; (troops / per_territory) as usize];
    if !troops.is_multiple_of(per_territory) {
        waves.push(troops % per_territory);
    }
    Ok(waves)
}

/// Resolves every wave of `plan` in order; each wave fights whatever the
/// earlier waves left standing.
pub fn multi_territory(plan: &AttackPlan) -> Result<BattleResult> {
    // joint law of (defenders left, attacker losses so far)
    let mut state: Dist<(u32, u32)> = Dist::point((plan.defenders, 0));
    for &wave in &plan.waves {
        let mut next = Dist::new();
        for ((left, lost), p) in state.iter() {
            if *left == 0 {
                next.add_mass((0, *lost), p.clone());
                continue;
            }
            let terminal = terminal_states(BattleState::new(wave, *left), &plan.rules)?;
            for (end, q) in terminal.iter() {
                next.add_mass((end.defenders, lost + wave - end.attackers), p * q);
            }
        }
        state = next;
    }
    Ok(BattleResult::from_joint(
        plan.total_attackers(),
        plan.defenders,
        &state,
    ))
}

/// Whether any reordering of the waves changes the conquest probability.
pub fn wave_order_matters(plan: &AttackPlan) -> Result<bool> {
    let baseline = multi_territory(plan)?.win_probability;
    let orders: BTreeSet<Vec<u32>> = plan
        .waves
        .iter()
        .copied()
        .permutations(plan.waves.len())
        .collect();
    for order in orders {
        let reordered = AttackPlan::new(order, plan.defenders, plan.rules)?;
        if multi_territory(&reordered)?.win_probability != baseline {
            return Ok(true);
        }
    }
    Ok(false)
}
