//! Seeded Monte Carlo simulation of the same combat rules.
//!
//! Each trial rolls actual dice values, sorts them and compares the top pairs
//! with ties going to the defender. Nothing here touches the exact engine's
//! probability tables, which is what makes the simulator usable as an oracle
//! for it.
//!
//! Randomness comes from ChaCha20 seeded with `seed_from_u64(seed)`. A run
//! split into `p` partitions gives partition `i` the ChaCha stream `i` and
//! `trials / p` trials, the first `trials % p` partitions taking one extra.
//! The aggregate is therefore fixed for a given `(plan, trials, seed, p)`;
//! the single-partition run is the reference.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::combat::{AttackPlan, RuleSet};
use crate::error::{Error, Result};

/// Identity of the random generator, carried in every report.
pub const GENERATOR: &str =
    "ChaCha20Rng (rand_chacha 0.9), seed_from_u64, stream = partition index";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub plan: AttackPlan,
    pub trials: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(plan: AttackPlan, trials: u64, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::domain("trials", "need at least one trial"));
        }
        Ok(Self { plan, trials, seed })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub generator: &'static str,
    pub seed: u64,
    pub trials: u64,
    pub partitions: u32,
    pub wins: u64,
    pub win_rate: f64,
    pub standard_error_win: f64,
    pub mean_attacker_losses: f64,
    pub mean_survivors: f64,
    /// Trials ending with each number of defenders left.
    pub defenders_left_counts: BTreeMap<u32, u64>,
    /// Trials ending with each number of attacking troops lost.
    pub attacker_losses_counts: BTreeMap<u32, u64>,
}

#[derive(Default)]
struct Tally {
    wins: u64,
    defenders_left: BTreeMap<u32, u64>,
    attacker_losses: BTreeMap<u32, u64>,
}

impl Tally {
    fn merge(&mut self, other: Tally) {
        self.wins += other.wins;
        for (k, c) in other.defenders_left {
            *self.defenders_left.entry(k).or_default() += c;
        }
        for (k, c) in other.attacker_losses {
            *self.attacker_losses.entry(k).or_default() += c;
        }
    }
}

fn roll_sorted<R: Rng>(rng: &mut R, count: u32, faces: u32, into: &mut Vec<u32>) {
    into.clear();
    into.extend((0..count).map(|_| rng.random_range(1..=faces)));
    into.sort_unstable_by(|a, b| b.cmp(a));
}

/// One attack through all waves; returns (defenders left, attacker losses).
fn play_once<R: Rng>(rng: &mut R, waves: &[u32], defenders: u32, rules: &RuleSet) -> (u32, u32) {
    let mut defenders = defenders;
    let mut lost = 0;
    let mut attack = Vec::with_capacity(rules.attacker_max_dice as usize);
    let mut defence = Vec::with_capacity(rules.defender_max_dice as usize);
    for &wave in waves {
        let mut attackers = wave;
        while attackers > 0 && defenders > 0 {
            roll_sorted(
                rng,
                attackers.min(rules.attacker_max_dice),
                rules.faces,
                &mut attack,
            );
            roll_sorted(
                rng,
                defenders.min(rules.defender_max_dice),
                rules.faces,
                &mut defence,
            );
            for (a, d) in attack
                .iter()
                .zip(&defence)
                .take(rules.compared_pairs_cap as usize)
            {
                if a > d {
                    defenders -= 1;
                } else {
                    attackers -= 1;
                }
            }
        }
        lost += wave - attackers;
        if defenders == 0 {
            break;
        }
    }
    (defenders, lost)
}

fn run_partition(config: &SimConfig, stream: u64, trials: u64) -> Tally {
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    rng.set_stream(stream);
    let plan = &config.plan;
    let mut tally = Tally::default();
    for _ in 0..trials {
        let (left, lost) = play_once(&mut rng, plan.waves(), plan.defenders(), plan.rules());
        if left == 0 {
            tally.wins += 1;
        }
        *tally.defenders_left.entry(left).or_default() += 1;
        *tally.attacker_losses.entry(lost).or_default() += 1;
    }
    tally
}

/// Single-partition reference run.
pub fn simulate(config: &SimConfig) -> SimReport {
    simulate_partitioned(config, 1).expect("one partition is always valid")
}

/// Runs the trials across `partitions` threads; see the module docs for how
/// seeds are derived.
pub fn simulate_partitioned(config: &SimConfig, partitions: u32) -> Result<SimReport> {
    if partitions == 0 {
        return Err(Error::domain("partitions", "need at least one partition"));
    }
    let base = config.trials / partitions as u64;
    let extra = config.trials % partitions as u64;
    let share = |i: u64| base + u64::from(i < extra);

    let mut tally = Tally::default();
    if partitions == 1 {
        tally = run_partition(config, 0, config.trials);
    } else {
        let parts: Vec<Tally> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..partitions as u64)
                .map(|i| scope.spawn(move || run_partition(config, i, share(i))))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("simulation worker panicked"))
                .collect()
        });
        for part in parts {
            tally.merge(part);
        }
    }
    Ok(report(config, partitions, tally))
}

fn report(config: &SimConfig, partitions: u32, tally: Tally) -> SimReport {
    let trials = config.trials as f64;
    let win_rate = tally.wins as f64 / trials;
    let defenders = config.plan.defenders();
    let survivors: u64 = tally
        .defenders_left
        .iter()
        .map(|(&k, &c)| k as u64 * c)
        .sum();
    let losses: u64 = tally
        .attacker_losses
        .iter()
        .map(|(&k, &c)| k as u64 * c)
        .sum();
    debug_assert!(survivors <= defenders as u64 * config.trials);
    SimReport {
        generator: GENERATOR,
        seed: config.seed,
        trials: config.trials,
        partitions,
        wins: tally.wins,
        win_rate,
        standard_error_win: (win_rate * (1.0 - win_rate) / trials).sqrt(),
        mean_attacker_losses: losses as f64 / trials,
        mean_survivors: survivors as f64 / trials,
        defenders_left_counts: tally.defenders_left,
        attacker_losses_counts: tally.attacker_losses,
    }
}
