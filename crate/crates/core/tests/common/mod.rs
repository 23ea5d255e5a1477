//! Brute-force oracles shared by the integration tests. None of these call
//! into the engine's probability code; they enumerate raw dice instead.

#![allow(dead_code)]

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use risk_odds::Rational;

pub fn frac(n: u64, d: u64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Every ordered roll of `count` dice with `faces` faces.
pub fn rolls(faces: u32, count: usize) -> Vec<Vec<u32>> {
    if count == 0 {
        return vec![vec![]];
    }
    (0..count)
        .map(|_| 1..=faces)
        .multi_cartesian_product()
        .collect()
}

fn sorted_desc(v: &[u32]) -> Vec<u32> {
    let mut v = v.to_vec();
    v.sort_by(|a, b| b.cmp(a));
    v
}

/// `P(X_(k) <= m)` by counting.
pub fn enum_cdf(faces: u32, n: usize, k: usize, m: i64) -> Rational {
    let all = rolls(faces, n);
    let hits = all
        .iter()
        .filter(|r| {
            let mut s = r.to_vec();
            s.sort();
            (s[k - 1] as i64) <= m
        })
        .count();
    frac(hits as u64, all.len() as u64)
}

pub fn enum_pmf(faces: u32, n: usize, k: usize, m: u32) -> Rational {
    enum_cdf(faces, n, k, m as i64) - enum_cdf(faces, n, k, m as i64 - 1)
}

pub fn enum_top_two(faces: u32, n: usize) -> BTreeMap<(u32, u32), Rational> {
    let all = rolls(faces, n);
    let mut counts: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for r in &all {
        let s = sorted_desc(r);
        *counts.entry((s[0], s[1])).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(k, c)| (k, frac(c, all.len() as u64)))
        .collect()
}

/// Probability that the best attacking die strictly beats the best defending die.
pub fn enum_best_win(faces: u32, a: usize, d: usize) -> Rational {
    let all = rolls(faces, a + d);
    let wins = all
        .iter()
        .filter(|r| r[..a].iter().max() > r[a..].iter().max())
        .count();
    frac(wins as u64, all.len() as u64)
}

/// Round law keyed by (attacker losses, defender losses).
pub fn enum_round(faces: u32, a: usize, d: usize) -> BTreeMap<(u32, u32), Rational> {
    let all = rolls(faces, a + d);
    let mut counts: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for r in &all {
        let att = sorted_desc(&r[..a]);
        let def = sorted_desc(&r[a..]);
        let (mut al, mut dl) = (0, 0);
        for i in 0..a.min(d).min(2) {
            if att[i] > def[i] {
                dl += 1;
            } else {
                al += 1;
            }
        }
        *counts.entry((al, dl)).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(k, c)| (k, frac(c, all.len() as u64)))
        .collect()
}

/// Round tables for the standard caps, indexed by dice counts.
pub struct RoundTables {
    tables: BTreeMap<(u32, u32), BTreeMap<(u32, u32), Rational>>,
    pub attack_cap: u32,
    pub defence_cap: u32,
}

impl RoundTables {
    pub fn new(faces: u32, attack_cap: u32, defence_cap: u32) -> Self {
        let mut tables = BTreeMap::new();
        for a in 1..=attack_cap {
            for d in 1..=defence_cap {
                tables.insert((a, d), enum_round(faces, a as usize, d as usize));
            }
        }
        Self {
            tables,
            attack_cap,
            defence_cap,
        }
    }

    pub fn standard() -> Self {
        Self::new(6, 3, 2)
    }

    pub fn at(&self, attackers: u32, defenders: u32) -> &BTreeMap<(u32, u32), Rational> {
        &self.tables[&(
            attackers.min(self.attack_cap),
            defenders.min(self.defence_cap),
        )]
    }
}

/// Conquest probability by walking every combat sequence of the outcome tree
/// explicitly, with no memoization.
pub fn tree_win_probability(tables: &RoundTables, attackers: u32, defenders: u32) -> Rational {
    fn walk(t: &RoundTables, a: u32, d: u32, path: Rational, acc: &mut Rational) {
        if d == 0 {
            *acc += path;
            return;
        }
        if a == 0 {
            return;
        }
        for (&(al, dl), p) in t.at(a, d) {
            walk(t, a - al, d - dl, &path * p, acc);
        }
    }
    let mut acc = frac(0, 1);
    walk(tables, attackers, defenders, frac(1, 1), &mut acc);
    acc
}

/// Terminal law over (attackers left, defenders left) by pushing probability
/// mass forward through the state space, layer by layer.
pub fn forward_terminal(
    tables: &RoundTables,
    attackers: u32,
    defenders: u32,
) -> BTreeMap<(u32, u32), Rational> {
    let mut live: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
    live.insert((attackers, defenders), frac(1, 1));
    let mut done: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
    while !live.is_empty() {
        let mut next: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for ((a, d), p) in live {
            if a == 0 || d == 0 {
                *done.entry((a, d)).or_insert_with(|| frac(0, 1)) += p;
                continue;
            }
            for (&(al, dl), q) in tables.at(a, d) {
                *next.entry((a - al, d - dl)).or_insert_with(|| frac(0, 1)) += &p * q;
            }
        }
        live = next;
    }
    done
}
