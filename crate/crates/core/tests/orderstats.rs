mod common;

use common::*;
use proptest::prelude::*;
use risk_odds::orderstats::{closed_form, order_stat_dist, order_stat_strictly_below};
use risk_odds::*;

fn q(faces: u32, n: u32, k: u32, m: u32) -> OrderStatQuery {
    OrderStatQuery::new(DieSpec::new(faces, n).unwrap(), k, m).unwrap()
}

/// counts[k-1][m-1] = rolls whose k-th smallest die shows m
fn order_counts(faces: u32, n: usize) -> (Vec<Vec<u64>>, u64) {
    let all = rolls(faces, n);
    let mut counts = vec![vec![0u64; faces as usize]; n];
    for r in &all {
        let mut s = r.clone();
        s.sort();
        for (k, &v) in s.iter().enumerate() {
            counts[k][v as usize - 1] += 1;
        }
    }
    (counts, all.len() as u64)
}

#[test]
fn cdf_three_dice_second_smallest() {
    assert_eq!(order_stat_cdf(&q(6, 3, 2, 4)), enum_cdf(6, 3, 2, 4));
    // at least two of three dice at most 4: 3*(4/6)^2*(2/6) + (4/6)^3
    assert_eq!(order_stat_cdf(&q(6, 3, 2, 4)), frac(20, 27));
}

#[test]
fn pmf_three_dice_middle() {
    let value = order_stat_pmf(&q(6, 3, 2, 3));
    assert_eq!(value, enum_pmf(6, 3, 2, 3));
    assert_eq!(value, closed_form::second_pmf(6, 3, 3));
    assert_eq!(value, frac(13, 54));
}

#[test]
fn matches_enumeration_up_to_seven_dice() {
    for faces in [3u32, 6] {
        for n in 1..=7usize {
            let (counts, total) = order_counts(faces, n);
            for k in 1..=n {
                let mut running = 0;
                for m in 1..=faces {
                    let query = q(faces, n as u32, k as u32, m);
                    let hits = counts[k - 1][m as usize - 1];
                    running += hits;
                    assert_eq!(
                        order_stat_pmf(&query),
                        frac(hits, total),
                        "pmf n={n} k={k} m={m}"
                    );
                    assert_eq!(
                        order_stat_cdf(&query),
                        frac(running, total),
                        "cdf n={n} k={k} m={m}"
                    );
                }
            }
        }
    }
}

#[test]
fn pmf_normalizes() {
    for n in 1..=5 {
        for k in 1..=n {
            let dist = order_stat_dist(DieSpec::d6(n).unwrap(), k).unwrap();
            assert!(dist.is_normalized(), "n={n} k={k}");
        }
    }
}

#[test]
fn pmf_is_cdf_difference() {
    for n in 1..=5 {
        for k in 1..=n {
            for m in 1..=6 {
                let previous = if m == 1 {
                    frac(0, 1)
                } else {
                    order_stat_cdf(&q(6, n, k, m - 1))
                };
                let query = q(6, n, k, m);
                assert_eq!(order_stat_pmf(&query), order_stat_cdf(&query) - &previous);
                // the F(m) - f(m) form of P(X_(k) < m) is the CDF one face lower
                assert_eq!(order_stat_strictly_below(&query), previous);
            }
        }
    }
}

#[test]
fn closed_forms_agree_with_general_sum() {
    for faces in [3u32, 6] {
        for n in 2..=5 {
            for m in 1..=faces {
                let top = q(faces, n, n, m);
                let second = q(faces, n, n - 1, m);
                assert_eq!(
                    order_stat_strictly_below(&top),
                    closed_form::max_below(faces, n, m)
                );
                assert_eq!(order_stat_pmf(&top), closed_form::max_pmf(faces, n, m));
                assert_eq!(
                    order_stat_strictly_below(&second),
                    closed_form::second_below(faces, n, m)
                );
                assert_eq!(
                    order_stat_pmf(&second),
                    closed_form::second_pmf(faces, n, m)
                );
            }
        }
    }
}

#[test]
fn joint_law_matches_enumeration_and_marginals() {
    for faces in [3u32, 6] {
        for n in 2..=4 {
            let die = DieSpec::new(faces, n).unwrap();
            let joint = top_two_joint_pmf(die).unwrap();
            let oracle = enum_top_two(faces, n as usize);
            assert_eq!(joint.len(), oracle.len());
            for (pair, p) in &oracle {
                assert_eq!(&joint.mass(pair), p);
            }
            assert!(joint.support().all(|&(hi, lo)| hi >= lo));
            let highest = joint.map(|&(hi, _)| hi);
            let second = joint.map(|&(_, lo)| lo);
            assert_eq!(highest, order_stat_dist(die, n).unwrap());
            assert_eq!(second, order_stat_dist(die, n - 1).unwrap());
        }
    }
    let three = top_two_joint_pmf(DieSpec::d6(3).unwrap()).unwrap();
    assert_eq!(three.mass(&(6, 4)), enum_top_two(6, 3)[&(6, 4)]);
    assert_eq!(three.mass(&(6, 4)), frac(21, 216));
}

#[test]
fn best_die_duel_matches_enumeration() {
    for a in 1..=6u32 {
        for d in 1..=(7 - a) {
            let value = attacker_wins_best(a, d, 6).unwrap();
            let oracle = enum_best_win(6, a as usize, d as usize);
            assert_eq!(value, oracle, "a={a} d={d}");
            // complement: defender's best is at least the attacker's
            let all = rolls(6, (a + d) as usize);
            let defender = all
                .iter()
                .filter(|r| r[..a as usize].iter().max() <= r[a as usize..].iter().max())
                .count();
            assert_eq!(value + frac(defender as u64, all.len() as u64), frac(1, 1));
        }
    }
    for a in 1..=4u32 {
        for d in 1..=3u32 {
            assert_eq!(
                attacker_wins_best(a, d, 3).unwrap(),
                enum_best_win(3, a as usize, d as usize)
            );
        }
    }
    assert_eq!(attacker_wins_best(3, 2, 6).unwrap(), enum_best_win(6, 3, 2));
    assert_eq!(attacker_wins_best(3, 1, 6).unwrap(), frac(855, 1296));
}

proptest! {
    #[test]
    fn cdf_is_monotone_and_bounded(n in 1u32..=8, k_off in 0u32..8, m in 1u32..6) {
        let k = 1 + k_off % n;
        let lo = order_stat_cdf(&q(6, n, k, m));
        let hi = order_stat_cdf(&q(6, n, k, m + 1));
        prop_assert!(lo <= hi);
        prop_assert!(lo >= frac(0, 1) && hi <= frac(1, 1));
        prop_assert!(order_stat_pmf(&q(6, n, k, m)) >= frac(0, 1));
    }

    #[test]
    fn higher_ranks_sit_higher(n in 2u32..=8, k_off in 0u32..7, m in 1u32..=6) {
        // X_(k) <= X_(k+1), so the CDF of the higher rank is smaller
        let k = 1 + k_off % (n - 1);
        prop_assert!(order_stat_cdf(&q(6, n, k + 1, m)) <= order_stat_cdf(&q(6, n, k, m)));
    }
}
