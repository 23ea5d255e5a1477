//! Order statistics of `n` independent fair dice.
//!
//! The general evaluators follow the binomial-sum form: `X_(k) <= m` holds
//! exactly when at most `n - k` of the dice land above `m`. The `closed_form`
//! submodule carries the specialised expressions for the largest and second
//! largest die, which the tests hold against the general form.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest `faces^count` that exhaustive enumeration will walk.
pub const MAX_ENUMERATED_OUTCOMES: u64 = 2_000_000;

/// `count` fair dice with faces numbered `1..=faces`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DieSpec {
    faces: u32,
    count: u32,
}

impl DieSpec {
    pub fn new(faces: u32, count: u32) -> Result<Self> {
        if faces == 0 {
            return Err(Error::domain("faces", "a die needs at least one face"));
        }
        if count == 0 {
            return Err(Error::domain("count", "need at least one die"));
        }
        Ok(Self { faces, count })
    }

    pub fn d6(count: u32) -> Result<Self> {
        Self::new(6, count)
    }

    pub fn faces(&self) -> u32 {
        self.faces
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    /// Number of equally likely ordered outcomes, saturating on overflow.
    pub fn outcomes(&self) -> u64 {
        (self.faces as u64).saturating_pow(self.count)
    }
}

/// Asks for the distribution of the `rank`-th smallest die (`rank == count`
/// is the maximum) at face value `face`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrderStatQuery {
    die: DieSpec,
    rank: u32,
    face: u32,
}

impl OrderStatQuery {
    pub fn new(die: DieSpec, rank: u32, face: u32) -> Result<Self> {
        if rank == 0 || rank > die.count {
            return Err(Error::domain(
                "rank",
                format!("rank {rank} outside 1..={}", die.count),
            ));
        }
        if face == 0 || face > die.faces {
            return Err(Error::domain(
                "face",
                format!("face {face} outside 1..={}", die.faces),
            ));
        }
        Ok(Self { die, rank, face })
    }

    /// Query on six-sided dice: `n` dice, rank `k`, face `m`.
    pub fn d6(n: u32, k: u32, m: u32) -> Result<Self> {
        Self::new(DieSpec::d6(n)?, k, m)
    }

    pub fn die(&self) -> DieSpec {
        self.die
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn face(&self) -> u32 {
        self.face
    }
}

/// Single-die CDF `F(m)`, defined for every integer `m`.
fn single_cdf(faces: u32, m: i64) -> Rational {
    let clamped = m.clamp(0, faces as i64);
    Rational::new(BigInt::from(clamped), BigInt::from(faces))
}

/// Single-die PMF `f(m)`.
fn single_pmf(faces: u32, m: i64) -> Rational {
    if (1..=faces as i64).contains(&m) {
        Rational::new(BigInt::one(), BigInt::from(faces))
    } else {
        Rational::zero()
    }
}

/// `sum_{j=0}^{n-k} C(n, j) * above^j * below^(n-j)`
fn binomial_tail(n: u32, k: u32, above: &Rational, below: &Rational) -> Rational {
    (0..=n - k).fold(Rational::zero(), |acc, j| {
        let coeff = Rational::from_integer(binomial(BigInt::from(n), BigInt::from(j)));
        acc + coeff * pow(above, j) * pow(below, n - j)
    })
}

pub(crate) fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// `P(X_(k) <= m)` for an arbitrary integer `m`.
pub(crate) fn cdf_at(die: DieSpec, rank: u32, m: i64) -> Rational {
    let below = single_cdf(die.faces, m);
    let above = Rational::one() - &below;
    binomial_tail(die.count, rank, &above, &below)
}

/// `P(X_(k) <= m)`.
pub fn order_stat_cdf(q: &OrderStatQuery) -> Rational {
    cdf_at(q.die, q.rank, q.face as i64)
}

/// `P(X_(k) < m)`, evaluated in the form that substitutes `F(m) - f(m)` for
/// the probability of a single die falling strictly below `m`.
pub fn order_stat_strictly_below(q: &OrderStatQuery) -> Rational {
    let m = q.face as i64;
    let f = single_pmf(q.die.faces, m);
    let cdf = single_cdf(q.die.faces, m);
    let above = Rational::one() - &cdf + &f;
    let below = cdf - f;
    binomial_tail(q.die.count, q.rank, &above, &below)
}

/// `P(X_(k) = m)`, the difference of the two CDF evaluations.
pub fn order_stat_pmf(q: &OrderStatQuery) -> Rational {
    order_stat_cdf(q) - order_stat_strictly_below(q)
}

/// Full distribution of `X_(k)` over `1..=faces`.
pub fn order_stat_dist(die: DieSpec, rank: u32) -> Result<Dist> {
    (1..=die.faces)
        .map(|m| Ok((m, order_stat_pmf(&OrderStatQuery::new(die, rank, m)?))))
        .collect()
}

/// Closed forms for the maximum and the second largest of `n` dice.
pub mod closed_form {
    use super::*;

    fn frac(numer: i64, faces: u32) -> Rational {
        Rational::new(BigInt::from(numer), BigInt::from(faces))
    }

    /// `P(X_(n) < m) = ((m-1)/faces)^n`
    pub fn max_below(faces: u32, n: u32, m: u32) -> Rational {
        pow(&frac(m as i64 - 1, faces), n)
    }

    /// `P(X_(n) = m) = (m^n - (m-1)^n) / faces^n`
    pub fn max_pmf(faces: u32, n: u32, m: u32) -> Rational {
        pow(&frac(m as i64, faces), n) - max_below(faces, n, m)
    }

    /// `P(X_(n-1) < m) = ((m-1)/faces)^n + n ((faces+1-m)/faces) ((m-1)/faces)^(n-1)`
    pub fn second_below(faces: u32, n: u32, m: u32) -> Rational {
        assert!(n >= 2, "second largest needs two dice");
        let lower = frac(m as i64 - 1, faces);
        let upper = frac(faces as i64 + 1 - m as i64, faces);
        pow(&lower, n) + Rational::from_integer(n.into()) * upper * pow(&lower, n - 1)
    }

    /// `P(X_(n-1) = m)`
    pub fn second_pmf(faces: u32, n: u32, m: u32) -> Rational {
        assert!(n >= 2, "second largest needs two dice");
        let at = frac(m as i64, faces);
        let lower = frac(m as i64 - 1, faces);
        let upper = frac(faces as i64 + 1 - m as i64, faces);
        let n_r = Rational::from_integer(n.into());
        pow(&at, n) - pow(&lower, n)
            + n_r * ((Rational::one() - &at) * pow(&at, n - 1) - upper * pow(&lower, n - 1))
    }
}

/// Calls `visit` once for each of the `faces^count` ordered rolls.
pub(crate) fn for_each_roll(faces: u32, count: usize, mut visit: impl FnMut(&[u32])) {
    let mut roll = vec![1u32; count];
    loop {
        visit(&roll);
        let mut i = 0;
        loop {
            if i == count {
                return;
            }
            if roll[i] < faces {
                roll[i] += 1;
                break;
            }
            roll[i] = 1;
            i += 1;
        }
    }
}

type JointCache = RwLock<HashMap<DieSpec, Arc<Dist<(u32, u32)>>>>;

fn joint_cache() -> &'static JointCache {
    static CACHE: OnceLock<JointCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Joint law of `(highest, second highest)` face among `die.count()` dice,
/// by exhaustive enumeration. Cached per die spec.
pub fn top_two_joint_pmf(die: DieSpec) -> Result<Arc<Dist<(u32, u32)>>> {
    if die.count < 2 {
        return Err(Error::domain(
            "count",
            "top-two law needs at least two dice",
        ));
    }
    if die.outcomes() > MAX_ENUMERATED_OUTCOMES {
        return Err(Error::domain(
            "count",
            format!(
                "{}^{} outcomes is too many to enumerate",
                die.faces, die.count
            ),
        ));
    }
    if let Some(hit) = joint_cache().read().unwrap().get(&die) {
        return Ok(Arc::clone(hit));
    }

    let mut counts: HashMap<(u32, u32), u64> = HashMap::new();
    for_each_roll(die.faces, die.count as usize, |roll| {
        let (mut first, mut second) = (0, 0);
        for &v in roll {
            if v > first {
                second = first;
                first = v;
            } else if v > second {
                second = v;
            }
        }
        *counts.entry((first, second)).or_default() += 1;
    });
    let total = BigInt::from(die.outcomes());
    let joint: Dist<(u32, u32)> = counts
        .into_iter()
        .map(|(pair, c)| (pair, Rational::new(BigInt::from(c), total.clone())))
        .collect();

    let mut cache = joint_cache().write().unwrap();
    Ok(Arc::clone(
        cache.entry(die).or_insert_with(|| Arc::new(joint)),
    ))
}

/// Probability that the best attacking die beats the best defending die,
/// ties going to the defender.
pub fn attacker_wins_best(attack_dice: u32, defence_dice: u32, faces: u32) -> Result<Rational> {
    if attack_dice == 0 {
        return Err(Error::domain("attack_dice", "need at least one die"));
    }
    if defence_dice == 0 {
        return Err(Error::domain("defence_dice", "need at least one die"));
    }
    if faces == 0 {
        return Err(Error::domain("faces", "a die needs at least one face"));
    }
    let numer = (2..=faces as u64).fold(BigInt::zero(), |acc, m| {
        let m = BigInt::from(m);
        let below = &m - 1u32;
        acc + num_traits::pow(m, attack_dice as usize)
            * num_traits::pow(below.clone(), defence_dice as usize)
            - num_traits::pow(below, (attack_dice + defence_dice) as usize)
    });
    let denom = num_traits::pow(BigInt::from(faces), (attack_dice + defence_dice) as usize);
    Ok(Rational::new(numer, denom))
}
