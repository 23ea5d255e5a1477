//! Exact finite probability distributions.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Finite distribution with exact rational masses, keyed by outcome.
///
/// Zero masses are never stored, so the support is exactly the key set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dist<K: Ord = u32> {
    masses: BTreeMap<K, Rational>,
}

impl<K: Ord> Default for Dist<K> {
    fn default() -> Self {
        Self {
            masses: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Dist<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn point(outcome: K) -> Self {
        let mut dist = Self::new();
        dist.add_mass(outcome, Rational::one());
        dist
    }

    /// Adds `mass` to `outcome`, dropping the entry if it cancels to zero.
    pub fn add_mass(&mut self, outcome: K, mass: Rational) {
        if mass.is_zero() {
            return;
        }
        let entry = self
            .masses
            .entry(outcome.clone())
            .or_insert_with(Rational::zero);
        *entry += mass;
        if entry.is_zero() {
            self.masses.remove(&outcome);
        }
    }

    /// Probability of `outcome` (zero outside the support).
    pub fn mass(&self, outcome: &K) -> Rational {
        self.masses
            .get(outcome)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.masses
            .values()
            .fold(Rational::zero(), |acc, p| acc + p)
    }

    pub fn is_normalized(&self) -> bool {
        self.total().is_one()
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.masses.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.masses.keys()
    }

    /// Push-forward through `f`; outcomes mapped to the same key merge.
    pub fn map<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> J) -> Dist<J> {
        let mut out = Dist::new();
        for (k, p) in &self.masses {
            out.add_mass(f(k), p.clone());
        }
        out
    }

    /// Total mass of outcomes satisfying `pred`.
    pub fn probability(&self, mut pred: impl FnMut(&K) -> bool) -> Rational {
        self.masses
            .iter()
            .filter(|(k, _)| pred(k))
            .fold(Rational::zero(), |acc, (_, p)| acc + p)
    }

    /// Restriction to outcomes satisfying `pred`, rescaled to total mass one.
    /// Returns an empty distribution when the event has probability zero.
    pub fn conditional(&self, mut pred: impl FnMut(&K) -> bool) -> Dist<K> {
        let event = self.probability(&mut pred);
        if event.is_zero() {
            return Dist::new();
        }
        let mut out = Dist::new();
        for (k, p) in self.masses.iter().filter(|(k, _)| pred(k)) {
            out.add_mass(k.clone(), p / &event);
        }
        out
    }

    /// Adds `weight * other` into `self`.
    pub fn accumulate(&mut self, other: &Dist<K>, weight: &Rational) {
        for (k, p) in &other.masses {
            self.add_mass(k.clone(), p * weight);
        }
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rational)> for Dist<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rational)>>(iter: I) -> Self {
        let mut dist = Dist::new();
        for (k, p) in iter {
            dist.add_mass(k, p);
        }
        dist
    }
}
