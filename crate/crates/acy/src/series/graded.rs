//! Finite graded dimensions, stored as Laurent polynomials with integer
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// sum_d dims[d] t^d. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedDims(BTreeMap<i64, i64>);

impl GradedDims {
    pub fn zero() -> Self {
        GradedDims::default()
    }

    pub fn monomial(k: i64, d: i64) -> Self {
        let mut g = GradedDims::zero();
        g.add_term(d, k);
        g
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut g = GradedDims::zero();
        for (d, k) in terms {
            g.add_term(d, k);
        }
        g
    }

    pub fn add_term(&mut self, d: i64, k: i64) {
        let e = self.0.entry(d).or_insert(0);
        *e += k;
        if *e == 0 {
            self.0.remove(&d);
        }
    }

    pub fn get(&self, d: i64) -> i64 {
        self.0.get(&d).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.iter().map(|(&d, &k)| (d, k))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.0.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }

    /// M[s]: multiply by t^s.
    pub fn shift(&self, s: i64) -> Self {
        GradedDims(self.0.iter().map(|(&d, &k)| (d + s, k)).collect())
    }

    /// M*[s]: t^s M(1/t).
    pub fn dual_shift(&self, s: i64) -> Self {
        GradedDims(self.0.iter().map(|(&d, &k)| (s - d, k)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (d, k) in o.terms() {
            r.add_term(d, k);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (d, k) in o.terms() {
            r.add_term(d, -k);
        }
        r
    }

    pub fn scale(&self, c: i64) -> Self {
        GradedDims::from_terms(self.terms().map(|(d, k)| (d, k * c)))
    }

    /// Terms of degree at most `max`.
    pub fn truncate(&self, max: i64) -> Self {
        GradedDims(self.0.range(..=max).map(|(&d, &k)| (d, k)).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.values().all(|&k| k > 0)
    }
}

impl fmt::Display for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (d, k)) in self.terms().enumerate() {
            let a = k.abs();
            match (i, k < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match (d, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{a}t")?,
                (_, 1) => write!(f, "t^{d}")?,
                _ => write!(f, "{a}t^{d}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_and_shift() {
        let c = GradedDims::from_terms([(1, 2), (2, 1), (3, 1), (5, 1)]);
        assert_eq!(c.dual_shift(8), GradedDims::from_terms([(7, 2), (6, 1), (5, 1), (3, 1)]));
        assert_eq!(c.shift(2).get(3), 2);
        assert_eq!(c.to_string(), "2t + t^2 + t^3 + t^5");
        assert!(c.sub(&c).is_zero());
    }

    #[test]
    fn negative_display() {
        assert_eq!(GradedDims::from_terms([(0, -1), (-2, 3)]).to_string(), "3t^-2 - 1");
    }
}
