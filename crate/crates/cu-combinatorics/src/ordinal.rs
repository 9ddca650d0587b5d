use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// An exponent $\beta$ of a term $c\,\omega^\beta$; ordered
/// $0 < 1 < \cdots < \omega < \omega + 1$.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u32),
    Omega,
    OmegaPlusOne,
}

/// An element $\sum_\beta c_\beta \omega^\beta$ of the Grothendieck group
/// $\mathcal{G}(\omega^{\omega+2})$.
///
/// Comparison is right-lexicographic: the coefficient of the largest
/// exponent at which two elements differ decides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OrdinalIndex {
    terms: BTreeMap<Exponent, i64>,
}

impl OrdinalIndex {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(exp: Exponent, coeff: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(exp, coeff);
        out
    }

    pub fn add_term(&mut self, exp: Exponent, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: Exponent) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// The largest exponent with a nonzero coefficient.
    pub fn leading_exponent(&self) -> Option<Exponent> {
        self.terms.keys().next_back().copied()
    }
}

impl PartialOrd for OrdinalIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdinalIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.clone() - other.clone();
        match diff.terms.iter().next_back() {
            None => Ordering::Equal,
            Some((_, &c)) => c.cmp(&0),
        }
    }
}

impl Add for OrdinalIndex {
    type Output = OrdinalIndex;

    fn add(mut self, rhs: Self) -> Self::Output {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Neg for OrdinalIndex {
    type Output = OrdinalIndex;

    fn neg(mut self) -> Self::Output {
        for c in self.terms.values_mut() {
            *c = -*c;
        }
        self
    }
}

impl Sub for OrdinalIndex {
    type Output = OrdinalIndex;

    fn sub(self, rhs: Self) -> Self::Output {
        self + (-rhs)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(i) => write!(f, "{i}"),
            Exponent::Omega => write!(f, "ω"),
            Exponent::OmegaPlusOne => write!(f, "ω+1"),
        }
    }
}

impl fmt::Display for OrdinalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let sign = if *c < 0 { "-" } else if first { "" } else { "+" };
            let abs = c.abs();
            match e {
                Exponent::Finite(0) => write!(f, "{sign}{abs}")?,
                Exponent::Finite(1) => write!(f, "{sign}{abs}ω")?,
                _ => write!(f, "{sign}{abs}ω^{e}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_lex() {
        let a = OrdinalIndex::term(Exponent::Omega, -2);
        let b = OrdinalIndex::term(Exponent::Omega, -1) + OrdinalIndex::term(Exponent::Finite(0), -100);
        assert!(a < b);
        let c = OrdinalIndex::term(Exponent::Finite(1), 1);
        let d = OrdinalIndex::term(Exponent::Finite(0), 1000);
        assert!(d < c);
    }

    #[test]
    fn zero_coefficients_dropped() {
        let mut a = OrdinalIndex::term(Exponent::Omega, 3);
        a.add_term(Exponent::Omega, -3);
        assert!(a.is_zero());
        assert_eq!(a, OrdinalIndex::zero());
    }

    #[test]
    fn display() {
        let a = OrdinalIndex::term(Exponent::Finite(0), 3)
            + OrdinalIndex::term(Exponent::Finite(1), 1)
            + OrdinalIndex::term(Exponent::Omega, -2);
        assert_eq!(a.to_string(), "-2ω^ω+1ω+3");
    }
}
