use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CuError {
    #[error("sequence {0:?} is not completely unadmissible")]
    NotCu(Vec<i64>),
    #[error("cannot concatenate {left} and {right}: junction is not CU")]
    ConcatenationNotCU { left: CuSeq, right: CuSeq },
}

/// Returns true iff every adjacent pair satisfies $j_s \geq 2 j_{s+1} + 1$.
pub fn cu_is_valid(seq: &[i64]) -> bool {
    seq.windows(2).all(|w| w[0] > 2 * w[1])
}

/// The excess of a CU sequence: its last entry, or $+\infty$ for the empty
/// sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Excess {
    Finite(i64),
    Infinite,
}

impl Excess {
    pub fn at_least(self, n: i64) -> bool {
        match self {
            Excess::Finite(e) => e >= n,
            Excess::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Excess::Finite(e) => Some(e),
            Excess::Infinite => None,
        }
    }
}

impl PartialOrd for Excess {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Excess {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Excess::Finite(a), Excess::Finite(b)) => a.cmp(b),
            (Excess::Finite(_), Excess::Infinite) => Ordering::Less,
            (Excess::Infinite, Excess::Finite(_)) => Ordering::Greater,
            (Excess::Infinite, Excess::Infinite) => Ordering::Equal,
        }
    }
}

/// A completely unadmissible sequence $J = (j_1, \ldots, j_k)$.
///
/// The total order is the one used for cells: longer sequences are smaller,
/// and sequences of equal length are compared right-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CuSeq {
    entries: Vec<i64>,
}

impl CuSeq {
    pub fn new(entries: Vec<i64>) -> Result<Self, CuError> {
        if cu_is_valid(&entries) {
            Ok(Self { entries })
        } else {
            Err(CuError::NotCu(entries))
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(j: i64) -> Self {
        Self { entries: vec![j] }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// The length $|J|$.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The degree $\|J\| = \sum_s j_s$.
    pub fn degree(&self) -> i64 {
        self.entries.iter().sum()
    }

    pub fn excess(&self) -> Excess {
        match self.entries.last() {
            Some(&e) => Excess::Finite(e),
            None => Excess::Infinite,
        }
    }

    pub fn first(&self) -> Option<i64> {
        self.entries.first().copied()
    }

    /// The concatenation $[J, J']$.
    pub fn concat(&self, other: &CuSeq) -> Result<CuSeq, CuError> {
        if let (Some(&e), Some(&j1)) = (self.entries.last(), other.entries.first()) {
            if e < 2 * j1 + 1 {
                return Err(CuError::ConcatenationNotCU {
                    left: self.clone(),
                    right: other.clone(),
                });
            }
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(CuSeq { entries })
    }

    /// $[J, n]$, appending a single entry.
    pub fn push(&self, n: i64) -> Result<CuSeq, CuError> {
        self.concat(&CuSeq::single(n))
    }

    /// Drops the last entry, returning it together with the remaining prefix.
    pub fn split_last(&self) -> Option<(CuSeq, i64)> {
        let (&last, rest) = self.entries.split_last()?;
        Some((
            CuSeq {
                entries: rest.to_vec(),
            },
            last,
        ))
    }
}

impl PartialOrd for CuSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CuSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .len()
            .cmp(&self.len())
            .then_with(|| self.entries.iter().rev().cmp(other.entries.iter().rev()))
    }
}

impl fmt::Display for CuSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, j) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "]")
    }
}
