use std::collections::BTreeSet;
use std::fmt;

use cu_combinatorics::{binom_mod2, cu_is_valid};

/// A monomial $\bar{Q}^{s_1} \cdots \bar{Q}^{s_k} \iota_n$.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarMonomial {
    pub ops: Vec<i64>,
    pub base_weight: i64,
}

impl BarMonomial {
    pub fn new(ops: Vec<i64>, base_weight: i64) -> Self {
        Self { ops, base_weight }
    }

    /// Internal degree $n + \sum_i (s_i - 1)$.
    pub fn degree(&self) -> i64 {
        self.base_weight + self.ops.iter().map(|s| s - 1).sum::<i64>()
    }

    pub fn is_normal(&self) -> bool {
        cu_is_valid(&self.ops) && self.ops.last().is_none_or(|&e| e >= self.base_weight)
    }
}

/// An element of $\bar{\mathcal{R}}_n$: a sum of monomials over
/// $\mathbb{F}_2$, stored as the set of monomials with coefficient one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BarElement {
    pub base_weight: i64,
    pub support: BTreeSet<Vec<i64>>,
}

impl BarElement {
    pub fn zero(base_weight: i64) -> Self {
        Self {
            base_weight,
            support: BTreeSet::new(),
        }
    }

    pub fn monomial(ops: Vec<i64>, base_weight: i64) -> Self {
        let mut out = Self::zero(base_weight);
        out.support.insert(ops);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Adds a monomial with coefficient one.
    pub fn toggle(&mut self, ops: Vec<i64>) {
        if !self.support.remove(&ops) {
            self.support.insert(ops);
        }
    }

    pub fn add(&mut self, other: &BarElement) {
        for m in &other.support {
            self.toggle(m.clone());
        }
    }

    pub fn monomials(&self) -> impl Iterator<Item = BarMonomial> + '_ {
        self.support
            .iter()
            .map(move |ops| BarMonomial::new(ops.clone(), self.base_weight))
    }
}

impl fmt::Display for BarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_empty() {
                write!(f, "ι")?;
            }
            for s in m {
                write!(f, "Q̄^{s}")?;
            }
        }
        Ok(())
    }
}

/// Which violating adjacent pair relation (2) is applied to first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Rightmost,
    Leftmost,
}

/// Relation (1) on every contiguous factor: $\bar{Q}^{j_a} \cdots \bar{Q}^{j_b}$
/// vanishes when $j_a < j_{a+1} + \cdots + j_b + n$.
fn killed_by_excess(ops: &[i64], n: i64) -> bool {
    for a in 0..ops.len() {
        let mut tail = 0;
        for b in a..ops.len() {
            if b > a {
                tail += ops[b];
            }
            if ops[a] < tail + n {
                return true;
            }
        }
    }
    false
}

fn violating_pair(ops: &[i64], strategy: Strategy) -> Option<usize> {
    let hit = |i: &usize| {
        let (r, s) = (ops[*i], ops[*i + 1]);
        s < r && r <= 2 * s
    };
    let n = ops.len().saturating_sub(1);
    match strategy {
        Strategy::Rightmost => (0..n).rev().find(hit),
        Strategy::Leftmost => (0..n).find(hit),
    }
}

/// Rewrites to the basis of CU monomials with excess at least $n$, using
/// relation (2) for adjacent pairs $s < r \leq 2s$:
/// $\bar{Q}^r \bar{Q}^s = \sum_{\ell=0}^{r-s-1} \binom{2s-r+1+2\ell}{\ell} \bar{Q}^{2s+1+\ell} \bar{Q}^{r-s-1-\ell}$.
pub fn bar_rewrite_with(e: &BarElement, strategy: Strategy) -> BarElement {
    let n = e.base_weight;
    let mut pending: BTreeSet<Vec<i64>> = e.support.clone();
    let mut out = BarElement::zero(n);
    while let Some(ops) = pending.pop_first() {
        if killed_by_excess(&ops, n) {
            continue;
        }
        let Some(i) = violating_pair(&ops, strategy) else {
            debug_assert!(cu_is_valid(&ops));
            out.toggle(ops);
            continue;
        };
        let (r, s) = (ops[i], ops[i + 1]);
        for l in 0..=(r - s - 1) {
            if binom_mod2(2 * s - r + 1 + 2 * l, l) == 0 {
                continue;
            }
            let mut next = ops.clone();
            next[i] = 2 * s + 1 + l;
            next[i + 1] = r - s - 1 - l;
            if !pending.remove(&next) {
                pending.insert(next);
            }
        }
    }
    out
}

/// Normal form in $\bar{\mathcal{R}}_n$, rewriting the rightmost violating
/// pair first.
pub fn bar_rewrite(e: &BarElement) -> BarElement {
    bar_rewrite_with(e, Strategy::Rightmost)
}
