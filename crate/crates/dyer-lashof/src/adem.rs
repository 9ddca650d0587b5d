use std::collections::BTreeSet;

use cu_combinatorics::binom_mod2;

/// A monomial $Q^{j_1} \cdots Q^{j_k}$ in $\mathcal{R}_n$.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmMonomial {
    pub ops: Vec<i64>,
    pub base_weight: i64,
}

impl AdmMonomial {
    pub fn is_admissible(&self) -> bool {
        self.ops.windows(2).all(|w| w[0] <= 2 * w[1])
    }

    /// $j_1 - (j_2 + \cdots + j_k)$; infinite (here `i64::MAX`) when empty.
    pub fn excess(&self) -> i64 {
        match self.ops.split_first() {
            None => i64::MAX,
            Some((j1, rest)) => j1 - rest.iter().sum::<i64>(),
        }
    }
}

/// A sum of monomials over $\mathbb{F}_2$ with a common base weight.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdmSum {
    pub base_weight: i64,
    pub support: BTreeSet<Vec<i64>>,
}

impl AdmSum {
    pub fn monomial(ops: Vec<i64>, base_weight: i64) -> Self {
        let mut support = BTreeSet::new();
        support.insert(ops);
        Self {
            base_weight,
            support,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }
}

fn excess_deficient(ops: &[i64], n: i64) -> bool {
    ops.iter().any(|&j| j < 0)
        || match ops.split_first() {
            None => false,
            Some((j1, rest)) => *j1 < rest.iter().sum::<i64>() + n,
        }
}

/// Rewrites to admissible form using the Adem relations
/// $Q^r Q^s = \sum_t \binom{t+s-r}{2t-r} Q^{r+s-t} Q^t$ for $r > 2s$, dropping
/// monomials that violate the leading excess rule of $\mathcal{R}_n$.
pub fn adem_rewrite(m: &AdmSum) -> AdmSum {
    let n = m.base_weight;
    let mut pending = m.support.clone();
    let mut out = AdmSum {
        base_weight: n,
        support: BTreeSet::new(),
    };
    while let Some(ops) = pending.pop_first() {
        if excess_deficient(&ops, n) {
            continue;
        }
        let Some(i) = (0..ops.len().saturating_sub(1)).rev().find(|&i| ops[i] > 2 * ops[i + 1]) else {
            if !out.support.remove(&ops) {
                out.support.insert(ops);
            }
            continue;
        };
        let (r, s) = (ops[i], ops[i + 1]);
        for t in ((r + 1) / 2)..=(r + s) {
            if binom_mod2(t + s - r, 2 * t - r) == 0 {
                continue;
            }
            let mut next = ops.clone();
            next[i] = r + s - t;
            next[i + 1] = t;
            if !pending.remove(&next) {
                pending.insert(next);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rw(ops: &[i64]) -> Vec<Vec<i64>> {
        adem_rewrite(&AdmSum::monomial(ops.to_vec(), 0))
            .support
            .into_iter()
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(rw(&[2, 2]), vec![vec![2, 2]]);
        assert!(rw(&[5, 2]).is_empty());
        assert!(rw(&[3, 1]).is_empty());
    }

    #[test]
    fn output_admissible() {
        for r in 0..20 {
            for s in 0..10 {
                let out = adem_rewrite(&AdmSum::monomial(vec![r, s], 0));
                for ops in out.support {
                    let m = AdmMonomial { ops, base_weight: 0 };
                    assert!(m.is_admissible() && m.excess() >= 0);
                    assert_eq!(m.ops.iter().sum::<i64>(), r + s);
                }
            }
        }
    }
}
