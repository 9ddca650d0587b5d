use std::collections::BTreeSet;

use cu_combinatorics::binom_mod2;

use crate::bar::{bar_rewrite, BarElement};

/// $\mathrm{Sq}^r_*$ applied to $Q^{ops} \iota$ before any rewriting, via
/// $\mathrm{Sq}^r_* Q^s = \sum_t \binom{s-r}{r-2t} Q^{s-r+t} \mathrm{Sq}^t_*$.
fn sq_raw(r: i64, ops: &[i64], out: &mut BTreeSet<Vec<i64>>, prefix: &mut Vec<i64>) {
    let Some((&s, rest)) = ops.split_first() else {
        if r == 0 && !out.remove(prefix.as_slice()) {
            out.insert(prefix.clone());
        }
        return;
    };
    for t in 0..=(r / 2) {
        if binom_mod2(s - r, r - 2 * t) == 0 {
            continue;
        }
        prefix.push(s - r + t);
        sq_raw(t, rest, out, prefix);
        prefix.pop();
    }
}

/// The dual Steenrod operation $\mathrm{Sq}^r_*$ on $\bar{\mathcal{R}}_n$,
/// computed by the Nishida relations (reading $\bar{Q}^s$ as $Q^s$) and then
/// rewritten to normal form. Lowers degree by exactly `r`.
pub fn nishida_action(r: i64, e: &BarElement) -> BarElement {
    let mut raw = BarElement::zero(e.base_weight);
    if r < 0 {
        return raw;
    }
    for ops in &e.support {
        let mut acc = BTreeSet::new();
        sq_raw(r, ops, &mut acc, &mut Vec::new());
        for m in acc {
            raw.toggle(m);
        }
    }
    bar_rewrite(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn act(r: i64, ops: &[i64]) -> Vec<Vec<i64>> {
        nishida_action(r, &BarElement::monomial(ops.to_vec(), 1))
            .support
            .into_iter()
            .collect()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(act(2, &[4]), vec![vec![2]]);
        assert_eq!(act(4, &[9, 4]), vec![vec![7, 2]]);
        assert_eq!(act(2, &[9, 2]), vec![vec![7, 2], vec![8, 1]]);
        let sq1 = nishida_action(1, &BarElement::monomial(vec![6], 1));
        let sq2sq1 = nishida_action(2, &sq1);
        assert_eq!(sq2sq1.support.into_iter().collect::<Vec<_>>(), vec![vec![3]]);
    }

    #[test]
    fn sq0_is_identity() {
        let e = BarElement::monomial(vec![9, 4], 1);
        assert_eq!(nishida_action(0, &e), e);
    }
}
