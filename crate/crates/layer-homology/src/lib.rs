//! Homology of the layers $L(k)_n$ as cell sets.
//!
//! $H_*(L(k)_n)$ has one basis element $[J]$ for every CU sequence $J$ of
//! length $k$ and excess at least $n$, sitting in degree $\|J\|$. The maps of
//! the fiber sequence
//! $\Sigma^n L(k-1)_{2n+1} \xrightarrow{P} L(k)_n \xrightarrow{E} L(k)_{n+1}$
//! act on cells by [`p_star`] and [`e_star`]; the dual Steenrod action comes
//! from the Nishida relations.

use cu_combinatorics::{CuError, CuSeq, Excess};
use dyer_lashof::{nishida_action, BarElement};

/// A homology cell $[J] \in H_{\|J\|}(L(|J|)_n)$.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub seq: CuSeq,
    pub n: i64,
}

impl Cell {
    pub fn new(seq: CuSeq, n: i64) -> Option<Self> {
        seq.excess().at_least(n).then_some(Self { seq, n })
    }

    pub fn k(&self) -> usize {
        self.seq.len()
    }

    pub fn degree(&self) -> i64 {
        self.seq.degree()
    }
}

/// Visits all CU sequences of length `k` with `lo <= e(J) <= hi` and
/// degree `d`, building sequences from the right.
fn enumerate(k: usize, lo: i64, hi: Option<i64>, d: i64, out: &mut Vec<CuSeq>) {
    fn go(remaining: usize, min_next: i64, budget: i64, suffix: &mut Vec<i64>, out: &mut Vec<CuSeq>) {
        if remaining == 0 {
            if budget == 0 {
                let mut v = suffix.clone();
                v.reverse();
                out.push(CuSeq::new(v).expect("built CU"));
            }
            return;
        }
        // The remaining entries are each at least double the one to their
        // right, so the next entry x forces a total of at least x*(2^r - 1).
        let weight = (1i64 << remaining) - 1;
        let mut x = min_next;
        while x * weight <= budget {
            suffix.push(x);
            go(remaining - 1, 2 * x + 1, budget - x, suffix, out);
            suffix.pop();
            x += 1;
        }
    }
    if k == 0 {
        if d == 0 {
            out.push(CuSeq::empty());
        }
        return;
    }
    let mut suffix = Vec::new();
    let mut last = lo.max(0);
    while last <= d && hi.is_none_or(|h| last <= h) {
        suffix.push(last);
        go(k - 1, 2 * last + 1, d - last, &mut suffix, out);
        suffix.pop();
        last += 1;
    }
}

/// Cells of $L(k)_n$ (or of $L(k)_n^m$ when `m` is given) in degree `d`:
/// CU sequences of length `k`, degree `d`, and `n <= e(J) (<= m)`.
/// Returned in increasing cell order.
pub fn basis(k: usize, n: i64, m: Option<i64>, d: i64) -> Vec<CuSeq> {
    let mut out = Vec::new();
    enumerate(k, n, m, d, &mut out);
    out.sort();
    out
}

/// The $P$ map on cells: $[J] \mapsto [J, n]$.
pub fn p_star(j: &CuSeq, n: i64) -> Result<CuSeq, CuError> {
    j.push(n)
}

/// The $E$ map on cells: zero if $e(J) = n$, otherwise the same cell in
/// $L(k)_{n+1}$.
pub fn e_star(j: &CuSeq, n: i64) -> Option<CuSeq> {
    match j.excess() {
        Excess::Finite(e) if e == n => None,
        _ => Some(j.clone()),
    }
}

/// $\mathrm{Sq}^r_*$ on the cell $[J]$ of $L(|J|)_n$, as the set of cells in
/// the support of the result.
pub fn steenrod_on_cell(r: i64, j: &CuSeq, n: i64) -> Vec<CuSeq> {
    let e = BarElement::monomial(j.entries().to_vec(), n);
    let mut out: Vec<CuSeq> = nishida_action(r, &e)
        .support
        .into_iter()
        .map(|ops| CuSeq::new(ops).expect("normal form is CU"))
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cu(v: &[i64]) -> CuSeq {
        CuSeq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn basis_examples() {
        assert_eq!(basis(2, 1, None, 4), vec![cu(&[3, 1])]);
        assert_eq!(basis(3, 1, None, 11), vec![cu(&[7, 3, 1])]);
        assert_eq!(basis(2, 1, None, 7), vec![cu(&[6, 1]), cu(&[5, 2])]);
        assert_eq!(basis(0, 1, None, 0), vec![CuSeq::empty()]);
        assert!(basis(0, 1, None, 3).is_empty());
    }

    #[test]
    fn maps() {
        assert_eq!(p_star(&cu(&[9]), 4).unwrap(), cu(&[9, 4]));
        assert_eq!(p_star(&CuSeq::empty(), 3).unwrap(), cu(&[3]));
        assert_eq!(p_star(&cu(&[5]), 2).unwrap(), cu(&[5, 2]));
        assert!(p_star(&cu(&[5]), 3).is_err());
        assert_eq!(e_star(&cu(&[9, 4]), 4), None);
        assert_eq!(e_star(&cu(&[9, 4]), 3), Some(cu(&[9, 4])));
        assert_eq!(e_star(&cu(&[5]), 5), None);
    }

    #[test]
    fn steenrod_examples() {
        assert_eq!(steenrod_on_cell(1, &cu(&[6, 1]), 1), vec![cu(&[5, 1])]);
        assert_eq!(steenrod_on_cell(4, &cu(&[9, 4]), 1), vec![cu(&[7, 2])]);
        assert_eq!(steenrod_on_cell(2, &cu(&[9, 2]), 1), vec![cu(&[8, 1]), cu(&[7, 2])]);
        assert_eq!(steenrod_on_cell(0, &cu(&[9, 2]), 1), vec![cu(&[9, 2])]);
    }
}
