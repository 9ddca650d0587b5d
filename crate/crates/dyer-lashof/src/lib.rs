//! The algebras of operations acting on the homology of the Goodwillie
//! layers.
//!
//! * [`BarElement`] lives in $\bar{\mathcal{R}}_n$: sums of monomials
//!   $\bar{Q}^{s_1} \cdots \bar{Q}^{s_k} \iota_n$, normalised to the basis of
//!   completely unadmissible monomials by [`bar_rewrite`].
//! * [`AdmMonomial`] and [`adem_rewrite`] implement the admissible
//!   Dyer–Lashof algebra $\mathcal{R}_n$.
//! * [`nishida_action`] computes the dual Steenrod operations
//!   $\mathrm{Sq}^r_*$ on $\bar{\mathcal{R}}_n$.
//! * [`transfer_length2`] is the length two transfer formula relating
//!   $Q^r Q^s$ to wreath words $Q^{r'} \wr Q^{s'}$.

mod adem;
mod bar;
mod nishida;

pub use adem::{adem_rewrite, AdmMonomial, AdmSum};
pub use bar::{bar_rewrite, bar_rewrite_with, BarElement, BarMonomial, Strategy};
pub use nishida::nishida_action;

use cu_combinatorics::binom_mod2;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DlError {
    #[error("transfer formula needs s < r <= 2s, got r={r}, s={s}")]
    NotInAdemRange { r: i64, s: i64 },
}

/// A formal wreath word $Q^{j_1} \wr \cdots \wr Q^{j_k}$.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathMonomial {
    pub ops: Vec<i64>,
    pub base_weight: i64,
}

impl WreathMonomial {
    /// The excess condition $j_s \geq j_{s+1} + \cdots + j_k + n$ at every
    /// position.
    pub fn is_allowable(&self) -> bool {
        (0..self.ops.len()).all(|s| self.ops[s] >= self.ops[s + 1..].iter().sum::<i64>() + self.base_weight)
    }
}

/// Expresses $Q^r Q^s$ with $s < r \leq 2s$ in terms of wreath words:
/// $Q^r \wr Q^s + \sum_{\ell} \binom{2s-r+1+2\ell}{\ell} Q^{2s+1+\ell} \wr Q^{r-s-1-\ell}$.
///
/// The first entry of the result is always $Q^r \wr Q^s$; the remaining
/// correction terms all satisfy $r' \geq 2 s' + 1$.
pub fn transfer_length2(r: i64, s: i64) -> Result<Vec<WreathMonomial>, DlError> {
    if !(s < r && r <= 2 * s) {
        return Err(DlError::NotInAdemRange { r, s });
    }
    let mut out = vec![WreathMonomial {
        ops: vec![r, s],
        base_weight: 0,
    }];
    for l in 0..=(r - s - 1) {
        if binom_mod2(2 * s - r + 1 + 2 * l, l) == 1 {
            out.push(WreathMonomial {
                ops: vec![2 * s + 1 + l, r - s - 1 - l],
                base_weight: 0,
            });
        }
    }
    Ok(out)
}

/// The effect of the $t$-fold suspension on $Q^j \sigma^{-t} y$: returns 1 iff
/// $j \geq |y|$, in which case the class maps to $\sigma^{-t} Q^j y$, and 0 when
/// it maps to zero.
pub fn suspension_truncate(_t: i64, j: i64, y_degree: i64) -> u8 {
    (j >= y_degree) as u8
}
