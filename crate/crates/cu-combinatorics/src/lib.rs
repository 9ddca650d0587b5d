//! Combinatorial primitives shared by the rest of the workspace.
//!
//! * [`binom_mod2`] evaluates binomial coefficients modulo 2 for arbitrary
//!   integer arguments, as coefficients of the power series $(1+t)^a$.
//! * [`CuSeq`] is a completely unadmissible (CU) sequence
//!   $(j_1, \ldots, j_k)$ with $j_s \geq 2 j_{s+1} + 1$.
//! * [`OrdinalIndex`] is an element of the Grothendieck group of ordinals
//!   below $\omega^{\omega+2}$, used to index transfinite filtrations.

mod binomial;
mod cu;
mod ordinal;

pub use binomial::binom_mod2;
pub use cu::{cu_is_valid, CuError, CuSeq, Excess};
pub use ordinal::{Exponent, OrdinalIndex};

/// Filtration index of the cell `[J]` in the transfinite Atiyah–Hirzebruch
/// spectral sequence: $\mu(J) = \sum_s j_s \omega^{s-1}$.
pub fn mu_tahss(j: &CuSeq) -> OrdinalIndex {
    let mut mu = OrdinalIndex::zero();
    for (s, &js) in j.entries().iter().enumerate() {
        mu.add_term(Exponent::Finite(s as u32), js);
    }
    mu
}

/// Filtration index of the cell `[J]` in the transfinite Goodwillie spectral
/// sequence: $\mu[J] = \mu(J) - |J| \omega^\omega$.
pub fn mu_tgss(j: &CuSeq) -> OrdinalIndex {
    let mut mu = mu_tahss(j);
    mu.add_term(Exponent::Omega, -(j.len() as i64));
    mu
}

/// Filtration index of the cell `[J, m]` in the transfinite EHP spectral
/// sequence: $\mu\langle J, m\rangle = \mu[J] + m \omega^{\omega+1}$.
///
/// Returns `None` unless `e(J) >= 2m + 1` and `m >= 0`.
pub fn mu_tehpss(j: &CuSeq, m: i64) -> Option<OrdinalIndex> {
    if m < 0 || !j.excess().at_least(2 * m + 1) {
        return None;
    }
    let mut mu = mu_tgss(j);
    mu.add_term(Exponent::OmegaPlusOne, m);
    Some(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cu(v: &[i64]) -> CuSeq {
        CuSeq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_tgss(&CuSeq::empty()), OrdinalIndex::zero());
        let mut expected = OrdinalIndex::zero();
        expected.add_term(Exponent::Finite(0), 3);
        expected.add_term(Exponent::Finite(1), 1);
        expected.add_term(Exponent::Omega, -2);
        assert_eq!(mu_tgss(&cu(&[3, 1])), expected);
        assert!(mu_tgss(&cu(&[15, 3])) < mu_tgss(&cu(&[4])));
    }

    #[test]
    fn mu_tehpss_requires_excess() {
        assert!(mu_tehpss(&cu(&[9, 4]), 1).is_some());
        assert!(mu_tehpss(&cu(&[9, 4]), 2).is_none());
        assert!(mu_tehpss(&CuSeq::empty(), 7).is_some());
        let a = mu_tehpss(&cu(&[4]), 1).unwrap();
        let b = mu_tehpss(&CuSeq::empty(), 2).unwrap();
        assert!(a < b);
    }
}
