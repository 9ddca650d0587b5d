use dyer_lashof::{
    adem_rewrite, bar_rewrite, bar_rewrite_with, nishida_action, AdmSum, BarElement, Strategy as Rewrite,
};
use proptest::prelude::*;

fn element_strategy() -> impl Strategy<Value = BarElement> {
    (1i64..4, 1usize..4, prop::collection::vec(0i64..14, 3), 1usize..3).prop_flat_map(
        |(n, len, first, count)| {
            let degree: i64 = first.iter().take(len).map(|s| s - 1).sum();
            // A handful of monomials of the same length and degree as `first`.
            prop::collection::vec(prop::collection::vec(0i64..14, len - 1), count).prop_map(
                move |others| {
                    let mut e = BarElement::monomial(first[..len].to_vec(), n);
                    for mut head in others {
                        let last = degree - head.iter().map(|s| s - 1).sum::<i64>() + 1;
                        head.push(last);
                        e.support.insert(head);
                    }
                    e
                },
            )
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn rewrite_idempotent(e in element_strategy()) {
        let once = bar_rewrite(&e);
        prop_assert_eq!(bar_rewrite(&once), once.clone());
        for m in once.monomials() {
            prop_assert!(m.is_normal());
        }
    }

    #[test]
    fn rewrite_homogeneous(e in element_strategy()) {
        prop_assume!(!e.is_zero());
        let deg: Vec<i64> = e.monomials().map(|m| m.degree()).collect();
        let len = e.support.iter().next().unwrap().len();
        for m in bar_rewrite(&e).monomials() {
            prop_assert_eq!(m.degree(), deg[0]);
            prop_assert_eq!(m.ops.len(), len);
        }
    }

    #[test]
    fn strategies_agree(e in element_strategy()) {
        prop_assert_eq!(bar_rewrite_with(&e, Rewrite::Leftmost), bar_rewrite_with(&e, Rewrite::Rightmost));
    }

    #[test]
    fn nishida_lowers_degree(e in element_strategy(), r in 0i64..9) {
        let nf = bar_rewrite(&e);
        let d = nf.monomials().next().map(|m| m.degree());
        for m in nishida_action(r, &nf).monomials() {
            prop_assert_eq!(Some(m.degree() + r), d);
        }
        prop_assert_eq!(nishida_action(0, &nf), nf);
    }

    #[test]
    fn adem_idempotent(ops in prop::collection::vec(0i64..16, 1..4), n in 0i64..3) {
        let once = adem_rewrite(&AdmSum::monomial(ops, n));
        prop_assert_eq!(adem_rewrite(&once), once.clone());
    }
}

/// The Nishida action is computed on representatives; it should descend to
/// the quotient. Check on every monomial of length <= 3, degree <= 20.
#[test]
fn nishida_well_defined_on_quotient() {
    let mut counterexamples = Vec::new();
    for n in 1..=3 {
        for len in 1..=3usize {
            let mut stack = vec![Vec::new()];
            while let Some(prefix) = stack.pop() {
                if prefix.len() == len {
                    let e = BarElement::monomial(prefix.clone(), n);
                    if e.monomials().next().unwrap().degree() > 20 {
                        continue;
                    }
                    for r in 1..=8 {
                        let lhs = nishida_action(r, &bar_rewrite(&e));
                        let rhs = nishida_action(r, &e);
                        if lhs != rhs {
                            counterexamples.push((prefix.clone(), n, r));
                        }
                    }
                    continue;
                }
                for s in 0..=(22 - prefix.iter().sum::<i64>()) {
                    let mut next = prefix.clone();
                    next.push(s);
                    stack.push(next);
                }
            }
        }
    }
    assert!(counterexamples.is_empty(), "{:?}", &counterexamples[..counterexamples.len().min(10)]);
}
