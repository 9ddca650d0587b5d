use cu_combinatorics::*;
use proptest::prelude::*;

fn cu_strategy() -> impl Strategy<Value = CuSeq> {
    (0usize..5, prop::collection::vec(0i64..6, 5)).prop_map(|(len, slack)| {
        // Build from the right so that every junction is CU.
        let mut entries = Vec::new();
        let mut prev: Option<i64> = None;
        for s in slack.iter().take(len) {
            let next = match prev {
                None => *s,
                Some(p) => 2 * p + 1 + s,
            };
            entries.push(next);
            prev = Some(next);
        }
        entries.reverse();
        CuSeq::new(entries).unwrap()
    })
}

fn ordinal_strategy() -> impl Strategy<Value = OrdinalIndex> {
    prop::collection::vec((0u8..6, -4i64..5), 0..6).prop_map(|terms| {
        let mut out = OrdinalIndex::zero();
        for (e, c) in terms {
            let exp = match e {
                4 => Exponent::Omega,
                5 => Exponent::OmegaPlusOne,
                i => Exponent::Finite(i as u32),
            };
            out.add_term(exp, c);
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn pascal_identity(a in -64i64..64, b in -4i64..64) {
        prop_assert_eq!(binom_mod2(a, b), binom_mod2(a - 1, b) ^ binom_mod2(a - 1, b - 1));
    }

    #[test]
    fn lucas(a in 0i64..4096, b in 0i64..4096) {
        prop_assert_eq!(binom_mod2(a, b) == 1, b & !a == 0);
    }

    #[test]
    fn order_embedding(j in cu_strategy(), k in cu_strategy()) {
        prop_assert_eq!(j.cmp(&k), mu_tgss(&j).cmp(&mu_tgss(&k)));
    }

    #[test]
    fn cu_order_transitive(a in cu_strategy(), b in cu_strategy(), c in cu_strategy()) {
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
    }

    #[test]
    fn ordinal_group_laws(a in ordinal_strategy(), b in ordinal_strategy(), c in ordinal_strategy()) {
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert!((a.clone() - a.clone()).is_zero());
        if a < b {
            prop_assert!(a.clone() + c.clone() < b.clone() + c.clone());
        }
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
    }

    #[test]
    fn concat_associative(a in cu_strategy(), b in cu_strategy(), c in cu_strategy()) {
        if let (Ok(ab), Ok(bc)) = (a.concat(&b), b.concat(&c)) {
            let left = ab.concat(&c);
            let right = a.concat(&bc);
            prop_assert_eq!(left.is_ok(), right.is_ok());
            if let (Ok(l), Ok(r)) = (left, right) {
                prop_assert_eq!(l, r);
            }
        }
    }
}
