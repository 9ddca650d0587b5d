use std::sync::OnceLock;

use proptest::prelude::*;
use sseq_engine::{populate, run_with, validate, Endpoint, Kind, Mode, Record, SseqSpec, Tag};
use stems_db::{Group, StemsDb};

/// Every structurally valid single-line record of a small E¹ page.
fn pool(kind: Kind) -> &'static (StemsDb, SseqSpec, Vec<Record>) {
    static POOLS: OnceLock<Vec<(Kind, (StemsDb, SseqSpec, Vec<Record>))>> = OnceLock::new();
    let pools = POOLS.get_or_init(|| {
        [(Kind::Tahss { k: 2, n: 1 }, 12), (Kind::Tgss { n: 2 }, 12)]
            .into_iter()
            .map(|(kind, t_max)| {
                let db = StemsDb::bundled();
                let spec = SseqSpec::new("fuzz", kind, t_max);
                let e1 = populate(&spec, &db);
                let endpoints: Vec<Endpoint> = e1
                    .positions
                    .iter()
                    .flat_map(|(p, info)| {
                        let db = &db;
                        info.lines
                            .iter()
                            .enumerate()
                            .filter(move |(i, _)| info.tail_mask >> i & 1 == 0)
                            .map(move |(_, &l)| Endpoint::new(&db.line_name(l), Group::Single, p.cell.clone(), 0))
                    })
                    .collect();
                let mut records = Vec::new();
                for s in &endpoints {
                    for t in &endpoints {
                        let r = Record::new("fuzz", s.clone(), t.clone(), Tag::Asserted);
                        if validate(&e1, &db, &r, 0).is_ok_and(|ps| ps.len() == 1) {
                            records.push(r);
                        }
                    }
                }
                (kind, (db, spec, records))
            })
            .collect()
    });
    &pools.iter().find(|(k, _)| *k == kind).unwrap().1
}

fn ledger(kind: Kind) -> impl Strategy<Value = Vec<Record>> {
    let records = &pool(kind).2;
    assert!(records.len() > 50, "pool too small: {}", records.len());
    prop::collection::vec(prop::sample::select(records.clone()), 0..40)
}

fn check(kind: Kind, ledger: &[Record]) -> Result<(), TestCaseError> {
    let (db, spec, _) = pool(kind);
    let c = run_with(spec, db, ledger, Mode::Lenient).unwrap();
    let (sources, targets) = c.accounting();
    prop_assert_eq!(sources, targets);
    prop_assert!(sources <= c.fired.len());
    for (p, cell) in &c.final_state {
        prop_assert!(cell.b.is_subspace_of(&cell.z), "B not inside Z at {}", p);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn tahss_sources_killed_equal_targets_killed(l in ledger(Kind::Tahss { k: 2, n: 1 })) {
        check(Kind::Tahss { k: 2, n: 1 }, &l)?;
    }

    #[test]
    fn tgss_sources_killed_equal_targets_killed(l in ledger(Kind::Tgss { n: 2 })) {
        check(Kind::Tgss { n: 2 }, &l)?;
    }
}
