//! Builders for the three families of spectral sequences.

use std::collections::BTreeMap;

use cu_combinatorics::{CuSeq, Exponent, OrdinalIndex};
use sseq_engine::{run, Computed, Endpoint, Kind, Record, RunError, SseqSpec, Tag};
use stems_db::{Group, StemsDb};

/// Ledgers keyed by spectral sequence id (`L1`, `S3`, `EHP`, ...).
#[derive(Debug, Clone, Default)]
pub struct Ledgers {
    pub by_id: BTreeMap<String, Vec<Record>>,
}

impl Ledgers {
    pub fn get(&self, id: &str) -> &[Record] {
        self.by_id.get(id).map_or(&[], |v| v.as_slice())
    }
}

/// The page a TAHSS table for $L(k)$ is printed on: $E^{\omega^{k-1}}$.
pub fn tahss_page(k: usize) -> OrdinalIndex {
    OrdinalIndex::term(Exponent::Finite(k as u32 - 1), 1)
}

fn push_endpoint(e: &Endpoint, m: i64) -> Option<Endpoint> {
    Some(Endpoint {
        cell: e.cell.push(m).ok()?,
        ..e.clone()
    })
}

/// The full record list of $L(k)_n$: records inherited from $L(k-1)_{2m+1}$
/// along $[J] \mapsto [J, m]$ for every last entry $m \geq n$, followed by
/// the shipped records of length at least $\omega^{k-1}$.
pub fn tahss_records(k: usize, n: i64, t_max: i64, ledgers: &Ledgers) -> Vec<Record> {
    let kind = Kind::Tahss { k, n };
    let id = format!("L{k}");
    let mut out = Vec::new();
    if k > 1 {
        let below = tahss_records(k - 1, 1, t_max, ledgers);
        let lower = Kind::Tahss { k: k - 1, n: 1 };
        for m in n.. {
            // A class on [J, m] lies in grade at least that of J plus m, and
            // J has last entry at least 2m + 1.
            if (2 * m + 1) + m > t_max {
                break;
            }
            for r in &below {
                let (Some(s), Some(t)) = (push_endpoint(&r.source, m), push_endpoint(&r.target, m)) else {
                    continue;
                };
                let _ = lower;
                let rec = Record {
                    sseq: id.clone(),
                    source: s,
                    target: t,
                    tag: Tag::Inherited,
                    comment: String::new(),
                };
                out.push(rec);
            }
        }
    }
    out.extend(
        ledgers
            .get(&id)
            .iter()
            .filter(|r| kind.contains(&r.source.cell) && kind.contains(&r.target.cell))
            .cloned(),
    );
    out
}

/// Runs $L(k)_n$ through grade `t_max`, keeping the page its table is
/// printed on. Records whose endpoints lie beyond `t_max` are dropped.
pub fn build_tahss(k: usize, n: i64, t_max: i64, db: &StemsDb, ledgers: &Ledgers) -> Result<Computed, RunError> {
    let kind = Kind::Tahss { k, n };
    let spec = SseqSpec::new(&format!("L{k}"), kind, t_max).with_pages([tahss_page(k)]);
    let records: Vec<Record> = tahss_records(k, n, t_max, ledgers)
        .into_iter()
        .filter(|r| within(db, kind, t_max, &r.source))
        .collect();
    run(&spec, db, &records)
}

fn within(db: &StemsDb, kind: Kind, t_max: i64, e: &Endpoint) -> bool {
    db.resolve(&e.name)
        .map_or(true, |r| kind.grade(r.stem, &e.cell) <= t_max)
}

/// Exponent of the correction term of the printed pages. Cross-column
/// lengths are $c\,\omega^\omega$ minus terms in $\omega^{k}$ with $k$ below
/// the cell length, so this only needs to exceed every cell length in range.
const PAGE_SLACK: u32 = 16;

/// The page TGSS charts are printed on. Every within-column length is below
/// $\omega^k$ and every cross-column length is $\omega^\omega$ minus lower
/// terms, so the chart sits just below $\omega^\omega$.
pub fn tgss_page() -> OrdinalIndex {
    OrdinalIndex::term(Exponent::Omega, 1) - OrdinalIndex::term(Exponent::Finite(PAGE_SLACK), 1)
}

/// The full record list of the TGSS for $S^n$: within-column records of
/// $L(k)_n$ for every $k$, then the cross-column records shipped under `S<n>`.
pub fn tgss_records(n: i64, t_max: i64, ledgers: &Ledgers) -> Vec<Record> {
    let kind = Kind::Tgss { n };
    let id = format!("S{n}");
    let mut out = Vec::new();
    // A cell of length k has degree at least 2^k - 1 and lies in grade at
    // least n - k + 2^k - 1.
    for k in 1.. {
        if n - (k as i64) + (1 << k) - 1 > t_max {
            break;
        }
        for r in tahss_records(k, n, t_max + k as i64, ledgers) {
            out.push(Record { sseq: id.clone(), ..r });
        }
    }
    out.extend(ledgers.get(&id).iter().cloned());
    out.into_iter()
        .filter(|r| kind.contains(&r.source.cell) && kind.contains(&r.target.cell))
        .collect()
}

pub fn build_tgss(n: i64, t_max: i64, db: &StemsDb, ledgers: &Ledgers) -> Result<Computed, RunError> {
    let kind = Kind::Tgss { n };
    let spec = SseqSpec::new(&format!("S{n}"), kind, t_max).with_pages([tgss_page()]);
    let records: Vec<Record> = tgss_records(n, t_max, ledgers)
        .into_iter()
        .filter(|r| within(db, kind, t_max, &r.source))
        .collect();
    run(&spec, db, &records)
}

/// Differentials $d(\alpha[J]) = \beta[j, J]$ for every recorded stable Hopf
/// invariant $\mathrm{SHI}(\alpha) = \beta[j]$ and every cell $J$ (including
/// the empty one) of the TGSS for $S^n$ for which both ends lie in range.
pub fn shi_records(n: i64, t_max: i64, db: &StemsDb) -> Vec<Record> {
    let kind = Kind::Tgss { n };
    let id = format!("S{n}");
    let mut entries: Vec<_> = db.shi_entries().collect();
    entries.sort_by(|a, b| (&a.element, &a.cell).cmp(&(&b.element, &b.cell)));
    let mut out = Vec::new();
    let mut cells = kind.cells(t_max);
    cells.sort();
    for e in entries {
        let Ok(stem) = db.resolve(&e.element).map(|r| r.stem) else {
            continue;
        };
        for cell in &cells {
            if kind.grade(stem, cell) > t_max {
                continue;
            }
            let Ok(target) = CuSeq::new(e.cell.clone()).and_then(|h| h.concat(cell)) else {
                continue;
            };
            if !kind.contains(&target) {
                continue;
            }
            out.push(Record {
                sseq: id.clone(),
                source: Endpoint::new(&e.element, Group::Single, cell.clone(), 0),
                target: Endpoint::new(&e.coefficient, Group::Single, target, 0),
                tag: Tag::Shi,
                comment: String::new(),
            });
        }
    }
    out
}

/// Spheres with a shipped chart; the others are generated.
pub const CHARTED: [i64; 6] = [1, 2, 3, 4, 5, 6];

/// Records for the TGSS of any sphere: the shipped chart records where a
/// chart exists, and otherwise the within-column records together with
/// the stable-Hopf-invariant $d_1$'s.
pub fn sphere_records(n: i64, t_max: i64, db: &StemsDb, ledgers: &Ledgers) -> Vec<Record> {
    let mut out = tgss_records(n, t_max, ledgers);
    if !CHARTED.contains(&n) {
        out.extend(shi_records(n, t_max, db));
    }
    out
}

/// The page the EHP table is printed on, just below $\omega^{\omega+1}$ for
/// the same reason as [`tgss_page`].
pub fn tehpss_page() -> OrdinalIndex {
    OrdinalIndex::term(Exponent::OmegaPlusOne, 1) - OrdinalIndex::term(Exponent::Omega, PAGE_SLACK as i64)
}

/// The full TEHPSS record list: for every $m$ the records of the TGSS for
/// $S^{2m+1}$ moved to the cells $[J, m]$, then the shipped `EHP` records.
pub fn tehpss_records(t_max: i64, db: &StemsDb, ledgers: &Ledgers) -> Vec<Record> {
    let mut out = Vec::new();
    for m in 0..=t_max {
        // [J, m] lies in grade t - (m + 1) of the TGSS grade t of [J].
        for r in sphere_records(2 * m + 1, t_max + m + 1, db, ledgers) {
            let (Some(s), Some(t)) = (push_endpoint(&r.source, m), push_endpoint(&r.target, m)) else {
                continue;
            };
            out.push(Record {
                sseq: "EHP".into(),
                source: s,
                target: t,
                ..r
            });
        }
    }
    out.extend(ledgers.get("EHP").iter().cloned());
    out
}

pub fn build_tehpss(t_max: i64, db: &StemsDb, ledgers: &Ledgers) -> Result<Computed, RunError> {
    let kind = Kind::Tehpss;
    let spec = SseqSpec::new("EHP", kind, t_max).with_pages([tehpss_page()]);
    let records: Vec<Record> = tehpss_records(t_max, db, ledgers)
        .into_iter()
        .filter(|r| within(db, kind, t_max, &r.source))
        .collect();
    run(&spec, db, &records)
}

/// A built instance of one of the tabulated spectral sequences, with the
/// page its table is printed on.
#[derive(Debug, Clone)]
pub struct Table {
    pub id: String,
    pub computed: Computed,
    pub page: OrdinalIndex,
    pub style: crate::diff::Style,
}

/// Last grade of the TAHSS tables. One more grade is computed so that
/// differentials into the last grade are present.
pub const TAHSS_T_MAX: i64 = 23;
/// Last stem of the TGSS charts and the EHP table.
pub const STEM_MAX: i64 = 20;

/// Builds the instance behind the table `id` (`L1`–`L3`, `S1`–`S6`,
/// `EHP`) at the tabulated range.
pub fn build_table(id: &str, db: &StemsDb, ledgers: &Ledgers) -> Result<Table, RunError> {
    use crate::diff::Style;
    let (computed, page, style) = if let Some(k) = id.strip_prefix('L').and_then(|k| k.parse::<usize>().ok()) {
        (build_tahss(k, 1, TAHSS_T_MAX + 1, db, ledgers)?, tahss_page(k), Style::Tahss)
    } else if let Some(n) = id.strip_prefix('S').and_then(|n| n.parse::<i64>().ok()) {
        (build_tgss(n, STEM_MAX + n, db, ledgers)?, tgss_page(), Style::Tgss)
    } else if id == "EHP" {
        (build_tehpss(STEM_MAX, db, ledgers)?, tehpss_page(), Style::Tehpss)
    } else {
        panic!("unknown table {id}");
    };
    Ok(Table {
        id: id.to_string(),
        computed,
        page,
        style,
    })
}
