//! Moving records and computed instances between spectral sequences:
//! truncation $L(k)_1 \to L(k)_n$ and the maps induced by $E$ and $P$.

use cu_combinatorics::CuError;
use stems_db::StemsDb;

use crate::engine::{Computed, SseqSpec};
use crate::record::{Endpoint, Record, Tag};
use crate::Kind;

/// Restricts a computed TAHSS for $L(k)_1$ to the cells of excess at least
/// `n` and recomputes its pages from the logged differentials.
///
/// # Panics
/// If `c` is not a TAHSS for $L(k)_1$.
pub fn truncate(c: &Computed, n: i64) -> Computed {
    let Kind::Tahss { k, n: 1 } = c.spec().kind else {
        panic!("truncate expects a TAHSS for L(k)_1, got {}", c.spec().kind);
    };
    let kind = Kind::Tahss { k, n };
    let spec = SseqSpec {
        kind,
        ..c.spec().clone()
    };
    c.restrict(spec, |cell| kind.contains(cell))
}

fn push(e: &Endpoint, n: i64) -> Result<Endpoint, CuError> {
    Ok(Endpoint {
        cell: e.cell.push(n)?,
        ..e.clone()
    })
}

/// The differentials induced by $P$: $\alpha[J] \to \alpha'[J']$ becomes
/// $\alpha[J, n] \to \alpha'[J', n]$. Every cell of the source has excess at
/// least $2n + 1$, so the concatenation is always CU.
pub fn pushforward_p(source: &[Record], n: i64, sseq: &str) -> Result<Vec<Record>, CuError> {
    source
        .iter()
        .map(|r| {
            Ok(Record {
                sseq: sseq.to_string(),
                source: push(&r.source, n)?,
                target: push(&r.target, n)?,
                tag: Tag::PropP,
                comment: format!("P-image of {} -> {}", r.source, r.target),
            })
        })
        .collect()
}

/// Result of [`pushforward_e`].
#[derive(Debug, Clone, Default)]
pub struct EImage {
    /// Differentials whose both cells survive.
    pub records: Vec<Record>,
    /// Sources whose target cell is killed by $E$; they may now be free
    /// to support another differential.
    pub freed: Vec<Endpoint>,
}

/// The differentials induced by $E$ into `target`: a record survives iff
/// both of its cells belong to `target`.
pub fn pushforward_e(source: &[Record], target: Kind, sseq: &str) -> EImage {
    let mut out = EImage::default();
    for r in source {
        if !target.contains(&r.source.cell) {
            continue;
        }
        if target.contains(&r.target.cell) {
            out.records.push(Record {
                sseq: sseq.to_string(),
                tag: Tag::PropE,
                comment: format!("E-image of {} -> {}", r.source, r.target),
                ..r.clone()
            });
        } else {
            out.freed.push(r.source.clone());
        }
    }
    out
}

/// Whether two endpoints name the same lines: equal cells, groups and
/// offsets, and names resolving to the same vector.
pub fn same_endpoint(db: &StemsDb, a: &Endpoint, b: &Endpoint) -> bool {
    a.cell == b.cell && a.group == b.group && a.offset == b.offset && same_class(db, &a.name, &b.name)
}

/// Whether two names resolve to the same element.
pub fn same_class(db: &StemsDb, a: &str, b: &str) -> bool {
    a == b
        || match (db.resolve(a), db.resolve(b)) {
            (Ok(x), Ok(y)) => x.stem == y.stem && x.vector == y.vector,
            _ => false,
        }
}

/// Whether `records` contains a record with the given endpoints.
pub fn contains_record(db: &StemsDb, records: &[Record], source: &Endpoint, target: &Endpoint) -> bool {
    find_record(db, records, source, target).is_some()
}

pub fn find_record<'a>(db: &StemsDb, records: &'a [Record], source: &Endpoint, target: &Endpoint) -> Option<&'a Record> {
    records
        .iter()
        .find(|r| same_endpoint(db, &r.source, source) && same_endpoint(db, &r.target, target))
}
