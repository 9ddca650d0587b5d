//! Differentials proposed by the attaching maps of the layers $L(k)_n$.
//!
//! The dual Steenrod operation $\mathrm{Sq}^r_*$ with $r = 1, 2, 4, 8$ on
//! the homology of a layer detects an attaching map by $2, \eta, \nu,
//! \sigma$ respectively, so a nonzero $\mathrm{Sq}^r_*[J] \ni [J']$ proposes
//! $d(\alpha[J]) = (\theta_r \alpha)[J']$.

use std::collections::BTreeSet;

use cu_combinatorics::CuSeq;
use layer_homology::steenrod_on_cell;
use sseq_engine::{Endpoint, Kind, Record, Tag};
use stems_db::{Group, Line, Order, Product, StemVector, StemsDb};

/// The attaching-map dictionary $\mathrm{Sq}^r \mapsto \theta_r$.
pub const ATTACHING: [(i64, &str); 4] = [(1, "2"), (2, "η"), (4, "ν"), (8, "σ")];

/// Output of [`nishida_candidates`].
#[derive(Debug, Clone, Default)]
pub struct Candidates {
    pub records: Vec<Record>,
    /// Products missing from the stems database, as `θ·α[J] -> [J']`.
    pub unknown: Vec<String>,
}

/// Lines of a stem that carry a name of their own: every generator at every
/// admissible offset.
fn lines_in(db: &StemsDb, stem: i64) -> Vec<Line> {
    let mut out = Vec::new();
    for &g in db.stem(stem) {
        let count = match db.generator(g).order {
            Order::Finite(c) => c,
            Order::Infinite => 4,
        };
        for offset in 0..count {
            out.push(Line { gen: g, offset });
        }
    }
    out
}

/// Proposes a differential for every cell of $L(k)_n$ through grade
/// `t_max`, every $r \in \{1, 2, 4, 8\}$, every $[J'] \in \mathrm{Sq}^r_*[J]$
/// and every line $\alpha$ with a known nonzero product $\theta_r \alpha$.
pub fn nishida_candidates(db: &StemsDb, k: usize, n: i64, t_max: i64) -> Candidates {
    let kind = Kind::Tahss { k, n };
    let id = format!("L{k}");
    let mut out = Candidates::default();
    let mut cells = kind.cells(t_max);
    cells.sort();
    for cell in &cells {
        for (r, theta) in ATTACHING {
            let targets = steenrod_on_cell(r, cell, n);
            if targets.is_empty() {
                continue;
            }
            for stem in 0..=(t_max - cell.degree()).min(db.max_stem()) {
                for line in lines_in(db, stem) {
                    let name = db.line_name(line);
                    let product = match db.multiply(theta, &name) {
                        Ok(Product::Known(p)) => p,
                        Ok(Product::Zero) => continue,
                        Ok(Product::Unknown) | Err(_) => {
                            for t in &targets {
                                out.unknown.push(format!("{theta}·{name}{cell} -> {t}"));
                            }
                            continue;
                        }
                    };
                    let target_name = db.vector_name(&product.vector);
                    for t in &targets {
                        if !kind.contains(t) {
                            continue;
                        }
                        out.records.push(Record {
                            sseq: id.clone(),
                            source: Endpoint::new(&name, Group::Single, cell.clone(), 0),
                            target: Endpoint::new(&target_name, Group::Single, t.clone(), 0),
                            tag: Tag::NishidaCandidate,
                            comment: format!("Sq^{r} on {cell}"),
                        });
                    }
                }
            }
        }
    }
    out
}

/// A pair of lines: (cell, vector) at the source and at the target.
pub type LinePair = ((CuSeq, StemVector), (CuSeq, StemVector));

/// The line pairs named by a record: the `i`-th line of the source group
/// hits the `i`-th line of the target group, both multiplied by
/// $2^{\mathrm{offset}}$. Infinite groups contribute their first four lines.
pub fn line_pairs(db: &StemsDb, r: &Record) -> Option<Vec<LinePair>> {
    let count = |g: Group| match g {
        Group::Single => 1,
        Group::Lines(m) => m,
        Group::Infinite => 4,
    };
    let vec = |e: &Endpoint, i: u32| -> Option<StemVector> {
        let v = db.resolve(&e.name).ok()?.vector.shift(e.offset + i, db);
        (!v.is_zero()).then_some(v)
    };
    let mut out = Vec::new();
    for i in 0..count(r.source.group).min(count(r.target.group)) {
        let (Some(s), Some(t)) = (vec(&r.source, i), vec(&r.target, i)) else {
            break;
        };
        out.push(((r.source.cell.clone(), s), (r.target.cell.clone(), t)));
    }
    (!out.is_empty()).then_some(out)
}

/// Whether every line pair of `r` is proposed by some candidate.
pub fn subsumed(db: &StemsDb, r: &Record, candidates: &BTreeSet<LinePair>) -> bool {
    line_pairs(db, r).is_some_and(|ps| ps.iter().all(|p| candidates.contains(p)))
}

/// The line pairs of a candidate list, for [`subsumed`].
pub fn candidate_pairs(db: &StemsDb, c: &Candidates) -> BTreeSet<LinePair> {
    c.records.iter().filter_map(|r| line_pairs(db, r)).flatten().collect()
}
