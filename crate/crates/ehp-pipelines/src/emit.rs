//! Emission of computed instances in the table format of [`crate::golden`].
//!
//! Each section lists, in ascending cell order, the lines of a position
//! with a basis chosen greedily from single lines, and groups the chains
//! $x, 2x, 4x, \ldots$ into `x(2^m)` (or `x(∞)` when the chain runs into the
//! truncation tail).

use std::collections::{BTreeMap, BTreeSet};

use sseq_engine::linalg::Subspace;
use sseq_engine::{Computed, Endpoint, Pair, Pos, PosInfo};
use stems_db::{parse_class, ClassExpr, Group, StemsDb};

use crate::build::Table;
use crate::diff::Style;
use crate::golden::{Axis, Entry, GoldenTable, Mark, Section};
use crate::ledger::mark_for;

/// $2x$ as a bit vector, if nonzero and inside the position.
fn twice(db: &StemsDb, info: &PosInfo, bits: u64) -> Option<u64> {
    let v = info.vector(bits).shift(1, db);
    if v.is_zero() {
        return None;
    }
    let mut out = 0u64;
    for l in &v.lines {
        out |= 1 << info.bit(*l)?;
    }
    Some(out)
}

fn in_tail(info: &PosInfo, bits: u64) -> bool {
    bits & info.tail_mask != 0
}

fn class(db: &StemsDb, info: &PosInfo, pos: &Pos, bits: u64, group: Group) -> ClassExpr {
    let name = db.vector_name(&info.vector(bits));
    let ep = Endpoint::new(&name, group, pos.cell.clone(), 0);
    let mut c = parse_class(&ep.to_string()).expect("emitted classes parse");
    // The tables write the bottom cell of a sphere without brackets.
    if pos.cell.is_empty() {
        c.cell = None;
    }
    c
}

/// A class without its group, for matching representatives.
fn bare(c: &ClassExpr) -> String {
    ClassExpr { group: Group::Single, ..c.clone() }.to_string()
}

fn preferred(db: &StemsDb, info: &PosInfo, pos: &Pos, named: Option<&BTreeSet<String>>) -> u64 {
    let Some(named) = named else { return 0 };
    (0..info.lines.len())
        .filter(|&i| named.contains(&bare(&class(db, info, pos, 1 << i, Group::Single))))
        .fold(0, |m, i| m | 1 << i)
}

fn group_of(len: u32, tail: bool) -> Group {
    match (tail, len) {
        (true, _) => Group::Infinite,
        (false, 1) => Group::Single,
        (false, m) => Group::Lines(m),
    }
}

/// Splits `vs` into chains $x, 2x, \ldots$; returns (head, length, reaches
/// the tail). Heads inside the tail are dropped.
fn chains(db: &StemsDb, info: &PosInfo, vs: &[u64]) -> Vec<(u64, u32, bool)> {
    let mut used = vec![false; vs.len()];
    let mut out = Vec::new();
    for i in 0..vs.len() {
        if used[i] || in_tail(info, vs[i]) {
            continue;
        }
        used[i] = true;
        let (mut len, mut cur, mut tail) = (1, vs[i], false);
        while let Some(next) = twice(db, info, cur) {
            let Some(j) = (0..vs.len()).find(|&j| !used[j] && vs[j] == next) else { break };
            used[j] = true;
            len += 1;
            cur = next;
            tail |= in_tail(info, cur);
        }
        if !tail && twice(db, info, cur).is_some_and(|n| in_tail(info, n)) && cur != vs[i] {
            // Only the truncation stops the chain.
            tail = false;
        }
        out.push((vs[i], len, tail));
    }
    out
}

/// Chains of pairs $(2^i s, 2^i t)$ among the fired pairs out of one
/// position, grouped by target position.
fn pair_chains<'a>(db: &StemsDb, c: &Computed, pairs: &[&'a Pair]) -> Vec<(&'a Pair, u32, bool)> {
    let mut used = vec![false; pairs.len()];
    let mut out = Vec::new();
    for i in 0..pairs.len() {
        let p = pairs[i];
        let (si, ti) = (c.info(&p.source_pos), c.info(&p.target_pos));
        if used[i] || in_tail(si, p.source) || in_tail(ti, p.target) {
            continue;
        }
        used[i] = true;
        let (mut len, mut s, mut t, mut tail) = (1, p.source, p.target, false);
        while let (Some(s2), Some(t2)) = (twice(db, si, s), twice(db, ti, t)) {
            let Some(j) = (0..pairs.len())
                .find(|&j| !used[j] && pairs[j].target_pos == p.target_pos && pairs[j].source == s2 && pairs[j].target == t2)
            else {
                break;
            };
            used[j] = true;
            len += 1;
            s = s2;
            t = t2;
            tail |= in_tail(si, s) || in_tail(ti, t);
        }
        out.push((p, len, tail));
    }
    out
}

/// Lines of $Z / B$ chosen from single lines where possible, starting from
/// `start` (assumed independent modulo `b`). Lines in `prefer` are tried
/// first.
fn complete(info: &PosInfo, start: &[u64], z: &Subspace, b: &Subspace, prefer: u64) -> Vec<u64> {
    let mut span = b.clone();
    for &v in start {
        span.insert(v);
    }
    let mut out = Vec::new();
    let n = info.lines.len();
    let order = (0..n).filter(|i| prefer >> i & 1 == 1).chain((0..n).filter(|i| prefer >> i & 1 == 0));
    for i in order {
        let v = 1u64 << i;
        if z.contains(v) && span.insert(v) {
            out.push(v);
        }
    }
    for v in z.quotient_basis(&span) {
        span.insert(v);
        out.push(v);
    }
    out
}

fn entries_plain(db: &StemsDb, info: &PosInfo, pos: &Pos, vs: &[u64]) -> Vec<Entry> {
    chains(db, info, vs)
        .into_iter()
        .map(|(v, len, tail)| Entry::Plain(vec![class(db, info, pos, v, group_of(len, tail))]))
        .collect()
}

fn entries_boxed(db: &StemsDb, info: &PosInfo, pos: &Pos, vs: &[u64], labels: &BTreeMap<String, String>) -> Vec<Entry> {
    chains(db, info, vs)
        .into_iter()
        .map(|(v, len, tail)| {
            let class = class(db, info, pos, v, group_of(len, tail));
            let detects = labels.get(&class.to_string()).cloned().unwrap_or_else(|| "?".to_string());
            Entry::Boxed { class, detects }
        })
        .collect()
}

fn entries_arrows(db: &StemsDb, c: &Computed, pairs: &[&Pair]) -> Vec<Entry> {
    pair_chains(db, c, pairs)
        .into_iter()
        .map(|(p, len, tail)| {
            let (si, ti) = (c.info(&p.source_pos), c.info(&p.target_pos));
            let g = group_of(len, tail);
            let mark: Option<Mark> = mark_for(&c.records[p.record]);
            Entry::Arrow {
                source: vec![class(db, si, &p.source_pos, p.source, g)],
                target: vec![class(db, ti, &p.target_pos, p.target, g)],
                mark,
            }
        })
        .collect()
}

/// Emits a built table. Box labels (the unstable classes survivors detect)
/// are not computed; they are copied from `labels` where a box with the
/// same class is present, and written `?` otherwise.
pub fn emit_table(db: &StemsDb, table: &Table, labels: Option<&GoldenTable>) -> GoldenTable {
    let c = &table.computed;
    let kind = c.spec().kind;
    let shift = match kind {
        sseq_engine::Kind::Tgss { n } => n,
        _ => 0,
    };
    let mut box_labels = BTreeMap::new();
    for s in labels.iter().flat_map(|g| &g.sections) {
        for e in &s.entries {
            if let Entry::Boxed { class, detects } = e {
                box_labels.insert(class.to_string(), detects.clone());
            }
        }
    }
    // Where a quotient offers a choice of representative lines, prefer the
    // ones the reference table names.
    let mut named: BTreeMap<i64, BTreeSet<String>> = BTreeMap::new();
    for s in labels.iter().flat_map(|g| &g.sections) {
        let set = named.entry(s.key).or_default();
        for e in &s.entries {
            let stack = match e {
                Entry::Plain(st) => st,
                Entry::Arrow { source, target, .. } => {
                    set.extend(source.iter().chain(target).map(bare));
                    continue;
                }
                Entry::Boxed { class, .. } => std::slice::from_ref(class),
            };
            set.extend(stack.iter().map(bare));
        }
    }
    let page = c.state(Some(&table.page));
    let fin = c.state(None);
    let long: Vec<&Pair> = c.fired.iter().filter(|p| p.length >= table.page).collect();
    let mut sections: BTreeMap<i64, Vec<Entry>> = BTreeMap::new();
    // TAHSS and EHP runs go one grade past the printed range so that the
    // arrows into the last printed grade are present; the top grade of a
    // TGSS run only has its outgoing arrows complete.
    let last = match table.style {
        Style::Tgss => c.spec().t_max,
        _ => c.spec().t_max - 1,
    };
    let partial = |t: i64| t == last && table.style == Style::Tgss;
    for (pos, info) in &c.e1.positions {
        if pos.t > last {
            continue;
        }
        let from: Vec<&Pair> = long.iter().copied().filter(|p| &p.source_pos == pos).collect();
        let into: Vec<&Pair> = long.iter().copied().filter(|p| &p.target_pos == pos).collect();
        let (zp, bp) = (&page[pos].z, &page[pos].b);
        let (zf, bf) = (&fin[pos].z, &fin[pos].b);
        if partial(pos.t) {
            sections.entry(pos.t - shift).or_default().extend(entries_arrows(db, c, &from));
            continue;
        }
        let prefer = preferred(db, info, pos, named.get(&(pos.t - shift)));
        let survivors = complete(info, &[], zf, bf, prefer);
        match table.style {
            Style::Tahss => {
                let out = sections.entry(pos.t).or_default();
                out.extend(entries_plain(db, info, pos, &survivors));
                out.extend(entries_arrows(db, c, &from));
            }
            Style::Tgss => {
                let sources: Vec<u64> = from.iter().map(|p| p.source).collect();
                let targets: Vec<u64> = into.iter().map(|p| p.target).collect();
                let mut start = sources.clone();
                start.extend(&targets);
                let start = complete(info, &sources, &Subspace::spanned_by(start.iter().copied()).sum(bp), bp, prefer);
                let mut known = sources.clone();
                known.extend(&start);
                let rest = complete(info, &known, zp, bp, prefer);
                let out = sections.entry(pos.t - shift).or_default();
                out.extend(entries_arrows(db, c, &from));
                out.extend(entries_plain(db, info, pos, &start));
                out.extend(entries_plain(db, info, pos, &rest));
            }
            Style::Tehpss => {
                let mut known = survivors.clone();
                known.extend(into.iter().map(|p| p.target));
                known.extend(from.iter().map(|p| p.source));
                let rest = complete(info, &known, zp, bp, prefer);
                let out = sections.entry(pos.t).or_default();
                out.extend(entries_boxed(db, info, pos, &survivors, &box_labels));
                out.extend(entries_arrows(db, c, &into));
                out.extend(entries_plain(db, info, pos, &rest));
            }
        }
    }
    let title = match table.style {
        Style::Tahss => format!("TAHSS for {}, computed", table.id),
        Style::Tgss => format!("TGSS for S^{}, computed", shift),
        Style::Tehpss => "TEHPSS, computed".to_string(),
    };
    GoldenTable {
        title,
        axis: if table.style == Style::Tgss { Axis::Row } else { Axis::Grade },
        reversed: table.style == Style::Tehpss,
        sections: sections
            .into_iter()
            .filter(|(_, e)| !e.is_empty())
            .map(|(key, entries)| Section {
                key,
                outgoing_only: partial(key + shift),
                entries,
                comments: Vec::new(),
            })
            .collect(),
    }
}
