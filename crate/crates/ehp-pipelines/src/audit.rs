//! Audits of computed instances against known homotopy.

use std::fmt;

use sseq_engine::{Computed, Pos, Tag};
use stems_db::StemsDb;

/// A line surviving to E∞, by grade.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Survivor {
    pub grade: i64,
    pub pos: Pos,
    pub name: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AcyclicityReport {
    pub lo: i64,
    pub hi: i64,
    pub survivors: Vec<Survivor>,
}

impl AcyclicityReport {
    pub fn is_clean(&self) -> bool {
        self.survivors.is_empty()
    }
}

impl fmt::Display for AcyclicityReport {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.survivors.is_empty() {
            return write!(f, "E∞ is empty in grades {}..={}", self.lo, self.hi);
        }
        writeln!(f, "E∞ survivors in grades {}..={}:", self.lo, self.hi)?;
        for s in &self.survivors {
            writeln!(f, "  grade {}: {}", s.grade, s.name)?;
        }
        Ok(())
    }
}

/// Lists the E∞ survivors of `c` in grades `lo..=hi`. For the TGSS of
/// $S^1$ these grades carry $\pi_t S^1 = 0$ once $t \geq 2$, so the list
/// must be empty.
pub fn check_acyclicity(c: &Computed, db: &StemsDb, lo: i64, hi: i64) -> AcyclicityReport {
    let mut survivors = Vec::new();
    for (pos, basis) in c.survivors() {
        if pos.t < lo || pos.t > hi {
            continue;
        }
        let info = c.info(&pos);
        for v in basis {
            survivors.push(Survivor {
                grade: pos.t,
                pos: pos.clone(),
                name: format!("{}{}", db.vector_name(&info.vector(v)), pos.cell),
            });
        }
    }
    survivors.sort();
    AcyclicityReport { lo, hi, survivors }
}

/// Positions touched by the records of `c` carrying `tag`, each source and
/// target once.
pub fn tagged_positions(c: &Computed, tag: Tag) -> Vec<Pos> {
    let mut out: Vec<Pos> = c
        .fired
        .iter()
        .filter(|p| c.records[p.record].tag == tag)
        .flat_map(|p| [p.source_pos.clone(), p.target_pos.clone()])
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Section keys whose entries differ between two tables (as sets, so that
/// order within a section does not matter).
pub fn changed_rows(a: &crate::golden::GoldenTable, b: &crate::golden::GoldenTable) -> std::collections::BTreeSet<i64> {
    use std::collections::{BTreeMap, BTreeSet};
    let index = |t: &crate::golden::GoldenTable| -> BTreeMap<i64, BTreeSet<String>> {
        t.sections
            .iter()
            .map(|s| (s.key, s.entries.iter().map(|e| e.to_string()).collect()))
            .collect()
    };
    let (ia, ib) = (index(a), index(b));
    let keys: BTreeSet<i64> = ia.keys().chain(ib.keys()).copied().collect();
    keys.into_iter().filter(|k| ia.get(k) != ib.get(k)).collect()
}

/// One row of a table with notation factored out: every class is replaced
/// by its resolved lines, cell and group, stacks are split into their
/// members and groups of m lines into single lines. Sorted, so rows compare as multisets.
pub fn canonical_row(db: &StemsDb, section: &crate::golden::Section, arrows_only: bool) -> Vec<String> {
    use crate::golden::Entry;
    use stems_db::{ClassExpr, Group};
    let class = |c: &ClassExpr| -> String {
        let lines = match db.resolve(&c.name) {
            Ok(r) => r.vector.lines.iter().map(|l| format!("{}@{}", db.generator(l.gen).name, l.offset)).collect::<Vec<_>>().join("+"),
            Err(_) => format!("?{}", c.name),
        };
        format!("{lines}{:?}{:?}", c.group, c.cell.clone().unwrap_or_default())
    };
    // A group of m lines stands for its m single lines.
    let lines = |c: &ClassExpr| -> Vec<String> {
        let (Group::Lines(m), Ok(r)) = (c.group, db.resolve(&c.name)) else { return vec![class(c)] };
        (0..m)
            .map(|s| {
                let v = r.vector.shift(s, db);
                let name = if v.is_zero() { format!("?{}", c.name) } else { db.vector_name(&v) };
                class(&ClassExpr { name, group: Group::Single, cell: c.cell.clone() })
            })
            .collect()
    };
    let mut out = Vec::new();
    for e in &section.entries {
        match e {
            Entry::Plain(_) | Entry::Boxed { .. } if arrows_only => {}
            Entry::Plain(stack) => out.extend(stack.iter().flat_map(lines)),
            Entry::Arrow { source, target, mark } => {
                for s in source {
                    for t in target {
                        for (s, t) in lines(s).into_iter().zip(lines(t)) {
                            out.push(format!("{s} -> {t} {mark:?}"));
                        }
                    }
                }
            }
            Entry::Boxed { class: c, detects } => out.push(format!("box {} => {detects}", class(c))),
        }
    }
    out.sort();
    out
}

/// Section keys whose rows differ between two tables once notation is
/// factored out by [`canonical_row`].
pub fn changed_rows_modulo_notation(
    db: &StemsDb,
    a: &crate::golden::GoldenTable,
    b: &crate::golden::GoldenTable,
) -> std::collections::BTreeSet<i64> {
    use std::collections::{BTreeMap, BTreeSet};
    // A row that is outgoing-only on either side is compared by its arrows.
    let partial: BTreeSet<i64> = a.sections.iter().chain(&b.sections).filter(|s| s.outgoing_only).map(|s| s.key).collect();
    let index = |t: &crate::golden::GoldenTable| -> BTreeMap<i64, Vec<String>> {
        t.sections.iter().map(|s| (s.key, canonical_row(db, s, partial.contains(&s.key)))).collect()
    };
    let (ia, ib) = (index(a), index(b));
    let keys: BTreeSet<i64> = ia.keys().chain(ib.keys()).copied().collect();
    keys.into_iter().filter(|k| ia.get(k) != ib.get(k)).collect()
}

/// Outcome of [`perturb`].
#[derive(Debug, Clone)]
pub struct Perturbation {
    pub removed: sseq_engine::Record,
    /// Rows the golden comparison flags after the removal.
    pub reported: std::collections::BTreeSet<i64>,
    /// Rows whose emission changes, from runs with and without the record.
    pub expected: std::collections::BTreeSet<i64>,
}

/// Removes record `index` from the ledger of table `id`, rebuilds, and
/// compares the rows flagged by the golden comparison against the rows
/// whose emission changes.
pub fn perturb(db: &StemsDb, ledgers: &crate::build::Ledgers, id: &str, index: usize) -> Result<Perturbation, String> {
    use crate::build::build_table;
    use crate::diff::{diff_golden, Style};
    use crate::emit::emit_table;
    use crate::golden::{bundled, GoldenTable};
    let golden = GoldenTable::parse(bundled::by_id(id).ok_or("unknown table")?).map_err(|e| e.to_string())?;
    let before = build_table(id, db, ledgers).map_err(|e| e.to_string())?;
    let mut changed = ledgers.clone();
    let list = changed.by_id.get_mut(id).ok_or("no ledger")?;
    if index >= list.len() {
        return Err(format!("{id} has {} records", list.len()));
    }
    let removed = list.remove(index);
    let after = build_table(id, db, &changed).map_err(|e| e.to_string())?;
    let shift = match before.computed.spec().kind {
        sseq_engine::Kind::Tgss { n } => n,
        _ => 0,
    };
    let report = diff_golden(&after.computed, db, &golden, &after.page, after.style);
    let mut reported: std::collections::BTreeSet<i64> = report.mismatches.iter().map(|m| m.grade - shift).collect();
    if after.style == Style::Tehpss {
        // Arrows sit in the row of their target there; spans in their own.
        reported = report.mismatches.iter().map(|m| m.grade).collect();
    }
    let last = golden.sections.iter().map(|s| s.key).max().unwrap_or(-1);
    let mut expected = changed_rows(&emit_table(db, &before, None), &emit_table(db, &after, None));
    expected.retain(|&k| k <= last);
    Ok(Perturbation { removed, reported, expected })
}
