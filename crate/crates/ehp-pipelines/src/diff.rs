//! Comparison of a computed instance against a golden table.
//!
//! Tables print one representative per line, and a choice of
//! representatives is only meaningful modulo boundaries, so the comparison
//! is by spans rather than by strings:
//!
//! * TAHSS tables list, on page $E^P$, the lines that are never hit, with
//!   arrows on those that support a differential of length $\geq P$. The
//!   plain lines must be a basis of $E^\infty$, and together with the arrow
//!   sources must span $Z_P$ modulo everything that is eventually hit.
//! * TGSS charts list every line alive on $E^P$, targets included; they must
//!   form a basis of $E^P$.
//! * The EHP table lists boxed survivors (a basis of $E^\infty$) and each
//!   arrow in the row of its target; all listed lines form a basis of
//!   $E^P$.
//!
//! In every style the arrows of length $\geq P$ must agree line by line with
//! the differentials the engine fired. A grade without a section is empty;
//! sections marked outgoing-only are checked for arrows only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use cu_combinatorics::{CuSeq, OrdinalIndex};
use sseq_engine::engine::tail_space;
use sseq_engine::linalg::Subspace;
use sseq_engine::{expand_endpoint, validate, Computed, Endpoint, Pos, Record, Tag};
use stems_db::{ClassExpr, StemsDb};

use crate::golden::{Entry, GoldenTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Tahss,
    Tgss,
    Tehpss,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub grade: i64,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub mismatches: Vec<Mismatch>,
    /// Entries compared, for reporting.
    pub entries: usize,
}

impl DiffReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        for m in &self.mismatches {
            writeln!(f, "grade {}: {}", m.grade, m.message)?;
        }
        write!(f, "{} entries, {} mismatches", self.entries, self.mismatches.len())
    }
}

#[derive(Default)]
struct Listed {
    plain: Vec<u64>,
    sources: Vec<u64>,
    targets: Vec<u64>,
}

type Line = (Pos, u64, Pos, u64);

/// Compares `c` against `golden` on page `page`.
pub fn diff_golden(c: &Computed, db: &StemsDb, golden: &GoldenTable, page: &OrdinalIndex, style: Style) -> DiffReport {
    let mut report = DiffReport::default();
    let kind = c.spec().kind;
    let shift = match kind {
        sseq_engine::Kind::Tgss { n } => n,
        _ => 0,
    };
    let mut bad = |grade: i64, message: String| report.mismatches.push(Mismatch { grade, message });
    let expand = |class: &ClassExpr| -> Result<(Pos, Vec<u64>), String> {
        let ep = Endpoint::from_class(class, 0)?;
        expand_endpoint(&c.e1, db, &ep).map_err(|e| format!("{class}: {e}"))
    };

    let mut listed: BTreeMap<Pos, Listed> = BTreeMap::new();
    let mut checked_grades = BTreeSet::new();
    let mut arrow_grades = BTreeSet::new();
    let mut golden_pairs: Vec<Line> = Vec::new();
    let mut entries = 0;
    for s in &golden.sections {
        let grade = s.key + shift;
        arrow_grades.insert(grade);
        if !s.outgoing_only {
            checked_grades.insert(grade);
        }
        for e in &s.entries {
            entries += 1;
            let mut place = |class: &ClassExpr, expected: i64, slot: fn(&mut Listed) -> &mut Vec<u64>| {
                match expand(class) {
                    Ok((pos, vs)) => {
                        if pos.t != expected {
                            bad(grade, format!("{class} lies in grade {}", pos.t));
                        }
                        // Lines inside the truncation tail carry no information.
                        let tail = tail_space(c.info(&pos));
                        slot(listed.entry(pos).or_default()).extend(vs.into_iter().filter(|&v| !tail.contains(v)));
                    }
                    Err(m) => bad(grade, m),
                }
            };
            match e {
                Entry::Plain(stack) => {
                    for class in stack {
                        place(class, grade, |l| &mut l.plain);
                    }
                }
                Entry::Boxed { class, .. } => place(class, grade, |l| &mut l.plain),
                Entry::Arrow { source, target, .. } => {
                    let (sg, tg) = match style {
                        Style::Tehpss => (grade + 1, grade),
                        _ => (grade, grade - 1),
                    };
                    for class in source {
                        place(class, sg, |l| &mut l.sources);
                    }
                    for class in target {
                        place(class, tg, |l| &mut l.targets);
                    }
                    for class in source {
                        let (Ok(src), Ok(tgt)) = (Endpoint::from_class(class, 0), Endpoint::from_class(&target[0], 0))
                        else {
                            continue;
                        };
                        let rec = Record::new(&c.spec().id, src, tgt, Tag::Asserted);
                        match validate(&c.e1, db, &rec, 0) {
                            Ok(ps) => golden_pairs.extend(
                                ps.into_iter().map(|p| (p.source_pos, p.source, p.target_pos, p.target)),
                            ),
                            Err(d) => bad(grade, format!("arrow {class}: {d}")),
                        }
                    }
                }
            }
        }
    }
    report.entries = entries;
    // Sections are omitted for empty grades: every grade up to the last
    // section is checked.
    let last = golden.sections.iter().map(|s| s.key + shift).max().unwrap_or(-1);
    let partial: BTreeSet<i64> = golden.sections.iter().filter(|s| s.outgoing_only).map(|s| s.key + shift).collect();
    for g in 0..=last {
        arrow_grades.insert(g);
        if !partial.contains(&g) {
            checked_grades.insert(g);
        }
    }

    // Arrows.
    let arrow_grade = |l: &Line| match style {
        Style::Tehpss => l.2.t,
        _ => l.0.t,
    };
    let mut fired: Vec<Line> = c
        .fired
        .iter()
        .filter(|p| p.length >= *page)
        .map(|p| (p.source_pos.clone(), p.source, p.target_pos.clone(), p.target))
        .filter(|l| arrow_grades.contains(&arrow_grade(l)))
        .collect();
    let final_state = c.state(None);
    let same = |a: &Line, b: &Line| {
        let tail = tail_space(c.info(&a.0));
        a.0 == b.0 && a.2 == b.2 && tail.reduce(a.1) == tail.reduce(b.1) && {
            // Targets agree modulo what was already hit when the arrow fired.
            let t = &final_state[&a.2];
            a.3 == b.3 || t.b.contains(a.3 ^ b.3) && !t.b.contains(a.3)
        }
    };
    for g in &golden_pairs {
        let pending: Vec<usize> = (0..fired.len()).filter(|&i| same(&fired[i], g)).collect();
        match pending.first() {
            Some(&i) => {
                fired.swap_remove(i);
            }
            None => {
                let name = line_text(c, db, &g.0, g.1);
                let tn = line_text(c, db, &g.2, g.3);
                bad(arrow_grade(g), format!("golden arrow {name} -> {tn} was not computed"));
            }
        }
    }
    for l in &fired {
        let in_tail = c.info(&l.0).tail_mask & l.1 == l.1 || c.info(&l.2).tail_mask & l.3 == l.3;
        if !in_tail {
            let name = line_text(c, db, &l.0, l.1);
            let tn = line_text(c, db, &l.2, l.3);
            bad(arrow_grade(l), format!("computed arrow {name} -> {tn} is not in the table"));
        }
    }

    // Spans.
    let before = c.state(Some(page));
    for (pos, info) in &c.e1.positions {
        if !checked_grades.contains(&pos.t) {
            continue;
        }
        let empty = Listed::default();
        let l = listed.get(pos).unwrap_or(&empty);
        let tail = tail_space(info);
        let zp = before[pos].z.sum(&tail);
        let bp = before[pos].b.sum(&tail);
        let zf = final_state[pos].z.sum(&tail);
        let bf = final_state[pos].b.sum(&tail);
        let here = |what: &str| format!("{what} at {}", pos_text(pos));
        let plain_target = match style {
            // Targets are listed as plain lines of their own row.
            Style::Tgss => None,
            _ => Some(()),
        };
        // Plain lines: a basis of E∞.
        if style != Style::Tgss
            && !is_basis(&l.plain, &zf, &bf) {
                bad(pos.t, here(&format!("plain lines {} are not a basis of E∞", names(c, db, pos, &l.plain))));
            }
        let mut all: Vec<u64> = l.plain.clone();
        all.extend(&l.sources);
        match (style, plain_target) {
            (Style::Tahss, _) => {
                let span = Subspace::spanned_by(all.iter().copied()).sum(&bf);
                if span != zp.sum(&bf) || !span.is_subspace_of(&zp.sum(&bf)) {
                    bad(pos.t, here("listed lines do not span the page"));
                }
            }
            _ => {
                if style == Style::Tehpss {
                    all.extend(&l.targets);
                }
                if !spans(&all, &zp, &bp) {
                    let computed = zp.quotient_basis(&bp);
                    bad(
                        pos.t,
                        here(&format!(
                            "listed lines {} are not a basis of the page {}",
                            names(c, db, pos, &all),
                            names(c, db, pos, &computed)
                        )),
                    );
                }
            }
        }
    }
    report
}

/// Whether `vs` are nonzero classes of `z / b` that together span it. Stacked
/// entries may list a line together with lines it depends on.
fn spans(vs: &[u64], z: &Subspace, b: &Subspace) -> bool {
    vs.iter().all(|&v| z.contains(v) && !b.contains(v))
        && Subspace::spanned_by(vs.iter().copied()).sum(b) == z.sum(b)
}

/// Whether `vs` lie in `z` and project to a basis of `z / b`.
fn is_basis(vs: &[u64], z: &Subspace, b: &Subspace) -> bool {
    let mut span = b.clone();
    for &v in vs {
        if !z.contains(v) || !span.insert(v) {
            return false;
        }
    }
    span.dim() == z.dim()
}

fn pos_text(p: &Pos) -> String {
    format!("t={} {}", p.t, p.cell)
}

fn line_text(c: &Computed, db: &StemsDb, pos: &Pos, v: u64) -> String {
    format!("{}{}", db.vector_name(&c.info(pos).vector(v)), fmt_cell(&pos.cell))
}

fn names(c: &Computed, db: &StemsDb, pos: &Pos, vs: &[u64]) -> String {
    let v: Vec<String> = vs.iter().map(|&v| line_text(c, db, pos, v)).collect();
    format!("[{}]", v.join(", "))
}

fn fmt_cell(cell: &CuSeq) -> String {
    cell.to_string()
}
