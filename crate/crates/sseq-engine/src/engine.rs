//! E¹ population, record validation and execution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use cu_combinatorics::{CuSeq, OrdinalIndex};
use stems_db::{Group, Line, Order, StemVector, StemsDb};

use crate::linalg::{kernel, Subspace};
use crate::record::{Endpoint, Record};
use crate::Kind;

/// Lines kept for an infinite-order generator. The top [`TAIL_ZONE`] of
/// them are truncation artifacts and are ignored when reading pages.
pub const DEFAULT_TAIL: u32 = 16;
pub const TAIL_ZONE: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SseqSpec {
    pub id: String,
    pub kind: Kind,
    pub t_max: i64,
    pub tail: u32,
    /// Pages to keep: $E^P$ for each listed $P$.
    pub pages: Vec<OrdinalIndex>,
}

impl SseqSpec {
    pub fn new(id: &str, kind: Kind, t_max: i64) -> Self {
        Self {
            id: id.to_string(),
            kind,
            t_max,
            tail: DEFAULT_TAIL,
            pages: Vec::new(),
        }
    }

    pub fn with_pages(mut self, pages: impl IntoIterator<Item = OrdinalIndex>) -> Self {
        self.pages = pages.into_iter().collect();
        self.pages.sort();
        self.pages.dedup();
        self
    }
}

/// A position $(t, \mu)$ of the E¹ page, keyed by grade and cell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub t: i64,
    pub cell: CuSeq,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "t={} {}", self.t, self.cell)
    }
}

/// The lines of one position: bit `i` of a vector is `lines[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosInfo {
    pub stem: i64,
    pub index: OrdinalIndex,
    pub lines: Vec<Line>,
    /// Bits of lines that are truncation artifacts of infinite generators.
    pub tail_mask: u64,
}

impl PosInfo {
    pub fn full_mask(&self) -> u64 {
        if self.lines.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.lines.len()) - 1
        }
    }

    pub fn bit(&self, l: Line) -> Option<usize> {
        self.lines.iter().position(|&x| x == l)
    }

    pub fn vector(&self, bits: u64) -> StemVector {
        let mut v = StemVector::zero();
        for (i, &l) in self.lines.iter().enumerate() {
            if bits >> i & 1 == 1 {
                v.add_line(l);
            }
        }
        v
    }
}

/// The E¹ page.
#[derive(Debug, Clone)]
pub struct E1 {
    pub spec: SseqSpec,
    pub positions: BTreeMap<Pos, PosInfo>,
    /// Positions whose populating stem lies beyond the database.
    pub beyond: BTreeSet<Pos>,
}

/// Populates the E¹ page: one line per associated-graded slot of the stem
/// group at every populated position.
pub fn populate(spec: &SseqSpec, db: &StemsDb) -> E1 {
    let mut positions = BTreeMap::new();
    let mut beyond = BTreeSet::new();
    for cell in spec.kind.cells(spec.t_max) {
        let t0 = spec.kind.grade(0, &cell);
        for t in t0..=spec.t_max {
            let stem = t - t0;
            let pos = Pos { t, cell: cell.clone() };
            if stem > db.max_stem() {
                beyond.insert(pos);
                continue;
            }
            let mut lines = Vec::new();
            let mut tail_mask = 0;
            for &g in db.stem(stem) {
                let count = match db.generator(g).order {
                    Order::Finite(m) => m,
                    Order::Infinite => spec.tail,
                };
                for offset in 0..count {
                    if db.generator(g).order == Order::Infinite && offset >= spec.tail - TAIL_ZONE {
                        tail_mask |= 1 << lines.len();
                    }
                    lines.push(Line { gen: g, offset });
                }
            }
            if lines.is_empty() {
                continue;
            }
            assert!(lines.len() <= 64, "too many lines at {pos}");
            let index = spec.kind.index(&cell);
            positions.insert(pos, PosInfo { stem, index, lines, tail_mask });
        }
    }
    E1 {
        spec: spec.clone(),
        positions,
        beyond,
    }
}

impl E1 {
    /// Number of populated positions per grade; every grade up to `t_max`
    /// has finitely many by construction, and this is the audit of it.
    pub fn degreewise_counts(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for p in self.positions.keys() {
            *out.entry(p.t).or_insert(0) += 1;
        }
        out
    }
}

/// Why a record is structurally invalid.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Diagnostic {
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("cell {0} does not belong to this spectral sequence")]
    CellNotInSseq(CuSeq),
    #[error("position {0} lies beyond the stems database")]
    BeyondDatabase(Pos),
    #[error("position {0} lies beyond t_max")]
    BeyondTMax(Pos),
    #[error("position {0} is empty")]
    EmptyPosition(Pos),
    #[error("target index {tgt} is not below source index {src}")]
    IndexIncrease { src: OrdinalIndex, tgt: OrdinalIndex },
    #[error("grade must drop by one: source t={src}, target t={tgt}")]
    GradeRule { src: i64, tgt: i64 },
    #[error("{0} exceeds the order of its generator")]
    OffsetOutOfRange(String),
    #[error("source group {src} and target group {tgt} do not match")]
    TailMismatch { src: String, tgt: String },
}

/// Per-line expansion of a record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair {
    pub record: usize,
    pub length: OrdinalIndex,
    pub source_pos: Pos,
    pub source: u64,
    pub target_pos: Pos,
    pub target: u64,
}

pub fn expand_endpoint(e1: &E1, db: &StemsDb, ep: &Endpoint) -> Result<(Pos, Vec<u64>), Diagnostic> {
    let kind = e1.spec.kind;
    if !kind.contains(&ep.cell) {
        return Err(Diagnostic::CellNotInSseq(ep.cell.clone()));
    }
    let r = db.resolve(&ep.name).map_err(|_| Diagnostic::UnknownName(ep.name.clone()))?;
    let pos = Pos {
        t: kind.grade(r.stem, &ep.cell),
        cell: ep.cell.clone(),
    };
    if e1.beyond.contains(&pos) {
        return Err(Diagnostic::BeyondDatabase(pos));
    }
    if pos.t > e1.spec.t_max {
        return Err(Diagnostic::BeyondTMax(pos));
    }
    let info = e1.positions.get(&pos).ok_or_else(|| Diagnostic::EmptyPosition(pos.clone()))?;
    let to_bits = |v: &StemVector| -> Option<u64> {
        let mut bits = 0;
        for &l in &v.lines {
            bits |= 1u64 << info.bit(l)?;
        }
        Some(bits)
    };
    let mut out = Vec::new();
    let mut s = 0;
    loop {
        if ep.group.count().is_some_and(|c| s >= c) {
            break;
        }
        let v = r.vector.shift(ep.offset + s, db);
        let bits = if v.is_zero() { None } else { to_bits(&v) };
        match (bits, ep.group) {
            (Some(b), _) => out.push(b),
            // An infinite group runs until the truncation.
            (None, Group::Infinite) if s > 0 => break,
            _ => return Err(Diagnostic::OffsetOutOfRange(ep.to_string())),
        }
        s += 1;
    }
    Ok((pos, out))
}

/// Structural validation of one record, returning its per-line pairs.
pub fn validate(e1: &E1, db: &StemsDb, rec: &Record, index: usize) -> Result<Vec<Pair>, Diagnostic> {
    let (sp, sv) = expand_endpoint(e1, db, &rec.source)?;
    let (tp, tv) = expand_endpoint(e1, db, &rec.target)?;
    let (si, ti) = (&e1.positions[&sp].index, &e1.positions[&tp].index);
    if ti >= si {
        return Err(Diagnostic::IndexIncrease {
            src: si.clone(),
            tgt: ti.clone(),
        });
    }
    if tp.t != sp.t - 1 {
        return Err(Diagnostic::GradeRule {
            src: sp.t,
            tgt: tp.t,
        });
    }
    let infinite = |g: Group| g == Group::Infinite;
    let n = match (infinite(rec.source.group), infinite(rec.target.group)) {
        (true, true) => sv.len().min(tv.len()),
        (false, false) if sv.len() == tv.len() => sv.len(),
        _ => {
            return Err(Diagnostic::TailMismatch {
                src: rec.source.to_string(),
                tgt: rec.target.to_string(),
            })
        }
    };
    let length = si.clone() - ti.clone();
    Ok((0..n)
        .map(|s| Pair {
            record: index,
            length: length.clone(),
            source_pos: sp.clone(),
            source: sv[s],
            target_pos: tp.clone(),
            target: tv[s],
        })
        .collect())
}

/// Cycles and boundaries at one position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell2 {
    pub z: Subspace,
    pub b: Subspace,
}

pub type State = BTreeMap<Pos, Cell2>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RunError {
    #[error("record {record} ({text}): {diagnostic}")]
    Invalid {
        record: usize,
        text: String,
        diagnostic: Diagnostic,
    },
    #[error("stale differential, record {record} ({text}): {reason}")]
    StaleDifferential {
        record: usize,
        text: String,
        reason: String,
    },
    #[error("record {record} ({text}): a line is both source and target at one length")]
    SourceTargetConflict { record: usize, text: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Abort on the first stale or conflicting record.
    Strict,
    /// Drop pairs that would be stale, and records that would make a line
    /// both source and target at one length; used for fuzzing and replay.
    Lenient,
}

/// A computed instance: pages, E∞, and the log of executed pairs.
#[derive(Debug, Clone)]
pub struct Computed {
    pub e1: E1,
    pub records: Vec<Record>,
    /// Pairs that were executed, in execution order.
    pub fired: Vec<Pair>,
    pub snapshots: BTreeMap<OrdinalIndex, State>,
    pub final_state: State,
}

fn initial_state(e1: &E1) -> State {
    e1.positions
        .iter()
        .map(|(p, info)| {
            (
                p.clone(),
                Cell2 {
                    z: Subspace::full(info.lines.len()),
                    b: Subspace::new(),
                },
            )
        })
        .collect()
}

fn text_of(records: &[Record], i: usize) -> String {
    records.get(i).map_or_else(String::new, |r| format!("{} -> {}", r.source, r.target))
}

/// Executes pairs of a single length simultaneously. Returns the pairs
/// actually executed.
fn apply(state: &mut State, pairs: &[Pair], mode: Mode, records: &[Record]) -> Result<Vec<Pair>, RunError> {
    let mut groups: BTreeMap<&Pos, Vec<&Pair>> = BTreeMap::new();
    for p in pairs {
        groups.entry(&p.source_pos).or_default().push(p);
    }
    let mut fired = Vec::new();
    let mut new_z = Vec::new();
    let mut new_b: Vec<(Pos, u64, &Pair)> = Vec::new();
    for (sp, group) in groups {
        let src = &state[sp];
        let mut span = src.b.clone();
        let mut kept = Vec::new();
        for &p in &group {
            let tgt = &state[&p.target_pos];
            let stale = if !src.z.contains(p.source) {
                Some("source is not a cycle on this page")
            } else if !span.clone().insert(p.source) {
                Some("source is a boundary or repeats another source")
            } else if !tgt.z.contains(p.target) {
                Some("target is not a cycle on this page")
            } else if tgt.b.contains(p.target) {
                Some("target is already a boundary")
            } else {
                None
            };
            match (stale, mode) {
                (Some(reason), Mode::Strict) => {
                    return Err(RunError::StaleDifferential {
                        record: p.record,
                        text: text_of(records, p.record),
                        reason: reason.to_string(),
                    })
                }
                (Some(_), Mode::Lenient) => continue,
                (None, _) => {
                    span.insert(p.source);
                    kept.push(p);
                }
            }
        }
        if kept.is_empty() {
            continue;
        }
        let tb = &state[&kept[0].target_pos].b;
        let images: Vec<u64> = kept.iter().map(|p| tb.reduce(p.target)).collect();
        let mut z = src.b.sum(&Subspace::spanned_by(src.z.quotient_basis(&span)));
        for combo in kernel(&images) {
            let mut v = 0;
            for (i, p) in kept.iter().enumerate() {
                if combo >> i & 1 == 1 {
                    v ^= p.source;
                }
            }
            z.insert(v);
        }
        new_z.push((sp.clone(), z));
        for p in kept {
            new_b.push((p.target_pos.clone(), p.target, p));
            fired.push(p.clone());
        }
    }
    for (p, z) in new_z {
        state.get_mut(&p).unwrap().z = z;
    }
    for (p, v, _) in &new_b {
        state.get_mut(p).unwrap().b.insert(*v);
    }
    for (p, _, pair) in &new_b {
        let c = &state[p];
        if !c.b.is_subspace_of(&c.z) {
            return Err(RunError::SourceTargetConflict {
                record: pair.record,
                text: text_of(records, pair.record),
            });
        }
    }
    Ok(fired)
}

fn execute(
    e1: E1,
    records: Vec<Record>,
    mut pairs: Vec<Pair>,
    mode: Mode,
) -> Result<Computed, RunError> {
    pairs.sort_by(|a, b| a.length.cmp(&b.length));
    let mut state = initial_state(&e1);
    let mut snapshots = BTreeMap::new();
    let mut pages = e1.spec.pages.iter().peekable();
    let mut fired = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let len = pairs[i].length.clone();
        let mut j = i;
        while j < pairs.len() && pairs[j].length == len {
            j += 1;
        }
        while let Some(p) = pages.next_if(|p| **p <= len) {
            snapshots.insert(p.clone(), state.clone());
        }
        let mut batch = pairs[i..j].to_vec();
        loop {
            let mut next = state.clone();
            match apply(&mut next, &batch, mode, &records) {
                Ok(f) => {
                    fired.extend(f);
                    state = next;
                    break;
                }
                // Lenient: drop the conflicting record and retry the length.
                Err(RunError::SourceTargetConflict { record, .. }) if mode == Mode::Lenient => {
                    batch.retain(|p| p.record != record);
                }
                Err(e) => return Err(e),
            }
        }
        i = j;
    }
    for p in pages {
        snapshots.insert(p.clone(), state.clone());
    }
    Ok(Computed {
        e1,
        records,
        fired,
        snapshots,
        final_state: state,
    })
}

/// Validates every record and runs the spectral sequence: records are
/// executed in increasing length $\mu_s - \mu_t$, simultaneously within a
/// length.
pub fn run(spec: &SseqSpec, db: &StemsDb, ledger: &[Record]) -> Result<Computed, RunError> {
    run_with(spec, db, ledger, Mode::Strict)
}

pub fn run_with(spec: &SseqSpec, db: &StemsDb, ledger: &[Record], mode: Mode) -> Result<Computed, RunError> {
    let e1 = populate(spec, db);
    let mut pairs = Vec::new();
    for (i, rec) in ledger.iter().enumerate() {
        match validate(&e1, db, rec, i) {
            Ok(ps) => pairs.extend(ps),
            Err(diagnostic) if mode == Mode::Strict => {
                return Err(RunError::Invalid {
                    record: i,
                    text: text_of(ledger, i),
                    diagnostic,
                })
            }
            Err(_) => {}
        }
    }
    execute(e1, ledger.to_vec(), pairs, mode)
}

impl Computed {
    pub fn spec(&self) -> &SseqSpec {
        &self.e1.spec
    }

    pub fn info(&self, pos: &Pos) -> &PosInfo {
        &self.e1.positions[pos]
    }

    /// The state at page $E^P$ for a kept page, or E∞ for `None`.
    pub fn state(&self, page: Option<&OrdinalIndex>) -> &State {
        match page {
            Some(p) => self
                .snapshots
                .get(p)
                .unwrap_or_else(|| panic!("page {p} was not kept")),
            None => &self.final_state,
        }
    }

    /// Representatives of $Z/B$ at a position on a page, with truncation
    /// artifacts projected away.
    pub fn page_basis(&self, page: Option<&OrdinalIndex>, pos: &Pos) -> Vec<u64> {
        let c = &self.state(page)[pos];
        let info = self.info(pos);
        let b = c.b.sum(&tail_space(info));
        c.z.quotient_basis(&b)
    }

    /// Positions with a nonzero E∞ (ignoring truncation artifacts).
    pub fn survivors(&self) -> Vec<(Pos, Vec<u64>)> {
        self.final_state
            .keys()
            .filter_map(|p| {
                let b = self.page_basis(None, p);
                (!b.is_empty()).then(|| (p.clone(), b))
            })
            .collect()
    }

    /// The page on which each record's first pair fired, by record index.
    pub fn fired_records(&self) -> BTreeSet<usize> {
        self.fired.iter().map(|p| p.record).collect()
    }

    /// Total dimension lost by cycles, and total dimension gained by
    /// boundaries; exactness says they agree.
    pub fn accounting(&self) -> (usize, usize) {
        let mut killed_sources = 0;
        let mut killed_targets = 0;
        for (p, c) in &self.final_state {
            killed_sources += self.info(p).lines.len() - c.z.dim();
            killed_targets += c.b.dim();
        }
        (killed_sources, killed_targets)
    }

    /// Restricts to the cells accepted by `keep` and re-executes the logged
    /// pairs whose endpoints both survive the restriction. No validation is
    /// performed: the log of a valid run is replayed.
    pub fn restrict(&self, spec: SseqSpec, keep: impl Fn(&CuSeq) -> bool) -> Computed {
        let mut e1 = self.e1.clone();
        e1.positions.retain(|p, _| keep(&p.cell));
        e1.beyond.retain(|p| keep(&p.cell));
        e1.spec = spec;
        let pairs: Vec<Pair> = self
            .fired
            .iter()
            .filter(|p| keep(&p.source_pos.cell) && keep(&p.target_pos.cell))
            .cloned()
            .collect();
        let records = self.records.clone();
        execute(e1, records, pairs, Mode::Lenient).expect("lenient replay cannot fail")
    }
}

pub fn tail_space(info: &PosInfo) -> Subspace {
    Subspace::spanned_by((0..info.lines.len()).filter(|i| info.tail_mask >> i & 1 == 1).map(|i| 1u64 << i))
}
