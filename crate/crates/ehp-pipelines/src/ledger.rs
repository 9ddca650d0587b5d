//! Shipped ledgers: their transcription from the tables, provenance
//! classification, and loading.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use sseq_engine::gbe::gbe_search;
use sseq_engine::propagate::contains_record;
use sseq_engine::{format_ledger, parse_ledger, pushforward_e, pushforward_p, Endpoint, Kind, Record, Tag};
use stems_db::StemsDb;

use crate::build::{shi_records, sphere_records, tahss_records, Ledgers};
use crate::golden::{bundled, Entry, GoldenTable, Mark};
use crate::nishida::{candidate_pairs, line_pairs, nishida_candidates, subsumed, ATTACHING};
use layer_homology::steenrod_on_cell;
use stems_db::Product;

/// Arrow records of a table, one per source line of a stacked entry. Marks
/// and section keys are kept alongside so the caller can classify.
pub fn arrows(table: &GoldenTable, sseq: &str) -> Result<Vec<(Record, Option<Mark>, i64)>, String> {
    let mut out = Vec::new();
    for s in &table.sections {
        for e in &s.entries {
            if let Entry::Arrow { source, target, mark } = e {
                if target.len() != 1 {
                    return Err(format!("stacked target in section {}", s.key));
                }
                let t = Endpoint::from_class(&target[0], 0)?;
                for c in source {
                    let r = Record::new(sseq, Endpoint::from_class(c, 0)?, t.clone(), Tag::Asserted);
                    out.push((r, *mark, s.key));
                }
            }
        }
    }
    Ok(out)
}

/// Differentials just beyond the tabulated range: (table, source, target,
/// mark, section key). The three $L(3)$ records have sources in grade 24
/// and are needed to cut the grade-23 row down to the tabulated survivors;
/// the $S^1$ record is the last differential needed for acyclicity through
/// stem 20, with its source one row past the chart.
pub const BEYOND_TABLE: [(&str, &str, &str, Option<Mark>, i64); 4] = [
    ("L3", "ν²[11,5,2]", "(ση²+εη)[9,4,1]", None, 24),
    ("L3", "ν[13,6,2]", "ν²[11,5,1]", None, 24),
    ("L3", "1[15,7,2]", "ν[13,6,1]", None, 24),
    ("S1", "θ_3[8]", "1[15,7]", Some(Mark::Bizarre), 21),
];

/// Last section key of each bundled table.
fn last_key(id: &str) -> i64 {
    match id {
        s if s.starts_with('L') => 23,
        s if s.starts_with('S') => 20,
        _ => 20,
    }
}

/// Grade horizon used when assembling the context for classification.
const HORIZON: i64 = 24;

/// Ids of the shipped ledgers, in dependency order.
pub const IDS: [&str; 10] = ["L1", "L2", "L3", "S1", "S2", "S3", "S4", "S5", "S6", "EHP"];

/// File name of a shipped ledger.
pub fn file_name(id: &str) -> String {
    format!("{}.ledger", id.to_lowercase())
}

fn raw_ledgers() -> Result<(Ledgers, Vec<(String, Vec<(Record, Option<Mark>, i64)>)>), String> {
    let mut ledgers = Ledgers::default();
    let mut marked = Vec::new();
    for id in IDS {
        let table = GoldenTable::parse(bundled::by_id(id).expect("bundled table")).map_err(|e| e.to_string())?;
        let mut rows = arrows(&table, id)?;
        for (_, a, b, mark, key) in BEYOND_TABLE.iter().filter(|x| x.0 == id) {
            let r = Record::new(id, Endpoint::parse(a)?, Endpoint::parse(b)?, Tag::Asserted);
            rows.push((r, *mark, *key));
        }
        let recs = rows
            .iter()
            .map(|(r, m, _)| {
                let tag = if *m == Some(Mark::Star) { Tag::Gbe } else { Tag::Asserted };
                Record { tag, ..r.clone() }
            })
            .collect();
        ledgers.by_id.insert(id.to_string(), recs);
        marked.push((id.to_string(), rows));
    }
    Ok((ledgers, marked))
}

/// The table mark a record is printed with, determined by its provenance.
pub fn mark_for(r: &Record) -> Option<Mark> {
    match (r.sseq.as_str(), r.tag) {
        ("S1", Tag::Bizarre) => Some(Mark::Bizarre),
        (s, Tag::Bizarre) if s.starts_with('S') => Some(Mark::DoubleStar),
        ("EHP", Tag::Bizarre) => Some(Mark::TripleStar),
        ("EHP", Tag::Asserted) => Some(Mark::DoubleStar),
        (_, Tag::Gbe) => Some(Mark::Star),
        _ => None,
    }
}

fn sphere_of(id: &str) -> Option<i64> {
    id.strip_prefix('S')?.parse().ok()
}

fn where_(id: &str, key: i64) -> String {
    if key > last_key(id) {
        return format!("beyond the tabulated range ({})", place(id, key).replace("chart, ", "").replace("table, ", ""));
    }
    place(id, key)
}

fn place(id: &str, key: i64) -> String {
    match id {
        "EHP" => format!("EHP table, grade {key}"),
        s if s.starts_with('L') => format!("L({}) table, grade {key}", &s[1..]),
        s => format!("S^{} chart, row {key}", &s[1..]),
    }
}

/// For a record whose cells are joined by a nonzero $\mathrm{Sq}^r_*$,
/// $r \in \{1, 2, 4, 8\}$, but which no candidate proposes: why the
/// attaching map does not account for it.
pub fn attaching_exception(db: &StemsDb, r: &Record) -> Option<String> {
    let n = 1;
    for (deg, theta) in ATTACHING {
        if !steenrod_on_cell(deg, &r.source.cell, n).contains(&r.target.cell) {
            continue;
        }
        let product = match db.multiply(theta, &r.source.name) {
            Ok(Product::Known(p)) => db.vector_name(&p.vector),
            Ok(Product::Zero) => "0".to_string(),
            _ => "unknown".to_string(),
        };
        return Some(format!(
            "Sq^{deg} joins the cells, but {theta}·{} = {product} is not {}",
            r.source.name, r.target.name
        ));
    }
    None
}

fn classify_tahss(db: &StemsDb, id: &str, rows: &[(Record, Option<Mark>, i64)]) -> Vec<Record> {
    let k: usize = id[1..].parse().expect("L<k>");
    let pairs = candidate_pairs(db, &nishida_candidates(db, k, 1, HORIZON + 1));
    rows.iter()
        .map(|(r, _, key)| {
            let place = where_(id, *key);
            if subsumed(db, r, &pairs) {
                Record { tag: Tag::NishidaCandidate, comment: place, ..r.clone() }
            } else {
                let comment = match attaching_exception(db, r) {
                    Some(why) => format!("{place}; exception: {why}"),
                    None => place,
                };
                Record { tag: Tag::Asserted, comment, ..r.clone() }
            }
        })
        .collect()
}

fn classify_tgss(db: &StemsDb, n: i64, rows: &[(Record, Option<Mark>, i64)], raw: &Ledgers, done: &Ledgers) -> Result<Vec<Record>, String> {
    let id = format!("S{n}");
    let kind = Kind::Tgss { n };
    let below = if n > 1 {
        pushforward_e(&sphere_records(n - 1, HORIZON + n, db, raw), kind, &id).records
    } else {
        Vec::new()
    };
    let below_gbe: Vec<Record> = done.get(&format!("S{}", n - 1)).iter().filter(|r| r.tag == Tag::Gbe).cloned().collect();
    let below_bizarre: Vec<Record> = done.get(&format!("S{}", n - 1)).iter().filter(|r| r.tag == Tag::Bizarre).cloned().collect();
    let shi = shi_records(n, HORIZON + n, db);
    let p_images = pushforward_p(&sphere_records(2 * n + 1, HORIZON + 2 * n + 1, db, raw), n, &id).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for (r, mark, key) in rows {
        let place = where_(&id, *key);
        let (tag, comment) = match *mark {
            Some(Mark::Bizarre) => (Tag::Bizarre, place),
            Some(Mark::DoubleStar) => {
                if !contains_record(db, &below_bizarre, &r.source, &r.target) {
                    return Err(format!("{id}: {} -> {} is marked as an induced bizarre differential but is not the E-image of one", r.source, r.target));
                }
                (Tag::Bizarre, format!("{place}; E-image of the S^{} bizarre differential", n - 1))
            }
            Some(Mark::Star) => {
                let sn = sphere_records(n - 1, HORIZON + n, db, raw);
                let s2 = sphere_records(2 * n - 1, HORIZON + 2 * n, db, raw);
                match gbe_search(db, n - 1, r, &sn, &s2, |x| x.tag != Tag::Gbe) {
                    Ok(d) => (Tag::Gbe, format!("{place}; {}", d.comment)),
                    Err(e) => {
                        if contains_record(db, &below_gbe, &r.source, &r.target) {
                            (Tag::Gbe, format!("{place}; E-image of the S^{} boundary-effect differential", n - 1))
                        } else {
                            return Err(format!("{id}: {} -> {}: {e}", r.source, r.target));
                        }
                    }
                }
            }
            Some(m) => return Err(format!("{id}: unexpected mark {}", m.as_str())),
            None => {
                if contains_record(db, &shi, &r.source, &r.target) {
                    (Tag::Shi, place)
                } else if contains_record(db, &below, &r.source, &r.target) {
                    (Tag::PropE, place)
                } else if contains_record(db, &p_images, &r.source, &r.target) {
                    (Tag::PropP, place)
                } else {
                    (Tag::Asserted, place)
                }
            }
        };
        out.push(Record { tag, comment, ..r.clone() });
    }
    Ok(out)
}

/// Whether `r` has the cells and line pairs of a record in `pool`.
fn lifts(db: &StemsDb, r: &Record, pool: &[Record]) -> bool {
    let Some(ps) = line_pairs(db, r) else { return false };
    let have: BTreeSet<_> = pool.iter().filter_map(|x| line_pairs(db, x)).flatten().collect();
    ps.iter().all(|p| have.contains(p))
}

fn classify_tehpss(db: &StemsDb, rows: &[(Record, Option<Mark>, i64)], raw: &Ledgers, done: &Ledgers) -> Result<Vec<Record>, String> {
    let mut out = Vec::new();
    let charts: Vec<Record> = (1..=6).flat_map(|n| done.get(&format!("S{n}")).to_vec()).collect();
    for (r, mark, key) in rows {
        let place = where_("EHP", *key);
        let k = r.source.cell.len();
        let (tag, comment) = match *mark {
            None => {
                let pool = tahss_records(k, 1, HORIZON + 1, raw);
                if !lifts(db, r, &pool) {
                    return Err(format!("EHP: {} -> {} does not lift an L({k}) differential", r.source, r.target));
                }
                (Tag::Inherited, format!("{place}; lift of the L({k}) differential"))
            }
            Some(m @ (Mark::Star | Mark::TripleStar)) => {
                let want = if m == Mark::Star { Tag::Gbe } else { Tag::Bizarre };
                let pool: Vec<Record> = charts.iter().filter(|x| x.tag == want).cloned().collect();
                // A stacked source lifts through any of its members.
                let stack = rows.iter().filter(|(x, xm, xk)| *xk == *key && *xm == Some(m) && x.target == r.target);
                let Some(src) = stack
                    .flat_map(|(x, _, _)| pool.iter().find(|y| lifts(db, x, std::slice::from_ref(y))))
                    .next()
                else {
                    return Err(format!("EHP: {} -> {} does not lift a marked chart differential", r.source, r.target));
                };
                (want, format!("{place}; lift of the {} differential {} -> {}", src.sseq, src.source, src.target))
            }
            Some(Mark::DoubleStar) => (Tag::Asserted, format!("{place}; the rogue differential")),
            Some(m) => return Err(format!("EHP: unexpected mark {}", m.as_str())),
        };
        out.push(Record { tag, comment, ..r.clone() });
    }
    Ok(out)
}

/// Transcribes the bundled tables into classified ledgers. Every record is
/// tagged with the strongest provenance that can be re-derived here.
pub fn transcribe(db: &StemsDb) -> Result<Ledgers, String> {
    let (raw, marked) = raw_ledgers()?;
    let mut done = Ledgers::default();
    for (id, rows) in &marked {
        let recs = if id.starts_with('L') {
            classify_tahss(db, id, rows)
        } else if let Some(n) = sphere_of(id) {
            classify_tgss(db, n, rows, &raw, &done)?
        } else {
            classify_tehpss(db, rows, &raw, &done)?
        };
        done.by_id.insert(id.clone(), recs);
    }
    Ok(done)
}

fn header(id: &str) -> String {
    let what = match id {
        "EHP" => "TEHPSS differentials crossing between EHP filtrations".to_string(),
        s if s.starts_with('L') => format!("TAHSS differentials of L({}) lowering the last cell entry", &s[1..]),
        s => format!("TGSS differentials of S^{} between cell lengths", &s[1..]),
    };
    format!("# {what}\n")
}

mod shipped {
    pub const FILES: [(&str, &str); 10] = [
        ("L1", include_str!("../data/ledgers/l1.ledger")),
        ("L2", include_str!("../data/ledgers/l2.ledger")),
        ("L3", include_str!("../data/ledgers/l3.ledger")),
        ("S1", include_str!("../data/ledgers/s1.ledger")),
        ("S2", include_str!("../data/ledgers/s2.ledger")),
        ("S3", include_str!("../data/ledgers/s3.ledger")),
        ("S4", include_str!("../data/ledgers/s4.ledger")),
        ("S5", include_str!("../data/ledgers/s5.ledger")),
        ("S6", include_str!("../data/ledgers/s6.ledger")),
        ("EHP", include_str!("../data/ledgers/ehp.ledger")),
    ];
}

impl Ledgers {
    /// The ledgers shipped with the crate.
    pub fn bundled() -> Self {
        let mut out = Ledgers::default();
        for (id, text) in shipped::FILES {
            let recs = parse_ledger(text).unwrap_or_else(|e| panic!("shipped ledger {id}: {e}"));
            out.by_id.insert(id.to_string(), recs);
        }
        out
    }

    /// Loads `<id>.ledger` for every known id from a directory; missing
    /// files give empty ledgers.
    pub fn load_dir(dir: &Path) -> Result<Self, String> {
        let mut out = Ledgers::default();
        for id in IDS {
            let path = dir.join(file_name(id));
            let text = match fs::read_to_string(&path) {
                Ok(t) => t,
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
                Err(e) => return Err(format!("{}: {e}", path.display())),
            };
            let recs = parse_ledger(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            out.by_id.insert(id.to_string(), recs);
        }
        Ok(out)
    }

    /// Ledger file contents, keyed by id.
    pub fn files(&self) -> Vec<(String, String)> {
        self.by_id
            .iter()
            .map(|(id, recs)| (file_name(id), header(id) + &format_ledger(recs)))
            .collect()
    }

    pub fn write_dir(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        for (name, text) in self.files() {
            fs::write(dir.join(name), text)?;
        }
        Ok(())
    }
}
