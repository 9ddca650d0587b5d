//! Golden tables: the text format shared by the emitter and the bundled
//! transcriptions.
//!
//! ```text
//! # title
//! @grade 5                  (or `@row 5`; a trailing `outgoing-only`
//! ν(4)[2] -> 2ν(4)[1]        marks a section listing only arrow sources)
//! η²[13,4] <- α_5[10] (*)   (target-first arrows of the EHP table)
//! box 1[1] => η             (a survivor and the class it detects)
//! # erratum: ...            (comments inside a section are kept)
//! ```
//!
//! A class is `name(group)[cell]`; a stack of classes spanning one entry
//! is written `{a ; b}`.

use std::fmt;

use stems_db::{parse_class, ClassExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    /// `(*)`: a geometric boundary effect.
    Star,
    /// `(**)`: asserted.
    DoubleStar,
    /// `(***)`: lifted from a bizarre differential.
    TripleStar,
    /// `(--)`: bizarre.
    Bizarre,
}

impl Mark {
    pub fn as_str(self) -> &'static str {
        match self {
            Mark::Star => "(*)",
            Mark::DoubleStar => "(**)",
            Mark::TripleStar => "(***)",
            Mark::Bizarre => "(--)",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Mark::Star, Mark::DoubleStar, Mark::TripleStar, Mark::Bizarre]
            .into_iter()
            .find(|m| m.as_str() == s)
    }
}

/// Several classes listed as one entry.
pub type Stack = Vec<ClassExpr>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Plain(Stack),
    Arrow {
        source: Stack,
        target: Stack,
        mark: Option<Mark>,
    },
    Boxed {
        class: ClassExpr,
        detects: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Grade,
    Row,
}

impl Axis {
    fn as_str(self) -> &'static str {
        match self {
            Axis::Grade => "grade",
            Axis::Row => "row",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub key: i64,
    pub outgoing_only: bool,
    pub entries: Vec<Entry>,
    pub comments: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenTable {
    pub title: String,
    pub axis: Axis,
    /// Arrows are written target-first.
    pub reversed: bool,
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("golden line {line}: {message}")]
pub struct GoldenError {
    pub line: usize,
    pub message: String,
}

fn parse_stack(s: &str) -> Result<Stack, String> {
    let s = s.trim();
    let inner = match s.strip_prefix('{') {
        Some(rest) => rest.strip_suffix('}').ok_or("unclosed stack")?,
        None => return Ok(vec![parse_class(s).map_err(|e| e.0)?]),
    };
    inner.split(';').map(|c| parse_class(c.trim()).map_err(|e| e.0)).collect()
}

fn fmt_stack(s: &Stack) -> String {
    if s.len() == 1 {
        s[0].to_string()
    } else {
        let parts: Vec<String> = s.iter().map(|c| c.to_string()).collect();
        format!("{{{}}}", parts.join(" ; "))
    }
}

fn parse_entry(line: &str, reversed: bool) -> Result<Entry, String> {
    if let Some(rest) = line.strip_prefix("box ") {
        let (c, d) = rest.split_once(" => ").ok_or("box without =>")?;
        return Ok(Entry::Boxed {
            class: parse_class(c.trim()).map_err(|e| e.0)?,
            detects: d.trim().to_string(),
        });
    }
    let (body, mark) = match line.rsplit_once(' ') {
        Some((b, m)) if Mark::parse(m).is_some() => (b, Mark::parse(m)),
        _ => (line, None),
    };
    let arrow = if reversed { " <- " } else { " -> " };
    match body.split_once(arrow) {
        Some((l, r)) => {
            let (source, target) = if reversed { (r, l) } else { (l, r) };
            Ok(Entry::Arrow {
                source: parse_stack(source)?,
                target: parse_stack(target)?,
                mark,
            })
        }
        None if mark.is_some() => Err("mark without arrow".into()),
        None => Ok(Entry::Plain(parse_stack(body)?)),
    }
}

impl GoldenTable {
    pub fn parse(text: &str) -> Result<Self, GoldenError> {
        let mut title = String::new();
        let mut axis = None;
        let mut sections: Vec<Section> = Vec::new();
        let reversed = text.lines().any(|l| l.contains(" <- "));
        for (i, raw) in text.lines().enumerate() {
            let err = |message: String| GoldenError { line: i + 1, message };
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                match sections.last_mut() {
                    Some(s) => s.comments.push(c.trim().to_string()),
                    None => title = c.trim().to_string(),
                }
                continue;
            }
            if let Some(h) = line.strip_prefix('@') {
                let mut words = h.split_whitespace();
                let a = match words.next() {
                    Some("grade") => Axis::Grade,
                    Some("row") => Axis::Row,
                    _ => return Err(err("unknown section header".into())),
                };
                if axis.is_some_and(|x| x != a) {
                    return Err(err("mixed section headers".into()));
                }
                axis = Some(a);
                let key = words
                    .next()
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| err("bad section key".into()))?;
                let outgoing_only = match words.next() {
                    None => false,
                    Some("outgoing-only") => true,
                    Some(w) => return Err(err(format!("unexpected {w:?}"))),
                };
                sections.push(Section {
                    key,
                    outgoing_only,
                    entries: Vec::new(),
                    comments: Vec::new(),
                });
                continue;
            }
            let section = sections.last_mut().ok_or_else(|| err("entry before header".into()))?;
            section.entries.push(parse_entry(line, reversed).map_err(err)?);
        }
        Ok(Self {
            title,
            axis: axis.unwrap_or(Axis::Grade),
            reversed,
            sections,
        })
    }

    pub fn section(&self, key: i64) -> Option<&Section> {
        self.sections.iter().find(|s| s.key == key)
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        self.write(f, false)
    }
}

impl Entry {
    fn write(&self, f: &mut fmt::Formatter, reversed: bool) -> fmt::Result {
        match self {
            Entry::Plain(s) => write!(f, "{}", fmt_stack(s)),
            Entry::Boxed { class, detects } => write!(f, "box {class} => {detects}"),
            Entry::Arrow { source, target, mark } => {
                if reversed {
                    write!(f, "{} <- {}", fmt_stack(target), fmt_stack(source))?;
                } else {
                    write!(f, "{} -> {}", fmt_stack(source), fmt_stack(target))?;
                }
                match mark {
                    Some(m) => write!(f, " {}", m.as_str()),
                    None => Ok(()),
                }
            }
        }
    }
}

impl fmt::Display for GoldenTable {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        writeln!(f, "# {}", self.title)?;
        for s in &self.sections {
            write!(f, "@{} {}", self.axis.as_str(), s.key)?;
            if s.outgoing_only {
                write!(f, " outgoing-only")?;
            }
            writeln!(f)?;
            for c in &s.comments {
                writeln!(f, "# {c}")?;
            }
            for e in &s.entries {
                e.write(f, self.reversed)?;
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// The transcribed tables shipped with the crate.
pub mod bundled {
    pub const L1: &str = include_str!("../data/golden/l1.txt");
    pub const L2: &str = include_str!("../data/golden/l2.txt");
    pub const L3: &str = include_str!("../data/golden/l3.txt");
    pub const S1: &str = include_str!("../data/golden/s1.txt");
    pub const S2: &str = include_str!("../data/golden/s2.txt");
    pub const S3: &str = include_str!("../data/golden/s3.txt");
    pub const S4: &str = include_str!("../data/golden/s4.txt");
    pub const S5: &str = include_str!("../data/golden/s5.txt");
    pub const S6: &str = include_str!("../data/golden/s6.txt");
    pub const EHP: &str = include_str!("../data/golden/ehpss.txt");

    pub fn by_id(id: &str) -> Option<&'static str> {
        Some(match id {
            "L1" => L1,
            "L2" => L2,
            "L3" => L3,
            "S1" => S1,
            "S2" => S2,
            "S3" => S3,
            "S4" => S4,
            "S5" => S5,
            "S6" => S6,
            "EHP" => EHP,
            _ => return None,
        })
    }

    pub const IDS: [&str; 10] = ["L1", "L2", "L3", "S1", "S2", "S3", "S4", "S5", "S6", "EHP"];

    /// File name of a table, as shipped under `data/golden`.
    pub fn file_name(id: &str) -> String {
        match id {
            "EHP" => "ehpss.txt".to_string(),
            _ => format!("{}.txt", id.to_lowercase()),
        }
    }
}
