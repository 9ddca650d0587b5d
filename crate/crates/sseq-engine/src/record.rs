//! Differential records and the ledger file format.
//!
//! A ledger is line oriented:
//!
//! ```text
//! d <sseq-id> <name>(<2^m>)[J]@<offset> -> <name>(<2^m>)[J']@<offset> # <tag>: <comment>
//! ```
//!
//! The group `(2^m)` may be omitted (one line) or be `(∞)`; `@<offset>`
//! may be omitted (offset 0) and multiplies the named class by
//! $2^{\mathrm{offset}}$. Blank lines and lines starting with `#` are
//! ignored. The tag is one of the [`Tag`] names.

use std::fmt;
use std::str::FromStr;

use cu_combinatorics::CuSeq;
use stems_db::{parse_class, ClassExpr, Group};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Inherited,
    Shi,
    PropE,
    PropP,
    Gbe,
    NishidaCandidate,
    Asserted,
    Bizarre,
}

impl Tag {
    pub const ALL: [Tag; 8] = [
        Tag::Inherited,
        Tag::Shi,
        Tag::PropE,
        Tag::PropP,
        Tag::Gbe,
        Tag::NishidaCandidate,
        Tag::Asserted,
        Tag::Bizarre,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Inherited => "inherited",
            Tag::Shi => "shi",
            Tag::PropE => "prop_E",
            Tag::PropP => "prop_P",
            Tag::Gbe => "gbe",
            Tag::NishidaCandidate => "nishida_candidate",
            Tag::Asserted => "asserted",
            Tag::Bizarre => "bizarre",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = LedgerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| LedgerError { line: 0, message: format!("unknown tag {s:?}") })
    }
}

/// One end of a differential: `name(group)[cell]@offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endpoint {
    pub name: String,
    pub group: Group,
    pub cell: CuSeq,
    pub offset: u32,
}

impl Endpoint {
    pub fn new(name: &str, group: Group, cell: CuSeq, offset: u32) -> Self {
        Self {
            name: name.to_string(),
            group,
            cell,
            offset,
        }
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        let (class, offset) = match s.rsplit_once('@') {
            Some((c, o)) => (c, o.parse::<u32>().map_err(|_| format!("bad offset in {s:?}"))?),
            None => (s, 0),
        };
        Self::from_class(&parse_class(class).map_err(|e| e.to_string())?, offset)
    }

    pub fn from_class(c: &ClassExpr, offset: u32) -> Result<Self, String> {
        let cell = c.cell.clone().unwrap_or_default();
        let cell = CuSeq::new(cell).map_err(|e| e.to_string())?;
        Ok(Self {
            name: c.name.clone(),
            group: c.group,
            cell,
            offset,
        })
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}", self.name)?;
        match self.group {
            Group::Single => {}
            Group::Lines(m) => write!(f, "({})", 1u64 << m)?,
            Group::Infinite => write!(f, "(∞)")?,
        }
        write!(f, "{}", self.cell)?;
        if self.offset > 0 {
            write!(f, "@{}", self.offset)?;
        }
        Ok(())
    }
}

/// A differential $d(\mathrm{source}) = \mathrm{target}$.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Record {
    pub sseq: String,
    pub source: Endpoint,
    pub target: Endpoint,
    pub tag: Tag,
    pub comment: String,
}

impl Record {
    pub fn new(sseq: &str, source: Endpoint, target: Endpoint, tag: Tag) -> Self {
        Self {
            sseq: sseq.to_string(),
            source,
            target,
            tag,
            comment: String::new(),
        }
    }

    pub fn with_comment(mut self, comment: impl Into<String>) -> Self {
        self.comment = comment.into();
        self
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "d {} {} -> {} # {}", self.sseq, self.source, self.target, self.tag)?;
        if !self.comment.is_empty() {
            write!(f, ": {}", self.comment)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("ledger line {line}: {message}")]
pub struct LedgerError {
    pub line: usize,
    pub message: String,
}

pub fn parse_record(line: &str) -> Result<Record, String> {
    let (body, meta) = line.split_once('#').ok_or("missing provenance")?;
    let meta = meta.trim();
    let (tag, comment) = match meta.split_once(':') {
        Some((t, c)) => (t.trim(), c.trim()),
        None => (meta, ""),
    };
    let tag: Tag = tag.parse().map_err(|e: LedgerError| e.message)?;
    let body = body.trim().strip_prefix("d ").ok_or("records start with 'd'")?;
    let (sseq, rest) = body.trim().split_once(' ').ok_or("missing sseq id")?;
    let (src, tgt) = rest.split_once("->").ok_or("missing '->'")?;
    Ok(Record {
        sseq: sseq.to_string(),
        source: Endpoint::parse(src.trim())?,
        target: Endpoint::parse(tgt.trim())?,
        tag,
        comment: comment.to_string(),
    })
}

pub fn parse_ledger(text: &str) -> Result<Vec<Record>, LedgerError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(parse_record(t).map_err(|message| LedgerError { line: i + 1, message })?);
    }
    Ok(out)
}

pub fn format_ledger(records: &[Record]) -> String {
    records.iter().map(|r| format!("{r}\n")).collect()
}
