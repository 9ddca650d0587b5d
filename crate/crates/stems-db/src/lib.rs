//! The stable-stems database.
//!
//! Generators of the 2-primary stable stems, their orders, linear aliases
//! (alternative spellings and $v_1$-periodic names such as $\alpha_{8/3}$),
//! a product table, and the Hopf invariant tables. The data is plain text;
//! see `data/stems.db` for the grammar. Structure is recorded, never
//! computed: products absent from the table are [`Product::Unknown`].
//!
//! Elements of a stem are handled in the 2-adic associated graded: a
//! generator of order $2^m$ contributes lines $2^i x$ for $0 \le i < m$, and
//! a [`StemVector`] is an $\mathbb{F}_2$-combination of such lines.

mod notation;
mod parse;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

pub use notation::{parse_class, ClassExpr, Group, NotationError};

/// The bundled database.
pub const BUNDLED: &str = include_str!("../data/stems.db");

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DbError {
    #[error("line {line}: cannot parse {field}")]
    ParseError { line: usize, field: String },
    #[error("line {line}: reference to unknown name {name:?}")]
    DanglingReference { line: usize, name: String },
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("no recorded Hopf invariant for {0:?}")]
    NoEntry(String),
}

/// Order of a generator: $2^m$, or infinite (only in the 0-stem).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    /// Whether $2^i x \neq 0$.
    pub fn admits(self, offset: u32) -> bool {
        match self {
            Order::Finite(m) => offset < m,
            Order::Infinite => true,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{}", 1u64 << m),
            Order::Infinite => write!(f, "∞"),
        }
    }
}

pub type GenId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub stem: i64,
    pub order: Order,
}

/// One line of the associated graded: $2^{\mathrm{offset}} \cdot \mathrm{gen}$.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    pub gen: GenId,
    pub offset: u32,
}

/// An $\mathbb{F}_2$-combination of lines in a single stem.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StemVector {
    pub lines: BTreeSet<Line>,
}

impl StemVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn line(gen: GenId, offset: u32) -> Self {
        Self {
            lines: std::iter::once(Line { gen, offset }).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn add_line(&mut self, l: Line) {
        if !self.lines.remove(&l) {
            self.lines.insert(l);
        }
    }

    pub fn add(&mut self, other: &StemVector) {
        for &l in &other.lines {
            self.add_line(l);
        }
    }

    /// Multiplication by $2^s$ in the associated graded.
    pub fn shift(&self, s: u32, db: &StemsDb) -> StemVector {
        let mut out = StemVector::zero();
        for l in &self.lines {
            let offset = l.offset + s;
            if db.generator(l.gen).order.admits(offset) {
                out.add_line(Line { gen: l.gen, offset });
            }
        }
        out
    }
}

/// A resolved name: its stem and its vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolved {
    pub stem: i64,
    pub vector: StemVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Product {
    Known(Resolved),
    Zero,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HopfKind {
    Shi,
    Hi,
    Ghi,
}

/// A recorded Hopf invariant $x \mapsto \beta[J]$.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfInvariantEntry {
    pub kind: HopfKind,
    /// The element, as written in the table.
    pub element: String,
    /// The sphere, for generalized Hopf invariants.
    pub sphere: Option<i64>,
    /// The coefficient name $\beta$.
    pub coefficient: String,
    /// The cell $J$ (for [`HopfKind::Hi`] the last entry is $m$).
    pub cell: Vec<i64>,
    /// The `# ...` comment of the record.
    pub provenance: String,
}

/// $\pi_t(S^n)$ as recorded for the convergence audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnstableGroup {
    pub sphere: i64,
    pub t: i64,
    pub group: String,
}

#[derive(Debug, Clone)]
struct Alias {
    stem: i64,
    vector: StemVector,
    display: bool,
}

/// The immutable database.
#[derive(Debug, Clone, Default)]
pub struct StemsDb {
    generators: Vec<Generator>,
    by_name: HashMap<String, GenId>,
    by_stem: BTreeMap<i64, Vec<GenId>>,
    aliases: HashMap<String, Alias>,
    products: HashMap<(String, String), Option<String>>,
    shi: HashMap<StemVectorKey, HopfInvariantEntry>,
    hi: HashMap<StemVectorKey, HopfInvariantEntry>,
    ghi: HashMap<(i64, StemVectorKey), HopfInvariantEntry>,
    unstable: Vec<UnstableGroup>,
}

type StemVectorKey = (i64, StemVector);

impl StemsDb {
    pub fn bundled() -> Self {
        Self::load(BUNDLED).expect("bundled stems database is well formed")
    }

    pub fn load(source: &str) -> Result<Self, DbError> {
        parse::load(source)
    }

    pub fn generator(&self, id: GenId) -> &Generator {
        &self.generators[id]
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Generators of a stem, in the order recorded.
    pub fn stem(&self, stem: i64) -> &[GenId] {
        self.by_stem.get(&stem).map_or(&[], Vec::as_slice)
    }

    pub fn max_stem(&self) -> i64 {
        self.by_stem.keys().next_back().copied().unwrap_or(0)
    }

    /// Resolves a name: a generator, an alias, or either prefixed by a power
    /// of two ("8σ", "16α_{8/5}", "2" for twice the unit).
    pub fn resolve(&self, name: &str) -> Result<Resolved, DbError> {
        if let Some(r) = self.resolve_bare(name) {
            return Ok(r);
        }
        let digits: String = name.chars().take_while(|c| c.is_ascii_digit()).collect();
        if !digits.is_empty() {
            let coeff: u64 = digits.parse().map_err(|_| DbError::UnknownName(name.into()))?;
            if coeff.is_power_of_two() {
                let rest = &name[digits.len()..];
                let rest = if rest.is_empty() { "1" } else { rest };
                if let Some(r) = self.resolve_bare(rest) {
                    let s = coeff.trailing_zeros();
                    return Ok(Resolved {
                        stem: r.stem,
                        vector: r.vector.shift(s, self),
                    });
                }
            }
        }
        Err(DbError::UnknownName(name.into()))
    }

    fn resolve_bare(&self, name: &str) -> Option<Resolved> {
        if let Some(&g) = self.by_name.get(name) {
            return Some(Resolved {
                stem: self.generators[g].stem,
                vector: StemVector::line(g, 0),
            });
        }
        self.aliases.get(name).map(|a| Resolved {
            stem: a.stem,
            vector: a.vector.clone(),
        })
    }

    /// Name of a single line, preferring display aliases ("α_6") and
    /// otherwise writing the coefficient ("8σ").
    pub fn line_name(&self, l: Line) -> String {
        let g = &self.generators[l.gen];
        let v = StemVector::line(l.gen, l.offset);
        if l.offset > 0 {
            let mut best: Option<&String> = None;
            for (name, a) in &self.aliases {
                if a.display && a.vector == v && best.is_none_or(|b| name < b) {
                    best = Some(name);
                }
            }
            if let Some(name) = best {
                return name.clone();
            }
            if g.name == "1" {
                return (1u64 << l.offset).to_string();
            }
            return format!("{}{}", 1u64 << l.offset, g.name);
        }
        g.name.clone()
    }

    /// A name for a vector: an alias if one matches exactly, otherwise the
    /// sum of its line names.
    pub fn vector_name(&self, v: &StemVector) -> String {
        if v.lines.len() == 1 {
            return self.line_name(*v.lines.iter().next().unwrap());
        }
        let mut best: Option<&String> = None;
        for (name, a) in &self.aliases {
            if &a.vector == v && name.starts_with('(') && best.is_none_or(|b| name < b) {
                best = Some(name);
            }
        }
        if let Some(name) = best {
            return name.clone();
        }
        if v.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = v.lines.iter().map(|&l| self.line_name(l)).collect();
        format!("({})", parts.join("+"))
    }

    /// Table lookup of $a \cdot b$. Multiplication by a power of two shifts
    /// offsets, the unit acts trivially, and a product landing in an empty
    /// stem is zero; otherwise the product table is consulted in both orders.
    pub fn multiply(&self, a: &str, b: &str) -> Result<Product, DbError> {
        let ra = self.resolve(a)?;
        let rb = self.resolve(b)?;
        let stem = ra.stem + rb.stem;
        if ra.vector.is_zero() || rb.vector.is_zero() {
            return Ok(Product::Zero);
        }
        for (x, y) in [(&ra, &rb), (&rb, &ra)] {
            if x.stem == 0 {
                let l = *x.vector.lines.iter().next().unwrap();
                if x.vector.lines.len() == 1 && self.generators[l.gen].name == "1" {
                    let v = y.vector.shift(l.offset, self);
                    return Ok(if v.is_zero() {
                        Product::Zero
                    } else {
                        Product::Known(Resolved { stem: y.stem, vector: v })
                    });
                }
            }
        }
        if self.stem(stem).is_empty() {
            return Ok(Product::Zero);
        }
        let key = |x: &str, y: &str| (x.to_string(), y.to_string());
        let hit = self
            .products
            .get(&key(a, b))
            .or_else(|| self.products.get(&key(b, a)))
            .or_else(|| self.lookup_by_vector(&ra, &rb));
        match hit {
            None => Ok(Product::Unknown),
            Some(None) => Ok(Product::Zero),
            Some(Some(name)) => Ok(Product::Known(self.resolve(name)?)),
        }
    }

    fn lookup_by_vector(&self, ra: &Resolved, rb: &Resolved) -> Option<&Option<String>> {
        self.products.iter().find_map(|((x, y), v)| {
            let (rx, ry) = (self.resolve(x).ok()?, self.resolve(y).ok()?);
            let same = |p: &Resolved, q: &Resolved| p.stem == q.stem && p.vector == q.vector;
            ((same(&rx, ra) && same(&ry, rb)) || (same(&rx, rb) && same(&ry, ra))).then_some(v)
        })
    }

    fn hopf_key(&self, name: &str) -> Result<StemVectorKey, DbError> {
        let r = self.resolve(name)?;
        Ok((r.stem, r.vector))
    }

    /// The recorded stable Hopf invariant of an element.
    pub fn lookup_shi(&self, name: &str) -> Result<&HopfInvariantEntry, DbError> {
        let key = self.hopf_key(name)?;
        self.shi.get(&key).ok_or_else(|| DbError::NoEntry(name.into()))
    }

    /// The recorded (unstable) Hopf invariant $\beta[J,m]$ of an element.
    pub fn lookup_hi(&self, name: &str) -> Result<&HopfInvariantEntry, DbError> {
        let key = self.hopf_key(name)?;
        self.hi.get(&key).ok_or_else(|| DbError::NoEntry(name.into()))
    }

    pub fn lookup_ghi(&self, sphere: i64, name: &str) -> Result<&HopfInvariantEntry, DbError> {
        let key = self.hopf_key(name)?;
        self.ghi
            .get(&(sphere, key))
            .ok_or_else(|| DbError::NoEntry(name.into()))
    }

    pub fn shi_entries(&self) -> impl Iterator<Item = &HopfInvariantEntry> {
        self.shi.values()
    }

    pub fn hi_entries(&self) -> impl Iterator<Item = &HopfInvariantEntry> {
        self.hi.values()
    }

    pub fn ghi_entries(&self) -> impl Iterator<Item = &HopfInvariantEntry> {
        self.ghi.values()
    }

    pub fn unstable_groups(&self) -> &[UnstableGroup] {
        &self.unstable
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn db() -> StemsDb {
        StemsDb::bundled()
    }

    #[test]
    fn orders() {
        let db = db();
        let order = |n: &str| db.generator(db.resolve(n).unwrap().vector.lines.iter().next().unwrap().gen).order;
        assert_eq!(order("ν"), Order::Finite(3));
        assert_eq!(order("σ"), Order::Finite(4));
        assert_eq!(order("1"), Order::Infinite);
        assert_eq!(db.stem(3).len(), 1);
        assert_eq!(db.stem(7).len(), 1);
        assert!(db.stem(4).is_empty());
        assert!(db.stem(12).is_empty());
    }

    #[test]
    fn aliases_and_coefficients() {
        let db = db();
        assert_eq!(db.resolve("η³").unwrap(), db.resolve("4ν").unwrap());
        assert_eq!(db.resolve("α_6").unwrap(), db.resolve("4α_{6/3}").unwrap());
        assert_eq!(db.resolve("α_8").unwrap(), db.resolve("16α_{8/5}").unwrap());
        assert_eq!(db.resolve("ηε").unwrap(), db.resolve("εη").unwrap());
        assert_eq!(db.resolve("ν³").unwrap().vector.lines.len(), 2);
        assert!(db.resolve("32α_{8/5}").unwrap().vector.is_zero());
        assert_eq!(db.resolve("2").unwrap().vector, StemVector::line(0, 1));
        assert!(matches!(db.resolve("ζ"), Err(DbError::UnknownName(_))));
    }

    #[test]
    fn display_names() {
        let db = db();
        let name = |n: &str| db.vector_name(&db.resolve(n).unwrap().vector);
        assert_eq!(name("8σ"), "8σ");
        assert_eq!(name("4α_{6/3}"), "α_6");
        assert_eq!(name("2α_{8/5}"), "α_{8/4}");
        assert_eq!(name("ν³"), "(ση²+εη)");
        assert_eq!(name("η³"), "4ν");
    }

    #[test]
    fn products() {
        let db = db();
        let eta2 = db.resolve("η²").unwrap();
        assert_eq!(db.multiply("η", "η").unwrap(), Product::Known(eta2));
        assert_eq!(db.multiply("1", "κ").unwrap(), Product::Known(db.resolve("κ").unwrap()));
        assert_eq!(db.multiply("2", "ν").unwrap(), Product::Known(db.resolve("2ν").unwrap()));
        assert_eq!(db.multiply("2", "η").unwrap(), Product::Zero);
        assert_eq!(db.multiply("η", "ν").unwrap(), Product::Zero);
        assert_eq!(db.multiply("ν", "ν²").unwrap(), Product::Known(db.resolve("ν³").unwrap()));
        assert_eq!(db.multiply("ν", "η").unwrap(), Product::Zero);
        assert_eq!(db.multiply("η", "α_5η").unwrap(), Product::Known(db.resolve("α_6").unwrap()));
        assert_eq!(db.multiply("σ", "θ_3").unwrap(), Product::Unknown);
        assert!(matches!(db.multiply("η", "ξ"), Err(DbError::UnknownName(_))));
    }

    #[test]
    fn hopf_invariants() {
        let db = db();
        let e = db.lookup_shi("η").unwrap();
        assert_eq!((e.coefficient.as_str(), e.cell.as_slice()), ("1", &[1][..]));
        let e = db.lookup_shi("σ").unwrap();
        assert_eq!((e.coefficient.as_str(), e.cell.as_slice()), ("1", &[7][..]));
        let e = db.lookup_shi("ν²").unwrap();
        assert_eq!((e.coefficient.as_str(), e.cell.as_slice()), ("ν", &[3][..]));
        assert_eq!(db.lookup_shi("ηκ").unwrap(), db.lookup_shi("κη").unwrap());
        let e = db.lookup_hi("κη").unwrap();
        assert_eq!(e.cell, vec![8, 2]);
        assert!(matches!(db.lookup_shi("σ³"), Err(DbError::NoEntry(_))));
    }
}
