//! Table notation for classes: `name(2^m)[J]`.
//!
//! `x(2^m)[J]` stands for the $m$ lines $x[J], 2x[J], \ldots, 2^{m-1}x[J]$;
//! `x(∞)[J]` for all multiples of an infinite-order $x$. The cell is absent
//! for classes in the 0-column of a chart.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    /// No parenthetical: a single line.
    Single,
    /// `(2^m)`: `m` consecutive lines.
    Lines(u32),
    /// `(∞)`: every remaining line.
    Infinite,
}

impl Group {
    pub fn count(self) -> Option<u32> {
        match self {
            Group::Single => Some(1),
            Group::Lines(m) => Some(m),
            Group::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassExpr {
    pub name: String,
    pub group: Group,
    pub cell: Option<Vec<i64>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("cannot parse class {0:?}")]
pub struct NotationError(pub String);

pub fn parse_class(s: &str) -> Result<ClassExpr, NotationError> {
    let err = || NotationError(s.to_string());
    let s = s.trim();
    let (head, cell) = match s.strip_suffix(']') {
        Some(rest) => {
            let open = rest.rfind('[').ok_or_else(err)?;
            let inner = &rest[open + 1..];
            let cell = if inner.is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|_| err()))
                    .collect::<Result<Vec<_>, _>>()?
            };
            (&rest[..open], Some(cell))
        }
        None => (s, None),
    };
    let (name, group) = match head.strip_suffix(')') {
        Some(rest) if rest.rfind('(').is_some() => {
            let open = rest.rfind('(').unwrap();
            let inner = &rest[open + 1..];
            if inner == "∞" {
                (&rest[..open], Group::Infinite)
            } else if let Ok(n) = inner.parse::<u64>() {
                if !n.is_power_of_two() || n < 2 {
                    return Err(err());
                }
                (&rest[..open], Group::Lines(n.trailing_zeros()))
            } else {
                (head, Group::Single)
            }
        }
        _ => (head, Group::Single),
    };
    if name.is_empty() {
        return Err(err());
    }
    Ok(ClassExpr {
        name: name.to_string(),
        group,
        cell,
    })
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}", self.name)?;
        match self.group {
            Group::Single => {}
            Group::Lines(m) => write!(f, "({})", 1u64 << m)?,
            Group::Infinite => write!(f, "(∞)")?,
        }
        if let Some(cell) = &self.cell {
            let parts: Vec<String> = cell.iter().map(i64::to_string).collect();
            write!(f, "[{}]", parts.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses() {
        let c = parse_class("ν(4)[2]").unwrap();
        assert_eq!((c.name.as_str(), c.group, c.cell), ("ν", Group::Lines(2), Some(vec![2])));
        let c = parse_class("2(∞)[1]").unwrap();
        assert_eq!((c.name.as_str(), c.group), ("2", Group::Infinite));
        let c = parse_class("(ση²+εη)[8,2]").unwrap();
        assert_eq!((c.name.as_str(), c.group, c.cell), ("(ση²+εη)", Group::Single, Some(vec![8, 2])));
        let c = parse_class("α_{8/5}(16)[6]").unwrap();
        assert_eq!((c.name.as_str(), c.group), ("α_{8/5}", Group::Lines(4)));
        let c = parse_class("4ν").unwrap();
        assert_eq!((c.name.as_str(), c.cell), ("4ν", None));
        let c = parse_class("1(∞)[0]").unwrap();
        assert_eq!(c.cell, Some(vec![0]));
        assert!(parse_class("ν(3)[2]").is_err());
        assert!(parse_class("ν[2,x]").is_err());
    }

    #[test]
    fn round_trip() {
        for s in ["ν(4)[2]", "2(∞)[1]", "(ση²+εη)[8,2]", "κ̄", "1(∞)", "α_{6/3}(4)[10]"] {
            assert_eq!(parse_class(s).unwrap().to_string(), s);
        }
    }
}
