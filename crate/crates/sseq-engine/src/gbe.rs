//! Differentials forced by the EHP fiber sequence
//! $\Omega^2 S^{2n+1} \xrightarrow{P} S^n \xrightarrow{E} \Omega S^{n+1}$.
//!
//! On $E^1$ of the Goodwillie spectral sequences, $P_*$ sends $[J]$ to
//! $[J, n]$ and $E_*$ is the identity on cells of excess at least $n + 1$ and
//! zero on the cells $[J, n]$; the two form a short exact sequence.

use std::fmt;

use cu_combinatorics::{mu_tgss, CuSeq};
use stems_db::StemsDb;

use crate::propagate::{find_record, same_class};
use crate::record::{Endpoint, Record, Tag};
use crate::Kind;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GbeError {
    #[error("inputs do not chain: {0}")]
    Precondition(String),
    #[error("condition (*) fails: {0} has a trivial P-image")]
    ConditionStarViolation(Box<Record>),
}

fn strip(e: &Endpoint, n: i64) -> Option<Endpoint> {
    let (j, m) = e.cell.split_last()?;
    (m == n).then(|| Endpoint { cell: j, ..e.clone() })
}

fn mu(c: &CuSeq) -> cu_combinatorics::OrdinalIndex {
    mu_tgss(c)
}

/// Derives $d^{S^{n+1}}(\alpha[J]) = \delta[T]$ from
///
/// * `d1`: $d^{S^n}(\alpha[J]) = \beta[J', n]$,
/// * `d2`: $d^{S^{2n+1}}(\beta[J']) = \gamma[T']$,
/// * `d3`: $d^{S^n}(\delta[T]) = \gamma[T', n]$,
///
/// provided no differential $\tau[I] \to \tau'[I']$ of `s2n1` with
/// $T' < I' < I < J'$ and $|I| < |I'|$ has a trivial $P$-image, i.e. is
/// missing from `sn`.
pub fn gbe_derive(
    db: &StemsDb,
    n: i64,
    d1: &Record,
    d2: &Record,
    d3: &Record,
    s2n1: &[Record],
    sn: &[Record],
) -> Result<Record, GbeError> {
    let pre = |m: &str| Err(GbeError::Precondition(m.to_string()));
    let Some(beta) = strip(&d1.target, n) else {
        return pre("the first target does not lie on a cell [J', n]");
    };
    if beta.cell != d2.source.cell || !same_class(db, &beta.name, &d2.source.name) {
        return pre("the second differential does not start at the first target");
    }
    let Some(gamma) = strip(&d3.target, n) else {
        return pre("the third target does not lie on a cell [T', n]");
    };
    if gamma.cell != d2.target.cell || !same_class(db, &gamma.name, &d2.target.name) {
        return pre("the third target is not the P-image of the second target");
    }
    if d1.source.cell.excess().finite().is_some_and(|e| e < n + 1) || d3.source.cell.excess().finite().is_some_and(|e| e < n + 1)
    {
        return pre("a source does not survive to S^{n+1}");
    }
    let (t1, j1) = (mu(&gamma.cell), mu(&beta.cell));
    for r in s2n1 {
        let (i, i1) = (&r.source.cell, &r.target.cell);
        let (mi, mi1) = (mu(i), mu(i1));
        if !(t1 < mi1 && mi1 < mi && mi < j1 && i.len() < i1.len()) {
            continue;
        }
        let (Ok(pi), Ok(pi1)) = (i.push(n), i1.push(n)) else {
            continue;
        };
        let src = Endpoint { cell: pi, ..r.source.clone() };
        let tgt = Endpoint { cell: pi1, ..r.target.clone() };
        if find_record(db, sn, &src, &tgt).is_none() {
            return Err(GbeError::ConditionStarViolation(Box::new(r.clone())));
        }
    }
    Ok(Record {
        sseq: format!("S{}", n + 1),
        source: d1.source.clone(),
        target: d3.source.clone(),
        tag: Tag::Gbe,
        comment: format!(
            "from {} -> {}; {} -> {}; {} -> {}",
            d1.source, d1.target, d2.source, d2.target, d3.source, d3.target
        ),
    })
}

/// Searches `sn` and `s2n1` for inputs from which [`gbe_derive`] yields
/// `wanted` (a differential of $S^{n+1}$). Only records accepted by `usable`
/// are used as inputs.
pub fn gbe_search(
    db: &StemsDb,
    n: i64,
    wanted: &Record,
    sn: &[Record],
    s2n1: &[Record],
    usable: impl Fn(&Record) -> bool,
) -> Result<Record, GbeError> {
    let mut last = GbeError::Precondition(format!("no chain found for {} -> {}", wanted.source, wanted.target));
    let same = |a: &Endpoint, b: &Endpoint| a.cell == b.cell && same_class(db, &a.name, &b.name);
    for d1 in sn.iter().filter(|r| usable(r) && same(&r.source, &wanted.source)) {
        let Some(beta) = strip(&d1.target, n) else { continue };
        for d2 in s2n1.iter().filter(|r| usable(r) && same(&r.source, &beta)) {
            let Ok(gcell) = d2.target.cell.push(n) else { continue };
            let gamma = Endpoint { cell: gcell, ..d2.target.clone() };
            for d3 in sn.iter().filter(|r| usable(r) && same(&r.target, &gamma) && same(&r.source, &wanted.target)) {
                match gbe_derive(db, n, d1, d2, d3, s2n1, sn) {
                    Ok(r) => return Ok(r),
                    Err(e) => last = e,
                }
            }
        }
    }
    Err(last)
}

/// The cases of the boundary lemma for a differential $d(y) = y'$ of
/// $Y = S^n$ in the triple $X = \Omega^2 S^{2n+1} \to Y \to Z = \Omega S^{n+1}$.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GbtCase {
    /// $d^Z(E_* y) = E_* y'$ is a recorded differential.
    ImageDifferential(Record),
    /// $y' = P_* x$, $d^X(x) = x''$, $d^Y(y'') = P_* x''$ and
    /// $d^Z(E_* y) = E_* y''$.
    Boundary { x: Record, y: Record, z: Record },
    /// $y' = P_* x$ and $E_* y$ supports a recorded differential that does
    /// not factor as in the boundary case (partial witness).
    Hidden { z: Record },
    /// $y' = P_* x$ and $E_* y$ is a permanent cycle.
    Permanent,
}

impl GbtCase {
    pub fn number(&self) -> u8 {
        match self {
            GbtCase::ImageDifferential(_) => 1,
            GbtCase::Boundary { .. } => 3,
            GbtCase::Hidden { .. } => 4,
            GbtCase::Permanent => 5,
        }
    }
}

impl fmt::Display for GbtCase {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            GbtCase::ImageDifferential(r) => write!(f, "case 1: {} -> {}", r.source, r.target),
            GbtCase::Boundary { x, y, z } => write!(
                f,
                "case 3: {} -> {}; {} -> {}; {} -> {}",
                x.source, x.target, y.source, y.target, z.source, z.target
            ),
            GbtCase::Hidden { z } => write!(f, "case 4 (partial witness): {} -> {}", z.source, z.target),
            GbtCase::Permanent => write!(f, "case 5"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unclassifiable: {0}")]
pub struct Unclassifiable(pub String);

/// Classifies a differential `rec` of $S^n$ against the ledgers of
/// $\Omega^2 S^{2n+1}$ (`x`) and $\Omega S^{n+1}$ (`z`). Case 2 cannot occur
/// here, since the connecting map vanishes on $E^1$. The ledgers stand in
/// for the computed instances: a class is permanent when no record leaves
/// it.
pub fn gbt_classify(
    db: &StemsDb,
    n: i64,
    rec: &Record,
    x: &[Record],
    y: &[Record],
    z: &[Record],
) -> Result<GbtCase, Unclassifiable> {
    let zk = Kind::Tgss { n: n + 1 };
    let same = |a: &Endpoint, b: &Endpoint| a.cell == b.cell && same_class(db, &a.name, &b.name);
    let leaving = |ledger: &[Record], e: &Endpoint| ledger.iter().filter(|r| same(&r.source, e)).cloned().collect::<Vec<_>>();
    if zk.contains(&rec.source.cell) && zk.contains(&rec.target.cell) {
        if let Some(r) = z.iter().find(|r| same(&r.source, &rec.source) && same(&r.target, &rec.target)) {
            return Ok(GbtCase::ImageDifferential(r.clone()));
        }
    }
    let Some(xs) = strip(&rec.target, n) else {
        return Err(Unclassifiable(format!("{} -> {}: target is not a P-image and its E-image is not recorded", rec.source, rec.target)));
    };
    let from_ey = if zk.contains(&rec.source.cell) { leaving(z, &rec.source) } else { Vec::new() };
    for dx in leaving(x, &xs) {
        let Ok(c) = dx.target.cell.push(n) else { continue };
        let px = Endpoint { cell: c, ..dx.target.clone() };
        for dy in y.iter().filter(|r| same(&r.target, &px)) {
            if let Some(dz) = from_ey.iter().find(|r| same(&r.target, &dy.source)) {
                return Ok(GbtCase::Boundary {
                    x: dx.clone(),
                    y: dy.clone(),
                    z: dz.clone(),
                });
            }
        }
    }
    match from_ey.first() {
        Some(dz) => Ok(GbtCase::Hidden { z: dz.clone() }),
        None => Ok(GbtCase::Permanent),
    }
}

/// What the Hopf invariant of a lift of $\alpha[J]$ is detected by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HopfReport {
    /// No differential of $S^n$ is recorded from $\alpha[J]$.
    Empty,
    /// $\beta[J']$ survives in $S^{2n+1}$ and detects $H(x)$.
    Detects(Endpoint),
    /// $\beta[J']$ is already killed in $S^{2n+1}$ by the given record, so
    /// $H(x)$ is detected below $[J']$.
    Killed { class: Endpoint, by: Record },
}

/// Given a permanent cycle $\alpha[J]$ of $S^{n+1}$ and the record
/// $d^{S^n}(\alpha[J]) = \beta[J', n]$ (looked up in `sn`), reports what
/// detects the Hopf invariant of a lift.
pub fn hopf_query(db: &StemsDb, n: i64, source: &Endpoint, sn: &[Record], s2n1: &[Record]) -> HopfReport {
    let same = |a: &Endpoint, b: &Endpoint| a.cell == b.cell && same_class(db, &a.name, &b.name);
    let Some(beta) = sn
        .iter()
        .filter(|r| same(&r.source, source))
        .find_map(|r| strip(&r.target, n))
    else {
        return HopfReport::Empty;
    };
    match s2n1.iter().find(|r| same(&r.target, &beta)) {
        Some(by) => HopfReport::Killed { class: beta, by: by.clone() },
        None => HopfReport::Detects(beta),
    }
}
