use std::fmt;

use cu_combinatorics::{mu_tahss, mu_tehpss, mu_tgss, CuSeq, OrdinalIndex};
use layer_homology::basis;

/// Which transfinite spectral sequence an instance is.
///
/// Cells are CU sequences throughout; for the TEHPSS the last entry of the
/// cell is the sphere index $m$ of $\langle J, m \rangle$.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// The TAHSS for $L(k)_n$.
    Tahss { k: usize, n: i64 },
    /// The TGSS for $S^n$.
    Tgss { n: i64 },
    /// The TEHPSS.
    Tehpss,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Kind::Tahss { k, n } => write!(f, "TAHSS L({k})_{n}"),
            Kind::Tgss { n } => write!(f, "TGSS S^{n}"),
            Kind::Tehpss => write!(f, "TEHPSS"),
        }
    }
}

impl Kind {
    pub fn contains(&self, cell: &CuSeq) -> bool {
        match *self {
            Kind::Tahss { k, n } => cell.len() == k && cell.excess().at_least(n),
            Kind::Tgss { n } => cell.excess().at_least(n),
            Kind::Tehpss => cell.excess().finite().is_some_and(|m| m >= 0),
        }
    }

    /// Filtration index of a cell.
    pub fn index(&self, cell: &CuSeq) -> OrdinalIndex {
        match self {
            Kind::Tahss { .. } => mu_tahss(cell),
            Kind::Tgss { .. } => mu_tgss(cell),
            Kind::Tehpss => {
                let (j, m) = cell.split_last().expect("TEHPSS cells are nonempty");
                mu_tehpss(&j, m).expect("cell is CU")
            }
        }
    }

    /// Total grade of a stem-`stem` class on `cell`.
    pub fn grade(&self, stem: i64, cell: &CuSeq) -> i64 {
        let (len, norm) = (cell.len() as i64, cell.degree());
        match *self {
            Kind::Tahss { .. } => stem + norm,
            Kind::Tgss { n } => stem + n - len + norm,
            Kind::Tehpss => stem + norm - (len - 1),
        }
    }

    /// The stable stem populating `cell` in grade `t`.
    pub fn stem(&self, t: i64, cell: &CuSeq) -> i64 {
        t - self.grade(0, cell)
    }

    /// All cells with a populated grade at most `t_max`.
    pub fn cells(&self, t_max: i64) -> Vec<CuSeq> {
        let mut out = Vec::new();
        match *self {
            Kind::Tahss { k, n } => {
                for d in 0..=t_max {
                    out.extend(basis(k, n, None, d));
                }
            }
            Kind::Tgss { n } => {
                let mut k = 0usize;
                // The smallest cell of length k has degree n(2^k - 1).
                while n * ((1i64 << k) - 1) - k as i64 <= t_max - n {
                    for d in 0..=t_max - n + k as i64 {
                        out.extend(basis(k, n, None, d));
                    }
                    k += 1;
                }
            }
            Kind::Tehpss => {
                let mut len = 1usize;
                while (1i64 << (len - 1)) - 1 - (len as i64 - 1) <= t_max {
                    for d in 0..=t_max + len as i64 - 1 {
                        out.extend(basis(len, 0, None, d));
                    }
                    len += 1;
                }
            }
        }
        out.retain(|c| self.grade(0, c) <= t_max);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cu(v: &[i64]) -> CuSeq {
        CuSeq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn grades() {
        assert_eq!(Kind::Tahss { k: 2, n: 1 }.grade(0, &cu(&[3, 1])), 4);
        // Chart row = t - n = stem + ‖J‖ - |J|.
        assert_eq!(Kind::Tgss { n: 1 }.grade(1, &CuSeq::empty()), 2);
        assert_eq!(Kind::Tgss { n: 1 }.grade(0, &cu(&[1])), 1);
        assert_eq!(Kind::Tehpss.grade(0, &cu(&[1])), 1);
        assert_eq!(Kind::Tehpss.grade(6, &cu(&[8, 2])), 15);
        assert_eq!(Kind::Tehpss.grade(0, &cu(&[0])), 0);
    }

    #[test]
    fn cell_sets() {
        let cells = Kind::Tgss { n: 1 }.cells(3);
        assert!(cells.contains(&CuSeq::empty()));
        assert!(cells.contains(&cu(&[3])));
        assert!(cells.contains(&cu(&[3, 1])));
        assert!(!cells.contains(&cu(&[4])));
        let cells = Kind::Tehpss.cells(3);
        assert!(cells.contains(&cu(&[0])) && cells.contains(&cu(&[2])) && cells.contains(&cu(&[3, 1])));
        assert!(Kind::Tahss { k: 0, n: 1 }.cells(10) == vec![CuSeq::empty()]);
    }
}
