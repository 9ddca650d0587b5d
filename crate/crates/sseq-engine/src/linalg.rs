//! Subspaces of $\mathbb{F}_2^{64}$ in reduced row echelon form.

/// A subspace, stored as fully reduced rows with distinct leading (highest)
/// bits.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Subspace {
    rows: Vec<u64>,
}

fn lead(v: u64) -> u64 {
    1 << (63 - v.leading_zeros())
}

impl Subspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn full(dim: usize) -> Self {
        Self {
            rows: (0..dim).rev().map(|i| 1u64 << i).collect(),
        }
    }

    pub fn spanned_by(vs: impl IntoIterator<Item = u64>) -> Self {
        let mut s = Self::new();
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[u64] {
        &self.rows
    }

    pub fn reduce(&self, mut v: u64) -> u64 {
        for &r in &self.rows {
            if v & lead(r) != 0 {
                v ^= r;
            }
        }
        v
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Adds `v`; returns false if it was already contained.
    pub fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let l = lead(v);
        for r in &mut self.rows {
            if *r & l != 0 {
                *r ^= v;
            }
        }
        self.rows.push(v);
        self.rows.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for &v in &other.rows {
            s.insert(v);
        }
        s
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|&v| other.contains(v))
    }

    /// Representatives of a basis of `self / other`, each reduced modulo
    /// `other` (and modulo each other).
    pub fn quotient_basis(&self, other: &Subspace) -> Vec<u64> {
        let mut acc = other.clone();
        let mut out = Subspace::new();
        for &v in &self.rows {
            let r = acc.reduce(v);
            if r != 0 {
                acc.insert(r);
                out.insert(r);
            }
        }
        out.rows.into_iter().map(|v| other.reduce(v)).collect()
    }

    /// Keeps only the coordinates in `mask`.
    pub fn project(&self, mask: u64) -> Subspace {
        Subspace::spanned_by(self.rows.iter().map(|v| v & mask))
    }
}

/// Solves for the combinations of `images` that vanish: returns, for each
/// kernel vector, the bitmask of participating indices.
pub fn kernel(images: &[u64]) -> Vec<u64> {
    assert!(images.len() <= 64);
    let mut rows: Vec<(u64, u64)> = images.iter().enumerate().map(|(i, &v)| (v, 1u64 << i)).collect();
    let mut out = Vec::new();
    let mut pivots: Vec<(u64, u64)> = Vec::new();
    for (mut v, mut c) in rows.drain(..) {
        for &(p, pc) in &pivots {
            if v & lead(p) != 0 {
                v ^= p;
                c ^= pc;
            }
        }
        if v == 0 {
            out.push(c);
        } else {
            pivots.push((v, c));
            pivots.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        }
    }
    out
}
