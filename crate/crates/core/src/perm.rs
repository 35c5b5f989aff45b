use std::fmt;

use crate::error::{Error, Result};

/// Permutation of the letters `0..n`, stored as its image table.
///
/// Composition follows the right-action convention used throughout the
/// crate: `p.then(&q)` maps `x` to `q(p(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n || seen[y] {
                return Err(Error::InvalidAutomaton(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
            seen[y] = true;
        }
        Ok(Permutation(images))
    }

    /// Builds a permutation from disjoint cycles written with 1-based letters,
    /// so `from_cycles(4, &[&[3, 4]])` is the transposition written `(34)`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (pos, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n || touched[x - 1] {
                    return Err(Error::InvalidIndex(format!("bad cycle {cycle:?} for degree {n}")));
                }
                touched[x - 1] = true;
                images[x - 1] = cycle[(pos + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Permutation(inv)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Self {
        Permutation(self.0.iter().map(|&y| other.0[y]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn is_involution(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| self.0[y] == x)
    }

    /// Nontrivial cycles in 1-based letters, each starting at its smallest
    /// letter, ordered by that letter.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.0[x];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with 1-based letters: `(12)(34)`, or `()` for the
    /// identity. Letters are comma-separated once the degree exceeds 9.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        let sep = if self.0.len() > 9 { "," } else { "" };
        for cycle in cycles {
            let body: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", body.join(sep))?;
        }
        Ok(())
    }
}
