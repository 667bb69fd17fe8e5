//! Permutations of the alphabet `{0, .., p-1}`.

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("images {0:?} do not form a bijection")]
    NotAPermutation(Vec<usize>),
    #[error("cannot parse permutation {0:?}")]
    Syntax(String),
}

/// A bijection of `{0, .., p-1}` stored by its images.
///
/// Composition follows function notation: `(s ∘ t)(x) = s(t(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(p: usize) -> Self {
        Permutation((0..p as u8).collect())
    }

    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let p = images.len();
        let mut seen = vec![false; p];
        for &x in images {
            if x >= p || seen[x] || p > u8::MAX as usize {
                return Err(PermError::NotAPermutation(images.to_vec()));
            }
            seen[x] = true;
        }
        Ok(Permutation(images.iter().map(|&x| x as u8).collect()))
    }

    /// Builds a permutation of degree `p` from disjoint cycles.
    pub fn from_cycles(p: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..p).collect();
        let mut touched = vec![false; p];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= p || touched[x] {
                    return Err(PermError::NotAPermutation(images));
                }
                touched[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Self::from_images(&images)
    }

    /// Parses `id` or a product of disjoint cycles such as `(0 1)(2 3)`.
    /// Cycle entries may be separated by spaces or commas.
    pub fn parse(p: usize, text: &str) -> Result<Self, PermError> {
        let text = text.trim();
        if text == "id" || text == "()" {
            return Ok(Self::identity(p));
        }
        let syntax = || PermError::Syntax(text.to_string());
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(syntax)?;
            let close = inner.find(')').ok_or_else(syntax)?;
            let cycle = inner[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| syntax()))
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(cycle);
            rest = inner[close + 1..].trim_start();
        }
        Self::from_cycles(p, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: u8) -> u8 {
        self.0[x as usize]
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation(inv)
    }

    /// All `p!` permutations, in lexicographic order of image vectors.
    pub fn all(p: usize) -> Vec<Permutation> {
        (0..p as u8).permutations(p).map(Permutation).collect()
    }

    /// Nontrivial disjoint cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cycle = vec![start as u8];
            seen[start] = true;
            let mut x = self.0[start];
            while x as usize != start {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.0[x as usize];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        for cycle in self.cycles() {
            write!(f, "({})", cycle.iter().join(" "))?;
        }
        Ok(())
    }
}
