//! Vertices of the p-regular rooted tree, identified with finite words over
//! the alphabet `{0, .., p-1}`. The root is the empty word.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("branching degree must be at least 2, got {0}")]
    BadAlphabet(usize),
    #[error("letter {letter} is out of range for alphabet of size {p}")]
    LetterOutOfRange { letter: usize, p: usize },
    #[error("the root has no parent")]
    RootHasNoParent,
    #[error("vertex {vertex} is not in the subtree rooted at {root}")]
    NotInSubtree { vertex: Vertex, root: Vertex },
    #[error("cannot parse vertex {0:?}")]
    BadVertex(String),
}

/// The letter set `{0, .., p-1}` of a p-regular rooted tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(p: usize) -> Result<Self, TreeError> {
        if p < 2 || p > u8::MAX as usize {
            return Err(TreeError::BadAlphabet(p));
        }
        Ok(Alphabet(p))
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0
    }

    pub fn letters(self) -> impl Iterator<Item = u8> {
        (0..self.0).map(|a| a as u8)
    }

    /// Checks that every letter of `v` belongs to this alphabet.
    pub fn check(self, v: &Vertex) -> Result<(), TreeError> {
        match v.letters().iter().find(|&&a| a as usize >= self.0) {
            Some(&a) => Err(TreeError::LetterOutOfRange { letter: a as usize, p: self.0 }),
            None => Ok(()),
        }
    }

    /// Number of vertices on level `n`, i.e. `p^n`.
    pub fn level_size(self, n: usize) -> usize {
        self.0.pow(n as u32)
    }

    /// Number of vertices of length strictly less than `n`.
    pub fn ball_size(self, n: usize) -> usize {
        (self.level_size(n) - 1) / (self.0 - 1)
    }

    /// The children `v0, .., v(p-1)` of `v`, in letter order.
    pub fn children(self, v: &Vertex) -> Vec<Vertex> {
        self.letters().map(|a| v.child(a)).collect()
    }

    /// All `p^n` words of length `n`, in lexicographic order.
    pub fn level_vertices(self, n: usize) -> Vec<Vertex> {
        let mut level = vec![Vertex::root()];
        for _ in 0..n {
            level = level.iter().flat_map(|v| self.children(v)).collect();
        }
        level
    }

    /// All vertices of length `< n`, level by level, each level in
    /// lexicographic order.
    pub fn ball(self, n: usize) -> Vec<Vertex> {
        (0..n).flat_map(|k| self.level_vertices(k)).collect()
    }

    /// Position of `v` in the level-by-level enumeration returned by [`Alphabet::ball`].
    pub fn ball_index(self, v: &Vertex) -> usize {
        let rank = v.letters().iter().fold(0usize, |acc, &a| acc * self.0 + a as usize);
        self.ball_size(v.len()) + rank
    }
}

/// A vertex of the tree: a finite word over the alphabet.
///
/// Ordering is the lexicographic order on words, which restricted to one
/// level is the canonical enumeration order used everywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vertex(Vec<u8>);

impl Vertex {
    pub fn root() -> Self {
        Vertex(Vec::new())
    }

    pub fn from_letters(letters: impl Into<Vec<u8>>) -> Self {
        Vertex(letters.into())
    }

    #[inline]
    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// Length of the word, which is also the level of the vertex.
    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// Same as [`Vertex::is_root`].
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.is_root()
    }

    pub fn child(&self, a: u8) -> Vertex {
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.extend_from_slice(&self.0);
        letters.push(a);
        Vertex(letters)
    }

    pub fn parent(&self) -> Result<Vertex, TreeError> {
        match self.0.split_last() {
            Some((_, init)) => Ok(Vertex(init.to_vec())),
            None => Err(TreeError::RootHasNoParent),
        }
    }

    /// The prefix of length `n` (or the vertex itself if it is shorter).
    pub fn prefix(&self, n: usize) -> Vertex {
        Vertex(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Vertex) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Two vertices are joined by an edge iff one is a one-letter extension
    /// of the other.
    pub fn is_adjacent(&self, other: &Vertex) -> bool {
        let (short, long) = if self.len() < other.len() { (self, other) } else { (other, self) };
        long.len() == short.len() + 1 && short.is_prefix_of(long)
    }

    pub fn in_subtree(&self, subtree: &SubtreeRef) -> bool {
        subtree.root.is_prefix_of(self)
    }

    /// The canonical identification `T_u -> T`: drop the subtree root prefix.
    pub fn strip_prefix(&self, subtree: &SubtreeRef) -> Result<Vertex, TreeError> {
        match self.0.strip_prefix(subtree.root.letters()) {
            Some(rest) => Ok(Vertex(rest.to_vec())),
            None => Err(TreeError::NotInSubtree { vertex: self.clone(), root: subtree.root.clone() }),
        }
    }

    /// Inverse of [`Vertex::strip_prefix`]: `u · self`.
    pub fn graft(&self, subtree: &SubtreeRef) -> Vertex {
        subtree.root.concat(self)
    }

    pub fn concat(&self, suffix: &Vertex) -> Vertex {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&suffix.0);
        Vertex(letters)
    }

    /// Machine rendering: bare letters, root is the empty string.
    /// Letters `>= 10` are written dot-separated.
    pub fn to_machine_string(&self) -> String {
        if self.0.iter().all(|&a| a < 10) {
            self.0.iter().map(|&a| char::from(b'0' + a)).collect()
        } else {
            self.0.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(".")
        }
    }
}

/// Human rendering: the root prints as `ε`.
impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            f.write_str("ε")
        } else {
            f.write_str(&self.to_machine_string())
        }
    }
}

/// Accepts `ε`, `e`, `-` or the empty string for the root, a digit string
/// such as `0110`, or dot-separated letters such as `10.3.0`.
impl FromStr for Vertex {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "e" || s == "-" {
            return Ok(Vertex::root());
        }
        let bad = || TreeError::BadVertex(s.to_string());
        if s.contains('.') {
            s.split('.').map(|part| part.parse::<u8>().map_err(|_| bad())).collect::<Result<_, _>>().map(Vertex)
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad)).collect::<Result<_, _>>().map(Vertex)
        }
    }
}

/// The subtree `T_u` of all vertices having `u` as a prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubtreeRef {
    pub root: Vertex,
}

impl SubtreeRef {
    pub fn at(root: Vertex) -> Self {
        SubtreeRef { root }
    }
}
