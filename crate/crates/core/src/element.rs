//! Elements of `Aut T` given as group words over the states of a finite
//! self-similar automaton.
//!
//! The action is a left action. A word `f1 f2 .. fk` acts as the composite
//! `f1 ∘ f2 ∘ .. ∘ fk`, and every element satisfies the wreath recursion
//!
//! ```text
//! g(a·w) = π_g(a) · g|_a(w)
//! ```
//!
//! from which `π_{gh} = π_g ∘ π_h`, `(gh)|_a = g|_{π_h(a)} · h|_a`,
//! `π_{g⁻¹} = π_g⁻¹` and `(g⁻¹)|_a = (g|_{π_g⁻¹(a)})⁻¹`.
//!
//! Words are never eagerly normalized. Equality is decided semantically by
//! exploring section words: sections of a word of length `L` are words of
//! length at most `L`, so at most `(2·#states)^L` distinct words are ever
//! visited and the exploration terminates.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::automaton::{Automaton, AutomatonDef, StateSpec};
use crate::perm::Permutation;
use crate::portrait::Portrait;
use crate::tree::{Alphabet, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("elements belong to different automata")]
    AutomatonMismatch,
    #[error("element is not in the level-{level} stabilizer")]
    NotInLevelStabilizer { level: usize },
    #[error("malformed portrait: {0}")]
    MalformedPortrait(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("alphabets differ ({0} vs {1})")]
    AlphabetMismatch(usize, usize),
}

/// One letter of a group word: a state or its formal inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub state: u32,
    pub inverse: bool,
}

impl Factor {
    pub fn new(state: u32) -> Self {
        Factor { state, inverse: false }
    }

    pub fn inv(self) -> Self {
        Factor { state: self.state, inverse: !self.inverse }
    }
}

/// An automorphism of the tree denoted by a group word over an automaton.
#[derive(Clone)]
pub struct Element {
    automaton: Arc<Automaton>,
    word: Vec<Factor>,
}

// Drops factors that act trivially and cancels adjacent `s s⁻¹` pairs.
fn normalize(aut: &Automaton, word: impl IntoIterator<Item = Factor>) -> Vec<Factor> {
    let mut out: Vec<Factor> = Vec::new();
    for f in word {
        if aut.is_trivial_state(f.state) {
            continue;
        }
        if out.last() == Some(&f.inv()) {
            out.pop();
        } else {
            out.push(f);
        }
    }
    out
}

// Pushes `letter` through the word from the right; returns the image letter
// and the (normalized) section of the word at `letter`.
fn step(aut: &Automaton, word: &[Factor], letter: u8) -> (u8, Vec<Factor>) {
    let mut x = letter;
    let mut section = vec![Factor::new(0); word.len()];
    for (i, f) in word.iter().enumerate().rev() {
        if f.inverse {
            let pre = aut.inverse_output(f.state).apply(x);
            section[i] = Factor { state: aut.transition(f.state, pre), inverse: true };
            x = pre;
        } else {
            section[i] = Factor::new(aut.transition(f.state, x));
            x = aut.output(f.state).apply(x);
        }
    }
    (x, normalize(aut, section))
}

fn word_activity(aut: &Automaton, word: &[Factor]) -> Permutation {
    let p = aut.alphabet().size();
    word.iter().fold(Permutation::identity(p), |acc, f| {
        let pi = if f.inverse { aut.inverse_output(f.state) } else { aut.output(f.state) };
        acc.compose(pi)
    })
}

/// Breadth-first search over distinct section words. Returns the first
/// vertex `u` (shortest first) together with a letter `x` such that the
/// section at `u` moves `x`, i.e. the element moves `u·x` while fixing `u`.
fn explore(aut: &Automaton, word: &[Factor], max_level: Option<usize>) -> Option<(Vertex, u8)> {
    let start = normalize(aut, word.iter().copied());
    let mut seen: HashSet<Vec<Factor>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start, Vertex::root()));
    let letters: Vec<u8> = aut.alphabet().letters().collect();
    while let Some((w, path)) = queue.pop_front() {
        if max_level.is_some_and(|m| path.len() >= m) {
            continue;
        }
        if w.is_empty() {
            continue;
        }
        let mut children = Vec::with_capacity(letters.len());
        for &x in &letters {
            let (y, sect) = step(aut, &w, x);
            if y != x {
                return Some((path, x));
            }
            children.push((x, sect));
        }
        for (x, sect) in children {
            if seen.insert(sect.clone()) {
                queue.push_back((sect, path.child(x)));
            }
        }
    }
    None
}

impl Element {
    pub fn identity(automaton: &Arc<Automaton>) -> Self {
        Element { automaton: Arc::clone(automaton), word: Vec::new() }
    }

    pub fn from_word(automaton: &Arc<Automaton>, word: Vec<Factor>) -> Self {
        debug_assert!(word.iter().all(|f| (f.state as usize) < automaton.state_count()));
        Element { automaton: Arc::clone(automaton), word }
    }

    pub fn state(automaton: &Arc<Automaton>, state: u32) -> Self {
        Self::from_word(automaton, vec![Factor::new(state)])
    }

    /// The element given by a single state, looked up by name.
    pub fn generator(automaton: &Arc<Automaton>, name: &str) -> Result<Self, GroupError> {
        automaton
            .state_index(name)
            .map(|s| Self::state(automaton, s))
            .ok_or_else(|| GroupError::UnknownState(name.to_string()))
    }

    pub fn automaton(&self) -> &Arc<Automaton> {
        &self.automaton
    }

    pub fn word(&self) -> &[Factor] {
        &self.word
    }

    pub fn alphabet(&self) -> Alphabet {
        self.automaton.alphabet()
    }

    pub fn same_automaton(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.automaton, &other.automaton) || *self.automaton == *other.automaton
    }

    /// The same element with its word freely reduced and trivial states removed.
    pub fn normalized(&self) -> Element {
        Element { automaton: Arc::clone(&self.automaton), word: normalize(&self.automaton, self.word.iter().copied()) }
    }

    /// The root permutation `π_g`.
    pub fn activity(&self) -> Permutation {
        word_activity(&self.automaton, &self.word)
    }

    pub fn section_at_letter(&self, a: u8) -> Element {
        let (_, word) = step(&self.automaton, &self.word, a);
        Element { automaton: Arc::clone(&self.automaton), word }
    }

    /// `g|_v`, obtained by iterating first-level sections along `v`.
    pub fn section(&self, v: &Vertex) -> Element {
        let mut word = normalize(&self.automaton, self.word.iter().copied());
        for &a in v.letters() {
            word = step(&self.automaton, &word, a).1;
        }
        Element { automaton: Arc::clone(&self.automaton), word }
    }

    pub fn apply(&self, v: &Vertex) -> Vertex {
        let mut word = normalize(&self.automaton, self.word.iter().copied());
        let mut image = Vec::with_capacity(v.len());
        for &a in v.letters() {
            if word.is_empty() {
                image.push(a);
                continue;
            }
            let (b, next) = step(&self.automaton, &word, a);
            image.push(b);
            word = next;
        }
        Vertex::from_letters(image)
    }

    /// The product `g·h`, acting as `v ↦ g(h(v))`.
    pub fn compose(&self, other: &Element) -> Result<Element, GroupError> {
        if !self.same_automaton(other) {
            return Err(GroupError::AutomatonMismatch);
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Ok(Element { automaton: Arc::clone(&self.automaton), word })
    }

    pub fn inverse(&self) -> Element {
        Element { automaton: Arc::clone(&self.automaton), word: self.word.iter().rev().map(|f| f.inv()).collect() }
    }

    pub fn power(&self, n: i64) -> Element {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut word = Vec::with_capacity(base.word.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            word.extend_from_slice(&base.word);
        }
        Element { automaton: Arc::clone(&self.automaton), word }
    }

    /// `k·g·k⁻¹`.
    pub fn conjugate_by(&self, k: &Element) -> Result<Element, GroupError> {
        k.compose(self)?.compose(&k.inverse())
    }

    /// Exact test for the trivial automorphism.
    pub fn is_identity(&self) -> bool {
        explore(&self.automaton, &self.word, None).is_none()
    }

    pub fn equals(&self, other: &Element) -> Result<bool, GroupError> {
        Ok(self.compose(&other.inverse())?.is_identity())
    }

    /// A shortest vertex moved by the element, if any has length `<= max_len`.
    pub fn first_moved_vertex(&self, max_len: Option<usize>) -> Option<Vertex> {
        explore(&self.automaton, &self.word, max_len).map(|(u, x)| u.child(x))
    }

    /// Largest `n <= limit` such that the element lies in `stab(n)`.
    pub fn stabilizer_depth(&self, limit: usize) -> usize {
        match explore(&self.automaton, &self.word, Some(limit)) {
            Some((u, _)) => u.len(),
            None => limit,
        }
    }

    /// Membership in the level stabilizer `stab(n)`.
    pub fn in_level_stabilizer(&self, n: usize) -> bool {
        self.stabilizer_depth(n) >= n
    }

    /// The activities of all sections at vertices of length `< depth`.
    pub fn portrait(&self, depth: usize) -> Portrait {
        let alphabet = self.alphabet();
        let mut perms = Vec::with_capacity(alphabet.ball_size(depth));
        let mut level = vec![normalize(&self.automaton, self.word.iter().copied())];
        for k in 0..depth {
            let mut next = Vec::new();
            for w in &level {
                perms.push(word_activity(&self.automaton, w));
                if k + 1 < depth {
                    next.extend(alphabet.letters().map(|a| step(&self.automaton, w, a).1));
                }
            }
            level = next;
        }
        Portrait::new(alphabet, depth, perms).expect("portrait has the right shape")
    }

    /// Wreath recursion: the first-level sections and the root activity.
    pub fn phi(&self) -> (Vec<Element>, Permutation) {
        let sections = self.alphabet().letters().map(|a| self.section_at_letter(a)).collect();
        (sections, self.activity())
    }

    /// The sections at all level-`n` vertices, in lexicographic order. Defined on `stab(n)`.
    pub fn phi_n(&self, n: usize) -> Result<Vec<Element>, GroupError> {
        if !self.in_level_stabilizer(n) {
            return Err(GroupError::NotInLevelStabilizer { level: n });
        }
        let mut level = vec![self.normalized()];
        for _ in 0..n {
            level = level.iter().flat_map(|g| g.phi().0).collect();
        }
        Ok(level)
    }

    /// Rewrites this element over `target`, given where this automaton's
    /// states sit inside it.
    fn reindex(&self, target: &Arc<Automaton>, offset: u32) -> Element {
        Element {
            automaton: Arc::clone(target),
            word: self.word.iter().map(|f| Factor { state: f.state + offset, inverse: f.inverse }).collect(),
        }
    }
}

/// Transports two elements onto the disjoint union of their automata so that
/// they can be composed and compared.
pub fn common_automaton(g: &Element, h: &Element) -> Result<(Element, Element), GroupError> {
    if g.same_automaton(h) {
        return Ok((g.clone(), h.with_automaton(g.automaton())));
    }
    let (a, b) = (g.automaton(), h.automaton());
    if a.alphabet() != b.alphabet() {
        return Err(GroupError::AlphabetMismatch(a.alphabet().size(), b.alphabet().size()));
    }
    let mut names: Vec<String> = a.names().to_vec();
    let mut renamed = Vec::with_capacity(b.state_count());
    for n in b.names() {
        let mut candidate = n.clone();
        while names.contains(&candidate) {
            candidate.push('\'');
        }
        names.push(candidate.clone());
        renamed.push(candidate);
    }
    let spec = |aut: &Automaton, s: u32, name: &str, table: &[String]| StateSpec {
        name: name.to_string(),
        output: aut.output(s).images().iter().map(|&x| x as usize).collect(),
        transitions: aut.alphabet().letters().map(|x| table[aut.transition(s, x) as usize].clone()).collect(),
    };
    let mut states = Vec::new();
    for s in 0..a.state_count() as u32 {
        states.push(spec(a, s, &names[s as usize], a.names()));
    }
    for s in 0..b.state_count() as u32 {
        states.push(spec(b, s, &renamed[s as usize], &renamed));
    }
    let def = AutomatonDef {
        alphabet: a.alphabet().size(),
        states,
        identity: a.identity_state().map(|s| a.state_name(s).to_string()),
    };
    let union = Automaton::from_def(&def).expect("union of valid automata is valid").into_shared();
    Ok((g.reindex(&union, 0), h.reindex(&union, a.state_count() as u32)))
}

impl Element {
    // Same element, sharing `aut`'s allocation; requires structural equality.
    fn with_automaton(&self, aut: &Arc<Automaton>) -> Element {
        Element { automaton: Arc::clone(aut), word: self.word.clone() }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, factor) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(self.automaton.state_name(factor.state))?;
            if factor.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}
