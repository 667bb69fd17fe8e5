//! Finite self-similar automata: each state carries an output permutation
//! (its activity) and one transition per letter (its first-level sections).
//!
//! Text format, one automaton per file:
//!
//! ```text
//! alphabet: 2
//! state e = id | e e
//! state t = (0 1) | e t
//! ```
//!
//! Blank lines and `#` comments are ignored. The first state of the form
//! `id | s s .. s` (pointing to itself everywhere) is flagged as the
//! identity state.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::perm::Permutation;
use crate::tree::Alphabet;

/// Raw, unvalidated automaton description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonDef {
    pub alphabet: usize,
    pub states: Vec<StateSpec>,
    pub identity: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpec {
    pub name: String,
    /// Images of `0, .., p-1` under the state's output.
    pub output: Vec<usize>,
    pub transitions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    BadAlphabet(usize),
    NoStates,
    DuplicateState(String),
    UnknownState { state: String, target: String },
    NotAPermutation { state: String, images: Vec<usize> },
    WrongArity { state: String, expected: usize, found: usize },
    UnknownIdentity(String),
    IdentityNotTrivial(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadAlphabet(p) => write!(f, "BadAlphabet: alphabet size {p} is below 2"),
            Violation::NoStates => write!(f, "NoStates: automaton declares no states"),
            Violation::DuplicateState(s) => write!(f, "DuplicateState: {s}"),
            Violation::UnknownState { state, target } => {
                write!(f, "UnknownState: state {state} transitions to undeclared {target}")
            }
            Violation::NotAPermutation { state, images } => {
                write!(f, "NotAPermutation: output of {state} is {images:?}")
            }
            Violation::WrongArity { state, expected, found } => {
                write!(f, "WrongArity: state {state} has {found} entries, expected {expected}")
            }
            Violation::UnknownIdentity(s) => write!(f, "UnknownIdentity: {s} is not declared"),
            Violation::IdentityNotTrivial(s) => {
                write!(f, "IdentityNotTrivial: {s} must have output id and loop to itself")
            }
        }
    }
}

/// Outcome of [`validate_automaton`]; valid iff there are no violations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate_automaton(def: &AutomatonDef) -> ValidationReport {
    let mut violations = Vec::new();
    let p = def.alphabet;
    if p < 2 {
        violations.push(Violation::BadAlphabet(p));
    }
    if def.states.is_empty() {
        violations.push(Violation::NoStates);
    }
    let mut index = HashMap::new();
    for (i, s) in def.states.iter().enumerate() {
        if index.insert(s.name.as_str(), i).is_some() {
            violations.push(Violation::DuplicateState(s.name.clone()));
        }
    }
    for s in &def.states {
        if s.output.len() != p {
            violations.push(Violation::WrongArity { state: s.name.clone(), expected: p, found: s.output.len() });
        } else if Permutation::from_images(&s.output).is_err() {
            violations.push(Violation::NotAPermutation { state: s.name.clone(), images: s.output.clone() });
        }
        if s.transitions.len() != p {
            violations.push(Violation::WrongArity { state: s.name.clone(), expected: p, found: s.transitions.len() });
        }
        for t in &s.transitions {
            if !index.contains_key(t.as_str()) {
                violations.push(Violation::UnknownState { state: s.name.clone(), target: t.clone() });
            }
        }
    }
    if let Some(id) = &def.identity {
        match index.get(id.as_str()) {
            None => violations.push(Violation::UnknownIdentity(id.clone())),
            Some(&i) => {
                let s = &def.states[i];
                let trivial_output = s.output.iter().enumerate().all(|(a, &b)| a == b);
                if !trivial_output || s.transitions.iter().any(|t| t != id) {
                    violations.push(Violation::IdentityNotTrivial(id.clone()));
                }
            }
        }
    }
    ValidationReport { violations }
}

/// A validated automaton with states resolved to indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    alphabet: Alphabet,
    names: Vec<String>,
    outputs: Vec<Permutation>,
    inverse_outputs: Vec<Permutation>,
    transitions: Vec<Vec<u32>>,
    identity: Option<u32>,
    // states all of whose descendants have trivial output
    trivial: Vec<bool>,
}

impl Automaton {
    pub fn from_def(def: &AutomatonDef) -> Result<Automaton, ValidationReport> {
        let report = validate_automaton(def);
        if !report.is_valid() {
            return Err(report);
        }
        let index: HashMap<&str, u32> =
            def.states.iter().enumerate().map(|(i, s)| (s.name.as_str(), i as u32)).collect();
        let outputs: Vec<Permutation> =
            def.states.iter().map(|s| Permutation::from_images(&s.output).expect("validated")).collect();
        let transitions: Vec<Vec<u32>> =
            def.states.iter().map(|s| s.transitions.iter().map(|t| index[t.as_str()]).collect()).collect();

        let mut trivial: Vec<bool> = outputs.iter().map(Permutation::is_identity).collect();
        loop {
            let mut changed = false;
            for s in 0..trivial.len() {
                if trivial[s] && transitions[s].iter().any(|&t| !trivial[t as usize]) {
                    trivial[s] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        Ok(Automaton {
            alphabet: Alphabet::new(def.alphabet)
                .map_err(|_| ValidationReport { violations: vec![Violation::BadAlphabet(def.alphabet)] })?,
            names: def.states.iter().map(|s| s.name.clone()).collect(),
            inverse_outputs: outputs.iter().map(Permutation::inverse).collect(),
            outputs,
            transitions,
            identity: def.identity.as_ref().map(|n| index[n.as_str()]),
            trivial,
        })
    }

    pub fn parse(text: &str) -> Result<Automaton, ParseError> {
        let def = parse_automaton_file(text)?;
        Automaton::from_def(&def).map_err(ParseError::Validation)
    }

    pub fn into_shared(self) -> Arc<Automaton> {
        Arc::new(self)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, s: u32) -> &str {
        &self.names[s as usize]
    }

    pub fn state_index(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    #[inline]
    pub fn output(&self, s: u32) -> &Permutation {
        &self.outputs[s as usize]
    }

    #[inline]
    pub fn inverse_output(&self, s: u32) -> &Permutation {
        &self.inverse_outputs[s as usize]
    }

    #[inline]
    pub fn transition(&self, s: u32, a: u8) -> u32 {
        self.transitions[s as usize][a as usize]
    }

    pub fn identity_state(&self) -> Option<u32> {
        self.identity
    }

    /// True when the state acts as the identity automorphism, i.e. every
    /// state reachable from it has trivial output.
    #[inline]
    pub fn is_trivial_state(&self, s: u32) -> bool {
        self.trivial[s as usize]
    }

    /// Renders the automaton back into the text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("alphabet: {}\n", self.alphabet.size());
        for s in 0..self.names.len() {
            let targets: Vec<&str> = self.transitions[s].iter().map(|&t| self.names[t as usize].as_str()).collect();
            out.push_str(&format!("state {} = {} | {}\n", self.names[s], self.outputs[s], targets.join(" ")));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid automaton: {0}")]
    Validation(ValidationReport),
}

/// Parses the automaton text format into an unvalidated definition, then
/// validates it.
pub fn parse_automaton_file(text: &str) -> Result<AutomatonDef, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let syntax = |line: usize, message: &str| ParseError::Syntax { line, message: message.to_string() };

    let (first, header) = lines.next().ok_or_else(|| syntax(1, "missing `alphabet: <p>` line"))?;
    let p = header
        .strip_prefix("alphabet:")
        .ok_or_else(|| syntax(first, "expected `alphabet: <p>`"))?
        .trim()
        .parse::<usize>()
        .map_err(|_| syntax(first, "alphabet size must be a non-negative integer"))?;

    let mut states = Vec::new();
    for (line, text) in lines {
        let body = text.strip_prefix("state").filter(|r| r.starts_with(char::is_whitespace));
        let body = body.ok_or_else(|| syntax(line, "expected `state <name> = <perm> | <targets>`"))?;
        let (name, rhs) = body.split_once('=').ok_or_else(|| syntax(line, "missing `=`"))?;
        let name = name.trim();
        if !is_identifier(name) {
            return Err(syntax(line, "state names must be alphanumeric identifiers"));
        }
        let (perm, targets) = rhs.split_once('|').ok_or_else(|| syntax(line, "missing `|`"))?;
        let output = parse_output(p, perm.trim()).map_err(|m| syntax(line, &m))?;
        let transitions: Vec<String> = targets.split_whitespace().map(str::to_string).collect();
        states.push(StateSpec { name: name.to_string(), output, transitions });
    }

    let identity = states
        .iter()
        .find(|s| s.output.iter().enumerate().all(|(a, &b)| a == b) && s.transitions.iter().all(|t| *t == s.name))
        .filter(|s| s.transitions.len() == p)
        .map(|s| s.name.clone());

    let def = AutomatonDef { alphabet: p, states, identity };
    let report = validate_automaton(&def);
    if report.is_valid() {
        Ok(def)
    } else {
        Err(ParseError::Validation(report))
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

// Cycle notation into raw images, leaving bijectivity to validation.
fn parse_output(p: usize, text: &str) -> Result<Vec<usize>, String> {
    let mut images: Vec<usize> = (0..p).collect();
    if text == "id" {
        return Ok(images);
    }
    let mut rest = text;
    while !rest.is_empty() {
        let inner = rest.strip_prefix('(').ok_or_else(|| format!("bad permutation {text:?}"))?;
        let close = inner.find(')').ok_or_else(|| format!("unclosed cycle in {text:?}"))?;
        let cycle = inner[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| format!("bad letter {s:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(&x) = cycle.iter().find(|&&x| x >= p) {
            return Err(format!("letter {x} out of range for alphabet size {p}"));
        }
        for (i, &x) in cycle.iter().enumerate() {
            images[x] = cycle[(i + 1) % cycle.len()];
        }
        rest = inner[close + 1..].trim_start();
    }
    Ok(images)
}

/// Shipped fixture automata, by name.
pub mod fixtures {
    use super::*;

    pub const ROOTSWAP: &str = include_str!("../fixtures/rootswap.aut");
    pub const ODOMETER: &str = include_str!("../fixtures/odometer.aut");
    pub const GRIGORCHUK: &str = include_str!("../fixtures/grigorchuk.aut");

    pub const NAMES: [&str; 3] = ["rootswap", "odometer", "grigorchuk"];

    pub fn source(name: &str) -> Option<&'static str> {
        match name {
            "rootswap" => Some(ROOTSWAP),
            "odometer" => Some(ODOMETER),
            "grigorchuk" => Some(GRIGORCHUK),
            _ => None,
        }
    }

    pub fn load(name: &str) -> Option<Arc<Automaton>> {
        source(name).map(|src| Automaton::parse(src).expect("shipped fixture parses").into_shared())
    }

    pub fn rootswap() -> Arc<Automaton> {
        load("rootswap").unwrap()
    }

    pub fn odometer() -> Arc<Automaton> {
        load("odometer").unwrap()
    }

    pub fn grigorchuk() -> Arc<Automaton> {
        load("grigorchuk").unwrap()
    }
}
