//! Depth-limited portraits and the finitary automorphisms they describe.
//!
//! A portrait of depth `d` assigns a permutation to every vertex of length
//! `< d`; the automorphism it describes acts trivially below level `d`. There
//! are `(p!)^((p^d - 1)/(p - 1))` portraits of depth `d`, one for each element
//! of `Aut(T_d)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::automaton::{Automaton, AutomatonDef, StateSpec};
use crate::element::{Element, Factor, GroupError};
use crate::perm::Permutation;
use crate::tree::{Alphabet, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Portrait {
    alphabet: Alphabet,
    depth: usize,
    // level order, see `Alphabet::ball`
    perms: Vec<Permutation>,
}

impl Portrait {
    pub fn new(alphabet: Alphabet, depth: usize, perms: Vec<Permutation>) -> Result<Self, GroupError> {
        let expected = alphabet.ball_size(depth);
        if perms.len() != expected {
            return Err(GroupError::MalformedPortrait(format!(
                "expected {expected} permutations for depth {depth}, got {}",
                perms.len()
            )));
        }
        if let Some(bad) = perms.iter().find(|s| s.degree() != alphabet.size()) {
            return Err(GroupError::MalformedPortrait(format!("permutation {bad} has the wrong degree")));
        }
        Ok(Portrait { alphabet, depth, perms })
    }

    /// Builds a portrait from an explicit vertex assignment whose domain
    /// must be exactly the vertices of length `< depth`.
    pub fn from_map(
        alphabet: Alphabet,
        depth: usize,
        assignment: &BTreeMap<Vertex, Permutation>,
    ) -> Result<Self, GroupError> {
        if assignment.len() != alphabet.ball_size(depth) {
            return Err(GroupError::MalformedPortrait("domain is not the set of vertices above depth".into()));
        }
        let mut perms = Vec::with_capacity(assignment.len());
        for v in alphabet.ball(depth) {
            let s = assignment
                .get(&v)
                .ok_or_else(|| GroupError::MalformedPortrait(format!("no permutation at vertex {v}")))?;
            perms.push(s.clone());
        }
        Self::new(alphabet, depth, perms)
    }

    pub fn identity(alphabet: Alphabet, depth: usize) -> Self {
        let id = Permutation::identity(alphabet.size());
        Portrait { alphabet, depth, perms: vec![id; alphabet.ball_size(depth)] }
    }

    /// The portrait with a single permutation `perm` at `vertex`.
    pub fn single(alphabet: Alphabet, depth: usize, vertex: &Vertex, perm: Permutation) -> Result<Self, GroupError> {
        if vertex.len() >= depth {
            return Err(GroupError::MalformedPortrait(format!("vertex {vertex} lies below depth {depth}")));
        }
        let mut p = Self::identity(alphabet, depth);
        p.perms[alphabet.ball_index(vertex)] = perm;
        Ok(p)
    }

    pub fn random<R: Rng + ?Sized>(alphabet: Alphabet, depth: usize, rng: &mut R) -> Self {
        let all = Permutation::all(alphabet.size());
        let perms = (0..alphabet.ball_size(depth)).map(|_| all[rng.gen_range(0..all.len())].clone()).collect();
        Portrait { alphabet, depth, perms }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn get(&self, v: &Vertex) -> Option<&Permutation> {
        (v.len() < self.depth).then(|| &self.perms[self.alphabet.ball_index(v)])
    }

    pub fn assignment(&self) -> BTreeMap<Vertex, Permutation> {
        self.alphabet.ball(self.depth).into_iter().zip(self.perms.iter().cloned()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.perms.iter().all(Permutation::is_identity)
    }

    /// Action on vertices; letters below depth are left unchanged.
    pub fn apply(&self, v: &Vertex) -> Vertex {
        let p = self.alphabet.size();
        let mut image = v.letters().to_vec();
        // index of the source prefix within the ball, tracked incrementally
        let mut level_start = 0usize;
        let mut rank = 0usize;
        let mut width = 1usize;
        for (k, &a) in v.letters().iter().enumerate() {
            if k >= self.depth {
                break;
            }
            image[k] = self.perms[level_start + rank].apply(a);
            level_start += width;
            width *= p;
            rank = rank * p + a as usize;
        }
        Vertex::from_letters(image)
    }

    /// Portrait of the product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Portrait) -> Portrait {
        assert_eq!((self.alphabet, self.depth), (other.alphabet, other.depth), "portrait shapes differ");
        let perms = self
            .alphabet
            .ball(self.depth)
            .iter()
            .map(|v| self.get(&other.apply(v)).unwrap().compose(other.get(v).unwrap()))
            .collect();
        Portrait { alphabet: self.alphabet, depth: self.depth, perms }
    }

    pub fn inverse(&self) -> Portrait {
        let mut inv = Portrait::identity(self.alphabet, self.depth);
        for (i, v) in self.alphabet.ball(self.depth).iter().enumerate() {
            // the inverse's portrait at v only depends on shallower entries
            let u = inv.apply(v);
            inv.perms[i] = self.get(&u).unwrap().inverse();
        }
        inv
    }

    /// Number of portraits of this shape, `(p!)^(#vertices above depth)`, if it fits.
    pub fn count(alphabet: Alphabet, depth: usize) -> Option<u128> {
        let factorial: u128 = (1..=alphabet.size() as u128).product();
        factorial.checked_pow(u32::try_from(alphabet.ball_size(depth)).ok()?)
    }

    /// Every portrait of the given shape, in mixed-radix order over
    /// [`Permutation::all`] with the root as the most significant digit.
    pub fn enumerate(alphabet: Alphabet, depth: usize) -> PortraitIter {
        PortraitIter {
            alphabet,
            depth,
            symbols: Permutation::all(alphabet.size()),
            digits: vec![0; alphabet.ball_size(depth)],
            done: false,
        }
    }
}

pub struct PortraitIter {
    alphabet: Alphabet,
    depth: usize,
    symbols: Vec<Permutation>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for PortraitIter {
    type Item = Portrait;

    fn next(&mut self) -> Option<Portrait> {
        if self.done {
            return None;
        }
        let perms = self.digits.iter().map(|&d| self.symbols[d].clone()).collect();
        let item = Portrait { alphabet: self.alphabet, depth: self.depth, perms };
        self.done = true;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.symbols.len() {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(item)
    }
}

/// A synthesized automaton in which every finitary element of a given depth
/// is a word.
///
/// It has one state per pair (vertex `u` above depth, non-identity `σ`),
/// acting as `σ` on the letter just below `u` and trivially elsewhere, plus
/// the identity state `e`. A portrait becomes the product of its non-trivial
/// entries in level order, root first.
#[derive(Debug, Clone)]
pub struct FinitaryFamily {
    alphabet: Alphabet,
    depth: usize,
    automaton: Arc<Automaton>,
    symbols: Vec<Permutation>,
}

impl FinitaryFamily {
    pub fn new(alphabet: Alphabet, depth: usize) -> Self {
        let p = alphabet.size();
        let symbols: Vec<Permutation> = Permutation::all(p).into_iter().filter(|s| !s.is_identity()).collect();
        let name = |k: usize, u: &Vertex| format!("s{k}_{}", u.to_machine_string().replace('.', "_"));
        let mut states =
            vec![StateSpec { name: "e".into(), output: (0..p).collect(), transitions: vec!["e".into(); p] }];
        for u in alphabet.ball(depth) {
            for (k, sigma) in symbols.iter().enumerate() {
                let (output, transitions) = match u.letters().split_first() {
                    None => (sigma.images().iter().map(|&x| x as usize).collect(), vec!["e".to_string(); p]),
                    Some((&a, rest)) => {
                        let mut t = vec!["e".to_string(); p];
                        t[a as usize] = name(k, &Vertex::from_letters(rest.to_vec()));
                        ((0..p).collect(), t)
                    }
                };
                states.push(StateSpec { name: name(k, &u), output, transitions });
            }
        }
        let def = AutomatonDef { alphabet: p, states, identity: Some("e".into()) };
        let automaton = Automaton::from_def(&def).expect("finitary automaton is valid").into_shared();
        FinitaryFamily { alphabet, depth, automaton, symbols }
    }

    pub fn automaton(&self) -> &Arc<Automaton> {
        &self.automaton
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn state_of(&self, u: &Vertex, sigma: &Permutation) -> u32 {
        let k = self.symbols.iter().position(|s| s == sigma).expect("non-identity permutation");
        (1 + self.alphabet.ball_index(u) * self.symbols.len() + k) as u32
    }

    pub fn element(&self, portrait: &Portrait) -> Result<Element, GroupError> {
        if portrait.alphabet() != self.alphabet || portrait.depth() > self.depth {
            return Err(GroupError::MalformedPortrait(format!(
                "portrait of depth {} over {} letters does not fit a family of depth {} over {} letters",
                portrait.depth(),
                portrait.alphabet().size(),
                self.depth,
                self.alphabet.size()
            )));
        }
        let word = self
            .alphabet
            .ball(portrait.depth())
            .iter()
            .zip(portrait.perms())
            .filter(|(_, s)| !s.is_identity())
            .map(|(u, s)| Factor::new(self.state_of(u, s)))
            .collect();
        Ok(Element::from_word(&self.automaton, word))
    }
}

/// The finitary element with portrait `portrait`, over a freshly synthesized
/// automaton. Elements built from portraits of equal shape share structurally
/// equal automata and can be composed.
pub fn from_portrait(portrait: &Portrait, alphabet: Alphabet) -> Result<Element, GroupError> {
    if portrait.alphabet() != alphabet {
        return Err(GroupError::MalformedPortrait(format!(
            "portrait is over {} letters, expected {}",
            portrait.alphabet().size(),
            alphabet.size()
        )));
    }
    FinitaryFamily::new(alphabet, portrait.depth()).element(portrait)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::fixtures;
    use crate::element::common_automaton;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn two() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    #[test]
    fn identity_portrait_gives_identity() {
        let e = from_portrait(&Portrait::identity(two(), 3), two()).unwrap();
        assert!(e.is_identity());
        assert!(e.word().is_empty());
    }

    #[test]
    fn portrait_of_rootswap_round_trips() {
        let rs = fixtures::rootswap();
        let a = Element::generator(&rs, "a").unwrap();
        let x = from_portrait(&a.portrait(2), two()).unwrap();
        let (a, x) = common_automaton(&a, &x).unwrap();
        assert!(a.equals(&x).unwrap());
    }

    #[test]
    fn malformed_portraits() {
        let id = Permutation::identity(2);
        assert!(Portrait::new(two(), 2, vec![id.clone(); 2]).is_err());
        assert!(Portrait::new(two(), 1, vec![Permutation::identity(3)]).is_err());
        let mut map = BTreeMap::new();
        map.insert(Vertex::root(), id.clone());
        map.insert("0".parse().unwrap(), id.clone());
        map.insert("00".parse().unwrap(), id);
        assert!(Portrait::from_map(two(), 2, &map).is_err());
        let three = Alphabet::new(3).unwrap();
        assert!(from_portrait(&Portrait::identity(three, 1), two()).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(Portrait::enumerate(two(), 2).count(), 8);
        assert_eq!(Portrait::count(two(), 3), Some(128));
        let three = Alphabet::new(3).unwrap();
        assert_eq!(Portrait::enumerate(three, 1).count(), 6);
        assert_eq!(Portrait::enumerate(two(), 0).count(), 1);
    }

    #[test]
    fn portrait_action_agrees_with_element_action() {
        let mut rng = StdRng::seed_from_u64(7);
        let three = Alphabet::new(3).unwrap();
        let family = FinitaryFamily::new(three, 3);
        for _ in 0..20 {
            let p = Portrait::random(three, 3, &mut rng);
            let g = family.element(&p).unwrap();
            for u in three.level_vertices(4) {
                assert_eq!(g.apply(&u), p.apply(&u));
            }
        }
    }

    #[test]
    fn compose_and_inverse_match_elements() {
        let mut rng = StdRng::seed_from_u64(11);
        let family = FinitaryFamily::new(two(), 3);
        for _ in 0..20 {
            let p = Portrait::random(two(), 3, &mut rng);
            let q = Portrait::random(two(), 3, &mut rng);
            let (g, h) = (family.element(&p).unwrap(), family.element(&q).unwrap());
            assert_eq!(g.compose(&h).unwrap().portrait(3), p.compose(&q));
            assert_eq!(g.inverse().portrait(3), p.inverse());
            assert!(p.compose(&p.inverse()).is_identity());
        }
    }

    proptest! {
        #[test]
        fn from_portrait_round_trips(seed in any::<u64>(), p in 2usize..4, depth in 0usize..4) {
            let alphabet = Alphabet::new(p).unwrap();
            let mut rng = StdRng::seed_from_u64(seed);
            let portrait = Portrait::random(alphabet, depth, &mut rng);
            let g = from_portrait(&portrait, alphabet).unwrap();
            prop_assert_eq!(g.portrait(depth), portrait.clone());
            // trivial below depth
            prop_assert!(g.portrait(depth + 2).perms()[alphabet.ball_size(depth)..].iter().all(Permutation::is_identity));
        }
    }
}
