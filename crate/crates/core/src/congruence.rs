//! Level stabilizers, rigid stabilizers and the congruence topology on `Aut T`.
//!
//! The congruence topology takes the level stabilizers `stab(n)` as a basis of
//! neighbourhoods of the identity. It is metrized here by
//! `d(g, h) = 2^(-k)` where `k` is the deepest level on which `g` and `h`
//! agree; any base `> 1` induces the same topology. Every automorphism fixes
//! the root, so agreement on level 0 always holds and `d <= 1`.
//!
//! For `Aut T` the profinite topology coincides with the congruence topology,
//! so it is not computed separately.

use std::fmt;

use thiserror::Error;

use crate::element::{Element, GroupError};
use crate::tree::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("elements agree through level {cap} but are not equal; raise the cap")]
    CapExceeded { cap: usize },
    #[error("depth {depth} is smaller than the length of vertex {vertex}")]
    DepthBelowVertex { depth: usize, vertex: Vertex },
    #[error("a convergence profile needs at least two terms, got {0}")]
    SequenceTooShort(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `g(v) = v`.
pub fn in_vertex_stab(g: &Element, v: &Vertex) -> bool {
    g.apply(v) == *v
}

/// Membership in the `n`-th level stabilizer.
pub fn in_stab(g: &Element, n: usize) -> bool {
    g.in_level_stabilizer(n)
}

/// How deep two elements agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    Equal,
    /// Largest level (bounded by the cap) on which the actions coincide.
    Level(usize),
}

impl Agreement {
    /// Agreement as a comparable depth, `Equal` being infinitely deep.
    pub fn depth(self) -> usize {
        match self {
            Agreement::Equal => usize::MAX,
            Agreement::Level(k) => k,
        }
    }
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Agreement::Equal => f.write_str("EQUAL"),
            Agreement::Level(k) => write!(f, "{k}"),
        }
    }
}

pub fn agreement_level(g: &Element, h: &Element, cap: usize) -> Result<Agreement, GroupError> {
    let quotient = g.inverse().compose(h)?;
    if quotient.is_identity() {
        return Ok(Agreement::Equal);
    }
    Ok(Agreement::Level(quotient.stabilizer_depth(cap)))
}

/// `0` if the elements are equal, else `2^(-k)` for the agreement level `k`.
pub fn congruence_distance(g: &Element, h: &Element, cap: usize) -> Result<f64, TopologyError> {
    match agreement_level(g, h, cap)? {
        Agreement::Equal => Ok(0.0),
        Agreement::Level(k) if k >= cap => Err(TopologyError::CapExceeded { cap }),
        Agreement::Level(k) => Ok(distance_for_level(k)),
    }
}

pub fn distance_for_level(k: usize) -> f64 {
    (-(k as f64)).exp2()
}

/// `g·stab(n) = h·stab(n)`, i.e. `g⁻¹h ∈ stab(n)`.
pub fn same_coset_mod_stab(g: &Element, h: &Element, n: usize) -> Result<bool, GroupError> {
    Ok(in_stab(&g.inverse().compose(h)?, n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RistVerdict {
    pub holds: bool,
    /// A vertex outside `T_v` moved by the element, when one of length
    /// `<= depth` exists.
    pub witness: Option<Vertex>,
}

/// Exact membership in the rigid stabilizer `rist(v)`: the element must fix
/// every vertex outside the subtree `T_v`.
///
/// Walks the prefixes `w` of `v`. At each one the local activity must be
/// trivial and the section at every off-path child `w·b` must be the
/// identity. `depth` only bounds the witness reported on failure.
pub fn in_rist(g: &Element, v: &Vertex, depth: usize) -> Result<RistVerdict, TopologyError> {
    if depth < v.len() {
        return Err(TopologyError::DepthBelowVertex { depth, vertex: v.clone() });
    }
    let fail =
        |witness: Option<Vertex>| Ok(RistVerdict { holds: false, witness: witness.filter(|u| u.len() <= depth) });
    let mut section = g.normalized();
    for (k, &a) in v.letters().iter().enumerate() {
        let w = v.prefix(k);
        let pi = section.activity();
        if !pi.is_identity() {
            let b = if pi.apply(a) != a {
                pi.apply(a)
            } else {
                (0..pi.degree() as u8).find(|&b| pi.apply(b) != b).expect("non-identity moves a letter")
            };
            return fail(Some(w.child(b)));
        }
        for b in g.alphabet().letters().filter(|&b| b != a) {
            let off = section.section_at_letter(b);
            if !off.is_identity() {
                let budget = depth.saturating_sub(k + 1);
                let moved = off.first_moved_vertex(Some(budget)).map(|x| w.child(b).concat(&x));
                return fail(moved);
            }
        }
        section = section.section_at_letter(a);
    }
    Ok(RistVerdict { holds: true, witness: None })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairStep {
    pub index: usize,
    pub agreement: Agreement,
    /// `None` when the pair agrees through the cap without being equal.
    pub distance: Option<f64>,
}

/// Convergence data of a finite sequence in the congruence topology.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceProfile {
    pub len: usize,
    pub cap: usize,
    /// Consecutive pairs `(s_i, s_{i+1})`.
    pub steps: Vec<PairStep>,
    /// For each level `n` in `0..=cap`, the first index from which every
    /// later term lies in the same coset of `stab(n)`.
    pub stabilization: Vec<usize>,
    /// Finite Cauchy test: for all `i < j`, `s_i` and `s_j` agree on level
    /// `min(i, cap)`.
    pub cauchy: bool,
}

pub fn converges_congruence(seq: &[Element], cap: usize) -> Result<ConvergenceProfile, TopologyError> {
    if seq.len() < 2 {
        return Err(TopologyError::SequenceTooShort(seq.len()));
    }
    let n = seq.len();
    let mut agree = vec![vec![Agreement::Equal; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let a = agreement_level(&seq[i], &seq[j], cap)?;
            agree[i][j] = a;
            agree[j][i] = a;
        }
    }
    let steps = (0..n - 1)
        .map(|i| {
            let agreement = agree[i][i + 1];
            let distance = match agreement {
                Agreement::Equal => Some(0.0),
                Agreement::Level(k) if k < cap => Some(distance_for_level(k)),
                Agreement::Level(_) => None,
            };
            PairStep { index: i, agreement, distance }
        })
        .collect();
    let stabilization = (0..=cap)
        .map(|level| (0..n).find(|&i| (i + 1..n).all(|j| agree[i][j].depth() >= level)).expect("last term is stable"))
        .collect();
    let cauchy = (0..n).all(|i| (i + 1..n).all(|j| agree[i][j].depth() >= i.min(cap)));
    Ok(ConvergenceProfile { len: n, cap, steps, stabilization, cauchy })
}

/// Distances from every term to a fixed element.
pub fn distances_to(seq: &[Element], target: &Element, cap: usize) -> Result<Vec<f64>, TopologyError> {
    seq.iter().map(|g| congruence_distance(g, target, cap)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::fixtures;
    use crate::expr::parse_element;
    use crate::perm::Permutation;
    use crate::portrait::{from_portrait, Portrait};
    use crate::tree::Alphabet;

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    #[test]
    fn vertex_stabilizer() {
        let rs = fixtures::rootswap();
        let g = fixtures::grigorchuk();
        assert!(in_vertex_stab(&Element::identity(&rs), &v("01")));
        assert!(!in_vertex_stab(&parse_element(&rs, "a").unwrap(), &v("0")));
        assert!(in_vertex_stab(&parse_element(&g, "b").unwrap(), &v("1")));
    }

    #[test]
    fn level_stabilizer() {
        let rs = fixtures::rootswap();
        let od = fixtures::odometer();
        assert!(in_stab(&parse_element(&rs, "a").unwrap(), 0));
        assert!(!in_stab(&parse_element(&rs, "a").unwrap(), 1));
        assert!(in_stab(&parse_element(&od, "t^2").unwrap(), 1));
        assert!(!in_stab(&parse_element(&od, "t^2").unwrap(), 2));
    }

    #[test]
    fn agreement_examples() {
        let rs = fixtures::rootswap();
        let g = fixtures::grigorchuk();
        let a = parse_element(&rs, "a").unwrap();
        assert_eq!(agreement_level(&a, &a, 3).unwrap(), Agreement::Equal);
        assert_eq!(agreement_level(&a, &Element::identity(&rs), 8).unwrap(), Agreement::Level(0));
        let b = parse_element(&g, "b").unwrap();
        assert_eq!(agreement_level(&b, &Element::identity(&g), 8).unwrap(), Agreement::Level(1));
        assert_eq!(b.apply(&v("00")), v("01"));
    }

    #[test]
    fn distance_examples() {
        let rs = fixtures::rootswap();
        let od = fixtures::odometer();
        let a = parse_element(&rs, "a").unwrap();
        assert_eq!(congruence_distance(&a, &a, 4).unwrap(), 0.0);
        assert_eq!(congruence_distance(&a, &Element::identity(&rs), 4).unwrap(), 1.0);
        let t2 = parse_element(&od, "t^2").unwrap();
        assert_eq!(congruence_distance(&t2, &Element::identity(&od), 4).unwrap(), 0.5);
        assert_eq!(t2.apply(&v("00")), v("01"));
        assert_eq!(congruence_distance(&t2, &Element::identity(&od), 1), Err(TopologyError::CapExceeded { cap: 1 }));
    }

    #[test]
    fn coset_examples() {
        let rs = fixtures::rootswap();
        let a = parse_element(&rs, "a").unwrap();
        let e = Element::identity(&rs);
        assert!(same_coset_mod_stab(&a, &a, 5).unwrap());
        assert!(!same_coset_mod_stab(&e, &a, 1).unwrap());

        let src = format!("{}state t = (0 1) | e t\n", fixtures::ROOTSWAP);
        let both = crate::automaton::Automaton::parse(&src).unwrap().into_shared();
        let t = parse_element(&both, "t").unwrap();
        let a = parse_element(&both, "a").unwrap();
        assert!(same_coset_mod_stab(&t, &a, 1).unwrap());
        assert!(!same_coset_mod_stab(&t, &a, 2).unwrap());
    }

    #[test]
    fn rist_examples() {
        let two = Alphabet::new(2).unwrap();
        let rs = fixtures::rootswap();
        assert!(in_rist(&Element::identity(&rs), &v("01"), 3).unwrap().holds);

        let swap = Permutation::parse(2, "(0 1)").unwrap();
        let at0 = from_portrait(&Portrait::single(two, 2, &v("0"), swap).unwrap(), two).unwrap();
        assert_eq!(in_rist(&at0, &v("0"), 2).unwrap(), RistVerdict { holds: true, witness: None });
        assert!(!in_rist(&at0, &v("1"), 2).unwrap().holds);

        let a = parse_element(&rs, "a").unwrap();
        assert_eq!(in_rist(&a, &v("0"), 1).unwrap(), RistVerdict { holds: false, witness: Some(v("1")) });

        let g = fixtures::grigorchuk();
        let d = parse_element(&g, "d").unwrap();
        // d = (e, b) moves 100 and fixes T_0
        assert!(in_rist(&d, &v("1"), 3).unwrap().holds);
        assert_eq!(in_rist(&d, &v("0"), 3).unwrap(), RistVerdict { holds: false, witness: Some(v("100")) });
        assert_eq!(in_rist(&d, &v("0"), 2).unwrap(), RistVerdict { holds: false, witness: None });
        assert!(matches!(in_rist(&d, &v("01"), 1), Err(TopologyError::DepthBelowVertex { .. })));
    }

    #[test]
    fn rist_requires_trivial_activity_for_larger_alphabets() {
        let three = Alphabet::new(3).unwrap();
        // fixes letter 0 but swaps 1 and 2 at the root
        let s = Permutation::parse(3, "(1 2)").unwrap();
        let g = from_portrait(&Portrait::single(three, 1, &Vertex::root(), s).unwrap(), three).unwrap();
        let verdict = in_rist(&g, &v("0"), 2).unwrap();
        assert!(!verdict.holds);
        assert_eq!(verdict.witness, Some(v("1")));
    }

    #[test]
    fn convergence_examples() {
        let od = fixtures::odometer();
        let t = parse_element(&od, "t").unwrap();
        let constant = vec![t.clone(); 4];
        let prof = converges_congruence(&constant, 8).unwrap();
        assert!(prof.cauchy);
        assert!(prof.steps.iter().all(|s| s.distance == Some(0.0)));

        let powers: Vec<Element> = [1, 2, 4, 8].iter().map(|&k| t.power(k)).collect();
        let prof = converges_congruence(&powers, 8).unwrap();
        assert!(prof.cauchy);
        let steps: Vec<_> = prof.steps.iter().map(|s| s.distance.unwrap()).collect();
        assert_eq!(steps, vec![1.0, 0.5, 0.25]);
        let to_id = distances_to(&powers, &Element::identity(&od), 8).unwrap();
        assert_eq!(to_id, vec![1.0, 0.5, 0.25, 0.125]);

        let rs = fixtures::rootswap();
        let a = parse_element(&rs, "a").unwrap();
        let e = Element::identity(&rs);
        let alternating = vec![a.clone(), e.clone(), a, e];
        let prof = converges_congruence(&alternating, 8).unwrap();
        assert!(!prof.cauchy);
        assert!(prof.steps.iter().all(|s| s.distance == Some(1.0)));
        assert!(converges_congruence(&alternating[..1], 8).is_err());
    }

    #[test]
    fn stabilization_levels_of_odometer_powers() {
        let od = fixtures::odometer();
        let t = parse_element(&od, "t").unwrap();
        let powers: Vec<Element> = (0..5).map(|k| t.power(1 << k)).collect();
        let prof = converges_congruence(&powers, 4).unwrap();
        // t^(2^k) ∈ stab(k), so level n is stable from index n on
        assert_eq!(prof.stabilization, vec![0, 1, 2, 3, 4]);
    }
}
