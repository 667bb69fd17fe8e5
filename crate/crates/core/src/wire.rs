//! Bi-infinite geodesics of the tree in canonical parameterization, and the
//! discrete-time checks on curves `ℤ -> Aut T`.
//!
//! A geodesic line has a unique vertex `v0` of minimal length, and two rays
//! descending from it through distinct children. The canonical curve `γ`
//! sends `0` to `v0`, positive integers along the `plus` ray and negative
//! integers along the `minus` ray, so `|γ(n)| = |v0| + |n|`. Integer
//! parameters land on vertices and open unit intervals on edge interiors;
//! only integer points are ever evaluated.
//!
//! Rays are eventually periodic so that lines have finite descriptions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::congruence::{converges_congruence, same_coset_mod_stab, ConvergenceProfile, TopologyError};
use crate::element::{Element, Factor, GroupError};
use crate::tree::{Alphabet, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("ray period must be nonempty")]
    EmptyPeriod,
    #[error("the two rays of a line must leave v0 through different children")]
    RaysShareFirstLetter,
    #[error("letter {letter} out of range for alphabet of size {p}")]
    LetterOutOfRange { letter: u8, p: usize },
    #[error("this check needs a line through the root")]
    RequiresRootLine,
    #[error("no sample at parameter {0}")]
    MissingSample(i64),
    #[error("sample window is empty")]
    EmptyWindow,
    #[error("coset condition fails between parameters {from} and {to} at level {level}")]
    CosetConditionFailed { from: i64, to: i64, level: usize },
    #[error("cannot parse line literal: {0}")]
    Syntax(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// An eventually periodic infinite word `preperiod · period · period · ...`,
/// kept in a canonical form: primitive period, shortest preperiod.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ray {
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

impl Ray {
    pub fn new(preperiod: Vec<u8>, period: Vec<u8>) -> Result<Ray, WireError> {
        if period.is_empty() {
            return Err(WireError::EmptyPeriod);
        }
        let mut ray = Ray { preperiod, period };
        ray.canonicalize();
        Ok(ray)
    }

    /// The constant ray `a a a ...`.
    pub fn constant(a: u8) -> Ray {
        Ray { preperiod: Vec::new(), period: vec![a] }
    }

    fn canonicalize(&mut self) {
        let n = self.period.len();
        if let Some(d) = (1..=n).find(|&d| n.is_multiple_of(d) && (d..n).all(|i| self.period[i] == self.period[i - d]))
        {
            self.period.truncate(d);
        }
        while let Some(&last) = self.preperiod.last() {
            if last != *self.period.last().unwrap() {
                break;
            }
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn letter(&self, k: usize) -> u8 {
        match self.preperiod.get(k) {
            Some(&a) => a,
            None => self.period[(k - self.preperiod.len()) % self.period.len()],
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<u8> {
        (0..n).map(|k| self.letter(k)).collect()
    }

    fn check(&self, alphabet: Alphabet) -> Result<(), WireError> {
        match self.preperiod.iter().chain(&self.period).find(|&&a| a as usize >= alphabet.size()) {
            Some(&letter) => Err(WireError::LetterOutOfRange { letter, p: alphabet.size() }),
            None => Ok(()),
        }
    }

    /// Image of the ray under an element acting on the subtree it descends
    /// into. Finitely many (section word, ray phase) pairs occur, so the
    /// image is again eventually periodic.
    pub fn image_under(&self, g: &Element) -> Ray {
        let mut g = g.normalized();
        let cycle_start = self.preperiod.len();
        let mut seen: HashMap<(Vec<Factor>, usize), usize> = HashMap::new();
        let mut out = Vec::new();
        for k in 0.. {
            let phase = if k < cycle_start { k } else { cycle_start + (k - cycle_start) % self.period.len() };
            if k >= cycle_start {
                if let Some(&start) = seen.get(&(g.word().to_vec(), phase)) {
                    let period = out.split_off(start);
                    return Ray::new(out, period).expect("period is nonempty");
                }
                seen.insert((g.word().to_vec(), phase), k);
            }
            let a = self.letter(k);
            out.push(g.activity().apply(a));
            g = g.section_at_letter(a);
        }
        unreachable!()
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |w: &[u8]| Vertex::from_letters(w.to_vec()).to_machine_string();
        write!(f, "{}({})", word(&self.preperiod), word(&self.period))
    }
}

/// Parses `pre(period)`, e.g. `0(0)`, `(01)` or `10.3(2)`.
impl FromStr for Ray {
    type Err = WireError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WireError::Syntax(format!("bad ray {s:?}"));
        let (pre, rest) = s.trim().split_once('(').ok_or_else(bad)?;
        let period = rest.strip_suffix(')').ok_or_else(bad)?;
        let word = |w: &str| w.parse::<Vertex>().map(|v| v.letters().to_vec()).map_err(|_| bad());
        Ray::new(word(pre)?, word(period)?)
    }
}

/// A bi-infinite geodesic, stored with `minus` lexicographically smaller
/// than `plus`. Since the rays leave `v0` through different children this
/// amounts to comparing their first letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeodesicLine {
    v0: Vertex,
    minus: Ray,
    plus: Ray,
}

/// Which way the parameter runs along a line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Forward,
    Backward,
}

impl GeodesicLine {
    /// Builds a line, swapping the rays if needed to reach canonical order.
    pub fn new(alphabet: Alphabet, v0: Vertex, first: Ray, second: Ray) -> Result<GeodesicLine, WireError> {
        alphabet.check(&v0).map_err(|_| WireError::LetterOutOfRange {
            letter: *v0.letters().iter().max().unwrap_or(&0),
            p: alphabet.size(),
        })?;
        first.check(alphabet)?;
        second.check(alphabet)?;
        if first.letter(0) == second.letter(0) {
            return Err(WireError::RaysShareFirstLetter);
        }
        let (minus, plus) = if first.letter(0) < second.letter(0) { (first, second) } else { (second, first) };
        Ok(GeodesicLine { v0, minus, plus })
    }

    pub fn v0(&self) -> &Vertex {
        &self.v0
    }

    pub fn minus(&self) -> &Ray {
        &self.minus
    }

    pub fn plus(&self) -> &Ray {
        &self.plus
    }

    pub fn contains_root(&self) -> bool {
        self.v0.is_root()
    }

    /// `γ(n)`, a vertex of length `|v0| + |n|`.
    pub fn vertex(&self, n: i64) -> Vertex {
        let ray = if n >= 0 { &self.plus } else { &self.minus };
        self.v0.concat(&Vertex::from_letters(ray.prefix(n.unsigned_abs() as usize)))
    }

    pub fn vertex_oriented(&self, n: i64, orientation: Orientation) -> Vertex {
        match orientation {
            Orientation::Forward => self.vertex(n),
            Orientation::Backward => self.vertex(-n),
        }
    }

    /// The image line `g(L)`, re-canonicalized; its top vertex is `g(v0)`.
    pub fn image_under(&self, g: &Element) -> GeodesicLine {
        let below = g.section(&self.v0);
        let (m, p) = (self.minus.image_under(&below), self.plus.image_under(&below));
        let (minus, plus) = if m.letter(0) < p.letter(0) { (m, p) } else { (p, m) };
        GeodesicLine { v0: g.apply(&self.v0), minus, plus }
    }

    /// All lines through the root whose rays are eventually `0`, indexed by
    /// their length-`depth` prefixes. Together with both orientations these
    /// reach every vertex of length `<= depth` at the matching parameter.
    pub fn root_lines(alphabet: Alphabet, depth: usize) -> Vec<GeodesicLine> {
        let depth = depth.max(1);
        let words = alphabet.level_vertices(depth);
        let mut out = Vec::new();
        for m in &words {
            for p in &words {
                if m.letters()[0] < p.letters()[0] {
                    let ray = |v: &Vertex| Ray::new(v.letters().to_vec(), vec![0]).unwrap();
                    out.push(GeodesicLine { v0: Vertex::root(), minus: ray(m), plus: ray(p) });
                }
            }
        }
        out
    }
}

impl fmt::Display for GeodesicLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line v0={} minus={} plus={}", self.v0, self.minus, self.plus)
    }
}

/// Parses `line v0=ε minus=0(0) plus=1(1)`; the leading `line` is optional.
pub fn parse_line(alphabet: Alphabet, text: &str) -> Result<GeodesicLine, WireError> {
    let mut v0 = None;
    let mut minus = None;
    let mut plus = None;
    for (i, token) in text.split_whitespace().enumerate() {
        if i == 0 && token == "line" {
            continue;
        }
        let (key, value) = token.split_once('=').ok_or_else(|| WireError::Syntax(token.to_string()))?;
        match key {
            "v0" => v0 = Some(value.parse::<Vertex>().map_err(|e| WireError::Syntax(e.to_string()))?),
            "minus" => minus = Some(value.parse::<Ray>()?),
            "plus" => plus = Some(value.parse::<Ray>()?),
            _ => return Err(WireError::Syntax(format!("unknown key {key:?}"))),
        }
    }
    let missing = |k: &str| WireError::Syntax(format!("missing {k}="));
    GeodesicLine::new(
        alphabet,
        v0.ok_or_else(|| missing("v0"))?,
        minus.ok_or_else(|| missing("minus"))?,
        plus.ok_or_else(|| missing("plus"))?,
    )
}

/// Samples `n ↦ p(n)` of a curve into `Aut T` on an integer window.
#[derive(Debug, Clone)]
pub struct CurveSamples {
    values: BTreeMap<i64, Element>,
}

impl CurveSamples {
    /// Samples on the window `[start, start + values.len() - 1]`.
    pub fn new(start: i64, values: Vec<Element>) -> Result<CurveSamples, WireError> {
        if values.is_empty() {
            return Err(WireError::EmptyWindow);
        }
        Ok(CurveSamples { values: (start..).zip(values).collect() })
    }

    pub fn window(&self) -> (i64, i64) {
        (*self.values.keys().next().unwrap(), *self.values.keys().next_back().unwrap())
    }

    pub fn get(&self, n: i64) -> Result<&Element, WireError> {
        self.values.get(&n).ok_or(WireError::MissingSample(n))
    }

    /// Left translate `k·p(n)` of every sample.
    pub fn left_translate(&self, k: &Element) -> Result<CurveSamples, WireError> {
        let values = self.values.iter().map(|(&n, g)| Ok((n, k.compose(g)?))).collect::<Result<_, GroupError>>()?;
        Ok(CurveSamples { values })
    }

    // consecutive (from, to, level) pairs covered by the coset condition
    fn coset_pairs(&self) -> Vec<(i64, i64, usize)> {
        let (lo, hi) = self.window();
        let mut pairs = Vec::new();
        for n in lo.max(0)..hi {
            pairs.push((n, n + 1, n as usize));
        }
        for m in 0..(-lo).max(0) {
            if -m <= hi {
                pairs.push((-m, -m - 1, m as usize));
            }
        }
        pairs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveVerdict {
    pub passed: bool,
    pub checked: usize,
    /// `(from, to, level)` of the first failing step.
    pub first_violation: Option<(i64, i64, usize)>,
}

/// For `n >= 0`: `p(n)` and `p(n+1)` lie in one coset of `stab(n)`; for
/// `m >= 0`: `p(-m)` and `p(-m-1)` lie in one coset of `stab(m)`.
pub fn coset_condition_check(samples: &CurveSamples) -> Result<CurveVerdict, WireError> {
    let pairs = samples.coset_pairs();
    for (i, &(from, to, level)) in pairs.iter().enumerate() {
        if !same_coset_mod_stab(samples.get(from)?, samples.get(to)?, level)? {
            return Ok(CurveVerdict { passed: false, checked: i + 1, first_violation: Some((from, to, level)) });
        }
    }
    Ok(CurveVerdict { passed: true, checked: pairs.len(), first_violation: None })
}

/// For each `n` in `[0, depth)`: `p(n+1)(γ(n+1))` is a child of
/// `p(n)(γ(n))`, i.e. the evaluation curve `n ↦ p(n)(γ(n))` stays a
/// descending edge path. The line must pass through the root.
pub fn geodesic_image_check(
    samples: &CurveSamples,
    line: &GeodesicLine,
    depth: usize,
) -> Result<CurveVerdict, WireError> {
    geodesic_image_check_oriented(samples, line, Orientation::Forward, depth)
}

pub fn geodesic_image_check_oriented(
    samples: &CurveSamples,
    line: &GeodesicLine,
    orientation: Orientation,
    depth: usize,
) -> Result<CurveVerdict, WireError> {
    if !line.contains_root() {
        return Err(WireError::RequiresRootLine);
    }
    let mut upper = samples.get(0)?.apply(&line.vertex_oriented(0, orientation));
    for n in 0..depth as i64 {
        let lower = samples.get(n + 1)?.apply(&line.vertex_oriented(n + 1, orientation));
        if lower.parent().ok().as_ref() != Some(&upper) {
            return Ok(CurveVerdict {
                passed: false,
                checked: n as usize + 1,
                first_violation: Some((n, n + 1, n as usize)),
            });
        }
        upper = lower;
    }
    Ok(CurveVerdict { passed: true, checked: depth, first_violation: None })
}

/// Geodesic-image check over every root line to `depth`, in both
/// orientations.
pub fn geodesic_image_check_all(samples: &CurveSamples, alphabet: Alphabet, depth: usize) -> Result<bool, WireError> {
    for line in GeodesicLine::root_lines(alphabet, depth) {
        for orientation in [Orientation::Forward, Orientation::Backward] {
            if !geodesic_image_check_oriented(samples, &line, orientation, depth)?.passed {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct StabilizationReport {
    /// Number of `(n, n+k)` coset equalities verified.
    pub verified: usize,
    /// Profile of `p(0), p(1), ..`, when the window has at least two nonnegative points.
    pub forward: Option<ConvergenceProfile>,
    /// Profile of `p(0), p(-1), ..`, likewise.
    pub backward: Option<ConvergenceProfile>,
}

/// Given the coset condition, checks `p(n)·stab(n) = p(n+k)·stab(n)` for all
/// `n, k >= 0` in the window (and the mirrored statement on the negative
/// side), which makes both half-sequences converge in the congruence topology.
pub fn stabilization_from_cosets(samples: &CurveSamples) -> Result<StabilizationReport, WireError> {
    if let Some((from, to, level)) = coset_condition_check(samples)?.first_violation {
        return Err(WireError::CosetConditionFailed { from, to, level });
    }
    let (lo, hi) = samples.window();
    let mut verified = 0;
    let mut half = |sign: i64, extent: i64| -> Result<Option<ConvergenceProfile>, WireError> {
        let seq: Vec<Element> = (0..=extent).map(|i| samples.get(sign * i).cloned()).collect::<Result<_, _>>()?;
        for n in 0..seq.len() {
            for later in &seq[n + 1..] {
                if !same_coset_mod_stab(&seq[n], later, n)? {
                    // cannot happen once the chain condition holds
                    return Err(WireError::CosetConditionFailed { from: sign * n as i64, to: sign * extent, level: n });
                }
                verified += 1;
            }
        }
        if seq.len() < 2 {
            return Ok(None);
        }
        Ok(Some(converges_congruence(&seq, seq.len())?))
    };
    let forward = if lo <= 0 && hi >= 0 { half(1, hi)? } else { None };
    let backward = if lo <= 0 && hi >= 0 { half(-1, -lo)? } else { None };
    Ok(StabilizationReport { verified, forward, backward })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{fixtures, Automaton};
    use crate::expr::parse_element;
    use crate::portrait::{FinitaryFamily, Portrait};

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    fn two() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn root_line() -> GeodesicLine {
        parse_line(two(), "line v0=ε minus=0(0) plus=1(1)").unwrap()
    }

    #[test]
    fn ray_canonical_form() {
        let r = Ray::new(vec![1, 0, 1], vec![0, 1, 0, 1]).unwrap();
        assert_eq!((r.preperiod(), r.period()), (&[][..], &[1u8, 0][..]));
        assert_eq!(r.to_string(), "(10)");
        let r = Ray::new(vec![1, 1], vec![0, 1, 0, 1]).unwrap();
        assert_eq!(r.to_string(), "1(10)");
        assert_eq!("0(0)".parse::<Ray>().unwrap(), Ray::constant(0));
        assert!(Ray::new(vec![0], vec![]).is_err());
        assert!("01".parse::<Ray>().is_err());
    }

    #[test]
    fn line_vertices() {
        let l = root_line();
        assert_eq!(l.vertex(0), Vertex::root());
        assert_eq!(l.vertex(2), v("11"));
        assert_eq!(l.vertex(-3), v("000"));
        for n in -5..5 {
            assert!(l.vertex(n).is_adjacent(&l.vertex(n + 1)));
        }
        let off = parse_line(two(), "v0=01 minus=1(0) plus=0(1)").unwrap();
        assert_eq!(off.minus().to_string(), "0(1)");
        assert_eq!(off.vertex(1), v("011"));
        assert_eq!(off.vertex(-2), v("0101"));
        assert!(parse_line(two(), "v0=ε minus=0(0) plus=0(1)").is_err());
        assert!(parse_line(two(), "v0=ε minus=0(0) plus=2(1)").is_err());
        assert_eq!(root_line().to_string(), "line v0=ε minus=(0) plus=(1)");
    }

    #[test]
    fn lines_under_automorphisms() {
        let rs = fixtures::rootswap();
        let od = fixtures::odometer();
        let l = root_line();
        assert_eq!(l.image_under(&Element::identity(&rs)), l);
        // a only flips the first letter
        let flipped = parse_line(two(), "v0=ε minus=0(1) plus=1(0)").unwrap();
        assert_eq!(l.image_under(&parse_element(&rs, "a").unwrap()), flipped);
        // t(000..) = 1000.. and t(111..) = 000..
        let image = l.image_under(&parse_element(&od, "t").unwrap());
        assert_eq!(image.minus(), &Ray::constant(0));
        assert_eq!(image.plus(), &"1(0)".parse().unwrap());
        let t = parse_element(&od, "t").unwrap();
        assert_eq!(t.apply(&v("111")), v("000"));
        assert_eq!(t.apply(&v("000")), v("100"));
    }

    #[test]
    fn ray_image_matches_prefix_action() {
        let g = fixtures::grigorchuk();
        let b = parse_element(&g, "b*a*c*a*d").unwrap();
        let ray: Ray = "01(011)".parse().unwrap();
        let image = ray.image_under(&b);
        let v = Vertex::from_letters(ray.prefix(40));
        assert_eq!(image.prefix(40), b.apply(&v).letters());
    }

    #[test]
    fn line_image_preserves_shape() {
        let g = fixtures::grigorchuk();
        let x = parse_element(&g, "a*b*a*c").unwrap();
        let l = parse_line(two(), "v0=10 minus=0(01) plus=1(1)").unwrap();
        let image = l.image_under(&x);
        assert_eq!(image.v0().len(), 2);
        assert!(!image.contains_root());
        for n in -6..=6 {
            let u = l.vertex(n);
            let w = x.apply(&u);
            assert!(w == image.vertex(n) || w == image.vertex(-n));
        }
    }

    fn rs_samples(names: &[&str]) -> CurveSamples {
        let rs = fixtures::rootswap();
        CurveSamples::new(0, names.iter().map(|n| parse_element(&rs, n).unwrap()).collect()).unwrap()
    }

    #[test]
    fn coset_condition_examples() {
        assert!(coset_condition_check(&rs_samples(&["a", "a", "a"])).unwrap().passed);
        assert!(coset_condition_check(&rs_samples(&["1", "a", "a"])).unwrap().passed);
        let v = coset_condition_check(&rs_samples(&["1", "1", "a"])).unwrap();
        assert_eq!(v.first_violation, Some((1, 2, 1)));
    }

    #[test]
    fn negative_side_of_coset_condition() {
        let rs = fixtures::rootswap();
        let a = parse_element(&rs, "a").unwrap();
        let e = Element::identity(&rs);
        let s = CurveSamples::new(-2, vec![a.clone(), e.clone(), e.clone()]).unwrap();
        assert_eq!(coset_condition_check(&s).unwrap().first_violation, Some((-1, -2, 1)));
        let s = CurveSamples::new(-1, vec![a, e.clone(), e]).unwrap();
        assert!(coset_condition_check(&s).unwrap().passed);
    }

    #[test]
    fn geodesic_image_examples() {
        let l = parse_line(two(), "v0=ε minus=0(0) plus=1(0)").unwrap();
        let ids = rs_samples(&["1", "1", "1", "1"]);
        assert!(geodesic_image_check(&ids, &l, 3).unwrap().passed);
        assert!(geodesic_image_check(&rs_samples(&["1", "a"]), &l, 1).unwrap().passed);

        let off = parse_line(two(), "v0=0 minus=0(0) plus=1(0)").unwrap();
        assert_eq!(geodesic_image_check(&ids, &off, 2).unwrap_err(), WireError::RequiresRootLine);
        assert_eq!(geodesic_image_check(&ids, &l, 4).unwrap_err(), WireError::MissingSample(4));
    }

    #[test]
    fn geodesic_image_detects_level_jumps() {
        // p(1) = id, p(2) = a: a(γ(2)) hangs below a(γ(1)), not below γ(1)
        let s = rs_samples(&["1", "1", "a"]);
        let l = parse_line(two(), "v0=ε minus=0(0) plus=1(0)").unwrap();
        let verdict = geodesic_image_check(&s, &l, 2).unwrap();
        assert_eq!(verdict.first_violation, Some((1, 2, 1)));
    }

    #[test]
    fn equivalence_on_a_few_finitary_curves() {
        let family = FinitaryFamily::new(two(), 2);
        let all: Vec<Element> = Portrait::enumerate(two(), 2).map(|p| family.element(&p).unwrap()).collect();
        for g in &all {
            for h in &all {
                let s = CurveSamples::new(0, vec![all[3].clone(), g.clone(), h.clone()]).unwrap();
                let coset = coset_condition_check(&s).unwrap().passed;
                assert_eq!(coset, geodesic_image_check_all(&s, two(), 2).unwrap());
            }
        }
    }

    #[test]
    fn stabilization_examples() {
        let s = rs_samples(&["a", "a", "a", "a"]);
        let report = stabilization_from_cosets(&s).unwrap();
        assert_eq!(report.verified, 6);
        assert!(report.forward.unwrap().cauchy);

        let g = fixtures::grigorchuk();
        let seq = |names: &[&str]| {
            CurveSamples::new(0, names.iter().map(|n| parse_element(&g, n).unwrap()).collect()).unwrap()
        };
        // b ∈ stab(1) but b ∉ stab(2), so a·b breaks the condition at n = 2
        let err = stabilization_from_cosets(&seq(&["1", "a", "a", "a*b"])).unwrap_err();
        assert_eq!(err, WireError::CosetConditionFailed { from: 2, to: 3, level: 2 });

        // d ∈ stab(2)
        let report = stabilization_from_cosets(&seq(&["1", "a", "a", "a*d"])).unwrap();
        let forward = report.forward.unwrap();
        assert!(forward.cauchy);
        assert_eq!(&forward.stabilization[..4], &[0, 1, 1, 3]);
    }

    #[test]
    fn coset_condition_is_left_invariant() {
        let src = "alphabet: 2\nstate e = id | e e\nstate a = (0 1) | e e\nstate t = (0 1) | e t\n";
        let aut = Automaton::parse(src).unwrap().into_shared();
        let samples = CurveSamples::new(
            -1,
            ["t^-1", "1", "t^2", "t^2*t^4", "t^2*t^4*t^8"].iter().map(|e| parse_element(&aut, e).unwrap()).collect(),
        )
        .unwrap();
        for k in ["1", "a", "t", "a*t^3"] {
            let k = parse_element(&aut, k).unwrap();
            assert_eq!(
                coset_condition_check(&samples).unwrap(),
                coset_condition_check(&samples.left_translate(&k).unwrap()).unwrap()
            );
        }
    }
}
