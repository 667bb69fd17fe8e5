//! Verification suites shared by the CLI and the acceptance tests.
//!
//! Each suite returns a list of [`Check`]s; a run passes iff all of them do.
//! Enumeration orders and RNG seeds are fixed, so reports are reproducible.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::automaton::{fixtures, Automaton};
use crate::congruence::{agreement_level, congruence_distance, in_stab};
use crate::element::{Element, Factor};
use crate::expr::parse_element;
use crate::finite::{
    build_complex, d_topology_equivalence, functional_plot_enumeration_check, vertex_valued_maps_constant,
    AlexandrovModel, PathModel, PointKind, SubsetMode, EXHAUSTIVE_POINT_LIMIT, MAX_CANDIDATES,
};
use crate::portrait::{FinitaryFamily, Portrait};
use crate::tree::Alphabet;
use crate::wire::{coset_condition_check, geodesic_image_check_all, stabilization_from_cosets, CurveSamples};

pub const DEFAULT_SEED: u64 = 0x7265_6531;

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub counterexample: Option<String>,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check { suite, name: name.into(), passed, detail: detail.into(), counterexample: None }
    }

    fn with_counterexample(mut self, c: Option<String>) -> Check {
        if !self.passed {
            self.counterexample = c;
        }
        self
    }

    fn error(suite: &'static str, name: impl Into<String>, err: impl fmt::Display) -> Check {
        Check::new(suite, name, false, format!("error: {err}"))
    }

    pub fn verdict(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }

    pub fn tsv(&self) -> String {
        let ce = self.counterexample.as_deref().unwrap_or("-");
        format!("{}\t{}\t{}\t{}\t{}", self.suite, self.name, self.verdict(), self.detail, ce)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}: {}", self.verdict(), self.suite, self.name, self.detail)?;
        if let Some(c) = &self.counterexample {
            write!(f, "; counterexample {c}")?;
        }
        Ok(())
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Known identities of a fixture, checked alongside the generic suites.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Expectations {
    /// Equations `lhs=rhs` between element expressions.
    pub relations: Vec<String>,
    /// An element whose `2^k`-th powers have the listed distances to the identity.
    pub power_distances: Option<(String, Vec<f64>)>,
}

pub fn fixture_expectations(name: &str) -> Expectations {
    let rel = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
    match name {
        "rootswap" => Expectations { relations: rel(&["a^2=1", "a^-1=a"]), power_distances: None },
        "odometer" => Expectations {
            relations: rel(&["t^2*t^-2=1"]),
            power_distances: Some(("t".into(), vec![1.0, 0.5, 0.25, 0.125])),
        },
        "grigorchuk" => Expectations {
            relations: rel(&["a^2=1", "b^2=1", "c^2=1", "d^2=1", "b*c=d", "c*d=b", "d*b=c", "(a*d)^4=1"]),
            power_distances: None,
        },
        _ => Expectations::default(),
    }
}

/// The fixture an automaton coincides with, if any.
pub fn identify_fixture(aut: &Automaton) -> Option<&'static str> {
    let text = aut.to_text();
    fixtures::NAMES.into_iter().find(|name| fixtures::load(name).is_some_and(|f| f.to_text() == text))
}

fn generators(aut: &Arc<Automaton>) -> Vec<Factor> {
    (0..aut.state_count() as u32)
        .filter(|&s| !aut.is_trivial_state(s))
        .flat_map(|s| [Factor::new(s), Factor::new(s).inv()])
        .collect()
}

/// A word of length at most `max_len` in the non-trivial states and their inverses.
pub fn random_element<R: Rng + ?Sized>(aut: &Arc<Automaton>, max_len: usize, rng: &mut R) -> Element {
    let gens = generators(aut);
    if gens.is_empty() {
        return Element::identity(aut);
    }
    let len = rng.gen_range(0..=max_len);
    Element::from_word(aut, (0..len).map(|_| gens[rng.gen_range(0..gens.len())]).collect())
}

/// Freely reduced nonempty words of length at most `max_len` that act trivially.
pub fn short_relators(aut: &Arc<Automaton>, max_len: usize, limit: usize) -> Vec<Element> {
    let gens = generators(aut);
    let mut found = Vec::new();
    for len in 1..=max_len {
        for word in (0..len).map(|_| gens.iter().copied()).multi_cartesian_product() {
            if word.windows(2).any(|w| w[0] == w[1].inv()) {
                continue;
            }
            let g = Element::from_word(aut, word);
            if g.is_identity() {
                found.push(g);
                if found.len() == limit {
                    return found;
                }
            }
        }
    }
    found
}

fn label(aut: &Automaton) -> String {
    identify_fixture(aut)
        .map_or_else(|| format!("p={} states={}", aut.alphabet().size(), aut.state_count()), str::to_string)
}

/// Parameters of the algebraic suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxiomConfig {
    pub triples: usize,
    pub word_len: usize,
    pub vertex_len: usize,
    pub equality_pairs: usize,
    pub portrait_depth: usize,
    pub cap: usize,
    pub seed: u64,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        AxiomConfig {
            triples: 200,
            word_len: 6,
            vertex_len: 6,
            equality_pairs: 100,
            portrait_depth: 8,
            cap: 12,
            seed: DEFAULT_SEED,
        }
    }
}

/// Group laws of the action on every vertex of length `<= vertex_len`.
pub fn group_axioms(aut: &Arc<Automaton>, cfg: &AxiomConfig) -> Vec<Check> {
    const SUITE: &str = "axioms";
    let name = label(aut);
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let vertices = aut.alphabet().ball(cfg.vertex_len + 1);
    let e = Element::identity(aut);
    let (mut assoc, mut ident, mut inv) = (None, None, None);
    for _ in 0..cfg.triples {
        let g = random_element(aut, cfg.word_len, &mut rng);
        let h = random_element(aut, cfg.word_len, &mut rng);
        let k = random_element(aut, cfg.word_len, &mut rng);
        let gh = g.compose(&h).expect("same automaton");
        let left = gh.compose(&k).expect("same automaton");
        let right = g.compose(&h.compose(&k).expect("same automaton")).expect("same automaton");
        let g_inv = g.inverse();
        let ge = g.compose(&e).expect("same automaton");
        let eg = e.compose(&g).expect("same automaton");
        let g_ginv = g.compose(&g_inv).expect("same automaton");
        for v in &vertices {
            if assoc.is_none() && (gh.apply(v) != g.apply(&h.apply(v)) || left.apply(v) != right.apply(v)) {
                assoc = Some(format!("g={g} h={h} k={k} v={v}"));
            }
            if ident.is_none() && (e.apply(v) != *v || ge.apply(v) != g.apply(v) || eg.apply(v) != g.apply(v)) {
                ident = Some(format!("g={g} v={v}"));
            }
            if inv.is_none() && (g_inv.apply(&g.apply(v)) != *v || g_ginv.apply(v) != *v) {
                inv = Some(format!("g={g} v={v}"));
            }
        }
        if inv.is_none() && !g_ginv.is_identity() {
            inv = Some(format!("g={g}: g*g^-1 not recognized as identity"));
        }
    }
    let detail = format!("{} triples, {} vertices of length <= {}", cfg.triples, vertices.len(), cfg.vertex_len);
    vec![
        Check::new(SUITE, format!("associativity[{name}]"), assoc.is_none(), &detail).with_counterexample(assoc),
        Check::new(SUITE, format!("identity[{name}]"), ident.is_none(), &detail).with_counterexample(ident),
        Check::new(SUITE, format!("inverse[{name}]"), inv.is_none(), &detail).with_counterexample(inv),
    ]
}

/// `equals` against portrait equality at a fixed depth, on random pairs and
/// on pairs made equal by inserting short relators.
pub fn equality_oracle(aut: &Arc<Automaton>, cfg: &AxiomConfig) -> Check {
    let name = format!("equality-vs-portrait[{}]", label(aut));
    let mut rng = StdRng::seed_from_u64(cfg.seed ^ 0x5eed);
    let relators = short_relators(aut, 4, 64);
    let mut equal_pairs = 0;
    let mut mismatch = None;
    for i in 0..cfg.equality_pairs {
        let g = random_element(aut, cfg.word_len, &mut rng);
        let h = if i % 2 == 1 && !relators.is_empty() {
            let r = &relators[rng.gen_range(0..relators.len())];
            let cut = rng.gen_range(0..=g.word().len());
            let (head, tail) = g.word().split_at(cut);
            let head = Element::from_word(aut, head.to_vec());
            let tail = Element::from_word(aut, tail.to_vec());
            head.compose(r).and_then(|x| x.compose(&tail)).expect("same automaton")
        } else {
            random_element(aut, cfg.word_len, &mut rng)
        };
        let exact = g.equals(&h).expect("same automaton");
        let by_portrait = g.portrait(cfg.portrait_depth) == h.portrait(cfg.portrait_depth);
        equal_pairs += usize::from(exact);
        if exact != by_portrait && mismatch.is_none() {
            mismatch = Some(format!("g={g} h={h} equals={exact} portrait={by_portrait}"));
        }
    }
    let detail = format!("{} pairs ({} equal), portrait depth {}", cfg.equality_pairs, equal_pairs, cfg.portrait_depth);
    Check::new("axioms", name, mismatch.is_none(), detail).with_counterexample(mismatch)
}

pub fn relations(aut: &Arc<Automaton>, expectations: &Expectations) -> Vec<Check> {
    expectations
        .relations
        .iter()
        .map(|rel| {
            let name = format!("relation[{rel}]");
            let Some((lhs, rhs)) = rel.split_once('=') else {
                return Check::error("axioms", name, "relation must have the form lhs=rhs");
            };
            match (parse_element(aut, lhs), parse_element(aut, rhs)) {
                (Ok(l), Ok(r)) => {
                    let holds = l.equals(&r).expect("same automaton");
                    Check::new("axioms", name, holds, format!("{l} vs {r}"))
                }
                (Err(e), _) | (_, Err(e)) => Check::error("axioms", name, e),
            }
        })
        .collect()
}

/// Distinct finitary automorphisms of `T_d`, enumerated as portraits and
/// realized as automaton elements, for every `d` whose count is at most `limit`.
pub fn portrait_counts(alphabet: Alphabet, max_depth: usize, limit: u128) -> Vec<Check> {
    let mut out = Vec::new();
    for d in 1..=max_depth {
        let expected = match Portrait::count(alphabet, d) {
            Some(c) if c <= limit => c,
            _ => break,
        };
        let family = FinitaryFamily::new(alphabet, d);
        let mut seen = HashSet::new();
        let mut round_trip = true;
        for portrait in Portrait::enumerate(alphabet, d) {
            let g = family.element(&portrait).expect("portrait fits its family");
            let back = g.portrait(d);
            round_trip &= back == portrait;
            seen.insert(back);
        }
        let passed = round_trip && seen.len() as u128 == expected;
        let detail = format!("{} distinct elements, expected {}", seen.len(), expected);
        let ce = (!round_trip).then(|| "portrait round trip failed".to_string());
        out.push(
            Check::new("axioms", format!("count[p={} d={d}]", alphabet.size()), passed, detail).with_counterexample(ce),
        );
    }
    out
}

/// Filtration and ultrametric properties of the congruence structure.
pub fn ultrametric(aut: &Arc<Automaton>, cfg: &AxiomConfig) -> Vec<Check> {
    const SUITE: &str = "axioms";
    let name = label(aut);
    let mut rng = StdRng::seed_from_u64(cfg.seed ^ 0xd157);
    let (mut nesting, mut ultra, mut bi, mut normal) = (None, None, None, None);
    let level = |x: &Element, y: &Element| agreement_level(x, y, cfg.cap).expect("same automaton").depth();
    for _ in 0..cfg.triples {
        let g = random_element(aut, cfg.word_len, &mut rng);
        let h = random_element(aut, cfg.word_len, &mut rng);
        let k = random_element(aut, cfg.word_len, &mut rng);
        for n in 0..cfg.cap {
            if nesting.is_none() && in_stab(&g, n + 1) && !in_stab(&g, n) {
                nesting = Some(format!("g={g} n={n}"));
            }
            if normal.is_none() && in_stab(&g, n) && !in_stab(&g.conjugate_by(&k).expect("same automaton"), n) {
                normal = Some(format!("g={g} k={k} n={n}"));
            }
        }
        let (gh, hk, gk) = (level(&g, &h), level(&h, &k), level(&g, &k));
        if ultra.is_none() && gk < gh.min(hk) {
            ultra = Some(format!("g={g} h={h} k={k}"));
        }
        let kg = k.compose(&g).expect("same automaton");
        let kh = k.compose(&h).expect("same automaton");
        let gk_ = g.compose(&k).expect("same automaton");
        let hk_ = h.compose(&k).expect("same automaton");
        if bi.is_none() && (level(&kg, &kh) != gh || level(&gk_, &hk_) != gh) {
            bi = Some(format!("g={g} h={h} k={k}"));
        }
    }
    let detail = format!("{} triples, cap {}", cfg.triples, cfg.cap);
    vec![
        Check::new(SUITE, format!("stab-nesting[{name}]"), nesting.is_none(), &detail).with_counterexample(nesting),
        Check::new(SUITE, format!("ultrametric[{name}]"), ultra.is_none(), &detail).with_counterexample(ultra),
        Check::new(SUITE, format!("bi-invariance[{name}]"), bi.is_none(), &detail).with_counterexample(bi),
        Check::new(SUITE, format!("stab-normality[{name}]"), normal.is_none(), &detail).with_counterexample(normal),
    ]
}

pub fn power_distances(aut: &Arc<Automaton>, expectations: &Expectations, cap: usize) -> Option<Check> {
    let (expr, expected) = expectations.power_distances.as_ref()?;
    let name = format!("power-distances[{expr}]");
    let g = match parse_element(aut, expr) {
        Ok(g) => g,
        Err(e) => return Some(Check::error("axioms", name, e)),
    };
    let e = Element::identity(aut);
    let got: Result<Vec<f64>, _> =
        (0..expected.len()).map(|k| congruence_distance(&g.power(1 << k), &e, cap)).collect();
    Some(match got {
        Ok(got) => {
            let shown = got.iter().map(f64::to_string).join(", ");
            Check::new("axioms", name, got == *expected, format!("distances to identity [{shown}]"))
        }
        Err(err) => Check::error("axioms", name, err),
    })
}

/// Every algebraic check for one automaton.
pub fn axioms_suite(aut: &Arc<Automaton>, expectations: &Expectations, cfg: &AxiomConfig) -> Vec<Check> {
    let mut out = group_axioms(aut, cfg);
    out.push(equality_oracle(aut, cfg));
    out.extend(relations(aut, expectations));
    out.extend(portrait_counts(aut.alphabet(), 3, 1 << 12));
    out.extend(ultrametric(aut, cfg));
    out.extend(power_distances(aut, expectations, cfg.cap));
    out
}

/// Exhaustive comparison of the coset condition with the geodesic-image
/// condition over all sample sequences of length `len` in `Aut(T_d)`.
pub fn smooth_curves_suite(p: usize, d: usize, len: usize) -> Vec<Check> {
    const SUITE: &str = "smooth-curves";
    let name = format!("coset-vs-geodesic[p={p} d={d} len={len}]");
    let alphabet = match Alphabet::new(p) {
        Ok(a) if len >= 2 && d >= 1 => a,
        _ => return vec![Check::error(SUITE, name, "need p >= 2, d >= 1, len >= 2")],
    };
    let total = Portrait::count(alphabet, d).and_then(|c| c.checked_pow(len as u32)).filter(|&c| c <= MAX_CANDIDATES);
    let Some(total) = total else {
        return vec![Check::error(SUITE, name, format!("|Aut(T_{d})|^{len} exceeds {MAX_CANDIDATES}"))];
    };
    let family = FinitaryFamily::new(alphabet, d);
    let group: Vec<Element> =
        Portrait::enumerate(alphabet, d).map(|pt| family.element(&pt).expect("fits family")).collect();
    let translators = [group[1].clone(), group[group.len() - 1].clone()];
    let (mut agree, mut coset_pass) = (0u64, 0u64);
    let (mut mismatch, mut translation, mut stabilization) = (None, None, None);
    let mut stabilized = 0u64;
    for seq in (0..len).map(|_| 0..group.len()).multi_cartesian_product() {
        let values: Vec<Element> = seq.iter().map(|&i| group[i].clone()).collect();
        let samples = CurveSamples::new(0, values).expect("nonempty");
        let coset = coset_condition_check(&samples).expect("samples cover window").passed;
        let geodesic = geodesic_image_check_all(&samples, alphabet, len - 1).expect("samples cover window");
        let show = || seq.iter().map(|&i| group[i].portrait(d).perms().iter().join(" ")).join(" | ");
        if coset == geodesic {
            agree += 1;
        } else if mismatch.is_none() {
            mismatch = Some(show());
        }
        for k in &translators {
            let moved = samples.left_translate(k).expect("same automaton");
            if coset_condition_check(&moved).expect("window").passed != coset && translation.is_none() {
                translation = Some(show());
            }
        }
        if coset {
            coset_pass += 1;
            match stabilization_from_cosets(&samples) {
                Ok(r) if r.forward.as_ref().is_some_and(|f| f.cauchy) => stabilized += 1,
                _ if stabilization.is_none() => stabilization = Some(show()),
                _ => {}
            }
        }
    }
    vec![
        Check::new(
            SUITE,
            name,
            mismatch.is_none() && agree as u128 == total,
            format!("{total} sequences, {agree} verdicts agree, {coset_pass} satisfy the coset condition"),
        )
        .with_counterexample(mismatch),
        Check::new(
            SUITE,
            format!("left-translation[p={p} d={d} len={len}]"),
            translation.is_none(),
            format!("{} sequences x {} translators", total, translators.len()),
        )
        .with_counterexample(translation),
        Check::new(
            SUITE,
            format!("stabilization[p={p} d={d} len={len}]"),
            stabilization.is_none() && stabilized == coset_pass,
            format!("{stabilized} of {coset_pass} coset-condition sequences are Cauchy"),
        )
        .with_counterexample(stabilization),
    ]
}

/// Open sets against D-open sets, exhaustive up to the point limit and
/// sampled above it.
pub fn d_topology_suite(instances: &[(usize, usize)], samples: usize, seed: u64) -> Vec<Check> {
    instances
        .iter()
        .map(|&(p, d)| {
            let name = format!("open-iff-d-open[p={p} d={d}]");
            let model = match build_complex(p, d) {
                Ok(m) => m,
                Err(e) => return Check::error("d-topology", name, e),
            };
            let mode = if model.point_count() <= EXHAUSTIVE_POINT_LIMIT {
                SubsetMode::Exhaustive
            } else {
                SubsetMode::Sampled { samples, seed }
            };
            match d_topology_equivalence(&model, mode) {
                Ok(r) => {
                    let how = if mode == SubsetMode::Exhaustive { "exhaustive" } else { "sampled" };
                    let detail = format!(
                        "{} points, {} subsets checked ({how}), {} open, {} D-open",
                        r.points, r.subsets_checked, r.open, r.d_open
                    );
                    let passed = r.passed();
                    Check::new("d-topology", name, passed, detail)
                        .with_counterexample(r.counterexample.map(|s| s.to_string()))
                }
                Err(e) => Check::error("d-topology", name, e),
            }
        })
        .collect()
}

pub const DEFAULT_D_TOPOLOGY: [(usize, usize); 3] = [(2, 1), (2, 2), (3, 1)];
/// `(path points, p, d)` for the functional-plot check.
pub const DEFAULT_FUNCTIONAL_PLOTS: [(usize, usize, usize); 3] = [(3, 2, 1), (3, 2, 2), (2, 2, 3)];
/// `(path points, p, d)` for the vertex-valued map check.
pub const DEFAULT_VERTEX_MAPS: [(usize, usize, usize); 5] = [(3, 2, 1), (5, 2, 1), (2, 2, 2), (3, 3, 1), (3, 2, 2)];

fn path_of(points: usize) -> Result<PathModel, crate::finite::FiniteError> {
    PathModel::new(points, PointKind::Vertex)
}

/// Continuous maps from paths into `Aut(T_d)` and into vertex-points are constant.
pub fn discreteness_suite(plots: &[(usize, usize, usize)], vertex_maps: &[(usize, usize, usize)]) -> Vec<Check> {
    const SUITE: &str = "discreteness";
    let mut out = Vec::new();
    for &(len, p, d) in plots {
        let name = format!("functional-plots[len={len} p={p} d={d}]");
        let census = path_of(len).and_then(|path| functional_plot_enumeration_check(&path, p, d));
        out.push(match census {
            Ok(c) => {
                let order = Alphabet::new(p).ok().and_then(|a| Portrait::count(a, d)).unwrap_or(0);
                let passed = c.passed() && u128::from(c.continuous_constant) == order;
                let detail = format!(
                    "{} candidates, {} continuous, {} constant",
                    c.candidates, c.continuous, c.continuous_constant
                );
                Check::new(SUITE, name, passed, detail).with_counterexample(c.counterexample.map(|q| format!("{q:?}")))
            }
            Err(e) => Check::error(SUITE, name, e),
        });
    }
    for &(len, p, d) in vertex_maps {
        let name = format!("vertex-valued-maps[len={len} p={p} d={d}]");
        let census = build_complex(p, d)
            .and_then(|m| path_of(len).and_then(|path| vertex_valued_maps_constant(&path, &m).map(|c| (c, m))));
        out.push(match census {
            Ok((c, m)) => {
                let passed = c.passed() && c.continuous_constant as usize == m.vertex_point_count();
                let detail = format!(
                    "{} candidates, {} continuous, {} constant",
                    c.candidates, c.continuous, c.continuous_constant
                );
                Check::new(SUITE, name, passed, detail).with_counterexample(c.counterexample.map(|q| format!("{q:?}")))
            }
            Err(e) => Check::error(SUITE, name, e),
        });
    }
    out
}
