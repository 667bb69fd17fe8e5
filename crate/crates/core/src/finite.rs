//! Finite topological models of tree truncations and of lines.
//!
//! The depth-`d` truncation `T_d` is modelled by the face poset of its
//! 1-complex: one point per vertex and one per edge, with an edge-point
//! above each of its two endpoints. Opens are the up-closed sets, so the
//! smallest open set containing a vertex is its open star. Curves are
//! modelled by path posets `v e v e .. v` and continuity of maps between
//! such spaces is monotonicity.
//!
//! The checks here are exhaustive enumerations with a hard candidate bound.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::portrait::Portrait;
use crate::tree::{Alphabet, Vertex};

/// Largest number of subsets enumerated by [`d_topology_equivalence`] in
/// exhaustive mode is `2^EXHAUSTIVE_POINT_LIMIT`.
pub const EXHAUSTIVE_POINT_LIMIT: usize = 25;

/// Upper bound on the number of candidate maps any enumeration visits.
pub const MAX_CANDIDATES: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteError {
    #[error("need p >= 2 and d >= 1, got p = {p}, d = {d}")]
    BadParameters { p: usize, d: usize },
    #[error("{points} points is too many for exhaustive subset enumeration (limit {EXHAUSTIVE_POINT_LIMIT})")]
    TooLargeForExhaustive { points: usize },
    #[error("{candidates} candidate maps exceed the enumeration bound {MAX_CANDIDATES}")]
    TooLarge { candidates: String },
    #[error("a path model needs at least two points")]
    PathTooShort,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointKind {
    Vertex,
    Edge,
}

/// A finite space whose opens are the up-sets of a height-one poset:
/// every vertex-point lies below the edge-points it is incident to.
pub trait AlexandrovModel {
    fn point_count(&self) -> usize;

    fn kind(&self, point: usize) -> PointKind;

    /// Edge-points strictly above `point` (empty for edge-points).
    fn cover(&self, point: usize) -> &[usize];

    /// Specialization order: `a <= b` iff `b` lies in every open set containing `a`.
    fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.cover(a).contains(&b)
    }

    /// Smallest open set containing `point`.
    fn open_star(&self, point: usize) -> SubsetMask {
        let mut s = SubsetMask::empty(self.point_count());
        s.insert(point);
        for &e in self.cover(point) {
            s.insert(e);
        }
        s
    }
}

/// A subset of a model's points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask(Vec<bool>);

impl SubsetMask {
    pub fn empty(n: usize) -> Self {
        SubsetMask(vec![false; n])
    }

    pub fn full(n: usize) -> Self {
        SubsetMask(vec![true; n])
    }

    /// Subset given by the low `n` bits of `bits`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        SubsetMask((0..n).map(|i| bits >> i & 1 == 1).collect())
    }

    pub fn from_points(n: usize, points: &[usize]) -> Self {
        let mut s = Self::empty(n);
        for &p in points {
            s.insert(p);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.0.iter().any(|&b| b)
    }

    pub fn contains(&self, point: usize) -> bool {
        self.0[point]
    }

    pub fn insert(&mut self, point: usize) {
        self.0[point] = true;
    }

    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn complement(&self) -> Self {
        SubsetMask(self.0.iter().map(|b| !b).collect())
    }

    pub fn union(&self, other: &Self) -> Self {
        SubsetMask(self.0.iter().zip(&other.0).map(|(a, b)| *a || *b).collect())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        SubsetMask(self.0.iter().zip(&other.0).map(|(a, b)| *a && *b).collect())
    }

    /// Preimage under a map given by the image index of each source point.
    pub fn preimage(&self, map: &[usize]) -> Self {
        SubsetMask(map.iter().map(|&i| self.0[i]).collect())
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", pts.join(","))
    }
}

/// Up-closure test: every vertex-point in `s` has its incident edge-points in `s`.
pub fn is_open<M: AlexandrovModel + ?Sized>(model: &M, s: &SubsetMask) -> bool {
    (0..model.point_count()).filter(|&i| s.contains(i)).all(|i| model.cover(i).iter().all(|&e| s.contains(e)))
}

/// Face-poset model of the truncation `T_d`.
#[derive(Debug, Clone)]
pub struct ComplexModel {
    alphabet: Alphabet,
    depth: usize,
    // vertex-points are 0..vertices.len(), edge-point for non-root child c at vertices.len() + index(c) - 1
    vertices: Vec<Vertex>,
    covers: Vec<Vec<usize>>,
}

pub fn build_complex(p: usize, d: usize) -> Result<ComplexModel, FiniteError> {
    let alphabet = Alphabet::new(p).map_err(|_| FiniteError::BadParameters { p, d })?;
    if d < 1 {
        return Err(FiniteError::BadParameters { p, d });
    }
    let vertices = alphabet.ball(d + 1);
    let nv = vertices.len();
    let mut covers = vec![Vec::new(); 2 * nv - 1];
    for (i, v) in vertices.iter().enumerate().skip(1) {
        let edge = nv + i - 1;
        covers[i].push(edge);
        let parent = alphabet.ball_index(&v.parent().expect("non-root"));
        covers[parent].push(edge);
    }
    for c in covers.iter_mut() {
        c.sort_unstable();
    }
    Ok(ComplexModel { alphabet, depth: d, vertices, covers })
}

impl ComplexModel {
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn vertex_point_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_point_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertex_point(&self, v: &Vertex) -> usize {
        self.alphabet.ball_index(v)
    }

    /// Edge-point of the edge joining `child` to its parent.
    pub fn edge_point(&self, child: &Vertex) -> usize {
        self.vertices.len() + self.alphabet.ball_index(child) - 1
    }

    pub fn vertex_of(&self, point: usize) -> Option<&Vertex> {
        self.vertices.get(point)
    }

    fn leaves(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.iter().filter(|v| v.len() == self.depth)
    }

    /// Point map induced by a portrait: vertices by its action, edges by the
    /// action on their lower endpoint.
    pub fn action(&self, g: &Portrait) -> Vec<usize> {
        let nv = self.vertices.len();
        let mut map = vec![0; 2 * nv - 1];
        for (i, v) in self.vertices.iter().enumerate() {
            let image = g.apply(v);
            map[i] = self.vertex_point(&image);
            if i > 0 {
                map[nv + i - 1] = self.edge_point(&image);
            }
        }
        map
    }

    /// The path model of the geodesic from leaf `u` to leaf `w`, embedded.
    fn geodesic(&self, u: &Vertex, w: &Vertex) -> PathModel {
        let common = u.letters().iter().zip(w.letters()).take_while(|(a, b)| a == b).count();
        let mut image = Vec::new();
        for k in (common..=u.len()).rev() {
            let x = u.prefix(k);
            if k < u.len() {
                image.push(self.edge_point(&u.prefix(k + 1)));
            }
            image.push(self.vertex_point(&x));
        }
        for k in common + 1..=w.len() {
            image.push(self.edge_point(&w.prefix(k)));
            image.push(self.vertex_point(&w.prefix(k)));
        }
        let mut path = PathModel::new(image.len(), PointKind::Vertex).expect("leaves are distinct");
        path.embedding = Some(image);
        path
    }
}

impl AlexandrovModel for ComplexModel {
    fn point_count(&self) -> usize {
        self.covers.len()
    }

    fn kind(&self, point: usize) -> PointKind {
        if point < self.vertices.len() {
            PointKind::Vertex
        } else {
            PointKind::Edge
        }
    }

    fn cover(&self, point: usize) -> &[usize] {
        &self.covers[point]
    }
}

/// A path poset: alternating vertex- and edge-points, each vertex-point
/// below its neighbours. Geodesic paths of a complex carry their embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathModel {
    kinds: Vec<PointKind>,
    covers: Vec<Vec<usize>>,
    embedding: Option<Vec<usize>>,
}

impl PathModel {
    /// An abstract path of `len` alternating points starting with `first`.
    pub fn new(len: usize, first: PointKind) -> Result<PathModel, FiniteError> {
        if len < 2 {
            return Err(FiniteError::PathTooShort);
        }
        let offset = usize::from(first == PointKind::Edge);
        let kinds: Vec<PointKind> =
            (0..len).map(|i| if (i + offset) % 2 == 0 { PointKind::Vertex } else { PointKind::Edge }).collect();
        let covers = (0..len)
            .map(|i| match kinds[i] {
                PointKind::Edge => Vec::new(),
                PointKind::Vertex => {
                    [i.checked_sub(1), Some(i + 1)].into_iter().flatten().filter(|&j| j < len).collect()
                }
            })
            .collect();
        Ok(PathModel { kinds, covers, embedding: None })
    }

    /// The path `v e v .. e v` with `edges` edges.
    pub fn segment(edges: usize) -> Result<PathModel, FiniteError> {
        Self::new(2 * edges + 1, PointKind::Vertex)
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn embedding(&self) -> Option<&[usize]> {
        self.embedding.as_deref()
    }

    /// Pairs `(x, y)` with `x < y` in the path order.
    pub fn cover_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.covers.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |&j| (i, j)))
    }
}

impl AlexandrovModel for PathModel {
    fn point_count(&self) -> usize {
        self.kinds.len()
    }

    fn kind(&self, point: usize) -> PointKind {
        self.kinds[point]
    }

    fn cover(&self, point: usize) -> &[usize] {
        &self.covers[point]
    }
}

/// All leaf-to-leaf geodesics of the truncation, one per unordered leaf pair.
pub fn enumerate_geodesic_paths(model: &ComplexModel) -> Vec<PathModel> {
    let leaves: Vec<&Vertex> = model.leaves().collect();
    let mut out = Vec::new();
    for (i, u) in leaves.iter().enumerate() {
        for w in &leaves[i + 1..] {
            out.push(model.geodesic(u, w));
        }
    }
    out
}

fn preimage_open_along(paths: &[PathModel], s: &SubsetMask) -> bool {
    paths.iter().all(|path| is_open(path, &s.preimage(path.embedding().expect("embedded path"))))
}

/// D-openness in the finite model: the preimage under every geodesic path
/// inclusion is open in the path.
pub fn is_d_open(model: &ComplexModel, s: &SubsetMask) -> bool {
    preimage_open_along(&enumerate_geodesic_paths(model), s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetMode {
    Exhaustive,
    /// Every open star and its complement, plus `samples` random subsets.
    Sampled {
        samples: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub points: usize,
    pub subsets_checked: u64,
    pub open: u64,
    pub d_open: u64,
    pub counterexample: Option<SubsetMask>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Compares openness with D-openness on every subset (or a sample).
pub fn d_topology_equivalence(model: &ComplexModel, mode: SubsetMode) -> Result<EquivalenceReport, FiniteError> {
    let n = model.point_count();
    let paths = enumerate_geodesic_paths(model);
    let mut report = EquivalenceReport { points: n, subsets_checked: 0, open: 0, d_open: 0, counterexample: None };
    let check = |s: SubsetMask, report: &mut EquivalenceReport| {
        let open = is_open(model, &s);
        let d_open = preimage_open_along(&paths, &s);
        report.subsets_checked += 1;
        report.open += u64::from(open);
        report.d_open += u64::from(d_open);
        if open != d_open && report.counterexample.is_none() {
            report.counterexample = Some(s);
        }
    };
    match mode {
        SubsetMode::Exhaustive => {
            if n > EXHAUSTIVE_POINT_LIMIT {
                return Err(FiniteError::TooLargeForExhaustive { points: n });
            }
            for bits in 0..1u64 << n {
                check(SubsetMask::from_bits(n, bits), &mut report);
            }
        }
        SubsetMode::Sampled { samples, seed } => {
            for point in 0..n {
                let star = model.open_star(point);
                check(star.complement(), &mut report);
                check(star, &mut report);
                check(SubsetMask::from_points(n, &[point]), &mut report);
            }
            let mut rng = StdRng::seed_from_u64(seed);
            for _ in 0..samples {
                check(SubsetMask((0..n).map(|_| rng.gen_bool(0.5)).collect()), &mut report);
            }
        }
    }
    Ok(report)
}

/// Outcome of a map enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapCensus {
    pub candidates: u64,
    pub continuous: u64,
    pub continuous_constant: u64,
    /// First continuous non-constant map, as target indices per source point.
    pub counterexample: Option<Vec<usize>>,
}

impl MapCensus {
    /// Every continuous candidate is constant.
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn candidate_count(targets: usize, sources: usize) -> Result<u64, FiniteError> {
    let count = (targets as u128).checked_pow(sources as u32).filter(|&c| c <= MAX_CANDIDATES);
    count.map(|c| c as u64).ok_or_else(|| FiniteError::TooLarge { candidates: format!("{targets}^{sources}") })
}

// Mixed-radix enumeration of all maps {0..sources} -> {0..targets}.
fn for_each_map(targets: usize, sources: usize, mut f: impl FnMut(&[usize])) {
    let mut digits = vec![0usize; sources];
    loop {
        f(&digits);
        let mut i = sources;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < targets {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Enumerates every map from the path into the vertex-points of the model
/// and checks that the continuous (monotone) ones are constant: a connected
/// space cannot map continuously onto more than one vertex.
pub fn vertex_valued_maps_constant(path: &PathModel, model: &ComplexModel) -> Result<MapCensus, FiniteError> {
    let targets = model.vertex_point_count();
    let candidates = candidate_count(targets, path.len())?;
    let pairs: Vec<(usize, usize)> = path.cover_pairs().collect();
    let mut census = MapCensus { candidates, continuous: 0, continuous_constant: 0, counterexample: None };
    for_each_map(targets, path.len(), |f| {
        if pairs.iter().all(|&(x, y)| model.leq(f[x], f[y])) {
            census.continuous += 1;
            if f.iter().all(|&t| t == f[0]) {
                census.continuous_constant += 1;
            } else if census.counterexample.is_none() {
                census.counterexample = Some(f.to_vec());
            }
        }
    });
    Ok(census)
}

/// Whether `(x, t) ↦ q(x)(t)` is monotone on the product of the path and
/// the complex. `actions[i]` is the point map of the `i`-th group element
/// and `q[x]` indexes into it.
pub fn evaluation_is_continuous(path: &PathModel, model: &ComplexModel, actions: &[Vec<usize>], q: &[usize]) -> bool {
    let n = model.point_count();
    // t <= t' with x fixed
    let along_model = q.iter().all(|&g| {
        let act = &actions[g];
        (0..n).all(|t| model.cover(t).iter().all(|&u| model.leq(act[t], act[u])))
    });
    // x <= x' with t fixed
    along_model
        && path.cover_pairs().all(|(x, y)| {
            let (gx, gy) = (&actions[q[x]], &actions[q[y]]);
            (0..n).all(|t| model.leq(gx[t], gy[t]))
        })
}

/// Enumerates every map `q` from the path into `Aut(T_d)` and checks that
/// those whose evaluation map is continuous are constant.
///
/// Visits `|Aut(T_d)|^len` candidates, bounded by [`MAX_CANDIDATES`].
pub fn functional_plot_enumeration_check(path: &PathModel, p: usize, d: usize) -> Result<MapCensus, FiniteError> {
    let model = build_complex(p, d)?;
    let group_order = Portrait::count(model.alphabet(), d)
        .filter(|&c| c <= MAX_CANDIDATES)
        .ok_or_else(|| FiniteError::TooLarge { candidates: format!("|Aut(T_{d})|^{}", path.len()) })?;
    let candidates = candidate_count(group_order as usize, path.len())?;
    let actions: Vec<Vec<usize>> = Portrait::enumerate(model.alphabet(), d).map(|g| model.action(&g)).collect();
    let mut census = MapCensus { candidates, continuous: 0, continuous_constant: 0, counterexample: None };
    for_each_map(actions.len(), path.len(), |q| {
        if evaluation_is_continuous(path, &model, &actions, q) {
            census.continuous += 1;
            if q.iter().all(|&g| g == q[0]) {
                census.continuous_constant += 1;
            } else if census.counterexample.is_none() {
                census.counterexample = Some(q.to_vec());
            }
        }
    });
    Ok(census)
}
