use std::sync::Arc;

use proptest::prelude::*;

use treeaut::automaton::{fixtures, Automaton};
use treeaut::congruence::{agreement_level, congruence_distance, same_coset_mod_stab};
use treeaut::element::{Element, Factor};
use treeaut::finite::{build_complex, is_d_open, is_open, AlexandrovModel, SubsetMask};
use treeaut::portrait::Portrait;
use treeaut::tree::{Alphabet, Vertex};
use treeaut::wire::{coset_condition_check, CurveSamples, GeodesicLine, Ray};

fn fixture() -> impl Strategy<Value = Arc<Automaton>> {
    prop::sample::select(fixtures::NAMES.to_vec()).prop_map(|n| fixtures::load(n).unwrap())
}

fn word(aut: &Arc<Automaton>, max: usize) -> impl Strategy<Value = Element> {
    let gens: Vec<Factor> = (0..aut.state_count() as u32)
        .filter(|&s| !aut.is_trivial_state(s))
        .flat_map(|s| [Factor::new(s), Factor::new(s).inv()])
        .collect();
    let aut = Arc::clone(aut);
    prop::collection::vec(prop::sample::select(gens), 0..=max).prop_map(move |w| Element::from_word(&aut, w))
}

fn triple() -> impl Strategy<Value = (Element, Element, Element)> {
    fixture().prop_flat_map(|aut| (word(&aut, 6), word(&aut, 6), word(&aut, 6)))
}

fn vertex(max: usize) -> impl Strategy<Value = Vertex> {
    prop::collection::vec(0u8..2, 0..=max).prop_map(Vertex::from_letters)
}

fn ray() -> impl Strategy<Value = Ray> {
    (prop::collection::vec(0u8..3, 0..4), prop::collection::vec(0u8..3, 1..4))
        .prop_map(|(pre, per)| Ray::new(pre, per).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_of_product((g, h, _) in triple()) {
        let lhs = g.compose(&h).unwrap().inverse();
        let rhs = h.inverse().compose(&g.inverse()).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn equality_is_consistent_with_action((g, h, _) in triple(), v in vertex(7)) {
        if g.equals(&h).unwrap() {
            prop_assert_eq!(g.apply(&v), h.apply(&v));
        }
        prop_assert!(g.equals(&g).unwrap());
        prop_assert_eq!(g.equals(&h).unwrap(), h.equals(&g).unwrap());
    }

    #[test]
    fn action_preserves_prefixes((g, _, _) in triple(), v in vertex(7), cut in 0usize..8) {
        let cut = cut.min(v.len());
        prop_assert_eq!(g.apply(&v).prefix(cut), g.apply(&v.prefix(cut)));
        prop_assert_eq!(g.apply(&v).len(), v.len());
    }

    #[test]
    fn distance_is_a_symmetric_ultrametric((g, h, k) in triple()) {
        let d = |x: &Element, y: &Element| agreement_level(x, y, 12).unwrap().depth();
        prop_assert_eq!(d(&g, &h), d(&h, &g));
        prop_assert!(d(&g, &k) >= d(&g, &h).min(d(&h, &k)));
        if let (Ok(a), Ok(b)) = (congruence_distance(&g, &h, 12), congruence_distance(&h, &g, 12)) {
            prop_assert_eq!(a, b);
            prop_assert!((0.0..=1.0).contains(&a));
        }
    }

    #[test]
    fn coset_relation_matches_agreement((g, h, _) in triple(), n in 0usize..8) {
        let agree = agreement_level(&g, &h, 12).unwrap().depth() >= n;
        prop_assert_eq!(same_coset_mod_stab(&g, &h, n).unwrap(), agree);
    }

    #[test]
    fn coset_condition_is_left_invariant((g, h, k) in triple(), start in -2i64..1) {
        let samples = CurveSamples::new(start, vec![g.clone(), h.clone(), k.clone(), g]).unwrap();
        let moved = samples.left_translate(&h).unwrap();
        prop_assert_eq!(
            coset_condition_check(&samples).unwrap().passed,
            coset_condition_check(&moved).unwrap().passed
        );
    }

    #[test]
    fn ray_text_round_trips(r in ray()) {
        let back: Ray = r.to_string().parse().unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(Ray::new(r.prefix(r.preperiod().len()), r.period().to_vec()).unwrap(), r);
    }

    #[test]
    fn lines_are_paths_and_images_keep_shape(idx in 0usize..6, (g, _, _) in triple(), n in -12i64..12) {
        let lines = GeodesicLine::root_lines(Alphabet::new(2).unwrap(), 3);
        let line = &lines[idx % lines.len()];
        prop_assert!(line.vertex(n).is_adjacent(&line.vertex(n + 1)));
        let image = line.image_under(&g);
        prop_assert_eq!(image.contains_root(), line.contains_root());
        prop_assert_eq!(image.v0().len(), line.v0().len());
        prop_assert!(image.vertex(n).is_adjacent(&image.vertex(n + 1)));
    }

    #[test]
    fn open_sets_are_d_open(bits in any::<u32>()) {
        let m = build_complex(2, 3).unwrap();
        let n = m.point_count();
        let s = SubsetMask::from_bits(n, u64::from(bits) | u64::from(bits.rotate_left(7)) << 29);
        let closure = s.points().fold(SubsetMask::empty(n), |acc, p| acc.union(&m.open_star(p)));
        prop_assert!(is_open(&m, &closure));
        prop_assert!(is_d_open(&m, &closure));
        prop_assert_eq!(is_open(&m, &s), is_d_open(&m, &s));
    }

    #[test]
    fn automorphisms_act_by_homeomorphisms(seed in any::<u64>(), bits in any::<u16>()) {
        use rand::SeedableRng;
        let m = build_complex(2, 2).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let action = m.action(&Portrait::random(m.alphabet(), 2, &mut rng));
        let s = SubsetMask::from_bits(m.point_count(), u64::from(bits));
        prop_assert_eq!(is_open(&m, &s), is_open(&m, &s.preimage(&action)));
    }
}
