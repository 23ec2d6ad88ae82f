use std::collections::BTreeSet;

use fibtype::diagram::grow::{grow, lane_presentation, GrowConfig};
use fibtype::diagram::{
    ant_walk, assign_angles, color_faces, curvature_report, forbidden_patterns, is_reduced, lane_decomposition,
    parse_and_validate, rational, z_placement_check, AngleAssignment, Color, VanKampenDiagram,
};
use fibtype::classify::classify;
use fibtype::params::{derive, rescale_iso, swap_iso};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grown(seed: u64, p: u32, steps: usize, cfg: fn(usize) -> GrowConfig) -> (VanKampenDiagram, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = grow(&mut rng, lane_presentation(p).unwrap(), cfg(steps));
    (d, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gauss_bonnet_any_angles(seed in any::<u64>(), p in 3u32..=5, steps in 0usize..25) {
        let (d, mut rng) = grown(seed, p, steps, GrowConfig::standard);
        let std = curvature_report(&d, &assign_angles(&d));
        prop_assert_eq!(std.total, rational(360, 1));
        let random = AngleAssignment::from_fn(&d, |_| rational(rng.gen_range(-1000..1000), rng.gen_range(1..50)));
        prop_assert_eq!(curvature_report(&d, &random).total, rational(360, 1));
    }

    #[test]
    fn grown_diagrams_are_reduced_and_round_trip(seed in any::<u64>(), p in 3u32..=5, steps in 0usize..25) {
        let (d, _) = grown(seed, p, steps, GrowConfig::standard);
        prop_assert!(is_reduced(&d));
        prop_assert!(z_placement_check(&d).is_empty());
        let again = parse_and_validate(&d.to_json()).unwrap();
        prop_assert_eq!(again.faces(), d.faces());
    }

    #[test]
    fn ant_walks_and_lanes(seed in any::<u64>(), p in 3u32..=5, steps in 0usize..25) {
        let (d, _) = grown(seed, p, steps, GrowConfig::standard);
        let cd = color_faces(&d);
        for h in cd.black_faces() {
            let l = ant_walk(&cd, h).unwrap();
            let faces: BTreeSet<usize> = l.whites.iter().chain(&l.blacks).copied().collect();
            prop_assert_eq!(faces.len(), l.whites.len() + l.blacks.len(), "revisit");
            prop_assert!(l.whites.iter().all(|&f| cd.color(f) == Color::White));
            prop_assert!(l.shape().is_some(), "lane {:?} ends {:?}", l.kind(), l.destination);
        }
        let ls = lane_decomposition(&cd).unwrap();
        let mut owned = BTreeSet::new();
        for e in &ls.elements {
            prop_assert!(e.faces.iter().all(|f| owned.insert(*f)), "elements overlap");
        }
        // every black face lies in some element
        prop_assert!(cd.black_faces().iter().all(|f| owned.contains(f)));
        prop_assert!(forbidden_patterns(&cd).is_empty());
    }

    #[test]
    fn no_small_vertices_means_all_white(seed in any::<u64>(), p in 3u32..=5, steps in 0usize..25) {
        let (d, _) = grown(seed, p, steps, GrowConfig::without_small_vertices);
        prop_assert!((0..d.vertex_count()).all(|v| !d.is_interior_vertex(v) || d.degree(v) > 6));
        let cd = color_faces(&d);
        prop_assert!(cd.black_faces().is_empty());
    }

    #[test]
    fn classify_invariant_under_isomorphisms(n in 2u32..80, m in 0u32..80, k in 0u32..80, c in 1u32..80) {
        let p = derive(n, m % n, k % n).unwrap();
        prop_assume!(p.gcd == 1);
        let base = classify(n, p.m, p.k).unwrap().verdict();
        let s = swap_iso(&p);
        prop_assert_eq!(classify(n, s.m, s.k).unwrap().verdict(), base.clone());
        if let Ok(r) = rescale_iso(&p, c % n) {
            prop_assert_eq!(classify(n, r.m, r.k).unwrap().verdict(), base);
        }
    }
}
