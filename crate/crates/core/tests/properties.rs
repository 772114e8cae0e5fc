//! Property tests for the module-level invariants: exact algebraic laws
//! on random inputs, plus small exhaustive runs where the claim is about
//! every instance of a bounded family.

use proptest::prelude::*;

use cms_core::bilipschitz::{
    canonical_pattern, dominates, is_alpha_perturbation, optimal_distortion, Distortion,
};
use cms_core::gen;
use cms_core::groups::{
    group_isomorphism, mult_graph, roelcke_metric, roelcke_structure, weighted_word_metric,
    FiniteGroup,
};
use cms_core::heaps::{group_from_heap, heap_from_group, heap_structure};
use cms_core::isometry::{
    brute_force_isometric_iso, decide_isometric_iso, full_signature, verify_isometric_iso,
};
use cms_core::json::{structure_from_json, structure_to_json};
use cms_core::rational::{rat, rat_int, Rat};
use cms_core::structure::{validate_structure, DistanceMatrix, MetricStructure};

fn positive_rat() -> impl Strategy<Value = Rat> {
    (1i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
}

fn random_structure_from_seed(seed: u64, max_points: usize) -> MetricStructure {
    let mut rng = gen::rng_from_seed(seed);
    gen::random_structure(
        &mut rng,
        max_points,
        &[("E".to_string(), 2), ("P".to_string(), 1)],
        0.3,
    )
}

proptest! {
    // scale_metric(scale_metric(S, l), 1/l) = S exactly.
    #[test]
    fn scaling_roundtrips_exactly(seed in any::<u64>(), lambda in positive_rat()) {
        let s = random_structure_from_seed(seed, 5);
        let inverse = rat_int(1) / &lambda;
        let back = s.scale_metric(&lambda).unwrap().scale_metric(&inverse).unwrap();
        prop_assert_eq!(back, s);
    }

    // Generated structures always pass the validator.
    #[test]
    fn generators_produce_valid_structures(seed in any::<u64>()) {
        let s = random_structure_from_seed(seed, 6);
        prop_assert!(validate_structure(s.points(), s.metric().entries(), s.relations()).ok());
    }

    // JSON round-trips bit-exactly and canonically.
    #[test]
    fn json_roundtrip_is_canonical(seed in any::<u64>()) {
        let s = random_structure_from_seed(seed, 5);
        let text = structure_to_json(&s);
        let parsed = structure_from_json(&text).unwrap();
        prop_assert_eq!(&parsed, &s);
        prop_assert_eq!(structure_to_json(&parsed), text);
    }

    // Signatures are invariant under relabeling.
    #[test]
    fn signature_is_relabeling_invariant(seed in any::<u64>()) {
        let s = random_structure_from_seed(seed, 4);
        let mut rng = gen::rng_from_seed(seed.wrapping_add(1));
        let perm = gen::random_permutation(&mut rng, s.len());
        let relabeled = s.relabel(&perm).unwrap();
        prop_assert_eq!(full_signature(&s), full_signature(&relabeled));
    }

    // Decider and oracle agree (and witnesses check out) on random pairs
    // of up to five points.
    #[test]
    fn decider_matches_oracle(seed in any::<u64>()) {
        let s = random_structure_from_seed(seed, 5);
        let t = random_structure_from_seed(seed.wrapping_mul(31).wrapping_add(7), 5);
        let decided = decide_isometric_iso(&s, &t).unwrap();
        let brute = brute_force_isometric_iso(&s, &t).unwrap();
        prop_assert_eq!(&decided, &brute);
        if let Some(f) = decided {
            prop_assert!(verify_isometric_iso(&s, &t, &f));
        }
    }

    // Alpha-perturbation is reflexive at 1, symmetric, and multiplicative.
    #[test]
    fn perturbation_algebra(seed in any::<u64>(), alpha_num in 1i64..6, beta_num in 1i64..6) {
        let mut rng = gen::rng_from_seed(seed);
        let a = gen::random_structure_exact(&mut rng, 3, &[], 0.0);
        let b = gen::random_structure_exact(&mut rng, 3, &[], 0.0);
        let c = gen::random_structure_exact(&mut rng, 3, &[], 0.0);
        let (ma, mb, mc) = (a.metric(), b.metric(), c.metric());
        let alpha = rat_int(1) + rat(alpha_num, 4);
        let beta = rat_int(1) + rat(beta_num, 4);
        prop_assert!(is_alpha_perturbation(ma, ma, &rat_int(1)).unwrap());
        prop_assert_eq!(
            is_alpha_perturbation(ma, mb, &alpha).unwrap(),
            is_alpha_perturbation(mb, ma, &alpha).unwrap()
        );
        if is_alpha_perturbation(ma, mb, &alpha).unwrap()
            && is_alpha_perturbation(mb, mc, &beta).unwrap()
        {
            prop_assert!(is_alpha_perturbation(ma, mc, &(&alpha * &beta)).unwrap());
        }
    }

    // Dominance is monotone in c at the canonical patterns.
    #[test]
    fn dominance_monotone_in_c(seed in any::<u64>()) {
        let mut rng = gen::rng_from_seed(seed);
        let s = gen::random_structure_exact(&mut rng, 3, &[("E".to_string(), 2)], 0.4);
        let t = gen::random_structure_exact(&mut rng, 3, &[("E".to_string(), 2)], 0.4);
        let patterns = [canonical_pattern(&s)];
        let mut previous = false;
        for c in [rat_int(1), rat(3, 2), rat_int(2), rat_int(4), rat_int(16)] {
            let now = dominates(&s, &t, &c, &patterns).unwrap();
            prop_assert!(!previous || now);
            previous = now;
        }
    }

    // The optimal distortion is 1 exactly when an isometric isomorphism
    // exists (the Distortion invariant).
    #[test]
    fn distortion_one_iff_isometric(seed in any::<u64>()) {
        let s = random_structure_from_seed(seed, 4);
        let t = random_structure_from_seed(seed.wrapping_add(17), 4);
        let isometric = brute_force_isometric_iso(&s, &t).unwrap().is_some();
        match optimal_distortion(&s, &t).unwrap() {
            Distortion::Finite(c) => prop_assert_eq!(c == rat_int(1), isometric),
            Distortion::None => prop_assert!(!isometric),
        }
    }

    // Converse at the canonical patterns, tested directly: two-sided
    // dominance at any c bounds the optimal distortion by c.
    #[test]
    fn canonical_dominance_bounds_distortion(seed in any::<u64>(), c_eighths in 8i64..40) {
        let mut rng = gen::rng_from_seed(seed);
        let s = gen::random_structure_exact(&mut rng, 3, &[("E".to_string(), 2)], 0.4);
        let t = gen::random_structure_exact(&mut rng, 3, &[("E".to_string(), 2)], 0.4);
        let c = rat(c_eighths, 8);
        let forward = dominates(&s, &t, &c, &[canonical_pattern(&s)]).unwrap();
        let backward = dominates(&t, &s, &c, &[canonical_pattern(&t)]).unwrap();
        if forward && backward {
            match optimal_distortion(&s, &t).unwrap() {
                Distortion::Finite(c_star) => prop_assert!(c_star <= c),
                Distortion::None => prop_assert!(false, "dominance without any bijection"),
            }
        }
    }
}

/// Groups of order up to 12 for the Roelcke axioms run.
fn groups_up_to_12() -> Vec<(String, FiniteGroup)> {
    let mut out = FiniteGroup::catalog_up_to_8();
    for n in [9usize, 10, 11, 12] {
        out.push((format!("Z{n}"), FiniteGroup::cyclic(n).unwrap()));
    }
    out.push(("D5".into(), FiniteGroup::dihedral(5).unwrap()));
    out.push(("D6".into(), FiniteGroup::dihedral(6).unwrap()));
    out.push((
        "Z2xZ6".into(),
        FiniteGroup::direct_product(
            &FiniteGroup::cyclic(2).unwrap(),
            &FiniteGroup::cyclic(6).unwrap(),
        )
        .unwrap(),
    ));
    out
}

// Roelcke metric axioms hold and d_roelcke <= d pointwise for every
// group of order <= 12 under generated left-invariant metrics.
#[test]
fn roelcke_axioms_up_to_order_12() {
    let mut rng = gen::rng_from_seed(42);
    for (name, g) in groups_up_to_12() {
        for _ in 0..3 {
            let d = weighted_word_metric(&g, &gen::random_weighted_generators(&mut rng, &g))
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            let matrix = roelcke_metric(&g, &d).unwrap_or_else(|e| panic!("{name}: {e}"));
            let s = roelcke_structure(&g, &d).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(
                validate_structure(s.points(), s.metric().entries(), s.relations()).ok(),
                "{name}: Roelcke structure fails the metric axioms"
            );
            for x in 0..g.order() {
                for y in 0..g.order() {
                    assert!(
                        *matrix.get(x, y) <= d.distance(&g, x, y),
                        "{name}: d_roelcke exceeds d at ({x}, {y})"
                    );
                }
            }
        }
    }
}

// The word metric is left-invariant and symmetric, as an exact identity.
#[test]
fn word_metric_left_invariant_and_symmetric() {
    let mut rng = gen::rng_from_seed(43);
    for (name, g) in FiniteGroup::catalog_up_to_8() {
        let d = weighted_word_metric(&g, &gen::random_weighted_generators(&mut rng, &g))
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        for k in 0..g.order() {
            for f in 0..g.order() {
                for h in 0..g.order() {
                    assert_eq!(
                        d.distance(&g, g.mul(k, f), g.mul(k, h)),
                        d.distance(&g, f, h),
                        "{name}: left invariance broke"
                    );
                    assert_eq!(
                        d.distance(&g, f, h),
                        d.distance(&g, h, f),
                        "{name}: symmetry broke"
                    );
                }
            }
        }
    }
}

// Heap isomorphism through the 4-ary graph coincides with group
// isomorphism, across the catalog of small groups.
#[test]
fn heap_graph_isomorphism_matches_group_isomorphism() {
    let catalog: Vec<(String, FiniteGroup)> = FiniteGroup::catalog_up_to_8()
        .into_iter()
        .filter(|(_, g)| g.order() <= 6)
        .collect();
    for (name_a, a) in &catalog {
        for (name_b, b) in &catalog {
            if a.order() != b.order() {
                continue;
            }
            let sa = heap_structure(&heap_from_group(a)).unwrap();
            let sb = heap_structure(&heap_from_group(b)).unwrap();
            let heaps_isomorphic = decide_isometric_iso(&sa, &sb).unwrap().is_some();
            let groups_isomorphic = group_isomorphism(a, b).is_some();
            assert_eq!(
                heaps_isomorphic, groups_isomorphic,
                "{name_a} vs {name_b}: heap-graph and group isomorphism disagree"
            );
        }
    }
}

// Roundtrips between heaps and groups are exact for relabeled copies of
// the catalog (a fuzzier complement to the acceptance run).
#[test]
fn heap_group_roundtrips_under_relabeling() {
    let mut rng = gen::rng_from_seed(44);
    for (name, g) in FiniteGroup::catalog_up_to_8() {
        let perm = gen::random_permutation(&mut rng, g.order());
        let relabeled = g.relabel(&perm).unwrap();
        let heap = heap_from_group(&relabeled);
        assert_eq!(
            group_from_heap(&heap, relabeled.identity()).unwrap(),
            relabeled,
            "{name}: roundtrip broke"
        );
        for e in 0..heap.order() {
            let induced = group_from_heap(&heap, e).unwrap();
            assert_eq!(
                heap_from_group(&induced),
                heap,
                "{name}: heap roundtrip broke"
            );
        }
    }
}

// The multiplication graph has exactly n^2 triples and reads back the
// table.
#[test]
fn mult_graph_reads_back_the_table() {
    for (name, g) in FiniteGroup::catalog_up_to_8() {
        let graph = mult_graph(&g);
        assert_eq!(graph.len(), g.order() * g.order(), "{name}");
        for t in &graph {
            assert_eq!(g.mul(t[0], t[1]), t[2], "{name}");
        }
    }
}

// Distance matrices reordered by any permutation stay well-formed and
// the decider accepts the relabeled pair (smoke over all catalog
// translation structures).
#[test]
fn discrete_structures_relabel_cleanly() {
    let mut rng = gen::rng_from_seed(45);
    let z6 = FiniteGroup::cyclic(6).unwrap();
    let subset = gen::random_subset(&mut rng, 6, 0.5);
    let s = cms_core::groups::translation_structure(&z6, 1, 5, &subset).unwrap();
    let perm = gen::random_permutation(&mut rng, 6);
    let relabeled = s.relabel(&perm).unwrap();
    assert!(DistanceMatrix::validate(relabeled.metric().entries()).ok());
    assert!(decide_isometric_iso(&s, &relabeled).unwrap().is_some());
}
