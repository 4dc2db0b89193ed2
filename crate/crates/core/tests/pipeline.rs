//! Cross-module behavior: pipeline against verifier, certificates, and
//! property-based checks of the LP and cover layers.

mod support;

use proptest::prelude::*;

use tie::cone::{self, RayDirection};
use tie::cover::{self, CoverInstance, DEFAULT_NODE_BUDGET};
use tie::engine::{self, Method, Verification};
use tie::env;
use tie::lp::{self, LinearProgram, LpOutcome};
use tie::model::{difference_vectors, DemonstrationSet, TeachingInstance};

use support::{as_difference_vectors, assert_dir_sets_match, halfspace_vectors};

#[test]
fn diamond_pair_of_witness_boards_teaches_six_slots() {
    // One board pins the slot-preference ray, the other the edge-count ray;
    // together they pin the whole six-slot family.
    let inst = env::gen_diamond(6).unwrap();
    let pair = DemonstrationSet::from_ids(&inst, &["hoooop".into(), "oososo".into()]).unwrap();
    assert_eq!(
        engine::verify_teaching_set(&inst, &pair).unwrap(),
        Verification::Valid
    );

    // Either board alone leaves the version space too big.
    for lone in ["hoooop", "oososo"] {
        let ds = DemonstrationSet::from_ids(&inst, &[lone.into()]).unwrap();
        match engine::verify_teaching_set(&inst, &ds).unwrap() {
            Verification::Counterexample { state, alt_action, witness } => {
                let taught = difference_vectors(&inst, &ds).unwrap();
                for dv in &taught {
                    assert!(support::dot(&witness, &dv.vec) >= 1.0 - 1e-7);
                }
                let t = inst.target(state);
                let psi: Vec<f64> = inst
                    .feature(state, t)
                    .iter()
                    .zip(inst.feature(state, alt_action))
                    .map(|(x, y)| x - y)
                    .collect();
                assert!(support::dot(&witness, &psi) <= 1e-7);
            }
            Verification::Valid => panic!("{lone} alone should not teach six slots"),
        }
    }
}

#[test]
fn tower_state_coverage_follows_divisors() {
    // For six floors, floor six covers exactly the rays whose reduced
    // denominator divides six: angles 0, 1/6, 1/3, 1/2, 2/3, 5/6 of a turn.
    let inst = env::gen_polygon_tower(6).unwrap();
    let all = difference_vectors(&inst, &DemonstrationSet::full(&inst)).unwrap();
    let extreme = cone::minimal_extreme(&cone::dedupe_rays(&all).unwrap()).unwrap();
    assert_eq!(extreme.len(), 12);

    let coverage = engine::build_coverage_sets(&inst, &extreme);
    let six = inst.state_index("6").unwrap();
    assert_eq!(coverage[six].len(), 6);
    let two = inst.state_index("2").unwrap();
    assert_eq!(coverage[two].len(), 2);
    let five = inst.state_index("5").unwrap();
    assert_eq!(coverage[five].len(), 5);

    // Distinct ray count is 1 plus the totient sum over denominators.
    let totient = |m: usize| (1..=m).filter(|k| gcd(*k, m) == 1).count();
    let expected: usize = 1 + (2..=6).map(totient).sum::<usize>();
    assert_eq!(extreme.len(), expected);
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn tower_certificate_replays_against_the_instance() {
    let inst = env::gen_polygon_tower(6).unwrap();
    let result = engine::optimal_teach(&inst, Method::Exact).unwrap();
    assert_eq!(result.teaching_set.ids(&inst), vec!["4", "5", "6"]);
    assert!(result.optimal);

    let mut seen = vec![false; result.extreme_rays.len()];
    for entry in &result.certificate {
        assert!(result.teaching_set.states().contains(&entry.state));
        seen[entry.ray] = true;
        let t = inst.target(entry.state);
        let psi: Vec<f64> = inst
            .feature(entry.state, t)
            .iter()
            .zip(inst.feature(entry.state, entry.alt_action))
            .map(|(x, y)| x - y)
            .collect();
        let dir = result.extreme_rays.rays[entry.ray].direction.unit();
        let psi_unit = support::unit(&psi);
        for (a, b) in dir.iter().zip(&psi_unit) {
            assert!((a - b).abs() < 1e-9);
        }
    }
    assert!(seen.iter().all(|&s| s), "every extreme ray needs a certificate entry");
}

#[test]
fn greedy_and_exact_agree_on_reduction_example() {
    let spec = env::SetCoverSpec {
        universe_size: 3,
        subsets: vec![vec![1, 2], vec![2, 3], vec![3]],
    };
    let inst = env::reduce_set_cover(&spec).unwrap();
    let exact = engine::optimal_teach(&inst, Method::Exact).unwrap();
    assert_eq!(exact.teaching_set.len(), 2);
    assert_eq!(exact.teaching_set.ids(&inst), vec!["1", "2"]);
    let greedy = engine::optimal_teach(&inst, Method::Greedy).unwrap();
    assert_eq!(greedy.teaching_set.len(), 2);
}

#[test]
fn threaded_verify_matches_serial_on_random_instances() {
    for seed in 0..12 {
        let inst = env::gen_random_realizable(2 + (seed % 2) as usize, 6, 3, seed).unwrap();
        let result = engine::optimal_teach(&inst, Method::Greedy).unwrap();
        let sets = [
            DemonstrationSet::new(&inst, vec![]).unwrap(),
            DemonstrationSet::new(&inst, vec![0]).unwrap(),
            result.teaching_set.clone(),
        ];
        for ds in &sets {
            let serial = engine::verify_teaching_set(&inst, ds).unwrap();
            for threads in [2, 4] {
                assert_eq!(
                    engine::verify_teaching_set_threaded(&inst, ds, threads).unwrap(),
                    serial,
                    "seed {seed}"
                );
            }
        }
    }
}

#[test]
fn elimination_is_idempotent_and_order_free_on_halfspace_sets() {
    for seed in 0..24 {
        let dim = 2 + (seed % 2) as usize;
        let vectors = halfspace_vectors(seed, dim, 8 + (seed % 5) as usize);
        let rays = cone::dedupe_rays(&as_difference_vectors(&vectors)).unwrap();
        let extreme = cone::minimal_extreme(&rays).unwrap();

        let again = cone::minimal_extreme(&extreme).unwrap();
        assert_eq!(again, extreme, "second pass must change nothing");

        let mut reversed = vectors.clone();
        reversed.reverse();
        let back = cone::minimal_extreme(
            &cone::dedupe_rays(&as_difference_vectors(&reversed)).unwrap(),
        )
        .unwrap();
        assert_dir_sets_match(&extreme.directions(), &back.directions(), 1e-9);
    }
}

#[test]
fn subset_constraints_relax_as_sets_shrink() {
    let inst = env::gen_diamond(2).unwrap();
    let witness = tie::model::check_realizability(&inst).unwrap();
    let full = difference_vectors(&inst, &DemonstrationSet::full(&inst)).unwrap();
    for dv in &full {
        assert!(support::dot(&witness.w, &dv.vec) >= 1.0 - 1e-9);
    }
    // Any witness for the full set stays strictly feasible on every subset.
    for take in 1..inst.num_states() {
        let ds = DemonstrationSet::new(&inst, (0..take).collect()).unwrap();
        for dv in difference_vectors(&inst, &ds).unwrap() {
            assert!(support::dot(&witness.w, &dv.vec) > 0.0);
        }
    }
}

#[test]
fn diamond_rays_are_exact_integer_pairs() {
    // Slot and edge counts are integers, so the canonical forms must be
    // gcd-reduced integer pairs, bounded by the geometry.
    let inst = env::gen_diamond(4).unwrap();
    let all = difference_vectors(&inst, &DemonstrationSet::full(&inst)).unwrap();
    let rays = cone::dedupe_rays(&all).unwrap();
    for ray in &rays.rays {
        match &ray.direction {
            RayDirection::Integer(v) => {
                assert_eq!(v.len(), 2);
                assert!(v[0].abs() <= 3 && v[1].abs() <= 6);
                let g = gcd(v[0].unsigned_abs() as usize, v[1].unsigned_abs() as usize);
                assert_eq!(g, 1);
            }
            other => panic!("expected integer ray, got {other:?}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lp_solutions_carry_their_own_proof(
        dim in 1usize..=3,
        rows in proptest::collection::vec(
            (proptest::collection::vec(-5i8..=5, 3), -4i8..=4),
            0..6,
        ),
        costs in proptest::collection::vec(-5i8..=5, 3),
    ) {
        let lp = LinearProgram {
            objective: costs[..dim].iter().map(|&c| c as f64).collect(),
            constraints: rows
                .iter()
                .map(|(a, b)| (a[..dim].iter().map(|&x| x as f64).collect(), *b as f64))
                .collect(),
        };
        let first = lp::solve(&lp).unwrap();
        prop_assert_eq!(&lp::solve(&lp).unwrap(), &first);
        match first {
            LpOutcome::Optimal { value, w } => {
                prop_assert!(lp::min_constraint_slack(&lp, &w) >= -1e-6);
                prop_assert!((support::dot(&lp.objective, &w) - value).abs() <= 1e-9);
            }
            LpOutcome::Unbounded { ray } => {
                prop_assert!(support::dot(&lp.objective, &ray) < 0.0);
                for (a, _) in &lp.constraints {
                    prop_assert!(support::dot(a, &ray) >= -1e-6);
                }
            }
            LpOutcome::Infeasible => {}
        }
    }

    #[test]
    fn dedupe_ignores_positive_scaling(
        seed in 0u64..500,
        scale_num in 1u8..=9,
    ) {
        let base = halfspace_vectors(seed, 3, 6);
        let rays = cone::dedupe_rays(&as_difference_vectors(&base)).unwrap();

        let mut doubled = base.clone();
        let c = scale_num as f64 / 2.0;
        doubled.extend(base.iter().map(|v| v.iter().map(|x| x * c).collect::<Vec<_>>()));
        let rays2 = cone::dedupe_rays(&as_difference_vectors(&doubled)).unwrap();
        prop_assert_eq!(rays2.len(), rays.len());
        assert_dir_sets_match(&rays.directions(), &rays2.directions(), 1e-9);
    }

    #[test]
    fn exact_cover_never_beats_enumeration_or_loses_to_greedy(
        universe in 1usize..=8,
        raw in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 8), 1..6),
    ) {
        let mut subsets: Vec<Vec<usize>> = raw
            .iter()
            .map(|mask| (0..universe).filter(|&e| mask[e]).collect())
            .collect();
        // Patch coverage so the instance is solvable.
        for e in 0..universe {
            if !subsets.iter().any(|s| s.contains(&e)) {
                let k = e % subsets.len();
                subsets[k].push(e);
            }
        }
        let ci = CoverInstance::new(
            universe,
            subsets.iter().cloned().enumerate().collect(),
        )
        .unwrap();
        let greedy = cover::greedy_cover(&ci).unwrap();
        let exact = cover::exact_cover(&ci, DEFAULT_NODE_BUDGET).unwrap();
        prop_assert!(exact.chosen.len() <= greedy.chosen.len());

        let one_based: Vec<Vec<usize>> = subsets
            .iter()
            .map(|s| s.iter().map(|e| e + 1).collect())
            .collect();
        let oracle = support::exhaustive_cover_optimum(universe, &one_based).unwrap();
        prop_assert_eq!(exact.chosen.len(), oracle);

        // Harmonic-factor guarantee for greedy.
        let largest = subsets.iter().map(Vec::len).max().unwrap().max(1);
        let bound = (1.0 + (largest as f64).ln()) * oracle as f64;
        prop_assert!(greedy.chosen.len() as f64 <= bound + 1e-9);
    }

    #[test]
    fn instance_json_round_trips(seed in 0u64..300) {
        let dim = 1 + (seed % 3) as usize;
        let states = 1 + (seed % 5) as usize;
        let actions = 1 + (seed % 4) as usize;
        let inst = env::gen_random_realizable(dim, states, actions, seed).unwrap();
        let back = TeachingInstance::from_json_str(&inst.to_json_string()).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn conic_membership_matches_caratheodory(seed in 0u64..400) {
        let dim = 2 + (seed % 2) as usize;
        let mut vectors = halfspace_vectors(seed, dim, 5);
        let probe = vectors.pop().unwrap();
        let lp_answer = cone::in_primal_cone(&probe, &vectors).unwrap();
        let oracle = support::caratheodory_member(&probe, &vectors, 1e-7);
        prop_assert_eq!(lp_answer, oracle);
    }
}

#[test]
fn verification_oracle_accepts_exact_pipeline_output() {
    for seed in [3, 17, 40] {
        let inst = env::gen_random_realizable(3, 7, 4, seed).unwrap();
        let result = engine::optimal_teach(&inst, Method::Exact).unwrap();
        assert_eq!(
            engine::verify_teaching_set(&inst, &result.teaching_set).unwrap(),
            Verification::Valid,
            "seed {seed}"
        );
        // Dropping any taught state must break validity; otherwise the
        // cover was not minimal.
        for drop in 0..result.teaching_set.len() {
            let rest: Vec<usize> = result
                .teaching_set
                .states()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, &s)| s)
                .collect();
            let ds = DemonstrationSet::new(&inst, rest).unwrap();
            assert!(matches!(
                engine::verify_teaching_set(&inst, &ds).unwrap(),
                Verification::Counterexample { .. }
            ));
        }
    }
}
