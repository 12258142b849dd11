//! Randomized structural checks: distribution normalization, parameter
//! sharing round trips, return recursions, hold semantics on asynchronous
//! rollouts, and the moving-average used for learning curves.

use coagent::harness::moving_average;
use coagent::learn::{aggregate_unique_gradient, local_log_prob_gradient};
use coagent::mdp::{discounted_return, returns_from, Trajectory};
use coagent::net::{
    build_network, coagent_policy_probs, network_step, two_layer_config, ActionHead, CoagentSpec,
    ExecutionRule, InputSource, ParameterStore, SharingMap,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A lone coagent of arbitrary small shape plus matching parameters/input.
fn coagent_case() -> impl Strategy<Value = (CoagentSpec, Vec<f64>, Vec<f64>)> {
    (0usize..4, 2usize..5).prop_flat_map(|(d, k)| {
        let spec = CoagentSpec {
            inputs: if d == 0 {
                vec![]
            } else {
                vec![InputSource::Observation { start: 0, len: d }]
            },
            outputs: (0..k).map(|i| i as f64).collect(),
            execution: ExecutionRule::Always,
        };
        (
            Just(spec),
            prop::collection::vec(-10.0..10.0f64, (d + 1) * k),
            prop::collection::vec(-5.0..5.0f64, d),
        )
    })
}

/// A surjective sharing assignment (identity prefix plus shuffled extras)
/// with a unique parameter vector and a non-unique gradient to aggregate.
fn sharing_case() -> impl Strategy<Value = (Vec<usize>, Vec<f64>, Vec<f64>)> {
    (1usize..6)
        .prop_flat_map(|n_u| {
            prop::collection::vec(0..n_u, 0..12).prop_map(move |extra| {
                let mut assignment: Vec<usize> = (0..n_u).collect();
                assignment.extend(extra);
                assignment
            })
        })
        .prop_shuffle()
        .prop_flat_map(|assignment| {
            let n_u = assignment.iter().max().unwrap() + 1;
            let n = assignment.len();
            (
                Just(assignment),
                prop::collection::vec(-3.0..3.0f64, n_u),
                prop::collection::vec(-3.0..3.0f64, n),
            )
        })
}

proptest! {
    #[test]
    fn policy_probabilities_form_a_distribution(
        (spec, params, input) in coagent_case(),
    ) {
        let probs = coagent_policy_probs(&spec, &input, &params).unwrap();
        prop_assert_eq!(probs.len(), spec.n_outputs());
        prop_assert!(probs.iter().all(|&p| (0.0..=1.0).contains(&p)));
        let total: f64 = probs.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12, "probabilities sum to {total}");
    }

    #[test]
    fn score_function_has_zero_expectation(
        (spec, params, input) in coagent_case(),
    ) {
        let probs = coagent_policy_probs(&spec, &input, &params).unwrap();
        let mut expectation = vec![0.0; params.len()];
        for (u, &p) in probs.iter().enumerate() {
            let grad = local_log_prob_gradient(&spec, &input, u, &params).unwrap();
            for (e, g) in expectation.iter_mut().zip(&grad) {
                *e += p * g;
            }
        }
        for e in expectation {
            prop_assert!(e.abs() <= 1e-10, "residual {e}");
        }
    }

    #[test]
    fn parameter_expansion_copies_unique_values(
        (assignment, unique, _) in sharing_case(),
    ) {
        let sharing = SharingMap::new(assignment.clone()).unwrap();
        let store = ParameterStore::from_unique(sharing, unique.clone()).unwrap();
        let expanded = store.expand_parameters();
        prop_assert_eq!(expanded.len(), assignment.len());
        for (slot, &u) in assignment.iter().enumerate() {
            prop_assert_eq!(expanded[slot], unique[u]);
        }
        prop_assert_eq!(store.expanded(), expanded.as_slice());
    }

    #[test]
    fn sparse_aggregation_matches_the_dense_matrix_product(
        (assignment, unique, grad) in sharing_case(),
    ) {
        let sharing = SharingMap::new(assignment.clone()).unwrap();
        let sparse = aggregate_unique_gradient(&grad, &sharing).unwrap();

        // Dense route: multiply by the transpose of the 0/1 expansion matrix.
        let n_u = sharing.n_unique();
        let mut dense = vec![0.0; n_u];
        for u in 0..n_u {
            for (slot, &a) in assignment.iter().enumerate() {
                dense[u] += if a == u { 1.0 } else { 0.0 } * grad[slot];
            }
        }
        prop_assert_eq!(&sparse, &dense);

        // Adjoint identity: <expand(theta), g> == <theta, aggregate(g)>.
        let store = ParameterStore::from_unique(sharing, unique.clone()).unwrap();
        let lhs: f64 = store.expanded().iter().zip(&grad).map(|(a, b)| a * b).sum();
        let rhs: f64 = unique.iter().zip(&sparse).map(|(a, b)| a * b).sum();
        prop_assert!(
            (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0),
            "{lhs} vs {rhs}"
        );
    }

    #[test]
    fn return_recursion_matches_direct_sums(
        rewards in prop::collection::vec(-10.0..10.0f64, 1..30),
        gamma in 0.01..1.0f64,
    ) {
        let recursive = returns_from(&rewards, gamma);
        prop_assert_eq!(recursive.len(), rewards.len());
        for (t, &g) in recursive.iter().enumerate() {
            let direct = discounted_return(&rewards[t..], gamma, 0).unwrap();
            prop_assert!(
                (g - direct).abs() <= 1e-12 * direct.abs().max(1.0),
                "step {t}: {g} vs {direct}"
            );
        }
    }

    #[test]
    fn non_executing_coagents_hold_their_outputs(
        seed in 0u64..1_000,
        p in 0.0..=1.0f64,
        steps in 1usize..12,
    ) {
        let config = two_layer_config(
            3,
            2,
            ExecutionRule::Bernoulli(p),
            ActionHead::Discrete { count: 2 },
            true,
            false,
        )
        .unwrap();
        let (topology, mut store) = build_network(&config).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta: Vec<f64> = (0..topology.n_unique())
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect();
        store.set_unique(&theta).unwrap();

        let mut policy_rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5);
        let mut exec_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5A5A);
        let mut records = Vec::new();
        let mut prev: Option<Vec<usize>> = None;
        for _ in 0..steps {
            let obs: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let (_, rec) = network_step(
                &topology,
                &store,
                &obs,
                prev.as_deref(),
                &mut policy_rng,
                &mut exec_rng,
            )
            .unwrap();
            if let Some(held) = &prev {
                for i in 0..topology.m() {
                    if !rec.executions[i] {
                        prop_assert_eq!(rec.outputs[i], held[i]);
                    }
                }
            } else {
                prop_assert!(rec.executions.iter().all(|&e| e));
            }
            prev = Some(rec.outputs.clone());
            records.push(rec);
        }
        Trajectory::from_steps(records, 0.9)
            .unwrap()
            .validate_hold_semantics()
            .unwrap();
    }

    #[test]
    fn moving_average_matches_direct_window_means(
        xs in prop::collection::vec(-100.0..100.0f64, 1..50),
        window in 1usize..60,
    ) {
        let smoothed = moving_average(&xs, window);
        prop_assert_eq!(smoothed.len(), xs.len());
        for (k, &s) in smoothed.iter().enumerate() {
            let lo = (k + 1).saturating_sub(window);
            let slice = &xs[lo..=k];
            let direct: f64 = slice.iter().sum::<f64>() / slice.len() as f64;
            prop_assert!(
                (s - direct).abs() <= 1e-9 * direct.abs().max(1.0),
                "index {k}: {s} vs {direct}"
            );
        }
    }
}
