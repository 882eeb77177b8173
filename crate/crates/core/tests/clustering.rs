mod common;

use acmin::cluster::{acmin, approx_aamc, init_nci, AcminParams, InitStrategy};
use acmin::graph::{AttributedGraph, WalkOperator};
use acmin::oracle::{brute_force_min_aamc, exact_aamc, materialize_s, partition_aamc_values, usc};
use acmin::{synth, Nci};
use common::*;
use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

fn params(k: usize, seed: u64) -> AcminParams {
    AcminParams { seed, ..AcminParams::new(k) }
}

/// Greedy seeding evaluated from dense powers of `P_V`.
fn reference_init(g: &AttributedGraph, k: usize, alpha: f64) -> Vec<usize> {
    let n = g.n();
    let pv = dense_pv(g);
    let t = (1.0 / alpha - 1e-9).ceil() as usize;
    let mut pi = DMatrix::<f64>::zeros(n, n);
    let mut power = DMatrix::<f64>::identity(n, n);
    for l in 0..=t {
        pi += &power * (alpha * (1.0 - alpha).powi(l as i32));
        power = &power * &pv;
    }
    let mut pool: Vec<usize> = (0..n).collect();
    pool.sort_by_key(|&v| (std::cmp::Reverse(g.in_degree()[v]), v));
    pool.truncate((5 * k).min(n));
    // Scores within a relative 1e-12 of each other are ties, which go to
    // the smaller node id or cluster index.
    let better = |a: f64, b: f64| a > b + 1e-12 * a.abs().max(b.abs());
    pool.sort_unstable();
    let mass = |c: usize| pi.column(c).sum();
    let mut centers = Vec::new();
    for _ in 0..k {
        let mut pick = 0;
        for i in 1..pool.len() {
            if better(mass(pool[i]), mass(pool[pick])) {
                pick = i;
            }
        }
        centers.push(pool.remove(pick));
    }
    (0..n)
        .map(|v| {
            let mut best = 0;
            for (i, &c) in centers.iter().enumerate() {
                if better(pi[(v, c)], pi[(v, centers[best])]) {
                    best = i;
                }
            }
            best
        })
        .collect()
}

fn two_stars() -> AttributedGraph {
    let mut edges = vec![(0, 5), (5, 0)];
    for hub in [0, 5] {
        for leaf in hub + 1..hub + 5 {
            edges.push((hub, leaf));
            edges.push((leaf, hub));
        }
    }
    AttributedGraph::from_edges(10, edges).unwrap()
}

#[test]
fn greedy_seeding_splits_two_stars() {
    let g = two_stars();
    let op = WalkOperator::new(&g, 0.2, 0.35).unwrap();
    let got = init_nci(&op, 2).unwrap();
    assert_eq!(got.assignment(), reference_init(&g, 2, 0.2).as_slice());
    assert!(same_partition(got.assignment(), &[0, 0, 0, 0, 0, 1, 1, 1, 1, 1]));
}

#[test]
fn greedy_seeding_single_cluster() {
    let edges: Vec<_> = (1..6).map(|leaf| (leaf, 0)).collect();
    let g = AttributedGraph::from_edges(6, edges).unwrap();
    let op = WalkOperator::new(&g, 0.2, 0.35).unwrap();
    assert_eq!(init_nci(&op, 1).unwrap(), Nci::single(6));
}

#[test]
fn greedy_seeding_on_complete_digraph_gives_singletons() {
    let n = 7;
    let edges: Vec<_> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let g = AttributedGraph::from_edges(n, edges).unwrap();
    let op = WalkOperator::new(&g, 0.2, 0.35).unwrap();
    let got = init_nci(&op, n).unwrap();
    assert_eq!(got.assignment(), reference_init(&g, n, 0.2).as_slice());
    assert_eq!(got.non_empty_clusters(), n);
}

#[test]
fn greedy_seeding_matches_dense_reference() {
    let mut rng = StdRng::seed_from_u64(19);
    for _ in 0..40 {
        let n = rng.random_range(3..40);
        let k = rng.random_range(1..=n.min(6));
        let g = random_graph(&mut rng, n);
        let alpha = rng.random_range(0.1..0.6);
        let op = WalkOperator::new(&g, alpha, 0.35).unwrap();
        assert_eq!(init_nci(&op, k).unwrap().assignment(), reference_init(&g, k, alpha).as_slice());
    }
}

#[test]
fn planted_cliques_are_recovered() {
    let (g, truth) = synth::planted_cliques(&[10, 10]).unwrap();
    let report = acmin(&g, &params(2, 0)).unwrap();
    assert!(same_partition(report.best_nci.assignment(), &truth));

    let op = WalkOperator::new(&g, 0.2, 0.35).unwrap();
    let mut rng = StdRng::seed_from_u64(1);
    let mut labels: Vec<usize> = (0..20).map(|i| i % 2).collect();
    for _ in 0..500 {
        labels.shuffle(&mut rng);
        let random = Nci::new(labels.clone(), 2).unwrap();
        assert!(report.best_aamc < approx_aamc(&op, &random).unwrap());
    }
}

#[test]
fn planted_cliques_from_random_start() {
    let (g, truth) = synth::planted_cliques(&[8, 8, 8]).unwrap();
    for seed in 0..5 {
        let p = AcminParams { init: InitStrategy::Random, ..params(3, seed) };
        let report = acmin(&g, &p).unwrap();
        assert!(same_partition(report.best_nci.assignment(), &truth), "seed {seed}");
    }
}

#[test]
fn spectral_baseline_recovers_planted_cliques() {
    let (g, truth) = synth::planted_cliques(&[10, 10]).unwrap();
    for seed in 0..5 {
        let res = usc(&g, &params(2, seed)).unwrap();
        assert!(same_partition(res.nci.assignment(), &truth));
    }
    assert_eq!(usc(&g, &params(1, 0)).unwrap().nci, Nci::single(20));
}

#[test]
fn single_cluster_run() {
    let mut rng = StdRng::seed_from_u64(2);
    let g = connected_graph(&mut rng, 30);
    let report = acmin(&g, &params(1, 0)).unwrap();
    assert_eq!(report.best_nci, Nci::single(30));
    assert!((report.best_aamc - 2.0 * 0.8f64.powi(6)).abs() < 1e-12);
}

#[test]
fn report_trace_invariants() {
    let mut rng = StdRng::seed_from_u64(6);
    for _ in 0..10 {
        let n = rng.random_range(10..80);
        let k = rng.random_range(2..6);
        let g = random_graph(&mut rng, n);
        let p = AcminParams { max_iterations: 30, ..params(k, rng.random()) };
        let report = acmin(&g, &p).unwrap();
        assert!(report.aamc_trace.len() <= p.max_iterations + 1);
        let best = report.running_best();
        assert_eq!(report.best_aamc, *best.last().unwrap());
        assert_eq!(report.best_aamc, report.aamc_trace[report.best_iteration]);
        let complete: Vec<f64> = (0..report.aamc_trace.len())
            .filter(|i| !report.incomplete_iterations.contains(i))
            .map(|i| report.aamc_trace[i])
            .collect();
        if let Some(min) = complete.iter().copied().reduce(f64::min) {
            assert_eq!(report.best_aamc, min);
            assert_eq!(report.best_nci.non_empty_clusters(), k);
        } else {
            assert!(best.windows(2).all(|w| w[1] <= w[0]));
        }
        let op = WalkOperator::new(&g, p.alpha, p.beta).unwrap();
        assert!((approx_aamc(&op, &report.best_nci).unwrap() - report.best_aamc).abs() < 1e-12);
    }
}

#[test]
fn runs_are_reproducible() {
    let mut rng = StdRng::seed_from_u64(10);
    let g = random_graph(&mut rng, 60);
    for init in [InitStrategy::Greedy, InitStrategy::Random] {
        let p = AcminParams { init, ..params(4, 77) };
        let a = serde_json::to_string(&acmin(&g, &p).unwrap()).unwrap();
        let b = serde_json::to_string(&acmin(&g, &p).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn too_many_clusters_is_rejected() {
    let g = AttributedGraph::from_edges(3, [(0, 1)]).unwrap();
    assert!(acmin(&g, &params(4, 0)).is_err());
    assert!(acmin(&g, &params(0, 0)).is_err());
}

#[test]
fn enumerated_optimum_bounds_the_heuristic() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..20 {
        let n = rng.random_range(4..=10);
        let k = rng.random_range(2..=3);
        let g = random_graph(&mut rng, n);
        let op = WalkOperator::new(&g, 0.2, 0.35).unwrap();
        let s = materialize_s(&op, 5).unwrap();
        let best = brute_force_min_aamc(&s, k).unwrap();
        let values = partition_aamc_values(&s, k).unwrap();
        assert_eq!(values.len() as u64, best.partitions);
        assert_eq!(best.phi, values.iter().copied().fold(f64::INFINITY, f64::min));
        assert!((direct_aamc(&to_dmatrix(&s.s), &best.nci) - best.phi).abs() < 1e-12);
        let report = acmin(&g, &params(k, 0)).unwrap();
        assert!(exact_aamc(&s, &report.best_nci).unwrap() >= best.phi - 1e-12);
    }
}

#[test]
fn enumeration_splits_separate_components() {
    // Two bidirected triangles; each holds attributes the other lacks, so
    // neither branch of the walk crosses between them.
    let mut edges = Vec::new();
    for base in [0, 3] {
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    edges.push((base + i, base + j));
                }
            }
        }
    }
    let attrs: Vec<_> = (0..6).map(|v| (v, v / 3, 1.0)).collect();
    let g = AttributedGraph::new(6, 2, edges, attrs).unwrap();
    let op = WalkOperator::new(&g, 0.2, 0.35).unwrap();
    let s = materialize_s(&op, 5).unwrap();
    let best = brute_force_min_aamc(&s, 2).unwrap();
    assert!(same_partition(best.nci.assignment(), &[0, 0, 0, 1, 1, 1]));
    assert!(best.phi.abs() < 1e-15);

    let singles = brute_force_min_aamc(&s, 6).unwrap();
    let dense = to_dmatrix(&s.s);
    let off_diagonal: f64 = (0..6).flat_map(|j| (0..6).map(move |l| (j, l))).filter(|(j, l)| j != l).map(|(j, l)| dense[(j, l)]).sum();
    assert!((singles.phi - off_diagonal / 6.0).abs() < 1e-12);
}
