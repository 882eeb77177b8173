use acmin::graph::AttributedGraph;
use acmin::metrics::{clustering_accuracy, modularity, nmi, LabelVector};
use acmin::{synth, Nci};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn relabel(labels: &[usize], perm: &[usize]) -> Vec<usize> {
    labels.iter().map(|&l| perm[l]).collect()
}

fn labels_strategy() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, usize, usize)> {
    (1usize..6, 1usize..6, 1usize..60).prop_flat_map(|(k, l, n)| {
        (
            proptest::collection::vec(0..k, n),
            proptest::collection::vec(0..l, n),
            Just(k),
            Just(l),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn scores_ignore_label_names((pred, truth, k, l) in labels_strategy(), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut pk: Vec<usize> = (0..k).collect();
        let mut pl: Vec<usize> = (0..l).collect();
        pk.shuffle(&mut rng);
        pl.shuffle(&mut rng);
        let y = Nci::new(pred.clone(), k).unwrap();
        let y2 = Nci::new(relabel(&pred, &pk), k).unwrap();
        let t = LabelVector::new(&truth);
        let t2 = LabelVector::new(&relabel(&truth, &pl));

        let ca = clustering_accuracy(&y, &t).unwrap();
        prop_assert!((0.0..=1.0).contains(&ca));
        prop_assert!((clustering_accuracy(&y2, &t2).unwrap() - ca).abs() < 1e-12);

        let v = nmi(&y, &t).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
        prop_assert!((nmi(&y2, &t2).unwrap() - v).abs() < 1e-12);
    }

    #[test]
    fn nmi_is_symmetric((pred, truth, _k, l) in labels_strategy()) {
        let a = Nci::new(pred.clone(), pred.iter().max().unwrap() + 1).unwrap();
        let b = Nci::new(truth.clone(), l).unwrap();
        let v1 = nmi(&a, &LabelVector::new(&truth)).unwrap();
        let v2 = nmi(&b, &LabelVector::new(&pred)).unwrap();
        prop_assert!((v1 - v2).abs() < 1e-12);
    }

    #[test]
    fn identical_clusterings_score_one((truth, _t, k, _l) in labels_strategy()) {
        let y = Nci::new(truth.clone(), k).unwrap();
        let t = LabelVector::new(&truth);
        prop_assert_eq!(clustering_accuracy(&y, &t).unwrap(), 1.0);
        prop_assert_eq!(nmi(&y, &t).unwrap(), 1.0);
    }

    #[test]
    fn one_cluster_scores_largest_class((_p, truth, _k, l) in labels_strategy()) {
        let t = LabelVector::new(&truth);
        let y = Nci::single(truth.len());
        let largest = (0..l).map(|c| truth.iter().filter(|&&x| x == c).count()).max().unwrap();
        let ca = clustering_accuracy(&y, &t).unwrap();
        prop_assert!(ca >= largest as f64 / truth.len() as f64 - 1e-12);
    }
}

/// Brute force over all matchings for small label sets.
fn accuracy_by_permutations(pred: &[usize], truth: &[usize], size: usize) -> f64 {
    fn permute(rest: &mut Vec<usize>, fixed: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if rest.is_empty() {
            f(fixed);
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            fixed.push(x);
            permute(rest, fixed, f);
            fixed.pop();
            rest.insert(i, x);
        }
    }
    let mut best = 0;
    permute(&mut (0..size).collect(), &mut Vec::new(), &mut |perm| {
        let hits = pred.iter().zip(truth).filter(|(p, t)| perm[**p] == **t).count();
        best = best.max(hits);
    });
    best as f64 / pred.len() as f64
}

#[test]
fn accuracy_matches_exhaustive_matching() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..200 {
        let n = rng.random_range(1..30);
        let k = rng.random_range(1..6);
        let pred: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let truth: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let lv = LabelVector::new(&truth);
        let size = k.max(lv.classes());
        let compact = lv.labels().to_vec();
        let want = accuracy_by_permutations(&pred, &compact, size);
        let got = clustering_accuracy(&Nci::new(pred, k).unwrap(), &lv).unwrap();
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn modularity_of_split_cliques() {
    let (g, truth) = synth::planted_cliques(&[6, 6]).unwrap();
    // Drop the bridge so the two cliques are disconnected.
    let edges: Vec<_> = g.edges().filter(|&(s, t)| truth[s] == truth[t]).collect();
    let g = AttributedGraph::from_edges(12, edges).unwrap();
    let split = Nci::new(truth.clone(), 2).unwrap();
    assert!((modularity(&g, &split).unwrap() - 0.5).abs() < 1e-12);
    assert!(modularity(&g, &Nci::single(12)).unwrap().abs() < 1e-12);

    let mut rng = StdRng::seed_from_u64(4);
    let mut labels = truth.clone();
    for _ in 0..50 {
        labels.shuffle(&mut rng);
        if labels == truth || labels.iter().zip(&truth).all(|(a, b)| a != b) {
            continue;
        }
        assert!(modularity(&g, &Nci::new(labels.clone(), 2).unwrap()).unwrap() < 0.5);
    }
}

#[test]
fn modularity_of_random_partition_is_near_zero() {
    let mut total = 0.0;
    for seed in 0..20 {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = synth::erdos_renyi(2000, 0.005, 0, 0.0, &mut rng).unwrap();
        let mut labels: Vec<usize> = (0..2000).map(|i| i % 4).collect();
        labels.shuffle(&mut rng);
        total += modularity(&g, &Nci::new(labels, 4).unwrap()).unwrap();
    }
    assert!((total / 20.0).abs() < 0.05);
}

#[test]
fn modularity_needs_edges() {
    let g = AttributedGraph::from_edges(3, []).unwrap();
    assert!(modularity(&g, &Nci::single(3)).is_err());
}
