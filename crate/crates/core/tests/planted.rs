use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sparse_cce::constructions::{build_gz_game, build_lowprec_game, GzParams, LowPrecParams};
use sparse_cce::game::{MixedStrategy, SparseMixture};
use sparse_cce::graph::{four_node_example, NodeSet};
use sparse_cce::planted::*;
use sparse_cce::rational::{q, Q};

fn set(v: &[usize]) -> NodeSet {
    v.iter().copied().collect()
}

#[test]
fn edge_frequency_is_one_half() {
    let g = gen_planted_graph(400, 1, 2024).unwrap().graph;
    let pairs = 400.0 * 399.0 / 2.0;
    let f = g.edge_count() as f64 / pairs;
    assert!((0.48..=0.52).contains(&f), "{f}");
}

#[test]
fn planting_is_deterministic_and_seeded() {
    let a = gen_planted_graph(50, 10, 1).unwrap();
    assert_eq!(a, gen_planted_graph(50, 10, 1).unwrap());
    assert_ne!(a.graph, gen_planted_graph(50, 10, 2).unwrap().graph);
    assert_eq!(a.planted, (1..=10).collect());
    assert!(a.graph.is_clique(&a.planted).unwrap());
}

#[test]
fn permutation_preserves_structure() {
    let inst = gen_planted_graph(30, 8, 4).unwrap();
    let (g, planted) = permute_instance(&inst, 9).unwrap();
    assert_eq!(g.edge_count(), inst.graph.edge_count());
    assert!(g.is_clique(&planted).unwrap());
    assert_eq!(planted.len(), 8);
}

#[test]
fn greedy_cliques_near_log_n() {
    let n = 200;
    let sizes: Vec<usize> = (0..20)
        .map(|s| {
            let g = gen_planted_graph(n, 1, 300 + s).unwrap().graph;
            let c = greedy_clique(&g, s);
            assert!(g.is_clique(&c).unwrap());
            c.len()
        })
        .collect();
    let mean = sizes.iter().sum::<usize>() as f64 / sizes.len() as f64;
    let log2n = (n as f64).log2();
    assert!(mean >= log2n - 2.0 && mean <= 2.0 * log2n, "mean {mean}");
}

#[test]
fn game_encodes_graph() {
    let g = four_node_example();
    let gz = build_gz_game(&g, &GzParams::for_reduction(2, 1).unwrap());
    assert_eq!(graph_from_game(&gz).unwrap(), g);
    let lp = build_lowprec_game(&g, &LowPrecParams::new(10, 12, 3).unwrap()).unwrap();
    assert_eq!(graph_from_game(&lp).unwrap(), g);
}

#[test]
fn dense_pair_from_planted_profile() {
    let inst = gen_planted_graph(40, 20, 6).unwrap();
    let game = build_lowprec_game(&inst.graph, &LowPrecParams::new(10, 320, 1).unwrap()).unwrap();
    let u = MixedStrategy::uniform_on(320, &(0..20).collect::<Vec<_>>()).unwrap();
    let mix = SparseMixture::product(u.clone(), u).unwrap();
    let pair = extract_dense_pair(&game, &mix, 20, 10).unwrap();
    assert_eq!(pair.rows, inst.planted);
    assert_eq!(pair.cols, inst.planted);
    assert_eq!(dens(&inst.graph, &pair.rows, &pair.cols).unwrap(), Q::one());
    let rec = clique_from_dense_pair(&inst.graph, &pair.rows, &pair.cols, 20).unwrap();
    assert!(rec.reached);
}

#[test]
fn dense_pair_errors() {
    let g = four_node_example();
    let game = build_lowprec_game(&g, &LowPrecParams::new(10, 12, 3).unwrap()).unwrap();
    let u = MixedStrategy::uniform_on(12, &[0, 1, 2]).unwrap();
    let mix = SparseMixture::product(u.clone(), u.clone()).unwrap();
    assert!(extract_dense_pair(&game, &mix, 3, 4).is_err());
    assert!(extract_dense_pair(&game, &mix, 0, 10).is_err());
    assert!(matches!(
        extract_dense_pair(&game, &mix, 4, 10),
        Err(sparse_cce::Error::NotFound(_))
    ));
    let off = SparseMixture::product(MixedStrategy::pure(12, 8), u).unwrap();
    assert!(extract_dense_pair(&game, &off, 1, 10).is_err());
}

#[test]
fn noisy_pairs_recover_most_of_the_clique() {
    let (n, k) = (120, 30);
    let mut good = 0;
    for s in 0..20u64 {
        let inst = gen_planted_graph(n, k, 900 + s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut outside: Vec<usize> = (k + 1..=n).collect();
        outside.shuffle(&mut rng);
        let mut rows = inst.planted.clone();
        let mut cols = inst.planted.clone();
        rows.extend(&outside[..4]);
        cols.extend(&outside[4..8]);
        // drop a couple of clique nodes from one side
        rows.remove(&1);
        cols.remove(&2);
        assert!(dens(&inst.graph, &rows, &cols).unwrap() >= q(3, 5));
        let rec = clique_from_dense_pair(&inst.graph, &rows, &cols, k * 9 / 10).unwrap();
        assert!(inst.graph.is_clique(&rec.clique).unwrap());
        let overlap = rec.clique.intersection(&inst.planted).count();
        if overlap * 10 >= 9 * k {
            good += 1;
        }
    }
    assert!(good >= 18, "{good} of 20");
}

#[test]
fn density_on_four_nodes() {
    let g = four_node_example();
    assert_eq!(dens(&g, &set(&[1, 3]), &set(&[2, 4])).unwrap(), Q::one());
    assert_eq!(dens(&g, &set(&[2]), &set(&[4])).unwrap(), Q::zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn peeling_yields_a_clique(n in 1usize..=14, k in 1usize..=6, seed in any::<u64>(), picks in proptest::collection::vec(1usize..=14, 1..10)) {
        prop_assume!(k <= n);
        let g = gen_planted_graph(n, k, seed).unwrap().graph;
        let s: NodeSet = picks.iter().map(|&v| (v - 1) % n + 1).collect();
        let t: NodeSet = picks.iter().rev().take(3).map(|&v| (v * 7) % n + 1).collect();
        let rec = clique_from_dense_pair(&g, &s, &t, 1).unwrap();
        prop_assert!(g.is_clique(&rec.clique).unwrap());
        prop_assert!(!rec.clique.is_empty());
        prop_assert!(rec.clique.is_subset(&s.union(&t).copied().collect()));
    }

    #[test]
    fn density_is_symmetric(n in 2usize..=12, seed in any::<u64>(), a in proptest::collection::btree_set(1usize..=12, 1..5)) {
        let g = gen_planted_graph(n, 1, seed).unwrap().graph;
        let s: NodeSet = a.iter().map(|&v| (v - 1) % n + 1).collect();
        let t: NodeSet = s.iter().map(|&v| v % n + 1).collect();
        let d = dens(&g, &s, &t).unwrap();
        prop_assert_eq!(d.clone(), dens(&g, &t, &s).unwrap());
        prop_assert!(d >= Q::zero() && d <= Q::one());
    }
}
