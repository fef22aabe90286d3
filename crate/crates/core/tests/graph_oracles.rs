mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use proptest::prelude::*;
use rand::Rng;
use topoaware::graph::*;

#[test]
fn builder_matches_set_of_sets() {
    let mut r = rng(1);
    for _ in 0..50 {
        let names = ["a", "b", "c", "d", "e"];
        let pairs: Vec<(&str, &str)> = (0..10)
            .map(|_| (names[r.random_range(0..5)], names[r.random_range(0..5)]))
            .collect();
        let g = build_graph(&pairs).unwrap();
        let mut reference: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for &(a, b) in &pairs {
            reference.entry(a).or_default();
            reference.entry(b).or_default();
            if a != b {
                reference.get_mut(a).unwrap().insert(b);
                reference.get_mut(b).unwrap().insert(a);
            }
        }
        assert_eq!(g.n(), reference.len());
        for (tok, nbrs) in &reference {
            let id = g.tokens().id(tok).unwrap();
            let got: BTreeSet<&str> = g.neighbors(id).iter().map(|&v| g.token(v)).collect();
            assert_eq!(&got, nbrs);
        }
        let m: usize = reference.values().map(BTreeSet::len).sum::<usize>() / 2;
        assert_eq!(g.m(), m);
    }
}

#[test]
fn adjacency_is_symmetric_sorted_simple() {
    let mut r = rng(2);
    for _ in 0..30 {
        let n = r.random_range(1..40);
        let mut edges = random_edges(&mut r, n, 0.2);
        edges.extend(edges.clone());
        edges.push((0, 0));
        let g = Graph::from_edges(n, &edges).unwrap();
        for u in 0..n {
            let row = g.neighbors(u);
            assert!(row.windows(2).all(|w| w[0] < w[1]));
            assert!(!row.contains(&u));
            for &v in row {
                assert!(g.has_edge(v, u));
            }
        }
    }
}

#[test]
fn bfs_matches_floyd_warshall() {
    let mut r = rng(3);
    for _ in 0..40 {
        let n = 30;
        let (g, edges) = random_graph(&mut r, n, 0.08);
        let apsp = floyd_warshall(&adjacency_matrix(n, &edges));
        for s in 0..n {
            let got = bfs_distances(&g, s).unwrap();
            let want: Vec<_> = apsp[s].iter().map(|&d| hop(d)).collect();
            assert_eq!(got, want);
        }
    }
}

#[test]
fn multi_source_is_min_of_single_sources() {
    let mut r = rng(4);
    for _ in 0..40 {
        let n = 40;
        let (g, _) = random_graph(&mut r, n, 0.05);
        let sources = random_subset(&mut r, n, 5);
        let got = multi_source_bfs(&g, &sources).unwrap();
        for v in 0..n {
            let want = sources
                .iter()
                .map(|&s| bfs_distances(&g, s).unwrap()[v])
                .min()
                .unwrap();
            assert_eq!(got[v], want);
        }
    }
}

#[test]
fn incremental_relaxation_matches_recomputation() {
    let mut r = rng(5);
    for _ in 0..40 {
        let n = 35;
        let (g, _) = random_graph(&mut r, n, 0.06);
        let order = random_subset(&mut r, n, 8);
        let mut dist = bfs_distances(&g, order[0]).unwrap();
        for i in 1..order.len() {
            relax_from(&g, order[i], &mut dist).unwrap();
            assert_eq!(dist, multi_source_bfs(&g, &order[..=i]).unwrap());
        }
    }
}

#[test]
fn degrees_match_edge_recount() {
    let mut r = rng(6);
    for _ in 0..20 {
        let n = 25;
        let (g, edges) = random_graph(&mut r, n, 0.2);
        let mut count = vec![0; n];
        for (u, v) in edges {
            count[u] += 1;
            count[v] += 1;
        }
        assert_eq!(degrees(&g), count);
        assert_eq!(degrees(&g).iter().sum::<usize>(), 2 * g.m());
    }
}

#[test]
fn pagerank_star_matches_dense_oracle() {
    let edges = [(0, 1), (0, 2), (0, 3)];
    let g = Graph::from_edges(4, &edges).unwrap();
    let config = PageRankConfig {
        tol: 1e-12,
        ..Default::default()
    };
    let pr = pagerank(&g, &config).unwrap();
    let want = dense_pagerank(&adjacency_matrix(4, &edges), 0.85);
    for (a, b) in pr.scores.iter().zip(&want) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn pagerank_matches_dense_oracle_with_isolated_vertices() {
    let mut r = rng(7);
    for _ in 0..20 {
        let n = r.random_range(2..30);
        let (g, edges) = random_graph(&mut r, n, 0.1);
        let pr = pagerank(&g, &PageRankConfig::default()).unwrap();
        assert!(pr.converged);
        let want = dense_pagerank(&adjacency_matrix(n, &edges), 0.85);
        for (a, b) in pr.scores.iter().zip(&want) {
            assert!((a - b).abs() < 1e-8);
        }
        assert!((pr.scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn closeness_matches_all_pairs_definition() {
    let mut r = rng(8);
    for _ in 0..20 {
        let n = 20;
        let g = random_connected(&mut r, n, 0.1);
        let apsp = floyd_warshall(&graph_matrix(&g));
        let got = closeness_centrality(&g);
        for v in 0..n {
            let finite: Vec<u32> = (0..n)
                .filter(|&u| u != v && apsp[v][u] != INF)
                .map(|u| apsp[v][u])
                .collect();
            let reach = finite.len() as f64;
            let sum: u32 = finite.iter().sum();
            let want = (reach / sum as f64) * (reach / (n - 1) as f64);
            assert!((got[v] - want).abs() < 1e-15);
        }
    }
}

#[test]
fn components_agree_with_reachability() {
    let mut r = rng(9);
    for _ in 0..30 {
        let n = 30;
        let (g, edges) = random_graph(&mut r, n, 0.04);
        let apsp = floyd_warshall(&adjacency_matrix(n, &edges));
        let labels = connected_components(&g);
        let c = labels.iter().max().unwrap() + 1;
        assert_eq!(labels.iter().collect::<BTreeSet<_>>().len(), c);
        for u in 0..n {
            for v in 0..n {
                assert_eq!(labels[u] == labels[v], apsp[u][v] != INF);
            }
        }
    }
}

#[test]
fn bfs_distance_is_a_metric_within_components() {
    let mut r = rng(10);
    for _ in 0..10 {
        let n = 30;
        let g = random_connected(&mut r, n, 0.05);
        let d: Vec<Vec<u32>> = (0..n)
            .map(|s| {
                bfs_distances(&g, s)
                    .unwrap()
                    .iter()
                    .map(|d| d.finite().unwrap())
                    .collect()
            })
            .collect();
        for x in 0..n {
            assert_eq!(d[x][x], 0);
            for y in 0..n {
                assert_eq!(d[x][y], d[y][x]);
                assert_eq!(d[x][y] > 0, x != y);
                for z in 0..n {
                    assert!(d[x][y] + d[y][z] >= d[x][z]);
                }
            }
        }
    }
}

fn permuted(n: usize, edges: &[(usize, usize)], perm: &[usize]) -> Graph {
    let mapped: Vec<_> = edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    Graph::from_edges(n, &mapped).unwrap()
}

proptest! {
    #[test]
    fn pagerank_invariant_under_relabeling(seed in any::<u64>(), n in 2usize..25) {
        let mut r = rng(seed);
        let (g, edges) = random_graph(&mut r, n, 0.15);
        let perm = random_subset(&mut r, n, n);
        let h = permuted(n, &edges, &perm);
        let a = pagerank(&g, &PageRankConfig::default()).unwrap().scores;
        let b = pagerank(&h, &PageRankConfig::default()).unwrap().scores;
        for v in 0..n {
            prop_assert!((a[v] - b[perm[v]]).abs() < 1e-8);
        }
        prop_assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn closeness_parallel_is_deterministic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (g, _) = random_graph(&mut r, 30, 0.1);
        prop_assert_eq!(closeness_centrality(&g), closeness_centrality(&g));
    }
}
