//! Reference implementations used as test oracles. Nothing here calls the
//! library's traversal code.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topoaware::Graph;

pub const INF: u32 = u32::MAX;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_edges(rng: &mut impl Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> (Graph, Vec<(usize, usize)>) {
    let edges = random_edges(rng, n, p);
    (Graph::from_edges(n, &edges).unwrap(), edges)
}

pub fn random_connected(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = random_edges(rng, n, p);
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn adjacency_matrix(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for &(u, v) in edges {
        if u != v {
            a[u][v] = true;
            a[v][u] = true;
        }
    }
    a
}

pub fn graph_matrix(g: &Graph) -> Vec<Vec<bool>> {
    let edges: Vec<_> = g.edges().collect();
    adjacency_matrix(g.n(), &edges)
}

/// All-pairs hop distances by Floyd–Warshall; `INF` for unreachable.
pub fn floyd_warshall(adj: &[Vec<bool>]) -> Vec<Vec<u32>> {
    let n = adj.len();
    let mut d = vec![vec![INF; n]; n];
    for u in 0..n {
        d[u][u] = 0;
        for v in 0..n {
            if adj[u][v] {
                d[u][v] = 1;
            }
        }
    }
    for w in 0..n {
        for u in 0..n {
            if d[u][w] == INF {
                continue;
            }
            for v in 0..n {
                if d[w][v] != INF && d[u][w] + d[w][v] < d[u][v] {
                    d[u][v] = d[u][w] + d[w][v];
                }
            }
        }
    }
    d
}

pub fn hop(d: u32) -> topoaware::HopDistance {
    if d == INF {
        topoaware::HopDistance::Unreachable
    } else {
        topoaware::HopDistance::Finite(d)
    }
}

/// `min_{u in set} d(v, u)`.
pub fn point_to_set(apsp: &[Vec<u32>], v: usize, set: &[usize]) -> u32 {
    set.iter().map(|&u| apsp[v][u]).min().unwrap()
}

pub fn random_subset(rng: &mut impl Rng, n: usize, size: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.random_range(i..n);
        all.swap(i, j);
    }
    all.truncate(size);
    all
}

/// Dense power iteration `x ← d·Mx + (1-d)/n` on the column-stochastic
/// transition of the undirected graph, dangling columns uniform.
pub fn dense_pagerank(adj: &[Vec<bool>], damping: f64) -> Vec<f64> {
    let n = adj.len();
    let mut m = vec![vec![0.0; n]; n];
    for u in 0..n {
        let deg = adj[u].iter().filter(|&&b| b).count();
        for v in 0..n {
            m[v][u] = if deg == 0 {
                1.0 / n as f64
            } else if adj[u][v] {
                1.0 / deg as f64
            } else {
                0.0
            };
        }
    }
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..10_000 {
        let next: Vec<f64> = (0..n)
            .map(|v| {
                (1.0 - damping) / n as f64
                    + damping * (0..n).map(|u| m[v][u] * x[u]).sum::<f64>()
            })
            .collect();
        let delta: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if delta < 1e-15 {
            break;
        }
    }
    x
}
