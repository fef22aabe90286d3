//! Immutable undirected graph in compressed adjacency form, plus the
//! traversal and scoring queries every other module builds on.
//!
//! Vertices are dense ids `0..n`. External tokens (whatever the edge list
//! used) are kept in a [`TokenTable`] so results can be reported in the
//! caller's vocabulary.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type VertexId = usize;

/// Unweighted shortest-path length, or `Unreachable` across components.
///
/// The derived ordering puts `Unreachable` above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HopDistance {
    Finite(u32),
    Unreachable,
}

impl HopDistance {
    pub const ZERO: HopDistance = HopDistance::Finite(0);

    pub fn finite(self) -> Option<u32> {
        match self {
            HopDistance::Finite(d) => Some(d),
            HopDistance::Unreachable => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, HopDistance::Finite(_))
    }

    /// One more hop; unreachable stays unreachable.
    pub fn succ(self) -> HopDistance {
        match self {
            HopDistance::Finite(d) => HopDistance::Finite(d + 1),
            HopDistance::Unreachable => HopDistance::Unreachable,
        }
    }
}

impl fmt::Display for HopDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HopDistance::Finite(d) => write!(f, "{d}"),
            HopDistance::Unreachable => f.write_str("unreachable"),
        }
    }
}

impl Serialize for HopDistance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HopDistance::Finite(d) => s.serialize_u32(*d),
            HopDistance::Unreachable => s.serialize_str("unreachable"),
        }
    }
}

impl<'de> Deserialize<'de> for HopDistance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u32),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(HopDistance::Finite(v)),
            Repr::Text(t) if t == "unreachable" => Ok(HopDistance::Unreachable),
            Repr::Text(t) => Err(serde::de::Error::custom(format!(
                "expected hop count or \"unreachable\", got {t:?}"
            ))),
        }
    }
}

/// Bijection between external tokens and dense ids, in first-seen order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenTable {
    tokens: Vec<String>,
    index: HashMap<String, VertexId>,
}

impl TokenTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `token`, assigning the next free id if unseen.
    pub fn intern(&mut self, token: &str) -> VertexId {
        if let Some(&id) = self.index.get(token) {
            return id;
        }
        let id = self.tokens.len();
        self.tokens.push(token.to_owned());
        self.index.insert(token.to_owned(), id);
        id
    }

    pub fn id(&self, token: &str) -> Option<VertexId> {
        self.index.get(token).copied()
    }

    pub fn token(&self, id: VertexId) -> &str {
        &self.tokens[id]
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }

    /// Tokens `"0"`, `"1"`, ... for graphs generated in-process.
    pub fn numeric(n: usize) -> Self {
        let mut t = TokenTable::new();
        for i in 0..n {
            t.intern(&i.to_string());
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
    tokens: TokenTable,
}

impl Graph {
    /// Builds a graph over dense ids `0..n`. Self-loops and repeated edges
    /// are dropped. Tokens are the decimal ids.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
        }
        Ok(Self::assemble(TokenTable::numeric(n), edges))
    }

    fn assemble(tokens: TokenTable, edges: &[(VertexId, VertexId)]) -> Self {
        let n = tokens.len();
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            if u != v {
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0; offsets[n]];
        for &(u, v) in edges {
            if u != v {
                neighbors[fill[u]] = v;
                fill[u] += 1;
                neighbors[fill[v]] = u;
                fill[v] += 1;
            }
        }
        // sort and dedup each row, then compact
        let mut compact = Vec::with_capacity(neighbors.len());
        let mut new_offsets = Vec::with_capacity(n + 1);
        new_offsets.push(0);
        for u in 0..n {
            let row = &mut neighbors[offsets[u]..offsets[u + 1]];
            row.sort_unstable();
            let start = compact.len();
            for &v in row.iter() {
                if compact.len() == start || *compact.last().unwrap() != v {
                    compact.push(v);
                }
            }
            new_offsets.push(compact.len());
        }
        compact.shrink_to_fit();
        Graph {
            offsets: new_offsets,
            neighbors: compact,
            tokens,
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Undirected edge count.
    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn tokens(&self) -> &TokenTable {
        &self.tokens
    }

    pub fn token(&self, v: VertexId) -> &str {
        self.tokens.token(v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in id order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    /// Validates a vertex set: non-empty and in range.
    pub(crate) fn check_set(&self, set: &[VertexId], what: &str) -> Result<()> {
        if set.is_empty() {
            return Err(Error::arg(format!("{what} must be non-empty")));
        }
        set.iter().try_for_each(|&v| self.check_vertex(v))
    }
}

/// Builds a graph from token pairs. Ids follow first-seen order; tokens that
/// only appear in self-loops still receive an id.
pub fn build_graph<S: AsRef<str>>(edge_tokens: &[(S, S)]) -> Result<Graph> {
    if edge_tokens.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut tokens = TokenTable::new();
    let edges: Vec<_> = edge_tokens
        .iter()
        .map(|(a, b)| (tokens.intern(a.as_ref()), tokens.intern(b.as_ref())))
        .collect();
    Ok(Graph::assemble(tokens, &edges))
}

/// Hop distances from `source` to every vertex.
pub fn bfs_distances(g: &Graph, source: VertexId) -> Result<Vec<HopDistance>> {
    multi_source_bfs(g, &[source])
}

/// `result[v]` is the minimum hop distance from `v` to any source.
pub fn multi_source_bfs(g: &Graph, sources: &[VertexId]) -> Result<Vec<HopDistance>> {
    g.check_set(sources, "source set")?;
    let mut dist = vec![HopDistance::Unreachable; g.n()];
    let mut queue = Vec::with_capacity(g.n());
    for &s in sources {
        if dist[s] != HopDistance::ZERO {
            dist[s] = HopDistance::ZERO;
            queue.push(s);
        }
    }
    sweep(g, &mut dist, queue);
    Ok(dist)
}

/// Lowers `dist` to account for a new source, visiting only the vertices
/// whose distance actually improves.
///
/// `dist` must already be a valid multi-source distance array (or all
/// `Unreachable`); afterwards it is the distance array for the old sources
/// plus `source`.
pub fn relax_from(g: &Graph, source: VertexId, dist: &mut [HopDistance]) -> Result<()> {
    g.check_vertex(source)?;
    if dist.len() != g.n() {
        return Err(Error::arg("distance array length does not match graph"));
    }
    if dist[source] == HopDistance::ZERO {
        return Ok(());
    }
    dist[source] = HopDistance::ZERO;
    sweep(g, dist, vec![source]);
    Ok(())
}

fn sweep(g: &Graph, dist: &mut [HopDistance], mut queue: Vec<VertexId>) {
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let next = dist[u].succ();
        for &v in g.neighbors(u) {
            if next < dist[v] {
                dist[v] = next;
                queue.push(v);
            }
        }
    }
}

pub fn degrees(g: &Graph) -> Vec<usize> {
    (0..g.n()).map(|v| g.degree(v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankConfig {
    pub damping: f64,
    /// Stop once the L1 change between iterates drops below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            damping: 0.85,
            tol: 1e-10,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRank {
    pub scores: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Power iteration for PageRank, each undirected edge taken as two arcs.
///
/// Isolated vertices are dangling and spread their mass uniformly.
pub fn pagerank(g: &Graph, config: &PageRankConfig) -> Result<PageRank> {
    let PageRankConfig {
        damping,
        tol,
        max_iter,
    } = *config;
    if !(damping > 0.0 && damping < 1.0) {
        return Err(Error::arg(format!("damping {damping} not in (0, 1)")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::arg("tolerance must be positive"));
    }
    if max_iter == 0 {
        return Err(Error::arg("max_iter must be positive"));
    }
    let n = g.n();
    let uniform = 1.0 / n as f64;
    let inv_degree: Vec<f64> = (0..n)
        .map(|v| match g.degree(v) {
            0 => 0.0,
            d => 1.0 / d as f64,
        })
        .collect();
    let mut rank = vec![uniform; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let dangling: f64 = (0..n)
            .filter(|&v| g.degree(v) == 0)
            .map(|v| rank[v])
            .sum();
        let base = (1.0 - damping) * uniform + damping * dangling * uniform;
        for (v, slot) in next.iter_mut().enumerate() {
            let inflow: f64 = g
                .neighbors(v)
                .iter()
                .map(|&u| rank[u] * inv_degree[u])
                .sum();
            *slot = base + damping * inflow;
        }
        let delta: f64 = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if delta < tol {
            converged = true;
            break;
        }
    }
    Ok(PageRank {
        scores: rank,
        iterations,
        converged,
    })
}

/// Closeness centrality with the Wasserman–Faust component correction:
/// `(r / sum_d) * (r / (n - 1))` where `r` is the number of reachable peers.
/// Vertices with no reachable peer score 0.
pub fn closeness_centrality(g: &Graph) -> Vec<f64> {
    let n = g.n();
    (0..n)
        .into_par_iter()
        .map(|v| {
            let dist = bfs_distances(g, v).expect("vertex in range");
            let (reach, total) = dist
                .iter()
                .filter_map(|d| d.finite())
                .filter(|&d| d > 0)
                .fold((0u64, 0u64), |(r, s), d| (r + 1, s + d as u64));
            if reach == 0 {
                0.0
            } else {
                let r = reach as f64;
                (r / total as f64) * (r / (n - 1) as f64)
            }
        })
        .collect()
}

/// Component labels `0..c`, numbered in order of each component's lowest id.
pub fn connected_components(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for root in 0..n {
        if label[root] != usize::MAX {
            continue;
        }
        label[root] = next;
        stack.push(root);
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if label[v] == usize::MAX {
                    label[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    label
}

/// Orders `(score, id)` pairs by descending score, then ascending id.
pub(crate) fn by_score_desc(a: (f64, VertexId), b: (f64, VertexId)) -> Ordering {
    b.0.partial_cmp(&a.0)
        .unwrap_or(Ordering::Equal)
        .then(a.1.cmp(&b.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use HopDistance::{Finite, Unreachable};

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn unreachable_sorts_last() {
        assert!(Unreachable > Finite(u32::MAX));
        assert!(Finite(3) < Finite(4));
    }

    #[test]
    fn dedup_and_self_loops() {
        let g = build_graph(&[("a", "b"), ("b", "a"), ("a", "a")]).unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
    }

    #[test]
    fn first_seen_ids() {
        let g = build_graph(&[("a", "b"), ("b", "c")]).unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        assert_eq!(g.tokens().id("a"), Some(0));
        assert_eq!(g.tokens().id("b"), Some(1));
        assert_eq!(g.tokens().id("c"), Some(2));
    }

    #[test]
    fn self_loop_only_token_gets_id() {
        let g = build_graph(&[("a", "b"), ("z", "z")]).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn empty_input_rejected() {
        let none: [(&str, &str); 0] = [];
        assert_eq!(build_graph(&none), Err(Error::EmptyGraph));
    }

    #[test]
    fn bfs_on_path_and_components() {
        assert_eq!(
            bfs_distances(&path(4), 0).unwrap(),
            vec![Finite(0), Finite(1), Finite(2), Finite(3)]
        );
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            bfs_distances(&g, 0).unwrap(),
            vec![Finite(0), Finite(1), Unreachable, Unreachable]
        );
        assert!(matches!(
            bfs_distances(&g, 4),
            Err(Error::VertexOutOfRange { vertex: 4, n: 4 })
        ));
    }

    #[test]
    fn multi_source_examples() {
        let g = path(5);
        let all: Vec<_> = (0..5).collect();
        assert!(multi_source_bfs(&g, &all)
            .unwrap()
            .iter()
            .all(|&d| d == HopDistance::ZERO));
        let d: Vec<_> = multi_source_bfs(&g, &[0, 4])
            .unwrap()
            .iter()
            .map(|d| d.finite().unwrap())
            .collect();
        assert_eq!(d, vec![0, 1, 2, 1, 0]);
        assert!(matches!(multi_source_bfs(&g, &[]), Err(Error::Argument(_))));
    }

    #[test]
    fn relax_matches_fresh_bfs() {
        let g = path(7);
        let mut dist = multi_source_bfs(&g, &[0]).unwrap();
        relax_from(&g, 5, &mut dist).unwrap();
        assert_eq!(dist, multi_source_bfs(&g, &[0, 5]).unwrap());
    }

    #[test]
    fn star_and_isolated_degrees() {
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(degrees(&star), vec![4, 1, 1, 1, 1]);
        let empty = Graph::from_edges(3, &[]).unwrap();
        assert_eq!(degrees(&empty), vec![0, 0, 0]);
    }

    #[test]
    fn pagerank_cycle_uniform() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let pr = pagerank(&g, &PageRankConfig::default()).unwrap();
        assert!(pr.converged);
        for s in pr.scores {
            assert!((s - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn pagerank_isolated_and_flags() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let pr = pagerank(&g, &PageRankConfig::default()).unwrap();
        assert!((pr.scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let short = PageRankConfig {
            tol: 1e-300,
            max_iter: 2,
            ..Default::default()
        };
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let pr = pagerank(&star, &short).unwrap();
        assert!(!pr.converged);
        assert_eq!(pr.iterations, 2);
        let bad = PageRankConfig {
            damping: 1.0,
            ..Default::default()
        };
        assert!(pagerank(&star, &bad).is_err());
    }

    #[test]
    fn closeness_examples() {
        let c = closeness_centrality(&path(3));
        assert!(c[1] > c[0] && c[1] > c[2]);
        assert_eq!(closeness_centrality(&Graph::from_edges(1, &[]).unwrap()), vec![0.0]);
    }

    #[test]
    fn components_examples() {
        assert_eq!(connected_components(&path(4)), vec![0, 0, 0, 0]);
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(connected_components(&g), vec![0, 0, 1, 1]);
    }
}
