//! Cold-start seed selection.
//!
//! The target is the k-center objective: choose `k` seeds minimizing the
//! largest hop distance from any non-seed vertex to its nearest seed.
//! [`kcenter_greedy`] is farthest-first traversal (a 2-approximation),
//! [`coverage_sampling`] is its randomized variant that draws each seed with
//! probability proportional to the current distance, and the baselines rank
//! vertices by simple graph statistics.

use std::fmt;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    bfs_distances, by_score_desc, closeness_centrality, multi_source_bfs, pagerank, relax_from,
    Graph, HopDistance, PageRankConfig, VertexId,
};
use crate::metrics::normalize_set;

/// Largest graph [`brute_force_kcenter`] accepts.
pub const BRUTE_FORCE_MAX_N: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    KcenterGreedy,
    CoverageSampling,
    Random,
    Degree,
    Centrality,
    Pagerank,
    BruteForce,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::KcenterGreedy => "kcenter_greedy",
            Method::CoverageSampling => "coverage_sampling",
            Method::Random => "random",
            Method::Degree => "degree",
            Method::Centrality => "centrality",
            Method::Pagerank => "pagerank",
            Method::BruteForce => "brute_force",
        })
    }
}

/// How farthest-first traversal picks its first seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartPolicy {
    /// Highest degree, lowest id on ties.
    #[default]
    HighestDegree,
    Vertex(VertexId),
    /// Uniform over all vertices, seeded.
    Random(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    Random,
    Degree,
    Centrality,
    Pagerank,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSelection {
    /// Seeds in selection order.
    pub seeds: Vec<VertexId>,
    /// k-center objective of `seeds`, recomputed from scratch. Reported as 0
    /// when the seeds cover every vertex (see `full_cover`).
    pub objective: HopDistance,
    /// True when `seeds` is the whole vertex set and the objective is undefined.
    pub full_cover: bool,
    pub method: Method,
    pub rng_seed: Option<u64>,
    /// For sequential methods, the distance of each seed after the first to
    /// the seeds chosen before it.
    pub pick_distances: Vec<HopDistance>,
}

impl SeedSelection {
    fn finish(
        g: &Graph,
        seeds: Vec<VertexId>,
        method: Method,
        rng_seed: Option<u64>,
        pick_distances: Vec<HopDistance>,
    ) -> Result<Self> {
        let full_cover = seeds.len() == g.n();
        let objective = if full_cover {
            HopDistance::ZERO
        } else {
            kcenter_objective(g, &seeds)?
        };
        Ok(SeedSelection {
            seeds,
            objective,
            full_cover,
            method,
            rng_seed,
            pick_distances,
        })
    }
}

fn check_budget(g: &Graph, k: usize) -> Result<()> {
    if k == 0 || k > g.n() {
        return Err(Error::arg(format!(
            "seed budget k = {k} must be in 1..={}",
            g.n()
        )));
    }
    Ok(())
}

/// `max_{v ∉ seeds} min_{s ∈ seeds} d(v, s)`.
pub fn kcenter_objective(g: &Graph, seeds: &[VertexId]) -> Result<HopDistance> {
    let seeds = normalize_set(g, seeds, "seed set")?;
    if seeds.len() == g.n() {
        return Err(Error::arg(
            "k-center objective is undefined when every vertex is a seed",
        ));
    }
    let dist = multi_source_bfs(g, &seeds)?;
    Ok(dist
        .into_iter()
        .filter(|&d| d != HopDistance::ZERO)
        .max()
        .expect("non-seed vertex exists"))
}

pub(crate) fn highest_degree(g: &Graph) -> VertexId {
    // max_by_key keeps the last maximum, so scan manually for lowest id
    let mut best = 0;
    for v in 1..g.n() {
        if g.degree(v) > g.degree(best) {
            best = v;
        }
    }
    best
}

fn start_vertex(g: &Graph, start: StartPolicy) -> Result<VertexId> {
    match start {
        StartPolicy::HighestDegree => Ok(highest_degree(g)),
        StartPolicy::Vertex(v) => {
            g.check_vertex(v)?;
            Ok(v)
        }
        StartPolicy::Random(seed) => {
            Ok(ChaCha8Rng::seed_from_u64(seed).random_range(0..g.n()))
        }
    }
}

/// Farthest-first traversal.
///
/// Each step takes the vertex farthest from the current seeds (unreachable
/// counts as farthest, lowest id on ties) and lowers the distance array with
/// a BFS from the new seed that only visits improved vertices.
pub fn kcenter_greedy(g: &Graph, k: usize, start: StartPolicy) -> Result<SeedSelection> {
    check_budget(g, k)?;
    let first = start_vertex(g, start)?;
    let mut seeds = Vec::with_capacity(k);
    seeds.push(first);
    let mut dist = bfs_distances(g, first)?;
    let mut picks = Vec::with_capacity(k - 1);
    while seeds.len() < k {
        let mut best = None;
        let mut best_d = HopDistance::ZERO;
        for (v, &d) in dist.iter().enumerate() {
            if d > best_d {
                best_d = d;
                best = Some(v);
            }
        }
        let v = best.ok_or_else(|| Error::Invariant("no vertex left to pick".into()))?;
        picks.push(best_d);
        seeds.push(v);
        relax_from(g, v, &mut dist)?;
    }
    let rng_seed = match start {
        StartPolicy::Random(s) => Some(s),
        _ => None,
    };
    SeedSelection::finish(g, seeds, Method::KcenterGreedy, rng_seed, picks)
}

/// Weight of a vertex for coverage sampling: its hop distance to the seeds,
/// with unreachable vertices weighted `n`.
fn sampling_weight(d: HopDistance, n: usize) -> u64 {
    match d {
        HopDistance::Finite(d) => d as u64,
        HopDistance::Unreachable => n as u64,
    }
}

/// Randomized farthest-first: starts at the highest-degree vertex, then draws
/// each next seed with probability proportional to its distance from the
/// seeds chosen so far.
pub fn coverage_sampling(g: &Graph, k: usize, rng_seed: u64) -> Result<SeedSelection> {
    check_budget(g, k)?;
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let first = highest_degree(g);
    let mut seeds = vec![first];
    let mut dist = bfs_distances(g, first)?;
    let mut picks = Vec::with_capacity(k - 1);
    while seeds.len() < k {
        let total: u64 = dist.iter().map(|&d| sampling_weight(d, n)).sum();
        if total == 0 {
            return Err(Error::Invariant(
                "all remaining sampling weights are zero".into(),
            ));
        }
        let mut ticket = rng.random_range(0..total);
        let mut chosen = None;
        for (v, &d) in dist.iter().enumerate() {
            let w = sampling_weight(d, n);
            if ticket < w {
                chosen = Some(v);
                break;
            }
            ticket -= w;
        }
        let v = chosen.expect("ticket below total weight");
        picks.push(dist[v]);
        seeds.push(v);
        relax_from(g, v, &mut dist)?;
    }
    SeedSelection::finish(g, seeds, Method::CoverageSampling, Some(rng_seed), picks)
}

/// Top-k by score (ties to lowest id), or k uniform draws for `Random`.
pub fn baseline_select(
    g: &Graph,
    k: usize,
    method: Baseline,
    rng_seed: u64,
) -> Result<SeedSelection> {
    check_budget(g, k)?;
    let scores: Vec<f64> = match method {
        Baseline::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            let seeds = index::sample(&mut rng, g.n(), k).into_vec();
            return SeedSelection::finish(g, seeds, Method::Random, Some(rng_seed), Vec::new());
        }
        Baseline::Degree => (0..g.n()).map(|v| g.degree(v) as f64).collect(),
        Baseline::Centrality => closeness_centrality(g),
        Baseline::Pagerank => pagerank(g, &PageRankConfig::default())?.scores,
    };
    let mut ranked: Vec<(f64, VertexId)> = scores.into_iter().zip(0..).collect();
    ranked.sort_by(|&a, &b| by_score_desc(a, b));
    let seeds = ranked.into_iter().take(k).map(|(_, v)| v).collect();
    let method = match method {
        Baseline::Degree => Method::Degree,
        Baseline::Centrality => Method::Centrality,
        _ => Method::Pagerank,
    };
    SeedSelection::finish(g, seeds, method, None, Vec::new())
}

/// Exact k-center by enumerating every k-subset; the lexicographically
/// smallest minimizer wins. Guarded to `n ≤ 20`.
pub fn brute_force_kcenter(g: &Graph, k: usize) -> Result<SeedSelection> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::SizeGuard {
            what: "vertex count",
            actual: n,
            limit: BRUTE_FORCE_MAX_N,
        });
    }
    check_budget(g, k)?;
    if k == n {
        return SeedSelection::finish(g, (0..n).collect(), Method::BruteForce, None, Vec::new());
    }
    let apsp: Vec<Vec<HopDistance>> = (0..n)
        .map(|s| bfs_distances(g, s))
        .collect::<Result<_>>()?;
    let mut combo: Vec<usize> = (0..k).collect();
    let mut best: Option<(HopDistance, Vec<usize>)> = None;
    let mut is_seed = vec![false; n];
    loop {
        combo.iter().for_each(|&s| is_seed[s] = true);
        let objective = (0..n)
            .filter(|&v| !is_seed[v])
            .map(|v| combo.iter().map(|&s| apsp[s][v]).min().unwrap())
            .max()
            .unwrap();
        combo.iter().for_each(|&s| is_seed[s] = false);
        if best.as_ref().is_none_or(|(b, _)| objective < *b) {
            best = Some((objective, combo.clone()));
        }
        // next combination in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
            break;
        };
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
    let (_, seeds) = best.expect("at least one combination");
    SeedSelection::finish(g, seeds, Method::BruteForce, None, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use HopDistance::{Finite, Unreachable};

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|l| (0, l)).collect();
        Graph::from_edges(leaves + 1, &edges).unwrap()
    }

    #[test]
    fn objective_examples() {
        assert_eq!(kcenter_objective(&star(4), &[0]).unwrap(), Finite(1));
        assert_eq!(kcenter_objective(&path(5), &[1, 3]).unwrap(), Finite(1));
        assert!(kcenter_objective(&path(3), &[0, 1, 2]).is_err());
        assert!(kcenter_objective(&path(3), &[]).is_err());
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(kcenter_objective(&split, &[0]).unwrap(), Unreachable);
    }

    #[test]
    fn greedy_on_path() {
        let sel = kcenter_greedy(&path(5), 2, StartPolicy::HighestDegree).unwrap();
        assert_eq!(sel.seeds, vec![1, 4]);
        assert_eq!(sel.objective, Finite(1));
        assert_eq!(sel.pick_distances, vec![Finite(3)]);
        assert_eq!(brute_force_kcenter(&path(5), 2).unwrap().objective, Finite(1));
    }

    #[test]
    fn greedy_star_and_full_cover() {
        let sel = kcenter_greedy(&star(4), 1, StartPolicy::HighestDegree).unwrap();
        assert_eq!((sel.seeds, sel.objective), (vec![0], Finite(1)));
        let all = kcenter_greedy(&path(4), 4, StartPolicy::HighestDegree).unwrap();
        assert!(all.full_cover);
        assert_eq!(all.objective, Finite(0));
        let mut s = all.seeds.clone();
        s.sort();
        assert_eq!(s, vec![0, 1, 2, 3]);
        assert!(kcenter_greedy(&path(4), 5, StartPolicy::HighestDegree).is_err());
        assert!(kcenter_greedy(&path(4), 0, StartPolicy::HighestDegree).is_err());
    }

    #[test]
    fn greedy_seeds_every_component_first() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (4, 5)]).unwrap();
        let sel = kcenter_greedy(&g, 3, StartPolicy::Vertex(1)).unwrap();
        assert_eq!(sel.seeds, vec![1, 4, 6]);
        assert_eq!(sel.pick_distances, vec![Unreachable, Unreachable]);
        assert!(sel.objective.is_finite());
    }

    #[test]
    fn greedy_random_start_is_seeded() {
        let g = path(9);
        let a = kcenter_greedy(&g, 3, StartPolicy::Random(11)).unwrap();
        let b = kcenter_greedy(&g, 3, StartPolicy::Random(11)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rng_seed, Some(11));
    }

    #[test]
    fn coverage_examples() {
        let g = star(4);
        for seed in [0, 1, 99] {
            assert_eq!(coverage_sampling(&g, 1, seed).unwrap().seeds, vec![0]);
        }
        let mut all = coverage_sampling(&path(6), 6, 5).unwrap().seeds;
        all.sort();
        assert_eq!(all, (0..6).collect::<Vec<_>>());
        assert_eq!(coverage_sampling(&path(6), 3, 5), coverage_sampling(&path(6), 3, 5));
    }

    #[test]
    fn coverage_split_on_three_path() {
        // after starting at vertex 1, vertices 0 and 2 each carry weight 1
        let g = path(3);
        let draws = 10_000;
        let left = (0..draws)
            .filter(|&s| coverage_sampling(&g, 2, s).unwrap().seeds[1] == 0)
            .count();
        let frac = left as f64 / draws as f64;
        assert!((frac - 0.5).abs() <= 0.02, "fraction {frac}");
    }

    #[test]
    fn baselines() {
        assert_eq!(baseline_select(&star(4), 1, Baseline::Degree, 0).unwrap().seeds, vec![0]);
        let cycle = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(
            baseline_select(&cycle, 2, Baseline::Pagerank, 0).unwrap().seeds,
            vec![0, 1]
        );
        assert_eq!(
            baseline_select(&path(5), 1, Baseline::Centrality, 0).unwrap().seeds,
            vec![2]
        );
        let a = baseline_select(&path(30), 5, Baseline::Random, 42).unwrap();
        let b = baseline_select(&path(30), 5, Baseline::Random, 42).unwrap();
        assert_eq!(a, b);
        let mut s = a.seeds.clone();
        s.sort();
        s.dedup();
        assert_eq!(s.len(), 5);
        assert!(baseline_select(&path(3), 4, Baseline::Degree, 0).is_err());
    }

    #[test]
    fn brute_force_examples() {
        let sel = brute_force_kcenter(&path(5), 1).unwrap();
        assert_eq!((sel.seeds, sel.objective), (vec![2], Finite(2)));
        let sel = brute_force_kcenter(&path(6), 5).unwrap();
        assert_eq!(sel.objective, Finite(1));
        assert!(matches!(
            brute_force_kcenter(&path(21), 2),
            Err(Error::SizeGuard { actual: 21, .. })
        ));
    }
}
