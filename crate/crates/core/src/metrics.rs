//! Structural group distances, hop-based subgroup partitions, and the
//! distortion between hop distance and Euclidean embedding distance.
//!
//! A map γ from the graph metric `d` into an embedding metric `d'` has
//! distortion α with scaling factor r when, for every measured pair,
//!
//! ```text
//! r · d(u, v) ≤ d'(γ(u), γ(v)) ≤ α · r · d(u, v)
//! ```
//!
//! Given a sample of pairs, the tightest constants are `r = min ρ` and
//! `α = max ρ / min ρ` where `ρ = d' / d`.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, multi_source_bfs, Graph, HopDistance, VertexId};

/// Per-vertex embedding vectors. Vertices without a vector are uncovered.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    data: Vec<f64>,
    present: Vec<bool>,
}

impl EmbeddingTable {
    /// An empty table for `n` vertices.
    pub fn new(n: usize, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::arg("embedding dimension must be positive"));
        }
        Ok(EmbeddingTable {
            dim,
            data: vec![0.0; n * dim],
            present: vec![false; n],
        })
    }

    /// A fully covered table, one row per vertex.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        let mut table = EmbeddingTable::new(rows.len(), dim)?;
        for (v, row) in rows.iter().enumerate() {
            table.insert(v, row)?;
        }
        Ok(table)
    }

    pub fn insert(&mut self, v: VertexId, row: &[f64]) -> Result<()> {
        if v >= self.present.len() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.present.len(),
            });
        }
        if row.len() != self.dim {
            return Err(Error::arg(format!(
                "vector for vertex {v} has length {}, expected {}",
                row.len(),
                self.dim
            )));
        }
        if let Some(x) = row.iter().find(|x| !x.is_finite()) {
            return Err(Error::arg(format!("vector for vertex {v} has non-finite entry {x}")));
        }
        self.data[v * self.dim..(v + 1) * self.dim].copy_from_slice(row);
        self.present[v] = true;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vertex slots (covered or not).
    pub fn len(&self) -> usize {
        self.present.len()
    }

    pub fn is_empty(&self) -> bool {
        self.present.is_empty()
    }

    pub fn get(&self, v: VertexId) -> Option<&[f64]> {
        match self.present.get(v) {
            Some(true) => Some(&self.data[v * self.dim..(v + 1) * self.dim]),
            _ => None,
        }
    }

    pub fn covers(&self, v: VertexId) -> bool {
        self.present.get(v).copied().unwrap_or(false)
    }

    pub fn coverage(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.present
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(|(v, _)| v)
    }

    /// Errors with the sorted list of vertices in `required` that lack a vector.
    pub fn require(&self, required: impl IntoIterator<Item = VertexId>) -> Result<()> {
        let mut missing: Vec<_> = required.into_iter().filter(|&v| !self.covers(v)).collect();
        if missing.is_empty() {
            return Ok(());
        }
        missing.sort_unstable();
        missing.dedup();
        Err(Error::Coverage { missing })
    }

    pub(crate) fn row(&self, v: VertexId) -> &[f64] {
        &self.data[v * self.dim..(v + 1) * self.dim]
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// How a vertex-to-set embedding distance is reduced over the set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointToSet {
    #[default]
    Min,
    Mean,
}

impl PointToSet {
    pub fn name(self) -> &'static str {
        match self {
            PointToSet::Min => "min",
            PointToSet::Mean => "mean",
        }
    }
}

/// Embedding distance from `v` to the set `set`; both must be covered.
pub fn point_to_set_distance(
    emb: &EmbeddingTable,
    v: VertexId,
    set: &[VertexId],
    mode: PointToSet,
) -> f64 {
    let hv = emb.row(v);
    let dists = set.iter().map(|&u| euclidean(hv, emb.row(u)));
    match mode {
        PointToSet::Min => dists.fold(f64::INFINITY, f64::min),
        PointToSet::Mean => dists.sum::<f64>() / set.len() as f64,
    }
}

/// Minimum hop distance from `v` to any member of `set`.
pub fn group_distance_point(g: &Graph, v: VertexId, set: &[VertexId]) -> Result<HopDistance> {
    g.check_set(set, "target set")?;
    let from_v = bfs_distances(g, v)?;
    Ok(set.iter().map(|&u| from_v[u]).min().unwrap())
}

/// Directed max-min distance `max_{v ∈ from} min_{u ∈ to} d(v, u)`.
///
/// Not symmetric: `group_distance(g, a, b)` and `group_distance(g, b, a)`
/// generally differ.
pub fn group_distance(g: &Graph, from: &[VertexId], to: &[VertexId]) -> Result<HopDistance> {
    g.check_set(from, "source group")?;
    let dist = multi_source_bfs(g, to)?;
    Ok(from.iter().map(|&v| dist[v]).max().unwrap())
}

/// Vertices outside the seed set bucketed by hop distance to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupPartition {
    /// Sorted, deduplicated seed set.
    pub seed_set: Vec<VertexId>,
    /// `(k, V_k)` for `k = 1..=max_hop`, including empty groups.
    pub groups: Vec<(u32, Vec<VertexId>)>,
    /// Reachable but farther than `max_hop`.
    pub overflow: Vec<VertexId>,
    pub unreachable: Vec<VertexId>,
    pub max_hop: u32,
}

impl SubgroupPartition {
    pub fn group(&self, k: u32) -> &[VertexId] {
        if k == 0 {
            return &self.seed_set;
        }
        self.groups
            .get(k as usize - 1)
            .map_or(&[][..], |(_, g)| g.as_slice())
    }

    pub fn counts(&self) -> Vec<(u32, usize)> {
        self.groups.iter().map(|(k, g)| (*k, g.len())).collect()
    }

    /// Seeds and all vertices within `max_hop`.
    pub fn within_range(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.seed_set
            .iter()
            .chain(self.groups.iter().flat_map(|(_, g)| g.iter()))
            .copied()
    }
}

pub(crate) fn normalize_set(g: &Graph, set: &[VertexId], what: &str) -> Result<Vec<VertexId>> {
    g.check_set(set, what)?;
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    Ok(s)
}

pub fn partition_by_distance(
    g: &Graph,
    seeds: &[VertexId],
    max_hop: u32,
) -> Result<SubgroupPartition> {
    if max_hop == 0 {
        return Err(Error::arg("max_hop must be positive"));
    }
    let seed_set = normalize_set(g, seeds, "seed set")?;
    let dist = multi_source_bfs(g, &seed_set)?;
    let mut groups: Vec<(u32, Vec<VertexId>)> = (1..=max_hop).map(|k| (k, Vec::new())).collect();
    let mut overflow = Vec::new();
    let mut unreachable = Vec::new();
    for (v, d) in dist.iter().enumerate() {
        match *d {
            HopDistance::Finite(0) => {}
            HopDistance::Finite(k) if k <= max_hop => groups[k as usize - 1].1.push(v),
            HopDistance::Finite(_) => overflow.push(v),
            HopDistance::Unreachable => unreachable.push(v),
        }
    }
    Ok(SubgroupPartition {
        seed_set,
        groups,
        overflow,
        unreachable,
        max_hop,
    })
}

/// Tightest `(r, α)` for a sample of paired distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionEstimate {
    pub r: f64,
    pub alpha: f64,
    pub pair_count: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub excluded_pairs: usize,
}

impl DistortionEstimate {
    /// Whether `r·d ≤ d' ≤ α·r·d` holds for one pair, with relative slack `rel_tol`.
    pub fn certifies(&self, graph_dist: f64, embed_dist: f64, rel_tol: f64) -> bool {
        let lower = self.r * graph_dist;
        let upper = self.alpha * self.r * graph_dist;
        lower <= embed_dist * (1.0 + rel_tol) && embed_dist <= upper * (1.0 + rel_tol)
    }
}

/// What to do with pairs whose embedding distance is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroDistancePolicy {
    #[default]
    Reject,
    Exclude,
}

pub fn estimate_distortion(
    graph_dists: &[f64],
    embed_dists: &[f64],
    policy: ZeroDistancePolicy,
) -> Result<DistortionEstimate> {
    if graph_dists.len() != embed_dists.len() {
        return Err(Error::arg(format!(
            "{} graph distances but {} embedding distances",
            graph_dists.len(),
            embed_dists.len()
        )));
    }
    if graph_dists.is_empty() {
        return Err(Error::arg("no distance pairs to estimate distortion from"));
    }
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = 0.0f64;
    let mut pair_count = 0;
    let mut excluded_pairs = 0;
    for (i, (&d, &e)) in graph_dists.iter().zip(embed_dists).enumerate() {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::arg(format!("graph distance {d} at pair {i} is not positive")));
        }
        if !(e >= 0.0 && e.is_finite()) {
            return Err(Error::arg(format!("embedding distance {e} at pair {i} is invalid")));
        }
        let rho = e / d;
        if rho == 0.0 {
            match policy {
                ZeroDistancePolicy::Reject => {
                    return Err(Error::DegenerateEmbedding {
                        index: i,
                        graph_distance: d,
                    })
                }
                ZeroDistancePolicy::Exclude => {
                    excluded_pairs += 1;
                    continue;
                }
            }
        }
        min_ratio = min_ratio.min(rho);
        max_ratio = max_ratio.max(rho);
        pair_count += 1;
    }
    if pair_count == 0 {
        return Err(Error::arg("every pair was excluded as zero-distance"));
    }
    Ok(DistortionEstimate {
        r: min_ratio,
        alpha: max_ratio / min_ratio,
        pair_count,
        min_ratio,
        max_ratio,
        excluded_pairs,
    })
}

/// One row of the hop-versus-embedding-distance profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub hop: u32,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub count: usize,
}

fn covered_partition(
    g: &Graph,
    seeds: &[VertexId],
    emb: &EmbeddingTable,
    max_hop: u32,
) -> Result<SubgroupPartition> {
    let part = partition_by_distance(g, seeds, max_hop)?;
    emb.require(part.within_range())?;
    Ok(part)
}

/// Mean point-to-set embedding distance for each non-empty hop group.
pub fn hop_embedding_profile(
    g: &Graph,
    seeds: &[VertexId],
    emb: &EmbeddingTable,
    max_hop: u32,
    mode: PointToSet,
) -> Result<Vec<ProfileRow>> {
    let part = covered_partition(g, seeds, emb, max_hop)?;
    Ok(part
        .groups
        .iter()
        .filter(|(_, members)| !members.is_empty())
        .map(|(k, members)| {
            let d: Vec<f64> = members
                .iter()
                .map(|&v| point_to_set_distance(emb, v, &part.seed_set, mode))
                .collect();
            let count = d.len();
            let mean = d.iter().sum::<f64>() / count as f64;
            let var = d.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / count as f64;
            ProfileRow {
                hop: *k,
                mean,
                std: var.sqrt(),
                count,
            }
        })
        .collect())
}

/// `(D_s(v, seeds), point-to-set embedding distance)` for every vertex with
/// `1 ≤ D_s ≤ max_hop`, in vertex-id order.
pub fn paired_distances_for_distortion(
    g: &Graph,
    seeds: &[VertexId],
    emb: &EmbeddingTable,
    max_hop: u32,
    mode: PointToSet,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let part = covered_partition(g, seeds, emb, max_hop)?;
    let mut pairs: Vec<(VertexId, u32)> = part
        .groups
        .iter()
        .flat_map(|(k, members)| members.iter().map(move |&v| (v, *k)))
        .collect();
    pairs.sort_unstable();
    Ok(pairs
        .into_iter()
        .map(|(v, k)| (k as f64, point_to_set_distance(emb, v, &part.seed_set, mode)))
        .unzip())
}

/// Vertex-pair sample `(d(u, v), ‖h_u − h_v‖)` for diagnostics. Draws up to
/// `max_pairs` distinct covered vertex pairs at finite positive distance.
pub fn sampled_pair_distances(
    g: &Graph,
    emb: &EmbeddingTable,
    max_pairs: usize,
    rng_seed: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    const CAP: usize = 2000;
    let max_pairs = max_pairs.min(CAP);
    let covered: Vec<VertexId> = emb.coverage().filter(|&v| v < g.n()).collect();
    if covered.len() < 2 {
        return Err(Error::arg("need at least two embedded vertices"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    // a handful of BFS sources, each paired with several random targets
    let source_count = covered.len().min(max_pairs.div_ceil(20).max(1));
    let mut sources: Vec<VertexId> = index::sample(&mut rng, covered.len(), source_count)
        .into_iter()
        .map(|i| covered[i])
        .collect();
    sources.sort_unstable();
    let per_source = max_pairs.div_ceil(source_count);
    let mut graph_d = Vec::new();
    let mut embed_d = Vec::new();
    for &u in &sources {
        let dist = bfs_distances(g, u)?;
        let targets: Vec<VertexId> = covered
            .iter()
            .copied()
            .filter(|&v| matches!(dist[v], HopDistance::Finite(d) if d > 0))
            .collect();
        if targets.is_empty() {
            continue;
        }
        for _ in 0..per_source.min(targets.len()) {
            if graph_d.len() == max_pairs {
                break;
            }
            let v = targets[rng.random_range(0..targets.len())];
            graph_d.push(dist[v].finite().unwrap() as f64);
            embed_d.push(euclidean(emb.row(u), emb.row(v)));
        }
    }
    Ok((graph_d, embed_d))
}
