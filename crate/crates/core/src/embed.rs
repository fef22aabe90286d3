//! Parameter-free embeddings and synthetic data.
//!
//! [`propagate`] is message passing with mean aggregation over the closed
//! neighbourhood and an identity update, so after `L` layers a vertex's
//! vector mixes the features of its `L`-hop neighbourhood.
//!
//! All randomness uses `ChaCha8Rng` seeded through `seed_from_u64`, and
//! Gaussian draws use `rand_distr::StandardNormal` (ziggurat). Both are
//! specified algorithms, so outputs are reproducible across platforms for
//! pinned crate versions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::metrics::{euclidean, EmbeddingTable};

/// Dense per-vertex attributes, one row for every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl FeatureMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::arg("feature matrix needs at least one non-empty row"));
        }
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (v, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::arg(format!(
                    "feature row {v} has length {}, expected {dim}",
                    row.len()
                )));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::arg(format!("feature row {v} has a non-finite entry")));
            }
            data.extend_from_slice(row);
        }
        Ok(FeatureMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn row(&self, v: VertexId) -> &[f64] {
        &self.data[v * self.dim..(v + 1) * self.dim]
    }
}

impl TryFrom<&EmbeddingTable> for FeatureMatrix {
    type Error = Error;

    /// Requires every vertex slot to be covered.
    fn try_from(table: &EmbeddingTable) -> Result<Self> {
        table.require(0..table.len())?;
        FeatureMatrix::from_rows((0..table.len()).map(|v| table.get(v).unwrap().to_vec()).collect())
    }
}

pub fn one_hot_features(g: &Graph) -> FeatureMatrix {
    let n = g.n();
    let mut data = vec![0.0; n * n];
    for v in 0..n {
        data[v * n + v] = 1.0;
    }
    FeatureMatrix { dim: n, data }
}

/// `layers` rounds of `h_u ← mean{h_v : v ∈ N(u) ∪ {u}}`, starting from `x`.
pub fn propagate(g: &Graph, x: &FeatureMatrix, layers: usize) -> Result<EmbeddingTable> {
    if x.rows() != g.n() {
        return Err(Error::arg(format!(
            "feature matrix has {} rows for a graph with {} vertices",
            x.rows(),
            g.n()
        )));
    }
    if layers == 0 {
        return Err(Error::arg("layer count must be positive"));
    }
    let dim = x.dim;
    let mut cur = x.data.clone();
    let mut next = vec![0.0; cur.len()];
    for _ in 0..layers {
        for u in 0..g.n() {
            let out = &mut next[u * dim..(u + 1) * dim];
            out.copy_from_slice(&cur[u * dim..(u + 1) * dim]);
            for &v in g.neighbors(u) {
                for (o, c) in out.iter_mut().zip(&cur[v * dim..(v + 1) * dim]) {
                    *o += c;
                }
            }
            let scale = 1.0 / (g.degree(u) + 1) as f64;
            out.iter_mut().for_each(|o| *o *= scale);
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let mut table = EmbeddingTable::new(g.n(), dim)?;
    for u in 0..g.n() {
        table.insert(u, &cur[u * dim..(u + 1) * dim])?;
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbmParams {
    pub sizes: Vec<usize>,
    pub p_in: f64,
    pub p_out: f64,
    pub rng_seed: u64,
}

#[derive(Debug, Clone)]
pub struct SyntheticDataset {
    pub graph: Graph,
    /// Block id of every vertex; blocks occupy consecutive id ranges.
    pub labels: Vec<u32>,
    pub block_count: usize,
    pub params: SbmParams,
}

/// Appends each candidate edge `index_to_pair(i)`, `i < count`, independently
/// with probability `p`. Uses geometric skips so cost is proportional to the
/// number of edges produced.
fn bernoulli_pairs(
    rng: &mut ChaCha8Rng,
    count: u64,
    p: f64,
    out: &mut Vec<(VertexId, VertexId)>,
    index_to_pair: impl Fn(u64) -> (VertexId, VertexId),
) {
    if p <= 0.0 || count == 0 {
        return;
    }
    if p >= 1.0 {
        out.extend((0..count).map(index_to_pair));
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut i: u64 = 0;
    loop {
        let u: f64 = rng.random();
        // number of failures before the next success
        let skip = ((1.0 - u).ln() / log_q).floor();
        if !skip.is_finite() || skip >= (count - i) as f64 {
            return;
        }
        i += skip as u64;
        out.push(index_to_pair(i));
        i += 1;
        if i >= count {
            return;
        }
    }
}

/// Row/column of the `i`-th pair `(a, b)`, `a < b`, of a block of `s`
/// vertices in row-major order.
fn triangle_pair(i: u64, s: u64) -> (u64, u64) {
    // rows have lengths s-1, s-2, ...
    let mut a = {
        let two_s = 2 * s - 1;
        let disc = (two_s * two_s) as f64 - 8.0 * i as f64;
        ((two_s as f64 - disc.sqrt()) / 2.0).floor() as u64
    };
    let row_start = |a: u64| a * (2 * s - a - 1) / 2;
    while a > 0 && row_start(a) > i {
        a -= 1;
    }
    while row_start(a + 1) <= i {
        a += 1;
    }
    let b = a + 1 + (i - row_start(a));
    (a, b)
}

/// Stochastic block model: blocks of the given sizes, intra-block pairs
/// joined with probability `p_in` and inter-block pairs with `p_out`.
pub fn synthetic_sbm(
    sizes: &[usize],
    p_in: f64,
    p_out: f64,
    rng_seed: u64,
) -> Result<SyntheticDataset> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::arg("block sizes must be positive"));
    }
    if !(0.0..=1.0).contains(&p_in) || !(0.0..=1.0).contains(&p_out) {
        return Err(Error::arg("probabilities must lie in [0, 1]"));
    }
    if p_out > p_in {
        return Err(Error::arg(format!(
            "p_out = {p_out} exceeds p_in = {p_in}"
        )));
    }
    let n: usize = sizes.iter().sum();
    let mut starts = Vec::with_capacity(sizes.len());
    let mut labels = Vec::with_capacity(n);
    let mut acc = 0;
    for (b, &s) in sizes.iter().enumerate() {
        starts.push(acc);
        labels.extend(std::iter::repeat_n(b as u32, s));
        acc += s;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut edges = Vec::new();
    for (a, &sa) in sizes.iter().enumerate() {
        let base = starts[a];
        let sa64 = sa as u64;
        bernoulli_pairs(&mut rng, sa64 * (sa64 - 1) / 2, p_in, &mut edges, |i| {
            let (x, y) = triangle_pair(i, sa64);
            (base + x as usize, base + y as usize)
        });
        for (b, &sb) in sizes.iter().enumerate().skip(a + 1) {
            let other = starts[b];
            let sb64 = sb as u64;
            bernoulli_pairs(&mut rng, sa64 * sb64, p_out, &mut edges, |i| {
                (base + (i / sb64) as usize, other + (i % sb64) as usize)
            });
        }
    }
    Ok(SyntheticDataset {
        graph: Graph::from_edges(n, &edges)?,
        labels,
        block_count: sizes.len(),
        params: SbmParams {
            sizes: sizes.to_vec(),
            p_in,
            p_out,
            rng_seed,
        },
    })
}

/// Targets that are 1-Lipschitz in embedding space (before noise): the
/// Euclidean distance from `h_v` to the nearest anchor embedding, plus
/// seeded Gaussian noise of standard deviation `noise`.
///
/// Returns one entry per vertex slot; uncovered vertices get `None`.
pub fn lipschitz_labels(
    emb: &EmbeddingTable,
    anchors: &[VertexId],
    noise: f64,
    rng_seed: u64,
) -> Result<Vec<Option<f64>>> {
    if anchors.is_empty() {
        return Err(Error::arg("anchor set must be non-empty"));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(Error::arg("noise scale must be a finite non-negative number"));
    }
    if let Some(&v) = anchors.iter().find(|&&v| v >= emb.len()) {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: emb.len(),
        });
    }
    emb.require(anchors.iter().copied())?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    Ok((0..emb.len())
        .map(|v| {
            emb.get(v).map(|hv| {
                let base = anchors
                    .iter()
                    .map(|&a| euclidean(hv, emb.get(a).unwrap()))
                    .fold(f64::INFINITY, f64::min);
                if noise > 0.0 {
                    let z: f64 = rng.sample(StandardNormal);
                    base + noise * z
                } else {
                    base
                }
            })
        })
        .collect())
}
