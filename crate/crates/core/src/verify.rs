//! Built-in oracle suites, runnable at user-chosen scale. Each suite
//! generates seeded random instances, checks a property against a
//! brute-force reference, and reports the first counterexample.
//!
//! A [`Fault`] swaps in a deliberately broken implementation so callers can
//! confirm a suite actually detects failures.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, multi_source_bfs, relax_from, Graph, HopDistance};
use crate::metrics::estimate_distortion;
use crate::sampling::{
    brute_force_kcenter, kcenter_greedy, kcenter_objective, StartPolicy, BRUTE_FORCE_MAX_N,
};

pub const MAX_TRIALS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Multi-source BFS overstates one distance.
    Bfs,
    /// Greedy picks the nearest vertex instead of the farthest.
    Kcenter,
    /// Distortion is reported at half its true value.
    Distortion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub trials: usize,
    /// Largest random graph; at most [`BRUTE_FORCE_MAX_N`].
    pub max_n: usize,
    pub rng_seed: u64,
    pub fault: Option<Fault>,
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_n < 3 || self.max_n > BRUTE_FORCE_MAX_N {
            return Err(Error::SizeGuard {
                what: "max_n",
                actual: self.max_n,
                limit: BRUTE_FORCE_MAX_N,
            });
        }
        if self.trials == 0 || self.trials > MAX_TRIALS {
            return Err(Error::SizeGuard {
                what: "trials",
                actual: self.trials,
                limit: MAX_TRIALS,
            });
        }
        Ok(())
    }
}

/// G(n, p) over `0..n`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("n > 0")
}

/// A random spanning tree plus G(n, p) extra edges: always connected.
pub fn random_connected_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("n > 0")
}

/// Shuffled Hamiltonian path plus sparse chords; large diameter.
pub fn random_long_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0], w[1])).collect();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("n > 0")
}

fn describe(g: &Graph) -> String {
    let mut s = format!("n={} edges=[", g.n());
    for (i, (u, v)) in g.edges().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{u}-{v}");
    }
    s.push(']');
    s
}

fn outcome(name: &str, cases: usize, counterexample: Option<String>) -> PropertyOutcome {
    PropertyOutcome {
        name: name.to_owned(),
        passed: counterexample.is_none(),
        cases,
        counterexample,
    }
}

/// Multi-source BFS equals the elementwise minimum of single-source runs.
pub fn bfs_equivalence(config: &VerifyConfig) -> Result<PropertyOutcome> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    for trial in 0..config.trials {
        let n = rng.random_range(2..=config.max_n);
        let p = rng.random_range(0.05..0.5);
        let g = random_graph(&mut rng, n, p);
        let count = rng.random_range(1..=n);
        let sources: Vec<usize> = (0..count).map(|_| rng.random_range(0..n)).collect();
        let mut fast = multi_source_bfs(&g, &sources)?;
        if config.fault == Some(Fault::Bfs) {
            if let Some(d) = fast.iter_mut().find(|d| **d != HopDistance::ZERO) {
                *d = d.succ();
            }
        }
        let mut slow = vec![HopDistance::Unreachable; n];
        for &s in &sources {
            for (slot, d) in slow.iter_mut().zip(bfs_distances(&g, s)?) {
                *slot = (*slot).min(d);
            }
        }
        if let Some(v) = (0..n).find(|&v| fast[v] != slow[v]) {
            return Ok(outcome(
                "bfs_equivalence",
                trial + 1,
                Some(format!(
                    "{} sources={sources:?} vertex={v} multi_source={} per_source_min={}",
                    describe(&g),
                    fast[v],
                    slow[v]
                )),
            ));
        }
    }
    Ok(outcome("bfs_equivalence", config.trials, None))
}

fn nearest_first(g: &Graph, k: usize) -> Result<Vec<usize>> {
    let mut seeds = vec![crate::sampling::highest_degree(g)];
    let mut dist = bfs_distances(g, seeds[0])?;
    while seeds.len() < k {
        let v = (0..g.n())
            .filter(|&v| dist[v] != HopDistance::ZERO)
            .min_by_key(|&v| dist[v])
            .ok_or_else(|| Error::Invariant("no vertex left".into()))?;
        seeds.push(v);
        relax_from(g, v, &mut dist)?;
    }
    Ok(seeds)
}

/// Farthest-first objective is within twice the exact optimum.
pub fn kcenter_two_approximation(config: &VerifyConfig) -> Result<PropertyOutcome> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    for trial in 0..config.trials {
        let n = rng.random_range(4..=config.max_n.max(4));
        let g = if trial % 2 == 0 {
            let p = rng.random_range(0.0..0.3);
            random_connected_graph(&mut rng, n, p)
        } else {
            let p = rng.random_range(0.0..0.05);
            random_long_graph(&mut rng, n, p)
        };
        let k = rng.random_range(1..=3.min(n - 1));
        let (seeds, greedy) = match config.fault {
            Some(Fault::Kcenter) => {
                let s = nearest_first(&g, k)?;
                let obj = kcenter_objective(&g, &s)?;
                (s, obj)
            }
            _ => {
                let sel = kcenter_greedy(&g, k, StartPolicy::HighestDegree)?;
                (sel.seeds, sel.objective)
            }
        };
        let best = brute_force_kcenter(&g, k)?;
        let (HopDistance::Finite(gr), HopDistance::Finite(opt)) = (greedy, best.objective) else {
            return Err(Error::Invariant("connected graph gave unreachable objective".into()));
        };
        if gr > 2 * opt {
            return Ok(outcome(
                "kcenter_two_approximation",
                trial + 1,
                Some(format!(
                    "{} k={k} greedy_seeds={seeds:?} greedy={gr} optimum_seeds={:?} optimum={opt}",
                    describe(&g),
                    best.seeds
                )),
            ));
        }
    }
    Ok(outcome("kcenter_two_approximation", config.trials, None))
}

/// Every pair satisfies `r·d ≤ d' ≤ α·r·d` under the returned estimate.
pub fn distortion_sandwich(config: &VerifyConfig) -> Result<PropertyOutcome> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    for trial in 0..config.trials {
        let len = rng.random_range(1..=4 * config.max_n);
        let graph_d: Vec<f64> = (0..len).map(|_| rng.random_range(1..=8) as f64).collect();
        let embed_d: Vec<f64> = graph_d
            .iter()
            .map(|d| d * rng.random_range(0.1..10.0))
            .collect();
        let mut est = estimate_distortion(&graph_d, &embed_d, Default::default())?;
        if config.fault == Some(Fault::Distortion) {
            est.alpha *= 0.5;
        }
        if let Some(i) = (0..len).find(|&i| !est.certifies(graph_d[i], embed_d[i], 1e-12)) {
            return Ok(outcome(
                "distortion_sandwich",
                trial + 1,
                Some(format!(
                    "pair {i}: d={} d'={} r={} alpha={}",
                    graph_d[i], embed_d[i], est.r, est.alpha
                )),
            ));
        }
    }
    Ok(outcome("distortion_sandwich", config.trials, None))
}

pub fn run_all(config: &VerifyConfig) -> Result<Vec<PropertyOutcome>> {
    Ok(vec![
        bfs_equivalence(config)?,
        kcenter_two_approximation(config)?,
        distortion_sandwich(config)?,
    ])
}
