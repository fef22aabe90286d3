//! Risk, per-subgroup accuracy and fairness, bound drivers and ordering
//! checks over a hop partition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{multi_source_bfs, Graph, HopDistance, VertexId};
use crate::metrics::{normalize_set, DistortionEstimate, SubgroupPartition};

/// Per-vertex labels: class ids or real targets, `None` where absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Labels {
    Classes(Vec<Option<u32>>),
    Reals(Vec<Option<f64>>),
}

impl Labels {
    pub fn len(&self) -> usize {
        match self {
            Labels::Classes(v) => v.len(),
            Labels::Reals(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn covers(&self, v: VertexId) -> bool {
        match self {
            Labels::Classes(x) => x.get(v).is_some_and(Option::is_some),
            Labels::Reals(x) => x.get(v).is_some_and(Option::is_some),
        }
    }

    pub fn is_classification(&self) -> bool {
        matches!(self, Labels::Classes(_))
    }

    fn numeric(&self, v: VertexId) -> f64 {
        match self {
            Labels::Classes(x) => x[v].unwrap() as f64,
            Labels::Reals(x) => x[v].unwrap(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    ZeroOne,
    Absolute,
    Squared,
}

/// Predictions paired with ground truth over the same vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionTable {
    predicted: Labels,
    truth: Labels,
}

impl PredictionTable {
    pub fn new(predicted: Labels, truth: Labels) -> Result<Self> {
        if predicted.is_classification() != truth.is_classification() {
            return Err(Error::arg(
                "predictions and truth must both be class ids or both be real values",
            ));
        }
        if predicted.len() != truth.len() {
            return Err(Error::arg("predictions and truth have different lengths"));
        }
        let mismatched: Vec<_> = (0..truth.len())
            .filter(|&v| predicted.covers(v) != truth.covers(v))
            .collect();
        if !mismatched.is_empty() {
            return Err(Error::Coverage {
                missing: mismatched,
            });
        }
        Ok(PredictionTable { predicted, truth })
    }

    pub fn is_classification(&self) -> bool {
        self.truth.is_classification()
    }

    pub fn covers(&self, v: VertexId) -> bool {
        self.truth.covers(v)
    }

    pub fn coverage(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.truth.len()).filter(|&v| self.covers(v))
    }

    pub fn predicted(&self) -> &Labels {
        &self.predicted
    }

    pub fn truth(&self) -> &Labels {
        &self.truth
    }

    fn require(&self, vertices: impl IntoIterator<Item = VertexId>) -> Result<()> {
        let mut missing: Vec<_> = vertices.into_iter().filter(|&v| !self.covers(v)).collect();
        if missing.is_empty() {
            Ok(())
        } else {
            missing.sort_unstable();
            missing.dedup();
            Err(Error::Coverage { missing })
        }
    }

    fn loss_at(&self, v: VertexId, loss: Loss) -> f64 {
        match (loss, &self.predicted, &self.truth) {
            (Loss::ZeroOne, Labels::Classes(p), Labels::Classes(t)) => {
                if p[v] == t[v] {
                    0.0
                } else {
                    1.0
                }
            }
            (Loss::ZeroOne, _, _) => unreachable!("zero-one loss checked for class labels"),
            (Loss::Absolute, p, t) => (p.numeric(v) - t.numeric(v)).abs(),
            (Loss::Squared, p, t) => {
                let e = p.numeric(v) - t.numeric(v);
                e * e
            }
        }
    }
}

/// Mean loss over `subset`.
pub fn empirical_risk(preds: &PredictionTable, subset: &[VertexId], loss: Loss) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::arg("risk subset must be non-empty"));
    }
    if loss == Loss::ZeroOne && !preds.is_classification() {
        return Err(Error::arg("zero-one loss needs class labels"));
    }
    preds.require(subset.iter().copied())?;
    let total: f64 = subset.iter().map(|&v| preds.loss_at(v, loss)).sum();
    Ok(total / subset.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopAccuracy {
    pub hop: u32,
    pub accuracy: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgroupReport {
    /// Non-empty hop groups `1..=max_hop`.
    pub per_hop: Vec<HopAccuracy>,
    /// Accuracy on the seed set (hop 0).
    pub train_accuracy: f64,
    /// Accuracy over every covered non-seed vertex, including those beyond
    /// `max_hop` or unreachable.
    pub test_accuracy: f64,
    pub test_count: usize,
    pub max_discrepancy: f64,
    pub max_hop: u32,
}

/// `max |R_i − R_j|` over the reported hops.
pub fn max_discrepancy(per_hop: &[HopAccuracy]) -> f64 {
    let mut max_d = 0.0f64;
    for a in per_hop {
        for b in per_hop {
            max_d = max_d.max((a.accuracy - b.accuracy).abs());
        }
    }
    max_d
}

pub fn subgroup_accuracy(
    partition: &SubgroupPartition,
    preds: &PredictionTable,
) -> Result<SubgroupReport> {
    if !preds.is_classification() {
        return Err(Error::arg("subgroup accuracy needs class labels"));
    }
    preds.require(partition.within_range())?;
    let accuracy = |set: &[VertexId]| -> Result<f64> {
        Ok(1.0 - empirical_risk(preds, set, Loss::ZeroOne)?)
    };
    let train_accuracy = accuracy(&partition.seed_set)?;
    let per_hop = partition
        .groups
        .iter()
        .filter(|(_, members)| !members.is_empty())
        .map(|(k, members)| {
            Ok(HopAccuracy {
                hop: *k,
                accuracy: accuracy(members)?,
                count: members.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let test: Vec<VertexId> = preds
        .coverage()
        .filter(|v| partition.seed_set.binary_search(v).is_err())
        .collect();
    let test_accuracy = if test.is_empty() { 0.0 } else { accuracy(&test)? };
    Ok(SubgroupReport {
        max_discrepancy: max_discrepancy(&per_hop),
        per_hop,
        train_accuracy,
        test_accuracy,
        test_count: test.len(),
        max_hop: partition.max_hop,
    })
}

/// Right-hand side drivers of the risk bound for one subgroup: training
/// risk plus a multiple of `alpha × group_distance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub train_risk: f64,
    pub alpha: f64,
    pub group_distance: u32,
    pub bound_driver: f64,
}

impl BoundReport {
    /// `train_risk + c · bound_driver` for a caller-chosen constant `c`.
    pub fn bound_value(&self, c: f64) -> f64 {
        self.train_risk + c * self.bound_driver
    }
}

pub fn bound_report(
    train_risk: f64,
    distortion: &DistortionEstimate,
    group_distance: HopDistance,
) -> Result<BoundReport> {
    let d = group_distance.finite().ok_or(Error::VacuousBound)?;
    if !train_risk.is_finite() || train_risk < 0.0 {
        return Err(Error::arg("training risk must be finite and non-negative"));
    }
    Ok(BoundReport {
        train_risk,
        alpha: distortion.alpha,
        group_distance: d,
        bound_driver: distortion.alpha * d as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingCheck {
    /// Hop pairs `(i, j)`, `i > j`, where the farther group has lower risk.
    pub violations: Vec<(u32, u32)>,
    /// Rank correlation between hop and risk; 0 when either side is all ties.
    pub spearman: f64,
    pub all_tied: bool,
}

/// Average ranks (1-based) with ties sharing the mean of their positions.
fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman correlation (Pearson on average ranks). `None` when either
/// variable has zero rank variance.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        None
    } else {
        Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
    }
}

pub fn ordering_check(subgroup_risks: &[(u32, f64)]) -> Result<OrderingCheck> {
    if subgroup_risks.len() < 2 {
        return Err(Error::arg("ordering check needs at least two groups"));
    }
    let mut violations = Vec::new();
    for &(i, ri) in subgroup_risks {
        for &(j, rj) in subgroup_risks {
            if i > j && ri < rj {
                violations.push((i, j));
            }
        }
    }
    violations.sort_unstable();
    let hops: Vec<f64> = subgroup_risks.iter().map(|&(k, _)| k as f64).collect();
    let risks: Vec<f64> = subgroup_risks.iter().map(|&(_, r)| r).collect();
    let (spearman, all_tied) = match spearman(&hops, &risks) {
        Some(s) => (s, false),
        None => (0.0, true),
    };
    Ok(OrderingCheck {
        violations,
        spearman,
        all_tied,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialGroup {
    pub index: usize,
    pub size: usize,
    pub mean_accuracy: f64,
    /// Population variance.
    pub variance: f64,
}

/// Sorts trials by aggregate distance, descending (stable), and splits them
/// into `group_count` contiguous blocks; the last block takes the remainder.
pub fn trial_grouping(trials: &[(f64, f64)], group_count: usize) -> Result<Vec<TrialGroup>> {
    if trials.is_empty() {
        return Err(Error::arg("no trials to group"));
    }
    if group_count == 0 || group_count > trials.len() {
        return Err(Error::arg(format!(
            "group count {group_count} must be in 1..={}",
            trials.len()
        )));
    }
    if trials.iter().any(|(d, a)| d.is_nan() || a.is_nan()) {
        return Err(Error::arg("trial values must not be NaN"));
    }
    let mut sorted = trials.to_vec();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
    let base = trials.len() / group_count;
    Ok((0..group_count)
        .map(|g| {
            let start = g * base;
            let end = if g + 1 == group_count { trials.len() } else { start + base };
            let acc: Vec<f64> = sorted[start..end].iter().map(|t| t.1).collect();
            let mean = acc.iter().sum::<f64>() / acc.len() as f64;
            let variance = acc.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / acc.len() as f64;
            TrialGroup {
                index: g + 1,
                size: acc.len(),
                mean_accuracy: mean,
                variance,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregator {
    #[default]
    Max,
    Mean,
}

impl Aggregator {
    pub fn name(self) -> &'static str {
        match self {
            Aggregator::Max => "max",
            Aggregator::Mean => "mean",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateDistance {
    pub value: f64,
    pub counted: usize,
    pub excluded_unreachable: usize,
}

/// Max or mean of `D_s(v, seeds)` over non-seed vertices at finite distance.
pub fn aggregate_distance(
    g: &Graph,
    seeds: &[VertexId],
    aggregator: Aggregator,
) -> Result<AggregateDistance> {
    let seeds = normalize_set(g, seeds, "seed set")?;
    if seeds.len() == g.n() {
        return Err(Error::arg("seed set covers every vertex"));
    }
    let dist = multi_source_bfs(g, &seeds)?;
    let mut finite = Vec::new();
    let mut excluded_unreachable = 0;
    for d in dist {
        match d {
            HopDistance::Finite(0) => {}
            HopDistance::Finite(k) => finite.push(k as u64),
            HopDistance::Unreachable => excluded_unreachable += 1,
        }
    }
    if finite.is_empty() {
        return Err(Error::arg("no non-seed vertex is reachable from the seeds"));
    }
    let value = match aggregator {
        Aggregator::Max => *finite.iter().max().unwrap() as f64,
        Aggregator::Mean => finite.iter().sum::<u64>() as f64 / finite.len() as f64,
    };
    Ok(AggregateDistance {
        value,
        counted: finite.len(),
        excluded_unreachable,
    })
}

/// `"ACC|MD"` with two decimals, both on the percent scale.
pub fn format_acc_md(accuracy: f64, md: f64) -> Result<String> {
    for (name, x) in [("accuracy", accuracy), ("discrepancy", md)] {
        if !(0.0..=100.0).contains(&x) {
            return Err(Error::arg(format!("{name} {x} outside [0, 100]")));
        }
    }
    Ok(format!("{accuracy:.2}|{md:.2}"))
}
