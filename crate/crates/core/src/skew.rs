//! Degree-skew harness: the per-degree group-count ratio statistic, and
//! degree-stratified subsampling that reshapes a labeled graph until that
//! statistic follows a target linear trend.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::labels::LabelTable;

/// Floor for target ratios, so they stay positive at steep negative slopes.
pub const RATIO_EPSILON: f64 = 0.05;

/// Degree bucketing scheme. Degrees are structural (incident merged edges).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bucketing {
    /// One bucket per degree value.
    Unit,
    /// Buckets [2^k, 2^(k+1)-1]; degree 0 gets its own bucket.
    Log2,
}

impl Bucketing {
    fn bucket_of(self, degree: usize) -> (usize, usize) {
        match self {
            Bucketing::Unit => (degree, degree),
            Bucketing::Log2 => {
                if degree == 0 {
                    (0, 0)
                } else {
                    let k = usize::BITS - 1 - degree.leading_zeros();
                    (1 << k, (1 << (k + 1)) - 1)
                }
            }
        }
    }
}

fn midpoint(lo: usize, hi: usize) -> f64 {
    (lo + hi) as f64 / 2.0
}

/// One degree bucket of the ratio curve. `ratio` is `n_a / n_b`; buckets with
/// `n_b == 0` carry no ratio and are excluded from the fit (`included` false).
#[derive(Debug, Clone, Serialize)]
pub struct RatioPoint {
    pub lo: usize,
    pub hi: usize,
    pub midpoint: f64,
    pub n_a: usize,
    pub n_b: usize,
    pub ratio: Option<f64>,
    pub included: bool,
}

/// The per-degree group ratio statistic with a least-squares linear fit over
/// the included points.
#[derive(Debug, Clone, Serialize)]
pub struct RatioCurve {
    pub group_a: String,
    pub group_b: String,
    pub bucketing: Bucketing,
    pub points: Vec<RatioPoint>,
    pub fitted_slope: f64,
    pub fitted_intercept: f64,
}

impl RatioCurve {
    /// Two-column TSV (bucket midpoint, ratio) over included points, ready
    /// for external plotting.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for p in self.points.iter().filter(|p| p.included) {
            let _ = writeln!(out, "{}\t{}", p.midpoint, p.ratio.expect("included"));
        }
        out
    }
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    if points.is_empty() {
        return (0.0, 0.0);
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return (0.0, mean_y);
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    (slope, mean_y - slope * mean_x)
}

/// Count group-a and group-b labeled nodes per degree bucket and fit a line
/// to the ratios. Both groups must occur among the labeled nodes.
pub fn degree_ratio_curve(
    graph: &Graph,
    truth: &LabelTable,
    group_a: &str,
    group_b: &str,
    bucketing: Bucketing,
) -> Result<RatioCurve> {
    for group in [group_a, group_b] {
        if !truth.label_set().contains(group) {
            return Err(Error::GroupAbsent {
                label: group.to_string(),
            });
        }
    }

    let mut counts: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for (&node, label) in truth.labels() {
        let bucket = bucketing.bucket_of(graph.structural_degree(node));
        let entry = counts.entry(bucket).or_insert((0, 0));
        if label == group_a {
            entry.0 += 1;
        } else if label == group_b {
            entry.1 += 1;
        }
    }

    let points: Vec<RatioPoint> = counts
        .into_iter()
        .filter(|&(_, (n_a, n_b))| n_a + n_b > 0)
        .map(|((lo, hi), (n_a, n_b))| {
            let included = n_b > 0;
            RatioPoint {
                lo,
                hi,
                midpoint: midpoint(lo, hi),
                n_a,
                n_b,
                ratio: included.then(|| n_a as f64 / n_b as f64),
                included,
            }
        })
        .collect();

    let fit_points: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.included)
        .map(|p| (p.midpoint, p.ratio.expect("included")))
        .collect();
    let (fitted_slope, fitted_intercept) = least_squares(&fit_points);

    Ok(RatioCurve {
        group_a: group_a.to_string(),
        group_b: group_b.to_string(),
        bucketing,
        points,
        fitted_slope,
        fitted_intercept,
    })
}

/// Planned removal for one input-degree bucket.
#[derive(Debug, Clone, Serialize)]
pub struct BucketOutcome {
    pub lo: usize,
    pub hi: usize,
    pub midpoint: f64,
    pub target_ratio: f64,
    pub before_a: usize,
    pub before_b: usize,
    pub removed_a: usize,
    pub removed_b: usize,
    /// False when one group is absent from the bucket, so the target ratio
    /// cannot be reached; the removal rule then empties the bucket's
    /// remaining group (its rounded target count is zero).
    pub feasible: bool,
}

/// What the subsampler did, bucket by bucket (buckets of the input's degrees).
#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityReport {
    pub target_slope: f64,
    pub epsilon: f64,
    pub d_min: f64,
    pub buckets: Vec<BucketOutcome>,
    pub removed_nodes: usize,
    pub feasible_buckets: usize,
}

/// Result of [`subsample_to_slope`]: the induced subgraph on survivors, its
/// labels, the ratio curve recomputed on the output, and the removal report.
#[derive(Debug)]
pub struct SubsampleOutcome {
    pub graph: Graph,
    pub labels: LabelTable,
    pub achieved: RatioCurve,
    pub feasibility: FeasibilityReport,
}

fn round_count(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Remove `count` members chosen uniformly at random (partial Fisher-Yates).
fn pick_removals(members: &[NodeId], count: usize, rng: &mut ChaCha20Rng) -> Vec<NodeId> {
    let mut pool = members.to_vec();
    let count = count.min(pool.len());
    for i in 0..count {
        let j = rng.gen_range(i..pool.len());
        pool.swap(i, j);
    }
    pool.truncate(count);
    pool
}

/// Subsample labeled nodes per degree bucket so the ratio statistic follows
/// `max(epsilon, 1 + target_slope * (degree - d_min))`, removing nodes (never
/// adding) from whichever group is over-represented. Removed nodes take their
/// incident edges with them. In buckets where both groups are present the
/// kept count is clamped to >= 1 so the achieved ratio stays defined; buckets
/// missing one group are reported infeasible and the rounded target (zero)
/// empties them. It is an error if no bucket is feasible.
pub fn subsample_to_slope(
    graph: &Graph,
    truth: &LabelTable,
    group_a: &str,
    group_b: &str,
    target_slope: f64,
    seed: u64,
    bucketing: Bucketing,
) -> Result<SubsampleOutcome> {
    let curve = degree_ratio_curve(graph, truth, group_a, group_b, bucketing)?;
    let d_min = curve
        .points
        .iter()
        .map(|p| p.midpoint)
        .fold(f64::INFINITY, f64::min);

    // bucket -> group members, ascending node id
    let mut members: BTreeMap<(usize, usize), (Vec<NodeId>, Vec<NodeId>)> = BTreeMap::new();
    for (&node, label) in truth.labels() {
        let bucket = bucketing.bucket_of(graph.structural_degree(node));
        let entry = members.entry(bucket).or_default();
        if label == group_a {
            entry.0.push(node);
        } else if label == group_b {
            entry.1.push(node);
        }
    }

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut doomed: BTreeSet<NodeId> = BTreeSet::new();
    let mut buckets = Vec::new();
    for point in &curve.points {
        let (group_a_members, group_b_members) = &members[&(point.lo, point.hi)];
        let (n_a, n_b) = (group_a_members.len(), group_b_members.len());
        let target_ratio = RATIO_EPSILON.max(1.0 + target_slope * (point.midpoint - d_min));

        let mut outcome = BucketOutcome {
            lo: point.lo,
            hi: point.hi,
            midpoint: point.midpoint,
            target_ratio,
            before_a: n_a,
            before_b: n_b,
            removed_a: 0,
            removed_b: 0,
            feasible: n_a > 0 && n_b > 0,
        };
        if outcome.feasible {
            let current = n_a as f64 / n_b as f64;
            if current > target_ratio {
                // group a over-represented; keep at least one node
                let keep = round_count(target_ratio * n_b as f64).clamp(1, n_a);
                outcome.removed_a = n_a - keep;
                doomed.extend(pick_removals(group_a_members, outcome.removed_a, &mut rng));
            } else if current < target_ratio {
                let keep = round_count(n_a as f64 / target_ratio).clamp(1, n_b);
                outcome.removed_b = n_b - keep;
                doomed.extend(pick_removals(group_b_members, outcome.removed_b, &mut rng));
            }
        } else if n_a == 0 {
            // target count round(n_a / r) is zero: the bucket empties
            outcome.removed_b = n_b;
            doomed.extend(group_b_members.iter().copied());
        } else {
            outcome.removed_a = n_a;
            doomed.extend(group_a_members.iter().copied());
        }
        buckets.push(outcome);
    }

    let feasible_buckets = buckets.iter().filter(|b| b.feasible).count();
    if feasible_buckets == 0 {
        let mut diag = String::from("no bucket contains both groups:");
        for b in &buckets {
            let _ = write!(
                diag,
                " [{}..{}]=({},{})",
                b.lo, b.hi, b.before_a, b.before_b
            );
        }
        return Err(Error::InfeasibleTarget(diag));
    }

    let survivors: BTreeSet<NodeId> = (0..graph.node_count())
        .filter(|n| !doomed.contains(n))
        .collect();
    let subgraph = graph.induced_subgraph(&survivors);
    let sublabels = truth.restricted(graph, &subgraph);
    let achieved = degree_ratio_curve(&subgraph, &sublabels, group_a, group_b, bucketing)?;

    Ok(SubsampleOutcome {
        graph: subgraph,
        labels: sublabels,
        achieved,
        feasibility: FeasibilityReport {
            target_slope,
            epsilon: RATIO_EPSILON,
            d_min,
            buckets,
            removed_nodes: doomed.len(),
            feasible_buckets,
        },
    })
}
