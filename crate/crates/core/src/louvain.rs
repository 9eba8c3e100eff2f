//! Newman–Girvan modularity and the greedy two-phase Louvain optimizer.
//!
//! The objective is the standard weighted modularity without a resolution
//! parameter: Q = sum over communities of L_c/m - (d_c/2m)^2, where m is the
//! total edge weight, L_c the intra-community weight, and d_c the community
//! degree sum. The optimizer alternates a local-move phase (each node greedily
//! joins the neighboring community with the best positive gain) with graph
//! aggregation (communities collapse into super-nodes, intra weight becomes a
//! self-loop), until a level yields no move.
//!
//! Everything here is deterministic by default: nodes are visited in ascending
//! id order, gain ties break toward the lowest community id, and the final
//! partition is normalized so community 0 is the largest.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::graph::{CommunityId, Graph, GraphBuilder, NodeId, Partition};

/// Tuning knobs for [`louvain`]. The defaults favor reproducibility.
#[derive(Debug, Clone)]
pub struct LouvainConfig {
    pub seed: u64,
    /// Minimum modularity gain for a node move to be accepted.
    pub min_gain: f64,
    pub max_levels: usize,
    /// Visit nodes in ascending id order; when false, a seeded shuffle is
    /// drawn per pass.
    pub deterministic_order: bool,
}

impl Default for LouvainConfig {
    fn default() -> Self {
        LouvainConfig {
            seed: 42,
            min_gain: 1e-7,
            max_levels: 32,
            deterministic_order: true,
        }
    }
}

impl LouvainConfig {
    fn validate(&self) -> Result<()> {
        if self.max_levels < 1 {
            return Err(Error::InvalidConfig("max_levels must be >= 1".into()));
        }
        if self.min_gain.is_nan() || self.min_gain < 0.0 {
            return Err(Error::InvalidConfig("min_gain must be >= 0".into()));
        }
        Ok(())
    }
}

/// Modularity Q of a partition; requires at least one edge.
pub fn modularity(graph: &Graph, partition: &Partition) -> Result<f64> {
    if graph.edge_count() == 0 || graph.total_weight_2m() <= 0.0 {
        return Err(Error::ModularityUndefined);
    }
    if partition.node_count() != graph.node_count() {
        return Err(Error::PartitionMismatch {
            got: partition.node_count(),
            expected: graph.node_count(),
        });
    }
    let two_m = graph.total_weight_2m();
    let m = two_m / 2.0;
    let n_comm = partition.sizes().len();
    let mut intra = vec![0.0f64; n_comm];
    let mut degree_sum = vec![0.0f64; n_comm];
    for &(u, v, w) in graph.edges() {
        if partition.community_of(u) == partition.community_of(v) {
            intra[partition.community_of(u)] += w;
        }
    }
    for node in 0..graph.node_count() {
        degree_sum[partition.community_of(node)] += graph.degree(node);
    }
    let mut q = 0.0;
    for c in 0..n_comm {
        let frac = degree_sum[c] / two_m;
        q += intra[c] / m - frac * frac;
    }
    Ok(q)
}

/// One full local-move phase: sweep nodes until a pass makes no move with gain
/// above `config.min_gain`. Returns the (possibly sparse-id) partition and
/// whether any node moved. The result's Q is never below the input's.
pub fn local_move_phase(
    graph: &Graph,
    partition: &Partition,
    config: &LouvainConfig,
) -> Result<(Partition, bool)> {
    let (partition, improved, _) = local_move_traced(graph, partition, config, false)?;
    Ok((partition, improved))
}

/// Local-move phase that optionally records Q after the initial state and
/// after every pass (used by the monotonicity checks).
fn local_move_traced(
    graph: &Graph,
    partition: &Partition,
    config: &LouvainConfig,
    trace_q: bool,
) -> Result<(Partition, bool, Vec<f64>)> {
    if graph.edge_count() == 0 {
        return Err(Error::ModularityUndefined);
    }
    if partition.node_count() != graph.node_count() {
        return Err(Error::PartitionMismatch {
            got: partition.node_count(),
            expected: graph.node_count(),
        });
    }
    config.validate()?;

    let n = graph.node_count();
    let two_m = graph.total_weight_2m();
    let m = two_m / 2.0;
    let degrees: Vec<f64> = (0..n).map(|u| graph.degree(u)).collect();

    let mut comm: Vec<CommunityId> = partition.assignment().to_vec();
    let n_comm = partition.sizes().len();
    let mut sigma_tot = vec![0.0f64; n_comm];
    for u in 0..n {
        sigma_tot[comm[u]] += degrees[u];
    }

    // Sparse accumulator of node->community edge weights, reset per node.
    let mut acc = vec![0.0f64; n_comm];
    let mut touched: Vec<CommunityId> = Vec::new();

    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let mut order: Vec<NodeId> = (0..n).collect();

    let mut q_trace = Vec::new();
    if trace_q {
        q_trace.push(modularity(
            graph,
            &Partition::from_assignment(comm.clone()),
        )?);
    }

    let mut moved_any = false;
    loop {
        if !config.deterministic_order {
            order.shuffle(&mut rng);
        }
        let mut moved_this_pass = false;
        for &u in &order {
            let cu = comm[u];
            sigma_tot[cu] -= degrees[u];

            touched.clear();
            for &(v, w) in graph.neighbors(u) {
                if v == u {
                    continue; // self-loops move with the node; they cancel in gains
                }
                let cv = comm[v];
                if acc[cv] == 0.0 {
                    touched.push(cv);
                }
                acc[cv] += w;
            }
            touched.sort_unstable();

            let gain_of = |c: CommunityId, k_in: f64| -> f64 {
                k_in / m - sigma_tot[c] * degrees[u] / (2.0 * m * m)
            };
            let base = gain_of(cu, acc.get(cu).copied().unwrap_or(0.0));
            let mut best_comm = cu;
            let mut best_gain = base;
            for &c in &touched {
                if c == cu {
                    continue;
                }
                let gain = gain_of(c, acc[c]);
                if gain > best_gain {
                    best_gain = gain;
                    best_comm = c;
                }
            }

            if best_comm != cu && best_gain - base > config.min_gain {
                comm[u] = best_comm;
                sigma_tot[best_comm] += degrees[u];
                moved_this_pass = true;
                moved_any = true;
            } else {
                sigma_tot[cu] += degrees[u];
            }

            for &c in &touched {
                acc[c] = 0.0;
            }
        }
        if trace_q {
            q_trace.push(modularity(
                graph,
                &Partition::from_assignment(comm.clone()),
            )?);
        }
        if !moved_this_pass {
            break;
        }
    }

    Ok((Partition::from_assignment(comm), moved_any, q_trace))
}

/// Collapse communities into super-nodes. Inter-community weights sum into a
/// single edge; intra-community weight (including existing self-loops) becomes
/// a self-loop of equal total weight, so modularity is preserved exactly.
/// Returns the aggregated graph and the community-id → new-node-id mapping.
pub fn aggregate_graph(
    graph: &Graph,
    partition: &Partition,
) -> (Graph, BTreeMap<CommunityId, NodeId>) {
    let mut mapping: BTreeMap<CommunityId, NodeId> = BTreeMap::new();
    for (cid, members) in partition.communities() {
        if !members.is_empty() {
            let next = mapping.len();
            mapping.insert(cid, next);
        }
    }

    let mut builder = GraphBuilder::new();
    let names: Vec<String> = (0..mapping.len()).map(|i| i.to_string()).collect();
    for name in &names {
        builder.ensure_node(name);
    }
    for &(u, v, w) in graph.edges() {
        let cu = mapping[&partition.community_of(u)];
        let cv = mapping[&partition.community_of(v)];
        builder.add_edge(&names[cu], &names[cv], w);
    }
    (builder.build(), mapping)
}

/// Per-level record of the optimizer's progress, for monotonicity checks.
#[derive(Debug, Clone)]
pub struct LevelTrace {
    pub node_count: usize,
    /// Q after the initial singleton state and after each local-move pass.
    pub q_passes: Vec<f64>,
    /// Q of the aggregated graph under its singleton partition; equals the
    /// last entry of `q_passes` up to floating-point error.
    pub q_aggregated: f64,
}

#[derive(Debug, Clone, Default)]
pub struct LouvainTrace {
    pub levels: Vec<LevelTrace>,
}

impl LouvainTrace {
    /// Q of the final partition (last recorded value).
    pub fn final_q(&self) -> Option<f64> {
        self.levels.last().and_then(|l| l.q_passes.last().copied())
    }
}

/// Full Louvain: alternate local moves and aggregation until no improvement
/// or `max_levels`. The result is over original node ids, normalized to
/// contiguous community ids in decreasing-size order.
pub fn louvain(graph: &Graph, config: &LouvainConfig) -> Result<Partition> {
    louvain_with_trace(graph, config).map(|(p, _)| p)
}

/// [`louvain`] plus the per-level Q trace.
pub fn louvain_with_trace(
    graph: &Graph,
    config: &LouvainConfig,
) -> Result<(Partition, LouvainTrace)> {
    if graph.edge_count() == 0 {
        return Err(Error::ModularityUndefined);
    }
    config.validate()?;

    let mut level_graph = graph.clone();
    let mut chain: Vec<Vec<NodeId>> = Vec::new();
    let mut trace = LouvainTrace::default();

    for _level in 0..config.max_levels {
        let start = Partition::singletons(level_graph.node_count());
        let (moved, improved, q_passes) = local_move_traced(&level_graph, &start, config, true)?;

        if !improved {
            trace.levels.push(LevelTrace {
                node_count: level_graph.node_count(),
                q_aggregated: *q_passes.last().expect("trace non-empty"),
                q_passes,
            });
            break;
        }

        let (aggregated, mapping) = aggregate_graph(&level_graph, &moved);
        let q_aggregated =
            modularity(&aggregated, &Partition::singletons(aggregated.node_count()))?;
        trace.levels.push(LevelTrace {
            node_count: level_graph.node_count(),
            q_passes,
            q_aggregated,
        });

        let projection: Vec<NodeId> = (0..level_graph.node_count())
            .map(|u| mapping[&moved.community_of(u)])
            .collect();
        chain.push(projection);

        let shrunk = aggregated.node_count() < level_graph.node_count();
        level_graph = aggregated;
        if !shrunk {
            break;
        }
    }

    let mut assignment: Vec<CommunityId> = (0..graph.node_count()).collect();
    for level_map in &chain {
        for slot in assignment.iter_mut() {
            *slot = level_map[*slot];
        }
    }
    let partition = Partition::from_assignment(assignment).normalized();
    Ok((partition, trace))
}
