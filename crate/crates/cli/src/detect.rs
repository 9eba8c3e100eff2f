//! `clan detect`: run one of the two methods and persist the assignments.

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};

use clan_core::export::{community_dot, community_gexf};
use clan_core::louvain::{louvain, modularity, LouvainConfig};
use clan_core::pipeline::{default_threshold, run_clan};
use clan_core::{Graph, Partition};

use crate::common::{
    load_dataset, to_pretty_json, write_outputs, CommunitiesFile, ReassignedEntry,
};
use crate::{DetectArgs, Format, Method};

pub fn run(args: &DetectArgs) -> Result<()> {
    let (graph, attrs) = load_dataset(&args.edges, args.attrs.as_deref(), args.unweighted)?;
    let threshold = args
        .threshold
        .unwrap_or_else(|| default_threshold(graph.node_count()));
    if threshold < 1 {
        bail!("--threshold must be >= 1");
    }
    if args.alpha.is_nan() || args.alpha <= 0.0 {
        bail!("--alpha must be > 0");
    }
    let config = LouvainConfig {
        seed: args.seed,
        ..LouvainConfig::default()
    };

    let communities = match args.method {
        Method::Louvain => {
            let step1 = louvain(&graph, &config)?;
            let q = modularity(&graph, &step1)?;
            // sub-threshold communities stay in the file but are not significant
            let significant: Vec<usize> = step1
                .sizes()
                .iter()
                .enumerate()
                .filter(|&(_, &size)| size > threshold)
                .map(|(cid, _)| cid)
                .collect();
            CommunitiesFile {
                method: args.method.name().to_string(),
                seed: args.seed,
                threshold,
                alpha: args.alpha,
                unweighted: args.unweighted,
                node_count: graph.node_count(),
                q_step1: q,
                q_final: q,
                significant,
                step1: assignment_by_external(&graph, &step1),
                final_assignment: assignment_by_external(&graph, &step1),
                reassigned: BTreeMap::new(),
            }
        }
        Method::Clan => {
            let attrs = match &attrs {
                Some(attrs) => attrs,
                None => bail!("--attrs is required when --method clan"),
            };
            let result = run_clan(&graph, attrs, threshold, &config, args.alpha)?;
            let q_step1 = modularity(&graph, &result.step1_partition)?;
            let q_final = modularity(&graph, &result.final_partition)?;
            let reassigned = result
                .reassigned
                .iter()
                .map(|(&node, r)| {
                    (
                        graph.external_id(node).to_string(),
                        ReassignedEntry {
                            from: r.from,
                            to: r.to,
                            posterior: r.posterior,
                        },
                    )
                })
                .collect();
            CommunitiesFile {
                method: args.method.name().to_string(),
                seed: args.seed,
                threshold,
                alpha: args.alpha,
                unweighted: args.unweighted,
                node_count: graph.node_count(),
                q_step1,
                q_final,
                significant: result.split.significant.iter().copied().collect(),
                step1: assignment_by_external(&graph, &result.step1_partition),
                final_assignment: assignment_by_external(&graph, &result.final_partition),
                reassigned,
            }
        }
    };

    let report = serde_json::json!({
        "q_step1": communities.q_step1,
        "q_final": communities.q_final,
        "config": {
            "command": "detect",
            "edges": args.edges.display().to_string(),
            "attrs": args.attrs.as_ref().map(|p| p.display().to_string()),
            "threshold": threshold,
            "alpha": args.alpha,
            "seed": args.seed,
            "method": args.method.name(),
            "format": format!("{:?}", args.format).to_lowercase(),
            "unweighted": args.unweighted,
        },
    });

    let mut files = vec![
        (
            args.out.join("communities.json"),
            to_pretty_json(&communities)?,
        ),
        (args.out.join("report.json"), to_pretty_json(&report)?),
    ];
    let final_partition = partition_from_file(&graph, &communities)?;
    match args.format {
        Format::Json => {}
        Format::Dot => files.push((
            args.out.join("graph.dot"),
            community_dot(&graph, &final_partition),
        )),
        Format::Gexf => files.push((
            args.out.join("graph.gexf"),
            community_gexf(&graph, &final_partition),
        )),
        Format::Tsv => files.push((
            args.out.join("communities.tsv"),
            communities_tsv(&communities),
        )),
    }
    write_outputs(&files)
}

fn assignment_by_external(graph: &Graph, partition: &Partition) -> BTreeMap<String, usize> {
    (0..graph.node_count())
        .map(|node| {
            (
                graph.external_id(node).to_string(),
                partition.community_of(node),
            )
        })
        .collect()
}

fn partition_from_file(graph: &Graph, file: &CommunitiesFile) -> Result<Partition> {
    let mut assignment = vec![0usize; graph.node_count()];
    for (external, &community) in &file.final_assignment {
        let node = graph
            .node_id(external)
            .context("assignment references unknown node")?;
        assignment[node] = community;
    }
    Ok(Partition::from_assignment(assignment))
}

fn communities_tsv(file: &CommunitiesFile) -> String {
    let mut out = String::new();
    for (external, community) in &file.final_assignment {
        let step1 = file.step1[external];
        out.push_str(&format!("{external}\t{step1}\t{community}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use clan_core::pipeline::split_by_threshold;

    // louvain-mode significance must agree with split_by_threshold
    // whenever the latter succeeds
    #[test]
    fn louvain_significance_matches_split_semantics() {
        let p = Partition::from_assignment(vec![0, 0, 0, 1, 1, 2]);
        let split = split_by_threshold(&p, 2).unwrap();
        let direct: Vec<usize> = p
            .sizes()
            .iter()
            .enumerate()
            .filter(|&(_, &size)| size > 2)
            .map(|(cid, _)| cid)
            .collect();
        assert_eq!(
            direct,
            split.significant.iter().copied().collect::<Vec<_>>()
        );
    }
}
