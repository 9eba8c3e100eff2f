//! `clan skew`: for each target slope, subsample the labeled dataset, run
//! both methods on the result, and collate scores into a summary.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use clan_core::eval::{averaged_scores, discarded_token_audit, unlabeled_fraction, AuditOptions};
use clan_core::louvain::{louvain, modularity, LouvainConfig};
use clan_core::pipeline::{default_threshold, run_clan};
use clan_core::skew::{subsample_to_slope, Bucketing};
use clan_core::{
    attributes_jsonl_string, edge_list_string, labels_csv_string, load_labels,
    significant_assignment, AttributeTable, Graph, LabelTable,
};

use crate::common::{load_dataset, to_pretty_json, write_outputs, MetricReportJson};
use crate::SkewArgs;

#[derive(Serialize)]
struct MethodScores {
    avg_f1: f64,
    avg_jaccard: f64,
    unlabeled_pct: f64,
}

#[derive(Serialize)]
struct SkewCell {
    slope: f64,
    feasible: bool,
    error: Option<String>,
    node_count: Option<usize>,
    removed_nodes: Option<usize>,
    achieved_slope: Option<f64>,
    clan: Option<MethodScores>,
    louvain: Option<MethodScores>,
}

#[derive(Serialize)]
struct SkewSummary {
    seed: u64,
    threshold: usize,
    alpha: f64,
    bucketing: Bucketing,
    group_a: String,
    group_b: String,
    slopes: Vec<f64>,
    cells: Vec<SkewCell>,
}

pub fn run(args: &SkewArgs) -> Result<()> {
    let (graph, attrs) = load_dataset(&args.edges, Some(&args.attrs), args.unweighted)?;
    let attrs = attrs.expect("attrs loaded");
    let truth = load_labels(&args.labels, &graph)?;

    let groups: Vec<&String> = truth.label_set().iter().collect();
    if groups.len() != 2 {
        bail!(
            "skew requires exactly two ground-truth groups, found {}",
            groups.len()
        );
    }
    let (group_a, group_b) = (groups[0].clone(), groups[1].clone());
    let threshold = args
        .threshold
        .unwrap_or_else(|| default_threshold(graph.node_count()));
    if threshold < 1 {
        bail!("--threshold must be >= 1");
    }
    if args.alpha.is_nan() || args.alpha <= 0.0 {
        bail!("--alpha must be > 0");
    }
    let bucketing = Bucketing::Log2;

    let mut files: Vec<(PathBuf, String)> = Vec::new();
    let mut cells = Vec::new();
    for &slope in &args.slopes {
        match subsample_to_slope(
            &graph, &truth, &group_a, &group_b, slope, args.seed, bucketing,
        ) {
            Err(err) => cells.push(SkewCell {
                slope,
                feasible: false,
                error: Some(err.to_string()),
                node_count: None,
                removed_nodes: None,
                achieved_slope: None,
                clan: None,
                louvain: None,
            }),
            Ok(sub) => {
                let sub_attrs = attrs.restricted(&graph, &sub.graph);
                let dir = args.out.join(format!("slope_{slope:+.3}"));
                let cell = evaluate_cell(
                    &sub.graph,
                    &sub_attrs,
                    &sub.labels,
                    threshold,
                    args,
                    &dir,
                    &mut files,
                )
                .with_context(|| format!("slope {slope}"))?;

                files.push((dir.join("edges.tsv"), edge_list_string(&sub.graph)));
                files.push((
                    dir.join("attrs.jsonl"),
                    attributes_jsonl_string(&sub.graph, &sub_attrs),
                ));
                files.push((
                    dir.join("labels.csv"),
                    labels_csv_string(&sub.graph, &sub.labels),
                ));
                files.push((dir.join("curve.tsv"), sub.achieved.to_tsv()));
                cells.push(SkewCell {
                    slope,
                    feasible: true,
                    error: None,
                    node_count: Some(sub.graph.node_count()),
                    removed_nodes: Some(sub.feasibility.removed_nodes),
                    achieved_slope: Some(sub.achieved.fitted_slope),
                    clan: Some(cell.0),
                    louvain: Some(cell.1),
                });
            }
        }
    }

    let summary = SkewSummary {
        seed: args.seed,
        threshold,
        alpha: args.alpha,
        bucketing,
        group_a,
        group_b,
        slopes: args.slopes.clone(),
        cells,
    };
    files.push((args.out.join("summary.json"), to_pretty_json(&summary)?));
    write_outputs(&files)
}

/// Run both methods on one subsampled cell, pushing per-method report files.
#[allow(clippy::too_many_arguments)]
fn evaluate_cell(
    graph: &Graph,
    attrs: &AttributeTable,
    truth: &LabelTable,
    threshold: usize,
    args: &SkewArgs,
    dir: &std::path::Path,
    files: &mut Vec<(PathBuf, String)>,
) -> Result<(MethodScores, MethodScores)> {
    let config = LouvainConfig {
        seed: args.seed,
        ..LouvainConfig::default()
    };

    // two-step method: every node assigned
    let clan_result = run_clan(graph, attrs, threshold, &config, args.alpha)?;
    let clan_assignment =
        significant_assignment(&clan_result.final_partition, &clan_result.split.significant);
    let clan_scores = averaged_scores(&clan_assignment, truth)?;
    let clan_unlabeled = unlabeled_fraction(graph.node_count(), &clan_assignment);
    let clan_report = MetricReportJson::new(
        &clan_scores,
        clan_unlabeled,
        modularity(graph, &clan_result.final_partition)?,
        Some(discarded_token_audit(
            attrs,
            &clan_assignment,
            &AuditOptions::default(),
        )),
    );
    files.push((
        dir.join("clan").join("report.json"),
        to_pretty_json(&clan_report)?,
    ));

    // modularity-only: sub-threshold communities stay unassigned
    let step1 = louvain(graph, &config)?;
    let significant: std::collections::BTreeSet<usize> = step1
        .sizes()
        .iter()
        .enumerate()
        .filter(|&(_, &size)| size > threshold)
        .map(|(cid, _)| cid)
        .collect();
    let louvain_assignment = significant_assignment(&step1, &significant);
    let louvain_scores = averaged_scores(&louvain_assignment, truth)?;
    let louvain_unlabeled = unlabeled_fraction(graph.node_count(), &louvain_assignment);
    let louvain_report = MetricReportJson::new(
        &louvain_scores,
        louvain_unlabeled,
        modularity(graph, &step1)?,
        Some(discarded_token_audit(
            attrs,
            &louvain_assignment,
            &AuditOptions::default(),
        )),
    );
    files.push((
        dir.join("louvain").join("report.json"),
        to_pretty_json(&louvain_report)?,
    ));

    Ok((
        MethodScores {
            avg_f1: clan_scores.avg_f1,
            avg_jaccard: clan_scores.avg_jaccard,
            unlabeled_pct: clan_unlabeled,
        },
        MethodScores {
            avg_f1: louvain_scores.avg_f1,
            avg_jaccard: louvain_scores.avg_jaccard,
            unlabeled_pct: louvain_unlabeled,
        },
    ))
}
