//! `clan evaluate`: metric report plus agreement coloring for a finished run.

use anyhow::{bail, Result};

use clan_core::eval::{
    agreement_coloring, averaged_scores, discarded_token_audit, unlabeled_fraction, AuditOptions,
};
use clan_core::export::{agreement_dot, agreement_gexf};
use clan_core::load_labels;

use crate::common::{
    attributes_for_universe, to_pretty_json, universe_graph, write_outputs, CommunitiesFile,
    MetricReportJson,
};
use crate::{EvaluateArgs, Format};

pub fn run(args: &EvaluateArgs) -> Result<()> {
    let communities = CommunitiesFile::load(&args.out)?;
    if communities.node_count == 0 || communities.step1.is_empty() {
        bail!("communities.json describes an empty run");
    }
    let needs_edges = matches!(args.format, Format::Dot | Format::Gexf);
    if needs_edges && args.edges.is_none() {
        bail!("--edges is required for dot/gexf agreement exports");
    }
    let graph = universe_graph(&communities, args.edges.as_deref(), args.unweighted)?;
    let truth = load_labels(&args.labels, &graph)?;
    let assignment = communities.significant_final_assignment(&graph)?;

    let scores = averaged_scores(&assignment, &truth)?;
    let unlabeled_pct = unlabeled_fraction(communities.node_count, &assignment);

    let discarded = match &args.attrs {
        None => None,
        Some(path) => {
            let (_, attrs) = attributes_for_universe(path, &graph)?;
            Some(discarded_token_audit(
                &attrs,
                &assignment,
                &AuditOptions::default(),
            ))
        }
    };

    let report = MetricReportJson::new(&scores, unlabeled_pct, communities.q_final, discarded);
    let coloring = agreement_coloring(&assignment, &truth, &scores.matching);

    let mut files = vec![(args.out.join("report.json"), to_pretty_json(&report)?)];
    match args.format {
        Format::Json => {}
        Format::Dot => files.push((
            args.out.join("agreement.dot"),
            agreement_dot(&graph, &coloring),
        )),
        Format::Gexf => files.push((
            args.out.join("agreement.gexf"),
            agreement_gexf(&graph, &coloring),
        )),
        Format::Tsv => {
            let mut tsv = String::new();
            for (&node, agreement) in &coloring {
                let tag = match agreement {
                    clan_core::Agreement::Agree => "agree",
                    clan_core::Agreement::Disagree => "disagree",
                };
                tsv.push_str(&format!("{}\t{tag}\n", graph.external_id(node)));
            }
            files.push((args.out.join("agreement.tsv"), tsv));
        }
    }
    write_outputs(&files)
}
