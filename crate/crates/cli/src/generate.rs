//! `clan generate`: write an attributed block-model dataset to disk.

use std::fs;

use anyhow::{Context, Result};

use clan_core::sbm::{generate_attributed_sbm, SbmSpec};
use clan_core::{attributes_jsonl_string, edge_list_string, labels_csv_string};

use crate::common::{to_pretty_json, write_outputs};
use crate::GenerateArgs;

pub fn run(args: &GenerateArgs) -> Result<()> {
    let text = fs::read_to_string(&args.spec)
        .with_context(|| format!("cannot read {}", args.spec.display()))?;
    let spec: SbmSpec = serde_json::from_str(&text)
        .with_context(|| format!("invalid spec {}", args.spec.display()))?;
    let (graph, attrs, labels) = generate_attributed_sbm(&spec)?;

    write_outputs(&[
        (args.out.join("edges.tsv"), edge_list_string(&graph)),
        (
            args.out.join("attrs.jsonl"),
            attributes_jsonl_string(&graph, &attrs),
        ),
        (
            args.out.join("labels.csv"),
            labels_csv_string(&graph, &labels),
        ),
        (args.out.join("spec-echo.json"), to_pretty_json(&spec)?),
    ])
}
