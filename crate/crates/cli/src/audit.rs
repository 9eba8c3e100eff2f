//! `clan audit`: the lost-information report for a finished run.

use anyhow::Result;

use clan_core::eval::{discarded_token_audit, AuditOptions};

use crate::common::{
    attributes_for_universe, to_pretty_json, universe_graph, write_outputs, CommunitiesFile,
};
use crate::AuditArgs;

pub fn run(args: &AuditArgs) -> Result<()> {
    let communities = CommunitiesFile::load(&args.out)?;
    let graph = universe_graph(&communities, None, false)?;
    let (_, attrs) = attributes_for_universe(&args.attrs, &graph)?;
    let assignment = communities.significant_final_assignment(&graph)?;

    let options = AuditOptions {
        hashtags_only: args.hashtags_only,
        ..AuditOptions::default()
    };
    let audit = discarded_token_audit(&attrs, &assignment, &options);
    write_outputs(&[(args.out.join("audit.json"), to_pretty_json(&audit)?)])
}
