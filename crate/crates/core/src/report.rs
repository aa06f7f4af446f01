//! Classification reports and their text and JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cg::{enumerate_subspaces, SubspaceSelection};
use crate::classify::{associated_graph, connected_components, predict_descriptor, AlgebraBlock};
use crate::error::Result;
use crate::network::SpinNetwork;
use crate::oracle::Verification;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Block of the predicted algebra with 1-based cluster indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportBlock {
    pub kind: String,
    pub clusters: Vec<usize>,
    pub space_dim: usize,
    pub algebra_dim: usize,
    pub description: String,
}

impl From<&AlgebraBlock> for ReportBlock {
    fn from(b: &AlgebraBlock) -> Self {
        let kind = match b {
            AlgebraBlock::SpinIrrep { .. } => "spin_irrep",
            AlgebraBlock::FullSu { .. } => "full_su",
        };
        ReportBlock {
            kind: kind.to_string(),
            clusters: b.clusters().iter().map(|j| j + 1).collect(),
            space_dim: b.space_dim(),
            algebra_dim: b.algebra_dim(),
            description: b.describe(),
        }
    }
}

/// One invariant subspace; every index is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceRecord {
    pub name: String,
    pub labels: Vec<usize>,
    pub copies: Vec<usize>,
    /// Number of subspaces sharing these labels.
    pub multiplicity: usize,
    pub subspace_dim: usize,
    pub nodes: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    pub components: Vec<Vec<usize>>,
    pub blocks: Vec<ReportBlock>,
    pub controllable: bool,
    pub predicted_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
}

impl SubspaceRecord {
    pub fn selection(&self) -> SubspaceSelection {
        SubspaceSelection { labels: self.labels.clone(), copies: self.copies.clone() }
    }

    pub fn attach(&mut self, v: &Verification) {
        self.measured_dim = Some(v.measured_traceless_dim);
        self.block_dims = Some(v.block_dims.clone());
        self.matches = Some(v.matches);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSummary {
    pub sizes: Vec<usize>,
    pub gammas: Vec<f64>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportSummary {
    pub subspaces: usize,
    pub controllable_subspaces: usize,
    /// Every listed subspace is controllable.
    pub subspace_controllable: bool,
    pub full_dim: usize,
    /// `Σ D^S` over every copy of every invariant subspace.
    pub dimension_sum: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatches: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationReport {
    pub schema_version: u32,
    pub network: NetworkSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub records: Vec<SubspaceRecord>,
    pub summary: ReportSummary,
}

/// Classifies `selections`, or every distinct label tuple when `None`.
pub fn classify_network(net: &SpinNetwork, selections: Option<Vec<SubspaceSelection>>) -> Result<ClassificationReport> {
    let selections = selections.unwrap_or_else(|| enumerate_subspaces(net, true));
    let records = selections.iter().map(|s| record(net, s)).collect::<Result<Vec<_>>>()?;
    let dimension_sum = enumerate_subspaces(net, false).iter().map(SubspaceSelection::dim).sum();
    let mut report = ClassificationReport {
        schema_version: SCHEMA_VERSION,
        network: NetworkSummary {
            sizes: net.sizes(),
            gammas: net.gammas(),
            edges: net.edges().into_iter().map(|(j, k)| [j + 1, k + 1]).collect(),
        },
        tol: None,
        records,
        summary: ReportSummary {
            subspaces: 0,
            controllable_subspaces: 0,
            subspace_controllable: false,
            full_dim: net.full_dim(),
            dimension_sum,
            verified: None,
            mismatches: None,
        },
    };
    report.refresh_summary();
    Ok(report)
}

fn record(net: &SpinNetwork, selection: &SubspaceSelection) -> Result<SubspaceRecord> {
    let descriptor = predict_descriptor(selection, net)?;
    let graph = associated_graph(selection, net);
    let components = connected_components(&graph);
    Ok(SubspaceRecord {
        name: selection.to_string(),
        labels: selection.labels.clone(),
        copies: selection.copies.clone(),
        multiplicity: selection.label_multiplicity(net)?,
        subspace_dim: selection.dim(),
        nodes: graph.nodes.iter().map(|j| j + 1).collect(),
        edges: graph.edges.iter().map(|&(j, k)| [j + 1, k + 1]).collect(),
        components: components.iter().map(|c| c.iter().map(|j| j + 1).collect()).collect(),
        blocks: descriptor.blocks.iter().map(ReportBlock::from).collect(),
        controllable: descriptor.controllable,
        predicted_dim: descriptor.total_algebra_dim,
        measured_dim: None,
        block_dims: None,
        matches: None,
    })
}

impl ClassificationReport {
    /// Recomputes the summary counts from the records.
    pub fn refresh_summary(&mut self) {
        let s = &mut self.summary;
        s.subspaces = self.records.len();
        s.controllable_subspaces = self.records.iter().filter(|r| r.controllable).count();
        s.subspace_controllable = self.records.iter().all(|r| r.controllable);
        let verified: Vec<bool> = self.records.iter().filter_map(|r| r.matches).collect();
        if verified.is_empty() {
            s.verified = None;
            s.mismatches = None;
        } else {
            s.verified = Some(verified.len());
            s.mismatches = Some(verified.iter().filter(|m| !**m).count());
        }
    }

    pub fn all_match(&self) -> bool {
        self.summary.mismatches == Some(0)
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut out = serde_json::to_string_pretty(self).expect("reports serialize");
                out.push('\n');
                out
            }
            Format::Text => self.to_text(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn to_text(&self) -> String {
        let mut out = String::new();
        let n = &self.network;
        let edges: Vec<String> = n.edges.iter().map(|[j, k]| format!("{j}-{k}")).collect();
        let _ = writeln!(
            out,
            "clusters {}  gammas {}  edges {}",
            join(&n.sizes),
            join(&n.gammas),
            if edges.is_empty() { "none".to_string() } else { edges.join(" ") }
        );
        let verified = self.records.iter().any(|r| r.matches.is_some());
        let mut rows = vec![{
            let mut h = vec!["subspace", "D^S", "mult", "components", "algebra", "dim", "controllable"];
            if verified {
                h.extend(["measured", "match"]);
            }
            h.into_iter().map(String::from).collect::<Vec<_>>()
        }];
        for r in &self.records {
            let comps: Vec<String> = r.components.iter().map(|c| format!("{{{}}}", join(c))).collect();
            let algebra: Vec<&str> = r.blocks.iter().map(|b| b.description.as_str()).collect();
            let mut row = vec![
                r.name.clone(),
                r.subspace_dim.to_string(),
                r.multiplicity.to_string(),
                if comps.is_empty() { "-".into() } else { comps.join(" ") },
                if algebra.is_empty() { "0".into() } else { algebra.join(" + ") },
                r.predicted_dim.to_string(),
                yes_no(r.controllable).into(),
            ];
            if verified {
                row.push(r.measured_dim.map_or("-".into(), |d| d.to_string()));
                row.push(r.matches.map_or("-", |m| if m { "ok" } else { "MISMATCH" }).into());
            }
            rows.push(row);
        }
        let widths: Vec<usize> =
            (0..rows[0].len()).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
        for row in &rows {
            let cells: Vec<String> = row.iter().zip(&widths).map(|(cell, &w)| format!("{cell:<w$}")).collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} subspaces, {} controllable; {}",
            s.subspaces,
            s.controllable_subspaces,
            if s.subspace_controllable { "subspace controllable" } else { "not subspace controllable" }
        );
        let _ = writeln!(out, "dimension sum {} over all copies, full space {}", s.dimension_sum, s.full_dim);
        if let (Some(v), Some(m)) = (s.verified, s.mismatches) {
            let _ = writeln!(out, "verified {v}, mismatches {m}");
        }
        out
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::four_cluster_network;

    #[test]
    fn four_cluster_report() {
        let report = classify_network(&four_cluster_network(), None).unwrap();
        assert_eq!(report.records.len(), 8);
        assert_eq!(report.summary.dimension_sum, 256);
        let cut = report.records.iter().find(|r| r.labels == vec![2, 0, 3, 1]).unwrap();
        assert!(!cut.controllable);
        assert_eq!(cut.components, vec![vec![1], vec![3, 4]]);
        assert_eq!(cut.blocks[1].clusters, vec![3, 4]);
        assert!(report.emit(Format::Text).contains("T_{2,0,3,1}"));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let report = classify_network(&four_cluster_network(), None).unwrap();
        let json = report.emit(Format::Json);
        let back = ClassificationReport::from_json(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.emit(Format::Json), json);
    }

    #[test]
    fn summary_tracks_verification() {
        let mut report = classify_network(&four_cluster_network(), None).unwrap();
        assert!(!report.all_match());
        for r in &mut report.records {
            r.matches = Some(true);
        }
        report.records[0].matches = Some(false);
        report.refresh_summary();
        assert_eq!(report.summary.mismatches, Some(1));
        assert!(report.emit(Format::Text).contains("MISMATCH"));
    }
}
