//! Built-in networks used by the self-test, the sweeps and the examples.

use std::fmt;

use crate::network::{Cluster, SpinLevelNetwork, SpinNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Line,
    Star,
    Complete,
}

impl Topology {
    pub const ALL: [Topology; 3] = [Topology::Line, Topology::Star, Topology::Complete];

    pub fn edges(self, n: usize) -> Vec<(usize, usize)> {
        match self {
            Topology::Line => (1..n).map(|k| (k - 1, k)).collect(),
            Topology::Star => (1..n).map(|k| (0, k)).collect(),
            Topology::Complete => (0..n).flat_map(|j| ((j + 1)..n).map(move |k| (j, k))).collect(),
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Line => "line",
            Topology::Star => "star",
            Topology::Complete => "complete",
        })
    }
}

/// Integer partitions of `total`, parts in non-increasing order.
pub fn partitions(total: usize) -> Vec<Vec<usize>> {
    fn go(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            go(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, &mut Vec::new(), &mut out);
    out
}

/// Ising network with `γ_j = j + 1` and unit couplings on `topology`.
pub fn unit_network(sizes: &[usize], topology: Topology) -> SpinNetwork {
    let clusters = sizes.iter().enumerate().map(|(j, &n)| Cluster::new(n, j as f64 + 1.0)).collect();
    let edges: Vec<(usize, usize, f64)> = topology.edges(sizes.len()).into_iter().map(|(j, k)| (j, k, 1.0)).collect();
    SpinNetwork::ising(clusters, &edges).expect("catalog networks are valid")
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub network: SpinNetwork,
}

/// Every partition of `min_spins..=max_spins` total spins on line, star and
/// complete coupling graphs; graphs that coincide for few clusters appear
/// once.
pub fn sweep_catalog(min_spins: usize, max_spins: usize) -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = Vec::new();
    for total in min_spins..=max_spins {
        for sizes in partitions(total) {
            let mut seen: Vec<Vec<(usize, usize)>> = Vec::new();
            for topology in Topology::ALL {
                let edges = topology.edges(sizes.len());
                if seen.contains(&edges) {
                    continue;
                }
                seen.push(edges);
                let parts: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
                out.push(CatalogEntry {
                    name: format!("({}) {topology}", parts.join(",")),
                    network: unit_network(&sizes, topology),
                });
            }
        }
    }
    out
}

/// Four clusters of 2, 2, 3 and 1 spins coupled along 1-2, 2-3, 2-4, 3-4
/// (1-based), with distinct ratios 1..4.
pub fn four_cluster_network() -> SpinNetwork {
    four_cluster_with_sizes([2, 2, 3, 1])
}

/// The same coupling graph with smaller clusters, for oracle runs.
pub fn four_cluster_scaled() -> SpinNetwork {
    four_cluster_with_sizes([1, 1, 2, 1])
}

fn four_cluster_with_sizes(sizes: [usize; 4]) -> SpinNetwork {
    let clusters = sizes.iter().enumerate().map(|(j, &n)| Cluster::new(n, j as f64 + 1.0)).collect();
    SpinNetwork::ising(clusters, &[(0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)]).expect("valid network")
}

/// Two spins with ratio 1 coupled to a third spin with ratio 2, with
/// couplings `j13` and `j23`.
pub fn split_coupling_network(j13: f64, j23: f64) -> SpinLevelNetwork {
    SpinLevelNetwork::new(vec![1.0, 1.0, 2.0], [((0, 2), j13), ((1, 2), j23)]).expect("valid network")
}
