//! Associated graphs and the predicted subspace dynamical Lie algebra.
//!
//! The associated graph of `F_1 ⊗ … ⊗ F_N` is the connectivity graph with
//! every cluster carrying `V^0` removed. Each connected component contributes
//! one direct summand: the spin-`f/2` irrep of su(2) (dimension 3) for an
//! isolated node, or the full `su(D_h)` with `D_h = Π (f_j + 1)` otherwise.
//! The subspace is controllable exactly when the graph is connected and has
//! at least two nodes.

use serde::{Deserialize, Serialize};

use crate::cg::SubspaceSelection;
use crate::error::Result;
use crate::network::SpinNetwork;

/// Nodes and edges are 0-based cluster indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociatedGraph {
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

pub fn associated_graph(selection: &SubspaceSelection, net: &SpinNetwork) -> AssociatedGraph {
    let nodes: Vec<usize> = selection.labels.iter().enumerate().filter(|(_, &f)| f != 0).map(|(j, _)| j).collect();
    let edges = net.edges().into_iter().filter(|(j, k)| nodes.contains(j) && nodes.contains(k)).collect();
    AssociatedGraph { nodes, edges }
}

/// Connected components, each sorted, ordered by smallest node.
pub fn connected_components(graph: &AssociatedGraph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; graph.nodes.len()];
    let position = |node: usize| graph.nodes.iter().position(|&n| n == node);
    let mut components = Vec::new();
    for start in 0..graph.nodes.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut component = Vec::new();
        while let Some(i) = stack.pop() {
            let node = graph.nodes[i];
            component.push(node);
            for &(a, b) in &graph.edges {
                let other = if a == node {
                    b
                } else if b == node {
                    a
                } else {
                    continue;
                };
                if let Some(p) = position(other) {
                    if !seen[p] {
                        seen[p] = true;
                        stack.push(p);
                    }
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components.sort_by_key(|c| c[0]);
    components
}

/// One direct summand of the subspace dynamical Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraBlock {
    /// The `(f+1)`-dimensional irreducible representation of su(2) on a
    /// single cluster.
    SpinIrrep { cluster: usize, f: usize },
    /// `su(D_h)` on the tensor product of the component's factors.
    FullSu { clusters: Vec<usize>, space_dim: usize },
}

impl AlgebraBlock {
    pub fn space_dim(&self) -> usize {
        match self {
            AlgebraBlock::SpinIrrep { f, .. } => f + 1,
            AlgebraBlock::FullSu { space_dim, .. } => *space_dim,
        }
    }

    pub fn algebra_dim(&self) -> usize {
        match self {
            AlgebraBlock::SpinIrrep { .. } => 3,
            AlgebraBlock::FullSu { space_dim, .. } => space_dim * space_dim - 1,
        }
    }

    pub fn clusters(&self) -> Vec<usize> {
        match self {
            AlgebraBlock::SpinIrrep { cluster, .. } => vec![*cluster],
            AlgebraBlock::FullSu { clusters, .. } => clusters.clone(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            AlgebraBlock::SpinIrrep { f, .. } => format!("su(2) irrep on dim {}", f + 1),
            AlgebraBlock::FullSu { space_dim, .. } => format!("su({space_dim})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieAlgebraDescriptor {
    pub blocks: Vec<AlgebraBlock>,
    pub total_algebra_dim: usize,
    pub controllable: bool,
}

impl LieAlgebraDescriptor {
    pub fn describe(&self) -> String {
        if self.blocks.is_empty() {
            return "0".to_string();
        }
        self.blocks.iter().map(AlgebraBlock::describe).collect::<Vec<_>>().join(" ⊕ ")
    }
}

/// Predicted algebra from the associated graph alone. Requires nonzero,
/// pairwise distinct gyromagnetic ratios.
pub fn predict_descriptor(selection: &SubspaceSelection, net: &SpinNetwork) -> Result<LieAlgebraDescriptor> {
    net.require_distinct_gammas()?;
    selection.validate(net)?;
    let graph = associated_graph(selection, net);
    let components = connected_components(&graph);
    let blocks: Vec<AlgebraBlock> = components
        .iter()
        .map(|comp| match comp.as_slice() {
            [single] => AlgebraBlock::SpinIrrep { cluster: *single, f: selection.labels[*single] },
            many => AlgebraBlock::FullSu {
                clusters: many.to_vec(),
                space_dim: many.iter().map(|&j| selection.labels[j] + 1).product(),
            },
        })
        .collect();
    let total_algebra_dim = blocks.iter().map(AlgebraBlock::algebra_dim).sum();
    let controllable = components.len() == 1 && graph.nodes.len() >= 2;
    Ok(LieAlgebraDescriptor { blocks, total_algebra_dim, controllable })
}

pub fn is_subspace_controllable(selection: &SubspaceSelection, net: &SpinNetwork) -> Result<bool> {
    Ok(predict_descriptor(selection, net)?.controllable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::network::Cluster;
    use proptest::prelude::*;

    fn four_cluster() -> SpinNetwork {
        SpinNetwork::ising(
            vec![Cluster::new(2, 1.0), Cluster::new(2, 2.0), Cluster::new(3, 3.0), Cluster::new(1, 4.0)],
            &[(0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)],
        )
        .unwrap()
    }

    fn sel(labels: &[usize]) -> SubspaceSelection {
        SubspaceSelection::first_copy(labels.to_vec())
    }

    #[test]
    fn graphs_of_the_four_cluster_network() {
        let net = four_cluster();
        let full = associated_graph(&sel(&[2, 2, 3, 1]), &net);
        assert_eq!(full.nodes, vec![0, 1, 2, 3]);
        assert_eq!(full.edges, net.edges());
        assert_eq!(connected_components(&full).len(), 1);

        let cut = associated_graph(&sel(&[2, 0, 3, 1]), &net);
        assert_eq!(cut.nodes, vec![0, 2, 3]);
        assert_eq!(connected_components(&cut), vec![vec![0], vec![2, 3]]);

        let empty = associated_graph(&sel(&[0, 0, 1, 1]), &net);
        assert_eq!(connected_components(&empty), vec![vec![2, 3]]);
        let none = AssociatedGraph { nodes: vec![], edges: vec![] };
        assert!(connected_components(&none).is_empty());
    }

    #[test]
    fn predictions() {
        let net = four_cluster();
        let d = predict_descriptor(&sel(&[2, 0, 3, 1]), &net).unwrap();
        assert_eq!(
            d.blocks,
            vec![
                AlgebraBlock::SpinIrrep { cluster: 0, f: 2 },
                AlgebraBlock::FullSu { clusters: vec![2, 3], space_dim: 8 },
            ]
        );
        assert_eq!(d.total_algebra_dim, 3 + 63);
        assert!(!d.controllable);

        let d = predict_descriptor(&sel(&[2, 2, 3, 1]), &net).unwrap();
        assert_eq!(d.blocks, vec![AlgebraBlock::FullSu { clusters: vec![0, 1, 2, 3], space_dim: 72 }]);
        assert_eq!(d.total_algebra_dim, 5183);
        assert!(d.controllable);
        assert!(is_subspace_controllable(&sel(&[0, 2, 1, 1]), &net).unwrap());

        let single = SpinNetwork::ising(vec![Cluster::new(3, 1.0)], &[]).unwrap();
        let d = predict_descriptor(&sel(&[3]), &single).unwrap();
        assert_eq!(d.blocks, vec![AlgebraBlock::SpinIrrep { cluster: 0, f: 3 }]);
        assert_eq!(d.total_algebra_dim, 3);
        assert!(!d.controllable);
    }

    #[test]
    fn empty_graph_is_trivial() {
        let net = SpinNetwork::ising(vec![Cluster::new(2, 1.0), Cluster::new(2, 2.0)], &[(0, 1, 1.0)]).unwrap();
        let d = predict_descriptor(&sel(&[0, 0]), &net).unwrap();
        assert!(d.blocks.is_empty());
        assert_eq!(d.total_algebra_dim, 0);
        assert!(!d.controllable);
    }

    #[test]
    fn repeated_gamma_is_rejected() {
        let net = SpinNetwork::ising(vec![Cluster::new(1, 1.0), Cluster::new(1, 1.0)], &[(0, 1, 1.0)]).unwrap();
        assert!(matches!(predict_descriptor(&sel(&[1, 1]), &net), Err(Error::RepeatedGamma { .. })));
    }

    #[test]
    fn two_dim_single_node_agrees_with_su2() {
        let net = SpinNetwork::ising(vec![Cluster::new(1, 1.0), Cluster::new(2, 2.0)], &[(0, 1, 1.0)]).unwrap();
        let d = predict_descriptor(&sel(&[1, 0]), &net).unwrap();
        assert_eq!(d.total_algebra_dim, 2 * 2 - 1);
    }

    fn arb_network() -> impl Strategy<Value = (SpinNetwork, Vec<usize>)> {
        (1usize..=5)
            .prop_flat_map(|n| {
                let sizes = proptest::collection::vec(1usize..=4, n);
                let edges = proptest::collection::vec(any::<bool>(), n * (n - 1) / 2);
                (sizes, edges)
            })
            .prop_flat_map(|(sizes, edges)| {
                let picks: Vec<_> = sizes.iter().map(|&s| (0..=s / 2).prop_map(move |k| s - 2 * k)).collect();
                (Just(sizes), Just(edges), picks)
            })
            .prop_map(|(sizes, edge_mask, labels)| {
                let n = sizes.len();
                let clusters = sizes.iter().enumerate().map(|(j, &s)| Cluster::new(s, j as f64 + 1.0)).collect();
                let mut edges = Vec::new();
                let mut bit = 0;
                for j in 0..n {
                    for k in (j + 1)..n {
                        if edge_mask[bit] {
                            edges.push((j, k, 1.0));
                        }
                        bit += 1;
                    }
                }
                (SpinNetwork::ising(clusters, &edges).unwrap(), labels)
            })
    }

    proptest! {
        #[test]
        fn descriptor_is_consistent((net, labels) in arb_network()) {
            let selection = sel(&labels);
            let d = predict_descriptor(&selection, &net).unwrap();
            let graph = associated_graph(&selection, &net);
            let sum: usize = d.blocks.iter().map(|b| b.algebra_dim()).sum();
            prop_assert_eq!(sum, d.total_algebra_dim);
            let product: usize = d.blocks.iter().map(|b| b.space_dim()).product();
            let kept: usize = graph.nodes.iter().map(|&j| labels[j] + 1).product();
            prop_assert_eq!(product, kept);
            for b in &d.blocks {
                let expected = if b.clusters().len() == 1 { 3 } else { b.space_dim().pow(2) - 1 };
                prop_assert_eq!(b.algebra_dim(), expected);
            }
            let comps = connected_components(&graph);
            prop_assert_eq!(d.controllable, comps.len() == 1 && graph.nodes.len() >= 2);
            // Zeroing any label never adds nodes.
            for j in 0..labels.len() {
                let mut cut = labels.clone();
                cut[j] = 0;
                let smaller = associated_graph(&sel(&cut), &net);
                prop_assert!(smaller.nodes.iter().all(|n| graph.nodes.contains(n)));
            }
        }
    }
}
