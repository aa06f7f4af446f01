//! Clebsch-Gordan splitting of each cluster and explicit bases of the
//! invariant subspaces `F_1 ⊗ … ⊗ F_N`.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, frobenius, kron_all, null_space, Operator};
use crate::network::SpinNetwork;
use crate::operators;

/// Relative singular-value cut for kernel computations.
pub const NULL_SPACE_TOL: f64 = 1e-9;
/// Absolute leakage allowed when restricting an operator to a subspace.
pub const LEAKAGE_TOL: f64 = 1e-10;

/// Multiplicities `m(n, f)` of the irreducibles `V^f` inside `(V^1)^{⊗n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterDecomposition {
    pub n: usize,
    multiplicities: BTreeMap<usize, usize>,
}

impl ClusterDecomposition {
    pub fn multiplicity(&self, f: usize) -> usize {
        self.multiplicities.get(&f).copied().unwrap_or(0)
    }

    /// Labels present, largest first (`n, n−2, …`).
    pub fn labels(&self) -> Vec<usize> {
        self.multiplicities.keys().rev().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.multiplicities.iter().rev().map(|(&f, &m)| (f, m))
    }

    /// `Σ_f m(n, f)·(f + 1)`, which must equal `2^n`.
    pub fn dimension_sum(&self) -> usize {
        self.iter().map(|(f, m)| m * (f + 1)).sum()
    }
}

impl fmt::Display for ClusterDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|(label, m)| if m == 1 { format!("V^{label}") } else { format!("{m}·V^{label}") })
            .collect();
        write!(f, "(V^1)^⊗{} = {}", self.n, parts.join(" ⊕ "))
    }
}

/// Iterates `V^f ⊗ V^1 = V^{f+1} ⊕ V^{f−1}` starting from a single spin.
pub fn decompose_cluster(n: usize) -> Result<ClusterDecomposition> {
    if n == 0 {
        return Err(Error::EmptyCluster);
    }
    let mut current: BTreeMap<usize, usize> = BTreeMap::from([(1, 1)]);
    for _ in 1..n {
        let mut next = BTreeMap::new();
        for (&f, &m) in &current {
            *next.entry(f + 1).or_insert(0) += m;
            if f >= 1 {
                *next.entry(f - 1).or_insert(0) += m;
            }
        }
        current = next;
    }
    Ok(ClusterDecomposition { n, multiplicities: current })
}

/// Choice of one irreducible component per cluster.
///
/// `copies` are 1-based indices into the degenerate copies of each label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubspaceSelection {
    pub labels: Vec<usize>,
    pub copies: Vec<usize>,
}

impl SubspaceSelection {
    /// Selection using the first copy of every label.
    pub fn first_copy(labels: Vec<usize>) -> Self {
        let copies = vec![1; labels.len()];
        Self { labels, copies }
    }

    /// `D^S = Π (f_j + 1)`.
    pub fn dim(&self) -> usize {
        self.labels.iter().map(|f| f + 1).product()
    }

    /// Name in the `T_{f1,f2,…}` form.
    pub fn name(&self) -> String {
        let labels: Vec<String> = self.labels.iter().map(|f| f.to_string()).collect();
        format!("T_{{{}}}", labels.join(","))
    }

    /// Checks labels and copy indices against the network's cluster sizes.
    pub fn validate(&self, net: &SpinNetwork) -> Result<()> {
        let expected = net.num_clusters();
        if self.labels.len() != expected || self.copies.len() != expected {
            return Err(Error::SelectionLength { expected, found: self.labels.len().min(self.copies.len()) });
        }
        for ((&f, &copy), cl) in self.labels.iter().zip(&self.copies).zip(net.clusters()) {
            let available = decompose_cluster(cl.size)?.multiplicity(f);
            if available == 0 {
                return Err(Error::LabelNotPresent { n: cl.size, f });
            }
            if copy == 0 || copy > available {
                return Err(Error::CopyOutOfRange { f, copy, available });
            }
        }
        Ok(())
    }

    /// Number of copies sharing these labels: `Π m(n_j, f_j)`.
    pub fn label_multiplicity(&self, net: &SpinNetwork) -> Result<usize> {
        let mut total = 1;
        for (&f, cl) in self.labels.iter().zip(net.clusters()) {
            total *= decompose_cluster(cl.size)?.multiplicity(f);
        }
        Ok(total)
    }
}

impl fmt::Display for SubspaceSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())?;
        if self.copies.iter().any(|&c| c != 1) {
            let copies: Vec<String> = self.copies.iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", copies.join(","))?;
        }
        Ok(())
    }
}

/// Indices of computational basis states of `n` spins with `S_z = f/2`.
fn weight_states(n: usize, f: usize) -> Vec<usize> {
    let downs = (n - f) / 2;
    (0..1usize << n).filter(|s| s.count_ones() as usize == downs).collect()
}

/// Orthonormal highest-weight vectors of every copy of `V^f` in `(V^1)^{⊗n}`,
/// as the columns of a `2^n × m(n, f)` matrix.
///
/// They span the kernel of the raising operator inside the `S_z = f/2`
/// eigenspace; the column order is fixed by pivoted orthogonalisation of the
/// kernel projector.
pub fn highest_weight_vectors(n: usize, f: usize) -> Result<DMatrix<Complex64>> {
    let expected = decompose_cluster(n)?.multiplicity(f);
    if expected == 0 {
        return Err(Error::LabelNotPresent { n, f });
    }
    let states = weight_states(n, f);
    let up = operators::raising(n)?;
    let restricted = DMatrix::from_fn(1 << n, states.len(), |r, k| up[(r, states[k])]);
    let kernel = null_space(&restricted, NULL_SPACE_TOL);
    if kernel.ncols() != expected {
        return Err(Error::HighestWeightCount { n, f, expected, found: kernel.ncols() });
    }
    let mut out = DMatrix::zeros(1 << n, expected);
    for (k, &s) in states.iter().enumerate() {
        for col in 0..expected {
            out[(s, col)] = kernel[(k, col)];
        }
    }
    Ok(out)
}

/// Ladder basis `v_0, …, v_f` of one copy of `V^f`: `v_0` is the chosen
/// highest-weight vector and `v_{k+1} = S_− v_k / ‖S_− v_k‖`.
pub fn irrep_basis(n: usize, f: usize, copy: usize) -> Result<DMatrix<Complex64>> {
    let hw = highest_weight_vectors(n, f)?;
    if copy == 0 || copy > hw.ncols() {
        return Err(Error::CopyOutOfRange { f, copy, available: hw.ncols() });
    }
    let down = operators::lowering(n)?;
    let mut columns: Vec<DVector<Complex64>> = Vec::with_capacity(f + 1);
    columns.push(hw.column(copy - 1).into_owned());
    for step in 1..=f {
        let next = &down * columns.last().expect("nonempty");
        let norm = next.norm();
        if norm < NULL_SPACE_TOL {
            return Err(Error::LadderBreakdown { n, f, step });
        }
        columns.push(next / c(norm));
    }
    let tail = &down * columns.last().expect("nonempty");
    if tail.norm() > 1e-8 {
        return Err(Error::LadderBreakdown { n, f, step: f + 1 });
    }
    Ok(DMatrix::from_columns(&columns))
}

/// Orthonormal basis of one invariant subspace of the full network space.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    pub selection: SubspaceSelection,
    /// `2^{Σ n_j} × D^S`, columns ordered lexicographically by the per-cluster
    /// ladder index with cluster 1 most significant.
    pub columns: DMatrix<Complex64>,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    /// Per-cluster factor dimensions `f_j + 1` in tensor order.
    pub fn factor_dims(&self) -> Vec<usize> {
        self.selection.labels.iter().map(|f| f + 1).collect()
    }
}

pub fn subspace_basis(selection: &SubspaceSelection, net: &SpinNetwork, cap: usize) -> Result<SubspaceBasis> {
    let full = net.full_dim();
    if full > cap {
        return Err(Error::CapExceeded { dim: full, cap });
    }
    selection.validate(net)?;
    let factors: Vec<DMatrix<Complex64>> = selection
        .labels
        .iter()
        .zip(&selection.copies)
        .zip(net.clusters())
        .map(|((&f, &copy), cl)| irrep_basis(cl.size, f, copy))
        .collect::<Result<_>>()?;
    Ok(SubspaceBasis { selection: selection.clone(), columns: kron_all(factors.iter()) })
}

/// `B† · op · B`, refusing operators that do not preserve the subspace.
pub fn restrict(op: &Operator, basis: &SubspaceBasis) -> Result<Operator> {
    restrict_with_tol(op, basis, LEAKAGE_TOL)
}

pub fn restrict_with_tol(op: &Operator, basis: &SubspaceBasis, tol: f64) -> Result<Operator> {
    let b = &basis.columns;
    if op.nrows() != b.nrows() || op.ncols() != b.nrows() {
        return Err(Error::DimensionMismatch { expected: b.nrows(), found: op.nrows() });
    }
    let image = op * b;
    let restricted = b.adjoint() * &image;
    let residual = frobenius(&(image - b * &restricted));
    if residual > tol * frobenius(op).max(1.0) {
        return Err(Error::Leakage { residual });
    }
    Ok(restricted)
}

/// All invariant subspaces `F_1 ⊗ … ⊗ F_N`, labels in descending order per
/// cluster with cluster 1 varying slowest. With `distinct_labels_only` one
/// selection (copy 1) is returned per label tuple; otherwise every copy
/// combination appears.
pub fn enumerate_subspaces(net: &SpinNetwork, distinct_labels_only: bool) -> Vec<SubspaceSelection> {
    let options: Vec<Vec<(usize, usize)>> = net
        .clusters()
        .iter()
        .map(|cl| {
            let dec = decompose_cluster(cl.size).expect("cluster sizes are positive");
            dec.iter()
                .flat_map(|(f, m)| {
                    let copies = if distinct_labels_only { 1 } else { m };
                    (1..=copies).map(move |copy| (f, copy))
                })
                .collect()
        })
        .collect();
    let mut out = vec![SubspaceSelection { labels: vec![], copies: vec![] }];
    for choices in options {
        out = out
            .into_iter()
            .flat_map(|sel| {
                choices.iter().map(move |&(f, copy)| {
                    let mut next = sel.clone();
                    next.labels.push(f);
                    next.copies.push(copy);
                    next
                })
            })
            .collect();
    }
    out
}

/// Bases of every invariant subspace (all copies), in enumeration order.
pub fn adapted_bases(net: &SpinNetwork, cap: usize) -> Result<Vec<SubspaceBasis>> {
    enumerate_subspaces(net, false).iter().map(|sel| subspace_basis(sel, net, cap)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;
    use crate::network::Cluster;
    use crate::operators::{casimir, cluster_operator, cluster_spin, collective_s, PauliAxis};

    fn four_cluster() -> SpinNetwork {
        SpinNetwork::ising(
            vec![Cluster::new(2, 1.0), Cluster::new(2, 2.0), Cluster::new(3, 3.0), Cluster::new(1, 4.0)],
            &[(0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn small_decompositions() {
        let d1 = decompose_cluster(1).unwrap();
        assert_eq!(d1.iter().collect::<Vec<_>>(), vec![(1, 1)]);
        let d2 = decompose_cluster(2).unwrap();
        assert_eq!(d2.iter().collect::<Vec<_>>(), vec![(2, 1), (0, 1)]);
        let d3 = decompose_cluster(3).unwrap();
        assert_eq!(d3.iter().collect::<Vec<_>>(), vec![(3, 1), (1, 2)]);
        assert!(decompose_cluster(0).is_err());
        for n in 1..=10 {
            let d = decompose_cluster(n).unwrap();
            assert_eq!(d.dimension_sum(), 1 << n);
            assert_eq!(*d.labels().last().unwrap(), n % 2);
        }
    }

    #[test]
    fn highest_weight_examples() {
        let v = highest_weight_vectors(1, 1).unwrap();
        assert_eq!(v.ncols(), 1);
        assert!((v[(0, 0)].norm() - 1.0).abs() < 1e-12);

        let singlet = highest_weight_vectors(2, 0).unwrap();
        assert_eq!(singlet.ncols(), 1);
        // (|↑↓⟩ − |↓↑⟩)/√2 up to a phase.
        let a = singlet[(1, 0)];
        let b = singlet[(2, 0)];
        assert!((a.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((a + b).norm() < 1e-12);

        let two = highest_weight_vectors(3, 1).unwrap();
        assert_eq!(two.ncols(), 2);
        assert!(frobenius(&(two.adjoint() * &two - DMatrix::identity(2, 2))) < 1e-12);
        let up = operators::raising(3).unwrap();
        assert!(frobenius(&(&up * &two)) < 1e-12);
        assert!(matches!(highest_weight_vectors(3, 2), Err(Error::LabelNotPresent { .. })));
    }

    #[test]
    fn triplet_ladder() {
        let b = irrep_basis(2, 2, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = DMatrix::from_row_slice(
            4,
            3,
            &[c(1.0), c(0.0), c(0.0), c(0.0), c(h), c(0.0), c(0.0), c(h), c(0.0), c(0.0), c(0.0), c(1.0)],
        );
        // Fix the global phase from the first entry.
        let phase = b[(0, 0)];
        assert!(frobenius(&(b / phase - expected)) < 1e-12);
        assert!(matches!(irrep_basis(2, 2, 2), Err(Error::CopyOutOfRange { .. })));
    }

    #[test]
    fn restricted_sz_is_weight_diagonal() {
        for (n, f) in [(1, 1), (2, 2), (3, 3), (3, 1), (4, 2), (5, 3)] {
            let b = irrep_basis(n, f, 1).unwrap();
            let sz = collective_s(PauliAxis::Z, n).unwrap();
            let r = b.adjoint() * sz * &b;
            let expected =
                DMatrix::from_fn(f + 1, f + 1, |i, j| if i == j { c(f as f64 / 2.0 - i as f64) } else { c(0.0) });
            assert!(frobenius(&(r - expected)) < 1e-10, "n={n} f={f}");
        }
    }

    #[test]
    fn four_cluster_subspace_dims() {
        let net = four_cluster();
        let sel = SubspaceSelection::first_copy(vec![2, 0, 3, 1]);
        let basis = subspace_basis(&sel, &net, 256).unwrap();
        assert_eq!(basis.dim(), 24);
        assert!(matches!(subspace_basis(&sel, &net, 64), Err(Error::CapExceeded { .. })));
        assert_eq!(enumerate_subspaces(&net, true).len(), 8);
        assert_eq!(enumerate_subspaces(&net, false).len(), 12);
        let single = SpinNetwork::ising(vec![Cluster::new(2, 1.0)], &[]).unwrap();
        assert_eq!(enumerate_subspaces(&single, true).len(), 2);
    }

    #[test]
    fn restriction_examples() {
        let net = SpinNetwork::ising(vec![Cluster::new(2, 1.0), Cluster::new(1, 2.0)], &[(0, 1, 1.0)]).unwrap();
        for labels in [vec![2, 1], vec![0, 1]] {
            let basis = subspace_basis(&SubspaceSelection::first_copy(labels.clone()), &net, 64).unwrap();
            let cas = cluster_operator(&casimir(2).unwrap(), 0, &net).unwrap();
            let r = restrict(&cas, &basis).unwrap();
            let f = labels[0] as f64 / 2.0;
            assert!(frobenius(&(r - identity(basis.dim()) * c(f * (f + 1.0)))) < 1e-10);
            let sz = cluster_spin(PauliAxis::Z, 0, &net).unwrap() * crate::linalg::I;
            let r = restrict(&sz, &basis).unwrap();
            if labels[0] == 0 {
                assert!(frobenius(&r) < 1e-12);
            }
            let zz = crate::operators::cluster_spin_pair(PauliAxis::Z, 0, 1, &net).unwrap();
            assert!(restrict(&zz, &basis).unwrap().trace().norm() < 1e-12);
        }
    }

    #[test]
    fn leakage_is_an_error() {
        let net = SpinNetwork::ising(vec![Cluster::new(2, 1.0)], &[]).unwrap();
        let basis = subspace_basis(&SubspaceSelection::first_copy(vec![0]), &net, 64).unwrap();
        // σ_z on the first spin mixes the singlet with the triplet.
        let op = operators::single_spin(PauliAxis::Z, 0, 2).unwrap();
        assert!(matches!(restrict(&op, &basis), Err(Error::Leakage { .. })));
    }

    #[test]
    fn selection_validation() {
        let net = four_cluster();
        assert!(SubspaceSelection::first_copy(vec![2, 0, 3]).validate(&net).is_err());
        assert!(matches!(
            SubspaceSelection::first_copy(vec![1, 0, 3, 1]).validate(&net),
            Err(Error::LabelNotPresent { .. })
        ));
        let sel = SubspaceSelection { labels: vec![2, 0, 1, 1], copies: vec![1, 1, 3, 1] };
        assert!(matches!(sel.validate(&net), Err(Error::CopyOutOfRange { .. })));
        assert_eq!(SubspaceSelection::first_copy(vec![2, 0, 1, 1]).label_multiplicity(&net).unwrap(), 2);
        assert_eq!(SubspaceSelection::first_copy(vec![2, 0, 3, 1]).name(), "T_{2,0,3,1}");
    }
}
