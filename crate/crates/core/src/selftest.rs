//! Built-in invariant catalog run by `spinnet selftest`.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::catalog::split_coupling_network;
use crate::cg::{decompose_cluster, enumerate_subspaces, highest_weight_vectors, irrep_basis, subspace_basis};
use crate::error::Result;
use crate::linalg::{anticommutator, c, commutator, frobenius, identity, zeros, Operator, I};
use crate::network::{Cluster, SpinNetwork};
use crate::operators::{casimir, collective_s, full_generators, pair_sum, pauli, symmetric_generators, PauliAxis};
use crate::oracle::{dynkin_check, lie_closure, verify_full_space, ClosureOptions, NetworkModel, VerifyOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type CheckFn = fn() -> Result<(bool, String)>;

const CHECKS: [(&str, CheckFn); 12] = [
    ("pauli identities", pauli_identities),
    ("cyclic commutation relations", cyclic_relations),
    ("collective square S_g^2 = n/4 + 2 I_gg", collective_square),
    ("casimir spectra", casimir_spectra),
    ("clebsch-gordan dimension identity", cg_dimensions),
    ("subspace basis orthonormality", basis_orthonormality),
    ("generator block diagonality", block_diagonality),
    ("copy independence of restrictions", copy_independence),
    ("permutation-invariant algebra counts", symmetric_counts),
    ("irrep restrictions generate u(f+1)", irrep_restrictions),
    ("dynkin maximality", dynkin),
    ("split-coupling pair", split_coupling),
];

/// Runs every check; errors count as failures.
pub fn run_selftest() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let (passed, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
            CheckOutcome { name: name.to_string(), passed, detail, seconds: start.elapsed().as_secs_f64() }
        })
        .collect()
}

fn close(a: &Operator, b: &Operator, tol: f64) -> bool {
    frobenius(&(a - b)) < tol
}

fn pauli_identities() -> Result<(bool, String)> {
    let mut ok = true;
    for a in PauliAxis::ALL {
        let p = pauli(a);
        let q = pauli(a.next());
        ok &= close(&(&p * &p), &(identity(2) * c(0.25)), 1e-14);
        ok &= close(&anticommutator(&p, &q), &zeros(2), 1e-14);
        ok &= close(&commutator(&(&p * I), &(&q * I)), &(pauli(a.next().next()) * I), 1e-14);
    }
    Ok((ok, "squares, anticommutators and commutators of the three matrices".into()))
}

fn cyclic_relations() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for n in 1..=5 {
        for a in PauliAxis::ALL {
            let x = collective_s(a, n)? * I;
            let y = collective_s(a.next(), n)? * I;
            let z = collective_s(a.next().next(), n)? * I;
            worst = worst.max(frobenius(&(commutator(&x, &y) - z)));
        }
    }
    Ok((worst < 1e-12, format!("n = 1..5, worst residual {worst:.1e}")))
}

fn collective_square() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for n in 2..=5 {
        for g in PauliAxis::ALL {
            let s = collective_s(g, n)?;
            let lhs = &s * &s;
            let rhs = identity(1 << n) * c(n as f64 / 4.0) + pair_sum(g, g, n)? * c(2.0);
            worst = worst.max(frobenius(&(lhs - rhs)));
        }
    }
    Ok((worst < 1e-12, format!("n = 2..5, worst residual {worst:.1e}")))
}

fn casimir_spectra() -> Result<(bool, String)> {
    let mut ok = true;
    for n in 1..=6 {
        let eig = casimir(n)?.symmetric_eigen();
        for (f, m) in decompose_cluster(n)?.iter() {
            let value = f as f64 / 2.0 * (f as f64 / 2.0 + 1.0);
            let count = eig.eigenvalues.iter().filter(|&&v| (v - value).abs() < 1e-9).count();
            ok &= count == m * (f + 1);
        }
    }
    Ok((ok, "eigenvalue f/2(f/2+1) with multiplicity m(n,f)(f+1), n = 1..6".into()))
}

fn cg_dimensions() -> Result<(bool, String)> {
    let mut ok = true;
    for n in 1..=6 {
        let dec = decompose_cluster(n)?;
        ok &= dec.dimension_sum() == 1 << n;
        for (f, m) in dec.iter() {
            ok &= highest_weight_vectors(n, f)?.ncols() == m;
        }
    }
    Ok((ok, "sum m(n,f)(f+1) = 2^n and highest-weight counts, n = 1..6".into()))
}

fn test_networks() -> Result<Vec<SpinNetwork>> {
    Ok(vec![
        SpinNetwork::ising(vec![Cluster::new(3, 1.0), Cluster::new(2, 2.0)], &[(0, 1, 1.0)])?,
        SpinNetwork::ising(vec![Cluster::new(4, 1.0), Cluster::new(1, 2.0)], &[(0, 1, 0.7)])?,
        SpinNetwork::ising(
            vec![Cluster::new(1, 1.0), Cluster::new(1, 2.0), Cluster::new(2, 3.0), Cluster::new(1, 4.0)],
            &[(0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)],
        )?,
    ])
}

fn all_bases(net: &SpinNetwork) -> Result<DMatrix<Complex64>> {
    let bases = enumerate_subspaces(net, false)
        .iter()
        .map(|s| subspace_basis(s, net, net.full_dim()).map(|b| b.columns))
        .collect::<Result<Vec<_>>>()?;
    let cols: Vec<_> = bases.iter().flat_map(|b| b.column_iter().map(|c| c.into_owned())).collect();
    Ok(DMatrix::from_columns(&cols))
}

fn basis_orthonormality() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for net in test_networks()? {
        let u = all_bases(&net)?;
        // Stacking every subspace must give a unitary.
        let d = net.full_dim();
        worst = worst.max(frobenius(&(u.adjoint() * &u - identity(d))));
    }
    Ok((worst < 1e-10, format!("worst ‖U†U − 1‖ {worst:.1e}")))
}

fn block_diagonality() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for net in test_networks()? {
        let gens = full_generators(&net);
        for sel in enumerate_subspaces(&net, false) {
            let b = subspace_basis(&sel, &net, net.full_dim())?.columns;
            let proj = &b * b.adjoint();
            for g in &gens {
                let gb = g * &b;
                let leak = frobenius(&(&gb - &proj * &gb)) / frobenius(g).max(1.0);
                worst = worst.max(leak);
            }
        }
    }
    Ok((worst < 1e-10, format!("worst off-block leakage {worst:.1e}")))
}

fn copy_independence() -> Result<(bool, String)> {
    let net = SpinNetwork::ising(vec![Cluster::new(3, 1.0), Cluster::new(4, 2.0)], &[(0, 1, 1.0)])?;
    let gens = full_generators(&net);
    let mut worst: f64 = 0.0;
    for labels in [[1, 2], [1, 0], [3, 2]] {
        let mut reference: Option<Vec<Operator>> = None;
        for sel in enumerate_subspaces(&net, false).into_iter().filter(|s| s.labels == labels) {
            let b = subspace_basis(&sel, &net, net.full_dim())?.columns;
            let restricted: Vec<Operator> = gens.iter().map(|g| b.adjoint() * g * &b).collect();
            match &reference {
                None => reference = Some(restricted),
                Some(r) => {
                    for (x, y) in r.iter().zip(&restricted) {
                        worst = worst.max(frobenius(&(x - y)));
                    }
                }
            }
        }
    }
    Ok((worst < 1e-10, format!("clusters (3,4), worst difference between copies {worst:.1e}")))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The permutation-invariant algebra is `⊕_f u(f+1)` over the distinct
/// labels, of dimension `C(n+3, n)`. Commutators are traceless on every
/// block, so the closure of the symmetric generators reaches `⊕_f su(f+1)`
/// plus only as many central directions as the generators' per-block traces
/// span.
pub fn symmetric_closure_bound(n: usize, with_identity: bool) -> Result<usize> {
    let labels = decompose_cluster(n)?.labels();
    let gens = symmetric_generators(n, with_identity)?;
    let mut traces = DMatrix::<f64>::zeros(gens.len(), labels.len());
    for (col, &f) in labels.iter().enumerate() {
        let b = irrep_basis(n, f, 1)?;
        for (row, g) in gens.iter().enumerate() {
            traces[(row, col)] = (b.adjoint() * g * &b).trace().im / (f + 1) as f64;
        }
    }
    let central = traces.rank(1e-9);
    Ok(labels.iter().map(|f| (f + 1) * (f + 1) - 1).sum::<usize>() + central)
}

fn symmetric_counts() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 2..=5 {
        let invariant = binomial(n + 3, n);
        let irreps: usize = decompose_cluster(n)?.labels().iter().map(|f| (f + 1) * (f + 1)).sum();
        let with = lie_closure(&symmetric_generators(n, true)?, ClosureOptions::default())?;
        let without = lie_closure(&symmetric_generators(n, false)?, ClosureOptions::default())?;
        ok &= irreps == invariant
            && with.dim == symmetric_closure_bound(n, true)?
            && without.dim == symmetric_closure_bound(n, false)?;
        parts.push(format!("n={n}: {}/{} of {invariant}", with.dim, without.dim));
    }
    Ok((ok, parts.join(", ")))
}

/// Dimension of the closure of the symmetric generators restricted to one
/// copy of `V^f` in `n` spins.
pub fn irrep_closure_dim(n: usize, f: usize, copy: usize) -> Result<usize> {
    let b = irrep_basis(n, f, copy)?;
    let gens: Vec<Operator> = symmetric_generators(n, true)?.iter().map(|g| b.adjoint() * g * &b).collect();
    Ok(lie_closure(&gens, ClosureOptions::default())?.dim)
}

fn irrep_restrictions() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, f) in [(3, 1), (4, 2), (4, 0)] {
        let dim = irrep_closure_dim(n, f, 1)?;
        ok &= dim == (f + 1) * (f + 1);
        parts.push(format!("n={n} f={f}: {dim}"));
    }
    Ok((ok, parts.join(", ")))
}

fn dynkin() -> Result<(bool, String)> {
    let mut ok = true;
    let mut runs = 0;
    for (r, s) in [(2, 2), (2, 3), (3, 3)] {
        for seed in 0..5 {
            ok &= dynkin_check(r, s, seed, ClosureOptions::default())?.passed();
            runs += 1;
        }
    }
    Ok((ok, format!("{runs} random products over (2,2), (2,3), (3,3)")))
}

fn split_coupling() -> Result<(bool, String)> {
    let equal =
        verify_full_space(&NetworkModel::SpinLevel(split_coupling_network(1.0, 1.0)), VerifyOptions::default())?;
    let unequal =
        verify_full_space(&NetworkModel::SpinLevel(split_coupling_network(1.0, 2.0)), VerifyOptions::default())?;
    let mut restricted: Vec<usize> = equal.blocks.iter().map(|b| b.restricted_dim).collect();
    restricted.sort_unstable();
    let ok = equal.dim == 38 && equal.consistent() && restricted == vec![3, 35] && unequal.dim == 63;
    Ok((ok, format!("equal couplings {} ({:?}), unequal {}", equal.dim, restricted, unequal.dim)))
}
