//! Spin operators and Hamiltonian generators as dense complex matrices.
//!
//! Conventions: Pauli matrices carry the ½ prefactor and
//! `σ_y = ½ [[0, i], [-i, 0]]`, so that `[iσ_x, iσ_y] = iσ_z` and its cyclic
//! versions hold exactly. Cluster 1 is the leftmost tensor factor and within a
//! cluster spin 1 is leftmost. Basis state 0 of a spin is the `σ_z = +½` state.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, identity, kron, kron_all, zeros, Operator, I};
use crate::network::{SpinLevelNetwork, SpinNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    /// The axis completing `(self, next)` to a cyclic triple.
    pub fn next(self) -> PauliAxis {
        match self {
            PauliAxis::X => PauliAxis::Y,
            PauliAxis::Y => PauliAxis::Z,
            PauliAxis::Z => PauliAxis::X,
        }
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PauliAxis::X => "x",
            PauliAxis::Y => "y",
            PauliAxis::Z => "z",
        })
    }
}

pub fn pauli(axis: PauliAxis) -> Operator {
    let h = 0.5;
    let z = c(0.0);
    match axis {
        PauliAxis::X => Operator::from_row_slice(2, 2, &[z, c(h), c(h), z]),
        PauliAxis::Y => Operator::from_row_slice(2, 2, &[z, I * h, -I * h, z]),
        PauliAxis::Z => Operator::from_row_slice(2, 2, &[c(h), z, z, c(-h)]),
    }
}

/// `op` (2×2) at spin `pos` of an `n`-spin register.
fn single_site(op: &Operator, pos: usize, n: usize) -> Operator {
    let left = identity(1 << pos);
    let right = identity(1 << (n - pos - 1));
    kron(&kron(&left, op), &right)
}

/// Two single-spin operators at distinct positions `p < q` of `n` spins.
fn two_site(a: &Operator, p: usize, b: &Operator, q: usize, n: usize) -> Operator {
    debug_assert!(p < q && q < n);
    let factors = [identity(1 << p), a.clone(), identity(1 << (q - p - 1)), b.clone(), identity(1 << (n - q - 1))];
    kron_all(factors.iter())
}

fn require_spins(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::EmptyCluster)
    } else {
        Ok(())
    }
}

/// `σ_axis` placed at spin `pos` of an `n`-spin register.
pub fn single_spin(axis: PauliAxis, pos: usize, n: usize) -> Result<Operator> {
    require_spins(n)?;
    if pos >= n {
        return Err(Error::IndexOutOfRange { index: pos, count: n });
    }
    Ok(single_site(&pauli(axis), pos, n))
}

/// Collective spin `S_axis = Σ_l σ_axis^(l)` on `n` spins.
pub fn collective_s(axis: PauliAxis, n: usize) -> Result<Operator> {
    require_spins(n)?;
    let p = pauli(axis);
    let mut out = zeros(1 << n);
    for pos in 0..n {
        out += single_site(&p, pos, n);
    }
    Ok(out)
}

/// `I_gb`: sum of the distinct two-position products with `σ_g` at one spin
/// and `σ_b` at another. For `g ≠ b` both orders appear (`n(n−1)` terms); for
/// `g = b` the two orders coincide and each pair is counted once, which makes
/// `S_g² = (n/4)·1 + 2·I_gg` exact. Zero for a single spin.
pub fn pair_sum(g: PauliAxis, b: PauliAxis, n: usize) -> Result<Operator> {
    require_spins(n)?;
    let (pg, pb) = (pauli(g), pauli(b));
    let mut out = zeros(1 << n);
    for l in 0..n {
        for m in (l + 1)..n {
            out += two_site(&pg, l, &pb, m, n);
            if g != b {
                out += two_site(&pb, l, &pg, m, n);
            }
        }
    }
    Ok(out)
}

/// Casimir `S_x² + S_y² + S_z²` on `n` spins.
pub fn casimir(n: usize) -> Result<Operator> {
    require_spins(n)?;
    let mut out = zeros(1 << n);
    for axis in PauliAxis::ALL {
        let s = collective_s(axis, n)?;
        out += &s * &s;
    }
    Ok(out)
}

/// Whether `S_x + iS_y` raises the `S_z` weight under these conventions.
///
/// With the sign of `σ_y` used here it lowers it; the check is done on the
/// matrices rather than assumed.
fn plus_combination_raises() -> bool {
    let m = pauli(PauliAxis::X) + pauli(PauliAxis::Y) * I;
    // Raising maps the σ_z = -½ state (index 1) onto the +½ state (index 0).
    m[(0, 1)].norm() > 0.5
}

/// Ladder operator on `n` spins that increases the `S_z` eigenvalue by one.
pub fn raising(n: usize) -> Result<Operator> {
    let sx = collective_s(PauliAxis::X, n)?;
    let sy = collective_s(PauliAxis::Y, n)?;
    Ok(if plus_combination_raises() { sx + sy * I } else { sx - sy * I })
}

pub fn lowering(n: usize) -> Result<Operator> {
    Ok(raising(n)?.adjoint())
}

fn cluster_dims(net: &SpinNetwork) -> Vec<usize> {
    net.clusters().iter().map(|cl| 1usize << cl.size).collect()
}

/// Embeds a set of per-cluster operators at their cluster positions, with
/// identities elsewhere.
pub fn embed_clusters(placed: &[(usize, &Operator)], net: &SpinNetwork) -> Result<Operator> {
    let dims = cluster_dims(net);
    let mut factors: Vec<Operator> = dims.iter().map(|&d| identity(d)).collect();
    for &(j, op) in placed {
        let count = dims.len();
        let expected = *dims.get(j).ok_or(Error::IndexOutOfRange { index: j, count })?;
        if op.nrows() != expected || op.ncols() != expected {
            return Err(Error::DimensionMismatch { expected, found: op.nrows() });
        }
        factors[j] = op.clone();
    }
    Ok(kron_all(factors.iter()))
}

/// `op` acting on cluster `j` of the network, identity on the others.
pub fn cluster_operator(op: &Operator, j: usize, net: &SpinNetwork) -> Result<Operator> {
    embed_clusters(&[(j, op)], net)
}

/// `S_axis^j` on the full network space.
pub fn cluster_spin(axis: PauliAxis, j: usize, net: &SpinNetwork) -> Result<Operator> {
    let count = net.num_clusters();
    let size = net.clusters().get(j).ok_or(Error::IndexOutOfRange { index: j, count })?.size;
    cluster_operator(&collective_s(axis, size)?, j, net)
}

/// `S_axis^j S_axis^k` on the full network space.
pub fn cluster_spin_pair(axis: PauliAxis, j: usize, k: usize, net: &SpinNetwork) -> Result<Operator> {
    let sizes = net.sizes();
    let count = sizes.len();
    let sj = collective_s(axis, *sizes.get(j).ok_or(Error::IndexOutOfRange { index: j, count })?)?;
    let sk = collective_s(axis, *sizes.get(k).ok_or(Error::IndexOutOfRange { index: k, count })?)?;
    embed_clusters(&[(j, &sj), (k, &sk)], net)
}

/// Skew-Hermitian drift `i Σ_{j<k} (zz S_z^jS_z^k + xx S_x^jS_x^k + yy S_y^jS_y^k)`.
pub fn drift_generator(net: &SpinNetwork) -> Operator {
    let mut h = zeros(net.full_dim());
    for ((j, k), coupling) in net.couplings() {
        for (axis, strength) in [(PauliAxis::Z, coupling.zz), (PauliAxis::X, coupling.xx), (PauliAxis::Y, coupling.yy)]
        {
            if strength != 0.0 {
                let term = cluster_spin_pair(axis, j, k, net).expect("indices validated by network");
                h += term * c(strength);
            }
        }
    }
    h * I
}

/// Skew-Hermitian controls `iB_axis = i Σ_j γ_j S_axis^j` for x, y, z.
pub fn control_generators(net: &SpinNetwork) -> [Operator; 3] {
    PauliAxis::ALL.map(|axis| {
        let mut h = zeros(net.full_dim());
        for (j, cl) in net.clusters().iter().enumerate() {
            if cl.gamma != 0.0 {
                h += cluster_spin(axis, j, net).expect("valid cluster") * c(cl.gamma);
            }
        }
        h * I
    })
}

/// The unreduced generating set `{iA, iB_x, iB_y, iB_z}`.
pub fn full_generators(net: &SpinNetwork) -> Vec<Operator> {
    let mut out = vec![drift_generator(net)];
    out.extend(control_generators(net));
    out
}

/// Local spins of every cluster plus one two-body term per nonzero coupling
/// component; generates the same Lie algebra as [`full_generators`] when the
/// gyromagnetic ratios are nonzero and pairwise distinct.
pub fn reduced_generators(net: &SpinNetwork) -> Result<Vec<Operator>> {
    net.require_distinct_gammas()?;
    let mut out = Vec::new();
    for j in 0..net.num_clusters() {
        for axis in PauliAxis::ALL {
            out.push(cluster_spin(axis, j, net)? * I);
        }
    }
    for ((j, k), coupling) in net.couplings() {
        for (axis, strength) in [(PauliAxis::Z, coupling.zz), (PauliAxis::X, coupling.xx), (PauliAxis::Y, coupling.yy)]
        {
            if strength != 0.0 {
                out.push(cluster_spin_pair(axis, j, k, net)? * I);
            }
        }
    }
    Ok(out)
}

/// Skew-Hermitian drift `i Σ_{i<k} J_ik σ_z^i σ_z^k` of a per-spin network.
pub fn spin_level_drift(net: &SpinLevelNetwork) -> Operator {
    let n = net.num_spins();
    let sz = pauli(PauliAxis::Z);
    let mut h = zeros(net.full_dim());
    for ((i, k), j) in net.couplings() {
        if j != 0.0 {
            h += two_site(&sz, i, &sz, k, n) * c(j);
        }
    }
    h * I
}

/// Controls `i Σ_i γ_i σ_axis^i` of a per-spin network.
pub fn spin_level_controls(net: &SpinLevelNetwork) -> [Operator; 3] {
    let n = net.num_spins();
    PauliAxis::ALL.map(|axis| {
        let p = pauli(axis);
        let mut h = zeros(net.full_dim());
        for (i, &g) in net.gammas().iter().enumerate() {
            if g != 0.0 {
                h += single_site(&p, i, n) * c(g);
            }
        }
        h * I
    })
}

pub fn spin_level_full_generators(net: &SpinLevelNetwork) -> Vec<Operator> {
    let mut out = vec![spin_level_drift(net)];
    out.extend(spin_level_controls(net));
    out
}

/// Generators for the per-spin model: collective local spins of each group of
/// equal nonzero ratio, plus the full drift. No coupling is split off the
/// drift, so equal-ratio spins stay symmetric exactly when their couplings are.
pub fn spin_level_generators(net: &SpinLevelNetwork) -> Vec<Operator> {
    let n = net.num_spins();
    let mut out = Vec::new();
    for (gamma, members) in net.gamma_groups() {
        if gamma == 0.0 {
            continue;
        }
        for axis in PauliAxis::ALL {
            let p = pauli(axis);
            let mut h = zeros(net.full_dim());
            for &i in &members {
                h += single_site(&p, i, n);
            }
            out.push(h * I);
        }
    }
    out.push(spin_level_drift(net));
    out
}

/// Scalar multiple of the identity as a skew-Hermitian generator `i·s·1`.
pub fn scalar_generator(dim: usize, s: f64) -> Operator {
    identity(dim) * Complex64::new(0.0, s)
}

/// `{iI_zz, iS_x, iS_y, iS_z}` on `n` spins, plus `i·1` when requested.
pub fn symmetric_generators(n: usize, with_identity: bool) -> Result<Vec<Operator>> {
    let mut out = vec![pair_sum(PauliAxis::Z, PauliAxis::Z, n)? * I];
    for axis in PauliAxis::ALL {
        out.push(collective_s(axis, n)? * I);
    }
    if with_identity {
        out.push(scalar_generator(1 << n, 1.0));
    }
    Ok(out)
}
