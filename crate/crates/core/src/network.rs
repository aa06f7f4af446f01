//! Network descriptions: the uniform multipartite model and the per-spin model.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A cluster of indistinguishable spins sharing one gyromagnetic ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    pub size: usize,
    pub gamma: f64,
}

impl Cluster {
    pub fn new(size: usize, gamma: f64) -> Self {
        Self { size, gamma }
    }
}

/// Two-body coupling between every spin of one cluster and every spin of another.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Coupling {
    pub zz: f64,
    pub xx: f64,
    pub yy: f64,
}

impl Coupling {
    pub fn ising(zz: f64) -> Self {
        Self { zz, xx: 0.0, yy: 0.0 }
    }

    pub fn is_nonzero(&self) -> bool {
        self.zz != 0.0 || self.xx != 0.0 || self.yy != 0.0
    }
}

/// Multipartite network: ordered clusters plus inter-cluster couplings.
///
/// Cluster indices are 0-based; the first cluster is the leftmost tensor
/// factor. Couplings are keyed by `(j, k)` with `j < k`. Connectedness is not
/// required.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinNetwork {
    clusters: Vec<Cluster>,
    couplings: BTreeMap<(usize, usize), Coupling>,
}

impl SpinNetwork {
    pub fn new<C>(clusters: Vec<Cluster>, couplings: C) -> Result<Self>
    where
        C: IntoIterator<Item = ((usize, usize), Coupling)>,
    {
        if clusters.is_empty() {
            return Err(Error::Spec("network has no clusters".into()));
        }
        for cl in &clusters {
            if cl.size == 0 {
                return Err(Error::EmptyCluster);
            }
            if !cl.gamma.is_finite() {
                return Err(Error::NonFiniteGamma(cl.gamma));
            }
        }
        let count = clusters.len();
        let mut map = BTreeMap::new();
        for ((j, k), coupling) in couplings {
            if j >= k {
                return Err(Error::BadCouplingOrder { j, k });
            }
            if k >= count {
                return Err(Error::IndexOutOfRange { index: k, count });
            }
            if ![coupling.zz, coupling.xx, coupling.yy].iter().all(|v| v.is_finite()) {
                return Err(Error::Spec(format!("coupling ({j}, {k}) is not finite")));
            }
            if map.insert((j, k), coupling).is_some() {
                return Err(Error::DuplicateCoupling { j, k });
            }
        }
        Ok(Self { clusters, couplings: map })
    }

    /// Ising network with unit-free `zz` couplings on the given edges.
    pub fn ising(clusters: Vec<Cluster>, edges: &[(usize, usize, f64)]) -> Result<Self> {
        Self::new(clusters, edges.iter().map(|&(j, k, zz)| ((j, k), Coupling::ising(zz))))
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn num_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.size).collect()
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| c.gamma).collect()
    }

    pub fn total_spins(&self) -> usize {
        self.clusters.iter().map(|c| c.size).sum()
    }

    /// `2^(Σ n_j)`, saturating at `usize::MAX` for absurd sizes.
    pub fn full_dim(&self) -> usize {
        1usize.checked_shl(self.total_spins() as u32).unwrap_or(usize::MAX)
    }

    /// Coupling between clusters `j` and `k` in either order; zero when absent.
    pub fn coupling(&self, j: usize, k: usize) -> Coupling {
        let key = if j < k { (j, k) } else { (k, j) };
        self.couplings.get(&key).copied().unwrap_or_default()
    }

    /// All stored couplings, including zero ones, in key order.
    pub fn couplings(&self) -> impl Iterator<Item = ((usize, usize), Coupling)> + '_ {
        self.couplings.iter().map(|(&k, &v)| (k, v))
    }

    /// Edges of the connectivity graph: pairs with a nonzero coupling.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.couplings.iter().filter(|(_, c)| c.is_nonzero()).map(|(&k, _)| k).collect()
    }

    /// Checks the standing assumption behind generator reduction: every
    /// gyromagnetic ratio is nonzero and no two coincide.
    pub fn require_distinct_gammas(&self) -> Result<()> {
        for (j, cl) in self.clusters.iter().enumerate() {
            if cl.gamma == 0.0 {
                return Err(Error::ZeroGamma { cluster: j });
            }
            for (k, other) in self.clusters.iter().enumerate().skip(j + 1) {
                if cl.gamma == other.gamma {
                    return Err(Error::RepeatedGamma { first: j, second: k, gamma: cl.gamma });
                }
            }
        }
        Ok(())
    }
}

/// Per-spin model: every spin has its own ratio and its own `zz` couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinLevelNetwork {
    gammas: Vec<f64>,
    couplings: BTreeMap<(usize, usize), f64>,
}

impl SpinLevelNetwork {
    pub fn new<C>(gammas: Vec<f64>, couplings: C) -> Result<Self>
    where
        C: IntoIterator<Item = ((usize, usize), f64)>,
    {
        if gammas.is_empty() {
            return Err(Error::Spec("network has no spins".into()));
        }
        if let Some(&g) = gammas.iter().find(|g| !g.is_finite()) {
            return Err(Error::NonFiniteGamma(g));
        }
        let count = gammas.len();
        let mut map = BTreeMap::new();
        for ((i, k), j) in couplings {
            if i >= k {
                return Err(Error::BadCouplingOrder { j: i, k });
            }
            if k >= count {
                return Err(Error::IndexOutOfRange { index: k, count });
            }
            if !j.is_finite() {
                return Err(Error::Spec(format!("coupling ({i}, {k}) is not finite")));
            }
            if map.insert((i, k), j).is_some() {
                return Err(Error::DuplicateCoupling { j: i, k });
            }
        }
        Ok(Self { gammas, couplings: map })
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn num_spins(&self) -> usize {
        self.gammas.len()
    }

    pub fn full_dim(&self) -> usize {
        1usize.checked_shl(self.num_spins() as u32).unwrap_or(usize::MAX)
    }

    pub fn coupling(&self, i: usize, k: usize) -> f64 {
        let key = if i < k { (i, k) } else { (k, i) };
        self.couplings.get(&key).copied().unwrap_or(0.0)
    }

    pub fn couplings(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.couplings.iter().map(|(&k, &v)| (k, v))
    }

    /// Spins grouped by equal gyromagnetic ratio, groups ordered by first spin.
    pub fn gamma_groups(&self) -> Vec<(f64, Vec<usize>)> {
        let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
        for (i, &g) in self.gammas.iter().enumerate() {
            match groups.iter_mut().find(|(gg, _)| *gg == g) {
                Some((_, members)) => members.push(i),
                None => groups.push((g, vec![i])),
            }
        }
        groups
    }

    /// The equivalent uniform multipartite network, when one exists with the
    /// same tensor ordering: equal-ratio spins are contiguous, never coupled to
    /// each other, and every spin of a group couples identically to every spin
    /// of any other group.
    pub fn as_uniform(&self) -> Option<SpinNetwork> {
        let groups = self.gamma_groups();
        for (_, members) in &groups {
            let contiguous = members.windows(2).all(|w| w[1] == w[0] + 1);
            if !contiguous {
                return None;
            }
            for (a, &i) in members.iter().enumerate() {
                for &k in &members[a + 1..] {
                    if self.coupling(i, k) != 0.0 {
                        return None;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..groups.len()).collect();
        order.sort_by_key(|&g| groups[g].1[0]);
        let groups: Vec<_> = order.into_iter().map(|g| groups[g].clone()).collect();
        let mut edges = Vec::new();
        for a in 0..groups.len() {
            for b in (a + 1)..groups.len() {
                let first = self.coupling(groups[a].1[0], groups[b].1[0]);
                let uniform = groups[a].1.iter().all(|&i| groups[b].1.iter().all(|&k| self.coupling(i, k) == first));
                if !uniform {
                    return None;
                }
                if first != 0.0 {
                    edges.push((a, b, first));
                }
            }
        }
        let clusters = groups.iter().map(|(g, m)| Cluster::new(m.len(), *g)).collect();
        SpinNetwork::ising(clusters, &edges).ok()
    }
}
