//! JSON network documents.
//!
//! ```json
//! {
//!   "mode": "multipartite",
//!   "clusters": [{"size": 2, "gamma": 1.0}, {"size": 1, "gamma": 2.0}],
//!   "couplings": [{"j": 1, "k": 2, "zz": 1.0}],
//!   "metadata": {"name": "example"}
//! }
//! ```
//!
//! Indices are 1-based and every coupling needs `j < k`. Spin-level
//! documents carry `"gammas"` and couplings `{"i", "k", "zz"}` instead.
//! Unknown fields are rejected; `metadata` is free-form.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::network::{Cluster, Coupling, SpinLevelNetwork, SpinNetwork};
use crate::oracle::NetworkModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterEntry {
    pub size: usize,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterCoupling {
    pub j: usize,
    pub k: usize,
    pub zz: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub xx: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub yy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinCoupling {
    pub i: usize,
    pub k: usize,
    pub zz: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpecDocument {
    Multipartite {
        clusters: Vec<ClusterEntry>,
        #[serde(default)]
        couplings: Vec<ClusterCoupling>,
        #[serde(default, skip_serializing_if = "Map::is_empty")]
        metadata: Map<String, Value>,
    },
    SpinLevel {
        gammas: Vec<f64>,
        #[serde(default)]
        couplings: Vec<SpinCoupling>,
        #[serde(default, skip_serializing_if = "Map::is_empty")]
        metadata: Map<String, Value>,
    },
}

/// A validated document.
#[derive(Debug, Clone)]
pub struct ParsedSpec {
    pub document: SpecDocument,
    pub model: NetworkModel,
    /// Non-fatal problems, such as repeated ratios in multipartite mode.
    pub warnings: Vec<String>,
}

impl ParsedSpec {
    /// The uniform network used for classification, if the model has one.
    pub fn uniform(&self) -> Option<SpinNetwork> {
        match &self.model {
            NetworkModel::Uniform(net) => Some(net.clone()),
            NetworkModel::SpinLevel(net) => net.as_uniform(),
        }
    }

    /// Uniform network with distinct ratios, as required by the classifier.
    pub fn classifiable(&self) -> Result<SpinNetwork> {
        let net = self
            .uniform()
            .ok_or_else(|| Error::Spec("spin-level network has no equivalent multipartite form to classify".into()))?;
        net.require_distinct_gammas()?;
        Ok(net)
    }

    pub fn full_dim(&self) -> usize {
        match &self.model {
            NetworkModel::Uniform(net) => net.full_dim(),
            NetworkModel::SpinLevel(net) => net.full_dim(),
        }
    }

    /// SHA-256 of the canonical document without metadata.
    pub fn hash(&self) -> String {
        let mut doc = self.document.clone();
        match &mut doc {
            SpecDocument::Multipartite { metadata, .. } | SpecDocument::SpinLevel { metadata, .. } => metadata.clear(),
        }
        let canonical = serde_json::to_string(&doc).expect("documents serialize");
        format!("{:x}", Sha256::digest(canonical.as_bytes()))
    }
}

pub fn parse_spec(text: &str) -> Result<ParsedSpec> {
    let document: SpecDocument = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
    let mut warnings = Vec::new();
    let model = match &document {
        SpecDocument::Multipartite { clusters, couplings, .. } => {
            let clusters: Vec<Cluster> = clusters.iter().map(|c| Cluster::new(c.size, c.gamma)).collect();
            let count = clusters.len();
            let mut edges = Vec::with_capacity(couplings.len());
            for c in couplings {
                let j = zero_based(c.j, count)?;
                let k = zero_based(c.k, count)?;
                if c.j >= c.k {
                    return Err(Error::BadCouplingOrder { j: c.j, k: c.k });
                }
                if edges.iter().any(|&(key, _)| key == (j, k)) {
                    return Err(Error::DuplicateCoupling { j: c.j, k: c.k });
                }
                edges.push(((j, k), Coupling { zz: c.zz, xx: c.xx, yy: c.yy }));
            }
            let net = SpinNetwork::new(clusters, edges)?;
            if let Err(e) = net.require_distinct_gammas() {
                warnings.push(format!("{e}; only raw closures are available"));
            }
            NetworkModel::Uniform(net)
        }
        SpecDocument::SpinLevel { gammas, couplings, .. } => {
            let count = gammas.len();
            let mut edges = Vec::with_capacity(couplings.len());
            for c in couplings {
                let i = zero_based(c.i, count)?;
                let k = zero_based(c.k, count)?;
                if c.i >= c.k {
                    return Err(Error::BadCouplingOrder { j: c.i, k: c.k });
                }
                if edges.iter().any(|&(key, _)| key == (i, k)) {
                    return Err(Error::DuplicateCoupling { j: c.i, k: c.k });
                }
                edges.push(((i, k), c.zz));
            }
            NetworkModel::SpinLevel(SpinLevelNetwork::new(gammas.clone(), edges)?)
        }
    };
    Ok(ParsedSpec { document, model, warnings })
}

fn zero_based(index: usize, count: usize) -> Result<usize> {
    if index == 0 || index > count {
        return Err(Error::IndexOutOfRange { index, count });
    }
    Ok(index - 1)
}

impl SpecDocument {
    /// Document describing `net`, couplings in `(j, k)` order.
    pub fn from_network(net: &SpinNetwork) -> Self {
        SpecDocument::Multipartite {
            clusters: net.clusters().iter().map(|c| ClusterEntry { size: c.size, gamma: c.gamma }).collect(),
            couplings: net
                .couplings()
                .map(|((j, k), c)| ClusterCoupling { j: j + 1, k: k + 1, zz: c.zz, xx: c.xx, yy: c.yy })
                .collect(),
            metadata: Map::new(),
        }
    }

    pub fn from_spin_level(net: &SpinLevelNetwork) -> Self {
        SpecDocument::SpinLevel {
            gammas: net.gammas().to_vec(),
            couplings: net.couplings().map(|((i, k), zz)| SpinCoupling { i: i + 1, k: k + 1, zz }).collect(),
            metadata: Map::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOUR: &str = r#"{
        "mode": "multipartite",
        "clusters": [
            {"size": 2, "gamma": 1}, {"size": 2, "gamma": 2},
            {"size": 3, "gamma": 3}, {"size": 1, "gamma": 4}
        ],
        "couplings": [
            {"j": 1, "k": 2, "zz": 1}, {"j": 2, "k": 3, "zz": 1},
            {"j": 2, "k": 4, "zz": 1}, {"j": 3, "k": 4, "zz": 1}
        ],
        "metadata": {"name": "four clusters", "notes": ["any", {"json": true}]}
    }"#;

    #[test]
    fn parses_multipartite() {
        let spec = parse_spec(FOUR).unwrap();
        let net = spec.classifiable().unwrap();
        assert_eq!(net.sizes(), vec![2, 2, 3, 1]);
        assert_eq!(net.edges(), vec![(0, 1), (1, 2), (1, 3), (2, 3)]);
        assert!(spec.warnings.is_empty());
        assert_eq!(spec.full_dim(), 256);
    }

    #[test]
    fn single_cluster() {
        let spec = parse_spec(r#"{"mode":"multipartite","clusters":[{"size":3,"gamma":1.5}]}"#).unwrap();
        assert_eq!(spec.uniform().unwrap().num_clusters(), 1);
    }

    #[test]
    fn rejects_bad_documents() {
        let cases = [
            r#"{"mode":"multipartite","clusters":[{"size":1,"gamma":1}],"extra":1}"#,
            r#"{"mode":"multipartite","clusters":[{"size":1,"gamma":1,"spin":2}]}"#,
            r#"{"mode":"other","clusters":[]}"#,
            r#"{"mode":"multipartite","clusters":[{"size":1,"gamma":1},{"size":1,"gamma":2}],"couplings":[{"j":2,"k":1,"zz":1}]}"#,
            r#"{"mode":"multipartite","clusters":[{"size":1,"gamma":1},{"size":1,"gamma":2}],"couplings":[{"j":0,"k":1,"zz":1}]}"#,
            r#"{"mode":"multipartite","clusters":[{"size":1,"gamma":1},{"size":1,"gamma":2}],"couplings":[{"j":1,"k":3,"zz":1}]}"#,
            r#"{"mode":"multipartite","clusters":[{"size":1,"gamma":1},{"size":1,"gamma":2}],"couplings":[{"j":1,"k":2,"zz":1},{"j":1,"k":2,"zz":2}]}"#,
            r#"{"mode":"multipartite","clusters":[{"size":0,"gamma":1}]}"#,
            r#"{"mode":"multipartite","clusters":[]}"#,
            r#"{"mode":"spin_level","gammas":[1,2],"couplings":[{"j":1,"k":2,"zz":1}]}"#,
            "not json",
        ];
        for case in cases {
            assert!(parse_spec(case).is_err(), "accepted {case}");
        }
    }

    #[test]
    fn repeated_gamma_only_blocks_classification() {
        let text = r#"{"mode":"multipartite","clusters":[{"size":1,"gamma":1},{"size":2,"gamma":1}],"couplings":[{"j":1,"k":2,"zz":1}]}"#;
        let spec = parse_spec(text).unwrap();
        assert_eq!(spec.warnings.len(), 1);
        assert!(matches!(spec.classifiable(), Err(Error::RepeatedGamma { .. })));
    }

    #[test]
    fn spin_level_maps_to_clusters() {
        let text = r#"{"mode":"spin_level","gammas":[1,1,2],"couplings":[{"i":1,"k":3,"zz":1},{"i":2,"k":3,"zz":1}]}"#;
        let spec = parse_spec(text).unwrap();
        assert_eq!(spec.classifiable().unwrap().sizes(), vec![2, 1]);
        let text = r#"{"mode":"spin_level","gammas":[1,1,2],"couplings":[{"i":1,"k":3,"zz":1},{"i":2,"k":3,"zz":2}]}"#;
        assert!(parse_spec(text).unwrap().uniform().is_none());
    }

    #[test]
    fn round_trip_and_hash() {
        let spec = parse_spec(FOUR).unwrap();
        let again = parse_spec(&spec.document.to_json()).unwrap();
        assert_eq!(again.document, spec.document);
        assert_eq!(again.hash(), spec.hash());
        let net = spec.uniform().unwrap();
        let rebuilt = parse_spec(&SpecDocument::from_network(&net).to_json()).unwrap();
        // Metadata does not enter the hash.
        assert_eq!(rebuilt.hash(), spec.hash());
        assert_eq!(rebuilt.uniform().unwrap(), net);
    }
}
