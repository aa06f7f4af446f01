//! Subspace controllability of multipartite spin-1/2 networks.
//!
//! The crate builds the Hamiltonian generators of a spin network, splits the
//! state space into the invariant subspaces coming from the Clebsch-Gordan
//! decomposition of every cluster, predicts the Lie algebra acting on each
//! subspace from its associated graph, and checks every prediction against a
//! brute-force numerical Lie closure.

pub mod cache;
pub mod catalog;
pub mod cg;
pub mod classify;
pub mod error;
pub mod linalg;
pub mod netspec;
pub mod network;
pub mod operators;
pub mod oracle;
pub mod report;
pub mod selftest;

pub use cg::{ClusterDecomposition, SubspaceSelection};
pub use classify::{AlgebraBlock, LieAlgebraDescriptor};
pub use error::{Error, Result};
pub use linalg::Operator;
pub use netspec::{parse_spec, ParsedSpec, SpecDocument};
pub use network::{Cluster, Coupling, SpinLevelNetwork, SpinNetwork};
pub use operators::PauliAxis;
pub use oracle::{ClosureOptions, ClosureResult, NetworkModel, VerifyOptions};
pub use report::{ClassificationReport, Format};
