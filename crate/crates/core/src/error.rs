use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cluster size must be positive")]
    EmptyCluster,
    #[error("gyromagnetic ratio must be finite, got {0}")]
    NonFiniteGamma(f64),
    #[error("cluster {cluster} has zero gyromagnetic ratio; generator reduction needs nonzero ratios")]
    ZeroGamma { cluster: usize },
    #[error(
        "clusters {first} and {second} share gyromagnetic ratio {gamma}; generator reduction needs distinct ratios"
    )]
    RepeatedGamma { first: usize, second: usize, gamma: f64 },
    #[error("index {index} out of range for {count} entries")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("coupling ({j}, {k}) must satisfy j < k")]
    BadCouplingOrder { j: usize, k: usize },
    #[error("duplicate coupling ({j}, {k})")]
    DuplicateCoupling { j: usize, k: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("irrep label {f} does not occur in (V^1)^{{⊗{n}}}")]
    LabelNotPresent { n: usize, f: usize },
    #[error("copy index {copy} out of range 1..={available} for label {f}")]
    CopyOutOfRange { f: usize, copy: usize, available: usize },
    #[error("selection has {found} labels but the network has {expected} clusters")]
    SelectionLength { expected: usize, found: usize },
    #[error("found {found} highest-weight vectors for (n={n}, f={f}), expected {expected}")]
    HighestWeightCount { n: usize, f: usize, expected: usize, found: usize },
    #[error("lowering ladder for (n={n}, f={f}) collapsed at step {step}")]
    LadderBreakdown { n: usize, f: usize, step: usize },
    #[error("operator is not skew-Hermitian (relative defect {defect:e})")]
    NotSkewHermitian { defect: f64 },
    #[error("operator leaks out of the subspace (residual {residual:e})")]
    Leakage { residual: f64 },
    #[error("dimension {dim} exceeds the configured cap {cap}")]
    CapExceeded { dim: usize, cap: usize },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("invalid spec document: {0}")]
    Spec(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
