use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown type identifier {0:?}")]
    UnknownType(String),
    #[error("type {type_id} is not supported: {reason}")]
    ExcludedType { type_id: String, reason: String },
    #[error("operands belong to different root data")]
    MismatchedType,
    #[error("vector is not in the active lattice")]
    NotInLattice,
    #[error("root is isotropic")]
    IsotropicRoot,
    #[error("root is not in the double affine root set")]
    NotARoot,
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("matrix is not in the double affine Weyl group: {0}")]
    NotInGroup(String),
    #[error("element is not in the affine Weyl subgroup")]
    NotAffine,
    #[error("presentation kind {kind} is not available for {type_id}: {reason}")]
    UnsupportedKind {
        kind: String,
        type_id: String,
        reason: String,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("derivation step {index} is invalid: {reason}")]
    BadStep { index: usize, reason: String },
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
