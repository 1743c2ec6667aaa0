use num_bigint::BigInt;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix does not have full column rank")]
    RankDeficient,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("the zero quaternion has no primitive form")]
    ZeroQuaternion,

    #[error("pair is not admissible: |p|^2 |q|^2 = {norm_product} is not a perfect square")]
    NotAdmissible { norm_product: BigInt },

    #[error("matrix is not a scaled rotation: {0}")]
    NotARotation(String),

    #[error("first lattice is not a sublattice of the second")]
    NotASublattice,

    #[error("enumeration budget exceeded: sigma {sigma} > budget {budget}")]
    BudgetExceeded { sigma: u64, budget: u64 },

    #[error("value does not fit the enumeration word size: {0}")]
    TooLarge(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
