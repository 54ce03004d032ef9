use thiserror::Error;

use crate::algebra::MatrixUnit;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("unit {unit} does not belong to shape {shape:?}")]
    UnitOutOfRange { unit: MatrixUnit, shape: Vec<usize> },

    #[error("operands come from different shapes: {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("unit {0} is not diagonal")]
    NotDiagonal(MatrixUnit),

    #[error("unit set is not up-closed: {0} is a member but {1} is not")]
    NotUpClosed(MatrixUnit, MatrixUnit),

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("ideal is not an element of the lattice")]
    NotInLattice,

    #[error("point {0} of the ideal space is the improper ideal")]
    ImproperPoint(usize),

    #[error("points {0} and {1} of the ideal space coincide")]
    DuplicatePoint(usize, usize),

    #[error("invalid strand: {0}")]
    InvalidStrand(String),

    #[error("strand images overlap at target block {block}, position {position}")]
    OverlappingStrands { block: usize, position: usize },

    #[error("embedding is not unital: target block {block}, position {position} is not covered")]
    NotUnital { block: usize, position: usize },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("invalid tower: {0}")]
    InvalidTower(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("ideal sequence is not in standard form at level {0}")]
    NotStandardForm(usize),

    #[error("embedding at level {0} has a component that is neither standard nor refinement")]
    NotStandardOrRefinement(usize),

    #[error("no summand of {unit} at level {level} avoids the ideal")]
    NoAvoidingSummand { unit: MatrixUnit, level: usize },
}
