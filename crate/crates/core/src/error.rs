use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("closure enumeration exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("generator is not a bijection: {0}")]
    NotBijective(String),
    #[error("element {0} is not in the group")]
    ElementNotInGroup(usize),
    #[error("{what}: size {size} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("action is not regular: {0}")]
    NotRegular(String),
    #[error("complex is not pure")]
    NotPure,
    #[error("degree {degree} out of range (max {max})")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("cochains live on different complexes")]
    ComplexMismatch,
    #[error("not oriented: {0}")]
    NotOriented(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("orientation missing for conjugacy class of element {0}")]
    OrientationMissing(usize),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("map is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
    #[error("pair not preserved: {0}")]
    PairNotPreserved(String),
    #[error("not a cocycle or not in the span of the cohomology basis")]
    NotInSpan,
    #[error("parse error: {0}")]
    Parse(String),
}
