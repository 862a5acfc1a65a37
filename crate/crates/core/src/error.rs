use thiserror::Error;

/// Errors produced while building or validating groups, representations,
/// states and Wigner tables.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cayley table is empty")]
    EmptyTable,
    #[error("cayley table row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("cayley table entry ({row}, {col}) = {value} is out of range for order {order}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, order: usize },
    #[error("not a latin square: {line} {index} repeats element {value}")]
    NotLatinSquare { line: &'static str, index: usize, value: usize },
    #[error("no identity element in cayley table")]
    NoIdentity,
    #[error("element {element} has no inverse")]
    MissingInverse { element: usize },
    #[error("associativity fails for ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group order {order} exceeds the validation limit {limit}")]
    OrderTooLarge { order: usize, limit: usize },
    #[error("invalid metacyclic parameters (p={p}, q={q}, k={k}): {reason}")]
    InvalidMetacyclic { p: usize, q: usize, k: usize, reason: String },
    #[error("element index {index} out of range for group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),

    #[error("even order group ({order}): {first}^2 = {second}^2 = {square}")]
    EvenOrderGroup { order: usize, first: usize, second: usize, square: usize },
    #[error("square root constructions disagree at element {element}: {by_inversion} vs {by_power}")]
    SquareRootMismatch { element: usize, by_inversion: usize, by_power: usize },

    #[error("irrep set dimensions: sum of squares is {sum}, group order is {order}")]
    DimensionSum { sum: usize, order: usize },
    #[error("irrep {label}: {reason}")]
    MalformedIrrep { label: i64, reason: String },
    #[error("irrep {label} is not unitary at element {element} (residual {residual:e})")]
    NotUnitary { label: i64, element: usize, residual: f64 },
    #[error("irrep {label} is not a homomorphism at ({first}, {second}) (residual {residual:e})")]
    NotHomomorphism { label: i64, first: usize, second: usize, residual: f64 },
    #[error("orthogonality residual {residual:e} exceeds tolerance")]
    Orthogonality { residual: f64 },
    #[error("completeness residual {residual:e} exceeds tolerance")]
    Completeness { residual: f64 },
    #[error("trace of irrep {label} varies within class {class}")]
    CharacterNotClassFunction { label: i64, class: usize },
    #[error("orbit decomposition produced {found} irreps of dimension {q}, expected {expected}")]
    OrbitDecomposition { q: usize, found: usize, expected: usize },

    #[error("state has {len} amplitudes, group order is {order}")]
    StateLength { len: usize, order: usize },
    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("cannot normalize zero state")]
    ZeroState,
    #[error("non-finite amplitude at element {0}")]
    NonFinite(usize),
    #[error("momentum coefficients: expected {expected} entries, got {len}")]
    CoefficientLength { len: usize, expected: usize },
    #[error("density operator: {0}")]
    InvalidDensity(String),

    #[error("wigner tables are incompatible: {0}")]
    IncompatibleTables(String),

    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
