use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },

    #[error("matrix has {rows} rows of data but dimension {dim} requires {dim}x{dim} entries")]
    Shape { rows: usize, dim: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: |H[{row},{col}] - conj(H[{col},{row}])| = {residual:e}")]
    NotHermitian { row: usize, col: usize, residual: f64 },

    #[error("matrix is not unitary: max |U^dag U - I| = {residual:e}")]
    NotUnitary { residual: f64 },

    #[error("matrix is not traceless: |Tr H| = {trace:e}")]
    NotTraceless { trace: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("index {index} out of range (valid range 1..={max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid sector coordinates {0}")]
    InvalidLabel(String),

    #[error("block count {c} holds {capacity} matrices but {required} were given (need c >= {min_c})")]
    BlockCapacity { c: usize, capacity: usize, required: usize, min_c: usize },

    #[error("structure constant table is inconsistent: {0}")]
    Inconsistent(String),

    #[error("empty Hamiltonian set")]
    EmptySet,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("word length cap {cap} exceeds {limit}; pass --force to enumerate anyway")]
    WordCapExceeded { cap: usize, limit: usize },

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
