use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid sector (N={n_total}, J={j_imbalance}): {reason}")]
    InvalidSector {
        n_total: i64,
        j_imbalance: i64,
        reason: &'static str,
    },

    #[error("basis index {index} outside {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("Ω must be non-zero for {0}")]
    ZeroOmega(&'static str),

    #[error("point outside the phase-space domain: z={z} not in [{lo}, 1]")]
    OutsideDomain { z: f64, lo: f64 },

    #[error("evaluation on the phase-space boundary z={0}, radical vanishes")]
    BoundaryEvaluation(f64),

    #[error("g(z) diverges at z={0}")]
    Divergent(f64),

    #[error("eigensolver failed to converge for eigenvalue {index}")]
    NoConvergence { index: usize },

    #[error("ground state is (near-)degenerate: gap {gap:e} at E0={e0}")]
    DegenerateGroundState { e0: f64, gap: f64 },

    #[error("m={m} exceeds the limit {limit} for the unnormalised recursion")]
    SectorTooLarge { m: usize, limit: usize },

    #[error("recursion overflowed at coefficient {index}")]
    Overflow { index: usize },

    #[error("repeated Bethe roots {a} and {b} (BAE singular)")]
    RepeatedRoots { a: String, b: String },

    #[error("Bethe-equation refinement diverged (residual {residual:e})")]
    RefinementDiverged { residual: f64 },

    #[error("potential is singular at x={0}")]
    Singular(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("states belong to different sectors")]
    SectorMismatch,

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("malformed CSV at line {line}: {reason}")]
    Malformed { line: usize, reason: String },

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
