use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix width {0} is outside 1..=64")]
    Width(usize),

    #[error("row {row} has bits set at or above column {cols}")]
    RowOverflow { row: usize, cols: usize },

    #[error("k must be at least 1")]
    ZeroWidth,

    #[error("index {idx} is out of range for n = {n}, k = {k}")]
    IndexOutOfRange { idx: String, n: usize, k: usize },

    #[error("block {block} has coefficient bits beyond a_{{k+1}} for k = {k}")]
    BlockOverflow { block: usize, k: usize },

    #[error("tuple has {got} bits, expected n(k+1) = {expected}")]
    TupleLength { expected: usize, got: usize },

    /// The requested enumeration exceeds the configured ceiling.
    #[error("budget exceeded: {what} needs 2^{log2_cost} steps (limit 2^{limit})")]
    Budget {
        what: &'static str,
        log2_cost: usize,
        limit: usize,
    },

    /// A closed form is only asserted for `k` at or above its threshold.
    #[error("formula for rank {rank} is not asserted for k = {k} (requires k >= {min_k})")]
    FormulaNotAsserted { rank: usize, k: usize, min_k: usize },

    #[error("no closed form covers n = {n}, k = {k}: {reason}")]
    Unsupported { n: usize, k: usize, reason: String },

    #[error("expected an integer but evaluated to {0}")]
    NonIntegral(String),

    #[error("polynomial of degree {degree} needs tail depth > {degree}, got {depth}")]
    TailTooShort { degree: usize, depth: usize },

    #[error("distribution is for n = {got_n}, k = {got_k}, expected n = {n}, k = {k}")]
    Mismatch {
        n: usize,
        k: usize,
        got_n: usize,
        got_k: usize,
    },

    #[error("inconsistent system: {0}")]
    Inconsistent(String),
}
