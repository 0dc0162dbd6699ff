use crate::exact::Rational;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("binom({n}, {k}) has a negative integer top; use binom_gen for generalized binomials")]
    NegativeBinomialTop { n: i64, k: i64 },

    #[error("{context}: expected an integer count, got {value}")]
    NonIntegral { context: String, value: Rational },

    #[error("oracle refused n = {n}, r = {r}: cap is n <= {cap}, about {estimate} paths")]
    OracleCap {
        n: usize,
        r: u32,
        cap: usize,
        estimate: String,
    },

    #[error("statistic {0} needs a colored path")]
    Uncolored(String),

    #[error("composition needs g(0) = 0, got g(0) = {0}")]
    NonZeroConstant(Rational),

    #[error("functional equation has no unique solution: {kind} at order {order}")]
    FunctionalEquation { kind: &'static str, order: usize },

    #[error("coefficient x^{requested} requested but the series is truncated at order {order}")]
    BeyondOrder { requested: usize, order: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
