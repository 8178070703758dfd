use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Operands whose sizes or orders disagree.
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("division by zero")]
    DivisionByZero,

    /// A collected power of a polynomial would hold more monomials than allowed.
    #[error("term budget exceeded at k = {k}: {terms} terms exceed the budget of {budget}")]
    TermBudget { k: u32, terms: u128, budget: u64 },

    /// An index-sequence enumeration would visit more sequences than allowed.
    #[error("enumeration budget exceeded: {visits} sequence visits exceed the budget of {budget}")]
    VisitBudget { visits: u128, budget: u64 },

    /// Exhaustive enumeration over S_n refused for this n.
    #[error("n = {n} exceeds the exhaustive-enumeration cap of {cap}")]
    Cap { n: usize, cap: usize },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::TermBudget { .. } | Error::VisitBudget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
