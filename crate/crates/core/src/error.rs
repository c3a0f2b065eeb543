use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid `{field}`: {reason}")]
    InvalidParams { field: String, reason: String },

    #[error("inadmissible (p, e, r) = ({p}, {e}, {r}): e·r = {} but the bound is e·r ≤ p − 2", e * r)]
    Inadmissible { p: u32, e: u32, r: u32 },

    #[error("field of order {p}^{m} exceeds the supported table size")]
    FieldTooLarge { p: u32, m: u32 },

    #[error("element does not lie in GF(p^{degree})")]
    NotInSubfield { degree: u32 },

    #[error("ambient field GF({p}^{have}) does not contain GF({p}^{need})")]
    AmbientTooSmall { p: u32, have: u32, need: u32 },

    #[error("element is not in Fil^{level}: {detail}")]
    NotInFil { level: u32, detail: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid filtration: {0}")]
    InvalidFil(String),

    #[error("weight {weight} outside [0, {bound}]")]
    WeightOutOfRange { weight: u32, bound: u32 },

    #[error("matrix G is not invertible")]
    SingularG,

    #[error("object is not in cyclic form")]
    NotCyclic,

    #[error("element is not a root of unity of order dividing {order}")]
    NotRootOfUnity { order: u64 },

    #[error("bad solution pair: {0}")]
    BadSolutionPair(String),

    #[error("no consistent sign sequence: {0}")]
    NoConsistentSigns(String),

    #[error("not a morphism: {0}")]
    NotAMorphism(String),

    #[error("lift inconsistent: {0}")]
    LiftInconsistent(String),

    #[error("invalid object: {0}")]
    InvalidObject(String),

    #[error("element is not a unit")]
    NotAUnit,

    #[error("precision loss: {0}")]
    Precision(String),

    #[error("construction self-test failed: {0}")]
    SelfTest(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Whether the error describes bad input rather than a mathematical failure.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams { .. }
                | Error::Inadmissible { .. }
                | Error::FieldTooLarge { .. }
                | Error::NotInSubfield { .. }
                | Error::AmbientTooSmall { .. }
                | Error::DimensionMismatch(_)
                | Error::WeightOutOfRange { .. }
                | Error::SingularG
                | Error::NotCyclic
                | Error::NotRootOfUnity { .. }
                | Error::InvalidInput(_)
        )
    }

    pub(crate) fn params(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParams { field: field.to_string(), reason: reason.into() }
    }
}
