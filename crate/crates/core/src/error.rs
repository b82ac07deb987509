use num_rational::BigRational;
use thiserror::Error;

use crate::parser::ParseError;
use crate::world::DensityReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid atom name `{0}`: atoms are a letter followed by letters, digits or underscores")]
    InvalidAtomName(String),

    #[error("`{0}` is a reserved word and cannot name an atom")]
    ReservedAtomName(String),

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("world `{world}` makes undeclared atom `{atom}` true")]
    UndeclaredWorldAtom { world: String, atom: String },

    #[error("evidence `{0}` has probability 0 under the density; conditioning is undefined")]
    ZeroEvidence(String),

    #[error("`{fact}` contradicts the current evidence `{evidence}`: their conjunction has probability 0")]
    Contradiction { fact: String, evidence: String },

    #[error("invalid density: {0}")]
    InvalidDensity(DensityReport),

    #[error("table for {atoms} atoms needs {expected} masses, got {found}")]
    LengthMismatch {
        atoms: usize,
        expected: usize,
        found: usize,
    },

    #[error("dense tables are limited to {limit} atoms, got {found}")]
    TooManyAtoms { limit: usize, found: usize },

    #[error("a lottery needs at least one ticket")]
    NoTickets,

    #[error("invalid payoff: {0}")]
    InvalidPayoff(String),

    #[error("probability {0} is outside [0, 1]")]
    OutOfRange(BigRational),
}
