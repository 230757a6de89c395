use thiserror::Error;

use crate::subset::SubsetMask;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set of {0} elements exceeds the supported maximum of 31")]
    GroundSetTooLarge(usize),

    #[error("subset {mask} is not contained in a ground set of {size} elements")]
    InvalidSubset { mask: SubsetMask, size: usize },

    #[error("{what} = {value} is out of range 0..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("rank axioms violated: {reason} (witness S={s}, T={t})")]
    RankAxiom {
        reason: &'static str,
        s: SubsetMask,
        t: SubsetMask,
    },

    #[error("invalid matroid description: {0}")]
    Schema(String),

    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),

    #[error("characteristic polynomial is not divisible by q - 1 (remainder {0})")]
    NonDivisible(String),

    #[error("matroid has a loop; simplify it first")]
    HasLoops,

    #[error("subset {0} must be proper and nonempty")]
    ImproperSubset(SubsetMask),

    #[error("weight is not balanced at the cone of flag {0:?}")]
    NotBalanced(Vec<SubsetMask>),

    #[error("displacement vector is not generic for cones {sigma:?} and {tau:?}")]
    DegenerateDisplacement {
        sigma: Vec<SubsetMask>,
        tau: Vec<SubsetMask>,
    },

    #[error("no generic displacement vector found after {0} attempts")]
    RetriesExhausted(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl Error {
    /// Whether the error is the caller's fault (bad description, invalid
    /// matroid) rather than a broken invariant inside a computation.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::GroundSetTooLarge(_)
                | Error::InvalidSubset { .. }
                | Error::RankAxiom { .. }
                | Error::Schema(_)
                | Error::NotPrime(_)
                | Error::HasLoops
                | Error::ImproperSubset(_)
        )
    }
}
