//! The crate-wide error type.
//!
//! Every fallible operation returns one of these variants.  Each carries a
//! human-readable detail string and maps to a stable machine-readable code
//! (used by the CLI): `DegenerateRoots`, `InvalidBranch`, `NotRealizable`,
//! `Inconsistent`, `InvalidShift`.

use serde::Serialize;

/// Domain errors.
///
/// Design note: a vanishing denominator in a closed-form product is an error
/// ([`Error::DegenerateRoots`]), not a limit evaluation — a continuous
/// extension exists in principle but no formula for it is implemented, so the
/// engine refuses rather than guessing.  Conversely, a coefficient requested
/// *outside* its support is an exact zero, not an error.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Two characteristic roots needed distinct coincide, so a closed-form
    /// denominator (or a projector) is undefined.
    #[error("degenerate characteristic roots: {detail}")]
    DegenerateRoots { detail: String },

    /// A claimed parent/child pair violates the branching rule.
    #[error("invalid branch: {detail}")]
    InvalidBranch { detail: String },

    /// The requested module is outside the family the oracle can build.
    #[error("not realizable by the oracle: {detail}")]
    NotRealizable { detail: String },

    /// An internal cross-check failed; indicates a bug or an input outside
    /// the domain of validity (e.g. failed complete reducibility).
    #[error("inconsistent: {detail}")]
    Inconsistent { detail: String },

    /// A shift pattern for a full Wigner coefficient produced a non-dominant
    /// intermediate weight or an invalid branch.
    #[error("invalid shift chain: {detail}")]
    InvalidShift { detail: String },
}

impl Error {
    /// Stable machine-readable code for CLI/JSON reporting.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegenerateRoots { .. } => "DegenerateRoots",
            Error::InvalidBranch { .. } => "InvalidBranch",
            Error::NotRealizable { .. } => "NotRealizable",
            Error::Inconsistent { .. } => "Inconsistent",
            Error::InvalidShift { .. } => "InvalidShift",
        }
    }

    pub fn detail(&self) -> &str {
        match self {
            Error::DegenerateRoots { detail }
            | Error::InvalidBranch { detail }
            | Error::NotRealizable { detail }
            | Error::Inconsistent { detail }
            | Error::InvalidShift { detail } => detail,
        }
    }

    pub fn degenerate(detail: impl Into<String>) -> Self {
        Error::DegenerateRoots {
            detail: detail.into(),
        }
    }

    pub fn invalid_branch(detail: impl Into<String>) -> Self {
        Error::InvalidBranch {
            detail: detail.into(),
        }
    }

    pub fn not_realizable(detail: impl Into<String>) -> Self {
        Error::NotRealizable {
            detail: detail.into(),
        }
    }

    pub fn inconsistent(detail: impl Into<String>) -> Self {
        Error::Inconsistent {
            detail: detail.into(),
        }
    }

    pub fn invalid_shift(detail: impl Into<String>) -> Self {
        Error::InvalidShift {
            detail: detail.into(),
        }
    }
}

impl Serialize for Error {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Error", 2)?;
        s.serialize_field("code", self.code())?;
        s.serialize_field("detail", self.detail())?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_stable() {
        assert_eq!(Error::degenerate("x").code(), "DegenerateRoots");
        assert_eq!(Error::invalid_branch("x").code(), "InvalidBranch");
        assert_eq!(Error::not_realizable("x").code(), "NotRealizable");
        assert_eq!(Error::inconsistent("x").code(), "Inconsistent");
        assert_eq!(Error::invalid_shift("x").code(), "InvalidShift");
    }

    #[test]
    fn serializes_with_code_and_detail() {
        let e = Error::degenerate("roots 1 and 3 collide");
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(
            json,
            "{\"code\":\"DegenerateRoots\",\"detail\":\"roots 1 and 3 collide\"}"
        );
    }
}
