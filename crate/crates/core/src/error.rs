use thiserror::Error;

use crate::atom::Atom;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("unknown object {0}")]
    UnknownObject(Atom),

    #[error("unknown morphism {0}")]
    UnknownMorphism(Atom),

    #[error("{0} and {1} are not composable")]
    NotComposable(Atom, Atom),

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("invalid structure: {0}")]
    Invalid(String),

    /// An isomorphism witness or well-definedness check failed. Signals a
    /// defect in the kernel rather than bad input.
    #[error("witness failure: {0}")]
    Witness(String),

    #[error("bound too small: {0}")]
    Bound(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
