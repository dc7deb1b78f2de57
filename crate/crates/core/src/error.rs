use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OscError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mismatched discriminants: sqrt({0}) and sqrt({1})")]
    DiscriminantMismatch(u32, u32),
    #[error("invalid discriminant {0}: must be square-free and greater than 1")]
    InvalidDiscriminant(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid structure matrix: {0}")]
    InvalidStructure(String),
    #[error("not a lattice: {0}")]
    NonLattice(String),
    #[error("incompatible data: {0}")]
    Incompatible(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("mismatched groups: {0}")]
    MismatchedGroups(String),
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<OscError>,
    },
}

impl OscError {
    /// Wraps the error with the name of the pipeline stage that produced it.
    pub fn at(self, stage: &'static str) -> OscError {
        OscError::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Strips stage wrappers.
    pub fn root(&self) -> &OscError {
        match self {
            OscError::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for errors that mean the input does not describe a lattice
    /// (or describes incompatible data), as opposed to malformed input or a bug.
    pub fn is_rejection(&self) -> bool {
        matches!(
            self.root(),
            OscError::NonLattice(_) | OscError::Incompatible(_) | OscError::NotAdmissible(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, OscError>;
