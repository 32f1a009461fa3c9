use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::window::VertexId;

/// Errors produced by tree-level operations. Validation *findings* are
/// not errors (they go into reports); these are the cases where an
/// operation cannot produce its result at all.
#[derive(Debug, Error)]
pub enum TreeError {
    #[error("ParseError: {0}")]
    Parse(String),
    #[error("NotATree: {0}")]
    NotATree(String),
    #[error("DisconnectedClass: edges of class {class} do not span a subtree")]
    DisconnectedClass { class: String },
    #[error("IllegalMove: {0}")]
    IllegalMove(String),
    #[error("UnresolvedEdgeStab: {0}")]
    UnresolvedEdgeStab(String),
    #[error("SmallFlagUnknown: vertex {0} has no declared or computable small flag")]
    SmallFlagUnknown(VertexId),
    #[error("PreconditionNotDeclared: {0}")]
    PreconditionNotDeclared(String),
    #[error("NotEquivariant: {0}")]
    NotEquivariant(String),
    #[error("ImageNotCylinderOrPoint: {0}")]
    ImageNotCylinderOrPoint(String),
    #[error("SandwichClosureUnverified: {0}")]
    SandwichClosureUnverified(String),
    #[error("HypothesisNotDeclared: {0}")]
    HypothesisNotDeclared(String),
    #[error("UnresolvedStabilizer: {0}")]
    UnresolvedStabilizer(String),
    #[error("MissingVertexStabs: {0}")]
    MissingVertexStabs(String),
    #[error("NotADomination: {0}")]
    NotADomination(String),
    #[error("ImageOverlap: {0}")]
    ImageOverlap(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl TreeError {
    /// Exit-code category: capability and precondition problems exit 2,
    /// everything that reports on the data itself exits 1.
    pub fn is_capability(&self) -> bool {
        matches!(
            self,
            TreeError::Parse(_)
                | TreeError::UnresolvedEdgeStab(_)
                | TreeError::SmallFlagUnknown(_)
                | TreeError::PreconditionNotDeclared(_)
                | TreeError::SandwichClosureUnverified(_)
                | TreeError::HypothesisNotDeclared(_)
                | TreeError::UnresolvedStabilizer(_)
                | TreeError::MissingVertexStabs(_)
                | TreeError::Algebra(_)
        )
    }
}
