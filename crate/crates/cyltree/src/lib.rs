//! Cylinder decompositions of labeled trees.
//!
//! A *window* is a finite labeled tree: vertices, edges carrying
//! subgroup handles from a pluggable stabilizer algebra, and optional
//! side data (vertex stabilizers, boundary marks, automorphisms,
//! declared cylinder stabilizers). Edges whose handles are equivalent
//! under the algebra's relation group into *cylinders*; the bipartite
//! incidence tree of cylinders and shared vertices is the *dual tree*,
//! and most of this crate is machinery for building it, collapsing it,
//! mapping it, and checking its advertised properties.
//!
//! Entry points:
//!
//! * [`window::GTreeWindow`] and [`instance`] for loading windows,
//! * [`cylinder::compute_cylinders`] and [`dual::tree_of_cylinders`]
//!   for the decomposition,
//! * [`dual::collapsed_tree_of_cylinders`] for the variant that
//!   contracts out-of-family incidence edges,
//! * [`zgraph`] for the purely algebraic shadow of the dual tree,
//! * [`analysis`] for diagnostics (acylindricity, diameter bounds,
//!   idempotence, domination),
//! * [`refine`] for blowing a dominating window up along its dual tree,
//! * [`generate`] for seeded fixtures.

pub mod algebra;
pub mod analysis;
pub mod canonical;
pub mod cylinder;
pub mod dot;
pub mod dual;
pub mod equivariant;
pub mod error;
pub mod generate;
pub mod induced;
pub mod instance;
pub mod moves;
pub mod refine;
pub mod validate;
pub mod window;
pub mod zgraph;

pub use algebra::{Algebra, AlgebraConfig, BackendId, RawDatum, StabilizerHandle};
pub use dual::{collapsed_tree_of_cylinders, tree_of_cylinders, BipartiteDualTree};
pub use error::TreeError;
pub use window::{GTreeWindow, WindowBuilder};
