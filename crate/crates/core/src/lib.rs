//! Exact tropical Fermat-Weber points and projections onto tropical
//! triangles.
//!
//! The crate computes Fermat-Weber points of data sets in the tropical
//! projective torus, projects data onto tropical convex hulls, and searches
//! for an axis-aligned tropical triangle on which the projection of a
//! Fermat-Weber point is a Fermat-Weber point of the projected data. All
//! arithmetic on the decision path is exact rational arithmetic.

pub mod datagen;
pub mod error;
pub mod fermat_weber;
pub mod linprog;
mod network;
pub mod projection;
pub mod scalar;
pub mod search;
pub mod tropical;

pub use error::{Error, Result};
pub use fermat_weber::{
    augment_with_fw, fermat_weber_point, fermat_weber_point_with, fw_lp_build, verify_fw_point, FwResult, FwSolver,
};
pub use projection::{
    check_vertical_projection, compute_triangle, fw_projection_holds, projection_matrix, PairIndex,
};
pub use scalar::Scalar;
pub use search::{search_lex, search_priority, SearchOutcome, SearchStatus};
pub use tropical::{
    distance_sum, project_onto_tconv, tconv_contains, trop_combine, trop_distance, DataMatrix, TropicalPoint,
    TropicalTriangle,
};
