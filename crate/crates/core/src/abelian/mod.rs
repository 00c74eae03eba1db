//! Exact integer and rational linear algebra, finitely generated abelian
//! groups and the mixed lattice-plus-subspace engine.

pub mod error;
pub mod exact;
pub mod extension;
pub mod group;
pub mod linalg;
pub mod matrix;
pub mod snf;
pub mod sparse;
pub mod subgroup;

pub use error::AbelianError;
pub use exact::{check_exact, ExactnessReport, GroupMap, Junction, Subquotient};
pub use extension::{resolve_extension, Extension};
pub use group::{DiffCohGroup, FgAbGroup};
pub use matrix::{ExactMatrix, IntMatrix, RatMatrix, ScalarKind};
pub use snf::{invariant_factors, invariant_factors_sparse, smith_normal_form, InvariantFactors, SmithForm};
pub use sparse::SparseIntMatrix;
pub use subgroup::{mixed_kernel, Subgroup};
