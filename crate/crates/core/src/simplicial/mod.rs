//! Finite simplicial complexes, ordered cochains, cup products, sign local
//! systems and Čech double complexes over vertex-star covers.

pub mod builders;
pub mod cech;
pub mod cochain;
pub mod complex;
pub mod local_system;
pub mod maps;
pub mod parser;
pub mod u1;

pub use cech::{cech_double_complex, CechDoubleComplex};
pub use cochain::{coboundary, cohomology_at, cup, integral_cohomology, CochainComplex};
pub use complex::{Simplex, SimplicialComplex};
pub use local_system::{local_system_cohomology, local_system_complex, twisted_coboundary, SignCocycle};
pub use maps::SimplicialMap;
pub use parser::{parse_builder, parse_space};
pub use u1::u1_cohomology;
