//! Exact computation of periodic and twisted differential cohomology of finite
//! simplicial complexes.

pub mod abelian;
pub mod ahss;
pub mod cdga;
pub mod checks;
pub mod deligne;
pub mod error;
pub mod simplicial;
pub mod twisted;

pub use error::{Error, Result};
