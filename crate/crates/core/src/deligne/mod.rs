//! Discrete Deligne complexes: triples `(c, k, ω)` of an integral cochain, a
//! rational comparison cochain and a rational curvature cochain.

pub mod cochain;
pub mod complex;
pub mod diamond;
pub mod layout;

pub use cochain::{db_cup, DiffCochain};
pub use complex::{
    diff_cohomology, diff_cohomology_model, left_product_matrix, periodic_deligne_direct, periodic_deligne_split,
    periodic_deligne_weights, right_product_matrix, triple_differential, Parity, PeriodicDeligne, PeriodicDiffCochain,
};
pub use diamond::{check_diamond, diamond, DiamondData, DiamondReport};
pub use layout::{Block, Layout, Slot};
