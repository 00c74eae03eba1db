//! Twisted periodic theories: sign, integral and differential twists.

pub mod complex;
pub mod gauge;
pub mod mv;
pub mod twist;

pub use complex::{
    deligne_action_map, integral_action_map, twisted_deligne_cohomology, twisted_periodic_cohomology,
    twisted_sign_cohomology, TwistedComplex,
};
pub use gauge::{gauge_deligne, gauge_integral, untwist_deligne, EquivalenceReport};
pub use mv::{additivity_check, mayer_vietoris_check, pullback_map, MayerVietorisReport};
pub use twist::{builtin_twist, obstruction, parse_twist, Obstruction, Twist};
