//! Exact numerics for walls of Bridgeland stability conditions on a K3
//! surface of Picard rank one.
//!
//! Classes live in the rank-three Mukai lattice, stability conditions are
//! points of the `(x, y)` projection plane, and every inequality is decided
//! exactly or with a certified enclosure.

pub mod brill_noether;
pub mod cases;
pub mod claims;
pub mod error;
pub mod lattice;
pub mod no_roots;
pub mod num;
pub mod plane;
pub mod radical;
pub mod region;
pub mod walls;

pub use error::{Error, Result};
