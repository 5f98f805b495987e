//! Exact counts of maps on compact orientable surfaces with all vertices of
//! one valence (triangulations, quadrangulations, even valence), from the
//! genus expansion of the Toda string equations.

pub mod counts;
mod error;
pub mod exact;
pub mod free_energy;
pub mod lattice;
pub mod oracle;
pub mod painleve;
pub mod series;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
