//! Recovering convex polytopes in 3-space from congruent projections or
//! sections, with exact rational certificates.

pub mod congruence;
pub mod direction_space;
pub mod error;
pub mod io;
pub mod kernel;
pub mod pipeline;
pub mod rat;
pub mod recovery;
pub mod shadow;
pub mod svg;

pub use error::{Error, Result};
pub use kernel::{Polytope, Vector};
pub use rat::Rat;
