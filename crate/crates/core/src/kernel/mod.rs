//! Exact vectors, convex polytopes and plane frames.

mod frame;
mod polytope;
mod vector;

pub use frame::{frame, Frame};
pub use polytope::{hull, radial, support, Edge, Facet, Polytope};
pub use vector::Vector;
