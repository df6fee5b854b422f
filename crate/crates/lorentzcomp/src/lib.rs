//! Comparison geometry in the two-dimensional Lorentzian model spaces.
//!
//! The crate computes time separations and Law-of-Cosines data in `L²(K)`,
//! builds comparison triangles and four-point configurations, produces
//! convex majorants of timelike loops together with evaluable long maps, and
//! samples causal sets by Poisson sprinkling.

pub mod causet;
pub mod compare;
pub mod error;
pub mod gen;
pub mod majorize;
pub mod model;

pub use error::{GeomError, Result};
