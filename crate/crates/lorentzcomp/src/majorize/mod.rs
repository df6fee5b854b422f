//! Majorisation of timelike loops by convex polygons with evaluable long maps.

mod alexandrov;
mod epsilon;
mod fan;
mod piecewise;
mod pipeline;
mod polygon;
mod region;

pub use alexandrov::{
    concavity_at_x3, straighten_alexandrov, Concavity, Straightening, CONCAVITY_TOL,
};
pub use epsilon::{epsilon_bound, ErrorBudget};
pub use fan::{
    build_fan, intrinsic_tau_fan, psi_eval, skeleton_project, Fan, FanLabel, ModelOracle,
    TauOracle, SKELETON_TOL,
};
pub use piecewise::{Action, Piece, PiecewiseMap, Stage};
pub use pipeline::{
    dyadic_samples, majorant_of_curve, Half, Majorant, PairReport, PipelineOptions, Trace,
};
pub use polygon::{
    convexity_check, loop_length, majorize_polygon, PolygonMajorant, TimelikeLoop, STRAIGHT_TOL,
};
pub use region::{Decomposition, Region, Shape, REGION_TOL};
