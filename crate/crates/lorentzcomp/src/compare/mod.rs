//! Comparison triangles and four-point configurations.

mod fourpoint;
mod sampled;
mod triangle;

pub use fourpoint::{
    check_fourpoint_upper, fourpoint_opposite_realize, fourpoint_sameside_realize, CausalFlags,
    CheckOptions, Condition, FourPointGauge, FourPointRealization, Verdict, PAIRS, VERDICT_TOL,
};
pub use sampled::{
    check_triangle_comparison_sampled, ModelTriangleOracle, SideCheck, TriangleOracle,
    TrianglePoint,
};
pub use triangle::{
    comparison_point, realize_triangle, Placement, RealizedTriangle, SideTriple, TriangleSide,
    BUILD_TOL,
};
