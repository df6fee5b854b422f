//! The Lorentzian model spaces `L²(K)`.

mod causal;
mod gauge;
mod geodesic;
mod hyperbola;
mod isometry;
mod law;
mod point;

pub use causal::{relation, tau, tau_ext, tau_sym, CausalClass, NULL_TOL};
pub use gauge::{curvature_gauge, Branch, CurvatureGauge, Extended};
pub use geodesic::{
    angle_at, direction, exp, geodesic_point, normal, null_point, orient, place_by_angle, side_of,
    side_value, time_reversal, time_sign, triangle_point, SIDE_TOL,
};
pub use hyperbola::{hyperbola_point, sector_collapse, Hyperbola, Orientation};
pub use isometry::{isometry_from_segments, Isometry};
pub use law::{loc_angle, loc_side, SignedAngle};
pub use point::{dot, frame_at, ModelPoint, Vec3};

pub(crate) use point::{lin, sub};
