use super::causal::{relation, tau};
use super::gauge::CurvatureGauge;
use super::geodesic::{exp, geodesic_point};
use super::point::{frame_at, lin, ModelPoint};
use crate::error::{GeomError, Result};

/// Time orientation of a hyperbola relative to its centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Future,
    Past,
}

/// Points at fixed time separation `r` from `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperbola {
    pub center: ModelPoint,
    pub r: f64,
    pub orientation: Orientation,
}

/// Point at rapidity `phi` from the chart's time axis through the centre.
pub fn hyperbola_point(h: &Hyperbola, g: &CurvatureGauge, phi: f64) -> ModelPoint {
    let (e_t, e_x) = frame_at(g, &h.center);
    let ts = match h.orientation {
        Orientation::Future => 1.0,
        Orientation::Past => -1.0,
    };
    let d = lin(ts * phi.cosh(), &e_t, phi.sinh(), &e_x);
    exp(g, &h.center, &d, h.r)
}

/// Radial collapse of `p` onto the spoke `[center, spoke_end]` at equal radius.
///
/// Works for future sectors (`spoke_end` after `center`) and past sectors.
pub fn sector_collapse(
    g: &CurvatureGauge,
    center: &ModelPoint,
    spoke_end: &ModelPoint,
    p: &ModelPoint,
) -> Result<ModelPoint> {
    let rel = relation(g, center, spoke_end)?;
    if !rel.is_chronological() {
        return Err(GeomError::Domain(format!("sector spoke is {rel}")));
    }
    let future = rel.is_causal_future();
    let rp = relation(g, center, p)?;
    let radius = if future {
        if !rp.is_causal_future() {
            return Err(GeomError::Domain(format!(
                "point is {rp} of the sector centre"
            )));
        }
        tau(g, center, p)?
    } else {
        if !rp.is_causal_past() && !(rp.is_null() || p == center) {
            return Err(GeomError::Domain(format!(
                "point is {rp} of the sector centre"
            )));
        }
        tau(g, p, center)?
    };
    let big = if future {
        tau(g, center, spoke_end)?
    } else {
        tau(g, spoke_end, center)?
    };
    if radius > big * (1.0 + 1e-9) {
        return Err(GeomError::Domain(format!(
            "radius {radius} exceeds spoke length {big}"
        )));
    }
    let f = (radius / big).min(1.0);
    if future {
        geodesic_point(g, center, spoke_end, f)
    } else {
        geodesic_point(g, spoke_end, center, 1.0 - f)
    }
}
