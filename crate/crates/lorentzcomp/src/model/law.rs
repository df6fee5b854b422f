use std::fmt;

use super::gauge::{Branch, CurvatureGauge};
use crate::error::{GeomError, Result};

/// Hyperbolic angle with the sign entering the Law of Cosines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedAngle {
    pub omega: f64,
    pub sigma: i8,
}

impl SignedAngle {
    pub fn new(omega: f64, sigma: i8) -> Self {
        assert!(sigma == 1 || sigma == -1, "sigma must be ±1");
        SignedAngle {
            omega: omega.abs(),
            sigma,
        }
    }

    /// `σ cosh ω`.
    pub fn signed_cosh(&self) -> f64 {
        self.sigma as f64 * self.omega.cosh()
    }
}

impl fmt::Display for SignedAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            self.omega,
            if self.sigma > 0 { "+" } else { "-" }
        )
    }
}

fn check_adjacent(g: &CurvatureGauge, a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(GeomError::Domain(format!(
            "adjacent sides must be positive, got {a}, {b}"
        )));
    }
    if !g.below_diameter(a) || !g.below_diameter(b) {
        return Err(GeomError::Domain(format!(
            "adjacent sides {a}, {b} exceed D_K"
        )));
    }
    Ok(())
}

/// `H(c)` predicted by the Law of Cosines.
pub(crate) fn law_h(g: &CurvatureGauge, a: f64, b: f64, sc: f64) -> f64 {
    let (ha, hb) = (g.h(a), g.h(b));
    ha + hb + g.k * ha * hb + sc * g.sn(a) * g.sn(b)
}

/// Side opposite the angle between sides `a` and `b`.
pub fn loc_side(g: &CurvatureGauge, a: f64, b: f64, angle: SignedAngle) -> Result<f64> {
    check_adjacent(g, a, b)?;
    let hc = law_h(g, a, b, angle.signed_cosh());
    if hc < 0.0 {
        if hc > -1e-14 * (g.h(a) + g.h(b)) {
            return Ok(0.0);
        }
        return Err(GeomError::Range(format!(
            "no side solves the law for a={a}, b={b}, angle={angle}"
        )));
    }
    if g.branch() == Branch::Negative && g.s * g.s * hc >= 2.0 {
        return Err(GeomError::Range(format!(
            "opposite side reaches D_K for a={a}, b={b}, angle={angle}"
        )));
    }
    g.h_inv(hc)
        .ok_or_else(|| GeomError::Range(format!("opposite side out of range for a={a}, b={b}")))
}

/// Angle between sides `a` and `b` opposite to `c`.
///
/// The sign is `+1` when `c` is the longest of the three (ties count as longest).
pub fn loc_angle(g: &CurvatureGauge, a: f64, b: f64, c: f64) -> Result<SignedAngle> {
    check_adjacent(g, a, b)?;
    if !(c >= 0.0) {
        return Err(GeomError::Domain(format!(
            "opposite side must be non-negative, got {c}"
        )));
    }
    let (ha, hb) = (g.h(a), g.h(b));
    let v = (g.h(c) - ha - hb - g.k * ha * hb) / (g.sn(a) * g.sn(b));
    let sigma: i8 = if c >= a.max(b) { 1 } else { -1 };
    let sv = sigma as f64 * v;
    if !(sv >= 1.0 - 1e-12) {
        return Err(GeomError::NonRealizable(format!(
            "sides ({a}, {b}, {c}) give σ cosh ω = {}",
            sigma as f64 * sv
        )));
    }
    Ok(SignedAngle {
        omega: sv.max(1.0).acosh(),
        sigma,
    })
}
