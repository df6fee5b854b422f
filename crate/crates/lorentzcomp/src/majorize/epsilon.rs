use crate::error::{GeomError, Result};
use crate::model::{Branch, CurvatureGauge};

/// Error certificate of the skeleton projection for one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    /// `τ(O, z)`.
    pub b: f64,
    /// Separation of the tested pair.
    pub c: f64,
    /// Largest apex angle over the relevant triangles.
    pub a: f64,
    pub epsilon: f64,
    /// Set when the `K < 0` bound exceeds its range and `ε = D_K` is reported.
    pub saturated: bool,
}

/// Bound on `|τ(x,y) - τ(S(x),S(y))|` for a pair at separation `c` whose
/// apex angles differ by at most `a`, inside a loop of height `b`.
pub fn epsilon_bound(g: &CurvatureGauge, b: f64, c: f64, a: f64) -> Result<ErrorBudget> {
    if !(c > 0.0) {
        return Err(GeomError::Domain(format!(
            "pair separation must be positive, got {c}"
        )));
    }
    if !(a >= 0.0) || !(b >= 0.0) {
        return Err(GeomError::Domain(format!(
            "need A ≥ 0 and B ≥ 0, got A={a}, B={b}"
        )));
    }
    let s = g.s;
    let sh = (0.5 * a).sinh();
    let mut saturated = false;
    let epsilon = match g.branch() {
        Branch::Flat => 4.0 * b * b / c * sh,
        Branch::Negative => {
            let arg = 2.0 / (0.5 * s * c).sin().abs() * sh;
            if arg > 1.0 {
                saturated = true;
                std::f64::consts::PI / s
            } else {
                2.0 / s * arg.asin()
            }
        }
        Branch::Positive => {
            let ch = (s * b).cosh();
            (2.0 * ch * ch / (0.5 * s * c).sinh() * sh).asinh() / s
        }
    };
    Ok(ErrorBudget {
        b,
        c,
        a,
        epsilon,
        saturated,
    })
}
