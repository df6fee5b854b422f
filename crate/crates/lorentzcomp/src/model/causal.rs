use std::f64::consts::PI;
use std::fmt;

use super::gauge::{Branch, CurvatureGauge, Extended};
use super::point::{chi, dot, norm2, sub, theta, ModelPoint};
use crate::error::{GeomError, Result};

/// Relative null tolerance on the interval discriminant.
pub const NULL_TOL: f64 = 1e-10;

/// Causal relation of an ordered pair `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalClass {
    ChronoFuture,
    NullFuture,
    Unrelated,
    NullPast,
    ChronoPast,
}

impl CausalClass {
    pub fn reverse(self) -> Self {
        match self {
            CausalClass::ChronoFuture => CausalClass::ChronoPast,
            CausalClass::NullFuture => CausalClass::NullPast,
            CausalClass::Unrelated => CausalClass::Unrelated,
            CausalClass::NullPast => CausalClass::NullFuture,
            CausalClass::ChronoPast => CausalClass::ChronoFuture,
        }
    }

    /// `p ≤ q`.
    pub fn is_causal_future(self) -> bool {
        matches!(self, CausalClass::ChronoFuture | CausalClass::NullFuture)
    }

    /// `q ≤ p`.
    pub fn is_causal_past(self) -> bool {
        matches!(self, CausalClass::ChronoPast | CausalClass::NullPast)
    }

    pub fn is_chronological(self) -> bool {
        matches!(self, CausalClass::ChronoFuture | CausalClass::ChronoPast)
    }

    pub fn is_null(self) -> bool {
        matches!(self, CausalClass::NullFuture | CausalClass::NullPast)
    }

    pub fn code(self) -> &'static str {
        match self {
            CausalClass::ChronoFuture => "cf",
            CausalClass::NullFuture => "nf",
            CausalClass::Unrelated => "un",
            CausalClass::NullPast => "np",
            CausalClass::ChronoPast => "cp",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        Some(match code {
            "cf" => CausalClass::ChronoFuture,
            "nf" => CausalClass::NullFuture,
            "un" => CausalClass::Unrelated,
            "np" => CausalClass::NullPast,
            "cp" => CausalClass::ChronoPast,
            _ => return None,
        })
    }
}

impl fmt::Display for CausalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Full separation data of an ordered pair.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Separation {
    pub class: CausalClass,
    /// `-⟨q-p, q-p⟩`; positive for timelike chords.
    pub interval: f64,
    /// The pair lies beyond the first focal point (`K < 0` only).
    pub beyond: bool,
    pub coincident: bool,
}

pub(crate) fn separation(g: &CurvatureGauge, p: &ModelPoint, q: &ModelPoint) -> Result<Separation> {
    p.validate(g)?;
    q.validate(g)?;
    let d = sub(&q.c, &p.c);
    let scale = norm2(&d);
    let interval = -dot(g, &d, &d);
    let mut forward = match g.branch() {
        Branch::Flat | Branch::Positive => d[0],
        Branch::Negative => 0.0,
    };
    if g.branch() == Branch::Negative {
        let dth = theta(q) - theta(p);
        let sum_chi = (chi(g, q) + chi(g, p)).abs();
        if dth - sum_chi >= PI {
            return Ok(Separation {
                class: CausalClass::ChronoFuture,
                interval,
                beyond: true,
                coincident: false,
            });
        }
        if -dth - sum_chi >= PI {
            return Ok(Separation {
                class: CausalClass::ChronoPast,
                interval,
                beyond: true,
                coincident: false,
            });
        }
        forward = dth;
    }
    let size = match g.branch() {
        Branch::Flat => 1.0,
        _ => g.quadric().abs().max(1.0),
    };
    if scale <= 1e-28 * size && (g.branch() != Branch::Negative || p.winding == q.winding) {
        return Ok(Separation {
            class: CausalClass::NullFuture,
            interval: 0.0,
            beyond: false,
            coincident: true,
        });
    }
    let class = if interval.abs() <= NULL_TOL * scale {
        if forward > 0.0 {
            CausalClass::NullFuture
        } else {
            CausalClass::NullPast
        }
    } else if interval > 0.0 {
        if forward > 0.0 {
            CausalClass::ChronoFuture
        } else {
            CausalClass::ChronoPast
        }
    } else {
        CausalClass::Unrelated
    };
    Ok(Separation {
        class,
        interval,
        beyond: false,
        coincident: false,
    })
}

/// Causal relation of `q` relative to `p`. Coincident points are reported as null-future.
pub fn relation(g: &CurvatureGauge, p: &ModelPoint, q: &ModelPoint) -> Result<CausalClass> {
    Ok(separation(g, p, q)?.class)
}

/// Length of a timelike chord with interval `m`.
pub(crate) fn chord_tau(g: &CurvatureGauge, m: f64) -> Extended {
    let m = m.max(0.0);
    match g.branch() {
        Branch::Flat => Extended::Finite(m.sqrt()),
        Branch::Positive => Extended::Finite(2.0 / g.s * (0.5 * g.s * m.sqrt()).asinh()),
        Branch::Negative => {
            let arg = 0.5 * g.s * m.sqrt();
            if arg >= 1.0 {
                Extended::Infinite
            } else {
                Extended::Finite(2.0 / g.s * arg.asin())
            }
        }
    }
}

/// Time separation with the `+∞` sentinel for pairs beyond `D_K`.
pub fn tau_ext(g: &CurvatureGauge, p: &ModelPoint, q: &ModelPoint) -> Result<Extended> {
    let sep = separation(g, p, q)?;
    if sep.class != CausalClass::ChronoFuture {
        return Ok(Extended::Finite(0.0));
    }
    if sep.beyond {
        return Ok(Extended::Infinite);
    }
    Ok(chord_tau(g, sep.interval))
}

/// Time separation `τ(p, q)`; zero unless `q` is in the chronological future of `p`.
pub fn tau(g: &CurvatureGauge, p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    match tau_ext(g, p, q)? {
        Extended::Finite(v) => Ok(v),
        Extended::Infinite => Err(GeomError::Range("pair separated beyond D_K".into())),
    }
}

/// `max{τ(p,q), τ(q,p)}`.
pub fn tau_sym(g: &CurvatureGauge, p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    Ok(tau(g, p, q)?.max(tau(g, q, p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::gauge::curvature_gauge;

    #[test]
    fn flat_examples() {
        let g = curvature_gauge(0.0);
        let o = ModelPoint::flat(0.0, 0.0);
        let v = tau(&g, &o, &ModelPoint::flat(2.0, 1.0)).unwrap();
        assert!((v - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(tau(&g, &o, &o).unwrap(), 0.0);
        assert_eq!(tau(&g, &o, &ModelPoint::flat(1.0, 2.0)).unwrap(), 0.0);
        assert_eq!(
            relation(&g, &o, &ModelPoint::flat(2.0, 1.0)).unwrap(),
            CausalClass::ChronoFuture
        );
        assert_eq!(
            relation(&g, &o, &ModelPoint::flat(1.0, 1.0)).unwrap(),
            CausalClass::NullFuture
        );
        assert_eq!(
            relation(&g, &o, &ModelPoint::flat(1.0, 2.0)).unwrap(),
            CausalClass::Unrelated
        );
        assert_eq!(
            relation(&g, &ModelPoint::flat(2.0, 1.0), &o).unwrap(),
            CausalClass::ChronoPast
        );
    }

    #[test]
    fn curved_time_axis_is_unit_speed() {
        for k in [-1.0, -0.3, 0.7, 1.0] {
            let g = curvature_gauge(k);
            let p = ModelPoint::from_coords(&g, 0.0, 0.0);
            let q = ModelPoint::from_coords(&g, 1.2, 0.0);
            let v = tau(&g, &p, &q).unwrap();
            assert!((v - 1.2).abs() < 1e-12, "k={k} v={v}");
            assert_eq!(tau(&g, &q, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn negative_branch_beyond_diameter() {
        let g = curvature_gauge(-1.0);
        let p = ModelPoint::from_coords(&g, 0.0, 0.0);
        let q = ModelPoint::from_coords(&g, 3.5, 0.0);
        assert_eq!(tau_ext(&g, &p, &q).unwrap(), Extended::Infinite);
        assert!(tau(&g, &p, &q).is_err());
        assert_eq!(relation(&g, &p, &q).unwrap(), CausalClass::ChronoFuture);
        let r = ModelPoint::from_coords(&g, 3.0, 0.0);
        let v = tau(&g, &p, &r).unwrap();
        assert!((v - 3.0).abs() < 1e-9);
    }

    #[test]
    fn invalid_point_is_domain_error() {
        let g = curvature_gauge(1.0);
        let bad = ModelPoint {
            c: [0.0, 2.0, 0.0],
            winding: 0,
        };
        let o = ModelPoint::origin(&g);
        assert!(matches!(tau(&g, &o, &bad), Err(GeomError::InvalidPoint(_))));
    }
}
