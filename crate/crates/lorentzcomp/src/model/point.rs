use std::f64::consts::{PI, TAU};

use super::gauge::{Branch, CurvatureGauge};
use crate::error::{GeomError, Result};

pub type Vec3 = [f64; 3];

/// A point of `L²(K)` in its chart.
///
/// Flat points are stored as homogeneous `[t, x, 1]`. Curved points are
/// embedding coordinates on the quadric `⟨p,p⟩ = 1/K`; for `K < 0` the
/// winding index selects the sheet of the universal cover.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint {
    pub c: Vec3,
    pub winding: i64,
}

pub(crate) fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn scale(a: &Vec3, f: f64) -> Vec3 {
    [a[0] * f, a[1] * f, a[2] * f]
}

pub(crate) fn lin(fa: f64, a: &Vec3, fb: f64, b: &Vec3) -> Vec3 {
    [
        fa * a[0] + fb * b[0],
        fa * a[1] + fb * b[1],
        fa * a[2] + fb * b[2],
    ]
}

pub(crate) fn norm2(a: &Vec3) -> f64 {
    a[0] * a[0] + a[1] * a[1] + a[2] * a[2]
}

pub(crate) fn det3(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Ambient bilinear form of the chart.
pub fn dot(g: &CurvatureGauge, u: &Vec3, v: &Vec3) -> f64 {
    match g.branch() {
        Branch::Flat => -u[0] * v[0] + u[1] * v[1],
        Branch::Positive => -u[0] * v[0] + u[1] * v[1] + u[2] * v[2],
        Branch::Negative => -u[0] * v[0] - u[1] * v[1] + u[2] * v[2],
    }
}

impl ModelPoint {
    /// Minkowski point `(t, x)`.
    pub fn flat(t: f64, x: f64) -> Self {
        ModelPoint {
            c: [t, x, 1.0],
            winding: 0,
        }
    }

    /// Point with chart coordinates `(t, x)`.
    ///
    /// For `K > 0` the metric is `-dt² + cosh²(st) dx²`, for `K < 0` it is
    /// `-cosh²(sx) dt² + dx²`; both reduce to Minkowski as `s → 0`.
    pub fn from_coords(g: &CurvatureGauge, t: f64, x: f64) -> Self {
        let s = g.s;
        match g.branch() {
            Branch::Flat => ModelPoint::flat(t, x),
            Branch::Positive => {
                let ch = (s * t).cosh();
                let (sn, cs) = (s * x).sin_cos();
                ModelPoint {
                    c: [(s * t).sinh() / s, ch * cs / s, ch * sn / s],
                    winding: 0,
                }
            }
            Branch::Negative => {
                let ch = (s * x).cosh();
                let (sn, cs) = (s * t).sin_cos();
                let theta = s * t;
                ModelPoint {
                    c: [ch * cs / s, ch * sn / s, (s * x).sinh() / s],
                    winding: ((theta + PI) / TAU).floor() as i64,
                }
            }
        }
    }

    /// Chart coordinates `(t, x)`, inverse of [`ModelPoint::from_coords`].
    pub fn coords(&self, g: &CurvatureGauge) -> (f64, f64) {
        let s = g.s;
        match g.branch() {
            Branch::Flat => (self.c[0], self.c[1]),
            Branch::Positive => ((s * self.c[0]).asinh() / s, self.c[2].atan2(self.c[1]) / s),
            Branch::Negative => (theta(self) / s, (s * self.c[2]).asinh() / s),
        }
    }

    /// Chart origin.
    pub fn origin(g: &CurvatureGauge) -> Self {
        ModelPoint::from_coords(g, 0.0, 0.0)
    }

    /// Checks the chart constraint.
    pub fn validate(&self, g: &CurvatureGauge) -> Result<()> {
        if !self.c.iter().all(|v| v.is_finite()) {
            return Err(GeomError::InvalidPoint(format!(
                "non-finite coordinates {:?}",
                self.c
            )));
        }
        match g.branch() {
            Branch::Flat => {
                if self.c[2] != 1.0 {
                    return Err(GeomError::InvalidPoint(format!(
                        "flat point must be homogeneous, got {:?}",
                        self.c
                    )));
                }
            }
            _ => {
                let q = g.quadric();
                let r = dot(g, &self.c, &self.c) - q;
                if r.abs() > 1e-12 * q.abs().max(norm2(&self.c)).max(1.0) {
                    return Err(GeomError::InvalidPoint(format!(
                        "quadric residual {r:e} for {:?}",
                        self.c
                    )));
                }
            }
        }
        Ok(())
    }

    /// Euclidean distance between chart representatives.
    pub fn chart_distance(&self, other: &ModelPoint) -> f64 {
        norm2(&sub(&self.c, &other.c)).sqrt()
    }
}

/// Universal-cover time angle of a `K < 0` point.
pub(crate) fn theta(p: &ModelPoint) -> f64 {
    p.c[1].atan2(p.c[0]) + TAU * p.winding as f64
}

/// Conformal spatial coordinate of a `K < 0` point, in `(-π/2, π/2)`.
pub(crate) fn chi(g: &CurvatureGauge, p: &ModelPoint) -> f64 {
    (g.s * p.c[2]).atan()
}

/// Builds a point from raw coordinates, projecting onto the quadric and
/// choosing the winding closest to `theta_ref`.
pub(crate) fn lift(g: &CurvatureGauge, raw: Vec3, theta_ref: f64) -> ModelPoint {
    match g.branch() {
        Branch::Flat => ModelPoint {
            c: [raw[0], raw[1], 1.0],
            winding: 0,
        },
        _ => {
            let q = g.quadric();
            let n = dot(g, &raw, &raw);
            let c = if n != 0.0 && (n / q) > 0.0 {
                scale(&raw, (q / n).sqrt())
            } else {
                raw
            };
            let winding = if g.branch() == Branch::Negative {
                let base = c[1].atan2(c[0]);
                ((theta_ref - base) / TAU).round() as i64
            } else {
                0
            };
            ModelPoint { c, winding }
        }
    }
}

/// Time angle used as a winding reference; zero off the `K < 0` branch.
pub(crate) fn theta_or_zero(g: &CurvatureGauge, p: &ModelPoint) -> f64 {
    if g.branch() == Branch::Negative {
        theta(p)
    } else {
        0.0
    }
}

/// Orthonormal frame `(e_t, e_x)` of the chart coordinates at `p`.
pub fn frame_at(g: &CurvatureGauge, p: &ModelPoint) -> (Vec3, Vec3) {
    let s = g.s;
    match g.branch() {
        Branch::Flat => ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
        Branch::Positive => {
            let (t, x) = p.coords(g);
            let (sn, cs) = (s * x).sin_cos();
            let sh = (s * t).sinh();
            ([(s * t).cosh(), sh * cs, sh * sn], [0.0, -sn, cs])
        }
        Branch::Negative => {
            let (t, x) = p.coords(g);
            let (sn, cs) = (s * t).sin_cos();
            let sh = (s * x).sinh();
            ([-sn, cs, 0.0], [sh * cs, sh * sn, (s * x).cosh()])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::gauge::curvature_gauge;

    #[test]
    fn coords_roundtrip() {
        for k in [-1.0, -0.25, 0.0, 1.0, 4.0] {
            let g = curvature_gauge(k);
            for (t, x) in [(0.0, 0.0), (0.3, -0.2), (1.1, 0.4), (-0.5, 0.9)] {
                let p = ModelPoint::from_coords(&g, t, x);
                p.validate(&g).unwrap();
                let (t2, x2) = p.coords(&g);
                assert!((t - t2).abs() < 1e-12 && (x - x2).abs() < 1e-12, "k={k}");
            }
        }
    }

    #[test]
    fn negative_branch_winding_tracks_time() {
        let g = curvature_gauge(-1.0);
        let p = ModelPoint::from_coords(&g, 7.0, 0.1);
        assert_eq!(p.winding, 1);
        assert!((p.coords(&g).0 - 7.0).abs() < 1e-12);
    }

    #[test]
    fn frame_is_orthonormal() {
        for k in [-1.0, 0.0, 2.0] {
            let g = curvature_gauge(k);
            let p = ModelPoint::from_coords(&g, 0.4, -0.7);
            let (e, n) = frame_at(&g, &p);
            assert!((dot(&g, &e, &e) + 1.0).abs() < 1e-12);
            assert!((dot(&g, &n, &n) - 1.0).abs() < 1e-12);
            assert!(dot(&g, &e, &n).abs() < 1e-12);
            if k != 0.0 {
                assert!(dot(&g, &e, &p.c).abs() < 1e-12);
                assert!(dot(&g, &n, &p.c).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn flat_validation_rejects_non_homogeneous() {
        let g = curvature_gauge(0.0);
        let p = ModelPoint {
            c: [0.0, 0.0, 0.0],
            winding: 0,
        };
        assert!(p.validate(&g).is_err());
        let g = curvature_gauge(2.0);
        assert!(ModelPoint::flat(0.0, 0.0).validate(&g).is_err());
    }
}
