use nalgebra::Matrix3;

use super::causal::{separation, tau};
use super::gauge::{Branch, CurvatureGauge};
use super::geodesic::{direction, normal};
use super::point::{det3, dot, frame_at, lift, lin, sub, theta, ModelPoint, Vec3};
use crate::error::{GeomError, Result};

/// Isometry of `L²(K)` acting linearly on chart representatives.
///
/// Flat points are acted on in homogeneous coordinates, so the matrix is an
/// affine Lorentz map. For `K < 0` the winding of an image is tracked by
/// continuation from an anchor pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub m: Matrix3<f64>,
    pub src_anchor: ModelPoint,
    pub dst_anchor: ModelPoint,
}

fn columns(a: &Vec3, b: &Vec3, c: &Vec3) -> Matrix3<f64> {
    Matrix3::new(a[0], b[0], c[0], a[1], b[1], c[1], a[2], b[2], c[2])
}

fn orientation(g: &CurvatureGauge, base: &ModelPoint, u: &Vec3, n: &Vec3) -> f64 {
    match g.branch() {
        Branch::Flat => u[0] * n[1] - u[1] * n[0],
        Branch::Positive => -det3(&base.c, u, n),
        Branch::Negative => det3(&base.c, u, n),
    }
}

/// Frame `[p | ℓ | n]` of a null segment with `⟨ℓ, n⟩ = -1`, and its orientation sign.
fn null_frame(g: &CurvatureGauge, p: &ModelPoint, q: &ModelPoint) -> (Matrix3<f64>, f64) {
    let l = sub(&q.c, &p.c);
    let l = if g.branch() == Branch::Flat {
        [l[0], l[1], 0.0]
    } else {
        l
    };
    let (u, _) = frame_at(g, p);
    let alpha = -dot(g, &l, &u);
    let n = lin(1.0 / alpha, &u, -0.5 / (alpha * alpha), &l);
    (columns(&p.c, &l, &n), orientation(g, p, &l, &n).signum())
}

fn timelike_frame(g: &CurvatureGauge, p: &ModelPoint, q: &ModelPoint) -> Result<Matrix3<f64>> {
    let (u, _) = direction(g, p, q)?;
    let n = normal(g, p, &u);
    Ok(columns(&p.c, &u, &n))
}

impl Isometry {
    pub fn identity(g: &CurvatureGauge) -> Self {
        let o = ModelPoint::origin(g);
        Isometry {
            m: Matrix3::identity(),
            src_anchor: o,
            dst_anchor: o,
        }
    }

    /// Image of a point.
    pub fn apply(&self, g: &CurvatureGauge, p: &ModelPoint) -> ModelPoint {
        let raw = |c: &Vec3| -> Vec3 {
            let v = self.m * nalgebra::Vector3::new(c[0], c[1], c[2]);
            [v[0], v[1], v[2]]
        };
        match g.branch() {
            Branch::Flat => {
                let v = raw(&p.c);
                ModelPoint::flat(v[0], v[1])
            }
            Branch::Positive => lift(g, raw(&p.c), 0.0),
            Branch::Negative => {
                let (t0, x0) = self.src_anchor.coords(g);
                let (t1, x1) = p.coords(g);
                let span = g.s * ((t1 - t0).abs() + (x1 - x0).abs());
                let steps = 4 + (4.0 * span).ceil() as usize;
                let mut cur = theta(&self.dst_anchor);
                let mut out = self.dst_anchor;
                for k in 1..=steps {
                    let f = k as f64 / steps as f64;
                    let q = if k == steps {
                        *p
                    } else {
                        ModelPoint::from_coords(g, t0 + f * (t1 - t0), x0 + f * (x1 - x0))
                    };
                    out = lift(g, raw(&q.c), cur);
                    cur = theta(&out);
                }
                out
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let m = self
            .m
            .try_inverse()
            .ok_or_else(|| GeomError::Internal("singular isometry matrix".into()))?;
        Ok(Isometry {
            m,
            src_anchor: self.dst_anchor,
            dst_anchor: self.src_anchor,
        })
    }

    /// `other ∘ self`.
    pub fn then(&self, g: &CurvatureGauge, other: &Isometry) -> Self {
        Isometry {
            m: other.m * self.m,
            src_anchor: self.src_anchor,
            dst_anchor: other.apply(g, &self.dst_anchor),
        }
    }
}

/// Isometry taking the segment `src` onto `dst`.
///
/// With `flip` the map reverses orientation, so the `+` side of `src` lands on
/// the `-` side of `dst`. Null segments determine the map completely; a flip
/// incompatible with their null directions is rejected.
pub fn isometry_from_segments(
    g: &CurvatureGauge,
    src: (&ModelPoint, &ModelPoint),
    dst: (&ModelPoint, &ModelPoint),
    flip: bool,
) -> Result<Isometry> {
    let ss = separation(g, src.0, src.1)?;
    let sd = separation(g, dst.0, dst.1)?;
    if ss.coincident || sd.coincident {
        return Err(GeomError::Domain("degenerate segment".into()));
    }
    let m = if ss.class.is_null() || sd.class.is_null() {
        if ss.class != sd.class {
            return Err(GeomError::Domain(format!(
                "causal classes differ: {} vs {}",
                ss.class, sd.class
            )));
        }
        let (fs, os) = null_frame(g, src.0, src.1);
        let (fd, od) = null_frame(g, dst.0, dst.1);
        if (os * od < 0.0) != flip {
            return Err(GeomError::Precondition(
                "null segments fix the orientation of the map".into(),
            ));
        }
        let inv = fs
            .try_inverse()
            .ok_or_else(|| GeomError::Internal("singular null frame".into()))?;
        fd * inv
    } else {
        if ss.class != sd.class || !ss.class.is_chronological() {
            return Err(GeomError::Domain(format!(
                "segments must be timelike alike: {} vs {}",
                ss.class, sd.class
            )));
        }
        let (a, b) = if ss.class.is_causal_future() {
            src
        } else {
            (src.1, src.0)
        };
        let (c, d) = if sd.class.is_causal_future() {
            dst
        } else {
            (dst.1, dst.0)
        };
        let (ls, ld) = (tau(g, a, b)?, tau(g, c, d)?);
        if (ls - ld).abs() > 1e-9 * ls.max(1.0) {
            return Err(GeomError::Domain(format!(
                "segment lengths differ: {ls} vs {ld}"
            )));
        }
        let fs = timelike_frame(g, a, b)?;
        let mut fd = timelike_frame(g, c, d)?;
        if flip {
            fd.set_column(2, &(-fd.column(2)));
        }
        let inv = fs
            .try_inverse()
            .ok_or_else(|| GeomError::Internal("singular frame".into()))?;
        fd * inv
    };
    Ok(Isometry {
        m,
        src_anchor: *src.0,
        dst_anchor: *dst.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::causal::relation;
    use crate::model::gauge::curvature_gauge;
    use crate::model::geodesic::side_of;

    fn close(g: &CurvatureGauge, a: &ModelPoint, b: &ModelPoint) -> bool {
        a.chart_distance(b) < 1e-9 && (g.branch() != Branch::Negative || a.winding == b.winding)
    }

    #[test]
    fn identity_segments_give_identity() {
        for k in [-1.0, 0.0, 1.0] {
            let g = curvature_gauge(k);
            let a = ModelPoint::from_coords(&g, 0.0, 0.1);
            let b = ModelPoint::from_coords(&g, 1.0, 0.3);
            let iso = isometry_from_segments(&g, (&a, &b), (&a, &b), false).unwrap();
            assert!((iso.m - Matrix3::identity()).abs().max() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn flat_boost() {
        let g = curvature_gauge(0.0);
        let o = ModelPoint::flat(0.0, 0.0);
        let a = ModelPoint::flat(1.0, 0.0);
        let b = ModelPoint::flat(0.5f64.cosh(), 0.5f64.sinh());
        let iso = isometry_from_segments(&g, (&o, &a), (&o, &b), false).unwrap();
        let want = Matrix3::new(
            0.5f64.cosh(),
            0.5f64.sinh(),
            0.0,
            0.5f64.sinh(),
            0.5f64.cosh(),
            0.0,
            0.0,
            0.0,
            1.0,
        );
        assert!((iso.m - want).abs().max() < 1e-14);
    }

    #[test]
    fn flip_is_an_involution_and_swaps_sides() {
        for k in [-1.0, 0.0, 1.0] {
            let g = curvature_gauge(k);
            let a = ModelPoint::from_coords(&g, 0.0, 0.1);
            let b = ModelPoint::from_coords(&g, 1.0, 0.3);
            let r = isometry_from_segments(&g, (&a, &b), (&a, &b), true).unwrap();
            let p = ModelPoint::from_coords(&g, 0.6, 0.5);
            let rp = r.apply(&g, &p);
            assert_eq!(side_of(&g, &a, &b, &p), -side_of(&g, &a, &b, &rp));
            assert!(close(&g, &r.apply(&g, &rp), &p), "k={k}");
            assert!(close(&g, &r.apply(&g, &a), &a) && close(&g, &r.apply(&g, &b), &b));
        }
    }

    #[test]
    fn maps_endpoints_and_preserves_tau() {
        for k in [-1.0, 0.0, 1.0] {
            let g = curvature_gauge(k);
            let a = ModelPoint::from_coords(&g, 0.0, 0.0);
            let b = ModelPoint::from_coords(&g, 1.2, 0.0);
            let c = ModelPoint::from_coords(&g, 2.0, 0.4);
            let dir =
                crate::model::geodesic::direction(&g, &c, &ModelPoint::from_coords(&g, 3.0, 0.45))
                    .unwrap()
                    .0;
            let d = crate::model::geodesic::exp(&g, &c, &dir, 1.2);
            for flip in [false, true] {
                let iso = isometry_from_segments(&g, (&a, &b), (&c, &d), flip).unwrap();
                assert!(close(&g, &iso.apply(&g, &a), &c));
                assert!(close(&g, &iso.apply(&g, &b), &d), "k={k}");
                let p = ModelPoint::from_coords(&g, 0.3, -0.4);
                let q = ModelPoint::from_coords(&g, 1.9, 0.2);
                let (ip, iq) = (iso.apply(&g, &p), iso.apply(&g, &q));
                assert!((tau(&g, &p, &q).unwrap() - tau(&g, &ip, &iq).unwrap()).abs() < 1e-10);
                assert_eq!(
                    relation(&g, &p, &q).unwrap(),
                    relation(&g, &ip, &iq).unwrap()
                );
                let inv = iso.inverse().unwrap();
                assert!(close(&g, &inv.apply(&g, &ip), &p));
            }
        }
    }

    #[test]
    fn length_mismatch_is_domain_error() {
        let g = curvature_gauge(0.0);
        let o = ModelPoint::flat(0.0, 0.0);
        let r = isometry_from_segments(
            &g,
            (&o, &ModelPoint::flat(1.0, 0.0)),
            (&o, &ModelPoint::flat(2.0, 0.0)),
            false,
        );
        assert!(matches!(r, Err(GeomError::Domain(_))));
    }

    #[test]
    fn null_segments() {
        for k in [-1.0, 0.0, 1.0] {
            let g = curvature_gauge(k);
            let a = ModelPoint::origin(&g);
            let (e_t, e_x) = frame_at(&g, &a);
            let l = lin(1.0, &e_t, 1.0, &e_x);
            let b = crate::model::geodesic::null_point(&g, &a, &l, 0.7);
            let c = ModelPoint::from_coords(&g, 1.0, 0.2);
            let (f_t, f_x) = frame_at(&g, &c);
            let d = crate::model::geodesic::null_point(&g, &c, &lin(1.0, &f_t, 1.0, &f_x), 0.3);
            let iso = isometry_from_segments(&g, (&a, &b), (&c, &d), false).unwrap();
            assert!(close(&g, &iso.apply(&g, &b), &d), "k={k}");
            assert!(isometry_from_segments(&g, (&a, &b), (&c, &d), true).is_err());
            let e = crate::model::geodesic::null_point(&g, &c, &lin(1.0, &f_t, -1.0, &f_x), 0.3);
            assert!(isometry_from_segments(&g, (&a, &b), (&c, &e), false).is_err());
            assert!(isometry_from_segments(&g, (&a, &b), (&c, &e), true).is_ok());
        }
    }
}
