use std::f64::consts::{FRAC_PI_2, PI};

use super::causal::{chord_tau, separation, CausalClass};
use super::gauge::{Branch, CurvatureGauge, Extended};
use super::law::SignedAngle;
use super::point::{
    add, det3, dot, frame_at, lift, lin, norm2, scale, sub, theta, theta_or_zero, ModelPoint, Vec3,
};
use crate::error::{GeomError, Result};

/// Side tolerance, relative to the sizes of the two edge vectors.
pub const SIDE_TOL: f64 = 1e-10;

fn kappa(g: &CurvatureGauge) -> f64 {
    match g.branch() {
        Branch::Positive => -1.0,
        _ => 1.0,
    }
}

/// Timelike chord data between two chronologically related points.
fn timelike_len(g: &CurvatureGauge, p: &ModelPoint, q: &ModelPoint) -> Result<(CausalClass, f64)> {
    let sep = separation(g, p, q)?;
    if !sep.class.is_chronological() {
        return Err(GeomError::Domain(format!(
            "pair is not chronologically related ({})",
            sep.class
        )));
    }
    if sep.beyond {
        return Err(GeomError::Range("pair separated beyond D_K".into()));
    }
    match chord_tau(g, sep.interval) {
        Extended::Finite(t) => Ok((sep.class, t)),
        Extended::Infinite => Err(GeomError::Range("pair separated beyond D_K".into())),
    }
}

/// Sign of the time component of a tangent vector at `p`.
pub fn time_sign(g: &CurvatureGauge, p: &ModelPoint, v: &Vec3) -> f64 {
    let (e_t, _) = frame_at(g, p);
    if -dot(g, v, &e_t) >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Lifts an interpolated raw point between `p` and `q` on the `K < 0` cover.
fn lift_between(
    g: &CurvatureGauge,
    p: &ModelPoint,
    q: &ModelPoint,
    raw_at: impl Fn(f64) -> Vec3,
    t: f64,
) -> ModelPoint {
    if g.branch() != Branch::Negative {
        return lift(g, raw_at(t), 0.0);
    }
    let (tp, tq) = (theta(p), theta(q));
    let span = (tq - tp).abs();
    if span < FRAC_PI_2 {
        return lift(g, raw_at(t), tp + t * (tq - tp));
    }
    let steps = 8 + (8.0 * span / PI).ceil() as usize;
    let mut cur = theta(p);
    let mut out = *p;
    for k in 1..=steps {
        out = lift(g, raw_at(t * k as f64 / steps as f64), cur);
        cur = theta(&out);
    }
    out
}

/// Point at parameter `t` on the geodesic `[p, q]`.
///
/// Timelike pairs are parametrised by proper time, null pairs affinely.
pub fn geodesic_point(
    g: &CurvatureGauge,
    p: &ModelPoint,
    q: &ModelPoint,
    t: f64,
) -> Result<ModelPoint> {
    if !(0.0..=1.0).contains(&t) {
        return Err(GeomError::Domain(format!("parameter {t} outside [0, 1]")));
    }
    let sep = separation(g, p, q)?;
    if sep.coincident || t == 0.0 {
        return Ok(*p);
    }
    if t == 1.0 {
        return Ok(*q);
    }
    if sep.class.is_null() {
        let d = sub(&q.c, &p.c);
        return Ok(lift_between(g, p, q, |s| add(&p.c, &scale(&d, s)), t));
    }
    let (_, tau) = timelike_len(g, p, q)?;
    if g.branch() == Branch::Flat {
        return Ok(ModelPoint::flat(
            (1.0 - t) * p.c[0] + t * q.c[0],
            (1.0 - t) * p.c[1] + t * q.c[1],
        ));
    }
    let st = g.sn(tau);
    Ok(lift_between(
        g,
        p,
        q,
        |s| lin(g.sn((1.0 - s) * tau) / st, &p.c, g.sn(s * tau) / st, &q.c),
        t,
    ))
}

/// Unit tangent at `p` of the timelike geodesic towards `q`, with its length.
pub fn direction(g: &CurvatureGauge, p: &ModelPoint, q: &ModelPoint) -> Result<(Vec3, f64)> {
    let (_, tau) = timelike_len(g, p, q)?;
    if tau == 0.0 {
        return Err(GeomError::Domain(
            "coincident points have no direction".into(),
        ));
    }
    let d = sub(&q.c, &p.c);
    let u = lin(1.0, &d, -g.cs_m1(tau), &p.c);
    let mut u = scale(&u, 1.0 / g.sn(tau));
    if g.branch() == Branch::Flat {
        u[2] = 0.0;
    }
    Ok((u, tau))
}

/// Endpoint of the timelike geodesic from `p` with unit initial velocity `v` after proper time `mu`.
pub fn exp(g: &CurvatureGauge, p: &ModelPoint, v: &Vec3, mu: f64) -> ModelPoint {
    let raw = lin(1.0 + g.cs_m1(mu), &p.c, g.sn(mu), v);
    let theta_ref = theta_or_zero(g, p) + time_sign(g, p, v) * FRAC_PI_2;
    lift(g, raw, theta_ref)
}

/// Point `p + λ ℓ` on the null geodesic from `p` along the null vector `ℓ`.
pub fn null_point(g: &CurvatureGauge, p: &ModelPoint, l: &Vec3, lambda: f64) -> ModelPoint {
    let raw = lin(1.0, &p.c, lambda, l);
    let theta_ref = theta_or_zero(g, p) + time_sign(g, p, l) * lambda.signum() * FRAC_PI_2;
    lift(g, raw, theta_ref)
}

/// Rapidity of a unit timelike vector in the chart frame at `p`.
fn rapidity(g: &CurvatureGauge, p: &ModelPoint, u: &Vec3) -> (f64, f64) {
    let (_, e_x) = frame_at(g, p);
    let ts = time_sign(g, p, u);
    ((ts * dot(g, u, &e_x)).asinh(), ts)
}

/// Hyperbolic angle at `vertex` between the geodesics to `p` and `q`.
pub fn angle_at(
    g: &CurvatureGauge,
    vertex: &ModelPoint,
    p: &ModelPoint,
    q: &ModelPoint,
) -> Result<SignedAngle> {
    let side = |x: &ModelPoint| -> Result<Vec3> {
        let sep = separation(g, vertex, x)?;
        if !sep.class.is_chronological() || sep.coincident {
            return Err(GeomError::UndefinedAngle(format!(
                "adjacent side is {}",
                sep.class
            )));
        }
        Ok(direction(g, vertex, x)?.0)
    };
    let (u, w) = (side(p)?, side(q)?);
    let (phi_u, ts_u) = rapidity(g, vertex, &u);
    let (phi_w, ts_w) = rapidity(g, vertex, &w);
    let sigma = if ts_u != ts_w { 1 } else { -1 };
    Ok(SignedAngle {
        omega: (phi_u - phi_w).abs(),
        sigma,
    })
}

/// Signed area form of `(b - a, p - a)`; positive when `p` lies on the `+` side of the
/// geodesic through `a` and `b` oriented from `a` to `b`.
pub fn orient(g: &CurvatureGauge, a: &ModelPoint, b: &ModelPoint, p: &ModelPoint) -> f64 {
    let (u, w) = (sub(&b.c, &a.c), sub(&p.c, &a.c));
    match g.branch() {
        Branch::Flat => u[0] * w[1] - u[1] * w[0],
        _ => kappa(g) * g.s * det3(&a.c, &u, &w),
    }
}

/// [`orient`] divided by the sizes of the two edge vectors; zero for coincident points.
pub fn side_value(g: &CurvatureGauge, a: &ModelPoint, b: &ModelPoint, p: &ModelPoint) -> f64 {
    let o = orient(g, a, b, p);
    let mut scale = (norm2(&sub(&b.c, &a.c)) * norm2(&sub(&p.c, &a.c))).sqrt();
    if g.branch() != Branch::Flat {
        scale *= (g.s * norm2(&a.c).sqrt()).max(1.0);
    }
    if scale == 0.0 {
        0.0
    } else {
        o / scale
    }
}

/// Side of `p` relative to the oriented geodesic `a → b`: `+1`, `-1` or `0` within tolerance.
pub fn side_of(g: &CurvatureGauge, a: &ModelPoint, b: &ModelPoint, p: &ModelPoint) -> i8 {
    let v = side_value(g, a, b, p);
    if v.abs() <= SIDE_TOL {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

/// Point of the filled triangle `abc` with barycentric-like weights `w` (non-negative).
pub fn triangle_point(g: &CurvatureGauge, v: &[ModelPoint; 3], w: [f64; 3]) -> ModelPoint {
    let total = w[0] + w[1] + w[2];
    let w = [w[0] / total, w[1] / total, w[2] / total];
    let raw = add(&lin(w[0], &v[0].c, w[1], &v[1].c), &scale(&v[2].c, w[2]));
    let theta_ref = w[0] * theta_or_zero(g, &v[0])
        + w[1] * theta_or_zero(g, &v[1])
        + w[2] * theta_or_zero(g, &v[2]);
    lift(g, raw, theta_ref)
}

/// Time reversal `(t, x) ↦ (-t, x)` of the chart; reverses the order of `τ`.
pub fn time_reversal(g: &CurvatureGauge, p: &ModelPoint) -> ModelPoint {
    let (t, x) = p.coords(g);
    ModelPoint::from_coords(g, -t, x)
}

/// Unit spacelike normal at `base` to the direction `u`, pointing to the `+` side.
///
/// For null `u` the chart's spatial unit vector is used, signed the same way.
pub fn normal(g: &CurvatureGauge, base: &ModelPoint, u: &Vec3) -> Vec3 {
    let null = dot(g, u, u).abs() <= 1e-12 * norm2(u);
    let w = if null {
        frame_at(g, base).1
    } else {
        match g.branch() {
            Branch::Flat => [u[1], u[0], 0.0],
            branch => {
                let c = [
                    base.c[1] * u[2] - base.c[2] * u[1],
                    base.c[2] * u[0] - base.c[0] * u[2],
                    base.c[0] * u[1] - base.c[1] * u[0],
                ];
                let e1 = if branch == Branch::Positive {
                    1.0
                } else {
                    -1.0
                };
                let w = [-c[0], e1 * c[1], c[2]];
                scale(&w, 1.0 / dot(g, &w, &w).sqrt())
            }
        }
    };
    let o = match g.branch() {
        Branch::Flat => u[0] * w[1] - u[1] * w[0],
        _ => kappa(g) * det3(&base.c, u, &w),
    };
    if o < 0.0 {
        scale(&w, -1.0)
    } else {
        w
    }
}

/// Endpoint of the timelike geodesic of length `len` leaving `base` at angle `angle`
/// from the unit direction `u`, on side `side` of the geodesic through `u`.
pub fn place_by_angle(
    g: &CurvatureGauge,
    base: &ModelPoint,
    u: &Vec3,
    angle: SignedAngle,
    side: i8,
    len: f64,
) -> ModelPoint {
    let n = normal(g, base, u);
    let d = lin(
        -(angle.sigma as f64) * angle.omega.cosh(),
        u,
        side as f64 * angle.omega.sinh(),
        &n,
    );
    exp(g, base, &d, len)
}
