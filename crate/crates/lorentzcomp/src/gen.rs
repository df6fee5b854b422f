//! Random fixtures for tests, benchmarks and the acceptance suite.

use rand::Rng;

use crate::error::{GeomError, Result};
use crate::majorize::{concavity_at_x3, Concavity, TimelikeLoop};
use crate::model::{
    direction, geodesic_point, place_by_angle, relation, tau, triangle_point, CausalClass,
    CurvatureGauge, ModelPoint, SignedAngle,
};

const MAX_TRIES: usize = 10_000;

fn chrono(g: &CurvatureGauge, p: &ModelPoint, q: &ModelPoint) -> bool {
    matches!(relation(g, p, q), Ok(CausalClass::ChronoFuture))
}

/// Uniformly weighted random point of the filled triangle `v`.
pub fn point_in_triangle(
    g: &CurvatureGauge,
    v: &[ModelPoint; 3],
    rng: &mut impl Rng,
) -> ModelPoint {
    let (a, b): (f64, f64) = (rng.random(), rng.random());
    let (a, b) = if a + b > 1.0 {
        (1.0 - a, 1.0 - b)
    } else {
        (a, b)
    };
    triangle_point(g, v, [1.0 - a - b, a, b])
}

/// Quadrilateral `x1 ≪ x2 ≪ x3 ≪ x4` concave at `x3` by more than `min_gap`.
pub fn random_concave_quadrilateral(
    g: &CurvatureGauge,
    rng: &mut impl Rng,
    min_gap: f64,
) -> Result<[ModelPoint; 4]> {
    for _ in 0..MAX_TRIES {
        let t = rng.random_range(1.0..2.0);
        let x1 = ModelPoint::origin(g);
        let x4 = ModelPoint::from_coords(g, t, 0.0);
        let t2 = rng.random_range(0.15..0.6) * t;
        let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let h = side * rng.random_range(0.05..0.9) * t2.min(t - t2);
        let x2 = ModelPoint::from_coords(g, t2, h);
        if !chrono(g, &x1, &x2) || !chrono(g, &x2, &x4) {
            continue;
        }
        let x3 = point_in_triangle(g, &[x1, x2, x4], rng);
        if !chrono(g, &x2, &x3) || !chrono(g, &x3, &x4) || !chrono(g, &x1, &x3) {
            continue;
        }
        let x = [x1, x2, x3, x4];
        match concavity_at_x3(g, &x) {
            Ok((Concavity::Concave, d)) if d > min_gap => return Ok(x),
            _ => continue,
        }
    }
    Err(GeomError::Internal("no concave quadrilateral found".into()))
}

fn polar(
    g: &CurvatureGauge,
    o: &ModelPoint,
    z: &ModelPoint,
    rapidity: f64,
    side: i8,
    r: f64,
) -> Result<ModelPoint> {
    let (u, _) = direction(g, o, z)?;
    Ok(place_by_angle(
        g,
        o,
        &u,
        SignedAngle::new(rapidity, -1),
        side,
        r,
    ))
}

fn star_chain(
    g: &CurvatureGauge,
    rng: &mut impl Rng,
    o: &ModelPoint,
    z: &ModelPoint,
    height: f64,
    bends: usize,
    side: i8,
) -> Result<Option<Vec<ModelPoint>>> {
    let mut phi: Vec<f64> = (0..bends).map(|_| rng.random_range(0.05..1.2)).collect();
    let mut r: Vec<f64> = (0..bends)
        .map(|_| rng.random_range(0.15..0.9) * height)
        .collect();
    phi.sort_by(|a, b| b.total_cmp(a));
    r.sort_by(|a, b| a.total_cmp(b));
    let mut chain = vec![*o];
    for k in 0..bends {
        chain.push(polar(g, o, z, phi[k], side, r[k])?);
    }
    chain.push(*z);
    if chain.windows(2).all(|w| chrono(g, &w[0], &w[1])) {
        Ok(Some(chain))
    } else {
        Ok(None)
    }
}

fn subdivide(
    g: &CurvatureGauge,
    rng: &mut impl Rng,
    chain: Vec<ModelPoint>,
    p: f64,
) -> Result<Vec<ModelPoint>> {
    let mut out = vec![chain[0]];
    for w in chain.windows(2) {
        if rng.random_bool(p) {
            out.push(geodesic_point(g, &w[0], &w[1], rng.random_range(0.2..0.8))?);
        }
        out.push(w[1]);
    }
    Ok(out)
}

/// Loop with `breakpoints` bends split randomly between the chains, star-shaped
/// from `O`, with `alpha` on the `+` side of `[O, z]` and `beta` on the `-` side.
///
/// Some segments carry an extra straight vertex.
pub fn random_star_loop(
    g: &CurvatureGauge,
    rng: &mut impl Rng,
    breakpoints: usize,
) -> Result<TimelikeLoop> {
    for _ in 0..MAX_TRIES {
        let height = rng.random_range(1.5..2.5);
        let o = ModelPoint::origin(g);
        let z = ModelPoint::from_coords(g, height, 0.0);
        let na = rng.random_range(0..=breakpoints);
        let (Some(a), Some(b)) = (
            star_chain(g, rng, &o, &z, height, na, 1)?,
            star_chain(g, rng, &o, &z, height, breakpoints - na, -1)?,
        ) else {
            continue;
        };
        let a = subdivide(g, rng, a, 0.25)?;
        let b = subdivide(g, rng, b, 0.25)?;
        return TimelikeLoop::new(g, a, b);
    }
    Err(GeomError::Internal("no star loop found".into()))
}

/// Chain `O = p_0 ≪ p_1 ≪ … ≪ p_m` wandering on both sides of the time axis.
pub fn random_chain(g: &CurvatureGauge, rng: &mut impl Rng, m: usize) -> Vec<ModelPoint> {
    let mut pts = vec![ModelPoint::origin(g)];
    let (mut t, mut x) = (0.0, 0.0);
    while pts.len() <= m {
        let dt = rng.random_range(0.1..0.4);
        let dx = rng.random_range(-0.7..0.7) * dt;
        let p = ModelPoint::from_coords(g, t + dt, x + dx);
        if chrono(g, &pts[pts.len() - 1], &p) && chrono(g, &pts[0], &p) {
            t += dt;
            x += dx;
            pts.push(p);
        }
    }
    pts
}

/// Worst sampled longness defect of a map on a union of triangles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongnessReport {
    pub pairs: usize,
    /// Largest `τ(p,r) - τ(f(p),f(r))`.
    pub max_defect: f64,
    /// Pairs `p ≤ r` whose images are not causally related in order.
    pub order_violations: usize,
}

/// Samples `pairs` causally related pairs `p ≤ r` from the triangles and compares `τ` before and after `f`.
pub fn sampled_longness(
    g: &CurvatureGauge,
    triangles: &[[ModelPoint; 3]],
    f: impl Fn(&ModelPoint) -> Result<ModelPoint>,
    pairs: usize,
    rng: &mut impl Rng,
) -> Result<LongnessReport> {
    let mut out = LongnessReport {
        pairs: 0,
        max_defect: f64::NEG_INFINITY,
        order_violations: 0,
    };
    let mut tries = 0;
    while out.pairs < pairs && tries < 100 * pairs.max(1) {
        tries += 1;
        let p = point_in_triangle(g, &triangles[rng.random_range(0..triangles.len())], rng);
        let r = point_in_triangle(g, &triangles[rng.random_range(0..triangles.len())], rng);
        let (p, r) = match relation(g, &p, &r)? {
            c if c.is_causal_future() => (p, r),
            c if c.is_causal_past() => (r, p),
            _ => continue,
        };
        out.pairs += 1;
        let (fp, fr) = (f(&p)?, f(&r)?);
        let image = if relation(g, &fp, &fr)?.is_causal_future() {
            tau(g, &fp, &fr)?
        } else {
            out.order_violations += 1;
            0.0
        };
        out.max_defect = out.max_defect.max(tau(g, &p, &r)? - image);
    }
    Ok(out)
}
