use super::region::{Shape, REGION_TOL};
use crate::error::{GeomError, Result};
use crate::model::{
    direction, geodesic_point, loc_angle, place_by_angle, relation, side_value, tau, tau_sym,
    CurvatureGauge, ModelPoint, SignedAngle,
};

/// Tolerance for deciding that a point lies on the skeleton.
pub const SKELETON_TOL: f64 = 1e-9;

/// Time separations among labelled points `0..len`, where `0` is the base point.
///
/// `tau(i, j)` is the separation of the pair in whichever direction is causal.
pub trait TauOracle {
    fn len(&self) -> usize;
    fn tau(&self, i: usize, j: usize) -> Result<f64>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Oracle backed by actual points of `L²(K)`.
#[derive(Debug, Clone)]
pub struct ModelOracle {
    pub gauge: CurvatureGauge,
    pub points: Vec<ModelPoint>,
}

impl TauOracle for ModelOracle {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn tau(&self, i: usize, j: usize) -> Result<f64> {
        tau_sym(&self.gauge, &self.points[i], &self.points[j])
    }
}

/// A point of the skeleton, named by the original data it comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FanLabel {
    /// The labelled point `k`.
    Vertex(usize),
    /// The point at separation `r` from the base point on its geodesic to point `k`.
    Spoke { k: usize, r: f64 },
    /// The point at separation `d` from point `k` on the segment to point `k + 1`.
    Chain { k: usize, d: f64 },
}

impl ModelOracle {
    pub fn new(gauge: CurvatureGauge, points: Vec<ModelPoint>) -> Self {
        ModelOracle { gauge, points }
    }

    /// The original point carrying `label`.
    pub fn resolve(&self, label: &FanLabel) -> Result<ModelPoint> {
        let g = &self.gauge;
        let get = |k: usize| {
            self.points
                .get(k)
                .copied()
                .ok_or_else(|| GeomError::Domain(format!("label index {k} out of range")))
        };
        match *label {
            FanLabel::Vertex(k) => get(k),
            FanLabel::Spoke { k, r } => {
                let (o, p) = (get(0)?, get(k)?);
                let len = tau(g, &o, &p)?;
                if len == 0.0 {
                    return Ok(o);
                }
                geodesic_point(g, &o, &p, (r / len).clamp(0.0, 1.0))
            }
            FanLabel::Chain { k, d } => {
                let (p, q) = (get(k)?, get(k + 1)?);
                let len = tau_sym(g, &p, &q)?;
                if len == 0.0 {
                    return Ok(p);
                }
                let f = (d / len).clamp(0.0, 1.0);
                if relation(g, &p, &q)?.is_causal_future() {
                    geodesic_point(g, &p, &q, f)
                } else {
                    geodesic_point(g, &q, &p, 1.0 - f)
                }
            }
        }
    }
}

/// Comparison triangles `Δ(Ō, p̄_k, p̄_{k+1})` glued along consecutive spokes.
#[derive(Debug, Clone)]
pub struct Fan {
    pub gauge: CurvatureGauge,
    pub apex: ModelPoint,
    /// `p̄_0 = Ō, p̄_1, …, p̄_m`.
    pub points: Vec<ModelPoint>,
    /// Spoke lengths `τ(Ō, p̄_k)`; `radii[0] = 0`.
    pub radii: Vec<f64>,
    /// Chain lengths `τ(p̄_k, p̄_{k+1})`.
    pub steps: Vec<f64>,
    /// Angle at `Ō` of triangle `k`; entry `0` is unused and zero.
    pub apex_angles: Vec<f64>,
    /// Side of `[Ō, p̄_m]` the fan opens towards.
    pub side: i8,
}

/// Lays out the comparison triangles of a chain around the chart origin.
///
/// The last point goes on the time axis and each earlier one is rotated onto
/// `side` of the next spoke, so consecutive triangles lie on opposite sides of
/// their shared spoke.
pub fn build_fan(g: &CurvatureGauge, oracle: &dyn TauOracle, side: i8) -> Result<Fan> {
    let n = oracle.len();
    if n < 2 {
        return Err(GeomError::Data(
            "a fan needs the base point and at least one more point".into(),
        ));
    }
    let m = n - 1;
    let mut radii = vec![0.0];
    for k in 1..=m {
        let r = oracle.tau(0, k)?;
        if !(r > 0.0) {
            return Err(GeomError::Data(format!(
                "point {k} is not in the timelike future of the base point"
            )));
        }
        if !g.below_diameter(r) {
            return Err(GeomError::Data(format!(
                "spoke {k} of length {r} not below D_K"
            )));
        }
        radii.push(r);
    }
    let mut steps = Vec::with_capacity(m);
    for k in 0..m {
        let d = oracle.tau(k, k + 1)?;
        if !(d > 0.0) {
            return Err(GeomError::Data(format!(
                "points {k} and {} are not timelike related",
                k + 1
            )));
        }
        steps.push(d);
    }
    let apex = ModelPoint::origin(g);
    let mut points = vec![apex; m + 1];
    points[m] = ModelPoint::from_coords(g, radii[m], 0.0);
    let mut apex_angles = vec![0.0; m];
    for k in (1..m).rev() {
        let w = loc_angle(g, radii[k], radii[k + 1], steps[k])
            .map_err(|e| GeomError::Data(format!("triangle {k} is not realizable: {e}")))?;
        if w.sigma != -1 {
            return Err(GeomError::Data(format!(
                "triangle {k} violates the reverse triangle inequality"
            )));
        }
        let (u, _) = direction(g, &apex, &points[k + 1])?;
        points[k] = place_by_angle(g, &apex, &u, SignedAngle::new(w.omega, -1), side, radii[k]);
        apex_angles[k] = w.omega;
    }
    Ok(Fan {
        gauge: *g,
        apex,
        points,
        radii,
        steps,
        apex_angles,
        side,
    })
}

impl Fan {
    /// Number of chain segments `m`.
    pub fn m(&self) -> usize {
        self.points.len() - 1
    }

    /// Filled triangle `k`, for `1 ≤ k < m`.
    pub fn triangle(&self, k: usize) -> Shape {
        Shape::Triangle([self.apex, self.points[k], self.points[k + 1]])
    }

    /// Lowest-index triangle containing `p`; `Some(0)` for the single spoke of a one-segment fan.
    pub fn locate(&self, p: &ModelPoint) -> Option<usize> {
        let g = &self.gauge;
        if self.m() == 1 {
            let s = Shape::Triangle([self.apex, self.apex, self.points[1]]);
            return s.contains(g, p, REGION_TOL).then_some(0);
        }
        (1..self.m()).find(|&k| self.triangle(k).contains(g, p, REGION_TOL))
    }

    /// Largest apex angle among triangles with index at least `min(i, j)`.
    pub fn max_spoke_angle(&self, i: usize, j: usize) -> f64 {
        let lo = i.min(j).max(1);
        self.apex_angles
            .iter()
            .skip(lo)
            .copied()
            .fold(0.0, f64::max)
    }

    fn near(&self, a: &ModelPoint, b: &ModelPoint) -> bool {
        a.chart_distance(b) <= SKELETON_TOL * a.c.iter().fold(1.0f64, |m, v| m.max(v.abs()))
    }

    fn on_line(&self, a: &ModelPoint, b: &ModelPoint, p: &ModelPoint) -> bool {
        side_value(&self.gauge, a, b, p).abs() <= SKELETON_TOL
    }

    /// Skeleton label of `p`, if `p` lies on a spoke or chain segment of triangle `k`.
    fn label_in(&self, k: usize, p: &ModelPoint) -> Result<Option<FanLabel>> {
        let g = &self.gauge;
        let o = &self.apex;
        if self.near(o, p) {
            return Ok(Some(FanLabel::Vertex(0)));
        }
        let ends: &[usize] = if k == 0 { &[1] } else { &[k, k + 1] };
        for &e in ends {
            if self.near(&self.points[e], p) {
                return Ok(Some(FanLabel::Vertex(e)));
            }
        }
        let r = if relation(g, o, p)?.is_causal_future() {
            tau(g, o, p)?
        } else {
            f64::INFINITY
        };
        for &e in ends {
            if self.on_line(o, &self.points[e], p) && r <= self.radii[e] * (1.0 + SKELETON_TOL) {
                return Ok(Some(FanLabel::Spoke {
                    k: e,
                    r: r.min(self.radii[e]),
                }));
            }
        }
        let (a, b) = (&self.points[k], &self.points[(k + 1).min(self.m())]);
        let between = |a: &ModelPoint, b: &ModelPoint| -> Result<bool> {
            Ok(relation(g, a, p)?.is_causal_future() && relation(g, p, b)?.is_causal_future())
        };
        if k > 0 && self.on_line(a, b, p) && (between(a, b)? || between(b, a)?) {
            return Ok(Some(FanLabel::Chain {
                k,
                d: tau_sym(g, &self.points[k], p)?,
            }));
        }
        Ok(None)
    }
}

/// Projection of the fan onto its skeleton, preserving the separation from `Ō`.
///
/// Interior points of a triangle move to its longer spoke.
pub fn skeleton_project(fan: &Fan, p: &ModelPoint) -> Result<ModelPoint> {
    let g = &fan.gauge;
    let k = fan
        .locate(p)
        .ok_or_else(|| GeomError::Domain(format!("point {:?} outside the fan", p.c)))?;
    if fan.label_in(k, p)?.is_some() {
        return Ok(*p);
    }
    let e = if fan.radii[k + 1] >= fan.radii[k] {
        k + 1
    } else {
        k
    };
    let r = tau(g, &fan.apex, p)?;
    geodesic_point(g, &fan.apex, &fan.points[e], (r / fan.radii[e]).min(1.0))
}

/// Label of the original point corresponding to a skeleton point.
pub fn psi_eval(fan: &Fan, p: &ModelPoint) -> Result<FanLabel> {
    let k = fan
        .locate(p)
        .ok_or_else(|| GeomError::Domain(format!("point {:?} outside the fan", p.c)))?;
    let last = if fan.m() == 1 { 0 } else { fan.m() - 1 };
    for t in k..=last {
        if let Some(label) = fan.label_in(t, p)? {
            return Ok(label);
        }
    }
    Err(GeomError::Domain(format!(
        "point {:?} is off the skeleton",
        p.c
    )))
}

/// Time separation of `x` to `y` within the union of the filled triangles.
///
/// Curves are restricted to cross each intermediate spoke once, at one of
/// `resolution + 1` evenly spaced points; the result is a lower bound that
/// improves with refinement. Unreachable pairs give `0`.
pub fn intrinsic_tau_fan(
    fan: &Fan,
    x: &ModelPoint,
    y: &ModelPoint,
    resolution: usize,
) -> Result<f64> {
    let g = &fan.gauge;
    let outside = |p: &ModelPoint| GeomError::Domain(format!("point {:?} outside the fan", p.c));
    let i = fan.locate(x).ok_or_else(|| outside(x))?;
    let j = fan.locate(y).ok_or_else(|| outside(y))?;
    let step = |a: &ModelPoint, b: &ModelPoint| -> Result<f64> {
        if relation(g, a, b)?.is_causal_future() {
            tau(g, a, b)
        } else {
            Ok(f64::NEG_INFINITY)
        }
    };
    let spokes: Vec<usize> = if i < j {
        (i + 1..=j).collect()
    } else {
        (j + 1..=i).rev().collect()
    };
    if spokes.is_empty() {
        return Ok(step(x, y)?.max(0.0));
    }
    let res = resolution.max(1);
    let samples = |k: usize| -> Result<Vec<ModelPoint>> {
        (0..=res)
            .map(|s| geodesic_point(g, &fan.apex, &fan.points[k], s as f64 / res as f64))
            .collect()
    };
    let mut prev = samples(spokes[0])?;
    let mut best = prev
        .iter()
        .map(|q| step(x, q))
        .collect::<Result<Vec<_>>>()?;
    for &k in &spokes[1..] {
        let cur = samples(k)?;
        let mut next = vec![f64::NEG_INFINITY; cur.len()];
        for (b, q) in cur.iter().enumerate() {
            for (a, p) in prev.iter().enumerate() {
                if best[a] == f64::NEG_INFINITY {
                    continue;
                }
                let v = best[a] + step(p, q)?;
                if v > next[b] {
                    next[b] = v;
                }
            }
        }
        prev = cur;
        best = next;
    }
    let mut out = f64::NEG_INFINITY;
    for (a, p) in prev.iter().enumerate() {
        if best[a] > f64::NEG_INFINITY {
            out = out.max(best[a] + step(p, y)?);
        }
    }
    Ok(out.max(0.0))
}
