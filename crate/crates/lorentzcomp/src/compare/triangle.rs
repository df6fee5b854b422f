use crate::error::{GeomError, Result};
use crate::model::{
    direction, dot, frame_at, geodesic_point, isometry_from_segments, lin, null_point,
    place_by_angle, sub, tau, CurvatureGauge, ModelPoint, SignedAngle,
};

/// Construction tolerance for side-length bookkeeping.
pub const BUILD_TOL: f64 = 1e-9;

/// Side lengths `a = τ(x,y)`, `b = τ(y,z)`, `c = τ(x,z)` of a causal triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SideTriple {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        SideTriple { a, b, c }
    }

    /// Checks the reverse triangle inequality, the size bound and admissibility.
    pub fn validate(&self, g: &CurvatureGauge) -> Result<()> {
        let SideTriple { a, b, c } = *self;
        if ![a, b, c].iter().all(|v| v.is_finite() && *v >= 0.0) {
            return Err(GeomError::NonRealizable(format!(
                "sides must be finite and non-negative: {self:?}"
            )));
        }
        if c <= 0.0 {
            return Err(GeomError::NonRealizable(
                "longest side must be positive".into(),
            ));
        }
        if a == 0.0 && b == 0.0 {
            return Err(GeomError::NonRealizable(
                "at most one side may be null".into(),
            ));
        }
        if a + b > c + BUILD_TOL * c.max(1.0) {
            return Err(GeomError::NonRealizable(format!(
                "reverse triangle inequality fails: {a} + {b} > {c}"
            )));
        }
        if !g.below_diameter(c) {
            return Err(GeomError::NonRealizable(format!("side {c} not below D_K")));
        }
        Ok(())
    }
}

/// Where to put a comparison triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    /// `x̄` at the chart origin, `z̄` on the time axis, `ȳ` on side `side`.
    Canonical { side: i8 },
    /// `x̄`, `z̄` given; `ȳ` on side `side` of the geodesic `x̄ → z̄`.
    GivenBase {
        x: ModelPoint,
        z: ModelPoint,
        side: i8,
    },
}

/// A comparison triangle in `L²(K)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizedTriangle {
    pub x: ModelPoint,
    pub y: ModelPoint,
    pub z: ModelPoint,
    pub gauge: CurvatureGauge,
    pub sides: SideTriple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleSide {
    XY,
    YZ,
    XZ,
}

/// Angle at the vertex between adjacent sides `p`, `q` opposite `r`, where `r`
/// is not the longest side; clamped at the degenerate limit.
fn inner_angle(g: &CurvatureGauge, p: f64, q: f64, r: f64) -> SignedAngle {
    let (hp, hq) = (g.h(p), g.h(q));
    let v = (g.h(r) - hp - hq - g.k * hp * hq) / (g.sn(p) * g.sn(q));
    SignedAngle::new((-v).max(1.0).acosh(), -1)
}

fn canonical(
    g: &CurvatureGauge,
    s: &SideTriple,
    side: i8,
) -> Result<(ModelPoint, ModelPoint, ModelPoint)> {
    let x = ModelPoint::origin(g);
    let z = ModelPoint::from_coords(g, s.c, 0.0);
    let m_xz = 2.0 * g.h(s.c);
    let y = if s.a == 0.0 {
        let (e_t, e_x) = frame_at(g, &x);
        let l = lin(1.0, &e_t, side as f64, &e_x);
        let lambda = (2.0 * g.h(s.b) - m_xz) / (2.0 * dot(g, &sub(&z.c, &x.c), &l));
        null_point(g, &x, &l, lambda.max(0.0))
    } else if s.b == 0.0 {
        let (e_t, e_x) = frame_at(g, &z);
        let l = lin(1.0, &e_t, -(side as f64), &e_x);
        let lambda = (2.0 * g.h(s.a) - m_xz) / (2.0 * dot(g, &sub(&z.c, &x.c), &l));
        null_point(g, &z, &l, -lambda.max(0.0))
    } else {
        let (u, _) = direction(g, &x, &z)?;
        let w = inner_angle(g, s.a, s.c, s.b);
        place_by_angle(g, &x, &u, w, side, s.a)
    };
    Ok((x, y, z))
}

/// Comparison triangle with the given side lengths.
pub fn realize_triangle(
    g: &CurvatureGauge,
    s: &SideTriple,
    placement: Placement,
) -> Result<RealizedTriangle> {
    s.validate(g)?;
    match placement {
        Placement::Canonical { side } => {
            let (x, y, z) = canonical(g, s, side)?;
            Ok(RealizedTriangle {
                x,
                y,
                z,
                gauge: *g,
                sides: *s,
            })
        }
        Placement::GivenBase { x, z, side } => {
            let c = tau(g, &x, &z)?;
            if (c - s.c).abs() > BUILD_TOL * c.max(1.0) {
                return Err(GeomError::Domain(format!(
                    "base length {c} differs from {}",
                    s.c
                )));
            }
            let (x0, y0, z0) = canonical(g, s, side)?;
            let iso = isometry_from_segments(g, (&x0, &z0), (&x, &z), false)?;
            Ok(RealizedTriangle {
                x,
                y: iso.apply(g, &y0),
                z,
                gauge: *g,
                sides: *s,
            })
        }
    }
}

impl RealizedTriangle {
    pub fn side_length(&self, side: TriangleSide) -> f64 {
        match side {
            TriangleSide::XY => self.sides.a,
            TriangleSide::YZ => self.sides.b,
            TriangleSide::XZ => self.sides.c,
        }
    }

    pub fn endpoints(&self, side: TriangleSide) -> (ModelPoint, ModelPoint) {
        match side {
            TriangleSide::XY => (self.x, self.y),
            TriangleSide::YZ => (self.y, self.z),
            TriangleSide::XZ => (self.x, self.z),
        }
    }

    pub fn vertices(&self) -> [ModelPoint; 3] {
        [self.x, self.y, self.z]
    }
}

/// Point on a timelike side at time separation `dist` from its earlier endpoint.
pub fn comparison_point(t: &RealizedTriangle, side: TriangleSide, dist: f64) -> Result<ModelPoint> {
    let len = t.side_length(side);
    if len == 0.0 {
        return Err(GeomError::Domain(
            "comparison points are never taken on a null side".into(),
        ));
    }
    if !(0.0..=len * (1.0 + BUILD_TOL)).contains(&dist) {
        return Err(GeomError::Domain(format!(
            "distance {dist} outside [0, {len}]"
        )));
    }
    let (p, q) = t.endpoints(side);
    geodesic_point(&t.gauge, &p, &q, (dist / len).min(1.0))
}
