use crate::model::{relation, side_value, tau, CurvatureGauge, ModelPoint, Orientation};

/// Membership tolerance for region boundaries.
pub const REGION_TOL: f64 = 1e-10;

/// A closed region of `L²(K)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Filled geodesic triangle.
    Triangle([ModelPoint; 3]),
    /// Hyperbolic sector: points between the spokes `center → spokes[i]` within
    /// time separation `radius` of the centre, to the future or the past.
    Sector {
        center: ModelPoint,
        spokes: [ModelPoint; 2],
        radius: f64,
        orientation: Orientation,
    },
}

fn on_side(v: f64, reference: f64, tol: f64) -> bool {
    if reference.abs() <= tol.abs() {
        v.abs() <= tol.abs()
    } else {
        v * reference.signum() >= -tol
    }
}

fn causally_between(g: &CurvatureGauge, lo: &ModelPoint, hi: &ModelPoint, p: &ModelPoint) -> bool {
    let a = relation(g, lo, p)
        .map(|c| c.is_causal_future())
        .unwrap_or(false);
    let b = relation(g, p, hi)
        .map(|c| c.is_causal_future())
        .unwrap_or(false);
    a && b
}

impl Shape {
    /// Membership with a relative tolerance; a negative `tol` tests the interior.
    pub fn contains(&self, g: &CurvatureGauge, p: &ModelPoint, tol: f64) -> bool {
        match self {
            Shape::Triangle(v) => {
                let mut degenerate = true;
                for i in 0..3 {
                    let (a, b, c) = (&v[i], &v[(i + 1) % 3], &v[(i + 2) % 3]);
                    let r = side_value(g, a, b, c);
                    if r.abs() > tol.abs() {
                        degenerate = false;
                    }
                    if !on_side(side_value(g, a, b, p), r, tol) {
                        return false;
                    }
                }
                if degenerate {
                    let mut ends = (v[0], v[1]);
                    let mut best = -1.0;
                    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                        for (a, b) in [(v[i], v[j]), (v[j], v[i])] {
                            let t = tau(g, &a, &b).unwrap_or(0.0);
                            if t > best {
                                best = t;
                                ends = (a, b);
                            }
                        }
                    }
                    return causally_between(g, &ends.0, &ends.1, p);
                }
                true
            }
            Shape::Sector {
                center,
                spokes,
                radius,
                orientation,
            } => {
                let r = match orientation {
                    Orientation::Future => {
                        if !relation(g, center, p)
                            .map(|c| c.is_causal_future())
                            .unwrap_or(false)
                        {
                            return false;
                        }
                        tau(g, center, p).unwrap_or(f64::INFINITY)
                    }
                    Orientation::Past => {
                        if !relation(g, p, center)
                            .map(|c| c.is_causal_future())
                            .unwrap_or(false)
                        {
                            return false;
                        }
                        tau(g, p, center).unwrap_or(f64::INFINITY)
                    }
                };
                if r > radius + tol * radius.max(1.0) {
                    return false;
                }
                let [a, b] = spokes;
                on_side(
                    side_value(g, center, a, p),
                    side_value(g, center, a, b),
                    tol,
                ) && on_side(
                    side_value(g, center, b, p),
                    side_value(g, center, b, a),
                    tol,
                )
            }
        }
    }

    /// Vertices of a triangle, or the centre and spoke ends of a sector.
    pub fn corners(&self) -> [ModelPoint; 3] {
        match self {
            Shape::Triangle(v) => *v,
            Shape::Sector { center, spokes, .. } => [*center, spokes[0], spokes[1]],
        }
    }
}

/// A named region of a decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub name: String,
    pub shape: Shape,
}

/// Ordered list of regions; boundary points belong to the lowest index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Decomposition {
    pub regions: Vec<Region>,
}

impl Decomposition {
    /// Index of the first region containing `p`.
    pub fn locate(&self, g: &CurvatureGauge, p: &ModelPoint) -> Option<usize> {
        self.regions
            .iter()
            .position(|r| r.shape.contains(g, p, REGION_TOL))
    }

    pub fn get(&self, name: &str) -> Option<&Region> {
        self.regions.iter().find(|r| r.name == name)
    }
}
