use super::triangle::{
    comparison_point, realize_triangle, Placement, RealizedTriangle, SideTriple, TriangleSide,
    BUILD_TOL,
};
use crate::error::{GeomError, Result};
use crate::model::{geodesic_point, tau, CurvatureGauge, ModelPoint};

/// A point of the original triangle: a vertex (`0 = x`, `1 = y`, `2 = z`) or a
/// point on a side at the given time separation from its earlier endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrianglePoint {
    Vertex(usize),
    OnSide(TriangleSide, f64),
}

/// Time separation between labelled points of an original triangle.
pub trait TriangleOracle {
    fn tau(&self, p: &TrianglePoint, q: &TrianglePoint) -> f64;
}

/// Oracle backed by a triangle of actual points in a model space.
#[derive(Debug, Clone, Copy)]
pub struct ModelTriangleOracle {
    pub gauge: CurvatureGauge,
    pub vertices: [ModelPoint; 3],
}

impl ModelTriangleOracle {
    fn resolve(&self, p: &TrianglePoint) -> ModelPoint {
        let g = &self.gauge;
        let [x, y, z] = self.vertices;
        match *p {
            TrianglePoint::Vertex(i) => self.vertices[i],
            TrianglePoint::OnSide(side, d) => {
                let (a, b) = match side {
                    TriangleSide::XY => (x, y),
                    TriangleSide::YZ => (y, z),
                    TriangleSide::XZ => (x, z),
                };
                let len = tau(g, &a, &b).unwrap_or(0.0);
                if len == 0.0 {
                    return a;
                }
                geodesic_point(g, &a, &b, (d / len).clamp(0.0, 1.0)).unwrap_or(a)
            }
        }
    }
}

impl TriangleOracle for ModelTriangleOracle {
    fn tau(&self, p: &TrianglePoint, q: &TrianglePoint) -> f64 {
        tau(&self.gauge, &self.resolve(p), &self.resolve(q)).unwrap_or(f64::INFINITY)
    }
}

/// One vertex-to-opposite-side comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideCheck {
    pub vertex: usize,
    pub side: TriangleSide,
    pub dist: f64,
    /// `τ_original − τ_comparison` in the causal direction of the pair.
    pub margin: f64,
    pub pass: bool,
}

fn opposite(v: usize) -> TriangleSide {
    match v {
        0 => TriangleSide::YZ,
        1 => TriangleSide::XZ,
        _ => TriangleSide::XY,
    }
}

/// One-sided triangle comparison at `samples` evenly spaced points of every
/// timelike side, against the opposite vertex.
pub fn check_triangle_comparison_sampled(
    g: &CurvatureGauge,
    s: &SideTriple,
    oracle: &dyn TriangleOracle,
    samples: usize,
    tol: f64,
) -> Result<Vec<SideCheck>> {
    let v = |i| TrianglePoint::Vertex(i);
    let (a, b, c) = (
        oracle.tau(&v(0), &v(1)),
        oracle.tau(&v(1), &v(2)),
        oracle.tau(&v(0), &v(2)),
    );
    let scale = c.max(1.0);
    if a + b > c + BUILD_TOL * scale {
        return Err(GeomError::Data(format!(
            "oracle violates the reverse triangle inequality: {a} + {b} > {c}"
        )));
    }
    for (o, w) in [(a, s.a), (b, s.b), (c, s.c)] {
        if (o - w).abs() > BUILD_TOL * scale {
            return Err(GeomError::Data(format!(
                "oracle side {o} disagrees with {w}"
            )));
        }
    }
    let tri: RealizedTriangle = realize_triangle(g, s, Placement::Canonical { side: 1 })?;
    let bars = tri.vertices();
    let mut out = Vec::new();
    for vertex in 0..3 {
        let side = opposite(vertex);
        let len = tri.side_length(side);
        if len == 0.0 {
            continue;
        }
        for k in 0..samples {
            let dist = len * (k as f64 + 0.5) / samples as f64;
            let p = TrianglePoint::OnSide(side, dist);
            let pbar = comparison_point(&tri, side, dist)?;
            let (of, cf) = (oracle.tau(&v(vertex), &p), tau(g, &bars[vertex], &pbar)?);
            let (ob, cb) = (oracle.tau(&p, &v(vertex)), tau(g, &pbar, &bars[vertex])?);
            let margin = if of.max(cf) >= ob.max(cb) {
                of - cf
            } else {
                ob - cb
            };
            out.push(SideCheck {
                vertex,
                side,
                dist,
                margin,
                pass: margin >= -tol,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::curvature_gauge;

    fn oracle(k: f64, pts: [(f64, f64); 3]) -> (ModelTriangleOracle, SideTriple) {
        let g = curvature_gauge(k);
        let v = pts.map(|(t, x)| ModelPoint::from_coords(&g, t, x));
        let s = SideTriple::new(
            tau(&g, &v[0], &v[1]).unwrap(),
            tau(&g, &v[1], &v[2]).unwrap(),
            tau(&g, &v[0], &v[2]).unwrap(),
        );
        (
            ModelTriangleOracle {
                gauge: g,
                vertices: v,
            },
            s,
        )
    }

    #[test]
    fn model_space_satisfies_its_own_bound() {
        for k in [-1.0, 0.0, 1.0] {
            let (o, s) = oracle(k, [(0.0, 0.0), (0.6, 0.35), (1.5, -0.1)]);
            let checks = check_triangle_comparison_sampled(&o.gauge, &s, &o, 16, 1e-9).unwrap();
            assert_eq!(checks.len(), 48);
            assert!(
                checks.iter().all(|c| c.pass && c.margin.abs() < 1e-9),
                "k={k}"
            );
        }
    }

    #[test]
    fn flat_space_passes_negative_bound_only() {
        let (o, s) = oracle(0.0, [(0.0, 0.0), (0.6, 0.35), (1.5, -0.1)]);
        let checks =
            check_triangle_comparison_sampled(&curvature_gauge(-1.0), &s, &o, 16, 1e-9).unwrap();
        assert!(checks.iter().all(|c| c.pass));
        assert!(checks.iter().any(|c| c.margin > 1e-6));
        let checks =
            check_triangle_comparison_sampled(&curvature_gauge(1.0), &s, &o, 16, 1e-9).unwrap();
        assert!(checks.iter().any(|c| !c.pass));
    }

    #[test]
    fn degenerate_triangle_has_zero_margins() {
        let (o, s) = oracle(0.0, [(0.0, 0.0), (0.5, 0.1), (1.5, 0.3)]);
        let checks =
            check_triangle_comparison_sampled(&curvature_gauge(0.0), &s, &o, 8, 1e-9).unwrap();
        assert!(checks.iter().all(|c| c.margin.abs() < 1e-9));
    }

    #[test]
    fn inconsistent_oracle_is_data_error() {
        struct Bad;
        impl TriangleOracle for Bad {
            fn tau(&self, p: &TrianglePoint, q: &TrianglePoint) -> f64 {
                match (p, q) {
                    (TrianglePoint::Vertex(0), TrianglePoint::Vertex(2)) => 1.0,
                    _ => 0.8,
                }
            }
        }
        let r = check_triangle_comparison_sampled(
            &curvature_gauge(0.0),
            &SideTriple::new(0.8, 0.8, 1.0),
            &Bad,
            4,
            1e-9,
        );
        assert!(matches!(r, Err(GeomError::Data(_))));
    }
}
