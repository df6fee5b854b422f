use super::piecewise::{Action, Piece, PiecewiseMap, Stage};
use super::region::{Decomposition, Region, Shape};
use crate::compare::{realize_triangle, Placement, RealizedTriangle, SideTriple};
use crate::error::{GeomError, Result};
use crate::model::{
    angle_at, geodesic_point, isometry_from_segments, relation, side_value, tau, time_reversal,
    CausalClass, CurvatureGauge, ModelPoint, Orientation,
};

/// Angle difference above which a vertex counts as concave.
pub const CONCAVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Concavity {
    Concave,
    Flat,
    Convex,
}

/// A straightened four-point configuration.
#[derive(Debug, Clone)]
pub struct Straightening {
    /// `Δ(x̄1, x̄2, x̄4)`, stored with `x = x̄1`, `y = x̄2`, `z = x̄4`.
    pub triangle: RealizedTriangle,
    /// Image of `x3` on `[x̄2, x̄4]`.
    pub x3_bar: ModelPoint,
    /// Copy of `x3` in the triangle attached along `[x̄1, x̄2]`.
    pub x3_prime: ModelPoint,
    /// Copy of `x3` in the triangle attached along `[x̄1, x̄4]`.
    pub x3_second: ModelPoint,
    pub decomposition: Decomposition,
    /// Map from the straightened triangle onto the quadrilateral.
    pub map: PiecewiseMap,
    pub concavity: Concavity,
}

impl Straightening {
    /// Margins of the five inequalities between the quadrilateral and the
    /// straightened triangle; all are non-negative when the construction is sound.
    ///
    /// Order: `τ(x1,x3) - τ(x̄1,x̄3)`, `∡x1(x2,x3) - ∡x̄1(x̄2,x̄3)`,
    /// `∡x̄1(x̄3,x̄4) - ∡x1(x3,x4)`, `∡x2(x1,x3) - ∡x̄2(x̄1,x̄3)`,
    /// `∡x̄4(x̄1,x̄3) - ∡x4(x1,x3)`.
    pub fn intermediate_margins(
        &self,
        g: &CurvatureGauge,
        x: &[ModelPoint; 4],
    ) -> Result<[f64; 5]> {
        let (b1, b2, b3, b4) = (
            self.triangle.x,
            self.triangle.y,
            self.x3_bar,
            self.triangle.z,
        );
        let w =
            |v: &ModelPoint, p: &ModelPoint, q: &ModelPoint| angle_at(g, v, p, q).map(|a| a.omega);
        Ok([
            tau(g, &x[0], &x[2])? - tau(g, &b1, &b3)?,
            w(&x[0], &x[1], &x[2])? - w(&b1, &b2, &b3)?,
            w(&b1, &b3, &b4)? - w(&x[0], &x[2], &x[3])?,
            w(&x[1], &x[0], &x[2])? - w(&b2, &b1, &b3)?,
            w(&b4, &b1, &b3)? - w(&x[3], &x[0], &x[2])?,
        ])
    }
}

/// Concavity of the quadrilateral `x1 x2 x3 x4` at `x3`, with the angle difference
/// `∡x3(x1,x2) - ∡x3(x1,x4)`.
pub fn concavity_at_x3(g: &CurvatureGauge, x: &[ModelPoint; 4]) -> Result<(Concavity, f64)> {
    let diff = match (
        angle_at(g, &x[2], &x[0], &x[1]),
        angle_at(g, &x[2], &x[0], &x[3]),
    ) {
        (Ok(a), Ok(b)) => a.omega - b.omega,
        _ => {
            let inner = side_value(g, &x[1], &x[3], &x[0]).signum();
            inner * side_value(g, &x[1], &x[3], &x[2])
        }
    };
    let c = if diff > CONCAVITY_TOL {
        Concavity::Concave
    } else if diff < -CONCAVITY_TOL {
        Concavity::Convex
    } else {
        Concavity::Flat
    };
    Ok((c, diff))
}

fn require(
    g: &CurvatureGauge,
    p: &ModelPoint,
    q: &ModelPoint,
    null_ok: bool,
    name: &str,
) -> Result<()> {
    match relation(g, p, q)? {
        CausalClass::ChronoFuture => Ok(()),
        CausalClass::NullFuture if null_ok => Ok(()),
        c => Err(GeomError::Precondition(format!(
            "{name} must be future-directed, got {c}"
        ))),
    }
}

fn sign_or(v: f64, default: f64) -> f64 {
    if v.abs() <= CONCAVITY_TOL {
        default
    } else {
        v.signum()
    }
}

/// Straightens a quadrilateral `x1 ≪ x2 ≪ x3 ≪ x4` that is concave at `x3`.
///
/// The result keeps `x̄1 = x1` and `x̄4 = x4` and puts `x̄2` on the side of
/// `x2`. With `allow_null` the pairs `x1 ≤ x2` and `x2 ≤ x3` may be null.
pub fn straighten_alexandrov(
    g: &CurvatureGauge,
    x: &[ModelPoint; 4],
    allow_null: bool,
) -> Result<Straightening> {
    let [x1, x2, x3, x4] = *x;
    require(g, &x1, &x2, allow_null, "x1 → x2")?;
    require(g, &x2, &x3, allow_null, "x2 → x3")?;
    if relation(g, &x3, &x4)? == CausalClass::NullFuture {
        return Err(GeomError::NotApplicable(
            "a null side x3 → x4 forces a convex quadrilateral".into(),
        ));
    }
    require(g, &x3, &x4, false, "x3 → x4")?;
    require(g, &x1, &x3, false, "x1 → x3")?;
    require(g, &x2, &x4, false, "x2 → x4")?;
    let (t12, t23, t34) = (tau(g, &x1, &x2)?, tau(g, &x2, &x3)?, tau(g, &x3, &x4)?);
    let (t13, t14) = (tau(g, &x1, &x3)?, tau(g, &x1, &x4)?);
    if t12 == 0.0 && t23 == 0.0 {
        return Err(GeomError::Unsupported(
            "both x1 → x2 and x2 → x3 null".into(),
        ));
    }
    let (s2, s4) = (side_value(g, &x1, &x3, &x2), side_value(g, &x1, &x3, &x4));
    if s2 * s4 > CONCAVITY_TOL * CONCAVITY_TOL {
        return Err(GeomError::Precondition(
            "triangles x1x2x3 and x1x3x4 overlap".into(),
        ));
    }
    let (concavity, diff) = concavity_at_x3(g, x)?;
    if concavity == Concavity::Convex {
        return Err(GeomError::NotApplicable(format!(
            "quadrilateral is convex at x3 (angle difference {diff:e})"
        )));
    }

    let side = sign_or(
        side_value(g, &x1, &x4, &x2),
        sign_or(-side_value(g, &x1, &x4, &x3), 1.0),
    ) as i8;
    let sides = SideTriple::new(t12, t23 + t34, t14);
    let triangle = realize_triangle(g, &sides, Placement::GivenBase { x: x1, z: x4, side })?;
    let (b1, b2, b4) = (triangle.x, triangle.y, triangle.z);
    let b3 = geodesic_point(g, &b2, &b4, t23 / (t23 + t34))?;

    let inside = side_value(g, &b1, &b2, &b4).signum();
    let mut copy = None;
    for flip in [false, true] {
        if let Ok(iso) = isometry_from_segments(g, (&x1, &x2), (&b1, &b2), flip) {
            let p = iso.apply(g, &x3);
            let v = side_value(g, &b1, &b2, &p);
            if v * inside >= -CONCAVITY_TOL {
                copy = Some((iso, p));
                break;
            }
        }
    }
    let (iso2, b3p) =
        copy.ok_or_else(|| GeomError::Internal("no orientation places the copy inside".into()))?;
    let b3pp = x3;

    let mut regions = vec![
        Region {
            name: "T2".into(),
            shape: Shape::Triangle([b1, b2, b3p]),
        },
        Region {
            name: "T4".into(),
            shape: Shape::Triangle([b1, b3pp, b4]),
        },
        Region {
            name: "H1".into(),
            shape: Shape::Sector {
                center: b1,
                spokes: [b3p, b3pp],
                radius: t13,
                orientation: Orientation::Future,
            },
        },
    ];
    let mut actions = vec![
        Action::Isometry(iso2.inverse()?),
        Action::Identity,
        Action::Collapse {
            center: b1,
            orientation: Orientation::Future,
            from: x1,
            to: x3,
        },
    ];
    if t23 > 0.0 {
        regions.push(Region {
            name: "H2".into(),
            shape: Shape::Sector {
                center: b2,
                spokes: [b3, b3p],
                radius: t23,
                orientation: Orientation::Future,
            },
        });
        actions.push(Action::Collapse {
            center: b2,
            orientation: Orientation::Future,
            from: x2,
            to: x3,
        });
    }
    regions.push(Region {
        name: "H4".into(),
        shape: Shape::Sector {
            center: b4,
            spokes: [b3, b3pp],
            radius: t34,
            orientation: Orientation::Past,
        },
    });
    actions.push(Action::Collapse {
        center: b4,
        orientation: Orientation::Past,
        from: x3,
        to: x4,
    });
    let pieces = regions
        .iter()
        .zip(actions)
        .map(|(r, action)| Piece {
            label: r.name.clone(),
            shape: r.shape.clone(),
            action,
        })
        .collect();
    Ok(Straightening {
        triangle,
        x3_bar: b3,
        x3_prime: b3p,
        x3_second: b3pp,
        decomposition: Decomposition { regions },
        map: PiecewiseMap::pieces(g, pieces, None),
        concavity,
    })
}

/// The time-reversed straightening of a quadrilateral concave at `x2`.
///
/// Returns the new corner replacing `x3`, the point `x2` moves to on the
/// straight side `[x̄1, x̄3]`, and the map from the triangle `x1 x̄3 x4` onto the
/// quadrilateral.
pub(crate) fn straighten_reversed(
    g: &CurvatureGauge,
    x: &[ModelPoint; 4],
) -> Result<(ModelPoint, ModelPoint, PiecewiseMap)> {
    let r = |p: &ModelPoint| time_reversal(g, p);
    let y = [r(&x[3]), r(&x[2]), r(&x[1]), r(&x[0])];
    let s = straighten_alexandrov(g, &y, false)?;
    let map = PiecewiseMap::single(g, Stage::TimeReversal)
        .then(s.map)
        .then(PiecewiseMap::single(g, Stage::TimeReversal));
    Ok((r(&s.triangle.y), r(&s.x3_bar), map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{curvature_gauge, triangle_point};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn flat_fixture() -> [ModelPoint; 4] {
        [
            ModelPoint::flat(0.0, 0.0),
            ModelPoint::flat(1.0, 0.6),
            ModelPoint::flat(2.0, 0.3),
            ModelPoint::flat(4.0, 0.0),
        ]
    }

    #[test]
    fn flat_fixture_side_lengths() {
        let g = curvature_gauge(0.0);
        let x = flat_fixture();
        let s = straighten_alexandrov(&g, &x, false).unwrap();
        assert_eq!(s.concavity, Concavity::Concave);
        let t23 = 0.91f64.sqrt();
        let t34 = 3.91f64.sqrt();
        assert!((s.triangle.sides.a - 0.8).abs() < 1e-12);
        assert!((s.triangle.sides.b - (t23 + t34)).abs() < 1e-12);
        assert!((s.triangle.sides.c - 4.0).abs() < 1e-12);
        assert!((tau(&g, &s.triangle.y, &s.triangle.z).unwrap() - (t23 + t34)).abs() < 1e-12);
        assert!((tau(&g, &s.triangle.x, &s.triangle.y).unwrap() - 0.8).abs() < 1e-12);
        for m in s.intermediate_margins(&g, &x).unwrap() {
            assert!(m >= -1e-12, "{m}");
        }
        let names: Vec<_> = s
            .decomposition
            .regions
            .iter()
            .map(|r| r.name.as_str())
            .collect();
        assert_eq!(names, ["T2", "T4", "H1", "H2", "H4"]);
    }

    #[test]
    fn outward_vertex_is_not_applicable() {
        let g = curvature_gauge(0.0);
        let mut x = flat_fixture();
        x[2] = ModelPoint::flat(2.0, 0.9);
        assert!(matches!(
            straighten_alexandrov(&g, &x, false),
            Err(GeomError::NotApplicable(_))
        ));
    }

    #[test]
    fn overlapping_triangles_rejected() {
        let g = curvature_gauge(0.0);
        let x = [
            ModelPoint::flat(0.0, 0.0),
            ModelPoint::flat(1.0, 0.1),
            ModelPoint::flat(2.0, 0.6),
            ModelPoint::flat(4.0, 0.9),
        ];
        assert!(matches!(
            straighten_alexandrov(&g, &x, false),
            Err(GeomError::Precondition(_))
        ));
    }

    #[test]
    fn flat_vertex_gives_isometry() {
        let g = curvature_gauge(0.0);
        let x = [
            ModelPoint::flat(0.0, 0.0),
            ModelPoint::flat(1.0, 0.6),
            ModelPoint::flat(2.5, 0.3),
            ModelPoint::flat(4.0, 0.0),
        ];
        let s = straighten_alexandrov(&g, &x, false).unwrap();
        assert_eq!(s.concavity, Concavity::Flat);
        for p in [
            ModelPoint::flat(1.0, 0.3),
            ModelPoint::flat(3.0, 0.1),
            ModelPoint::flat(2.0, 0.35),
        ] {
            let q = s.map.eval(&p).unwrap();
            assert!(q.chart_distance(&p) < 1e-7, "{p:?} -> {q:?}");
        }
    }

    #[test]
    fn map_is_long_on_samples() {
        for k in [-1.0, 0.0, 1.0] {
            let g = curvature_gauge(k);
            let x = [
                ModelPoint::from_coords(&g, 0.0, 0.0),
                ModelPoint::from_coords(&g, 0.5, 0.3),
                ModelPoint::from_coords(&g, 1.0, 0.12),
                ModelPoint::from_coords(&g, 2.0, 0.0),
            ];
            let s = straighten_alexandrov(&g, &x, false).unwrap();
            assert_eq!(s.concavity, Concavity::Concave);
            let v = s.triangle.vertices();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut checked = 0;
            while checked < 300 {
                let w = |rng: &mut ChaCha8Rng| {
                    [
                        rng.random::<f64>(),
                        rng.random::<f64>(),
                        rng.random::<f64>(),
                    ]
                };
                let p = triangle_point(&g, &v, w(&mut rng));
                let r = triangle_point(&g, &v, w(&mut rng));
                if !relation(&g, &p, &r).unwrap().is_causal_future() {
                    continue;
                }
                checked += 1;
                let (fp, fr) = (s.map.eval(&p).unwrap(), s.map.eval(&r).unwrap());
                assert!(relation(&g, &fp, &fr).unwrap().is_causal_future(), "k={k}");
                let d = tau(&g, &fp, &fr).unwrap() - tau(&g, &p, &r).unwrap();
                assert!(d >= -1e-7, "k={k} defect {d}");
            }
            for (i, corner) in [(0usize, v[0]), (1, v[1]), (3, v[2])] {
                assert!(s.map.eval(&corner).unwrap().chart_distance(&x[i]) < 1e-9);
            }
            assert!(s.map.eval(&s.x3_bar).unwrap().chart_distance(&x[2]) < 1e-9);
        }
    }

    #[test]
    fn reversed_straightening_keeps_ends() {
        let g = curvature_gauge(0.0);
        let x = [
            ModelPoint::flat(0.0, 0.0),
            ModelPoint::flat(2.0, 0.3),
            ModelPoint::flat(3.0, 0.6),
            ModelPoint::flat(4.0, 0.0),
        ];
        let (corner, on_side, map) = straighten_reversed(&g, &x).unwrap();
        assert!((tau(&g, &corner, &x[3]).unwrap() - tau(&g, &x[2], &x[3]).unwrap()).abs() < 1e-12);
        assert!(map.eval(&x[0]).unwrap().chart_distance(&x[0]) < 1e-9);
        assert!(map.eval(&on_side).unwrap().chart_distance(&x[1]) < 1e-9);
        assert!(map.eval(&corner).unwrap().chart_distance(&x[2]) < 1e-9);
    }
}
