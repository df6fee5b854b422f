use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GeomError, Result};
use crate::model::{relation, tau, Branch, CurvatureGauge, ModelPoint};

/// Shape of a sprinkling region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionShape {
    /// Causal diamond `J(lo, hi)`.
    Diamond { lo: ModelPoint, hi: ModelPoint },
    /// Chart box `[t0, t1] × [x0, x1]`.
    Box { t0: f64, t1: f64, x0: f64, x1: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub gauge: CurvatureGauge,
    pub shape: RegionShape,
    /// `τ(lo, hi)` for diamonds.
    pub corner_tau: Option<f64>,
}

fn gd(u: f64) -> f64 {
    u.sinh().atan()
}

impl Region {
    /// Diamond between `lo ≤ hi`; a null or coincident pair gives a degenerate diamond.
    pub fn diamond(g: &CurvatureGauge, lo: ModelPoint, hi: ModelPoint) -> Result<Self> {
        lo.validate(g)?;
        hi.validate(g)?;
        if !relation(g, &lo, &hi)?.is_causal_future() {
            return Err(GeomError::Precondition(
                "diamond corners must satisfy lo ≤ hi".into(),
            ));
        }
        let t = tau(g, &lo, &hi)?;
        if !g.below_diameter(t) {
            return Err(GeomError::Precondition(format!(
                "diamond τ = {t} not below D_K"
            )));
        }
        Ok(Region {
            gauge: *g,
            shape: RegionShape::Diamond { lo, hi },
            corner_tau: Some(t),
        })
    }

    /// Diamond with corners at chart coordinates `(t_lo, x_lo)` and `(t_hi, x_hi)`.
    pub fn diamond_coords(g: &CurvatureGauge, lo: (f64, f64), hi: (f64, f64)) -> Result<Self> {
        Region::diamond(
            g,
            ModelPoint::from_coords(g, lo.0, lo.1),
            ModelPoint::from_coords(g, hi.0, hi.1),
        )
    }

    pub fn coord_box(g: &CurvatureGauge, t0: f64, t1: f64, x0: f64, x1: f64) -> Result<Self> {
        if ![t0, t1, x0, x1].iter().all(|v| v.is_finite()) || t1 < t0 || x1 < x0 {
            return Err(GeomError::Input(format!(
                "bad box [{t0}, {t1}] × [{x0}, {x1}]"
            )));
        }
        if g.branch() == Branch::Positive && x1 - x0 > 2.0 * std::f64::consts::PI / g.s {
            return Err(GeomError::Domain(
                "box wraps around the spatial circle".into(),
            ));
        }
        Ok(Region {
            gauge: *g,
            shape: RegionShape::Box { t0, t1, x0, x1 },
            corner_tau: None,
        })
    }

    pub fn contains(&self, p: &ModelPoint) -> bool {
        let g = &self.gauge;
        match self.shape {
            RegionShape::Diamond { lo, hi } => {
                let a = relation(g, &lo, p)
                    .map(|c| c.is_causal_future())
                    .unwrap_or(false);
                a && relation(g, p, &hi)
                    .map(|c| c.is_causal_future())
                    .unwrap_or(false)
            }
            RegionShape::Box { t0, t1, x0, x1 } => {
                let (t, x) = p.coords(g);
                (t0..=t1).contains(&t) && (x0..=x1).contains(&x)
            }
        }
    }

    /// Chart box `[t0, t1, x0, x1]` enclosing the region.
    pub fn chart_bounds(&self) -> Result<[f64; 4]> {
        let g = &self.gauge;
        let (lo, hi) = match self.shape {
            RegionShape::Box { t0, t1, x0, x1 } => return Ok([t0, t1, x0, x1]),
            RegionShape::Diamond { lo, hi } => (lo.coords(g), hi.coords(g)),
        };
        let dt = hi.0 - lo.0;
        let (x0, x1) = match g.branch() {
            Branch::Flat | Branch::Positive => {
                let mid = 0.5 * (lo.1 + hi.1);
                let half = if g.branch() == Branch::Positive {
                    (0.5 * dt).min(std::f64::consts::PI / g.s)
                } else {
                    0.5 * dt
                };
                (mid - half, mid + half)
            }
            Branch::Negative => {
                let s = g.s;
                let mid = 0.5 * (gd(s * lo.1) + gd(s * hi.1));
                let (u, l) = (mid + 0.5 * s * dt, mid - 0.5 * s * dt);
                if u >= std::f64::consts::FRAC_PI_2 || l <= -std::f64::consts::FRAC_PI_2 {
                    return Err(GeomError::Domain(
                        "diamond is not bounded in the chart".into(),
                    ));
                }
                (u_inv(l, s), u_inv(u, s))
            }
        };
        Ok([lo.0, hi.0, x0, x1])
    }

    /// Supremum of the chart volume element over [`Region::chart_bounds`].
    pub(crate) fn max_weight(&self, b: &[f64; 4]) -> f64 {
        let g = &self.gauge;
        match g.branch() {
            Branch::Flat => 1.0,
            Branch::Positive => g.volume_element(b[0].abs().max(b[1].abs()), 0.0),
            Branch::Negative => g.volume_element(0.0, b[2].abs().max(b[3].abs())),
        }
    }

    fn is_degenerate(&self) -> bool {
        match self.shape {
            RegionShape::Diamond { .. } => self.corner_tau == Some(0.0),
            RegionShape::Box { t0, t1, x0, x1 } => t0 == t1 || x0 == x1,
        }
    }
}

fn u_inv(u: f64, s: f64) -> f64 {
    u.tan().asinh() / s
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.gauge;
        match self.shape {
            RegionShape::Diamond { lo, hi } => {
                let (a, b) = (lo.coords(g), hi.coords(g));
                write!(
                    f,
                    "diamond {:.16e} {:.16e} {:.16e} {:.16e}",
                    a.0, a.1, b.0, b.1
                )
            }
            RegionShape::Box { t0, t1, x0, x1 } => {
                write!(f, "box {t0:.16e} {t1:.16e} {x0:.16e} {x1:.16e}")
            }
        }
    }
}

impl Region {
    /// Parses the [`Display`](fmt::Display) form: `diamond t x t x` or `box t0 t1 x0 x1`.
    pub fn parse(g: &CurvatureGauge, s: &str) -> Result<Self> {
        let mut it = s.split_whitespace();
        let kind = it.next().unwrap_or("");
        let v: Vec<f64> = it
            .map(|w| {
                w.parse::<f64>()
                    .map_err(|_| GeomError::Input(format!("bad number {w:?} in region")))
            })
            .collect::<Result<_>>()?;
        if v.len() != 4 {
            return Err(GeomError::Input(format!(
                "region needs four numbers, got {}",
                v.len()
            )));
        }
        match kind {
            "diamond" => Region::diamond_coords(g, (v[0], v[1]), (v[2], v[3])),
            "box" => Region::coord_box(g, v[0], v[1], v[2], v[3]),
            _ => Err(GeomError::Input(format!("unknown region kind {kind:?}"))),
        }
    }
}

/// Volume of a region and its standard error.
///
/// Flat diamonds and all boxes are exact; curved diamonds use `mc_samples`
/// uniform chart points of the enclosing box weighted by the volume element.
pub fn region_volume(r: &Region, mc_samples: usize, seed: u64) -> Result<(f64, f64)> {
    let g = &r.gauge;
    if r.is_degenerate() {
        return Ok((0.0, 0.0));
    }
    match (r.shape, g.branch()) {
        (RegionShape::Diamond { .. }, Branch::Flat) => {
            let t = r.corner_tau.unwrap_or(0.0);
            return Ok((0.5 * t * t, 0.0));
        }
        (RegionShape::Box { t0, t1, x0, x1 }, b) => {
            let s = g.s;
            let v = match b {
                Branch::Flat => (t1 - t0) * (x1 - x0),
                Branch::Positive => (x1 - x0) * ((s * t1).sinh() - (s * t0).sinh()) / s,
                Branch::Negative => (t1 - t0) * ((s * x1).sinh() - (s * x0).sinh()) / s,
            };
            return Ok((v, 0.0));
        }
        _ => {}
    }
    if mc_samples < 2 {
        return Err(GeomError::Input(
            "Monte Carlo volume needs at least two samples".into(),
        ));
    }
    let b = r.chart_bounds()?;
    let area = (b[1] - b[0]) * (b[3] - b[2]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..mc_samples {
        let t = rng.random_range(b[0]..=b[1]);
        let x = rng.random_range(b[2]..=b[3]);
        let p = ModelPoint::from_coords(g, t, x);
        let w = if r.contains(&p) {
            g.volume_element(t, x)
        } else {
            0.0
        };
        sum += w;
        sum2 += w * w;
    }
    let n = mc_samples as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok((area * mean, area * (var / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::curvature_gauge;

    #[test]
    fn flat_diamond_volume() {
        let g = curvature_gauge(0.0);
        let r = Region::diamond_coords(&g, (0.0, 0.0), (2.0, 0.0)).unwrap();
        assert_eq!(region_volume(&r, 0, 0).unwrap(), (2.0, 0.0));
        let r = Region::diamond_coords(&g, (1.0, 1.0), (1.0, 1.0)).unwrap();
        assert_eq!(region_volume(&r, 0, 0).unwrap(), (0.0, 0.0));
        let r = Region::diamond_coords(&g, (0.0, 0.0), (1.0, 1.0)).unwrap();
        assert_eq!(region_volume(&r, 0, 0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn monte_carlo_matches_flat_limit_and_itself() {
        let g = curvature_gauge(-1.0);
        let r = Region::diamond_coords(&g, (0.0, 0.0), (1.0, 0.0)).unwrap();
        let (a, ea) = region_volume(&r, 100_000, 1).unwrap();
        let (b, eb) = region_volume(&r, 100_000, 2).unwrap();
        assert!(ea > 0.0 && (a - b).abs() < 3.0 * (ea * ea + eb * eb).sqrt());
        let g = curvature_gauge(1e-6);
        let r = Region::diamond_coords(&g, (0.0, 0.0), (2.0, 0.0)).unwrap();
        let (v, e) = region_volume(&r, 100_000, 3).unwrap();
        assert!((v - 2.0).abs() < 4.0 * e, "{v} ± {e}");
    }

    #[test]
    fn box_volume_is_exact() {
        let g = curvature_gauge(1.0);
        let r = Region::coord_box(&g, 0.0, 1.0, 0.0, 0.5).unwrap();
        let (v, e) = region_volume(&r, 0, 0).unwrap();
        assert!((v - 0.5 * 1f64.sinh()).abs() < 1e-15 && e == 0.0);
    }

    #[test]
    fn bounds_enclose_the_diamond() {
        for k in [-1.0, 0.0, 1.0] {
            let g = curvature_gauge(k);
            let r = Region::diamond_coords(&g, (0.0, 0.3), (1.5, -0.2)).unwrap();
            let b = r.chart_bounds().unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            for _ in 0..2000 {
                let t = rng.random_range(-1.0..2.5);
                let x = rng.random_range(-2.0..2.0);
                if r.contains(&ModelPoint::from_coords(&g, t, x)) {
                    assert!(
                        t >= b[0] - 1e-12
                            && t <= b[1] + 1e-12
                            && x >= b[2] - 1e-12
                            && x <= b[3] + 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn region_text_round_trip() {
        let g = curvature_gauge(-1.0);
        let r = Region::diamond_coords(&g, (0.0, 0.0), (1.0, 0.25)).unwrap();
        let back = Region::parse(&g, &r.to_string()).unwrap();
        assert_eq!(back.to_string(), r.to_string());
        assert!(Region::parse(&g, "circle 1 2 3 4").is_err());
    }
}
