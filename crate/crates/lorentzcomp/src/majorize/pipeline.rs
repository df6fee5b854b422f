use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::epsilon::{epsilon_bound, ErrorBudget};
use super::fan::{build_fan, psi_eval, skeleton_project, Fan, ModelOracle};
use super::piecewise::{Action, PiecewiseMap};
use super::polygon::{
    convexity_check, majorize_polygon, PolygonMajorant, TimelikeLoop, STRAIGHT_TOL,
};
use crate::error::{GeomError, Result};
use crate::model::{
    isometry_from_segments, relation, side_value, tau, triangle_point, CurvatureGauge, ModelPoint,
};

/// Sampling options for the pairwise certificate check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    pub pairs: usize,
    pub seed: u64,
    /// Pairs closer than this are skipped.
    pub min_separation: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            pairs: 1000,
            seed: 42,
            min_separation: 0.0,
        }
    }
}

/// Which chain's half of the convex region a point lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Half {
    Alpha,
    Beta,
}

/// One sampled pair `x ≤ y` of the convex region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairReport {
    pub x: ModelPoint,
    pub y: ModelPoint,
    pub tau_xy: f64,
    pub tau_image: f64,
    /// `None` when the pair is not chronological after the first stage, so no slack is needed.
    pub budget: Option<ErrorBudget>,
    pub cross: bool,
    pub holds: bool,
}

impl PairReport {
    /// `τ(x,y) - τ(f(x),f(y))`.
    pub fn defect(&self) -> f64 {
        self.tau_xy - self.tau_image
    }

    pub fn epsilon(&self) -> f64 {
        self.budget.map(|b| b.epsilon).unwrap_or(0.0)
    }
}

/// Finite-stage majorant of a loop given by two sampled chains.
#[derive(Debug, Clone)]
pub struct Majorant {
    pub gauge: CurvatureGauge,
    /// The convex loop; `alpha` opens to the `+` side of `[Õ, z̃]`, `beta` to the `-` side.
    pub convex: TimelikeLoop,
    pub alpha_fan: Fan,
    pub beta_fan: Fan,
    pub alpha_map: PiecewiseMap,
    pub beta_map: PiecewiseMap,
    pub alpha_oracle: ModelOracle,
    pub beta_oracle: ModelOracle,
    pub b: f64,
    pub pairs: Vec<PairReport>,
    /// Recursion depth and breakpoint count of the two polygon majorisations.
    pub depth: [usize; 2],
    pub breakpoints: [usize; 2],
}

/// Intermediate images of a point under the three stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trace {
    pub half: Half,
    pub in_fan: ModelPoint,
    pub triangle: usize,
    pub on_skeleton: ModelPoint,
    pub image: ModelPoint,
}

impl Majorant {
    pub fn trace(&self, x: &ModelPoint) -> Result<Trace> {
        let g = &self.gauge;
        let half = if side_value(g, &self.convex.origin(), &self.convex.end(), x) >= 0.0 {
            Half::Alpha
        } else {
            Half::Beta
        };
        let (map, fan, oracle) = match half {
            Half::Alpha => (&self.alpha_map, &self.alpha_fan, &self.alpha_oracle),
            Half::Beta => (&self.beta_map, &self.beta_fan, &self.beta_oracle),
        };
        let in_fan = map.eval(x)?;
        let triangle = fan
            .locate(&in_fan)
            .ok_or_else(|| GeomError::Domain(format!("point {:?} left the fan", in_fan.c)))?;
        let on_skeleton = skeleton_project(fan, &in_fan)?;
        let image = oracle.resolve(&psi_eval(fan, &on_skeleton)?)?;
        Ok(Trace {
            half,
            in_fan,
            triangle,
            on_skeleton,
            image,
        })
    }

    /// `f_n(x) = ψ(S(φ(x)))`.
    pub fn eval(&self, x: &ModelPoint) -> Result<ModelPoint> {
        Ok(self.trace(x)?.image)
    }

    /// Largest apex angle over both fans.
    pub fn max_apex_angle(&self) -> f64 {
        self.alpha_fan
            .max_spoke_angle(1, 1)
            .max(self.beta_fan.max_spoke_angle(1, 1))
    }

    /// Certificate of the whole level: the bound at `c = B` for the largest apex angle.
    pub fn level_epsilon(&self) -> Result<f64> {
        Ok(epsilon_bound(&self.gauge, self.b, self.b, self.max_apex_angle())?.epsilon)
    }

    pub fn max_certificate(&self) -> f64 {
        self.pairs.iter().map(|p| p.epsilon()).fold(0.0, f64::max)
    }

    pub fn max_defect(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| p.defect())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn all_hold(&self) -> bool {
        self.pairs.iter().all(|p| p.holds)
    }

    /// Certificate and check for a single pair `x ≤ y`.
    pub fn check_pair(&self, x: &ModelPoint, y: &ModelPoint) -> Result<PairReport> {
        let g = &self.gauge;
        let (tx, ty) = (self.trace(x)?, self.trace(y)?);
        let tau_xy = tau(g, x, y)?;
        let tau_image = if relation(g, &tx.image, &ty.image)?.is_causal_future() {
            tau(g, &tx.image, &ty.image)?
        } else {
            0.0
        };
        let cross = tx.half != ty.half;
        let c = if cross {
            0.0
        } else if relation(g, &tx.in_fan, &ty.in_fan)?.is_causal_future() {
            tau(g, &tx.in_fan, &ty.in_fan)?
        } else {
            0.0
        };
        let fan = |h: Half| match h {
            Half::Alpha => &self.alpha_fan,
            Half::Beta => &self.beta_fan,
        };
        let (a, c) = if cross {
            let a = fan(tx.half).max_spoke_angle(tx.triangle, tx.triangle)
                + fan(ty.half).max_spoke_angle(ty.triangle, ty.triangle);
            (a, tau_xy)
        } else {
            (fan(tx.half).max_spoke_angle(tx.triangle, ty.triangle), c)
        };
        let budget = if c > 0.0 {
            Some(epsilon_bound(g, self.b, c, a)?)
        } else {
            None
        };
        let eps = budget.map(|b| b.epsilon).unwrap_or(0.0);
        Ok(PairReport {
            x: *x,
            y: *y,
            tau_xy,
            tau_image,
            budget,
            cross,
            holds: tau_xy <= tau_image + eps + 1e-9,
        })
    }

    /// Random point of the convex region.
    pub fn sample_point(&self, rng: &mut impl Rng) -> ModelPoint {
        let g = &self.gauge;
        let o = self.convex.origin();
        let chain = if rng.random_bool(0.5) {
            &self.convex.alpha
        } else {
            &self.convex.beta
        };
        let k = rng.random_range(0..chain.len() - 1);
        let w = [
            rng.random::<f64>(),
            rng.random::<f64>(),
            rng.random::<f64>(),
        ];
        triangle_point(g, &[o, chain[k], chain[k + 1]], w)
    }
}

/// Points `curve(i / 2ⁿ)` for `i = 0..=2ⁿ`.
pub fn dyadic_samples(curve: impl Fn(f64) -> ModelPoint, n: u32) -> Vec<ModelPoint> {
    let m = 1usize << n;
    (0..=m).map(|i| curve(i as f64 / m as f64)).collect()
}

fn reflect_into(
    g: &CurvatureGauge,
    pm: PolygonMajorant,
    side: f64,
) -> Result<(TimelikeLoop, PiecewiseMap)> {
    let l = &pm.convex;
    let (o, z) = (l.origin(), l.end());
    let current = l
        .alpha
        .iter()
        .map(|p| side_value(g, &o, &z, p))
        .find(|v| v.abs() > STRAIGHT_TOL)
        .map(f64::signum)
        .unwrap_or(side);
    if current == side {
        return Ok((pm.convex, pm.map));
    }
    let iso = isometry_from_segments(g, (&o, &z), (&o, &z), true)?;
    let alpha = l.alpha.iter().map(|p| iso.apply(g, p)).collect();
    let beta = l.beta.iter().map(|p| iso.apply(g, p)).collect();
    let flipped = TimelikeLoop::new(g, alpha, beta)?;
    let refl = PiecewiseMap::pieces(g, Vec::new(), Some(Action::Isometry(iso.inverse()?)));
    Ok((flipped, refl.then(pm.map)))
}

/// Runs the finite-stage majorisation of the loop formed by two sampled chains.
///
/// Each chain is laid out as a fan on its own side of `[Õ, z̃]`, the fan loops are
/// majorised, and `f_n = ψ ∘ S ∘ φ` is checked on random pairs of the convex region
/// against per-pair certificates.
pub fn majorant_of_curve(
    g: &CurvatureGauge,
    alpha: &ModelOracle,
    beta: &ModelOracle,
    opts: &PipelineOptions,
) -> Result<Majorant> {
    let (pa, pb) = (&alpha.points, &beta.points);
    if pa.len() < 2 || pb.len() < 2 {
        return Err(GeomError::Precondition(
            "each chain needs at least two points".into(),
        ));
    }
    let tol = 1e-12;
    if pa[0].chart_distance(&pb[0]) > tol
        || pa[pa.len() - 1].chart_distance(&pb[pb.len() - 1]) > tol
    {
        return Err(GeomError::Precondition(
            "chains must share both endpoints".into(),
        ));
    }
    let b = tau(g, &pa[0], &pa[pa.len() - 1])?;
    if !g.below_diameter(b) {
        return Err(GeomError::Precondition(format!(
            "τ(O,z) = {b} not below D_K"
        )));
    }
    let alpha_fan = build_fan(g, alpha, 1)?;
    let beta_fan = build_fan(g, beta, -1)?;
    let (o, z) = (alpha_fan.apex, alpha_fan.points[alpha_fan.m()]);
    let la = TimelikeLoop::new(g, alpha_fan.points.clone(), vec![o, z])?;
    let lb = TimelikeLoop::new(g, beta_fan.points.clone(), vec![o, z])?;
    let (ma, mb) = (majorize_polygon(g, &la)?, majorize_polygon(g, &lb)?);
    let depth = [ma.depth, mb.depth];
    let breakpoints = [ma.breakpoints, mb.breakpoints];
    let (ca, alpha_map) = reflect_into(g, ma, 1.0)?;
    let (cb, beta_map) = reflect_into(g, mb, -1.0)?;
    let convex = TimelikeLoop::new(g, ca.alpha, cb.alpha)?;
    if !convexity_check(&convex) {
        return Err(GeomError::Internal(
            "combined majorant is not convex".into(),
        ));
    }
    let mut out = Majorant {
        gauge: *g,
        convex,
        alpha_fan,
        beta_fan,
        alpha_map,
        beta_map,
        alpha_oracle: alpha.clone(),
        beta_oracle: beta.clone(),
        b,
        pairs: Vec::new(),
        depth,
        breakpoints,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut attempts = 0usize;
    while out.pairs.len() < opts.pairs && attempts < 100 * opts.pairs.max(1) {
        attempts += 1;
        let (x, y) = (out.sample_point(&mut rng), out.sample_point(&mut rng));
        let (x, y) = match relation(g, &x, &y)? {
            c if c.is_chronological() && c.is_causal_future() => (x, y),
            c if c.is_chronological() => (y, x),
            _ => continue,
        };
        if tau(g, &x, &y)? < opts.min_separation {
            continue;
        }
        let r = out.check_pair(&x, &y)?;
        out.pairs.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::curvature_gauge;

    fn fixture(n: u32) -> Majorant {
        let g = curvature_gauge(0.0);
        let curve = |t: f64| ModelPoint::flat(2.0 * t, 0.3 * (std::f64::consts::PI * t).sin());
        let alpha = ModelOracle::new(g, dyadic_samples(curve, n));
        let beta = ModelOracle::new(
            g,
            vec![ModelPoint::flat(0.0, 0.0), ModelPoint::flat(2.0, 0.0)],
        );
        let opts = PipelineOptions {
            pairs: 200,
            ..Default::default()
        };
        majorant_of_curve(&g, &alpha, &beta, &opts).unwrap()
    }

    #[test]
    fn sine_fixture_certificates_hold() {
        let m = fixture(3);
        assert_eq!(m.convex.alpha.len(), 9);
        assert_eq!(m.convex.beta.len(), 2);
        assert!(m.all_hold(), "max defect {}", m.max_defect());
        assert_eq!(m.pairs.len(), 200);
    }

    #[test]
    fn level_certificate_shrinks() {
        let (a, b) = (fixture(3), fixture(4));
        assert!(b.level_epsilon().unwrap() < a.level_epsilon().unwrap());
    }

    #[test]
    fn geodesic_alpha_is_label_lookup() {
        let g = curvature_gauge(0.0);
        let line = |t: f64| ModelPoint::flat(2.0 * t, 0.0);
        let alpha = ModelOracle::new(g, dyadic_samples(line, 2));
        let beta = ModelOracle::new(g, vec![line(0.0), line(1.0)]);
        let m = majorant_of_curve(
            &g,
            &alpha,
            &beta,
            &PipelineOptions {
                pairs: 0,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(m.alpha_map.is_identity());
        let p = ModelPoint::flat(0.7, 0.0);
        assert!(m.eval(&p).unwrap().chart_distance(&p) < 1e-12);
        assert_eq!(m.max_apex_angle(), 0.0);
    }

    #[test]
    fn boundary_is_preserved() {
        let m = fixture(3);
        for (k, p) in m.convex.alpha.iter().enumerate() {
            let q = m.eval(p).unwrap();
            assert!(
                q.chart_distance(&m.alpha_oracle.points[k]) < 1e-9,
                "vertex {k}"
            );
        }
    }
}
