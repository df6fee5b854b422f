use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::region::Region;
use crate::error::{GeomError, Result};
use crate::model::{
    curvature_gauge, relation, tau_ext, CausalClass, CurvatureGauge, Extended, ModelPoint,
};

/// RNG sub-streams of one seed.
pub(crate) const STREAM_COUNT: u64 = 1;
pub(crate) const STREAM_POINTS: u64 = 2;

/// Seeded generator on a sub-stream, so each use of a seed draws independent numbers.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub region: Region,
    pub density: f64,
    pub seed: u64,
}

/// Finite set of model-space points with the induced order and time separation.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalSet {
    pub gauge: CurvatureGauge,
    pub points: Vec<ModelPoint>,
    causal: Vec<CausalClass>,
    tau: Vec<f64>,
    pub provenance: Option<Provenance>,
}

impl CausalSet {
    /// Builds the matrices from the ambient relation and time separation.
    pub fn from_points(
        g: &CurvatureGauge,
        points: Vec<ModelPoint>,
        provenance: Option<Provenance>,
    ) -> Result<Self> {
        let n = points.len();
        let mut causal = vec![CausalClass::Unrelated; n * n];
        let mut tau = vec![0.0; n * n];
        for i in 0..n {
            points[i].validate(g)?;
            for j in 0..n {
                if i == j {
                    continue;
                }
                causal[i * n + j] = relation(g, &points[i], &points[j])?;
                tau[i * n + j] = match tau_ext(g, &points[i], &points[j])? {
                    Extended::Finite(v) => v,
                    Extended::Infinite => f64::INFINITY,
                };
            }
        }
        Ok(CausalSet {
            gauge: *g,
            points,
            causal,
            tau,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn relation(&self, i: usize, j: usize) -> CausalClass {
        self.causal[i * self.len() + j]
    }

    pub fn tau(&self, i: usize, j: usize) -> f64 {
        self.tau[i * self.len() + j]
    }

    /// `i < j` in the induced strict order.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        i != j && self.relation(i, j).is_causal_future()
    }

    pub fn chronological(&self, i: usize, j: usize) -> bool {
        i != j && self.relation(i, j) == CausalClass::ChronoFuture
    }

    /// Serialises the set; matrices are not written and are recomputed on reading.
    pub fn to_text(&self) -> String {
        let g = &self.gauge;
        let mut out = String::new();
        let _ = writeln!(out, "K = {:.16e}", g.k);
        if let Some(p) = &self.provenance {
            let _ = writeln!(out, "region = {}", p.region);
            let _ = writeln!(out, "density = {:.16e}", p.density);
            let _ = writeln!(out, "seed = {}", p.seed);
        }
        let _ = writeln!(out, "count = {}", self.len());
        let _ = writeln!(out, "points:");
        for p in &self.points {
            let (t, x) = p.coords(g);
            let _ = writeln!(out, "{t:.16e} {x:.16e}");
        }
        out
    }

    /// Reads [`CausalSet::to_text`] output; lines starting with `#` are skipped.
    pub fn from_text(s: &str) -> Result<Self> {
        let mut k = None;
        let (mut region, mut density, mut seed, mut count) = (None, None, None, None);
        let mut pts = Vec::new();
        let mut in_points = false;
        for (no, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| GeomError::Input(format!("line {}: {what}", no + 1));
            if in_points {
                let v: Vec<f64> = line
                    .split_whitespace()
                    .map(|w| w.parse::<f64>().map_err(|_| bad("bad coordinate")))
                    .collect::<Result<_>>()?;
                if v.len() != 2 {
                    return Err(bad("expected two coordinates"));
                }
                pts.push((v[0], v[1]));
                continue;
            }
            if line == "points:" {
                in_points = true;
                continue;
            }
            let (key, val) = line
                .split_once('=')
                .ok_or_else(|| bad("expected key = value"))?;
            let val = val.trim();
            match key.trim() {
                "K" => k = Some(val.parse::<f64>().map_err(|_| bad("bad K"))?),
                "region" => region = Some(val.to_string()),
                "density" => density = Some(val.parse::<f64>().map_err(|_| bad("bad density"))?),
                "seed" => seed = Some(val.parse::<u64>().map_err(|_| bad("bad seed"))?),
                "count" => count = Some(val.parse::<usize>().map_err(|_| bad("bad count"))?),
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        let k = k.ok_or_else(|| GeomError::Input("missing K".into()))?;
        let g = curvature_gauge(k);
        if let Some(c) = count {
            if c != pts.len() {
                return Err(GeomError::Input(format!(
                    "count {c} but {} points",
                    pts.len()
                )));
            }
        }
        let provenance = match (region, density, seed) {
            (Some(r), Some(d), Some(s)) => Some(Provenance {
                region: Region::parse(&g, &r)?,
                density: d,
                seed: s,
            }),
            (None, None, None) => None,
            _ => {
                return Err(GeomError::Input(
                    "region, density and seed must appear together".into(),
                ))
            }
        };
        let points = pts
            .into_iter()
            .map(|(t, x)| ModelPoint::from_coords(&g, t, x))
            .collect();
        CausalSet::from_points(&g, points, provenance)
    }
}

/// Poisson sprinkling of density `rho` into a region.
///
/// A Poisson process of intensity `rho · w_max` on the enclosing chart box is
/// thinned with acceptance `w(t,x) / w_max` inside the region. Points are sorted
/// by chart time.
pub fn sprinkle(r: &Region, rho: f64, seed: u64) -> Result<CausalSet> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(GeomError::Input(format!(
            "density must be positive, got {rho}"
        )));
    }
    let g = &r.gauge;
    let b = r.chart_bounds()?;
    let area = (b[1] - b[0]) * (b[3] - b[2]);
    let wmax = r.max_weight(&b);
    let lambda = rho * area * wmax;
    if lambda == 0.0 || r.corner_tau == Some(0.0) {
        return Err(GeomError::Domain("region has zero volume".into()));
    }
    if !lambda.is_finite() {
        return Err(GeomError::Domain("region has infinite volume".into()));
    }
    let dist = Poisson::new(lambda)
        .map_err(|e| GeomError::Domain(format!("Poisson intensity {lambda}: {e}")))?;
    let n = dist.sample(&mut substream(seed, STREAM_COUNT)) as u64;
    let mut rng = substream(seed, STREAM_POINTS);
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for _ in 0..n {
        let t = rng.random_range(b[0]..=b[1]);
        let x = rng.random_range(b[2]..=b[3]);
        let u: f64 = rng.random();
        if u * wmax < g.volume_element(t, x) && r.contains(&ModelPoint::from_coords(g, t, x)) {
            pts.push((t, x));
        }
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let points = pts
        .into_iter()
        .map(|(t, x)| ModelPoint::from_coords(g, t, x))
        .collect();
    CausalSet::from_points(
        g,
        points,
        Some(Provenance {
            region: *r,
            density: rho,
            seed,
        }),
    )
}

/// Number of links of the longest chain from `i` to `j`; zero unless `i ≤ j`.
pub fn longest_chain(cs: &CausalSet, i: usize, j: usize) -> usize {
    if i == j || !cs.precedes(i, j) {
        return 0;
    }
    let g = &cs.gauge;
    let mut mid: Vec<usize> = (0..cs.len())
        .filter(|&k| k == i || k == j || (cs.precedes(i, k) && cs.precedes(k, j)))
        .collect();
    mid.sort_by(|&a, &b| {
        cs.points[a]
            .coords(g)
            .0
            .total_cmp(&cs.points[b].coords(g).0)
    });
    let mut best: Vec<Option<usize>> = vec![None; mid.len()];
    for (a, &u) in mid.iter().enumerate() {
        if u == i {
            best[a] = Some(0);
        }
        let Some(d) = best[a] else { continue };
        for (b, &v) in mid.iter().enumerate().skip(a + 1) {
            if cs.precedes(u, v) && best[b].is_none_or(|e| e < d + 1) {
                best[b] = Some(d + 1);
            }
        }
    }
    mid.iter()
        .position(|&k| k == j)
        .and_then(|p| best[p])
        .unwrap_or(0)
}
