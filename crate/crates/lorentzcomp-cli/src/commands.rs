use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use lorentzcomp::causet::{
    region_volume, sprinkle as sprinkle_region, survey_fourpoint, CausalSet, Region,
};
use lorentzcomp::compare::{
    check_fourpoint_upper, CausalFlags, CheckOptions, FourPointGauge, Verdict,
};
use lorentzcomp::gen::sampled_longness;
use lorentzcomp::majorize::{
    majorant_of_curve, majorize_polygon, straighten_alexandrov, ModelOracle, PipelineOptions,
    Shape, TimelikeLoop,
};
use lorentzcomp::model::{
    curvature_gauge, direction, exp, geodesic_point, loc_angle, loc_side, triangle_point,
    CurvatureGauge, Extended, ModelPoint, SignedAngle,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{f17, RunConfig};
use crate::doc::{write_points, write_values, Doc};
use crate::svg::Svg;

pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

fn read_input(cfg: &RunConfig) -> Result<String> {
    let p = cfg
        .input
        .as_ref()
        .ok_or_else(|| anyhow!("--in is required"))?;
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn single_k(cfg: &RunConfig) -> Result<Option<f64>> {
    match cfg.k.as_slice() {
        [] => Ok(None),
        [k] => Ok(Some(*k)),
        _ => bail!("{} takes a single --k", cfg.command),
    }
}

fn cell(v: &lorentzcomp::Result<Verdict>) -> (bool, String, String) {
    match v {
        Ok(v) => {
            let m = match v.margin {
                Extended::Finite(m) => f17(m),
                Extended::Infinite => "inf".into(),
            };
            (v.pass, v.pass.to_string(), m)
        }
        Err(e) => (
            false,
            "false".into(),
            format!("error: {}", e.to_string().replace(',', ";")),
        ),
    }
}

/// Parses `tau12,tau13,tau14,tau23,tau24,tau34[,flags]`.
fn parse_gauge(line: &str) -> std::result::Result<FourPointGauge, String> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() != 6 && fields.len() != 7 {
        return Err(format!("expected 6 or 7 fields, got {}", fields.len()));
    }
    let mut t = [0.0; 6];
    for (i, f) in fields[..6].iter().enumerate() {
        t[i] = f.parse::<f64>().map_err(|_| format!("bad number {f:?}"))?;
        if !t[i].is_finite() || t[i] < 0.0 {
            return Err(format!("separation {f} must be finite and non-negative"));
        }
    }
    let mut q = FourPointGauge::new(t);
    if let Some(flags) = fields.get(6).filter(|f| !f.is_empty()) {
        q.flags = Some(CausalFlags::parse(flags).map_err(|e| e.to_string())?);
    }
    Ok(q)
}

pub fn check_fourpoint(cfg: &RunConfig) -> Result<Outcome> {
    let g = curvature_gauge(single_k(cfg)?.unwrap_or(0.0));
    let text = read_input(cfg)?;
    let mut out = cfg.header("#");
    out.push_str("line,pass_ii,margin_ii,pass_iii,margin_iii\n");
    let mut all = true;
    let mut seen_data = false;
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_data && line.starts_with("tau12") {
            seen_data = true;
            continue;
        }
        seen_data = true;
        let q = parse_gauge(line).map_err(|e| anyhow!("line {}: {e}", no + 1))?;
        let opts = CheckOptions {
            strict: q.flags.is_some(),
            tol: cfg.tol,
        };
        let (ii, iii) = check_fourpoint_upper(&g, &q, opts);
        let (p2, s2, m2) = cell(&ii);
        let (p3, s3, m3) = if q.t23 == 0.0 && q.flags.is_none_or(|f| !f.rel23.is_causal_future()) {
            (true, "n/a".to_string(), String::new())
        } else {
            cell(&iii)
        };
        all &= p2 && p3;
        out.push_str(&format!("{},{s2},{m2},{s3},{m3}\n", no + 1));
    }
    emit(cfg.output.as_deref(), &out)?;
    Ok(Outcome::from(all))
}

/// Points at parameters `i / 2ⁿ` of the polyline, each segment taking an equal share.
fn resample(g: &CurvatureGauge, pts: &[ModelPoint], n: u32) -> Result<Vec<ModelPoint>> {
    if pts.len() <= 2 {
        return Ok(pts.to_vec());
    }
    let segs = (pts.len() - 1) as f64;
    let m = 1usize << n;
    (0..=m)
        .map(|i| {
            let s = i as f64 / m as f64 * segs;
            let j = (s.floor() as usize).min(pts.len() - 2);
            geodesic_point(g, &pts[j], &pts[j + 1], (s - j as f64).clamp(0.0, 1.0))
        })
        .collect::<lorentzcomp::Result<Vec<_>>>()
        .map_err(|e| anyhow!("resampling: {e}"))
}

fn triangles(l: &TimelikeLoop) -> Vec<[ModelPoint; 3]> {
    let o = l.origin();
    l.alpha
        .windows(2)
        .chain(l.beta.windows(2))
        .map(|w| [o, w[0], w[1]])
        .collect()
}

pub fn majorize(cfg: &RunConfig) -> Result<Outcome> {
    let doc = Doc::parse(&read_input(cfg)?)?;
    let g = doc.gauge(single_k(cfg)?)?;
    let alpha = doc
        .points(&g, "alpha")?
        .ok_or_else(|| anyhow!("loop file needs an alpha section"))?;
    let beta = doc
        .points(&g, "beta")?
        .ok_or_else(|| anyhow!("loop file needs a beta section"))?;
    let mut out = cfg.header("#");
    out.push_str(&format!("K = {}\n", f17(g.k)));
    let mut svg = Svg::new(&g);
    svg.polyline("input", &alpha);
    svg.polyline("input", &beta);
    let ok = match cfg.level {
        None => {
            let input = TimelikeLoop::new(&g, alpha, beta)?;
            let m = majorize_polygon(&g, &input)?;
            write_points(&mut out, &g, "alpha", &m.convex.alpha);
            write_points(&mut out, &g, "beta", &m.convex.beta);
            write_values(&mut out, "alpha_len", &m.convex.alpha_len);
            write_values(&mut out, "beta_len", &m.convex.beta_len);
            out.push_str(&format!(
                "depth = {}\nbreakpoints = {}\n",
                m.depth, m.breakpoints
            ));
            let ok = if m.map.is_identity() {
                out.push_str("pairs = 0\n");
                true
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                let r = sampled_longness(
                    &g,
                    &triangles(&m.convex),
                    |p| m.map.eval(p),
                    cfg.samples,
                    &mut rng,
                )?;
                out.push_str(&format!(
                    "pairs = {}\nmax_defect = {}\norder_violations = {}\n",
                    r.pairs,
                    f17(r.max_defect),
                    r.order_violations
                ));
                r.max_defect <= cfg.tol && r.order_violations == 0
            };
            svg.polyline("result", &m.convex.alpha);
            svg.polyline("result", &m.convex.beta);
            ok
        }
        Some(n) => {
            let a = ModelOracle::new(g, resample(&g, &alpha, n)?);
            let b = ModelOracle::new(g, resample(&g, &beta, n)?);
            let opts = PipelineOptions {
                pairs: cfg.samples,
                seed: cfg.seed,
                min_separation: 0.0,
            };
            let m = majorant_of_curve(&g, &a, &b, &opts)?;
            write_points(&mut out, &g, "alpha", &m.convex.alpha);
            write_points(&mut out, &g, "beta", &m.convex.beta);
            write_values(&mut out, "alpha_len", &m.convex.alpha_len);
            write_values(&mut out, "beta_len", &m.convex.beta_len);
            let failures = m.pairs.iter().filter(|p| !p.holds).count();
            out.push_str(&format!(
                "level = {n}\nmax_apex_angle = {}\nlevel_epsilon = {}\nmax_certificate = {}\nmax_defect = {}\npairs = {}\nfailures = {failures}\n",
                f17(m.max_apex_angle()),
                f17(m.level_epsilon()?),
                f17(m.max_certificate()),
                f17(m.max_defect()),
                m.pairs.len()
            ));
            out.push_str("pair_reports:\n");
            for p in &m.pairs {
                let (xt, xx) = p.x.coords(&g);
                let (yt, yx) = p.y.coords(&g);
                out.push_str(&format!(
                    "{} {} {} {} {} {} {} {}\n",
                    f17(xt),
                    f17(xx),
                    f17(yt),
                    f17(yx),
                    f17(p.tau_xy),
                    f17(p.tau_image),
                    f17(p.epsilon()),
                    p.holds as u8
                ));
            }
            svg.polyline("result", &m.convex.alpha);
            svg.polyline("result", &m.convex.beta);
            failures == 0
        }
    };
    emit(cfg.output.as_deref(), &out)?;
    if let Some(p) = &cfg.svg {
        fs::write(p, svg.finish(&cfg.header("")))
            .with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(Outcome::from(ok))
}

pub fn sprinkle(cfg: &RunConfig, region: &str, rho: f64) -> Result<Outcome> {
    let g = curvature_gauge(single_k(cfg)?.unwrap_or(0.0));
    let r = Region::parse(&g, region)?;
    let cs = sprinkle_region(&r, rho, cfg.seed)?;
    let (vol, err) = region_volume(&r, cfg.samples.max(2), cfg.seed)?;
    let mut out = cfg.header("#");
    out.push_str(&format!("# volume = {} ± {}\n", f17(vol), f17(err)));
    out.push_str(&cs.to_text());
    emit(cfg.output.as_deref(), &out)?;
    Ok(Outcome::Pass)
}

pub fn survey(cfg: &RunConfig) -> Result<Outcome> {
    let cs = CausalSet::from_text(&read_input(cfg)?)?;
    let ks = if cfg.k.is_empty() {
        vec![cs.gauge.k]
    } else {
        cfg.k.clone()
    };
    let t = survey_fourpoint(&cs, &ks, cfg.samples, cfg.seed, cfg.tol);
    let mut out = cfg.header("#");
    out.push_str(&format!("# points = {}\n", cs.len()));
    out.push_str(&format!(
        "# pool_ii = {} shortfall_ii = {} attempts_ii = {}\n",
        t.opposite.quadruples.len(),
        t.opposite.shortfall,
        t.opposite.attempts
    ));
    out.push_str(&format!(
        "# pool_iii = {} shortfall_iii = {} attempts_iii = {}\n",
        t.sameside.quadruples.len(),
        t.sameside.shortfall,
        t.sameside.attempts
    ));
    for r in t.rows.iter().filter(|r| r.degenerate()) {
        out.push_str(&format!("# degenerate row K = {}\n", f17(r.k)));
    }
    for r in t.rows.iter().filter(|r| r.errors > 0) {
        out.push_str(&format!("# K = {} check errors = {}\n", f17(r.k), r.errors));
    }
    out.push_str(&t.to_csv());
    emit(cfg.output.as_deref(), &out)?;
    Ok(Outcome::Pass)
}

fn arc(
    g: &CurvatureGauge,
    center: &ModelPoint,
    a: &ModelPoint,
    b: &ModelPoint,
    radius: f64,
) -> Result<Vec<ModelPoint>> {
    (0..=32)
        .map(|i| {
            let u = i as f64 / 32.0;
            let chord = triangle_point(g, &[*center, *a, *b], [0.0, 1.0 - u, u]);
            let (d, _) = direction(g, center, &chord)?;
            Ok(exp(g, center, &d, radius))
        })
        .collect::<lorentzcomp::Result<Vec<_>>>()
        .map_err(|e| anyhow!("drawing a sector: {e}"))
}

pub fn render(cfg: &RunConfig) -> Result<Outcome> {
    let doc = Doc::parse(&read_input(cfg)?)?;
    let g = doc.gauge(single_k(cfg)?)?;
    let mut svg = Svg::new(&g);
    let label_all = |svg: &mut Svg, pts: &[ModelPoint], names: &[&str]| {
        for (p, n) in pts.iter().zip(names) {
            svg.dot(p);
            svg.label(p, n);
        }
    };
    if let Some(v) = doc.points(&g, "triangle")? {
        if v.len() != 3 {
            bail!("a triangle needs three points");
        }
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            svg.polyline("result", &[v[i], v[j]]);
        }
        label_all(&mut svg, &v, &["x", "y", "z"]);
    } else if let Some(x) = doc.points(&g, "quadrilateral")? {
        let x: [ModelPoint; 4] = x
            .try_into()
            .map_err(|_| anyhow!("a quadrilateral needs four points"))?;
        svg.polyline("input", &x);
        svg.polyline("input", &[x[0], x[3]]);
        label_all(&mut svg, &x, &["x1", "x2", "x3", "x4"]);
        let s = straighten_alexandrov(&g, &x, false)?;
        for r in &s.decomposition.regions {
            match &r.shape {
                Shape::Triangle(v) => svg.polyline("region", &[v[0], v[1], v[2], v[0]]),
                Shape::Sector {
                    center,
                    spokes,
                    radius,
                    ..
                } => svg.polyline("arc", &arc(&g, center, &spokes[0], &spokes[1], *radius)?),
            }
        }
        let t = &s.triangle;
        svg.polyline("result", &[t.x, t.y, t.z, t.x]);
        label_all(
            &mut svg,
            &[t.x, t.y, s.x3_bar, t.z],
            &["x̄1", "x̄2", "x̄3", "x̄4"],
        );
    } else if let (Some(a), Some(b)) = (doc.points(&g, "alpha")?, doc.points(&g, "beta")?) {
        svg.polyline("result", &a);
        svg.polyline("result", &b);
        label_all(&mut svg, &[a[0], a[a.len() - 1]], &["O", "z"]);
    } else if let Some(p) = doc.points(&g, "points")? {
        for q in &p {
            svg.dot(q);
        }
    } else {
        bail!("unsupported object: expected a triangle, quadrilateral, alpha/beta loop or points section");
    }
    let out = svg.finish(&cfg.header(""));
    let path = cfg.svg.as_ref().or(cfg.output.as_ref());
    emit(path.map(|p| p.as_path()), &out)?;
    Ok(Outcome::Pass)
}

pub fn loc_solve(
    cfg: &RunConfig,
    a: f64,
    b: f64,
    c: Option<f64>,
    omega: Option<f64>,
    sigma: i8,
) -> Result<Outcome> {
    let g = curvature_gauge(single_k(cfg)?.unwrap_or(0.0));
    let mut out = cfg.header("#");
    match (c, omega) {
        (Some(c), None) => {
            let w = loc_angle(&g, a, b, c)?;
            out.push_str(&format!("omega = {}\nsigma = {}\n", f17(w.omega), w.sigma));
        }
        (None, Some(w)) => {
            if sigma != 1 && sigma != -1 {
                bail!("--sigma must be 1 or -1");
            }
            let c = loc_side(&g, a, b, SignedAngle::new(w, sigma))?;
            out.push_str(&format!("c = {}\n", f17(c)));
        }
        _ => bail!("give exactly one of --c and --omega"),
    }
    emit(cfg.output.as_deref(), &out)?;
    Ok(Outcome::Pass)
}
