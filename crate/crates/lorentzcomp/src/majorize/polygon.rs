use super::alexandrov::{concavity_at_x3, straighten_alexandrov, straighten_reversed, Concavity};
use super::piecewise::{Action, Piece, PiecewiseMap};
use super::region::Shape;
use crate::error::{GeomError, Result};
use crate::model::{
    angle_at, geodesic_point, isometry_from_segments, relation, side_value, tau, time_reversal,
    CausalClass, CurvatureGauge, ModelPoint,
};

/// Bend below which a chain vertex counts as straight, and turn tolerance of the convexity test.
pub const STRAIGHT_TOL: f64 = 1e-9;

/// Two future-directed polygonal chains from `O` to `z`.
#[derive(Debug, Clone)]
pub struct TimelikeLoop {
    pub gauge: CurvatureGauge,
    pub alpha: Vec<ModelPoint>,
    pub beta: Vec<ModelPoint>,
    pub alpha_len: Vec<f64>,
    pub beta_len: Vec<f64>,
}

fn segment_lengths(g: &CurvatureGauge, chain: &[ModelPoint], name: &str) -> Result<Vec<f64>> {
    chain
        .windows(2)
        .enumerate()
        .map(|(i, w)| match relation(g, &w[0], &w[1])? {
            CausalClass::ChronoFuture => tau(g, &w[0], &w[1]),
            c => Err(GeomError::Precondition(format!(
                "{name} segment {i} is {c}, not timelike future"
            ))),
        })
        .collect()
}

impl TimelikeLoop {
    pub fn new(g: &CurvatureGauge, alpha: Vec<ModelPoint>, beta: Vec<ModelPoint>) -> Result<Self> {
        if alpha.len() < 2 || beta.len() < 2 {
            return Err(GeomError::Precondition(
                "each chain needs at least two points".into(),
            ));
        }
        let same = |a: &ModelPoint, b: &ModelPoint| {
            a.chart_distance(b) <= 1e-12 * a.c.iter().fold(1.0f64, |m, v| m.max(v.abs()))
        };
        if !same(&alpha[0], &beta[0]) || !same(&alpha[alpha.len() - 1], &beta[beta.len() - 1]) {
            return Err(GeomError::Precondition(
                "chains must share both endpoints".into(),
            ));
        }
        for p in alpha.iter().chain(&beta) {
            p.validate(g)?;
        }
        let alpha_len = segment_lengths(g, &alpha, "alpha")?;
        let beta_len = segment_lengths(g, &beta, "beta")?;
        let b = tau(g, &alpha[0], &alpha[alpha.len() - 1])?;
        if !g.below_diameter(b) {
            return Err(GeomError::Precondition(format!(
                "τ(O,z) = {b} not below D_K"
            )));
        }
        Ok(TimelikeLoop {
            gauge: *g,
            alpha,
            beta,
            alpha_len,
            beta_len,
        })
    }

    pub fn origin(&self) -> ModelPoint {
        self.alpha[0]
    }

    pub fn end(&self) -> ModelPoint {
        self.alpha[self.alpha.len() - 1]
    }

    /// Number of interior vertices where a chain bends.
    pub fn breakpoints(&self) -> usize {
        let g = &self.gauge;
        bends(g, &self.alpha)
            .iter()
            .chain(&bends(g, &self.beta))
            .filter(|b| **b)
            .count()
    }

    /// Membership in the union of the triangles `Δ(O, c_k, c_{k+1})` over both chains.
    pub fn contains(&self, p: &ModelPoint, tol: f64) -> bool {
        let g = &self.gauge;
        let o = self.origin();
        self.alpha
            .windows(2)
            .chain(self.beta.windows(2))
            .any(|w| Shape::Triangle([o, w[0], w[1]]).contains(g, p, tol))
    }
}

/// `L(C)`: total separation along both chains.
pub fn loop_length(l: &TimelikeLoop) -> f64 {
    l.alpha_len.iter().chain(&l.beta_len).sum()
}

fn is_straight(g: &CurvatureGauge, prev: &ModelPoint, v: &ModelPoint, next: &ModelPoint) -> bool {
    match angle_at(g, v, prev, next) {
        Ok(a) => a.omega <= STRAIGHT_TOL,
        Err(_) => side_value(g, prev, next, v).abs() <= STRAIGHT_TOL,
    }
}

fn bends(g: &CurvatureGauge, chain: &[ModelPoint]) -> Vec<bool> {
    let mut out = vec![false; chain.len()];
    for i in 1..chain.len().saturating_sub(1) {
        out[i] = !is_straight(g, &chain[i - 1], &chain[i], &chain[i + 1]);
    }
    out
}

fn convex_chains(g: &CurvatureGauge, alpha: &[ModelPoint], beta: &[ModelPoint]) -> bool {
    let (o, z) = (alpha[0], alpha[alpha.len() - 1]);
    let mut cyc: Vec<ModelPoint> = alpha.to_vec();
    cyc.extend(beta[1..beta.len() - 1].iter().rev());
    let n = cyc.len();
    let mut sign = 0.0;
    for i in 0..n {
        let (p, v, q) = (&cyc[(i + n - 1) % n], &cyc[i], &cyc[(i + 1) % n]);
        let t = side_value(g, p, v, q);
        if t.abs() <= STRAIGHT_TOL {
            continue;
        }
        if sign == 0.0 {
            sign = t.signum();
        } else if t.signum() != sign {
            return false;
        }
    }
    cyc.iter().all(|v| {
        let a = relation(g, &o, v)
            .map(|c| c.is_causal_future())
            .unwrap_or(false);
        let b = relation(g, v, &z)
            .map(|c| c.is_causal_future())
            .unwrap_or(false);
        a && b
    })
}

/// Whether the loop bounds a convex region of `J(O, z)`.
pub fn convexity_check(l: &TimelikeLoop) -> bool {
    convex_chains(&l.gauge, &l.alpha, &l.beta)
}

/// Result of [`majorize_polygon`].
#[derive(Debug, Clone)]
pub struct PolygonMajorant {
    /// Convex loop with the same vertex count and segment lengths as the input.
    pub convex: TimelikeLoop,
    /// Long map from the region of `convex` onto the region of the input.
    pub map: PiecewiseMap,
    /// Deepest recursion level reached.
    pub depth: usize,
    /// Bending vertices of the input.
    pub breakpoints: usize,
    /// Steps in which the roles of the chains were exchanged.
    pub mirrored: usize,
}

#[derive(Debug, Clone)]
struct Work {
    alpha: Vec<ModelPoint>,
    beta: Vec<ModelPoint>,
    alen: Vec<f64>,
    blen: Vec<f64>,
    afan: Vec<bool>,
    bfan: Vec<bool>,
}

impl Work {
    fn swap(mut self) -> Self {
        std::mem::swap(&mut self.alpha, &mut self.beta);
        std::mem::swap(&mut self.alen, &mut self.blen);
        std::mem::swap(&mut self.afan, &mut self.bfan);
        self
    }

    fn count(&self) -> (usize, usize) {
        (
            self.afan.iter().filter(|f| **f).count(),
            self.bfan.iter().filter(|f| **f).count(),
        )
    }
}

struct Stats {
    depth: usize,
    limit: usize,
    mirrored: usize,
}

fn cumulative(lens: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0];
    for l in lens {
        out.push(out[out.len() - 1] + l);
    }
    out
}

/// Re-places chain points `0..=last` along the two-segment path `a → corner → b`,
/// keeping the separations measured along the chain, with the corner at index `at`.
fn bend_chain(
    g: &CurvatureGauge,
    chain: &mut [ModelPoint],
    lens: &[f64],
    at: usize,
    last: usize,
    corner: ModelPoint,
) -> Result<()> {
    let cum = cumulative(lens);
    let (a, b) = (chain[0], chain[last]);
    let (first, second) = (cum[at], cum[last] - cum[at]);
    for k in 1..last {
        chain[k] = if k < at {
            geodesic_point(g, &a, &corner, (cum[k] / first).clamp(0.0, 1.0))?
        } else if k == at {
            corner
        } else {
            geodesic_point(
                g,
                &corner,
                &b,
                ((cum[k] - cum[at]) / second).clamp(0.0, 1.0),
            )?
        };
    }
    Ok(())
}

fn flagged(fan: &[bool], from: usize) -> Option<usize> {
    (from..fan.len()).find(|&i| fan[i])
}

fn rec(g: &CurvatureGauge, w: Work, depth: usize, st: &mut Stats) -> Result<(Work, PiecewiseMap)> {
    if depth > st.limit {
        return Err(GeomError::Internal(format!(
            "majorisation recursion depth {depth} exceeds the breakpoint count {}",
            st.limit
        )));
    }
    st.depth = st.depth.max(depth);
    let (na, nb) = w.count();
    if na + nb <= 1 || convex_chains(g, &w.alpha, &w.beta) {
        return Ok((w, PiecewiseMap::identity(g)));
    }
    if na + nb == 2 {
        if na == 1 {
            return Ok(reflect_case(g, w)?);
        }
        if nb == 2 {
            st.mirrored += 1;
            let (out, map) = two_on_one_chain(g, w.swap())?;
            return Ok((out.swap(), map));
        }
        return two_on_one_chain(g, w);
    }
    if na == 0 {
        st.mirrored += 1;
        let (out, map) = reattach(g, w.swap(), depth, st)?;
        return Ok((out.swap(), map));
    }
    reattach(g, w, depth, st)
}

/// Two bending vertices on `alpha`, none on `beta`.
fn two_on_one_chain(g: &CurvatureGauge, mut w: Work) -> Result<(Work, PiecewiseMap)> {
    let i1 = flagged(&w.afan, 1).ok_or_else(|| GeomError::Internal("missing breakpoint".into()))?;
    let i2 =
        flagged(&w.afan, i1 + 1).ok_or_else(|| GeomError::Internal("missing breakpoint".into()))?;
    let last = w.alpha.len() - 1;
    let x = [w.alpha[0], w.alpha[i1], w.alpha[i2], w.alpha[last]];
    let (forward, _) = concavity_at_x3(g, &x)?;
    if forward == Concavity::Concave {
        let s = straighten_alexandrov(g, &x, false)?;
        bend_chain(g, &mut w.alpha, &w.alen, i1, last, s.triangle.y)?;
        w.afan[i2] = false;
        return Ok((w, s.map));
    }
    let r = |p: &ModelPoint| time_reversal(g, p);
    let y = [r(&x[3]), r(&x[2]), r(&x[1]), r(&x[0])];
    let (backward, _) = concavity_at_x3(g, &y)?;
    if backward == Concavity::Concave {
        let (corner, _, map) = straighten_reversed(g, &x)?;
        bend_chain(g, &mut w.alpha, &w.alen, i2, last, corner)?;
        w.afan[i1] = false;
        return Ok((w, map));
    }
    Ok((w, PiecewiseMap::identity(g)))
}

/// One bending vertex on each chain: reflect `beta` through `[O, z]` when both lie on the same side.
fn reflect_case(g: &CurvatureGauge, mut w: Work) -> Result<(Work, PiecewiseMap)> {
    let ia = flagged(&w.afan, 1).ok_or_else(|| GeomError::Internal("missing breakpoint".into()))?;
    let ib = flagged(&w.bfan, 1).ok_or_else(|| GeomError::Internal("missing breakpoint".into()))?;
    let (o, z) = (w.alpha[0], w.alpha[w.alpha.len() - 1]);
    let sa = side_value(g, &o, &z, &w.alpha[ia]);
    let sb = side_value(g, &o, &z, &w.beta[ib]);
    if sa * sb <= 0.0 {
        return Ok((w, PiecewiseMap::identity(g)));
    }
    let iso = isometry_from_segments(g, (&o, &z), (&o, &z), true)?;
    let last = w.beta.len() - 1;
    for p in &mut w.beta[1..last] {
        *p = iso.apply(g, p);
    }
    let piece = Piece {
        label: "reflected".into(),
        shape: Shape::Triangle([o, w.beta[ib], z]),
        action: Action::Isometry(iso.inverse()?),
    };
    Ok((
        w,
        PiecewiseMap::pieces(g, vec![piece], Some(Action::Identity)),
    ))
}

/// Removes the triangle at the lowest breakpoint of `alpha`, majorises the rest,
/// re-attaches the triangle outside and straightens the joint if it is concave.
fn reattach(
    g: &CurvatureGauge,
    w: Work,
    depth: usize,
    st: &mut Stats,
) -> Result<(Work, PiecewiseMap)> {
    let last = w.alpha.len() - 1;
    let i1 = flagged(&w.afan, 1).ok_or_else(|| GeomError::Internal("missing breakpoint".into()))?;
    let i2 = flagged(&w.afan, i1 + 1).unwrap_or(last);
    let o = w.alpha[0];

    let mut sub = Work {
        alpha: std::iter::once(o)
            .chain(w.alpha[i2..].iter().copied())
            .collect(),
        beta: w.beta.clone(),
        alen: std::iter::once(tau(g, &o, &w.alpha[i2])?)
            .chain(w.alen[i2..].iter().copied())
            .collect(),
        blen: w.blen.clone(),
        afan: std::iter::once(false)
            .chain(w.afan[i2..].iter().copied())
            .collect(),
        bfan: w.bfan.clone(),
    };
    if sub.alpha.len() > 2 && is_straight(g, &sub.alpha[0], &sub.alpha[1], &sub.alpha[2]) {
        sub.afan[1] = false;
    }
    let (cb, f1) = rec(g, sub, depth + 1, st)?;

    let xb = cb.alpha[0];
    let a2 = cb.alpha[1];
    let inside = cb
        .alpha
        .iter()
        .chain(&cb.beta)
        .map(|p| side_value(g, &xb, &a2, p))
        .find(|v| v.abs() > STRAIGHT_TOL)
        .map(f64::signum);
    let want = match inside {
        Some(s) => -s,
        None => side_value(g, &o, &w.alpha[i2], &w.alpha[i1]).signum(),
    };
    let mut chosen = None;
    for flip in [false, true] {
        let iso = isometry_from_segments(g, (&o, &w.alpha[i2]), (&xb, &a2), flip)?;
        let v = side_value(g, &xb, &a2, &iso.apply(g, &w.alpha[i1]));
        if v * want >= 0.0 {
            chosen = Some(iso);
            break;
        }
    }
    let iso1 = chosen
        .ok_or_else(|| GeomError::Internal("cannot attach the removed triangle outside".into()))?;

    let mut alpha: Vec<ModelPoint> = vec![xb];
    alpha.extend(w.alpha[1..i2].iter().map(|p| iso1.apply(g, p)));
    alpha.extend(cb.alpha[1..].iter().copied());
    let mut alen = w.alen[..i2].to_vec();
    alen.extend(cb.alen[1..].iter().copied());
    let mut afan = w.afan[..i2].to_vec();
    afan.extend(cb.afan[1..].iter().copied());
    if i2 < last {
        afan[i2] = cb.afan[1] || !is_straight(g, &alpha[i2 - 1], &alpha[i2], &alpha[i2 + 1]);
    }
    let a1 = alpha[i1];
    let fallback = if f1.is_identity() {
        Action::Identity
    } else {
        Action::Nested(Box::new(f1))
    };
    let g1 = PiecewiseMap::pieces(
        g,
        vec![Piece {
            label: "attached".into(),
            shape: Shape::Triangle([xb, a1, a2]),
            action: Action::Isometry(iso1.inverse()?),
        }],
        Some(fallback),
    );
    let mut d = Work {
        alpha,
        beta: cb.beta,
        alen,
        blen: cb.blen,
        afan,
        bfan: cb.bfan,
    };
    if i2 == last {
        return Ok((d, g1));
    }
    let i3 = flagged(&d.afan, i2 + 1).unwrap_or(last);
    let a3 = d.alpha[i3];
    let quad = [xb, a1, a2, a3];
    if concavity_at_x3(g, &quad)?.0 != Concavity::Concave {
        return Ok((d, g1));
    }
    let s = straighten_alexandrov(g, &quad, false)?;
    let corner = s.triangle.y;
    let mut head = d.alpha[..=i3].to_vec();
    bend_chain(g, &mut head, &d.alen[..i3], i1, i3, corner)?;
    d.alpha[..=i3].copy_from_slice(&head);
    d.afan[i2] = false;
    let g2 = PiecewiseMap::pieces(
        g,
        vec![Piece {
            label: "straightened".into(),
            shape: Shape::Triangle([xb, corner, a3]),
            action: Action::Nested(Box::new(s.map)),
        }],
        Some(Action::Identity),
    );
    let (ct, f3) = rec(g, d, depth + 1, st)?;
    Ok((ct, f3.then(g2).then(g1)))
}

/// Convex loop with the same segment lengths and a long map onto the input region.
pub fn majorize_polygon(g: &CurvatureGauge, l: &TimelikeLoop) -> Result<PolygonMajorant> {
    let w = Work {
        alpha: l.alpha.clone(),
        beta: l.beta.clone(),
        alen: l.alpha_len.clone(),
        blen: l.beta_len.clone(),
        afan: bends(g, &l.alpha),
        bfan: bends(g, &l.beta),
    };
    let (na, nb) = w.count();
    let mut st = Stats {
        depth: 0,
        limit: na + nb,
        mirrored: 0,
    };
    let (out, map) = rec(g, w, 0, &mut st)?;
    if !convex_chains(g, &out.alpha, &out.beta) {
        return Err(GeomError::Internal(
            "majorisation produced a non-convex loop".into(),
        ));
    }
    let convex = TimelikeLoop::new(g, out.alpha, out.beta)?;
    Ok(PolygonMajorant {
        convex,
        map,
        depth: st.depth,
        breakpoints: na + nb,
        mirrored: st.mirrored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{curvature_gauge, tau};

    fn flat(pts: &[(f64, f64)]) -> Vec<ModelPoint> {
        pts.iter().map(|&(t, x)| ModelPoint::flat(t, x)).collect()
    }

    #[test]
    fn triangle_is_convex_and_fixed() {
        let g = curvature_gauge(0.0);
        let l = TimelikeLoop::new(
            &g,
            flat(&[(0.0, 0.0), (1.0, 0.5), (3.0, 0.0)]),
            flat(&[(0.0, 0.0), (3.0, 0.0)]),
        )
        .unwrap();
        assert!(convexity_check(&l));
        let m = majorize_polygon(&g, &l).unwrap();
        assert!(m.map.is_identity());
        assert_eq!(m.convex.alpha, l.alpha);
        assert_eq!(m.depth, 0);
    }

    #[test]
    fn degenerate_loop_length() {
        let g = curvature_gauge(0.0);
        let c = flat(&[(0.0, 0.0), (1.0, 0.1), (2.0, 0.2)]);
        let l = TimelikeLoop::new(&g, c.clone(), c).unwrap();
        let b = tau(&g, &l.origin(), &l.end()).unwrap();
        assert!((loop_length(&l) - 2.0 * b).abs() < 1e-12);
        assert!(convexity_check(&l));
    }

    #[test]
    fn concave_quadrilateral_is_not_convex() {
        let g = curvature_gauge(0.0);
        let l = TimelikeLoop::new(
            &g,
            flat(&[(0.0, 0.0), (1.0, 0.6), (2.0, 0.3), (4.0, 0.0)]),
            flat(&[(0.0, 0.0), (4.0, 0.0)]),
        )
        .unwrap();
        assert!(!convexity_check(&l));
        let m = majorize_polygon(&g, &l).unwrap();
        assert!(convexity_check(&m.convex));
        assert!((loop_length(&m.convex) - loop_length(&l)).abs() < 1e-12);
        for (a, b) in m.convex.alpha_len.iter().zip(&l.alpha_len) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn same_side_breakpoints_reflect_beta() {
        let g = curvature_gauge(0.0);
        let l = TimelikeLoop::new(
            &g,
            flat(&[(0.0, 0.0), (1.5, 0.8), (4.0, 0.0)]),
            flat(&[(0.0, 0.0), (2.0, 0.3), (4.0, 0.0)]),
        )
        .unwrap();
        assert!(!convexity_check(&l));
        let m = majorize_polygon(&g, &l).unwrap();
        assert_eq!(m.convex.alpha, l.alpha);
        let (t, x) = m.convex.beta[1].coords(&g);
        assert!((t - 2.0).abs() < 1e-12 && (x + 0.3).abs() < 1e-12);
        assert!((loop_length(&m.convex) - loop_length(&l)).abs() < 1e-12);
        let p = ModelPoint::flat(2.0, -0.1);
        let q = m.map.eval(&p).unwrap();
        assert!(q.chart_distance(&ModelPoint::flat(2.0, 0.1)) < 1e-12);
    }

    #[test]
    fn rejects_non_timelike_segments() {
        let g = curvature_gauge(0.0);
        let r = TimelikeLoop::new(
            &g,
            flat(&[(0.0, 0.0), (1.0, 1.0), (3.0, 0.0)]),
            flat(&[(0.0, 0.0), (3.0, 0.0)]),
        );
        assert!(matches!(r, Err(GeomError::Precondition(_))));
        let r = TimelikeLoop::new(
            &g,
            flat(&[(0.0, 0.0), (3.0, 0.0)]),
            flat(&[(0.0, 0.0), (2.0, 0.0)]),
        );
        assert!(matches!(r, Err(GeomError::Precondition(_))));
    }

    #[test]
    fn three_breakpoints_on_one_chain() {
        let g = curvature_gauge(0.0);
        let l = TimelikeLoop::new(
            &g,
            flat(&[(0.0, 0.0), (1.0, 0.6), (2.0, 0.3), (3.0, 0.5), (5.0, 0.0)]),
            flat(&[(0.0, 0.0), (5.0, 0.0)]),
        )
        .unwrap();
        assert!(!convexity_check(&l));
        let m = majorize_polygon(&g, &l).unwrap();
        assert!(convexity_check(&m.convex));
        assert!(m.depth <= m.breakpoints);
        for (a, b) in m.convex.alpha_len.iter().zip(&l.alpha_len) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
