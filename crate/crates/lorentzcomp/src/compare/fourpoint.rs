use std::fmt;

use super::triangle::{realize_triangle, Placement, SideTriple};
use crate::error::{GeomError, Result};
use crate::model::{
    isometry_from_segments, relation, side_of, tau, tau_ext, CausalClass, CurvatureGauge, Extended,
    ModelPoint,
};

/// Default tolerance for verdicts.
pub const VERDICT_TOL: f64 = 1e-7;

/// Pair indices in the order `12, 13, 14, 23, 24, 34`.
pub const PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

/// Causal side information needed by the strict conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CausalFlags {
    /// Pair is null related, in [`PAIRS`] order.
    pub null: [bool; 6],
    /// Relation of `x3` as seen from `x2`.
    pub rel23: CausalClass,
}

impl CausalFlags {
    fn is_null(&self, i: usize, j: usize) -> bool {
        PAIRS
            .iter()
            .position(|&p| p == (i, j))
            .map(|k| self.null[k])
            .unwrap_or(false)
    }

    /// Parses `n12|n34|r23:cf`; every token is optional.
    pub fn parse(s: &str) -> Result<Self> {
        let mut f = CausalFlags {
            null: [false; 6],
            rel23: CausalClass::ChronoFuture,
        };
        let mut have_rel = false;
        for tok in s.split('|').map(str::trim).filter(|t| !t.is_empty()) {
            if let Some(code) = tok.strip_prefix("r23:") {
                f.rel23 = CausalClass::from_code(code)
                    .ok_or_else(|| GeomError::Input(format!("unknown relation code {code:?}")))?;
                have_rel = true;
            } else if let Some(pair) = tok.strip_prefix('n') {
                let k = PAIRS
                    .iter()
                    .position(|(i, j)| format!("{i}{j}") == pair)
                    .ok_or_else(|| GeomError::Input(format!("unknown pair {pair:?}")))?;
                f.null[k] = true;
            } else {
                return Err(GeomError::Input(format!("unknown flag {tok:?}")));
            }
        }
        if !have_rel && f.null[3] {
            f.rel23 = CausalClass::NullFuture;
        }
        Ok(f)
    }
}

impl fmt::Display for CausalFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (i, j)) in PAIRS.iter().enumerate() {
            if self.null[k] {
                write!(f, "n{i}{j}|")?;
            }
        }
        write!(f, "r23:{}", self.rel23)
    }
}

/// The six time separations of a quadruple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourPointGauge {
    pub t12: f64,
    pub t13: f64,
    pub t14: f64,
    pub t23: f64,
    pub t24: f64,
    pub t34: f64,
    pub flags: Option<CausalFlags>,
}

impl FourPointGauge {
    pub fn new(t: [f64; 6]) -> Self {
        FourPointGauge {
            t12: t[0],
            t13: t[1],
            t14: t[2],
            t23: t[3],
            t24: t[4],
            t34: t[5],
            flags: None,
        }
    }

    pub fn values(&self) -> [f64; 6] {
        [self.t12, self.t13, self.t14, self.t23, self.t24, self.t34]
    }

    /// Gauge of four model-space points, with flags from their causal relations.
    pub fn from_points(g: &CurvatureGauge, x: &[ModelPoint; 4]) -> Result<Self> {
        let mut t = [0.0; 6];
        let mut null = [false; 6];
        for (k, (i, j)) in PAIRS.iter().enumerate() {
            t[k] = tau(g, &x[i - 1], &x[j - 1])?;
            null[k] = relation(g, &x[i - 1], &x[j - 1])?.is_null();
        }
        let mut out = FourPointGauge::new(t);
        out.flags = Some(CausalFlags {
            null,
            rel23: relation(g, &x[1], &x[2])?,
        });
        Ok(out)
    }
}

/// Model-space points of a four-point configuration and the compared quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourPointRealization {
    pub points: [ModelPoint; 4],
    /// `τ(x̂2, x̂3)` for the opposite-side configuration, `τ(x̂1, x̂4)` for the same-side one.
    pub tau_hat: Extended,
    pub relation: CausalClass,
}

/// Triangles `Δ(x̂1,x̂2,x̂4)`, `Δ(x̂1,x̂3,x̂4)` on opposite sides of `[x̂1,x̂4]`.
pub fn fourpoint_opposite_realize(
    g: &CurvatureGauge,
    q: &FourPointGauge,
) -> Result<FourPointRealization> {
    if !g.below_diameter(q.t14) {
        return Err(GeomError::NotApplicable(format!(
            "τ14 = {} not below D_K",
            q.t14
        )));
    }
    let lower = realize_triangle(
        g,
        &SideTriple::new(q.t12, q.t24, q.t14),
        Placement::Canonical { side: -1 },
    )?;
    let upper = realize_triangle(
        g,
        &SideTriple::new(q.t13, q.t34, q.t14),
        Placement::Canonical { side: 1 },
    )?;
    let (x2, x3) = (lower.y, upper.y);
    Ok(FourPointRealization {
        points: [lower.x, x2, x3, lower.z],
        tau_hat: Extended::Finite(tau(g, &x2, &x3)?),
        relation: relation(g, &x2, &x3)?,
    })
}

/// Triangles `Δ(x̂1,x̂2,x̂3)`, `Δ(x̂2,x̂3,x̂4)` on the same side of `[x̂2,x̂3]`.
pub fn fourpoint_sameside_realize(
    g: &CurvatureGauge,
    q: &FourPointGauge,
) -> Result<FourPointRealization> {
    if !(q.t23 > 0.0) {
        return Err(GeomError::NonRealizable(
            "shared side τ23 must be timelike".into(),
        ));
    }
    let first = realize_triangle(
        g,
        &SideTriple::new(q.t12, q.t23, q.t13),
        Placement::Canonical { side: 1 },
    )?;
    let second = realize_triangle(
        g,
        &SideTriple::new(q.t23, q.t34, q.t24),
        Placement::Canonical { side: 1 },
    )?;
    let (x1, x2, x3) = (first.x, first.y, first.z);
    let (y2, y3, y4) = (second.x, second.y, second.z);
    let s1 = side_of(g, &x2, &x3, &x1);
    let s4 = side_of(g, &y2, &y3, &y4);
    let flip = s1 != 0 && s4 != 0 && s1 != s4;
    let iso = isometry_from_segments(g, (&y2, &y3), (&x2, &x3), flip)?;
    let x4 = iso.apply(g, &y4);
    Ok(FourPointRealization {
        points: [x1, x2, x3, x4],
        tau_hat: tau_ext(g, &x1, &x4)?,
        relation: relation(g, &x1, &x4)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Opposite-side configuration, inequality on `τ(x2,x3)`.
    Opposite,
    /// Same-side configuration, inequality on `τ(x1,x4)`.
    SameSide,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Opposite => "ii",
            Condition::SameSide => "iii",
        })
    }
}

/// Outcome of one four-point inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    /// Signed slack of the binding inequality; `Infinite` when trivially satisfied.
    pub margin: Extended,
    pub which: Condition,
    /// Result of the causal implication in strict mode.
    pub causal_ok: Option<bool>,
    /// The configuration is one of the irrelevant null cases.
    pub vacuous: bool,
    pub realization: Option<FourPointRealization>,
}

impl Verdict {
    fn vacuous(which: Condition) -> Self {
        Verdict {
            pass: true,
            margin: Extended::Finite(0.0),
            which,
            causal_ok: Some(true),
            vacuous: true,
            realization: None,
        }
    }
}

/// Options for [`check_fourpoint_upper`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub strict: bool,
    pub tol: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            strict: false,
            tol: VERDICT_TOL,
        }
    }
}

fn check_opposite(g: &CurvatureGauge, q: &FourPointGauge, opts: &CheckOptions) -> Result<Verdict> {
    let which = Condition::Opposite;
    if opts.strict {
        let f = q
            .flags
            .ok_or_else(|| GeomError::Input("strict mode needs causal flags".into()))?;
        if f.is_null(2, 4) || f.is_null(1, 3) {
            return Ok(Verdict::vacuous(which));
        }
        if (f.is_null(1, 2) && f.is_null(2, 4)) || (f.is_null(1, 3) && f.is_null(3, 4)) {
            return Err(GeomError::Unsupported(
                "triangle with two null sides".into(),
            ));
        }
        if f.is_null(1, 4) {
            return Err(GeomError::Precondition(
                "x1 and x4 must be chronologically related".into(),
            ));
        }
    }
    let r = fourpoint_opposite_realize(g, q)?;
    let hat = r.tau_hat.finite().unwrap_or(f64::INFINITY);
    let margin = q.t23 - hat;
    let mut pass = margin >= -opts.tol;
    let mut causal_ok = None;
    if let Some(f) = q.flags.filter(|_| opts.strict) {
        let ok = !r.relation.is_causal_future() || f.rel23.is_causal_future();
        causal_ok = Some(ok);
        pass &= ok;
    }
    Ok(Verdict {
        pass,
        margin: Extended::Finite(margin),
        which,
        causal_ok,
        vacuous: false,
        realization: Some(r),
    })
}

fn check_sameside(g: &CurvatureGauge, q: &FourPointGauge, opts: &CheckOptions) -> Result<Verdict> {
    let which = Condition::SameSide;
    if opts.strict {
        let f = q
            .flags
            .ok_or_else(|| GeomError::Input("strict mode needs causal flags".into()))?;
        let others = [(1, 3), (1, 4), (2, 3), (2, 4)];
        if others.iter().any(|&(i, j)| f.is_null(i, j)) {
            return Err(GeomError::Unsupported(
                "same-side condition allows only x1 ≤ x2 and x3 ≤ x4 null".into(),
            ));
        }
    }
    let r = fourpoint_sameside_realize(g, q)?;
    let margin = r.tau_hat.sub(q.t14);
    let pass = match margin {
        Extended::Infinite => true,
        Extended::Finite(m) => m >= -opts.tol,
    };
    Ok(Verdict {
        pass,
        margin,
        which,
        causal_ok: None,
        vacuous: false,
        realization: Some(r),
    })
}

/// Evaluates the opposite-side and same-side upper-bound inequalities.
pub fn check_fourpoint_upper(
    g: &CurvatureGauge,
    q: &FourPointGauge,
    opts: CheckOptions,
) -> (Result<Verdict>, Result<Verdict>) {
    (check_opposite(g, q, &opts), check_sameside(g, q, &opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::curvature_gauge;

    fn flat_points(p: [(f64, f64); 4]) -> [ModelPoint; 4] {
        p.map(|(t, x)| ModelPoint::flat(t, x))
    }

    #[test]
    fn symmetric_diamond() {
        let g = curvature_gauge(0.0);
        let s = 0.75f64.sqrt();
        let q = FourPointGauge::new([s, s, 2.0, 0.0, s, s]);
        let r = fourpoint_opposite_realize(&g, &q).unwrap();
        let (t2, x2) = r.points[1].coords(&g);
        let (t3, x3) = r.points[2].coords(&g);
        assert!((t2 - 1.0).abs() < 1e-12 && (x2 + 0.5).abs() < 1e-12);
        assert!((t3 - 1.0).abs() < 1e-12 && (x3 - 0.5).abs() < 1e-12);
        assert_eq!(r.tau_hat, Extended::Finite(0.0));
        let (ii, _) = check_fourpoint_upper(&g, &q, CheckOptions::default());
        let ii = ii.unwrap();
        assert!(ii.pass);
        assert_eq!(ii.margin, Extended::Finite(0.0));
    }

    #[test]
    fn collapsed_opposite_triangle() {
        let g = curvature_gauge(0.0);
        let q = FourPointGauge::new([2.0, 1.0, 2.0, 0.0, 0.0, 1.0]);
        let r = fourpoint_opposite_realize(&g, &q).unwrap();
        assert!(r.points[1].chart_distance(&r.points[3]) < 1e-12);
    }

    #[test]
    fn sameside_examples() {
        let g = curvature_gauge(0.0);
        let q = FourPointGauge::new([1.0, 2.0, 3.0, 1.0, 2.0, 1.0]);
        let r = fourpoint_sameside_realize(&g, &q).unwrap();
        assert!((r.tau_hat.finite().unwrap() - 3.0).abs() < 1e-9);
        let pts = flat_points([(0.0, 0.0), (1.0, 0.5), (2.0, 0.5), (3.0, 0.0)]);
        let q = FourPointGauge::from_points(&g, &pts).unwrap();
        let r = fourpoint_sameside_realize(&g, &q).unwrap();
        assert!((r.tau_hat.finite().unwrap() - 3.0).abs() < 1e-12);
        let g = curvature_gauge(-1.0);
        let q = FourPointGauge::new([1.0, 2.2, 3.2, 1.2, 2.2, 1.0]);
        assert!(q.t13 + q.t24 - q.t23 >= std::f64::consts::PI);
        let r = fourpoint_sameside_realize(&g, &q).unwrap();
        assert_eq!(r.tau_hat, Extended::Infinite);
        let (_, iii) = check_fourpoint_upper(&g, &q, CheckOptions::default());
        let iii = iii.unwrap();
        assert!(iii.pass && iii.margin.is_infinite());
    }

    #[test]
    fn collinear_quadruple_margins_vanish() {
        let g = curvature_gauge(0.0);
        let pts = flat_points([(0.0, 0.0), (0.5, 0.1), (1.5, 0.3), (2.0, 0.4)]);
        let q = FourPointGauge::from_points(&g, &pts).unwrap();
        let (ii, iii) = check_fourpoint_upper(&g, &q, CheckOptions::default());
        let (ii, iii) = (ii.unwrap(), iii.unwrap());
        assert!(ii.pass && iii.pass);
        assert!(ii.margin.finite().unwrap().abs() < 1e-9);
        assert!(iii.margin.finite().unwrap().abs() < 1e-9);
    }

    #[test]
    fn strict_mode_requires_flags() {
        let g = curvature_gauge(0.0);
        let q = FourPointGauge::new([1.0, 2.0, 3.0, 1.0, 2.0, 1.0]);
        let (ii, iii) = check_fourpoint_upper(
            &g,
            &q,
            CheckOptions {
                strict: true,
                tol: VERDICT_TOL,
            },
        );
        assert!(matches!(ii, Err(GeomError::Input(_))));
        assert!(matches!(iii, Err(GeomError::Input(_))));
    }

    #[test]
    fn strict_vacuous_and_null_cases() {
        let g = curvature_gauge(0.0);
        let mut q = FourPointGauge::new([1.0, 1.2, 3.0, 0.0, 0.0, 1.0]);
        q.flags = Some(CausalFlags::parse("n24").unwrap());
        let opts = CheckOptions {
            strict: true,
            tol: VERDICT_TOL,
        };
        let ii = check_fourpoint_upper(&g, &q, opts).0.unwrap();
        assert!(ii.pass && ii.vacuous);
        let pts = flat_points([(0.0, 0.0), (1.0, 1.0), (2.0, 0.2), (3.0, 0.0)]);
        let q = FourPointGauge::from_points(&g, &pts).unwrap();
        assert!(q.flags.unwrap().null[0]);
        let (ii, iii) = check_fourpoint_upper(&g, &q, opts);
        let ii = ii.unwrap();
        assert!(ii.pass && ii.causal_ok == Some(true));
        assert!(iii.unwrap().pass);
    }

    #[test]
    fn flags_roundtrip_text() {
        let f = CausalFlags::parse("n12|n34|r23:un").unwrap();
        assert_eq!(f.to_string(), "n12|n34|r23:un");
        assert!(CausalFlags::parse("n15").is_err());
        assert!(CausalFlags::parse("r23:zz").is_err());
    }
}
