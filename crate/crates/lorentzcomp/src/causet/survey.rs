use std::fmt::Write as _;

use rand::seq::index::sample;

use super::set::{substream, CausalSet};
use crate::compare::{
    check_fourpoint_upper, CausalFlags, CheckOptions, Condition, FourPointGauge, PAIRS,
};
use crate::model::{curvature_gauge, Extended};

pub const SURVEY_HEADER: &str = "K,samples,pass_ii,pass_iii,pass_both,min_margin,mean_margin";

/// Attempts allowed per requested quadruple.
pub const RESAMPLE_CAP: usize = 100;

const STREAM_OPPOSITE: u64 = 16;
const STREAM_SAMESIDE: u64 = 17;

/// Index quadruples of one causal shape.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadrupleSample {
    pub shape: Condition,
    pub quadruples: Vec<[usize; 4]>,
    pub attempts: usize,
    /// Requested minus found.
    pub shortfall: usize,
}

/// Draws random 4-subsets, labels them by chart time and keeps those of the given shape:
/// `x2, x3 ∈ I(x1, x4)` for the opposite-side condition, `x1 ≪ x2 ≪ x3 ≪ x4` for the same-side one.
pub fn sample_quadruples(
    cs: &CausalSet,
    shape: Condition,
    samples: usize,
    seed: u64,
) -> QuadrupleSample {
    let stream = match shape {
        Condition::Opposite => STREAM_OPPOSITE,
        Condition::SameSide => STREAM_SAMESIDE,
    };
    let mut rng = substream(seed, stream);
    let mut out = Vec::new();
    let mut attempts = 0;
    let g = &cs.gauge;
    if cs.len() >= 4 {
        while out.len() < samples && attempts < RESAMPLE_CAP * samples {
            attempts += 1;
            let mut q: Vec<usize> = sample(&mut rng, cs.len(), 4).into_vec();
            q.sort_by(|&a, &b| {
                cs.points[a]
                    .coords(g)
                    .0
                    .total_cmp(&cs.points[b].coords(g).0)
                    .then(a.cmp(&b))
            });
            let q = [q[0], q[1], q[2], q[3]];
            let c = |i: usize, j: usize| cs.chronological(q[i], q[j]);
            let ok = match shape {
                Condition::Opposite => c(0, 1) && c(0, 2) && c(1, 3) && c(2, 3),
                Condition::SameSide => c(0, 1) && c(1, 2) && c(2, 3),
            };
            if ok {
                out.push(q);
            }
        }
    }
    QuadrupleSample {
        shape,
        shortfall: samples - out.len(),
        quadruples: out,
        attempts,
    }
}

/// Six-separation gauge of an index quadruple, with flags from the causal matrix.
pub fn quadruple_gauge(cs: &CausalSet, q: &[usize; 4]) -> FourPointGauge {
    let mut t = [0.0; 6];
    let mut null = [false; 6];
    for (k, (i, j)) in PAIRS.iter().enumerate() {
        t[k] = cs.tau(q[i - 1], q[j - 1]);
        null[k] = cs.relation(q[i - 1], q[j - 1]).is_null();
    }
    let mut out = FourPointGauge::new(t);
    out.flags = Some(CausalFlags {
        null,
        rel23: cs.relation(q[1], q[2]),
    });
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurveyRow {
    pub k: f64,
    /// Smaller of the two pool sizes.
    pub samples: usize,
    pub pass_ii: usize,
    pub pass_iii: usize,
    /// Chain quadruples passing both conditions.
    pub pass_both: usize,
    /// Over all finite margins of both pools; `NaN` when there are none.
    pub min_margin: f64,
    pub mean_margin: f64,
    /// Checks that raised an error; they count as failures.
    pub errors: usize,
    /// Per-quadruple verdicts, in pool order.
    pub verdicts_ii: Vec<bool>,
    pub verdicts_iii: Vec<bool>,
}

impl SurveyRow {
    pub fn degenerate(&self) -> bool {
        self.samples == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurveyTable {
    pub rows: Vec<SurveyRow>,
    pub seed: u64,
    pub requested: usize,
    pub opposite: QuadrupleSample,
    pub sameside: QuadrupleSample,
}

impl SurveyTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{SURVEY_HEADER}");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:.16e},{},{},{},{},{:.16e},{:.16e}",
                r.k, r.samples, r.pass_ii, r.pass_iii, r.pass_both, r.min_margin, r.mean_margin
            );
        }
        out
    }
}

/// Verdict and finite margin of one condition; errors are failures without margin.
fn verdict(res: crate::error::Result<crate::compare::Verdict>) -> (bool, Option<f64>, bool) {
    match res {
        Ok(v) => {
            let m = match v.margin {
                Extended::Finite(m) => Some(m),
                Extended::Infinite => None,
            };
            (v.pass, m, false)
        }
        Err(_) => (false, None, true),
    }
}

/// Runs both four-point conditions on the same quadruple pools for every `K`.
pub fn survey_fourpoint(
    cs: &CausalSet,
    k_list: &[f64],
    samples: usize,
    seed: u64,
    tol: f64,
) -> SurveyTable {
    let opposite = sample_quadruples(cs, Condition::Opposite, samples, seed);
    let sameside = sample_quadruples(cs, Condition::SameSide, samples, seed);
    let opts = CheckOptions { strict: false, tol };
    let mut rows = Vec::new();
    for &k in k_list {
        let g = curvature_gauge(k);
        let mut margins = Vec::new();
        let mut errors = 0;
        let mut verdicts_ii = Vec::new();
        for q in &opposite.quadruples {
            let (ii, _) = check_fourpoint_upper(&g, &quadruple_gauge(cs, q), opts);
            let (pass, m, err) = verdict(ii);
            margins.extend(m);
            errors += err as usize;
            verdicts_ii.push(pass);
        }
        let mut verdicts_iii = Vec::new();
        let mut pass_both = 0;
        for q in &sameside.quadruples {
            let (ii, iii) = check_fourpoint_upper(&g, &quadruple_gauge(cs, q), opts);
            let (p2, _, _) = verdict(ii);
            let (p3, m, err) = verdict(iii);
            margins.extend(m);
            errors += err as usize;
            verdicts_iii.push(p3);
            pass_both += (p2 && p3) as usize;
        }
        let (min_margin, mean_margin) = if margins.is_empty() {
            (f64::NAN, f64::NAN)
        } else {
            (
                margins.iter().copied().fold(f64::INFINITY, f64::min),
                margins.iter().sum::<f64>() / margins.len() as f64,
            )
        };
        rows.push(SurveyRow {
            k,
            samples: opposite.quadruples.len().min(sameside.quadruples.len()),
            pass_ii: verdicts_ii.iter().filter(|p| **p).count(),
            pass_iii: verdicts_iii.iter().filter(|p| **p).count(),
            pass_both,
            min_margin,
            mean_margin,
            errors,
            verdicts_ii,
            verdicts_iii,
        });
    }
    SurveyTable {
        rows,
        seed,
        requested: samples,
        opposite,
        sameside,
    }
}
