use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

/// A real number or the distinguished value `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    /// True when `self < x` for a finite `x`.
    pub fn lt(self, x: f64) -> bool {
        match self {
            Extended::Finite(v) => v < x,
            Extended::Infinite => false,
        }
    }

    pub fn sub(self, x: f64) -> Extended {
        match self {
            Extended::Finite(v) => Extended::Finite(v - x),
            Extended::Infinite => Extended::Infinite,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.partial_cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Some(Ordering::Less),
            (Extended::Infinite, Extended::Finite(_)) => Some(Ordering::Greater),
            (Extended::Infinite, Extended::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

/// Which formula branch a curvature value selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Flat,
    Positive,
    Negative,
}

/// Curvature `K`, its scale `s = √|K|` and the timelike diameter `D_K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureGauge {
    pub k: f64,
    pub s: f64,
    pub d_k: Extended,
}

pub fn curvature_gauge(k: f64) -> CurvatureGauge {
    CurvatureGauge::new(k)
}

impl CurvatureGauge {
    pub fn new(k: f64) -> Self {
        assert!(k.is_finite(), "curvature must be finite");
        let s = k.abs().sqrt();
        let d_k = if k < 0.0 {
            Extended::Finite(PI / s)
        } else {
            Extended::Infinite
        };
        CurvatureGauge { k, s, d_k }
    }

    pub fn branch(&self) -> Branch {
        if self.k == 0.0 {
            Branch::Flat
        } else if self.k > 0.0 {
            Branch::Positive
        } else {
            Branch::Negative
        }
    }

    /// Quadric constant `⟨p,p⟩ = 1/K` of the embedding chart (unused when flat).
    pub fn quadric(&self) -> f64 {
        if self.k == 0.0 {
            0.0
        } else {
            1.0 / self.k
        }
    }

    /// Finite diameter, if any.
    pub fn diameter(&self) -> Option<f64> {
        self.d_k.finite()
    }

    /// True when `x` is strictly below `D_K`.
    pub fn below_diameter(&self, x: f64) -> bool {
        match self.d_k {
            Extended::Finite(d) => x < d,
            Extended::Infinite => true,
        }
    }

    /// `H(x)`: `x²/2`, `2 sinh²(sx/2)/s²` or `2 sin²(sx/2)/s²`.
    pub fn h(&self, x: f64) -> f64 {
        match self.branch() {
            Branch::Flat => 0.5 * x * x,
            Branch::Positive => {
                let v = (0.5 * self.s * x).sinh() / self.s;
                2.0 * v * v
            }
            Branch::Negative => {
                let v = (0.5 * self.s * x).sin() / self.s;
                2.0 * v * v
            }
        }
    }

    /// Inverse of [`Self::h`]; `None` when no length below `D_K` matches.
    pub fn h_inv(&self, h: f64) -> Option<f64> {
        if h < 0.0 {
            return None;
        }
        match self.branch() {
            Branch::Flat => Some((2.0 * h).sqrt()),
            Branch::Positive => Some(2.0 / self.s * (self.s * (0.5 * h).sqrt()).asinh()),
            Branch::Negative => {
                let arg = self.s * (0.5 * h).sqrt();
                if arg > 1.0 {
                    None
                } else {
                    Some(2.0 / self.s * arg.asin())
                }
            }
        }
    }

    /// `Sn(x)`: `x`, `sinh(sx)/s` or `sin(sx)/s`.
    pub fn sn(&self, x: f64) -> f64 {
        match self.branch() {
            Branch::Flat => x,
            Branch::Positive => (self.s * x).sinh() / self.s,
            Branch::Negative => (self.s * x).sin() / self.s,
        }
    }

    /// `Cs(x) - 1`: `0`, `cosh(sx) - 1` or `cos(sx) - 1`, computed without cancellation.
    pub fn cs_m1(&self, x: f64) -> f64 {
        match self.branch() {
            Branch::Flat => 0.0,
            Branch::Positive => self.k * self.h(x),
            Branch::Negative => self.k * self.h(x),
        }
    }

    /// Volume element of the `(t, x)` chart coordinates.
    pub fn volume_element(&self, t: f64, x: f64) -> f64 {
        match self.branch() {
            Branch::Flat => 1.0,
            Branch::Positive => (self.s * t).cosh(),
            Branch::Negative => (self.s * x).cosh(),
        }
    }
}
