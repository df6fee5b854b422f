use super::fan::{skeleton_project, Fan};
use super::region::{Shape, REGION_TOL};
use crate::error::{GeomError, Result};
use crate::model::{
    geodesic_point, tau, time_reversal, CurvatureGauge, Isometry, ModelPoint, Orientation,
};

/// What a piece does to the points of its region.
#[derive(Debug, Clone)]
pub enum Action {
    Identity,
    Isometry(Isometry),
    /// Sends `p` to the point of the segment `[from, to]` at the time separation
    /// of `p` from `center`: measured from `from` for future sectors, up to `to`
    /// for past sectors.
    Collapse {
        center: ModelPoint,
        orientation: Orientation,
        from: ModelPoint,
        to: ModelPoint,
    },
    Nested(Box<PiecewiseMap>),
}

#[derive(Debug, Clone)]
pub struct Piece {
    pub label: String,
    pub shape: Shape,
    pub action: Action,
}

#[derive(Debug, Clone)]
pub enum Stage {
    /// First piece containing the point wins; points outside every piece use the fallback.
    Pieces {
        pieces: Vec<Piece>,
        fallback: Option<Action>,
    },
    TimeReversal,
    /// Projection onto the skeleton of a fan.
    Skeleton(Box<Fan>),
}

/// Composition of stages, applied in order.
#[derive(Debug, Clone)]
pub struct PiecewiseMap {
    pub gauge: CurvatureGauge,
    pub stages: Vec<Stage>,
}

fn apply_action(g: &CurvatureGauge, action: &Action, p: &ModelPoint) -> Result<ModelPoint> {
    match action {
        Action::Identity => Ok(*p),
        Action::Isometry(iso) => Ok(iso.apply(g, p)),
        Action::Collapse {
            center,
            orientation,
            from,
            to,
        } => {
            let len = tau(g, from, to)?;
            if len == 0.0 {
                return Ok(*from);
            }
            match orientation {
                Orientation::Future => {
                    let r = tau(g, center, p)?.min(len);
                    geodesic_point(g, from, to, r / len)
                }
                Orientation::Past => {
                    let r = tau(g, p, center)?.min(len);
                    geodesic_point(g, from, to, 1.0 - r / len)
                }
            }
        }
        Action::Nested(m) => m.eval(p),
    }
}

impl PiecewiseMap {
    pub fn identity(g: &CurvatureGauge) -> Self {
        PiecewiseMap {
            gauge: *g,
            stages: Vec::new(),
        }
    }

    pub fn single(g: &CurvatureGauge, stage: Stage) -> Self {
        PiecewiseMap {
            gauge: *g,
            stages: vec![stage],
        }
    }

    /// Pieces stage with a fallback action.
    pub fn pieces(g: &CurvatureGauge, pieces: Vec<Piece>, fallback: Option<Action>) -> Self {
        PiecewiseMap::single(g, Stage::Pieces { pieces, fallback })
    }

    pub fn is_identity(&self) -> bool {
        self.stages.is_empty()
    }

    /// `other ∘ self`.
    pub fn then(mut self, other: PiecewiseMap) -> Self {
        self.stages.extend(other.stages);
        self
    }

    /// Total number of pieces, counting nested maps.
    pub fn piece_count(&self) -> usize {
        self.stages
            .iter()
            .map(|s| match s {
                Stage::Pieces { pieces, fallback } => {
                    let nested = |a: &Action| match a {
                        Action::Nested(m) => m.piece_count(),
                        _ => 0,
                    };
                    pieces.len()
                        + pieces.iter().map(|p| nested(&p.action)).sum::<usize>()
                        + fallback.as_ref().map(nested).unwrap_or(0)
                }
                _ => 0,
            })
            .sum()
    }

    pub fn eval(&self, p: &ModelPoint) -> Result<ModelPoint> {
        let g = &self.gauge;
        let mut cur = *p;
        for stage in &self.stages {
            cur = match stage {
                Stage::TimeReversal => time_reversal(g, &cur),
                Stage::Skeleton(fan) => skeleton_project(fan, &cur)?,
                Stage::Pieces { pieces, fallback } => {
                    let hit = pieces
                        .iter()
                        .find(|pc| pc.shape.contains(g, &cur, REGION_TOL))
                        .map(|pc| &pc.action);
                    let action = match (hit, fallback) {
                        (Some(a), _) => a,
                        (None, Some(f)) => f,
                        (None, None) => pieces
                            .iter()
                            .find(|pc| pc.shape.contains(g, &cur, 1e-7))
                            .map(|pc| &pc.action)
                            .ok_or_else(|| {
                                GeomError::Domain(format!("point {:?} outside every piece", cur.c))
                            })?,
                    };
                    apply_action(g, action, &cur)?
                }
            };
        }
        Ok(cur)
    }
}
