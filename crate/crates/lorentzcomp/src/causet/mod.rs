//! Poisson sprinkling of model-space regions and four-point surveys of the result.

mod region;
mod set;
mod survey;

pub use region::{region_volume, Region, RegionShape};
pub use set::{longest_chain, sprinkle, substream, CausalSet, Provenance};
pub use survey::{
    quadruple_gauge, sample_quadruples, survey_fourpoint, QuadrupleSample, SurveyRow, SurveyTable,
    RESAMPLE_CAP, SURVEY_HEADER,
};
