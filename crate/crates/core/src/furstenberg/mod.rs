//! Pseudo-tubes on the `delta`-square lattice, gap statistics along each
//! tube, the crossing graph and the resulting lower bound on `|B|`.

mod bound;
mod graph;
mod pseudotube;

pub use bound::{
    case1_hypothesis, crossing_upper_bound, edge_count_case1, edge_count_case2, lemma_value, profiles, regime_report,
    run_pipeline, theorem_target, thin_to_grid, AngularBucket, BoundCertificate, CrossingMethod, EdgeCountCase1,
    FurstInstance, Pipeline, Profiles, ReducedParams, RegimeReport, LOG_EXPONENT,
};
pub use graph::{crossings, crossings_brute, segments_cross, CrossGraph};
pub use pseudotube::{
    class_width, gap_class, gap_profile, rasterize, select_typical_gap, typical_family, GapProfile, GapSelection,
    PseudoTube, Square,
};
