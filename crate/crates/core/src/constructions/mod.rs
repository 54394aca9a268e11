//! Generators for the extremal example families.

mod bush;
mod case1;
pub mod convergents;
mod furst;

pub use bush::{build_case2, BushExample};
pub use case1::{
    build_case1, case1_fractions, case1_solutions, case1_tubes, Case1Point, FractionWindow, RationalExample,
};
pub use furst::{
    build_furst_intersected, build_furst_intersected_with, build_furst_sqrt2, build_furst_strips, steep_grid_tubes,
    strip_intervals, FurstCase, FurstCertificate, FurstenbergExample,
};

use crate::geometry::Point;
use crate::scalar::Scalar;

/// Exact minimum squared distance over all pairs, or `None` below two points.
pub fn min_pairwise_dist_sq(points: &[Point]) -> Option<Scalar> {
    let mut best: Option<Scalar> = None;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let d = p.dist_sq(q);
            if best.as_ref().is_none_or(|b| &d < b) {
                best = Some(d);
            }
        }
    }
    best
}
