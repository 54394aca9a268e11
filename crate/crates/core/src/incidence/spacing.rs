//! Spacing verifiers for tube families and ball grids.

use crate::error::{Error, Result};
use crate::geometry::{Ball, LongAxis, Point, Rect, SpacingParams, Tube};
use crate::scalar::{ceil_i64, floor_i64, int, Scalar};
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TubeViolationKind {
    Count { count: usize, limit: usize },
    Gap { gap: Scalar, first: usize, second: usize },
}

/// A wide test tube, given by its crossings with `y = 0` and `y = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TubeViolation {
    pub bottom: Scalar,
    pub top: Scalar,
    pub kind: TubeViolationKind,
}

#[derive(Clone, Debug)]
pub struct TubeSpacingReport {
    pub pass: bool,
    pub wide_tubes_checked: usize,
    pub max_count: usize,
    pub min_gap: Option<Scalar>,
    pub violation: Option<TubeViolation>,
}

/// Checks that every `1/W`-wide tube holds at most `ceil(X/W)` of the tubes
/// and that those are `1/X`-separated in `(u, v)`.
///
/// Wide tubes have bottom and top crossings on the net `(1/(2W)) Z`. A tube
/// `(u, v)` lies inside the wide tube `(b, t)` when `|u - b|` and
/// `|u + v - t|` are both at most `1/(2W) - delta`.
pub fn verify_tube_spacing(tubes: &[Tube], params: &SpacingParams) -> Result<TubeSpacingReport> {
    for t in tubes {
        if !t.rotation().is_identity() || !t.clip().is_unit() {
            return Err(Error::param("tube spacing is checked for unrotated tubes in the unit square"));
        }
        if t.radius() != &params.delta {
            return Err(Error::param("tube radius differs from delta"));
        }
    }
    let step = int(1) / (int(2) * &params.w);
    let slack = &step - &params.delta;
    let limit = ceil_i64(&(&params.x / &params.w)) as usize;
    let min_sep = int(1) / &params.x;
    let mut buckets: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    if !slack.is_negative() {
        for (idx, t) in tubes.iter().enumerate() {
            let u = t.position();
            let top = u + t.direction();
            let (i0, i1) = (ceil_i64(&((u - &slack) / &step)), floor_i64(&((u + &slack) / &step)));
            let (j0, j1) = (ceil_i64(&((&top - &slack) / &step)), floor_i64(&((&top + &slack) / &step)));
            for i in i0..=i1 {
                for j in j0..=j1 {
                    buckets.entry((i, j)).or_default().push(idx);
                }
            }
        }
    }
    let mut report =
        TubeSpacingReport { pass: true, wide_tubes_checked: buckets.len(), max_count: 0, min_gap: None, violation: None };
    for (&(i, j), members) in &buckets {
        report.max_count = report.max_count.max(members.len());
        let at = |kind| TubeViolation { bottom: &step * int(i), top: &step * int(j), kind };
        if members.len() > limit && report.violation.is_none() {
            report.violation = Some(at(TubeViolationKind::Count { count: members.len(), limit }));
        }
        for (a, &p) in members.iter().enumerate() {
            for &q in &members[a + 1..] {
                let (tp, tq) = (&tubes[p], &tubes[q]);
                let du = (tp.position() - tq.position()).abs();
                let dv = (tp.direction() - tq.direction()).abs();
                let gap = if du > dv { du } else { dv };
                if report.min_gap.as_ref().is_none_or(|g| &gap < g) {
                    report.min_gap = Some(gap.clone());
                }
                if gap < min_sep && report.violation.is_none() {
                    report.violation = Some(at(TubeViolationKind::Gap { gap, first: p, second: q }));
                }
            }
        }
    }
    report.pass = report.violation.is_none();
    Ok(report)
}

/// Cell shape for grid spacing of dual balls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridOrientation {
    /// cells `1/W` along `u` by `1/X` along `v`
    DirectionSeparated,
    /// cells `1/X` along `u` by `1/W` along `v`
    PositionSeparated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellViolation {
    pub cell: (i64, i64),
    pub rect: Rect,
    pub balls: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct GridSpacingReport {
    pub pass: bool,
    pub occupied_cells: usize,
    pub max_per_cell: usize,
    pub violation: Option<CellViolation>,
}

/// Checks that every half-open grid cell holds at most one ball center.
pub fn verify_ball_grid_spacing(
    balls: &[Ball],
    params: &SpacingParams,
    orientation: GridOrientation,
) -> Result<GridSpacingReport> {
    let (cw, ch, axis) = match orientation {
        GridOrientation::DirectionSeparated => (int(1) / &params.w, int(1) / &params.x, LongAxis::Horizontal),
        GridOrientation::PositionSeparated => (int(1) / &params.x, int(1) / &params.w, LongAxis::Vertical),
    };
    let mut cells: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (k, b) in balls.iter().enumerate() {
        let c = b.center();
        cells.entry((floor_i64(&(&c.x / &cw)), floor_i64(&(&c.y / &ch)))).or_default().push(k);
    }
    let mut report =
        GridSpacingReport { pass: true, occupied_cells: cells.len(), max_per_cell: 0, violation: None };
    for (&(i, j), members) in &cells {
        report.max_per_cell = report.max_per_cell.max(members.len());
        if members.len() > 1 && report.violation.is_none() {
            let rect = Rect {
                corner: Point::new(&cw * int(i), &ch * int(j)),
                width: cw.clone(),
                height: ch.clone(),
                long_axis: if cw == ch { LongAxis::Horizontal } else { axis },
            };
            report.violation = Some(CellViolation { cell: (i, j), rect, balls: members.clone() });
        }
    }
    report.pass = report.violation.is_none();
    Ok(report)
}
