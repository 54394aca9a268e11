//! Incidence counting between balls and tubes.
//!
//! Two engines share one exact predicate: a brute-force oracle and a grid
//! engine that buckets ball centers into `delta`-cells and visits only the
//! cells near each tube. Their reports are identical by construction.

mod rich;
mod spacing;
mod tubenet;

pub use rich::{count_triples, rich_balls, RichBallSet};
pub use spacing::{
    verify_ball_grid_spacing, verify_tube_spacing, CellViolation, GridOrientation, GridSpacingReport,
    TubeSpacingReport, TubeViolation, TubeViolationKind,
};
pub use tubenet::{rich_tubes, NetTubeId, RichTubeSet, TubeNet};

use crate::error::{Error, Result};
use crate::geometry::{incident_unchecked, Ball, Tube};
use crate::scalar::{to_f64, Scalar};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Oracle,
    Grid,
}

impl std::str::FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Engine::Oracle),
            "grid" => Ok(Engine::Grid),
            _ => Err(Error::param(format!("unknown engine `{s}`"))),
        }
    }
}

/// Incidence totals with per-object counts and count histograms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceReport {
    pub total: u64,
    pub tube_counts: Vec<u32>,
    pub ball_counts: Vec<u32>,
    /// number of tubes with each incidence count
    pub tube_histogram: BTreeMap<u32, u64>,
    /// number of balls with each incidence count
    pub ball_histogram: BTreeMap<u32, u64>,
}

impl IncidenceReport {
    fn from_lists(n_balls: usize, lists: &[Vec<u32>]) -> Self {
        let mut ball_counts = vec![0u32; n_balls];
        let mut tube_counts = Vec::with_capacity(lists.len());
        let mut total = 0u64;
        for l in lists {
            tube_counts.push(l.len() as u32);
            total += l.len() as u64;
            for &b in l {
                ball_counts[b as usize] += 1;
            }
        }
        let hist = |v: &[u32]| {
            let mut h = BTreeMap::new();
            for &c in v {
                *h.entry(c).or_insert(0u64) += 1;
            }
            h
        };
        IncidenceReport {
            total,
            tube_histogram: hist(&tube_counts),
            ball_histogram: hist(&ball_counts),
            tube_counts,
            ball_counts,
        }
    }

    /// `sum_T n_T (n_T - 1)`.
    pub fn ordered_pairs(&self) -> u64 {
        self.tube_counts.iter().map(|&n| n as u64 * (n as u64).saturating_sub(1)).sum()
    }
}

/// Common radius of all objects, or `None` when both lists are empty.
pub fn common_radius(balls: &[Ball], tubes: &[Tube]) -> Result<Option<Scalar>> {
    let mut r: Option<&Scalar> = None;
    for x in balls.iter().map(|b| b.radius()).chain(tubes.iter().map(|t| t.radius())) {
        match r {
            None => r = Some(x),
            Some(y) if y != x => return Err(Error::param("objects have different radii")),
            _ => {}
        }
    }
    Ok(r.cloned())
}

pub fn count_incidences(balls: &[Ball], tubes: &[Tube], engine: Engine) -> Result<IncidenceReport> {
    match engine {
        Engine::Oracle => count_incidences_oracle(balls, tubes),
        Engine::Grid => count_incidences_grid(balls, tubes),
    }
}

/// Brute force over all pairs.
pub fn count_incidences_oracle(balls: &[Ball], tubes: &[Tube]) -> Result<IncidenceReport> {
    common_radius(balls, tubes)?;
    let lists: Vec<Vec<u32>> = tubes
        .par_iter()
        .map(|t| {
            balls
                .iter()
                .enumerate()
                .filter(|(_, b)| incident_unchecked(b, t))
                .map(|(i, _)| i as u32)
                .collect()
        })
        .collect();
    Ok(IncidenceReport::from_lists(balls.len(), &lists))
}

/// Ball centers bucketed into square cells in CSR layout.
pub(crate) struct CellIndex {
    x0: f64,
    y0: f64,
    side: f64,
    nx: i64,
    ny: i64,
    start: Vec<u32>,
    items: Vec<u32>,
}

impl CellIndex {
    pub(crate) fn new(points: &[[f64; 2]], side: f64) -> Self {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for p in points {
            x0 = x0.min(p[0]);
            y0 = y0.min(p[1]);
            x1 = x1.max(p[0]);
            y1 = y1.max(p[1]);
        }
        if points.is_empty() {
            (x0, y0, x1, y1) = (0.0, 0.0, 0.0, 0.0);
        }
        let nx = ((x1 - x0) / side).floor() as i64 + 1;
        let ny = ((y1 - y0) / side).floor() as i64 + 1;
        let cell = |p: &[f64; 2]| -> usize {
            let i = (((p[0] - x0) / side).floor() as i64).clamp(0, nx - 1);
            let j = (((p[1] - y0) / side).floor() as i64).clamp(0, ny - 1);
            (j * nx + i) as usize
        };
        let mut start = vec![0u32; (nx * ny + 1) as usize];
        for p in points {
            start[cell(p) + 1] += 1;
        }
        for k in 1..start.len() {
            start[k] += start[k - 1];
        }
        let mut fill = start.clone();
        let mut items = vec![0u32; points.len()];
        for (idx, p) in points.iter().enumerate() {
            let c = cell(p);
            items[fill[c] as usize] = idx as u32;
            fill[c] += 1;
        }
        CellIndex { x0, y0, side, nx, ny, start, items }
    }

    /// Calls `f` with every item whose cell may hold a point within `reach`
    /// of the segment. The reach should include a safety slack.
    pub(crate) fn visit_near_segment(&self, seg: &[f64; 4], reach: f64, mut f: impl FnMut(u32)) {
        let (ymin, ymax) = (seg[1].min(seg[3]), seg[1].max(seg[3]));
        let j0 = (((ymin - reach - self.y0) / self.side).floor() as i64).max(0);
        let j1 = (((ymax + reach - self.y0) / self.side).floor() as i64).min(self.ny - 1);
        for j in j0..=j1 {
            let lo = self.y0 + j as f64 * self.side - reach;
            let hi = lo + self.side + 2.0 * reach;
            let Some((xa, xb)) = x_range_in_band(seg, lo, hi) else { continue };
            let i0 = (((xa - reach - self.x0) / self.side).floor() as i64).max(0);
            let i1 = (((xb + reach - self.x0) / self.side).floor() as i64).min(self.nx - 1);
            if i0 > i1 {
                continue;
            }
            let a = self.start[(j * self.nx + i0) as usize] as usize;
            let b = self.start[(j * self.nx + i1 + 1) as usize] as usize;
            for &it in &self.items[a..b] {
                f(it);
            }
        }
    }
}

/// Range of `x` over the part of the segment with `y` in `[lo, hi]`.
pub(crate) fn x_range_in_band(seg: &[f64; 4], lo: f64, hi: f64) -> Option<(f64, f64)> {
    let (ax, ay, bx, by) = (seg[0], seg[1], seg[2], seg[3]);
    let dy = by - ay;
    if dy.abs() < 1e-300 {
        if ay < lo || ay > hi {
            return None;
        }
        return Some((ax.min(bx), ax.max(bx)));
    }
    let mut t0 = (lo - ay) / dy;
    let mut t1 = (hi - ay) / dy;
    if t0 > t1 {
        std::mem::swap(&mut t0, &mut t1);
    }
    let (t0, t1) = (t0.max(0.0), t1.min(1.0));
    if t0 > t1 {
        return None;
    }
    let (x0, x1) = (ax + t0 * (bx - ax), ax + t1 * (bx - ax));
    Some((x0.min(x1), x0.max(x1)))
}

/// Grid engine over `delta`-cells with a `3 delta` conservative reach.
pub fn count_incidences_grid(balls: &[Ball], tubes: &[Tube]) -> Result<IncidenceReport> {
    let lists = grid_lists(balls, tubes)?;
    Ok(IncidenceReport::from_lists(balls.len(), &lists))
}

/// Sorted incident ball indices for every tube.
pub(crate) fn grid_lists(balls: &[Ball], tubes: &[Tube]) -> Result<Vec<Vec<u32>>> {
    let Some(delta) = common_radius(balls, tubes)? else {
        return Ok(Vec::new());
    };
    let d = to_f64(&delta);
    let centers: Vec<[f64; 2]> = balls.iter().map(|b| b.approx()).collect();
    let index = CellIndex::new(&centers, d);
    let lists: Vec<Vec<u32>> = tubes
        .par_iter()
        .map(|t| {
            let mut out = Vec::new();
            index.visit_near_segment(&t.approx(), 3.0 * d, |i| {
                if incident_unchecked(&balls[i as usize], t) {
                    out.push(i);
                }
            });
            out.sort_unstable();
            out
        })
        .collect();
    Ok(lists)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{lattice_balls, Point};
    use crate::scalar::{int, rat};

    #[test]
    fn vertical_tube_on_lattice() {
        // lattice columns inside |x - 1/2| <= 2 delta: nine columns, all rows
        let d = rat(1, 16);
        let balls = lattice_balls(&d).unwrap();
        let t = Tube::new(rat(1, 2), int(0), d.clone()).unwrap();
        let r = count_incidences_oracle(&balls, std::slice::from_ref(&t)).unwrap();
        assert_eq!(r.total, 9 * 33);
        let g = count_incidences_grid(&balls, &[t]).unwrap();
        assert_eq!(r, g);
    }

    #[test]
    fn empty_inputs() {
        let r = count_incidences_grid(&[], &[]).unwrap();
        assert_eq!(r.total, 0);
        let b = Ball::new(Point::new(rat(1, 2), rat(1, 2)), rat(1, 8)).unwrap();
        let r = count_incidences_oracle(&[b], &[]).unwrap();
        assert_eq!(r.ball_counts, vec![0]);
    }

    #[test]
    fn mixed_radii_rejected() {
        let b = Ball::new(Point::new(rat(1, 2), rat(1, 2)), rat(1, 8)).unwrap();
        let t = Tube::new(rat(1, 2), int(0), rat(1, 16)).unwrap();
        assert!(count_incidences_grid(&[b.clone()], &[t.clone()]).is_err());
        assert!(count_incidences_oracle(&[b], &[t]).is_err());
    }
}
