use super::{common_radius, grid_lists, x_range_in_band};
use crate::error::{Error, Result};
use crate::geometry::{dist_point_segment_sq_f64, filter_le, incident_exact, Ball, Point, SpacingParams, Tube};
use crate::scalar::{inverse_integer, rat, to_f64};
use rayon::prelude::*;

/// Lattice balls meeting at least `r` tubes.
#[derive(Clone, Debug)]
pub struct RichBallSet {
    pub params: SpacingParams,
    pub r: u32,
    pub balls: Vec<Ball>,
    pub counts: Vec<u32>,
}

/// Scans the implicit lattice `(delta/2) Z^2 ∩ [0,1]^2` and keeps balls that
/// meet at least `r` of the tubes.
pub fn rich_balls(tubes: &[Tube], params: &SpacingParams, r: u32) -> Result<RichBallSet> {
    if r < 1 {
        return Err(Error::param("richness threshold must be at least 1"));
    }
    if let Some(d) = common_radius(&[], tubes)? {
        if d != params.delta {
            return Err(Error::param("tube radius differs from delta"));
        }
    }
    let n = inverse_integer(&params.delta)? as i64;
    let m = 2 * n;
    let h = 1.0 / m as f64;
    let d = to_f64(&params.delta);
    let thr2 = 4.0 * d * d;
    let side = (m + 1) as usize;
    let lists: Vec<Vec<u32>> = tubes
        .par_iter()
        .map(|t| {
            let seg = t.approx();
            let mut out = Vec::new();
            let reach = 2.0 * d + 1e-9;
            let (ymin, ymax) = (seg[1].min(seg[3]), seg[1].max(seg[3]));
            let j0 = (((ymin - reach) / h).ceil() as i64).max(0);
            let j1 = (((ymax + reach) / h).floor() as i64).min(m);
            for j in j0..=j1 {
                let y = j as f64 * h;
                let Some((xa, xb)) = x_range_in_band(&seg, y - reach, y + reach) else { continue };
                let i0 = (((xa - reach) / h).ceil() as i64).max(0);
                let i1 = (((xb + reach) / h).floor() as i64).min(m);
                for i in i0..=i1 {
                    let d2 = dist_point_segment_sq_f64(i as f64 * h, y, &seg);
                    let hit = match filter_le(d2, thr2) {
                        Some(a) => a,
                        None => {
                            let b = Ball::from_parts(Point::new(rat(i, m), rat(j, m)), params.delta.clone());
                            incident_exact(&b, t)
                        }
                    };
                    if hit {
                        out.push((j as usize * side + i as usize) as u32);
                    }
                }
            }
            out
        })
        .collect();
    let mut counts = vec![0u32; side * side];
    for l in &lists {
        for &c in l {
            counts[c as usize] += 1;
        }
    }
    let mut balls = Vec::new();
    let mut kept = Vec::new();
    for (c, &k) in counts.iter().enumerate() {
        if k >= r {
            let (i, j) = ((c % side) as i64, (c / side) as i64);
            balls.push(Ball::from_parts(Point::new(rat(i, m), rat(j, m)), params.delta.clone()));
            kept.push(k);
        }
    }
    Ok(RichBallSet { params: params.clone(), r, balls, counts: kept })
}

/// Ordered triples `(B1, B2, T)` with `B1 != B2` both meeting `T`.
pub fn count_triples(balls: &[Ball], tubes: &[Tube]) -> Result<u64> {
    let lists = grid_lists(balls, tubes)?;
    let mut total = 0u64;
    for l in &lists {
        for (i, a) in l.iter().enumerate() {
            total += l.iter().enumerate().filter(|&(j, b)| j != i && b != a).count() as u64;
        }
    }
    Ok(total)
}
