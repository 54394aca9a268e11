//! Ball families with many `delta^alpha`-spaced balls on every tube.

use super::case1::{case1_fractions, case1_tubes, FractionWindow};
use super::convergents::sqrt2_convergent;
use crate::error::{Error, Result};
use crate::geometry::{Ball, Point, SpacingParams, Tube};
use crate::incidence::count_incidences_grid;
use crate::scalar::{big, floor_i64, int, inverse_integer, pow_ceil, pow_floor, rat, to_f64, Scalar};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FurstCase {
    Strips,
    Intersected,
    Sqrt2,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FurstCertificate {
    /// reference size the family is compared against
    pub reference: f64,
    /// `|B| / reference`
    pub ratio: f64,
    pub min_witnesses: usize,
    pub max_witnesses: usize,
    /// smallest vertical gap between consecutive witnesses of one tube
    pub min_witness_gap: Option<String>,
    /// richness parameter of the rational family
    pub r: Option<f64>,
    /// convergent `p/q` standing in for `sqrt 2`
    pub rho: Option<(String, String)>,
    /// `min 5 max(a, b) |a - rho b|` over the grid range
    pub spacing_margin: Option<String>,
    /// set when the rational family degenerated and the intersected family
    /// was built instead
    pub fallback: bool,
}

#[derive(Clone, Debug)]
pub struct FurstenbergExample {
    pub case: FurstCase,
    pub delta: Scalar,
    pub alpha: Scalar,
    pub w: u64,
    pub x: u64,
    pub intervals: Vec<(Scalar, Scalar)>,
    pub tubes: Vec<Tube>,
    pub balls: Vec<Ball>,
    /// per tube, indices into `balls` ordered bottom to top
    pub witnesses: Vec<Vec<usize>>,
    pub certificate: FurstCertificate,
}

fn check_alpha(alpha: &Scalar) -> Result<()> {
    if !alpha.is_positive() || alpha >= &int(1) {
        return Err(Error::param("alpha must lie in (0, 1)"));
    }
    Ok(())
}

/// Left-anchored length-`delta` intervals `[i g delta, i g delta + delta]`
/// with `g = ceil(delta^(alpha - 1)) + 1`, so that consecutive intervals are
/// at distance at least `delta^alpha`.
pub fn strip_intervals(delta: &Scalar, alpha: &Scalar) -> Result<Vec<(Scalar, Scalar)>> {
    check_alpha(alpha)?;
    let n = inverse_integer(delta)?;
    let g = pow_ceil(n, &(int(1) - alpha))? + 1;
    let count = pow_floor(n, alpha)?;
    let mut out = Vec::new();
    let mut i = BigInt::from(0);
    while i < count {
        let a = big(&(&i * &g)) * delta;
        let b = &a + delta;
        if b > int(1) {
            break;
        }
        out.push((a, b));
        i += 1;
    }
    Ok(out)
}

/// Lattice indices `(i, j)` of balls on `(delta/2) Z^2` meeting `[0,1] x I`.
fn strip_lattice(n: i64, intervals: &[(Scalar, Scalar)]) -> Vec<(i64, i64)> {
    let m = 2 * n;
    let d = rat(1, n);
    let mut rows = Vec::new();
    for (a, b) in intervals {
        let j0 = crate::scalar::ceil_i64(&((a - &d) * int(m))).max(0);
        let j1 = floor_i64(&((b + &d) * int(m))).min(m);
        rows.extend(j0..=j1);
    }
    rows.sort_unstable();
    rows.dedup();
    rows.into_iter().flat_map(|j| (0..=m).map(move |i| (i, j))).collect()
}

fn lattice_ball(n: i64, i: i64, j: i64, delta: &Scalar) -> Ball {
    Ball::from_parts(Point::new(rat(i, 2 * n), rat(j, 2 * n)), delta.clone())
}

fn round_half_up(s: &Scalar) -> i64 {
    floor_i64(&(s + rat(1, 2)))
}

/// One witness per strip: the lattice ball nearest to the core at the
/// strip's middle height.
fn strip_witnesses(
    n: i64,
    tubes: &[Tube],
    intervals: &[(Scalar, Scalar)],
    index: &HashMap<(i64, i64), usize>,
) -> Vec<Vec<usize>> {
    let m = 2 * n;
    tubes
        .iter()
        .map(|t| {
            let mut w = Vec::new();
            for (a, b) in intervals {
                let y = (a + b) / int(2);
                let x = t.position() + t.direction() * &y;
                let key = (round_half_up(&(x * int(m))), round_half_up(&(y * int(m))));
                if let Some(&k) = index.get(&key) {
                    w.push(k);
                }
            }
            w
        })
        .collect()
}

fn witness_stats(balls: &[Ball], witnesses: &[Vec<usize>], cert: &mut FurstCertificate) {
    cert.min_witnesses = witnesses.iter().map(|w| w.len()).min().unwrap_or(0);
    cert.max_witnesses = witnesses.iter().map(|w| w.len()).max().unwrap_or(0);
    let mut best: Option<Scalar> = None;
    for w in witnesses {
        for pair in w.windows(2) {
            let g = (&balls[pair[1]].center().y - &balls[pair[0]].center().y).abs();
            if best.as_ref().is_none_or(|b| &g < b) {
                best = Some(g);
            }
        }
    }
    cert.min_witness_gap = best.map(|g| crate::scalar::format_scalar(&g));
}

fn pow_f64(n: u64, e: f64) -> f64 {
    (n as f64).powf(e)
}

/// Tubes of the `(W, X)` grid within angle `1/10` of the vertical axis.
pub fn steep_grid_tubes(params: &SpacingParams) -> Result<Vec<Tube>> {
    let limit = rat(1, 10);
    Ok(case1_tubes(params)?.into_iter().filter(|t| t.direction().abs() <= limit).collect())
}

/// All lattice balls meeting the strips. Witnesses are attached for the
/// steep tubes of the `(W, X)` grid.
pub fn build_furst_strips(delta: &Scalar, alpha: &Scalar, w: u64, x: u64) -> Result<FurstenbergExample> {
    let n = inverse_integer(delta)? as i64;
    let intervals = strip_intervals(delta, alpha)?;
    let params = SpacingParams::from_ints(n as u64, w, x)?;
    let tubes = steep_grid_tubes(&params)?;
    let cells = strip_lattice(n, &intervals);
    let index: HashMap<(i64, i64), usize> = cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let balls: Vec<Ball> = cells.iter().map(|&(i, j)| lattice_ball(n, i, j, delta)).collect();
    let witnesses = strip_witnesses(n, &tubes, &intervals, &index);
    let a = to_f64(alpha);
    let reference = pow_f64(n as u64, a + 1.0);
    let mut certificate = FurstCertificate { reference, ratio: balls.len() as f64 / reference, ..Default::default() };
    witness_stats(&balls, &witnesses, &mut certificate);
    Ok(FurstenbergExample {
        case: FurstCase::Strips,
        delta: delta.clone(),
        alpha: alpha.clone(),
        w,
        x,
        intervals,
        tubes,
        balls,
        witnesses,
        certificate,
    })
}

/// Lattice balls meeting a strip and one of the given tubes.
pub fn build_furst_intersected_with(
    delta: &Scalar,
    alpha: &Scalar,
    w: u64,
    x: u64,
    tubes: Vec<Tube>,
) -> Result<FurstenbergExample> {
    let n = inverse_integer(delta)? as i64;
    let intervals = strip_intervals(delta, alpha)?;
    let cells = strip_lattice(n, &intervals);
    let all: Vec<Ball> = cells.iter().map(|&(i, j)| lattice_ball(n, i, j, delta)).collect();
    let counts = count_incidences_grid(&all, &tubes)?.ball_counts;
    let mut balls = Vec::new();
    let mut index = HashMap::new();
    for (k, ball) in all.into_iter().enumerate() {
        if counts[k] > 0 {
            index.insert(cells[k], balls.len());
            balls.push(ball);
        }
    }
    let witnesses = strip_witnesses(n, &tubes, &intervals, &index);
    let reference = pow_f64(n as u64, to_f64(alpha)) * (x * w) as f64;
    let mut certificate = FurstCertificate { reference, ratio: balls.len() as f64 / reference, ..Default::default() };
    witness_stats(&balls, &witnesses, &mut certificate);
    Ok(FurstenbergExample {
        case: FurstCase::Intersected,
        delta: delta.clone(),
        alpha: alpha.clone(),
        w,
        x,
        intervals,
        tubes,
        balls,
        witnesses,
        certificate,
    })
}

/// Intersected family over the steep tubes of the `(W, X)` grid.
pub fn build_furst_intersected(delta: &Scalar, alpha: &Scalar, w: u64, x: u64) -> Result<FurstenbergExample> {
    let n = inverse_integer(delta)?;
    let tubes = steep_grid_tubes(&SpacingParams::from_ints(n, w, x)?)?;
    build_furst_intersected_with(delta, alpha, w, x, tubes)
}

/// Rational family on an `m x m` grid with the bottom row compressed by an
/// approximation `rho` of `sqrt 2`.
///
/// Tubes run from `(a/(rho m), 0)` to `(b/m, 1)` with `m = sqrt(XW)/divisor`.
/// Balls are the images of the rational points `(c/(qm), p/q)` under the
/// projective map `(x, y) -> (x, y) / (rho - (rho - 1) y)`, which fixes the
/// top edge, scales the bottom edge by `1/rho` and keeps every incidence
/// between the grid lines and the rational points. Heights `p/q` are all
/// reduced fractions in `[0, 1]` with `q <= m/r`, `r = (delta^alpha m^2)^(1/2)`.
pub fn build_furst_sqrt2(
    delta: &Scalar,
    alpha: &Scalar,
    x: u64,
    w: u64,
    divisor: u64,
) -> Result<FurstenbergExample> {
    check_alpha(alpha)?;
    let n = inverse_integer(delta)?;
    let (sx, sw) = match (crate::scalar::exact_sqrt(x), crate::scalar::exact_sqrt(w)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::param("X and W must be perfect squares")),
    };
    SpacingParams::from_ints(n, w, x)?;
    if x % w != 0 {
        return Err(Error::param("need W | X"));
    }
    let root = sx * sw;
    if divisor == 0 || root % divisor != 0 {
        return Err(Error::param("grid divisor must divide sqrt(XW)"));
    }
    let m = root / divisor;
    // r >= 2 iff delta^alpha m^2 >= 4 iff (m^2/4)^den >= n^num
    let (num, den) = (alpha.numer().to_u32().unwrap(), alpha.denom().to_u32().unwrap());
    let lhs = num_traits::pow(BigInt::from(m * m), den as usize);
    let rhs = num_traits::pow(BigInt::from(4u64), den as usize) * num_traits::pow(BigInt::from(n), num as usize);
    if lhs < rhs {
        let mut ex = build_furst_intersected(delta, alpha, w, x)?;
        ex.certificate.fallback = true;
        return Ok(ex);
    }
    let qmax = pow_floor(n, &(alpha / int(2)))?.to_u64().unwrap();
    let window = FractionWindow { lo: int(0), hi: int(1), c_lower: None, c_upper: int(1) };
    // q <= m / r is q <= delta^(-alpha/2)
    let fractions = case1_fractions(1, 1, 1, &FractionWindow { c_upper: int(qmax as i64), ..window })?;
    let (rp, rq) = sqrt2_convergent(10 * m);
    let rho = Scalar::new(rp.clone(), rq.clone());
    let mi = m as i64;
    let psi = |p: &Point| {
        let s = &rho - (&rho - int(1)) * &p.y;
        Point::new(&p.x / &s, &p.y / &s)
    };
    let mut balls = Vec::new();
    let mut slot: HashMap<(usize, u64), usize> = HashMap::new();
    for (fi, &(p, q)) in fractions.iter().enumerate() {
        for c in 0..=q * m {
            let old = Point::new(rat(c as i64, (q * m) as i64), rat(p as i64, q as i64));
            slot.insert((fi, c), balls.len());
            balls.push(Ball::from_parts(psi(&old), delta.clone()));
        }
    }
    let mut tubes = Vec::new();
    let mut witnesses = Vec::new();
    for a in 0..=m {
        for b in 0..=m {
            let u = rat(a as i64, 1) / (&rho * int(mi));
            let v = rat(b as i64, mi) - &u;
            tubes.push(Tube::new(u, v, delta.clone())?);
            let w: Vec<usize> = fractions
                .iter()
                .enumerate()
                .map(|(fi, &(p, q))| slot[&(fi, p * b + (q - p) * a)])
                .collect();
            witnesses.push(w);
        }
    }
    let mut margin: Option<Scalar> = None;
    for a in 0..=m as i64 {
        for b in 0..=m as i64 {
            if a == 0 && b == 0 {
                continue;
            }
            let v = int(5 * a.max(b)) * (int(a) - &rho * int(b)).abs();
            if margin.as_ref().is_none_or(|g| &v < g) {
                margin = Some(v);
            }
        }
    }
    let a = to_f64(alpha);
    let reference = pow_f64(n, 1.5 * a) * (root as f64);
    let r = (pow_f64(n, -a) * (m * m) as f64).sqrt();
    let mut certificate = FurstCertificate {
        reference,
        ratio: balls.len() as f64 / reference,
        r: Some(r),
        rho: Some((rp.to_string(), rq.to_string())),
        spacing_margin: margin.map(|g| crate::scalar::format_scalar(&g)),
        ..Default::default()
    };
    witness_stats(&balls, &witnesses, &mut certificate);
    Ok(FurstenbergExample {
        case: FurstCase::Sqrt2,
        delta: delta.clone(),
        alpha: alpha.clone(),
        w,
        x,
        intervals: Vec::new(),
        tubes,
        balls,
        witnesses,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_at_half() {
        let d = rat(1, 64);
        let iv = strip_intervals(&d, &rat(1, 2)).unwrap();
        assert_eq!(iv.len(), 8);
        for pair in iv.windows(2) {
            assert!(&pair[1].0 - &pair[0].1 >= rat(1, 8));
        }
    }

    #[test]
    fn sqrt2_witnesses_lie_on_cores() {
        let ex = build_furst_sqrt2(&rat(1, 256), &rat(1, 2), 64, 4, 2).unwrap();
        assert_eq!(ex.case, FurstCase::Sqrt2);
        for (t, w) in ex.tubes.iter().zip(&ex.witnesses) {
            for &k in w {
                let c = ex.balls[k].center();
                assert_eq!(t.position() + t.direction() * &c.y, c.x);
            }
        }
        let margin: Scalar = crate::scalar::parse_scalar(ex.certificate.spacing_margin.as_ref().unwrap()).unwrap();
        assert!(margin >= int(1));
    }

    #[test]
    fn degenerate_sqrt2_falls_back() {
        let ex = build_furst_sqrt2(&rat(1, 64), &rat(9, 10), 4, 1, 1).unwrap();
        assert!(ex.certificate.fallback);
        assert_eq!(ex.case, FurstCase::Intersected);
    }

    #[test]
    fn intersected_is_subset_of_strips() {
        let a = build_furst_strips(&rat(1, 64), &rat(1, 2), 4, 16).unwrap();
        let b = build_furst_intersected(&rat(1, 64), &rat(1, 2), 4, 16).unwrap();
        assert!(b.balls.len() <= a.balls.len());
        assert!(b.witnesses.iter().all(|w| w.len() == b.intervals.len()));
    }
}
