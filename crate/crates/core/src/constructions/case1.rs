//! Rational-point example: lines from `(a/W, 0)` to `(b/X, 1)` and the
//! points `(c/(qW), p/q)` they pass through.

use crate::error::{Error, Result};
use crate::geometry::{Ball, Point, SpacingParams, Tube};
use crate::scalar::{as_u64, int, inverse_integer, rat, Scalar};
use num_integer::Integer;

/// Admissible fractions `p/q`: `lo <= p/q <= hi`, and
/// `X/(c_lower r) <= p, q <= c_upper X / r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionWindow {
    pub lo: Scalar,
    pub hi: Scalar,
    /// `None` drops the lower bound on `p` and `q`
    pub c_lower: Option<Scalar>,
    pub c_upper: Scalar,
}

impl Default for FractionWindow {
    fn default() -> Self {
        FractionWindow::wide()
    }
}

impl FractionWindow {
    /// Heights in `[1/4, 3/4]` with constants 100 on both sides.
    pub fn wide() -> Self {
        FractionWindow { lo: rat(1, 4), hi: rat(3, 4), c_lower: Some(int(100)), c_upper: int(100) }
    }

    /// As [`FractionWindow::wide`] with `q <= X/r`, which keeps points at
    /// one height `r/(XW)` apart.
    pub fn separated() -> Self {
        FractionWindow { c_upper: int(1), ..FractionWindow::wide() }
    }
}

/// Reduced fractions `p/q` allowed by the window, sorted by value.
pub fn case1_fractions(w: u64, x: u64, r: u64, window: &FractionWindow) -> Result<Vec<(u64, u64)>> {
    if w == 0 || r == 0 || x % w != 0 {
        return Err(Error::param("need W >= 1, r >= 1 and W | X"));
    }
    let step = x / w;
    let upper = crate::scalar::floor_i64(&(&window.c_upper * int(x as i64) / int(r as i64))).max(0) as u64;
    let lower = match &window.c_lower {
        Some(c) => crate::scalar::ceil_i64(&(int(x as i64) / (c * int(r as i64)))).max(0) as u64,
        None => 0,
    };
    let mut out = Vec::new();
    for q in lower.max(1)..=upper {
        let mut p = 0;
        while p <= q {
            let f = rat(p as i64, q as i64);
            if p >= lower && p.gcd(&q) == 1 && f >= window.lo && f <= window.hi {
                out.push((p, q));
            }
            p += step;
        }
    }
    out.sort_by(|a, b| rat(a.0 as i64, a.1 as i64).cmp(&rat(b.0 as i64, b.1 as i64)));
    Ok(out)
}

/// Non-negative solutions `(a, b)` with `a <= W`, `b <= X` of
/// `(pW/X) b + (q - p) a = c`.
pub fn case1_solutions(w: u64, x: u64, p: u64, q: u64, c: u64) -> Vec<(u64, u64)> {
    let aa = (p * w / x) as i64;
    let bb = (q - p) as i64;
    let c = c as i64;
    if aa == 0 || bb == 0 {
        // one of the coefficients vanishes: scan directly
        let mut out = Vec::new();
        for a in 0..=w as i64 {
            for b in 0..=x as i64 {
                if aa * b + bb * a == c {
                    out.push((a as u64, b as u64));
                }
            }
        }
        return out;
    }
    let e = aa.extended_gcd(&bb);
    if c % e.gcd != 0 {
        return Vec::new();
    }
    let k = c / e.gcd;
    let (b0, a0) = (e.x * k, e.y * k);
    let (sa, sb) = (aa / e.gcd, bb / e.gcd);
    // b = b0 + sb m, a = a0 - sa m
    let m_lo = Integer::div_ceil(&-b0, &sb).max(Integer::div_ceil(&(a0 - w as i64), &sa));
    let m_hi = Integer::div_floor(&(x as i64 - b0), &sb).min(Integer::div_floor(&a0, &sa));
    (m_lo..=m_hi).map(|m| ((a0 - sa * m) as u64, (b0 + sb * m) as u64)).collect()
}

#[derive(Clone, Debug)]
pub struct Case1Point {
    pub c: u64,
    pub p: u64,
    pub q: u64,
    pub center: Point,
    /// tubes `(a, b)` whose core passes through the point
    pub solutions: Vec<(u64, u64)>,
}

#[derive(Clone, Debug)]
pub struct RationalExample {
    pub params: SpacingParams,
    pub r: u64,
    pub window: FractionWindow,
    pub tubes: Vec<Tube>,
    pub fractions: Vec<(u64, u64)>,
    pub points: Vec<Case1Point>,
}

impl RationalExample {
    pub fn balls(&self) -> Vec<Ball> {
        self.points.iter().map(|p| Ball::from_parts(p.center.clone(), self.params.delta.clone())).collect()
    }

    /// Index of tube `(a, b)` in [`RationalExample::tubes`].
    pub fn tube_index(&self, a: u64, b: u64) -> usize {
        let x = as_u64(&self.params.x, "X").unwrap();
        (a * (x + 1) + b) as usize
    }

    pub fn min_solutions(&self) -> usize {
        self.points.iter().map(|p| p.solutions.len()).min().unwrap_or(0)
    }
}

/// The `(W + 1)(X + 1)` tubes from `(a/W, 0)` to `(b/X, 1)`.
pub fn case1_tubes(params: &SpacingParams) -> Result<Vec<Tube>> {
    let w = as_u64(&params.w, "W")? as i64;
    let x = as_u64(&params.x, "X")? as i64;
    let mut out = Vec::with_capacity(((w + 1) * (x + 1)) as usize);
    for a in 0..=w {
        for b in 0..=x {
            let u = rat(a, w);
            out.push(Tube::new(u.clone(), rat(b, x) - u, params.delta.clone())?);
        }
    }
    Ok(out)
}

pub fn build_case1(params: &SpacingParams, r: u64, window: &FractionWindow) -> Result<RationalExample> {
    let w = as_u64(&params.w, "W")?;
    let x = as_u64(&params.x, "X")?;
    let n = inverse_integer(&params.delta)?;
    if x % w != 0 {
        return Err(Error::param("the rational example needs W | X"));
    }
    if r < 2 || r > w {
        return Err(Error::param("the rational example needs 2 <= r <= W"));
    }
    if r * n <= w * x {
        return Err(Error::param("the rational example needs r > delta W X"));
    }
    let tubes = case1_tubes(params)?;
    let fractions = case1_fractions(w, x, r, window)?;
    let mut points = Vec::new();
    for &(p, q) in &fractions {
        for c in 0..=q * w {
            let center = Point::new(rat(c as i64, (q * w) as i64), rat(p as i64, q as i64));
            let solutions = case1_solutions(w, x, p, q, c);
            points.push(Case1Point { c, p, q, center, solutions });
        }
    }
    Ok(RationalExample { params: params.clone(), r, window: window.clone(), tubes, fractions, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::incident;

    #[test]
    fn fractions_small_case() {
        let s = case1_fractions(2, 4, 2, &FractionWindow::wide()).unwrap();
        for f in [(2, 3), (2, 5), (2, 7)] {
            assert!(s.contains(&f));
        }
        assert!(s.iter().all(|&(p, _)| p % 2 == 0));
    }

    #[test]
    fn solution_certificate() {
        // b + 3a = 4 with 0 <= a <= 2, 0 <= b <= 4
        let mut s = case1_solutions(2, 4, 2, 5, 4);
        s.sort();
        assert_eq!(s, vec![(0, 4), (1, 1)]);
    }

    #[test]
    fn points_lie_on_their_tubes() {
        let p = SpacingParams::from_ints(256, 4, 8).unwrap();
        let ex = build_case1(&p, 2, &FractionWindow::separated()).unwrap();
        assert_eq!(ex.fractions, vec![(2, 3)]);
        assert_eq!(ex.points.len(), 13);
        for pt in &ex.points {
            assert!(!pt.solutions.is_empty());
            let ball = Ball::from_parts(pt.center.clone(), p.delta.clone());
            for &(a, b) in &pt.solutions {
                let t = &ex.tubes[ex.tube_index(a, b)];
                let on_core = t.position() + t.direction() * &pt.center.y == pt.center.x;
                assert!(on_core);
                assert!(incident(&ball, t).unwrap());
            }
        }
    }

    #[test]
    fn hypotheses_checked() {
        let p = SpacingParams::from_ints(16, 4, 16).unwrap();
        // r must exceed delta W X = 4
        assert!(build_case1(&p, 3, &FractionWindow::wide()).is_err());
        let p = SpacingParams::from_ints(256, 3, 8).unwrap();
        assert!(build_case1(&p, 2, &FractionWindow::wide()).is_err());
    }
}
