//! Points, balls, tubes and the exact incidence predicate.
//!
//! A tube is stored in its own chart: position `u`, direction `v` with
//! `|v| <= 1`, core line `x = u + v y`, a rotation `rho_k` about `(1/2, 1/2)`
//! taking the chart to the plane, and a square clip window. The physical core
//! is the rotated line clipped to the window. A ball meets a tube when its
//! center lies within `2 delta` of that clipped core.

use crate::error::{Error, Result};
use crate::scalar::{int, rat, sq, to_f64, Scalar};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Absolute margin on squared distances below which the float filter defers
/// to exact arithmetic.
pub const FILTER_MARGIN: f64 = 1e-9;

/// Numerator of the distinctness constant for balls over `2^60`.
///
/// Two closed disks of radius `delta` whose centers are `t delta` apart share
/// exactly half their area when `t = 2 cos(theta)` with
/// `2 theta - sin(2 theta) = pi / 2`; `t = 0.80794550659903441868...`.
pub const BALL_DISTINCT_NUM: i64 = 931_497_749_108_499_974;

pub fn ball_distinct_factor() -> Scalar {
    Scalar::new(BALL_DISTINCT_NUM.into(), (num_bigint::BigInt::one() << 60u32).into())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn approx(&self) -> [f64; 2] {
        [to_f64(&self.x), to_f64(&self.y)]
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, s: &Scalar) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn dot(&self, o: &Point) -> Scalar {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn norm_sq(&self) -> Scalar {
        self.dot(self)
    }

    pub fn dist_sq(&self, o: &Point) -> Scalar {
        self.sub(o).norm_sq()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn approx(&self) -> [f64; 4] {
        let [ax, ay] = self.a.approx();
        let [bx, by] = self.b.approx();
        [ax, ay, bx, by]
    }
}

/// Exact squared distance from `p` to the closed segment `s`.
pub fn dist_point_segment_sq(p: &Point, s: &Segment) -> Scalar {
    let d = s.b.sub(&s.a);
    let w = p.sub(&s.a);
    let dd = d.norm_sq();
    if dd.is_zero() {
        return w.norm_sq();
    }
    let t = w.dot(&d);
    if !t.is_positive() {
        return w.norm_sq();
    }
    if t >= dd {
        return p.dist_sq(&s.b);
    }
    // |w|^2 - (w.d)^2 / |d|^2
    w.norm_sq() - &t * &t / dd
}

/// Float version of [`dist_point_segment_sq`] on `[ax, ay, bx, by]`.
#[inline]
pub fn dist_point_segment_sq_f64(px: f64, py: f64, s: &[f64; 4]) -> f64 {
    let (dx, dy) = (s[2] - s[0], s[3] - s[1]);
    let (wx, wy) = (px - s[0], py - s[1]);
    let dd = dx * dx + dy * dy;
    let t = wx * dx + wy * dy;
    if dd == 0.0 || t <= 0.0 {
        return wx * wx + wy * wy;
    }
    if t >= dd {
        let (ex, ey) = (px - s[2], py - s[3]);
        return ex * ex + ey * ey;
    }
    let (ex, ey) = (wx - dx * t / dd, wy - dy * t / dd);
    ex * ex + ey * ey
}

/// Float filter: `Some(answer)` when `d2` is clearly on one side of `thr2`.
#[inline]
pub fn filter_le(d2: f64, thr2: f64) -> Option<bool> {
    if d2 < thr2 - FILTER_MARGIN {
        Some(true)
    } else if d2 > thr2 + FILTER_MARGIN {
        Some(false)
    } else {
        None
    }
}

/// Axis-aligned square window `[lo, hi]^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClipWindow {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl ClipWindow {
    pub fn unit() -> Self {
        ClipWindow { lo: int(0), hi: int(1) }
    }

    /// Window used for tubes living in the dual plane.
    pub fn dual() -> Self {
        ClipWindow { lo: int(-2), hi: int(2) }
    }

    pub fn is_unit(&self) -> bool {
        self.lo.is_zero() && self.hi.is_one()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.lo <= p.x && p.x <= self.hi && self.lo <= p.y && p.y <= self.hi
    }

    /// Clips the line `a + t d` to the window. `None` when they miss.
    pub fn clip_line(&self, a: &Point, d: &Point) -> Option<Segment> {
        let mut lo: Option<Scalar> = None;
        let mut hi: Option<Scalar> = None;
        for (ai, di) in [(&a.x, &d.x), (&a.y, &d.y)] {
            if di.is_zero() {
                if ai < &self.lo || ai > &self.hi {
                    return None;
                }
                continue;
            }
            let mut t1 = (&self.lo - ai) / di;
            let mut t2 = (&self.hi - ai) / di;
            if t1 > t2 {
                std::mem::swap(&mut t1, &mut t2);
            }
            lo = Some(match lo {
                Some(l) if l > t1 => l,
                _ => t1,
            });
            hi = Some(match hi {
                Some(h) if h < t2 => h,
                _ => t2,
            });
        }
        let (lo, hi) = (lo?, hi?);
        if lo > hi {
            return None;
        }
        Some(Segment { a: a.add(&d.scale(&lo)), b: a.add(&d.scale(&hi)) })
    }
}

/// Exact rotation about `(1/2, 1/2)` with rational cosine and sine.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rotation {
    pub index: usize,
    pub count: usize,
    pub cos: Scalar,
    pub sin: Scalar,
}

impl Rotation {
    pub fn identity() -> Self {
        Rotation { index: 0, count: 1, cos: int(1), sin: int(0) }
    }

    pub fn new(index: usize, count: usize, cos: Scalar, sin: Scalar) -> Result<Self> {
        if !(sq(&cos) + sq(&sin)).is_one() {
            return Err(Error::param("rotation entries must satisfy cos^2 + sin^2 = 1"));
        }
        if index >= count {
            return Err(Error::param("rotation index out of range"));
        }
        Ok(Rotation { index, count, cos, sin })
    }

    pub fn is_identity(&self) -> bool {
        self.cos.is_one() && self.sin.is_zero()
    }

    pub fn apply_vec(&self, d: &Point) -> Point {
        Point::new(&self.cos * &d.x - &self.sin * &d.y, &self.sin * &d.x + &self.cos * &d.y)
    }

    pub fn inverse_vec(&self, d: &Point) -> Point {
        Point::new(&self.cos * &d.x + &self.sin * &d.y, -&self.sin * &d.x + &self.cos * &d.y)
    }

    pub fn apply(&self, p: &Point) -> Point {
        let c = center();
        c.add(&self.apply_vec(&p.sub(&c)))
    }

    pub fn inverse(&self, p: &Point) -> Point {
        let c = center();
        c.add(&self.inverse_vec(&p.sub(&c)))
    }
}

fn center() -> Point {
    Point::new(rat(1, 2), rat(1, 2))
}

/// Closed disk of radius `delta`.
#[derive(Clone, Debug)]
pub struct Ball {
    center: Point,
    radius: Scalar,
    approx: [f64; 2],
}

impl PartialEq for Ball {
    fn eq(&self, o: &Self) -> bool {
        self.center == o.center && self.radius == o.radius
    }
}
impl Eq for Ball {}

impl std::hash::Hash for Ball {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.center.hash(h);
        self.radius.hash(h);
    }
}

impl Ball {
    /// A ball whose center lies in `[-r, 1 + r]^2`.
    pub fn new(center: Point, radius: Scalar) -> Result<Self> {
        Self::new_in(center, radius, &ClipWindow::unit())
    }

    /// A ball whose center lies in the window enlarged by the radius.
    pub fn new_in(center: Point, radius: Scalar, window: &ClipWindow) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::param("ball radius must be positive"));
        }
        let lo = &window.lo - &radius;
        let hi = &window.hi + &radius;
        if center.x < lo || center.x > hi || center.y < lo || center.y > hi {
            return Err(Error::param(format!(
                "ball center ({}, {}) outside the admissible window",
                crate::scalar::format_scalar(&center.x),
                crate::scalar::format_scalar(&center.y)
            )));
        }
        Ok(Self::from_parts(center, radius))
    }

    pub(crate) fn from_parts(center: Point, radius: Scalar) -> Self {
        let approx = center.approx();
        Ball { center, radius, approx }
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> &Scalar {
        &self.radius
    }

    pub fn approx(&self) -> [f64; 2] {
        self.approx
    }

    /// Two balls are essentially distinct when their overlap is at most half
    /// of either one's area.
    pub fn essentially_distinct(&self, o: &Ball) -> Result<bool> {
        same_radius(&self.radius, &o.radius)?;
        let t = ball_distinct_factor();
        Ok(self.center.dist_sq(&o.center) >= sq(&(t * &self.radius)))
    }
}

/// A `delta`-tube described in its chart.
#[derive(Clone, Debug)]
pub struct Tube {
    position: Scalar,
    direction: Scalar,
    radius: Scalar,
    rotation: Rotation,
    clip: ClipWindow,
    segment: Segment,
    approx: [f64; 4],
}

impl PartialEq for Tube {
    fn eq(&self, o: &Self) -> bool {
        self.position == o.position
            && self.direction == o.direction
            && self.radius == o.radius
            && self.rotation == o.rotation
            && self.clip == o.clip
    }
}
impl Eq for Tube {}

impl Tube {
    /// Unrotated tube clipped to the unit square.
    pub fn new(position: Scalar, direction: Scalar, radius: Scalar) -> Result<Self> {
        Self::with_frame(position, direction, radius, Rotation::identity(), ClipWindow::unit())
    }

    pub fn with_frame(
        position: Scalar,
        direction: Scalar,
        radius: Scalar,
        rotation: Rotation,
        clip: ClipWindow,
    ) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::param("tube radius must be positive"));
        }
        if direction.abs() > int(1) {
            return Err(Error::param("tube direction must satisfy |v| <= 1"));
        }
        let a = rotation.apply(&Point::new(position.clone(), int(0)));
        let d = rotation.apply_vec(&Point::new(direction.clone(), int(1)));
        let segment = clip
            .clip_line(&a, &d)
            .ok_or_else(|| Error::param("tube core line misses its clip window"))?;
        let approx = segment.approx();
        Ok(Tube { position, direction, radius, rotation, clip, segment, approx })
    }

    pub fn position(&self) -> &Scalar {
        &self.position
    }

    pub fn direction(&self) -> &Scalar {
        &self.direction
    }

    pub fn radius(&self) -> &Scalar {
        &self.radius
    }

    pub fn rotation(&self) -> &Rotation {
        &self.rotation
    }

    pub fn clip(&self) -> &ClipWindow {
        &self.clip
    }

    /// Physical clipped core segment.
    pub fn segment(&self) -> &Segment {
        &self.segment
    }

    pub fn approx(&self) -> [f64; 4] {
        self.approx
    }

    /// Chart coordinates `(u, v)`.
    pub fn dual_point(&self) -> Point {
        Point::new(self.position.clone(), self.direction.clone())
    }

    /// Essential distinctness through the section-overlap surrogate.
    ///
    /// Tubes in different charts or windows are reported distinct.
    pub fn essentially_distinct(&self, o: &Tube) -> Result<bool> {
        same_radius(&self.radius, &o.radius)?;
        if self.rotation.index != o.rotation.index || self.clip != o.clip {
            return Ok(true);
        }
        let w = int(2) * &self.radius;
        let du = &self.position - &o.position;
        let dv = &self.direction - &o.direction;
        let overlap = section_overlap(&du, &dv, &w, &self.clip.lo, &self.clip.hi);
        let half = &w * (&self.clip.hi - &self.clip.lo) / int(2);
        Ok(overlap <= half)
    }
}

/// `int_{y0}^{y1} (w - |a + b y|)_+ dy`, exactly.
pub fn section_overlap(a: &Scalar, b: &Scalar, w: &Scalar, y0: &Scalar, y1: &Scalar) -> Scalar {
    let mut cuts = vec![y0.clone(), y1.clone()];
    if !b.is_zero() {
        for target in [-w.clone(), int(0), w.clone()] {
            let y = (target - a) / b;
            if &y > y0 && &y < y1 {
                cuts.push(y);
            }
        }
    }
    cuts.sort();
    let f = |y: &Scalar| {
        let h = w - (a + b * y).abs();
        if h.is_positive() {
            h
        } else {
            int(0)
        }
    };
    let mut total = int(0);
    for pair in cuts.windows(2) {
        let (l, r) = (&pair[0], &pair[1]);
        total += (f(l) + f(r)) * (r - l) / int(2);
    }
    total
}

fn same_radius(a: &Scalar, b: &Scalar) -> Result<()> {
    if a != b {
        return Err(Error::param("objects have different radii"));
    }
    Ok(())
}

/// Exact incidence: the ball center lies within `2 delta` of the tube core.
pub fn incident(b: &Ball, t: &Tube) -> Result<bool> {
    same_radius(&b.radius, &t.radius)?;
    Ok(incident_unchecked(b, t))
}

/// Exact incidence assuming equal radii.
#[inline]
pub fn incident_unchecked(b: &Ball, t: &Tube) -> bool {
    let r = to_f64(&b.radius) * 2.0;
    let d2 = dist_point_segment_sq_f64(b.approx[0], b.approx[1], &t.approx);
    match filter_le(d2, r * r) {
        Some(ans) => ans,
        None => incident_exact(b, t),
    }
}

/// Exact branch of the incidence test with no float filter.
pub fn incident_exact(b: &Ball, t: &Tube) -> bool {
    let thr = sq(&(int(2) * &b.radius));
    dist_point_segment_sq(&b.center, &t.segment).cmp(&thr) != Ordering::Greater
}

/// Either kind of object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Ball(Ball),
    Tube(Tube),
}

/// Essential distinctness for two objects of the same kind.
pub fn essentially_distinct(a: &Object, b: &Object) -> Result<bool> {
    match (a, b) {
        (Object::Ball(x), Object::Ball(y)) => x.essentially_distinct(y),
        (Object::Tube(x), Object::Tube(y)) => x.essentially_distinct(y),
        _ => Err(Error::param("cannot compare a ball with a tube")),
    }
}

/// Scale parameters `1 <= W <= X <= 1/delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpacingParams {
    pub delta: Scalar,
    pub w: Scalar,
    pub x: Scalar,
}

impl SpacingParams {
    pub fn new(delta: Scalar, w: Scalar, x: Scalar) -> Result<Self> {
        if !delta.is_positive() || delta > int(1) {
            return Err(Error::param("delta must lie in (0, 1]"));
        }
        let inv = int(1) / &delta;
        if w < int(1) || w > x || x > inv {
            return Err(Error::param("need 1 <= W <= X <= 1/delta"));
        }
        Ok(SpacingParams { delta, w, x })
    }

    pub fn from_ints(delta_inv: u64, w: u64, x: u64) -> Result<Self> {
        Self::new(rat(1, delta_inv as i64), int(w as i64), int(x as i64))
    }
}

/// Which axis of a grid cell carries the long side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum LongAxis {
    Horizontal,
    Vertical,
}

/// Axis-aligned rectangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rect {
    pub corner: Point,
    pub width: Scalar,
    pub height: Scalar,
    pub long_axis: LongAxis,
}

impl Rect {
    pub fn contains(&self, p: &Point) -> bool {
        self.corner.x <= p.x
            && p.x <= &self.corner.x + &self.width
            && self.corner.y <= p.y
            && p.y <= &self.corner.y + &self.height
    }
}

/// Lattice balls centered on `(delta/2) Z^2` inside `[0, 1]^2`.
pub fn lattice_balls(delta: &Scalar) -> Result<Vec<Ball>> {
    let n = crate::scalar::inverse_integer(delta)? as i64;
    let m = 2 * n;
    let mut out = Vec::with_capacity(((m + 1) * (m + 1)) as usize);
    for j in 0..=m {
        for i in 0..=m {
            out.push(Ball::from_parts(Point::new(rat(i, m), rat(j, m)), delta.clone()));
        }
    }
    Ok(out)
}
