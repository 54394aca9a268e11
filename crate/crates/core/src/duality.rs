//! Point-line duality between the physical plane and the `(u, v)` plane.
//!
//! A dual point `(u, v)` names the line `x = u + v y`. A physical point
//! `(x0, y0)` names the dual line `u = x0 - v y0`. The image of a ball is the
//! union of the lines named by its points.

use crate::error::{Error, Result};
use crate::geometry::{Ball, ClipWindow, Point, Rotation, SpacingParams, Tube};
use crate::incidence::{verify_ball_grid_spacing, GridOrientation, GridSpacingReport};
use crate::poly::Poly;
use crate::scalar::{int, rat, sq, Scalar};
use num_traits::{Signed, Zero};

/// Dual line `x - v y = u` of the dual point `(u, v)`, in the physical plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhysicalLine {
    pub u: Scalar,
    pub v: Scalar,
}

impl PhysicalLine {
    pub fn contains(&self, p: &Point) -> bool {
        &p.x - &self.v * &p.y == self.u
    }
}

pub fn l1_of_point(q: &Point) -> PhysicalLine {
    PhysicalLine { u: q.x.clone(), v: q.y.clone() }
}

/// Dual line `u + y0 v = x0` of the physical point `(x0, y0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualLine {
    pub x0: Scalar,
    pub y0: Scalar,
}

impl DualLine {
    pub fn contains(&self, q: &Point) -> bool {
        &q.x + &self.y0 * &q.y == self.x0
    }
}

pub fn l2_of_point(p: &Point) -> DualLine {
    DualLine { x0: p.x.clone(), y0: p.y.clone() }
}

/// Union of the physical lines named by the points of a dual ball, clipped
/// to `[-2, 2]^2`.
#[derive(Clone, Debug)]
pub struct L1Image {
    pub center: Point,
    pub radius: Scalar,
}

impl L1Image {
    /// `p` lies on a line named by some point of the dual ball.
    pub fn contains(&self, p: &Point) -> bool {
        if !ClipWindow::dual().contains(p) {
            return false;
        }
        let g = &p.x - &self.center.x - &self.center.y * &p.y;
        sq(&g) <= sq(&self.radius) * (int(1) + sq(&p.y))
    }
}

pub fn l1_of_ball(b: &Ball) -> L1Image {
    L1Image { center: b.center().clone(), radius: b.radius().clone() }
}

/// The dual tube of a physical ball: position `x0`, direction `-y0`.
pub fn l2_of_ball(b: &Ball) -> Result<Tube> {
    let c = b.center();
    Tube::with_frame(c.x.clone(), -c.y.clone(), b.radius().clone(), Rotation::identity(), ClipWindow::dual())
}

/// Quadratic form `a x^2 + b x y + c y^2 + d x + e y + f`.
#[derive(Clone, Debug)]
struct Quadratic {
    a: Scalar,
    b: Scalar,
    c: Scalar,
    d: Scalar,
    e: Scalar,
    f: Scalar,
}

impl Quadratic {
    /// `(x - p - q y)^2 - r^2 (1 + y^2)`.
    fn slab(p: &Scalar, q: &Scalar, r: &Scalar) -> Self {
        let r2 = sq(r);
        Quadratic {
            a: int(1),
            b: int(-2) * q,
            c: sq(q) - &r2,
            d: int(-2) * p,
            e: int(2) * p * q,
            f: sq(p) - r2,
        }
    }

    fn eval(&self, x: &Scalar, y: &Scalar) -> Scalar {
        &self.a * x * x + &self.b * x * y + &self.c * y * y + &self.d * x + &self.e * y + &self.f
    }

    /// Whether the form takes a value `<= 0` on the closed disk. The form is
    /// indefinite, so its minimum over the disk lies on the boundary circle.
    fn nonpositive_on_disk(&self, center: &Point, r: &Scalar) -> bool {
        let (cx, cy) = (&center.x, &center.y);
        let q0 = self.eval(cx, cy);
        if !q0.is_positive() {
            return true;
        }
        let gx = int(2) * &self.a * cx + &self.b * cy + &self.d;
        let gy = &self.b * cx + int(2) * &self.c * cy + &self.e;
        let m = self.a.abs() + self.b.abs() + self.c.abs();
        let lower = &q0 - m * sq(r);
        if lower.is_positive() && sq(&lower) > (sq(&gx) + sq(&gy)) * sq(r) {
            return false;
        }
        self.nonpositive_on_circle(center, r)
    }

    fn nonpositive_on_circle(&self, center: &Point, r: &Scalar) -> bool {
        let (cx, cy) = (&center.x, &center.y);
        if !self.eval(&(cx - r), cy).is_positive() {
            return true;
        }
        let s = Poly::new(vec![int(1), int(0), int(1)]);
        let x = Poly::new(vec![cx + r, int(0), cx - r]);
        let y = Poly::new(vec![cy.clone(), int(2) * r, cy.clone()]);
        let p = x
            .mul(&x)
            .scale(&self.a)
            .add(&x.mul(&y).scale(&self.b))
            .add(&y.mul(&y).scale(&self.c))
            .add(&x.mul(&s).scale(&self.d))
            .add(&y.mul(&s).scale(&self.e))
            .add(&s.mul(&s).scale(&self.f));
        p.has_nonpositive_value()
    }
}

/// `b1` meets the image of the dual ball `b2`, decided in the physical plane.
pub fn meets_l1_image(b1: &Ball, b2: &Ball) -> bool {
    let w = b2.center();
    Quadratic::slab(&w.x, &w.y, b2.radius()).nonpositive_on_disk(b1.center(), b1.radius())
}

/// The dual ball `b2` meets the image of `b1`, decided in the dual plane.
pub fn meets_l2_image(b2: &Ball, b1: &Ball) -> bool {
    // (u - x0 + v y0)^2 - r^2 (1 + v^2), as a form in (u, v)
    let c = b1.center();
    Quadratic::slab(&c.x, &-&c.y, b1.radius()).nonpositive_on_disk(b2.center(), b2.radius())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DualityCheck {
    pub physical: bool,
    pub dual: bool,
}

impl DualityCheck {
    pub fn agrees(&self) -> bool {
        self.physical == self.dual
    }
}

/// Decides `B1 ∩ l1(B2)` and `B2 ∩ l2(B1)` independently.
pub fn incidence_preserved(b1: &Ball, b2: &Ball) -> Result<DualityCheck> {
    if b1.radius() != b2.radius() {
        return Err(Error::param("balls have different radii"));
    }
    Ok(DualityCheck { physical: meets_l1_image(b1, b2), dual: meets_l2_image(b2, b1) })
}

/// Maps tubes with `|v| <= 1` to dual balls and checks grid spacing.
pub fn transfer_spacing(
    tubes: &[Tube],
    params: &SpacingParams,
    orientation: GridOrientation,
) -> Result<(Vec<Ball>, GridSpacingReport)> {
    let mut balls = Vec::with_capacity(tubes.len());
    for t in tubes {
        if !t.rotation().is_identity() || !t.clip().is_unit() {
            return Err(Error::param("transfer expects unrotated tubes in the unit square"));
        }
        if t.radius() != &params.delta {
            return Err(Error::param("tube radius differs from delta"));
        }
        balls.push(Ball::new_in(t.dual_point(), params.delta.clone(), &ClipWindow::dual())?);
    }
    let report = verify_ball_grid_spacing(&balls, params, orientation)?;
    Ok((balls, report))
}

/// `K` exact rotations about `(1/2, 1/2)` approximating angles `2 pi k / K`.
#[derive(Clone, Debug)]
pub struct RotationCover {
    rotations: Vec<Rotation>,
}

/// Denominator exponent for the half-angle tangent.
const TAN_BITS: i32 = 24;

impl RotationCover {
    pub fn new(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::param("rotation cover needs at least one rotation"));
        }
        let den = 1i64 << TAN_BITS;
        let mut rotations = Vec::with_capacity(count);
        for k in 0..count {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            let half_turns = (theta / std::f64::consts::PI).round();
            let phi = theta - half_turns * std::f64::consts::PI;
            let t = rat(((phi / 2.0).tan() * den as f64).round() as i64, den);
            let s = int(1) + sq(&t);
            let (mut c, mut si) = ((int(1) - sq(&t)) / &s, int(2) * &t / &s);
            if half_turns as i64 % 2 != 0 {
                c = -c;
                si = -si;
            }
            rotations.push(Rotation::new(k, count, c, si)?);
        }
        Ok(RotationCover { rotations })
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    pub fn rotation(&self, k: usize) -> &Rotation {
        &self.rotations[k]
    }

    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }
}

/// Splits tubes by the first rotation whose chart sees them with `|v| <= 1`.
/// Each output tube is the same physical tube expressed in that chart.
pub fn rotation_partition(tubes: &[Tube], cover: &RotationCover) -> Result<Vec<Vec<Tube>>> {
    let mut out = vec![Vec::new(); cover.len()];
    for t in tubes {
        let rot = t.rotation();
        let a = rot.apply(&Point::new(t.position().clone(), int(0)));
        let d = rot.apply_vec(&Point::new(t.direction().clone(), int(1)));
        let mut placed = false;
        for (k, r) in cover.rotations().iter().enumerate() {
            let dk = r.inverse_vec(&d);
            if dk.y.is_zero() || dk.x.abs() > dk.y.abs() {
                continue;
            }
            let v = &dk.x / &dk.y;
            let ak = r.inverse(&a);
            let u = &ak.x - &v * &ak.y;
            out[k].push(Tube::with_frame(u, v, t.radius().clone(), r.clone(), ClipWindow::unit())?);
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::param("rotation cover leaves a direction uncovered"));
        }
    }
    Ok(out)
}
