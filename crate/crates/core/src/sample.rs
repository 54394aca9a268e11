//! Seeded random instances. All generators use `ChaCha8Rng`, so a seed
//! reproduces the same instance on every platform.

use crate::error::Result;
use crate::geometry::{Ball, Point, SpacingParams, Tube};
use crate::scalar::{as_u64, inverse_integer, rat};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Balls centered on the `(delta/4)`-grid of `[0, 1]^2`.
pub fn random_balls(rng: &mut ChaCha8Rng, delta_inv: u64, count: usize) -> Vec<Ball> {
    let m = 4 * delta_inv as i64;
    let d = rat(1, delta_inv as i64);
    (0..count)
        .map(|_| Ball::new(Point::new(rat(rng.gen_range(0..=m), m), rat(rng.gen_range(0..=m), m)), d.clone()).unwrap())
        .collect()
}

/// Unrotated tubes with `u` in `[0, 1]` and `|v| <= 1` on a `(delta/4)`-grid,
/// rejecting cores that miss the unit square.
pub fn random_tubes(rng: &mut ChaCha8Rng, delta_inv: u64, count: usize) -> Vec<Tube> {
    let m = 4 * delta_inv as i64;
    let d = rat(1, delta_inv as i64);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = rat(rng.gen_range(0..=m), m);
        let v = rat(rng.gen_range(-m..=m), m);
        if let Ok(t) = Tube::new(u, v, d.clone()) {
            out.push(t);
        }
    }
    out
}

/// At most one ball per `W^-1 x X^-1` cell, each cell kept with
/// probability `fill`. Centers sit strictly inside their cell on a
/// `1/16`-subgrid.
pub fn random_spaced_balls(rng: &mut ChaCha8Rng, params: &SpacingParams, fill: f64) -> Result<Vec<Ball>> {
    let w = as_u64(&params.w, "W")? as i64;
    let x = as_u64(&params.x, "X")? as i64;
    inverse_integer(&params.delta)?;
    let mut out = Vec::new();
    for i in 0..w {
        for j in 0..x {
            if rng.gen_bool(fill) {
                let (s, t) = (rng.gen_range(1..16), rng.gen_range(1..16));
                let c = Point::new(rat(16 * i + s, 16 * w), rat(16 * j + t, 16 * x));
                out.push(Ball::new(c, params.delta.clone())?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{verify_ball_grid_spacing, GridOrientation};

    #[test]
    fn deterministic() {
        let a = random_balls(&mut rng(7), 64, 10);
        let b = random_balls(&mut rng(7), 64, 10);
        assert_eq!(a, b);
        assert_eq!(random_tubes(&mut rng(3), 64, 5), random_tubes(&mut rng(3), 64, 5));
    }

    #[test]
    fn spaced_balls_pass_the_grid_check() {
        let p = SpacingParams::from_ints(256, 4, 16).unwrap();
        let balls = random_spaced_balls(&mut rng(1), &p, 0.7).unwrap();
        assert!(verify_ball_grid_spacing(&balls, &p, GridOrientation::DirectionSeparated).unwrap().pass);
    }
}
