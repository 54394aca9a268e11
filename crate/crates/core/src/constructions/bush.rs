//! Bushes of `X` tubes at the apexes `(a/W, 0)`.

use crate::error::{Error, Result};
use crate::geometry::{Point, SpacingParams, Tube};
use crate::scalar::{as_u64, int, rat};

#[derive(Clone, Debug)]
pub struct BushExample {
    pub params: SpacingParams,
    pub r: u64,
    pub apexes: Vec<Point>,
    /// tubes grouped by apex, `X` per apex
    pub tubes: Vec<Tube>,
}

/// Directions `j/X - 1/2` for `0 <= j < X` at every apex.
pub fn build_case2(params: &SpacingParams, r: u64) -> Result<BushExample> {
    let w = as_u64(&params.w, "W")?;
    let x = as_u64(&params.x, "X")?;
    if r <= w || r > x {
        return Err(Error::param("the bush example needs W < r <= X"));
    }
    // (X/r) delta <= 1/W
    if int(x as i64) * &params.delta * int(w as i64) > int(r as i64) {
        return Err(Error::param("the bush example needs (X/r) delta <= 1/W"));
    }
    let mut apexes = Vec::new();
    let mut tubes = Vec::new();
    for a in 0..=w as i64 {
        let u = rat(a, w as i64);
        apexes.push(Point::new(u.clone(), int(0)));
        for j in 0..x as i64 {
            tubes.push(Tube::new(u.clone(), rat(j, x as i64) - rat(1, 2), params.delta.clone())?);
        }
    }
    Ok(BushExample { params: params.clone(), r, apexes, tubes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bush_sizes() {
        let p = SpacingParams::from_ints(256, 1, 8).unwrap();
        let b = build_case2(&p, 4).unwrap();
        assert_eq!(b.apexes.len(), 2);
        assert_eq!(b.tubes.len(), 16);
        assert!(build_case2(&p, 1).is_err());
    }
}
