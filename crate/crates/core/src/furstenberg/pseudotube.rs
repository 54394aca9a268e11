use crate::error::{Error, Result};
use crate::geometry::Tube;
use crate::scalar::{ceil_i64, int, inverse_integer, rat, Scalar};
use num_traits::Signed;
use std::collections::{BTreeMap, HashSet};

/// A lattice `delta`-square `(column, row)`.
pub type Square = (i64, i64);

/// One square per row along a steep tube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoTube {
    pub n: u64,
    /// column of the chosen square in each row
    pub cols: Vec<i64>,
}

impl PseudoTube {
    pub fn contains(&self, s: Square) -> bool {
        s.1 >= 0 && (s.1 as u64) < self.n && self.cols[s.1 as usize] == s.0
    }

    pub fn square(&self, row: usize) -> Square {
        (self.cols[row], row as i64)
    }
}

/// Rasterizes the core line `x = u + v y`, `|v| <= 1/10`, choosing in every
/// row the leftmost closed square the line meets.
pub fn rasterize(tube: &Tube, delta: &Scalar) -> Result<PseudoTube> {
    if !tube.rotation().is_identity() {
        return Err(Error::param("pseudo-tubes are built in the identity chart"));
    }
    if tube.direction().abs() > rat(1, 10) {
        return Err(Error::param("pseudo-tubes need |v| <= 1/10"));
    }
    let n = inverse_integer(delta)?;
    let (u, v) = (tube.position(), tube.direction());
    let cols = (0..n as i64)
        .map(|j| {
            let lo = u + v * rat(j, n as i64);
            let hi = u + v * rat(j + 1, n as i64);
            let xmin = if lo < hi { lo } else { hi };
            // leftmost k with (k + 1) delta >= xmin
            ceil_i64(&(xmin * int(n as i64))) - 1
        })
        .collect();
    Ok(PseudoTube { n, cols })
}

/// Squares of `Y'(T)` in row order, their gaps and dyadic classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GapProfile {
    pub squares: Vec<Square>,
    /// `d_i / delta`: rows strictly between consecutive squares
    pub gaps: Vec<u64>,
    /// class `k >= 0` holds `2^k <= d_i/delta < 2^(k+1)`; class `-1` holds `d_i = 0`
    pub classes: BTreeMap<i32, Vec<usize>>,
}

pub fn gap_class(gap: u64) -> i32 {
    if gap == 0 {
        -1
    } else {
        63 - gap.leading_zeros() as i32
    }
}

/// Class size `d / delta`.
pub fn class_width(k: i32) -> f64 {
    if k < 0 {
        0.5
    } else {
        2f64.powi(k)
    }
}

pub fn gap_profile(pt: &PseudoTube, squares: &HashSet<Square>) -> GapProfile {
    let ys: Vec<Square> = (0..pt.n as usize).map(|r| pt.square(r)).filter(|s| squares.contains(s)).collect();
    if ys.len() <= 1 {
        return GapProfile { squares: ys, ..Default::default() };
    }
    let gaps: Vec<u64> = ys.windows(2).map(|w| (w[1].1 - w[0].1 - 1) as u64).collect();
    let mut classes: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, &g) in gaps.iter().enumerate() {
        classes.entry(gap_class(g)).or_default().push(i);
    }
    GapProfile { squares: ys, gaps, classes }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapSelection {
    pub class: i32,
    pub size: usize,
    /// `|I_d| d log(1/delta)`
    pub constant: f64,
    /// some class below `4 delta^alpha` is nonempty
    pub satisfied: bool,
}

/// Dyadic class `d <= 4 delta^alpha` maximizing `d |I_d|`.
pub fn select_typical_gap(profile: &GapProfile, alpha: f64, n: u64) -> GapSelection {
    let cap = 4.0 * (n as f64).powf(1.0 - alpha);
    let log = (n as f64).ln();
    let mut best: Option<(f64, i32, usize)> = None;
    let mut fallback: Option<(f64, i32, usize)> = None;
    for (&k, idx) in &profile.classes {
        let score = class_width(k) * idx.len() as f64;
        let slot = if class_width(k) <= cap { &mut best } else { &mut fallback };
        if slot.is_none_or(|(s, _, _)| score > s) {
            *slot = Some((score, k, idx.len()));
        }
    }
    match (best, fallback) {
        (Some((s, k, size)), _) => GapSelection { class: k, size, constant: s / n as f64 * log, satisfied: true },
        (None, Some((s, k, size))) => GapSelection { class: k, size, constant: s / n as f64 * log, satisfied: false },
        (None, None) => GapSelection { class: -1, size: 0, constant: 0.0, satisfied: false },
    }
}

/// Groups tubes by selected class and returns the largest group; ties go to
/// the smaller class.
pub fn typical_family(selections: &[Option<GapSelection>]) -> (i32, Vec<usize>) {
    let mut groups: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, s) in selections.iter().enumerate() {
        if let Some(s) = s.as_ref().filter(|s| s.satisfied) {
            groups.entry(s.class).or_default().push(i);
        }
    }
    let mut out = (-1, Vec::new());
    for (k, g) in groups {
        if g.len() > out.1.len() {
            out = (k, g);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tube(u: Scalar, v: Scalar, d: &Scalar) -> Tube {
        Tube::new(u, v, d.clone()).unwrap()
    }

    #[test]
    fn vertical_lines() {
        let d = rat(1, 16);
        let mid = rasterize(&tube(rat(7, 32), int(0), &d), &d).unwrap();
        assert!(mid.cols.iter().all(|&c| c == 3));
        let edge = rasterize(&tube(rat(4, 16), int(0), &d), &d).unwrap();
        assert!(edge.cols.iter().all(|&c| c == 3));
    }

    #[test]
    fn slanted_line_matches_scan() {
        let d = rat(1, 4);
        let (u, v) = (rat(3, 10), rat(1, 20));
        let pt = rasterize(&tube(u.clone(), v.clone(), &d), &d).unwrap();
        for j in 0..4i64 {
            let (lo, hi) = (&u + &v * rat(j, 4), &u + &v * rat(j + 1, 4));
            let hit: Vec<i64> = (0..4).filter(|&k| rat(k, 4) <= hi && rat(k + 1, 4) >= lo).collect();
            assert_eq!(pt.cols[j as usize], hit[0]);
        }
    }

    #[test]
    fn too_shallow() {
        let d = rat(1, 16);
        assert!(rasterize(&tube(rat(1, 2), rat(1, 5), &d), &d).is_err());
    }

    #[test]
    fn profile_rows_0_4_8() {
        let d = rat(1, 16);
        let pt = rasterize(&tube(rat(1, 32), int(0), &d), &d).unwrap();
        let sq: HashSet<Square> = [(0, 0), (0, 4), (0, 8), (5, 5)].into_iter().collect();
        let p = gap_profile(&pt, &sq);
        assert_eq!(p.gaps, vec![3, 3]);
        assert_eq!(p.classes.get(&1), Some(&vec![0, 1]));
        let adj: HashSet<Square> = (0..4).map(|r| (0, r)).collect();
        let p = gap_profile(&pt, &adj);
        assert_eq!(p.classes.get(&-1).map(|v| v.len()), Some(3));
    }
}
