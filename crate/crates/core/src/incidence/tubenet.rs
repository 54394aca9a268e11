use super::common_radius;
use crate::error::{Error, Result};
use crate::geometry::{
    dist_point_segment_sq_f64, filter_le, incident_exact, section_overlap, Ball, ClipWindow, Rotation, Tube,
};
use crate::scalar::{int, rat, to_f64, Scalar};
use num_traits::One;
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Index of a tube inside a [`TubeNet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NetTubeId(pub u32);

/// Greedily thinned net of tubes covering every direction.
///
/// Candidates are `(u, v) = (i s, j s)` in two charts: the identity with
/// `|v| <= 1` and the quarter turn with `|v| < 1`. They are scanned in
/// lexicographic order and kept when no kept candidate overlaps them by more
/// than half, measured by the section overlap.
#[derive(Debug)]
pub struct TubeNet {
    delta: Scalar,
    spacing: Scalar,
    m: i64,
    d: f64,
    s: f64,
    /// per chart, `(2m + 1) x (3m + 1)` grid of ids or `-1`
    index: [Vec<i32>; 2],
    ids: Vec<(u8, i32, i32)>,
}

fn quarter_turn() -> Rotation {
    Rotation::new(1, 4, int(0), int(1)).expect("exact quarter turn")
}

impl TubeNet {
    pub fn new(delta: &Scalar, spacing: &Scalar) -> Result<Self> {
        if spacing > &(delta / int(2)) {
            return Err(Error::param("net spacing must be at most delta/2"));
        }
        if !spacing.numer().is_one() {
            return Err(Error::param("net spacing must be 1/m for an integer m"));
        }
        let m: i64 = spacing
            .denom()
            .try_into()
            .map_err(|_| Error::param("net spacing too fine"))?;
        let conflicts = conflict_offsets(delta, spacing);
        let (w, h) = ((3 * m + 1) as usize, (2 * m + 1) as usize);
        let mut index = [vec![-1i32; w * h], vec![-1i32; w * h]];
        let mut ids = Vec::new();
        for chart in 0..2u8 {
            let idx = &mut index[chart as usize];
            for jv in 0..h as i64 {
                let iv = jv - m;
                if chart == 1 && iv.abs() == m {
                    continue;
                }
                // the core meets the unit square iff -max(v,0) <= u <= 1 - min(v,0)
                let lo = -iv.max(0);
                let hi = m - iv.min(0);
                for iu in lo..=hi {
                    let ju = iu + m;
                    let clash = conflicts.iter().any(|&(a, b)| {
                        let (x, y) = (ju + a, jv + b);
                        x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h && idx[y as usize * w + x as usize] >= 0
                    });
                    if !clash {
                        idx[jv as usize * w + ju as usize] = ids.len() as i32;
                        ids.push((chart, iu as i32, iv as i32));
                    }
                }
            }
        }
        Ok(TubeNet { delta: delta.clone(), spacing: spacing.clone(), m, d: to_f64(delta), s: 1.0 / m as f64, index, ids })
    }

    /// Net for `(delta, spacing)`, built once per process.
    pub fn shared(delta: &Scalar, spacing: &Scalar) -> Result<Arc<TubeNet>> {
        static CACHE: OnceLock<Mutex<HashMap<(Scalar, Scalar), Arc<TubeNet>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (delta.clone(), spacing.clone());
        if let Some(n) = cache.lock().unwrap().get(&key) {
            return Ok(n.clone());
        }
        let net = Arc::new(TubeNet::new(delta, spacing)?);
        cache.lock().unwrap().insert(key, net.clone());
        Ok(net)
    }

    pub fn delta(&self) -> &Scalar {
        &self.delta
    }

    pub fn spacing(&self) -> &Scalar {
        &self.spacing
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn tube(&self, id: NetTubeId) -> Tube {
        let (chart, iu, iv) = self.ids[id.0 as usize];
        let (u, v) = (rat(iu as i64, self.m), rat(iv as i64, self.m));
        let rot = if chart == 0 { Rotation::identity() } else { quarter_turn() };
        Tube::with_frame(u, v, self.delta.clone(), rot, ClipWindow::unit()).expect("net tubes meet the square")
    }

    fn segment_f64(&self, chart: u8, iu: i32, iv: i32) -> [f64; 4] {
        let (u, v) = (iu as f64 * self.s, iv as f64 * self.s);
        let (mut y0, mut y1) = (0.0f64, 1.0f64);
        if iv != 0 {
            let (mut a, mut b) = (-u / v, (1.0 - u) / v);
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            y0 = y0.max(a);
            y1 = y1.min(b);
        }
        let (p, q) = ((u + v * y0, y0), (u + v * y1, y1));
        if chart == 0 {
            [p.0, p.1, q.0, q.1]
        } else {
            [1.0 - p.1, p.0, 1.0 - q.1, q.0]
        }
    }

    /// Number of balls meeting each net tube.
    pub fn ball_counts(&self, balls: &[Ball]) -> Result<Vec<u32>> {
        if let Some(r) = common_radius(balls, &[])? {
            if r != self.delta {
                return Err(Error::param("ball radius differs from the net's delta"));
            }
        }
        let n = self.ids.len();
        let counts = balls
            .par_chunks(64)
            .map(|chunk| {
                let mut c = vec![0u32; n];
                for b in chunk {
                    self.visit_ball(b, |id| c[id as usize] += 1);
                }
                c
            })
            .reduce(
                || vec![0u32; n],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        Ok(counts)
    }

    /// Calls `f` with the id of every net tube meeting `b`.
    pub fn visit_ball(&self, b: &Ball, mut f: impl FnMut(u32)) {
        let [cx, cy] = b.approx();
        let thr2 = 4.0 * self.d * self.d;
        let (w, m) = ((3 * self.m + 1) as usize, self.m);
        for chart in 0..2u8 {
            let (qx, qy) = if chart == 0 { (cx, cy) } else { (cy, 1.0 - cx) };
            let idx = &self.index[chart as usize];
            for iv in -m..=m {
                let v = iv as f64 * self.s;
                let c0 = qx - v * qy;
                let reach = 2.0 * self.d * (1.0 + v * v).sqrt() + 1e-9;
                let lo = (((c0 - reach) / self.s).ceil() as i64).max(-m);
                let hi = (((c0 + reach) / self.s).floor() as i64).min(2 * m);
                let row = (iv + m) as usize * w;
                for iu in lo..=hi {
                    let id = idx[row + (iu + m) as usize];
                    if id < 0 {
                        continue;
                    }
                    let seg = self.segment_f64(chart, iu as i32, iv as i32);
                    let hit = match filter_le(dist_point_segment_sq_f64(cx, cy, &seg), thr2) {
                        Some(a) => a,
                        None => incident_exact(b, &self.tube(NetTubeId(id as u32))),
                    };
                    if hit {
                        f(id as u32);
                    }
                }
            }
        }
    }

    pub fn rich_tubes(self: &Arc<Self>, balls: &[Ball], r: u32) -> Result<RichTubeSet> {
        if r < 1 {
            return Err(Error::param("richness threshold must be at least 1"));
        }
        let counts = self.ball_counts(balls)?;
        let mut members = Vec::new();
        let mut kept = Vec::new();
        for (i, &c) in counts.iter().enumerate() {
            if c >= r {
                members.push(NetTubeId(i as u32));
                kept.push(c);
            }
        }
        Ok(RichTubeSet { net: self.clone(), r, members, counts: kept })
    }
}

/// Offsets `(du, dv)` in net units at which two candidates overlap by more
/// than half.
fn conflict_offsets(delta: &Scalar, spacing: &Scalar) -> Vec<(i64, i64)> {
    let w = int(2) * delta;
    let k = crate::scalar::ceil_i64(&(int(8) * delta / spacing)) + 2;
    let mut out = Vec::new();
    for b in -k..=k {
        for a in -k..=k {
            if a == 0 && b == 0 {
                continue;
            }
            let o = section_overlap(&(spacing * int(a)), &(spacing * int(b)), &w, &int(0), &int(1));
            if o > *delta {
                out.push((a, b));
            }
        }
    }
    out
}

/// Net tubes meeting at least `r` balls.
#[derive(Clone, Debug)]
pub struct RichTubeSet {
    pub net: Arc<TubeNet>,
    pub r: u32,
    pub members: Vec<NetTubeId>,
    pub counts: Vec<u32>,
}

impl RichTubeSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn tubes(&self) -> Vec<Tube> {
        self.members.par_iter().map(|&id| self.net.tube(id)).collect()
    }

    /// `sum_T n_T (n_T - 1)` over the members.
    pub fn ordered_pairs(&self) -> u64 {
        self.counts.iter().map(|&n| n as u64 * (n as u64 - 1)).sum()
    }
}

/// Rich tubes over a net of the given spacing.
pub fn rich_tubes(balls: &[Ball], r: u32, net_spacing: &Scalar) -> Result<RichTubeSet> {
    let delta = common_radius(balls, &[])?.ok_or_else(|| Error::param("no balls given"))?;
    TubeNet::shared(&delta, net_spacing)?.rich_tubes(balls, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{incident, lattice_balls, Point};

    #[test]
    fn net_counts_match_exact_incidence() {
        let d = rat(1, 16);
        let net = TubeNet::new(&d, &rat(1, 32)).unwrap();
        let balls: Vec<Ball> = lattice_balls(&d).unwrap().into_iter().step_by(37).collect();
        let counts = net.ball_counts(&balls).unwrap();
        for id in (0..net.len()).step_by(17) {
            let t = net.tube(NetTubeId(id as u32));
            let exact = balls.iter().filter(|b| incident(b, &t).unwrap()).count() as u32;
            assert_eq!(counts[id], exact, "tube {id}");
        }
    }

    #[test]
    fn net_is_essentially_distinct() {
        let d = rat(1, 8);
        let net = TubeNet::new(&d, &rat(1, 16)).unwrap();
        let tubes: Vec<Tube> = (0..net.len()).map(|i| net.tube(NetTubeId(i as u32))).collect();
        for (i, a) in tubes.iter().enumerate() {
            for b in &tubes[i + 1..] {
                assert!(a.essentially_distinct(b).unwrap());
            }
        }
    }

    #[test]
    fn spacing_too_coarse() {
        assert!(TubeNet::new(&rat(1, 16), &rat(1, 16)).is_err());
    }

    #[test]
    fn vertical_rich_tube() {
        let d = rat(1, 32);
        let balls: Vec<Ball> = (0..=8)
            .map(|j| Ball::new(Point::new(rat(1, 2), rat(j, 8)), d.clone()).unwrap())
            .collect();
        let rich = rich_tubes(&balls, 9, &rat(1, 64)).unwrap();
        assert!(!rich.is_empty());
        for t in rich.tubes() {
            assert!(balls.iter().all(|b| incident(b, &t).unwrap()));
        }
    }
}
