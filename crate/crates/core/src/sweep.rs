//! Parameter sweeps comparing measured counts with the theorem bounds.

use crate::constructions::{build_case1, build_furst_sqrt2, FractionWindow};
use crate::duality::transfer_spacing;
use crate::error::{Error, Result};
use crate::furstenberg::theorem_target;
use crate::geometry::{SpacingParams, Tube};
use crate::incidence::{rich_balls, rich_tubes, verify_ball_grid_spacing, verify_tube_spacing, GridOrientation};
use crate::sample::{random_spaced_balls, rng};
use crate::scalar::{format_scalar, inverse_integer, rat, to_f64, Scalar};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    /// rich balls of direction-separated tube families
    Main2,
    /// rich balls of position-separated tube families
    Main3,
    /// rich tubes of grid-spaced balls
    Main,
    /// ball counts of the irrational-translation Furstenberg family
    Furstenberg,
}

impl FromStr for SweepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim_start_matches("theorem-") {
            "main2" => Ok(SweepKind::Main2),
            "main3" => Ok(SweepKind::Main3),
            "main" => Ok(SweepKind::Main),
            "furstenberg" => Ok(SweepKind::Furstenberg),
            other => Err(Error::param(format!("unknown sweep {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepGrid {
    pub deltas: Vec<Scalar>,
    pub ws: Vec<u64>,
    pub xs: Vec<u64>,
    /// empty selects the smallest admissible `r` per cell
    pub rs: Vec<u32>,
    pub alphas: Vec<Scalar>,
    pub eps: Scalar,
    pub seed: u64,
    /// random instances per cell for the `main` sweep
    pub samples: usize,
    pub fill: f64,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            deltas: vec![rat(1, 64), rat(1, 128), rat(1, 256)],
            ws: vec![2, 4],
            xs: vec![8, 16],
            rs: Vec::new(),
            alphas: vec![rat(3, 10), rat(1, 2), rat(7, 10)],
            eps: rat(1, 10),
            seed: 1,
            samples: 4,
            fill: 0.8,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SweepRow {
    pub params: String,
    pub delta_inv: u64,
    pub measured: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SweepReport {
    pub kind: SweepKind,
    pub rows: Vec<SweepRow>,
    pub skipped: Vec<String>,
    /// cells whose input failed its spacing condition; no bound is checked there
    pub spacing_failures: Vec<String>,
    /// geometric mean of the positive ratios
    pub fitted: f64,
    /// max / min over the positive ratios
    pub spread: f64,
    /// per-delta mean ratio increases with `1/delta` faster than `delta^-eps`
    pub drift: bool,
}

impl SweepReport {
    fn finish(kind: SweepKind, rows: Vec<SweepRow>, skipped: Vec<String>, spacing_failures: Vec<String>, eps: f64) -> Self {
        let pos: Vec<f64> = rows.iter().map(|r| r.ratio).filter(|r| *r > 0.0 && r.is_finite()).collect();
        let fitted = if pos.is_empty() { 0.0 } else { (pos.iter().map(|r| r.ln()).sum::<f64>() / pos.len() as f64).exp() };
        let spread = if pos.is_empty() {
            f64::INFINITY
        } else {
            pos.iter().copied().fold(0.0, f64::max) / pos.iter().copied().fold(f64::INFINITY, f64::min)
        };
        let mut per: Vec<(u64, f64)> = Vec::new();
        let mut ns: Vec<u64> = rows.iter().map(|r| r.delta_inv).collect();
        ns.sort_unstable();
        ns.dedup();
        for n in ns {
            let v: Vec<f64> = rows.iter().filter(|r| r.delta_inv == n && r.ratio > 0.0).map(|r| r.ratio.ln()).collect();
            if !v.is_empty() {
                per.push((n, (v.iter().sum::<f64>() / v.len() as f64).exp()));
            }
        }
        let drift = per.len() >= 2
            && per.windows(2).all(|w| w[1].1 > w[0].1)
            && per.last().unwrap().1 / per[0].1 > (per.last().unwrap().0 as f64 / per[0].0 as f64).powf(eps);
        SweepReport { kind, rows, skipped, spacing_failures, fitted, spread, drift }
    }

    pub fn spacing_ok(&self) -> bool {
        self.spacing_failures.is_empty()
    }

    pub fn tsv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| vec![r.params.clone(), r.delta_inv.to_string(), r.measured.to_string(), r.bound.to_string(), r.ratio.to_string()])
            .collect()
    }
}

pub const TSV_HEADER: [&str; 5] = ["params", "delta_inv", "measured", "bound", "ratio"];

/// `delta^-eps |F| WX r^-2 (r^-1 + W^-1)`.
pub fn incidence_bound(n: u64, eps: f64, family: usize, w: u64, x: u64, r: u32) -> f64 {
    let r = r as f64;
    (n as f64).powf(eps) * family as f64 * (w * x) as f64 / (r * r) * (1.0 / r + 1.0 / w as f64)
}

/// Smallest integer `r > max(delta^(1 - 2 eps) WX, 1)`.
pub fn min_rich(n: u64, eps: f64, w: u64, x: u64) -> u32 {
    let floor = ((w * x) as f64 * (n as f64).powf(2.0 * eps - 1.0)).max(1.0);
    floor.floor() as u32 + 1
}

fn admissible(n: u64, eps: f64, w: u64, x: u64, r: u32) -> bool {
    (r as f64) > ((w * x) as f64 * (n as f64).powf(2.0 * eps - 1.0)).max(1.0)
}

/// Position-separated family: lines from `(a/X, 0)` to `(b/W, 1)`.
pub fn position_family(params: &SpacingParams) -> Result<Vec<Tube>> {
    let w = crate::scalar::as_u64(&params.w, "W")? as i64;
    let x = crate::scalar::as_u64(&params.x, "X")? as i64;
    let mut out = Vec::new();
    for a in 0..=x {
        for b in 0..=w {
            let u = rat(a, x);
            let v = rat(b, w) - &u;
            out.push(Tube::new(u, v, params.delta.clone())?);
        }
    }
    Ok(out)
}

fn rs_for(grid: &SweepGrid, n: u64, eps: f64, w: u64, x: u64) -> Vec<u32> {
    if grid.rs.is_empty() {
        vec![min_rich(n, eps, w, x)]
    } else {
        grid.rs.clone()
    }
}

pub fn sweep_theorem(kind: SweepKind, grid: &SweepGrid) -> Result<SweepReport> {
    let eps = to_f64(&grid.eps);
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut failures = Vec::new();
    for delta in &grid.deltas {
        let n = inverse_integer(delta)?;
        match kind {
            SweepKind::Furstenberg => {
                for &x in &grid.xs {
                    for &w in &grid.ws {
                        for alpha in &grid.alphas {
                            let name = format!("delta={} W={w} X={x} alpha={}", format_scalar(delta), format_scalar(alpha));
                            let ex = match build_furst_sqrt2(delta, alpha, x, w, 1) {
                                Ok(ex) => ex,
                                Err(e) => {
                                    skipped.push(format!("{name}: {e}"));
                                    continue;
                                }
                            };
                            let params = SpacingParams::from_ints(n, w, x)?;
                            if !ex.certificate.fallback && !verify_tube_spacing(&ex.tubes, &params)?.pass {
                                failures.push(name);
                                continue;
                            }
                            let bound = theorem_target(n, to_f64(alpha), w, x);
                            let measured = ex.balls.len() as f64;
                            rows.push(SweepRow { params: name, delta_inv: n, measured, bound, ratio: measured / bound });
                        }
                    }
                }
            }
            _ => {
                for &w in &grid.ws {
                    for &x in &grid.xs {
                        let params = match SpacingParams::from_ints(n, w, x) {
                            Ok(p) => p,
                            Err(e) => {
                                skipped.push(format!("delta={} W={w} X={x}: {e}", format_scalar(delta)));
                                continue;
                            }
                        };
                        for r in rs_for(grid, n, eps, w, x) {
                            let name = format!("delta={} W={w} X={x} r={r}", format_scalar(delta));
                            if !admissible(n, eps, w, x, r) {
                                skipped.push(format!("{name}: r below max(delta^(1-2eps) WX, 1)"));
                                continue;
                            }
                            match kind {
                                SweepKind::Main2 => {
                                    let ex = match build_case1(&params, r as u64, &FractionWindow::separated()) {
                                        Ok(ex) => ex,
                                        Err(e) => {
                                            skipped.push(format!("{name}: {e}"));
                                            continue;
                                        }
                                    };
                                    if !verify_tube_spacing(&ex.tubes, &params)?.pass {
                                        failures.push(name);
                                        continue;
                                    }
                                    let measured = rich_balls(&ex.tubes, &params, r)?.balls.len() as f64;
                                    let bound = incidence_bound(n, eps, ex.tubes.len(), w, x, r);
                                    rows.push(SweepRow { params: name, delta_inv: n, measured, bound, ratio: measured / bound });
                                }
                                SweepKind::Main3 => {
                                    let tubes = position_family(&params)?;
                                    if !transfer_spacing(&tubes, &params, GridOrientation::PositionSeparated)?.1.pass {
                                        failures.push(name);
                                        continue;
                                    }
                                    let measured = rich_balls(&tubes, &params, r)?.balls.len() as f64;
                                    let bound = incidence_bound(n, eps, tubes.len(), w, x, r);
                                    rows.push(SweepRow { params: name, delta_inv: n, measured, bound, ratio: measured / bound });
                                }
                                SweepKind::Main => {
                                    let mut measured = 0.0;
                                    let mut bound = 0.0;
                                    for s in 0..grid.samples {
                                        let seed = grid.seed ^ (n << 40) ^ (w << 24) ^ (x << 8) ^ s as u64;
                                        let balls = random_spaced_balls(&mut rng(seed), &params, grid.fill)?;
                                        if !verify_ball_grid_spacing(&balls, &params, GridOrientation::DirectionSeparated)?.pass {
                                            failures.push(format!("{name} sample={s}"));
                                            continue;
                                        }
                                        if balls.is_empty() {
                                            continue;
                                        }
                                        measured += rich_tubes(&balls, r, &(delta / crate::scalar::int(2)))?.members.len() as f64;
                                        bound += incidence_bound(n, eps, balls.len(), w, x, r);
                                    }
                                    if bound > 0.0 {
                                        rows.push(SweepRow { params: name, delta_inv: n, measured, bound, ratio: measured / bound });
                                    }
                                }
                                SweepKind::Furstenberg => unreachable!(),
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(SweepReport::finish(kind, rows, skipped, failures, eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_parse() {
        assert_eq!("theorem-main2".parse::<SweepKind>().unwrap(), SweepKind::Main2);
        assert_eq!("furstenberg".parse::<SweepKind>().unwrap(), SweepKind::Furstenberg);
        assert!("main4".parse::<SweepKind>().is_err());
    }

    #[test]
    fn smallest_r() {
        // 64^(-0.8) * 16 < 1
        assert_eq!(min_rich(64, 0.1, 2, 8), 2);
        assert!(admissible(64, 0.1, 2, 8, 2));
        assert!(!admissible(64, 0.1, 2, 8, 1));
    }

    #[test]
    fn position_family_passes_mirrored_grid() {
        let p = SpacingParams::from_ints(128, 2, 8).unwrap();
        let t = position_family(&p).unwrap();
        assert!(transfer_spacing(&t, &p, GridOrientation::PositionSeparated).unwrap().1.pass);
    }
}
