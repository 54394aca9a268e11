use super::graph::{crossings, crossings_brute, CrossGraph};
use super::pseudotube::{gap_class, gap_profile, rasterize, select_typical_gap, typical_family, GapSelection, PseudoTube, Square};
use crate::constructions::FurstenbergExample;
use crate::error::{Error, Result};
use crate::geometry::{Ball, SpacingParams, Tube};
use crate::scalar::{as_u64, inverse_integer, rat, to_f64, Scalar};
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Exponent of `log(1/delta)` in the lower bound.
pub const LOG_EXPONENT: f64 = -3.5;

/// A Furstenberg configuration: tubes, balls and per-tube witness lists.
#[derive(Clone, Debug)]
pub struct FurstInstance {
    pub delta: Scalar,
    pub alpha: Scalar,
    pub w: u64,
    pub x: u64,
    pub tubes: Vec<Tube>,
    pub balls: Vec<Ball>,
    /// `witnesses[t]` indexes `balls`
    pub witnesses: Vec<Vec<usize>>,
}

impl From<&FurstenbergExample> for FurstInstance {
    fn from(e: &FurstenbergExample) -> Self {
        FurstInstance {
            delta: e.delta.clone(),
            alpha: e.alpha.clone(),
            w: e.w,
            x: e.x,
            tubes: e.tubes.clone(),
            balls: e.balls.clone(),
            witnesses: e.witnesses.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CrossingMethod {
    #[default]
    Bucketed,
    Brute,
    /// both, failing on disagreement
    Checked,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BoundCertificate {
    pub delta: String,
    pub alpha: String,
    pub w: u64,
    pub x: u64,
    /// construction balls
    pub balls: usize,
    /// squares used by the witnesses
    pub squares: usize,
    pub tubes: usize,
    /// size of the typical family
    pub typical_tubes: usize,
    /// selected gap class, in units of `delta` (`0.5` for adjacent squares)
    pub gap: f64,
    pub vertices: usize,
    pub edges: usize,
    /// sum of edge multiplicities
    pub edge_multiplicity: u64,
    /// sum over the typical family of `|Y'(T)| - 1`
    pub path_lengths: u64,
    pub drawing_crossings: u64,
    pub pair_bound: u64,
    pub cr_ub: u64,
    /// `min(e, e^1.5 / max(cr_ub, 1)^0.5)`
    pub lemma: f64,
    pub vertex_ratio: f64,
    pub target: f64,
    pub log_exponent: f64,
    /// `balls / target`
    pub ratio: f64,
    /// `lemma / target`
    pub lower_ratio: f64,
}

impl BoundCertificate {
    pub fn identity_holds(&self) -> bool {
        self.edge_multiplicity == self.path_lengths
    }

    pub fn crossings_within_pairs(&self) -> bool {
        self.drawing_crossings <= self.pair_bound
    }
}

/// `min(n^(1+a), n^(3a/2) sqrt(XW), n^a XW)` for `n = 1/delta`.
pub fn theorem_target(n: u64, alpha: f64, w: u64, x: u64) -> f64 {
    let (n, xw) = (n as f64, (x * w) as f64);
    n.powf(1.0 + alpha).min(n.powf(1.5 * alpha) * xw.sqrt()).min(n.powf(alpha) * xw)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RegimeReport {
    pub terms: [f64; 4],
    /// index of the smallest of the first three terms
    pub active: usize,
    pub target: f64,
    /// including `n^(2a) W`
    pub with_fourth: f64,
}

pub fn regime_report(n: u64, alpha: f64, w: u64, x: u64) -> RegimeReport {
    let nf = n as f64;
    let xw = (x * w) as f64;
    let terms = [
        nf.powf(1.0 + alpha),
        nf.powf(1.5 * alpha) * xw.sqrt(),
        nf.powf(alpha) * xw,
        nf.powf(2.0 * alpha) * w as f64,
    ];
    let active = (0..3).min_by(|&a, &b| terms[a].total_cmp(&terms[b])).unwrap();
    RegimeReport { terms, active, target: terms[active], with_fourth: terms.iter().copied().fold(f64::INFINITY, f64::min) }
}

pub fn lemma_value(edges: usize, cr_ub: u64) -> f64 {
    let e = edges as f64;
    e.min(e.powf(1.5) / (cr_ub.max(1) as f64).sqrt())
}

/// `(drawing, |T'|^2)`.
pub fn crossing_upper_bound(graph: &CrossGraph, typical: usize, method: CrossingMethod) -> Result<(u64, u64)> {
    let drawing = match method {
        CrossingMethod::Bucketed => crossings(graph),
        CrossingMethod::Brute => crossings_brute(graph),
        CrossingMethod::Checked => {
            let (a, b) = (crossings(graph), crossings_brute(graph));
            if a != b {
                return Err(Error::invariant(format!("bucketed crossings {a} differ from exhaustive {b}")));
            }
            a
        }
    };
    Ok((drawing, (typical as u64).pow(2)))
}

/// Pseudo-tubes, `Y'(T)` and selections from the witnesses of every steep tube.
#[derive(Clone, Debug)]
pub struct Profiles {
    pub n: u64,
    /// instance tube index for each entry
    pub source: Vec<usize>,
    pub pseudo: Vec<PseudoTube>,
    pub members: Vec<Vec<Square>>,
    pub selections: Vec<Option<GapSelection>>,
    pub squares: HashSet<Square>,
}

pub fn profiles(inst: &FurstInstance) -> Result<Profiles> {
    let n = inverse_integer(&inst.delta)?;
    let alpha = to_f64(&inst.alpha);
    if inst.witnesses.len() != inst.tubes.len() {
        return Err(Error::param("one witness list per tube is required"));
    }
    let steep: Vec<usize> =
        (0..inst.tubes.len()).filter(|&t| inst.tubes[t].direction().abs() <= rat(1, 10) && inst.tubes[t].rotation().is_identity()).collect();
    let pseudo: Vec<PseudoTube> = steep.par_iter().map(|&t| rasterize(&inst.tubes[t], &inst.delta)).collect::<Result<_>>()?;
    let mut squares = HashSet::new();
    for (k, &t) in steep.iter().enumerate() {
        for &b in &inst.witnesses[t] {
            let ball = inst.balls.get(b).ok_or_else(|| Error::param(format!("witness {b} out of range")))?;
            let row = crate::scalar::floor_i64(&(&ball.center().y * crate::scalar::int(n as i64))).clamp(0, n as i64 - 1);
            squares.insert(pseudo[k].square(row as usize));
        }
    }
    let (members, selections): (Vec<_>, Vec<_>) = pseudo
        .par_iter()
        .map(|pt| {
            let p = gap_profile(pt, &squares);
            let sel = (!p.gaps.is_empty()).then(|| select_typical_gap(&p, alpha, n));
            (p.squares, sel)
        })
        .unzip();
    Ok(Profiles { n, source: steep, pseudo, members, selections, squares })
}

#[derive(Clone, Debug)]
pub struct Pipeline {
    pub profiles: Profiles,
    /// selected class and positions in `profiles` of the typical family
    pub class: i32,
    pub typical: Vec<usize>,
    pub graph: CrossGraph,
    pub certificate: BoundCertificate,
}

pub fn run_pipeline(inst: &FurstInstance, method: CrossingMethod) -> Result<Pipeline> {
    let profiles = profiles(inst)?;
    let (class, typical) = typical_family(&profiles.selections);
    let families: Vec<&[Square]> = typical.iter().map(|&k| profiles.members[k].as_slice()).collect();
    let graph = CrossGraph::build(&families);
    let (drawing, pair_bound) = crossing_upper_bound(&graph, typical.len(), method)?;
    let cr_ub = drawing.min(pair_bound);
    let n = profiles.n;
    let alpha = to_f64(&inst.alpha);
    let lemma = lemma_value(graph.edges.len(), cr_ub);
    let target = theorem_target(n, alpha, inst.w, inst.x);
    let certificate = BoundCertificate {
        delta: crate::scalar::format_scalar(&inst.delta),
        alpha: crate::scalar::format_scalar(&inst.alpha),
        w: inst.w,
        x: inst.x,
        balls: inst.balls.len(),
        squares: profiles.squares.len(),
        tubes: inst.tubes.len(),
        typical_tubes: typical.len(),
        gap: super::pseudotube::class_width(class),
        vertices: graph.vertices.len(),
        edges: graph.edges.len(),
        edge_multiplicity: graph.multiplicity.iter().map(|&m| m as u64).sum(),
        path_lengths: families.iter().map(|f| f.len().saturating_sub(1) as u64).sum(),
        drawing_crossings: drawing,
        pair_bound,
        cr_ub,
        lemma,
        vertex_ratio: if lemma > 0.0 { graph.vertices.len() as f64 / lemma } else { f64::INFINITY },
        target,
        log_exponent: LOG_EXPONENT,
        ratio: inst.balls.len() as f64 / target,
        lower_ratio: lemma / target,
    };
    Ok(Pipeline { profiles, class, typical, graph, certificate })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AngularBucket {
    /// angles in `[2^k delta, 2^(k+1) delta)`; `-1` below `delta`
    pub class: i32,
    pub tubes: usize,
    pub shared_edges: u64,
    pub max_shared: u64,
    /// `mu^-1 delta^(1-a) + 1` at the lower end of the class
    pub ceiling: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EdgeCountCase1 {
    pub edges: usize,
    /// `sum_T sum_(e in T) 1/n_e` with `n_e` counted by containment
    pub identity_sum: f64,
    /// `max_T0 sum n_e` over contained edges of the selected class
    pub max_load: u64,
    pub worst_tube: usize,
    /// `max_load / delta^-a`
    pub load_constant: f64,
    /// `|E| log^2 / (delta^-a |T'|)`
    pub edge_constant: f64,
    pub buckets: Vec<AngularBucket>,
}

impl EdgeCountCase1 {
    pub fn identity_holds(&self) -> bool {
        (self.identity_sum - self.edges as f64).abs() <= 1e-9 * (self.edges as f64).max(1.0)
    }
}

/// Whether `XW <= delta^(a-2)`.
pub fn case1_hypothesis(n: u64, alpha: f64, w: u64, x: u64) -> bool {
    ((x * w) as f64) <= (n as f64).powf(2.0 - alpha) * (1.0 + 1e-12)
}

pub fn edge_count_case1(inst: &FurstInstance, run: &Pipeline) -> Result<EdgeCountCase1> {
    let n = run.profiles.n;
    let alpha = to_f64(&inst.alpha);
    if !case1_hypothesis(n, alpha, inst.w, inst.x) {
        return Err(Error::param("XW exceeds delta^(alpha-2); use the reduced parameters"));
    }
    let g = &run.graph;
    let p = &run.profiles;
    let contained: Vec<Vec<usize>> =
        run.typical.par_iter().map(|&k| g.contained_edges(&p.pseudo[k], &p.members[k])).collect();
    let mut n_e = vec![0u64; g.edges.len()];
    for list in &contained {
        for &e in list {
            n_e[e] += 1;
        }
    }
    let identity_sum: f64 = contained.iter().flatten().map(|&e| 1.0 / n_e[e] as f64).sum();
    let class_of = |e: usize| {
        let (a, b) = g.edges[e];
        gap_class((g.vertices[a as usize].1 - g.vertices[b as usize].1).unsigned_abs() - 1)
    };
    let loads: Vec<u64> =
        contained.iter().map(|list| list.iter().filter(|&&e| class_of(e) == run.class).map(|&e| n_e[e]).sum()).collect();
    let (worst, max_load) = loads.iter().copied().enumerate().max_by_key(|&(i, l)| (l, std::cmp::Reverse(i))).unwrap_or((0, 0));
    let na = (n as f64).powf(alpha);
    let log = (n as f64).ln();
    let edge_constant =
        if run.typical.is_empty() { 0.0 } else { g.edges.len() as f64 * log * log / (na * run.typical.len() as f64) };
    let buckets = if run.typical.is_empty() { Vec::new() } else { angular_buckets(inst, run, &contained, worst, n, alpha) };
    Ok(EdgeCountCase1 {
        edges: g.edges.len(),
        identity_sum,
        max_load,
        worst_tube: run.typical.get(worst).map(|&k| p.source[k]).unwrap_or(0),
        load_constant: max_load as f64 / na,
        edge_constant,
        buckets,
    })
}

fn angular_buckets(inst: &FurstInstance, run: &Pipeline, contained: &[Vec<usize>], t0: usize, n: u64, alpha: f64) -> Vec<AngularBucket> {
    let p = &run.profiles;
    let angle = |k: usize| to_f64(inst.tubes[p.source[run.typical[k]]].direction()).atan();
    let base: HashSet<usize> = contained[t0].iter().copied().collect();
    let delta = 1.0 / n as f64;
    let mut out: Vec<AngularBucket> = Vec::new();
    for k in 0..run.typical.len() {
        if k == t0 {
            continue;
        }
        let mu = (angle(k) - angle(t0)).abs();
        let class = if mu < delta { -1 } else { (mu / delta).log2().floor() as i32 };
        let shared = contained[k].iter().filter(|e| base.contains(e)).count() as u64;
        let lo = if class < 0 { delta } else { delta * 2f64.powi(class) };
        let ceiling = delta.powf(1.0 - alpha) / lo + 1.0;
        match out.iter_mut().find(|b| b.class == class) {
            Some(b) => {
                b.tubes += 1;
                b.shared_edges += shared;
                b.max_shared = b.max_shared.max(shared);
            }
            None => out.push(AngularBucket { class, tubes: 1, shared_edges: shared, max_shared: shared, ceiling }),
        }
    }
    out.sort_by_key(|b| b.class);
    out
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReducedParams {
    pub x: u64,
    pub w: u64,
}

/// `(X', W')` with `X' <= X`, `W' <= W`, `W' <= X'` and `X'W'` within a
/// factor two of `delta^(a-2)`.
pub fn edge_count_case2(params: &SpacingParams, alpha: &Scalar) -> Result<ReducedParams> {
    let n = inverse_integer(&params.delta)?;
    let (w, x) = (as_u64(&params.w, "W")?, as_u64(&params.x, "X")?);
    let t = (n as f64).powf(2.0 - to_f64(alpha));
    if ((x * w) as f64) < t / 2.0 {
        return Err(Error::param("XW is already below delta^(alpha-2)"));
    }
    for xp in (1..=x).rev() {
        let wp = ((t / xp as f64).round() as u64).clamp(1, w.min(xp));
        let prod = (xp * wp) as f64;
        if prod >= t / 2.0 && prod <= 2.0 * t {
            return Ok(ReducedParams { x: xp, w: wp });
        }
    }
    Err(Error::param("no reduced pair (X', W') exists"))
}

/// Keeps one tube in each `1/W' x 1/X'` cell of `(u, v)` with even `u`-index
/// and `v`-index divisible by four.
pub fn thin_to_grid(tubes: &[Tube], reduced: &ReducedParams) -> Vec<Tube> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in tubes {
        let i = crate::scalar::floor_i64(&(t.position() * crate::scalar::int(reduced.w as i64)));
        let j = crate::scalar::floor_i64(&(t.direction() * crate::scalar::int(reduced.x as i64)));
        if i.rem_euclid(2) == 0 && j.rem_euclid(4) == 0 && seen.insert((i, j)) {
            out.push(t.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_arithmetic() {
        assert_eq!(lemma_value(10, 1), 10.0);
        assert!((lemma_value(100, 10_000) - 10.0).abs() < 1e-12);
        assert_eq!(lemma_value(10, 0), 10.0);
    }

    #[test]
    fn reduction_examples() {
        let p = SpacingParams::from_ints(256, 256, 256).unwrap();
        let r = edge_count_case2(&p, &rat(1, 2)).unwrap();
        assert_eq!(r, ReducedParams { x: 256, w: 16 });
        let p = SpacingParams::from_ints(256, 16, 256).unwrap();
        assert_eq!(edge_count_case2(&p, &rat(1, 2)).unwrap(), ReducedParams { x: 256, w: 16 });
        let p = SpacingParams::from_ints(256, 2, 16).unwrap();
        assert!(edge_count_case2(&p, &rat(1, 2)).is_err());
    }

    #[test]
    fn regimes() {
        let r = regime_report(256, 0.5, 256, 256);
        assert_eq!(r.active, 0);
        let r = regime_report(256, 0.5, 1, 1);
        assert_eq!(r.active, 2);
        assert!(r.with_fourth <= r.target);
    }
}
