//! Acceptance harness: one line per criterion, nonzero exit when any fails.

use deltalab::constructions::{
    build_case1, build_case2, build_furst_intersected, build_furst_sqrt2, build_furst_strips, case1_tubes,
    min_pairwise_dist_sq, FractionWindow, FurstenbergExample,
};
use deltalab::duality::{incidence_preserved, transfer_spacing};
use deltalab::furstenberg::{run_pipeline, theorem_target, CrossingMethod, FurstInstance};
use deltalab::geometry::{incident_exact, Ball, ClipWindow, Point, SpacingParams, Tube};
use deltalab::incidence::{
    count_incidences, count_triples, rich_balls, rich_tubes, verify_ball_grid_spacing, verify_tube_spacing, Engine,
    GridOrientation,
};
use deltalab::sample::{random_balls, random_spaced_balls, random_tubes, rng};
use deltalab::scalar::{int, rat, sq, to_f64, Scalar};
use deltalab::sweep::min_rich;
use rand::Rng;
use rayon::prelude::*;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn spread(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::MIN, f64::max);
    let min = v.iter().copied().fold(f64::MAX, f64::min);
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

const DELTAS: [u64; 3] = [64, 128, 256];

fn criterion1() -> Outcome {
    let mismatches: Vec<usize> = (0..200usize)
        .into_par_iter()
        .filter_map(|s| {
            let n = DELTAS[s % 3];
            let mut g = rng(10_000 + s as u64);
            let nb = g.gen_range(1..=2000);
            let nt = g.gen_range(1..=2000);
            let balls = random_balls(&mut g, n, nb);
            let tubes = random_tubes(&mut g, n, nt);
            let a = count_incidences(&balls, &tubes, Engine::Oracle).unwrap();
            let b = count_incidences(&balls, &tubes, Engine::Grid).unwrap();
            (a != b).then_some(s)
        })
        .collect();
    outcome(mismatches.is_empty(), format!("200 instances, {} mismatching ({:?})", mismatches.len(), mismatches))
}

fn criterion2() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for &n in &[64u64, 256] {
        let d = rat(1, n as i64);
        let m = 4 * n as i64;
        let results: Vec<(bool, bool)> = (0..10_000u64)
            .into_par_iter()
            .map(|s| {
                let mut g = rng(20_000 + s + n * 100_000);
                let c1 = Point::new(rat(g.gen_range(0..=m), m), rat(g.gen_range(0..=m), m));
                let v = rat(g.gen_range(-m..=m), m);
                // half the pairs are planted close to the incidence threshold
                let u = if s % 2 == 0 {
                    &c1.x - &v * &c1.y + rat(g.gen_range(-16..=16), m)
                } else {
                    rat(g.gen_range(0..=m), m)
                };
                let b1 = Ball::new(c1, d.clone()).unwrap();
                let b2 = Ball::new_in(Point::new(u, v), d.clone(), &ClipWindow::dual()).unwrap();
                let c = incidence_preserved(&b1, &b2).unwrap();
                (c.agrees(), c.physical)
            })
            .collect();
        let bad = results.iter().filter(|r| !r.0).count();
        let hits = results.iter().filter(|r| r.1).count();
        pass &= bad == 0;
        details.push(format!("delta=1/{n}: {bad} disagreements, {hits} incident pairs"));
    }
    outcome(pass, details.join("; "))
}

fn criterion3() -> Outcome {
    let mut ratios = Vec::new();
    let mut problems = Vec::new();
    let mut cells = Vec::new();
    for &w in &[2u64, 4] {
        for &x in &[8u64, 16] {
            for &r in &[2u64, 4] {
                let n = 256u64.max(4 * w * x / r);
                let p = SpacingParams::from_ints(n, w, x).unwrap();
                let name = format!("(W={w},X={x},r={r})");
                let ex = match build_case1(&p, r, &FractionWindow::separated()) {
                    Ok(ex) => ex,
                    Err(e) => {
                        problems.push(format!("{name} rejected: {e}"));
                        continue;
                    }
                };
                let need = (r / 100 + 1) as usize;
                for pt in &ex.points {
                    let ball = Ball::new(pt.center.clone(), p.delta.clone()).unwrap();
                    let ok = pt.solutions.len() >= need
                        && pt.solutions.iter().all(|&(a, b)| {
                            let t = &ex.tubes[ex.tube_index(a, b)];
                            t.position() + t.direction() * &pt.center.y == pt.center.x && incident_exact(&ball, t)
                        });
                    if !ok {
                        problems.push(format!("{name} point ({}, {}) lacks solutions", pt.center.x, pt.center.y));
                        break;
                    }
                }
                let centers: Vec<Point> = ex.points.iter().map(|q| q.center.clone()).collect();
                if let Some(m) = min_pairwise_dist_sq(&centers) {
                    if m < sq(&rat(r as i64, (x * w) as i64)) {
                        problems.push(format!("{name} separation {} below r/(XW)", to_f64(&m).sqrt()));
                    }
                }
                let ratio = ex.points.len() as f64 * (r * r * r) as f64 / ((w * w * x * x) as f64);
                if ex.points.is_empty() {
                    problems.push(format!("{name} has no points"));
                }
                cells.push(format!("{name}:{}", ex.points.len()));
                ratios.push(ratio);
            }
        }
    }
    let s = spread(&ratios);
    let pass = problems.is_empty() && s <= 16.0;
    outcome(pass, format!("points {}; c2/c1 = {s:.3}; {}", cells.join(" "), problems.join("; ")))
}

fn criterion4() -> Outcome {
    let eps = 0.1;
    let mut ratios = Vec::new();
    let mut failures = Vec::new();
    for &n in &DELTAS {
        for &w in &[1u64, 2, 4] {
            for &x in &[4u64, 8, 16] {
                let p = SpacingParams::from_ints(n, w, x).unwrap();
                let r = min_rich(n, eps, w, x);
                let half = rat(1, 2 * n as i64);
                let (measured, size): (usize, usize) = (0..50u64)
                    .into_par_iter()
                    .map(|s| {
                        let mut g = rng(40_000 + s + 1000 * (n + 10 * w + 100 * x));
                        let balls = random_spaced_balls(&mut g, &p, 0.8).unwrap();
                        let ok = verify_ball_grid_spacing(&balls, &p, GridOrientation::DirectionSeparated).unwrap().pass;
                        assert!(ok, "generator broke the grid condition");
                        if balls.is_empty() {
                            return (0, 0);
                        }
                        (rich_tubes(&balls, r, &half).unwrap().len(), balls.len())
                    })
                    .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
                let rr = r as f64;
                let bound = size as f64 * (w * x) as f64 / (rr * rr) * (1.0 / rr + 1.0 / w as f64);
                if measured == 0 {
                    failures.push(format!("n={n} W={w} X={x}: no rich tubes"));
                    continue;
                }
                ratios.push(measured as f64 / bound);
            }
        }
    }
    let s = spread(&ratios);
    let allowance = 16.0 * (DELTAS[2] as f64).powf(eps);
    let lo = ratios.iter().copied().fold(f64::MAX, f64::min);
    let hi = ratios.iter().copied().fold(f64::MIN, f64::max);
    outcome(
        failures.is_empty() && s <= allowance,
        format!("27 cells, ratio in [{lo:.3}, {hi:.3}], max/min = {s:.3} (allowed {allowance:.3}) {}", failures.join("; ")),
    )
}

fn criterion5() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for &(w, x, r) in &[(1u64, 8u64, 4u64), (2, 16, 4), (2, 16, 8)] {
        let p = SpacingParams::from_ints(256, w, x).unwrap();
        let ex = build_case2(&p, r).unwrap();
        let rich = rich_balls(&ex.tubes, &p, r as u32).unwrap();
        let expected = (w * x * x) as f64 / (r * r) as f64;
        let measured = rich.balls.len() as f64;
        let factor = (measured / expected).max(expected / measured);
        let reach = sq(&(rat(x as i64, r as i64) * &p.delta));
        let far = rich
            .balls
            .iter()
            .filter(|b| ex.apexes.iter().all(|a| b.center().dist_sq(a) > reach))
            .count();
        let ok = factor <= 8.0 && far == 0;
        pass &= ok;
        details.push(format!(
            "(W={w},X={x},r={r}): |B_r|={measured} vs {expected}, factor {factor:.2}, {far} balls beyond (X/r)delta"
        ));
    }
    outcome(pass, details.join("; "))
}

fn criterion6() -> Outcome {
    const CELLS: [(u64, u64); 9] = [(1, 4), (1, 16), (2, 8), (2, 16), (4, 8), (4, 16), (8, 16), (4, 32), (8, 32)];
    let cs: Vec<f64> = (0..100u64)
        .into_par_iter()
        .map(|s| {
            let n = DELTAS[(s % 3) as usize];
            let (w, x) = CELLS[(s % 9) as usize];
            let p = SpacingParams::from_ints(n, w, x).unwrap();
            let balls = random_spaced_balls(&mut rng(1000 + s), &p, 0.8).unwrap();
            assert!(verify_ball_grid_spacing(&balls, &p, GridOrientation::DirectionSeparated).unwrap().pass);
            let tubes = rich_tubes(&balls, 2, &rat(1, 2 * n as i64)).unwrap().tubes();
            let triples = count_triples(&balls, &tubes).unwrap();
            triples as f64 / ((x as f64).ln() * balls.len() as f64 * (w * x) as f64)
        })
        .collect();
    let s = spread(&cs);
    let c = cs.iter().copied().fold(f64::MIN, f64::max);
    outcome(s <= 8.0, format!("100 instances, fitted C = {c:.3}, max/min = {s:.3}"))
}

fn furst_suite() -> Vec<(String, FurstenbergExample)> {
    let alphas = [rat(3, 10), rat(1, 2), rat(7, 10)];
    let mut out = Vec::new();
    for &n in &DELTAS {
        let d = rat(1, n as i64);
        for a in &alphas {
            let tag = |k: &str| format!("{k}(n={n},alpha={a})");
            out.push((tag("strips"), build_furst_strips(&d, a, 2, 8).unwrap()));
            out.push((tag("intersected"), build_furst_intersected(&d, a, 4, 16).unwrap()));
            let (x, w) = case3_params(n);
            out.push((tag("sqrt2"), build_furst_sqrt2(&d, a, x, w, 1).unwrap()));
        }
    }
    out
}

/// `(X, W)` per delta for the irrational-translation family; these pass the
/// tube spacing check at divisor 1.
fn case3_params(n: u64) -> (u64, u64) {
    match n {
        64 => (64, 4),
        128 => (64, 16),
        _ => (256, 16),
    }
}

fn criterion7(suite: &[(String, FurstenbergExample)]) -> Outcome {
    let rows: Vec<(String, bool, bool, f64, bool)> = suite
        .par_iter()
        .map(|(name, ex)| {
            let inst = FurstInstance::from(ex);
            let method = if ex.tubes.len() <= 600 { CrossingMethod::Checked } else { CrossingMethod::Bucketed };
            let run = run_pipeline(&inst, method).unwrap();
            let c = &run.certificate;
            let ratio = if c.edges == 0 { f64::INFINITY } else { c.vertex_ratio };
            (name.clone(), c.identity_holds(), c.crossings_within_pairs(), ratio, c.edges > 0)
        })
        .collect();
    let mut problems = Vec::new();
    for (name, ident, cross, _, nonempty) in &rows {
        if !ident {
            problems.push(format!("{name}: edge identity fails"));
        }
        if !cross {
            problems.push(format!("{name}: crossings exceed |T'|^2"));
        }
        if !nonempty {
            problems.push(format!("{name}: empty graph"));
        }
    }
    let c = rows.iter().map(|r| r.3).fold(f64::INFINITY, f64::min);
    let pass = problems.is_empty() && c >= 1.0 / 64.0;
    outcome(pass, format!("{} instances, fitted c = {c:.4} (need >= 1/64) {}", rows.len(), problems.join("; ")))
}

fn criterion8() -> Outcome {
    let alphas = [rat(3, 10), rat(1, 2), rat(7, 10)];
    let mut problems = Vec::new();
    let mut per_delta = Vec::new();
    let (mut big_c, mut small_c) = (f64::MIN, f64::MAX);
    for &n in &DELTAS {
        let d = rat(1, n as i64);
        let (x, w) = case3_params(n);
        let p = SpacingParams::from_ints(n, w, x).unwrap();
        let (mut cd, mut sd) = (f64::MIN, f64::MAX);
        for a in &alphas {
            let ex = build_furst_sqrt2(&d, a, x, w, 1).unwrap();
            if ex.certificate.fallback {
                problems.push(format!("n={n} alpha={a}: rational family degenerated"));
                continue;
            }
            if !verify_tube_spacing(&ex.tubes, &p).unwrap().pass {
                problems.push(format!("n={n} alpha={a}: tubes fail the spacing check"));
                continue;
            }
            let run = run_pipeline(&FurstInstance::from(&ex), CrossingMethod::Bucketed).unwrap();
            let m = theorem_target(n, to_f64(a), w, x);
            let upper = ex.balls.len() as f64 / m;
            let lower = run.certificate.lemma / m;
            let log = (n as f64).ln().powf(3.5);
            cd = cd.max(upper.max(lower));
            sd = sd.min(lower * log);
        }
        per_delta.push(format!("n={n}: C={cd:.3} c={sd:.2}"));
        big_c = big_c.max(cd);
        small_c = small_c.min(sd);
    }
    let stable = big_c / small_c;
    let pass = problems.is_empty() && stable <= 64.0;
    outcome(pass, format!("{}; C/c = {stable:.4} (need <= 64) {}", per_delta.join(", "), problems.join("; ")))
}

fn criterion9(suite: &[(String, FurstenbergExample)]) -> Outcome {
    let mut problems = Vec::new();
    let mut checked = 0;
    let dir = GridOrientation::DirectionSeparated;
    let mut families: Vec<(String, Vec<Tube>, SpacingParams)> = Vec::new();
    for &(w, x) in &[(2u64, 8u64), (4, 8), (4, 16)] {
        let p = SpacingParams::from_ints(256, w, x).unwrap();
        families.push((format!("case1 grid (W={w},X={x})"), case1_tubes(&p).unwrap(), p.clone()));
        if let Ok(ex) = build_case1(&p, 2, &FractionWindow::separated()) {
            families.push((format!("case1 example (W={w},X={x})"), ex.tubes, p.clone()));
        }
    }
    for &(w, x, r) in &[(1u64, 8u64, 4u64), (2, 16, 4), (2, 16, 8)] {
        let p = SpacingParams::from_ints(256, w, x).unwrap();
        families.push((format!("bush (W={w},X={x},r={r})"), build_case2(&p, r).unwrap().tubes, p));
    }
    for (name, ex) in suite {
        let n = deltalab::scalar::inverse_integer(&ex.delta).unwrap();
        families.push((name.clone(), ex.tubes.clone(), SpacingParams::from_ints(n, ex.w, ex.x).unwrap()));
    }
    for (name, tubes, p) in &families {
        let (_, rep) = transfer_spacing(tubes, p, dir).unwrap();
        checked += 1;
        if !rep.pass {
            let cell = rep.violation.map(|v| v.cell);
            problems.push(format!("{name} fails at cell {cell:?} ({} per cell)", rep.max_per_cell));
        }
    }
    // planted violations: a second dual ball at the center of an occupied cell
    let mut planted_ok = 0;
    for k in 0..20u64 {
        let (w, x) = [(2u64, 8u64), (4, 8), (4, 16), (1, 4)][(k % 4) as usize];
        let p = SpacingParams::from_ints(256, w, x).unwrap();
        let mut tubes = case1_tubes(&p).unwrap();
        let inner: Vec<usize> = (0..tubes.len())
            .filter(|&i| tubes[i].position() < &int(1) && tubes[i].direction() < &int(1))
            .collect();
        let victim = &tubes[inner[rng(90_000 + k).gen_range(0..inner.len())]];
        let expected = cell_of(victim.position(), victim.direction(), &p);
        let u = rat(2 * expected.0 + 1, 2 * w as i64);
        let v = rat(2 * expected.1 + 1, 2 * x as i64);
        tubes.push(Tube::new(u, v, p.delta.clone()).unwrap());
        let (_, rep) = transfer_spacing(&tubes, &p, dir).unwrap();
        match rep.violation {
            Some(viol) if !rep.pass && viol.cell == expected => planted_ok += 1,
            other => problems.push(format!("planted {k}: expected cell {expected:?}, got {:?}", other.map(|v| v.cell))),
        }
    }
    outcome(
        problems.is_empty(),
        format!("{checked} constructions pass, {planted_ok}/20 planted violations named {}", problems.join("; ")),
    )
}

fn cell_of(u: &Scalar, v: &Scalar, p: &SpacingParams) -> (i64, i64) {
    (
        deltalab::scalar::floor_i64(&(u * &p.w)),
        deltalab::scalar::floor_i64(&(v * &p.x)),
    )
}

fn main() {
    let budgets: [u64; 9] = [120, 60, 300, 900, 120, 120, 300, 600, 60];
    let mut failed = 0;
    let mut report = |k: usize, t: Duration, o: Outcome| {
        let slow = t.as_secs_f64() > budgets[k - 1] as f64;
        let ok = o.pass && !slow;
        if !ok {
            failed += 1;
        }
        let budget = if slow { format!(", over the {}s budget", budgets[k - 1]) } else { String::new() };
        println!(
            "criterion {k}: {} ({:.1}s{budget}) {}",
            if ok { "PASS" } else { "FAIL" },
            t.as_secs_f64(),
            o.detail.trim_end()
        );
    };
    let timed = |f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        (start.elapsed(), o)
    };
    let (t, o) = timed(&criterion1);
    report(1, t, o);
    let (t, o) = timed(&criterion2);
    report(2, t, o);
    let (t, o) = timed(&criterion3);
    report(3, t, o);
    let (t, o) = timed(&criterion4);
    report(4, t, o);
    let (t, o) = timed(&criterion5);
    report(5, t, o);
    let (t, o) = timed(&criterion6);
    report(6, t, o);
    let start = Instant::now();
    let suite = furst_suite();
    let build = start.elapsed();
    let (t, o) = timed(&|| criterion7(&suite));
    report(7, t + build, o);
    let (t, o) = timed(&criterion8);
    report(8, t, o);
    let (t, o) = timed(&|| criterion9(&suite));
    report(9, t, o);
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
