use crate::render;
use crate::{Command, Crossings, Dir, EngineChoice, ExampleName, GenArgs, Orientation, RichKind, Target};
use deltalab::constructions::{
    build_case1, build_case2, build_furst_intersected, build_furst_sqrt2, build_furst_strips, min_pairwise_dist_sq,
    FractionWindow, FurstenbergExample,
};
use deltalab::duality::{l2_of_ball, transfer_spacing};
use deltalab::furstenberg::{
    case1_hypothesis, edge_count_case1, edge_count_case2, regime_report, run_pipeline, CrossingMethod, FurstInstance,
};
use deltalab::geometry::{Ball, ClipWindow, SpacingParams};
use deltalab::incidence::{
    count_incidences, rich_balls, rich_tubes, verify_ball_grid_spacing, verify_tube_spacing, Engine, GridOrientation,
};
use deltalab::io::{read_instance, read_json, write_instance, write_json, write_tsv, Instance, WitnessFile};
use deltalab::scalar::{as_u64, format_scalar, int, inverse_integer, to_f64, Scalar};
use deltalab::sweep::{sweep_theorem, SweepGrid, SweepKind, TSV_HEADER};
use deltalab::{Error, Result};
use serde_json::{json, Value};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

pub enum Outcome {
    Pass,
    Fail(String),
}

fn load(path: &Path) -> Result<Instance> {
    read_instance(BufReader::new(File::open(path)?))
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn emit(value: &Value, path: &Option<PathBuf>) -> Result<()> {
    let mut out = sink(path)?;
    write_json(value, &mut out)?;
    out.flush()?;
    Ok(())
}

fn params(inst: &Instance) -> Result<SpacingParams> {
    SpacingParams::new(inst.delta.clone(), inst.w.clone(), inst.x.clone())
}

fn orientation(o: Orientation) -> GridOrientation {
    match o {
        Orientation::Direction => GridOrientation::DirectionSeparated,
        Orientation::Position => GridOrientation::PositionSeparated,
    }
}

pub fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::GenExample(args) => gen_example(args),
        Command::Count { input, engine, out } => {
            let inst = load(&input)?;
            let run = |e| count_incidences(&inst.balls, &inst.tubes, e);
            let (report, agree) = match engine {
                EngineChoice::Oracle => (run(Engine::Oracle)?, true),
                EngineChoice::Grid => (run(Engine::Grid)?, true),
                EngineChoice::Both => {
                    let (a, b) = (run(Engine::Oracle)?, run(Engine::Grid)?);
                    let same = a == b;
                    (a, same)
                }
            };
            emit(&serde_json::to_value(&report).map_err(|e| Error::Io(e.into()))?, &out)?;
            Ok(if agree { Outcome::Pass } else { Outcome::Fail("oracle and grid engines disagree".into()) })
        }
        Command::Rich { input, r, kind, net, out } => {
            let inst = load(&input)?;
            let value = match kind {
                RichKind::Balls => {
                    let set = rich_balls(&inst.tubes, &params(&inst)?, r)?;
                    let members: Vec<Value> = set
                        .balls
                        .iter()
                        .zip(&set.counts)
                        .map(|(b, c)| json!({"center": render::point(b.center()), "count": c}))
                        .collect();
                    json!({"kind": "balls", "r": r, "count": members.len(), "members": members})
                }
                RichKind::Tubes => {
                    let spacing = net.unwrap_or_else(|| &inst.delta / int(2));
                    let set = rich_tubes(&inst.balls, r, &spacing)?;
                    let members: Vec<Value> = set
                        .tubes()
                        .iter()
                        .zip(&set.counts)
                        .map(|(t, c)| {
                            json!({
                                "u": format_scalar(t.position()),
                                "v": format_scalar(t.direction()),
                                "k": t.rotation().index,
                                "count": c,
                            })
                        })
                        .collect();
                    json!({"kind": "tubes", "r": r, "net": format_scalar(&spacing), "count": members.len(), "members": members})
                }
            };
            emit(&value, &out)?;
            Ok(Outcome::Pass)
        }
        Command::VerifySpacing { input, target, orientation: o, out } => {
            let inst = load(&input)?;
            let p = params(&inst)?;
            match target {
                Target::Tubes => {
                    let rep = verify_tube_spacing(&inst.tubes, &p)?;
                    emit(&render::tube_spacing(&rep), &out)?;
                    Ok(if rep.pass { Outcome::Pass } else { Outcome::Fail(render::describe_tube_violation(&rep)) })
                }
                Target::Balls => {
                    let rep = verify_ball_grid_spacing(&inst.balls, &p, orientation(o))?;
                    emit(&render::grid_spacing(&rep), &out)?;
                    Ok(if rep.pass { Outcome::Pass } else { Outcome::Fail(render::describe_grid_violation(&rep)) })
                }
            }
        }
        Command::Dualize { input, dir, out } => {
            let inst = load(&input)?;
            let mut dual = Instance::new(inst.delta.clone(), inst.w.clone(), inst.x.clone());
            match dir {
                Dir::L1 => {
                    for t in &inst.tubes {
                        if !t.rotation().is_identity() {
                            return Err(Error::param("l1 dualization expects unrotated tubes"));
                        }
                        dual.balls.push(Ball::new_in(t.dual_point(), inst.delta.clone(), &ClipWindow::dual())?);
                    }
                }
                Dir::L2 => {
                    for b in &inst.balls {
                        dual.tubes.push(l2_of_ball(b)?);
                    }
                }
            }
            let mut w = sink(&out)?;
            write_instance(&dual, &mut w)?;
            w.flush()?;
            Ok(Outcome::Pass)
        }
        Command::TransferCheck { input, orientation: o, out } => {
            let inst = load(&input)?;
            let (balls, rep) = transfer_spacing(&inst.tubes, &params(&inst)?, orientation(o))?;
            let mut v = render::grid_spacing(&rep);
            v["dual_balls"] = json!(balls.len());
            emit(&v, &out)?;
            Ok(if rep.pass { Outcome::Pass } else { Outcome::Fail(render::describe_grid_violation(&rep)) })
        }
        Command::FurstBound { input, witness, crossings, out, tsv } => furst_bound(&input, &witness, crossings, &out, &tsv),
        Command::Sweep { name, deltas, ws, xs, r, alpha, eps, seed, samples, fill, out, summary } => {
            let kind: SweepKind = name.parse()?;
            let grid = SweepGrid {
                deltas,
                ws,
                xs,
                rs: r.unwrap_or_default(),
                alphas: alpha,
                eps,
                seed,
                samples,
                fill: to_f64(&fill),
            };
            if !(0.0..=1.0).contains(&grid.fill) {
                return Err(Error::param("fill must lie in [0, 1]"));
            }
            let rep = sweep_theorem(kind, &grid)?;
            let mut w = sink(&out)?;
            write_tsv(&TSV_HEADER, &rep.tsv_rows(), &mut w)?;
            w.flush()?;
            if let Some(path) = &summary {
                let v = json!({
                    "kind": rep.kind,
                    "fitted": rep.fitted,
                    "spread": rep.spread,
                    "drift": rep.drift,
                    "skipped": rep.skipped,
                    "spacing_failures": rep.spacing_failures,
                });
                emit(&v, &Some(path.clone()))?;
            }
            for s in &rep.skipped {
                eprintln!("skipped {s}");
            }
            Ok(if rep.spacing_ok() {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("spacing condition fails for {}", rep.spacing_failures.join("; ")))
            })
        }
        Command::Report { input, out } => {
            let inst = load(&input)?;
            let p = params(&inst)?;
            let unrotated = inst.tubes.iter().all(|t| t.rotation().is_identity() && t.clip().is_unit());
            let tube_spacing = if unrotated && !inst.tubes.is_empty() {
                Some(render::tube_spacing(&verify_tube_spacing(&inst.tubes, &p)?))
            } else {
                None
            };
            let grid = if inst.balls.is_empty() {
                None
            } else {
                Some(render::grid_spacing(&verify_ball_grid_spacing(&inst.balls, &p, GridOrientation::DirectionSeparated)?))
            };
            let report = count_incidences(&inst.balls, &inst.tubes, Engine::Grid)?;
            let v = json!({
                "delta": format_scalar(&inst.delta),
                "W": format_scalar(&inst.w),
                "X": format_scalar(&inst.x),
                "K": inst.k,
                "balls": inst.balls.len(),
                "tubes": inst.tubes.len(),
                "incidences": report.total,
                "tube_histogram": report.tube_histogram,
                "ball_histogram": report.ball_histogram,
                "tube_spacing": tube_spacing,
                "ball_grid": grid,
            });
            emit(&v, &out)?;
            Ok(Outcome::Pass)
        }
    }
}

fn need<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::param(format!("--{what} is required for this example")))
}

fn furst_files(ex: &FurstenbergExample) -> (Instance, Value) {
    let mut inst = Instance::new(ex.delta.clone(), int(ex.w as i64), int(ex.x as i64));
    inst.balls = ex.balls.clone();
    inst.tubes = ex.tubes.clone();
    let cert = json!({
        "alpha": format_scalar(&ex.alpha),
        "witnesses": ex.witnesses,
        "case": ex.case,
        "certificate": ex.certificate,
        "intervals": ex.intervals.iter().map(|(a, b)| [format_scalar(a), format_scalar(b)]).collect::<Vec<_>>(),
    });
    (inst, cert)
}

fn gen_example(a: GenArgs) -> Result<Outcome> {
    let p = SpacingParams::new(a.delta.clone(), a.w.clone(), a.x.clone())?;
    let (w, x) = (as_u64(&a.w, "W")?, as_u64(&a.x, "X")?);
    let name = match a.name {
        ExampleName::StCase1 => "st-case1",
        ExampleName::StCase2 => "st-case2",
        ExampleName::FurstStrips => "furst-strips",
        ExampleName::FurstIntersected => "furst-intersected",
        ExampleName::FurstSqrt2 => "furst-sqrt2",
    };
    let (inst, cert) = match a.name {
        ExampleName::StCase1 => {
            let r = need(a.r, "r")?;
            let window = if a.separated { FractionWindow::separated() } else { FractionWindow::wide() };
            let ex = build_case1(&p, r, &window)?;
            if ex.fractions.is_empty() {
                eprintln!("warning: no admissible heights p/q for these parameters; the family has no rich points");
            }
            let mut inst = Instance::new(a.delta.clone(), a.w.clone(), a.x.clone());
            inst.tubes = ex.tubes.clone();
            inst.balls = ex.balls();
            let centers: Vec<_> = ex.points.iter().map(|q| q.center.clone()).collect();
            let points: Vec<Value> = ex
                .points
                .iter()
                .map(|q| json!({"c": q.c, "p": q.p, "q": q.q, "center": render::point(&q.center), "solutions": q.solutions}))
                .collect();
            let ratio = ex.points.len() as f64 * (r as f64).powi(3) / ((w * w * x * x) as f64);
            let cert = json!({
                "r": r,
                "fractions": ex.fractions.iter().map(|(p, q)| format!("{p}/{q}")).collect::<Vec<_>>(),
                "points": points,
                "min_solutions": ex.min_solutions(),
                "min_separation_sq": min_pairwise_dist_sq(&centers).as_ref().map(format_scalar),
                "ratio": ratio,
            });
            (inst, cert)
        }
        ExampleName::StCase2 => {
            let r = need(a.r, "r")?;
            let ex = build_case2(&p, r)?;
            let mut inst = Instance::new(a.delta.clone(), a.w.clone(), a.x.clone());
            inst.tubes = ex.tubes.clone();
            let cert = json!({
                "r": r,
                "apexes": ex.apexes.iter().map(render::point).collect::<Vec<_>>(),
                "expected": (w * x * x) as f64 / (r * r) as f64,
            });
            (inst, cert)
        }
        ExampleName::FurstStrips => furst_files(&build_furst_strips(&a.delta, &need(a.alpha, "alpha")?, w, x)?),
        ExampleName::FurstIntersected => furst_files(&build_furst_intersected(&a.delta, &need(a.alpha, "alpha")?, w, x)?),
        ExampleName::FurstSqrt2 => furst_files(&build_furst_sqrt2(&a.delta, &need(a.alpha, "alpha")?, x, w, a.divisor)?),
    };
    let out = a.out.unwrap_or_else(|| PathBuf::from(format!("{name}.csv")));
    let cert_path = a.cert.unwrap_or_else(|| PathBuf::from(format!("{name}.json")));
    let mut f = BufWriter::new(File::create(&out)?);
    write_instance(&inst, &mut f)?;
    f.flush()?;
    emit(&cert, &Some(cert_path))?;
    Ok(Outcome::Pass)
}

fn furst_bound(
    input: &Path,
    witness: &Path,
    crossings: Crossings,
    out: &Option<PathBuf>,
    tsv: &Option<PathBuf>,
) -> Result<Outcome> {
    let inst = load(input)?;
    let wf: WitnessFile = read_json(BufReader::new(File::open(witness)?))?;
    let alpha: Scalar = wf.alpha()?;
    let fi = FurstInstance {
        delta: inst.delta.clone(),
        alpha: alpha.clone(),
        w: as_u64(&inst.w, "W")?,
        x: as_u64(&inst.x, "X")?,
        tubes: inst.tubes,
        balls: inst.balls,
        witnesses: wf.witnesses,
    };
    let method = match crossings {
        Crossings::Bucketed => CrossingMethod::Bucketed,
        Crossings::Brute => CrossingMethod::Brute,
        Crossings::Checked => CrossingMethod::Checked,
    };
    let run = run_pipeline(&fi, method)?;
    let n = inverse_integer(&fi.delta)?;
    let a = to_f64(&alpha);
    let edge_count = if case1_hypothesis(n, a, fi.w, fi.x) {
        serde_json::to_value(edge_count_case1(&fi, &run)?).map_err(|e| Error::Io(e.into()))?
    } else {
        let p = SpacingParams::from_ints(n, fi.w, fi.x)?;
        match edge_count_case2(&p, &alpha) {
            Ok(r) => json!({"reduced": r}),
            Err(e) => json!({"reduced": null, "note": e.to_string()}),
        }
    };
    let c = &run.certificate;
    let v = json!({
        "bound": c,
        "regimes": regime_report(n, a, fi.w, fi.x),
        "edge_count": edge_count,
    });
    emit(&v, out)?;
    if let Some(path) = tsv {
        let fresh = !path.exists();
        let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        let row = vec![vec![c.delta.clone(), c.balls.to_string(), c.lemma.to_string(), c.target.to_string()]];
        if fresh {
            write_tsv(&["delta", "balls", "lemma", "target"], &row, &mut f)?;
        } else {
            writeln!(f, "{}", row[0].join("\t"))?;
        }
    }
    let mut problems = Vec::new();
    if !c.identity_holds() {
        problems.push(format!("edge multiplicities sum to {} but path lengths to {}", c.edge_multiplicity, c.path_lengths));
    }
    if !c.crossings_within_pairs() {
        problems.push(format!("{} drawing crossings exceed {} tube pairs", c.drawing_crossings, c.pair_bound));
    }
    if c.edges > 0 && c.vertex_ratio < 1.0 / 64.0 {
        problems.push(format!("|V| / L = {} is below 1/64", c.vertex_ratio));
    }
    Ok(if problems.is_empty() { Outcome::Pass } else { Outcome::Fail(problems.join("; ")) })
}
