use deltalab::constructions::{
    build_case1, build_case2, build_furst_intersected, build_furst_sqrt2, build_furst_strips, case1_fractions,
    min_pairwise_dist_sq, FractionWindow, FurstCase,
};
use deltalab::geometry::{incident_exact, lattice_balls, Point, SpacingParams};
use deltalab::incidence::{rich_balls, verify_tube_spacing};
use deltalab::scalar::{rat, sq};
use deltalab::constructions::convergents::sqrt2_convergent;
use num_bigint::BigInt;
use num_integer::Integer;

#[test]
fn fraction_set_contains_the_listed_heights() {
    let s = case1_fractions(2, 4, 2, &FractionWindow::wide()).unwrap();
    for f in [(2, 3), (2, 5), (2, 7)] {
        assert!(s.contains(&f), "{f:?}");
    }
    // independent enumeration of the same window
    let mut brute = Vec::new();
    for q in 1..=200u64 {
        for p in (0..=q).step_by(2) {
            if p * 4 >= q && p * 4 <= 3 * q && p.gcd(&q) == 1 && 4 * 100 * p >= 4 * 2 && p <= 200 {
                brute.push((p, q));
            }
        }
    }
    let mut got = s.clone();
    got.sort();
    brute.sort();
    assert_eq!(got, brute);
}

#[test]
fn case1_points_solve_their_equation() {
    let p = SpacingParams::from_ints(256, 4, 16).unwrap();
    let ex = build_case1(&p, 2, &FractionWindow::separated()).unwrap();
    assert!(!ex.points.is_empty());
    for pt in &ex.points {
        for &(a, b) in &pt.solutions {
            let lhs = (pt.p * 4 / 16) * b + (pt.q - pt.p) * a;
            assert_eq!(lhs, pt.c);
            let ball = deltalab::geometry::Ball::new(pt.center.clone(), p.delta.clone()).unwrap();
            assert!(incident_exact(&ball, &ex.tubes[ex.tube_index(a, b)]));
        }
    }
    let centers: Vec<Point> = ex.points.iter().map(|q| q.center.clone()).collect();
    let min = min_pairwise_dist_sq(&centers).unwrap();
    assert!(min >= sq(&rat(2, 64)));
    assert!(min >= sq(&p.delta));
}

#[test]
fn bush_counts_near_apexes() {
    let p = SpacingParams::from_ints(256, 1, 8).unwrap();
    let ex = build_case2(&p, 4).unwrap();
    assert_eq!(ex.apexes.len(), 2);
    let rich = rich_balls(&ex.tubes, &p, 4).unwrap();
    assert!(!rich.balls.is_empty());
    assert!(build_case2(&p, 1).is_err());
}

#[test]
fn strips_saturate_as_alpha_grows() {
    let d = rat(1, 64);
    let full = lattice_balls(&d).unwrap().len();
    let near_one = build_furst_strips(&d, &rat(99, 100), 2, 8).unwrap();
    assert!(near_one.balls.len() * 2 >= full / 2);
    let half = build_furst_strips(&d, &rat(1, 2), 2, 8).unwrap();
    assert_eq!(half.case, FurstCase::Strips);
    // 8 strips 9 delta apart; lattice rows j/128 within delta of strip i are
    // 18i - 2 ..= 18i + 4, clipped to the square
    let rows: usize = (0..8i64).map(|i| ((18 * i - 2).max(0)..=(18 * i + 4).min(128)).count()).sum();
    assert_eq!(half.balls.len(), rows * 129);
    assert!((half.balls.len() as f64) <= 16.0 * 64f64.powf(1.5));
    assert!(half.balls.len() < near_one.balls.len());
}

#[test]
fn intersected_family_is_small() {
    let d = rat(1, 256);
    let ex = build_furst_intersected(&d, &rat(1, 2), 8, 8).unwrap();
    assert!((ex.balls.len() as f64) <= 16.0 * 16.0 * 64.0);
    assert!(ex.witnesses.iter().all(|w| w.windows(2).all(|p| ex.balls[p[0]].center().y < ex.balls[p[1]].center().y)));
}

#[test]
fn sqrt2_family_passes_spacing() {
    let d = rat(1, 256);
    let ex = build_furst_sqrt2(&d, &rat(1, 2), 256, 16, 1).unwrap();
    assert!(!ex.certificate.fallback);
    let p = SpacingParams::from_ints(256, 16, 256).unwrap();
    assert!(verify_tube_spacing(&ex.tubes, &p).unwrap().pass);
    for (t, w) in ex.tubes.iter().zip(&ex.witnesses) {
        for &b in w {
            assert!(incident_exact(&ex.balls[b], t));
        }
    }
}

#[test]
fn sqrt2_degenerates_to_the_intersected_family() {
    let d = rat(1, 256);
    let ex = build_furst_sqrt2(&d, &rat(9, 10), 16, 1, 1).unwrap();
    assert!(ex.certificate.fallback);
    assert_eq!(ex.case, FurstCase::Intersected);
}

#[test]
fn convergent_approximates_sqrt2() {
    let (p, q) = sqrt2_convergent(1000);
    assert!(q >= BigInt::from(1000));
    let pell = &p * &p - BigInt::from(2) * &q * &q;
    assert!(pell == BigInt::from(1) || pell == BigInt::from(-1));
}
