use deltalab::geometry::{
    ball_distinct_factor, dist_point_segment_sq, incident, lattice_balls, Ball, Point, Segment, Tube,
};
use deltalab::scalar::{int, rat, to_f64};

fn p(x: (i64, i64), y: (i64, i64)) -> Point {
    Point::new(rat(x.0, x.1), rat(y.0, y.1))
}

fn vertical_half() -> Tube {
    Tube::new(rat(1, 2), int(0), rat(1, 100)).unwrap()
}

#[test]
fn incidence_thresholds_around_two_delta() {
    let t = vertical_half();
    let d = rat(1, 100);
    let ball = |c: Point| Ball::new(c, d.clone()).unwrap();
    assert!(incident(&ball(p((1, 2), (1, 2))), &t).unwrap());
    assert!(!incident(&ball(p((9, 10), (1, 2))), &t).unwrap());
    assert!(incident(&ball(Point::new(rat(1, 2) + rat(39, 2000), rat(1, 2))), &t).unwrap());
    assert!(!incident(&ball(Point::new(rat(1, 2) + rat(41, 2000), rat(1, 2))), &t).unwrap());
    // exactly at 2 delta counts
    assert!(incident(&ball(Point::new(rat(1, 2) + rat(1, 50), rat(1, 2))), &t).unwrap());
}

#[test]
fn mismatched_radii_are_rejected() {
    let b = Ball::new(p((1, 2), (1, 2)), rat(1, 64)).unwrap();
    assert!(incident(&b, &vertical_half()).is_err());
}

/// Overlap fraction of two unit disks at center distance `d`.
fn lens_fraction(d: f64) -> f64 {
    let h = d / 2.0;
    2.0 * (h.acos() - h * (1.0 - h * h).sqrt()) / std::f64::consts::PI
}

#[test]
fn half_measure_threshold_matches_lens_area() {
    let (mut lo, mut hi) = (0.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if lens_fraction(mid) > 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((to_f64(&ball_distinct_factor()) - lo).abs() < 1e-12, "{lo}");
}

#[test]
fn ball_distinctness_examples() {
    let d = rat(1, 64);
    let a = Ball::new(p((1, 2), (1, 2)), d.clone()).unwrap();
    let at = |s: deltalab::scalar::Scalar| Ball::new(Point::new(rat(1, 2) + s * &d, rat(1, 2)), d.clone()).unwrap();
    assert!(!a.essentially_distinct(&a).unwrap());
    assert!(a.essentially_distinct(&at(int(2))).unwrap());
    assert!(a.essentially_distinct(&at(rat(81, 100))).unwrap());
    assert!(!a.essentially_distinct(&at(rat(80, 100))).unwrap());
}

#[test]
fn lattice_sizes() {
    assert_eq!(lattice_balls(&rat(1, 2)).unwrap().len(), 25);
    assert_eq!(lattice_balls(&rat(1, 4)).unwrap().len(), 81);
    assert_eq!(lattice_balls(&rat(1, 64)).unwrap().len(), 129 * 129);
}

#[test]
fn point_segment_distances() {
    let s = Segment { a: p((0, 1), (0, 1)), b: p((1, 1), (0, 1)) };
    assert_eq!(dist_point_segment_sq(&p((0, 1), (0, 1)), &s), int(0));
    assert_eq!(dist_point_segment_sq(&p((1, 2), (1, 3)), &s), rat(1, 9));
    assert_eq!(dist_point_segment_sq(&p((2, 1), (1, 1)), &s), int(2));
}

#[test]
fn steep_and_shallow_tubes_clip_to_the_square() {
    let t = Tube::new(int(0), int(1), rat(1, 64)).unwrap();
    let mut ends = [t.segment().a.clone(), t.segment().b.clone()];
    ends.sort_by(|x, y| x.x.cmp(&y.x));
    assert_eq!(ends, [p((0, 1), (0, 1)), p((1, 1), (1, 1))]);
    assert!(Tube::new(int(0), rat(3, 2), rat(1, 64)).is_err());
}
