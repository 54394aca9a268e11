use deltalab::geometry::{Point, Rect};
use deltalab::incidence::{GridSpacingReport, TubeSpacingReport, TubeViolationKind};
use deltalab::scalar::format_scalar;
use serde_json::{json, Value};

pub fn point(p: &Point) -> Value {
    json!([format_scalar(&p.x), format_scalar(&p.y)])
}

fn rect(r: &Rect) -> Value {
    json!({
        "corner": point(&r.corner),
        "width": format_scalar(&r.width),
        "height": format_scalar(&r.height),
        "long_axis": r.long_axis,
    })
}

pub fn tube_spacing(r: &TubeSpacingReport) -> Value {
    let violation = r.violation.as_ref().map(|v| {
        let kind = match &v.kind {
            TubeViolationKind::Count { count, limit } => json!({"count": count, "limit": limit}),
            TubeViolationKind::Gap { gap, first, second } => {
                json!({"gap": format_scalar(gap), "first": first, "second": second})
            }
        };
        json!({"bottom": format_scalar(&v.bottom), "top": format_scalar(&v.top), "kind": kind})
    });
    json!({
        "pass": r.pass,
        "wide_tubes_checked": r.wide_tubes_checked,
        "max_count": r.max_count,
        "min_gap": r.min_gap.as_ref().map(format_scalar),
        "violation": violation,
    })
}

pub fn grid_spacing(r: &GridSpacingReport) -> Value {
    let violation = r
        .violation
        .as_ref()
        .map(|v| json!({"cell": [v.cell.0, v.cell.1], "rect": rect(&v.rect), "balls": v.balls}));
    json!({
        "pass": r.pass,
        "occupied_cells": r.occupied_cells,
        "max_per_cell": r.max_per_cell,
        "violation": violation,
    })
}

pub fn describe_grid_violation(r: &GridSpacingReport) -> String {
    match &r.violation {
        Some(v) => format!(
            "cell ({}, {}) at ({}, {}) holds balls {:?}",
            v.cell.0,
            v.cell.1,
            format_scalar(&v.rect.corner.x),
            format_scalar(&v.rect.corner.y),
            v.balls
        ),
        None => "no violation".into(),
    }
}

pub fn describe_tube_violation(r: &TubeSpacingReport) -> String {
    match &r.violation {
        Some(v) => {
            let what = match &v.kind {
                TubeViolationKind::Count { count, limit } => format!("{count} tubes, limit {limit}"),
                TubeViolationKind::Gap { gap, first, second } => {
                    format!("tubes {first} and {second} only {} apart", format_scalar(gap))
                }
            };
            format!("wide tube from {} to {}: {what}", format_scalar(&v.bottom), format_scalar(&v.top))
        }
        None => "no violation".into(),
    }
}
