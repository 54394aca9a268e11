//! Instance files: a `delta,W,X,K` header, its values, then one object per
//! row, `B,x,y[,dual]` for balls and `T,u,v,k[,dual]` for tubes. Every
//! number is an exact rational `p/q` or integer.

use crate::duality::RotationCover;
use crate::error::{Error, Result};
use crate::geometry::{Ball, ClipWindow, Point, Rotation, Tube};
use crate::scalar::{format_scalar, parse_scalar, Scalar};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub delta: Scalar,
    pub w: Scalar,
    pub x: Scalar,
    /// rotation cover size; `1` means every tube is unrotated
    pub k: usize,
    pub balls: Vec<Ball>,
    pub tubes: Vec<Tube>,
}

impl Instance {
    pub fn new(delta: Scalar, w: Scalar, x: Scalar) -> Self {
        Instance { delta, w, x, k: 1, balls: Vec::new(), tubes: Vec::new() }
    }
}

fn rotation_for(cover: &Option<RotationCover>, k: usize, line: usize) -> Result<Rotation> {
    match cover {
        None if k == 0 => Ok(Rotation::identity()),
        None => Err(Error::parse(line, "rotation index needs K > 1")),
        Some(c) if k < c.len() => Ok(c.rotation(k).clone()),
        Some(_) => Err(Error::parse(line, format!("rotation index {k} out of range"))),
    }
}

pub fn read_instance<R: Read>(input: R) -> Result<Instance> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(input);
    let mut rows = rdr.records().enumerate();
    let mut next = || -> Result<Option<(usize, csv::StringRecord)>> {
        for (i, rec) in rows.by_ref() {
            let rec = rec.map_err(|e| Error::parse(i + 1, e))?;
            if rec.iter().all(|f| f.is_empty()) || rec.get(0).is_some_and(|f| f.starts_with('#')) {
                continue;
            }
            return Ok(Some((i + 1, rec)));
        }
        Ok(None)
    };
    let (line, head) = next()?.ok_or_else(|| Error::parse(1, "empty instance file"))?;
    let names: Vec<&str> = head.iter().collect();
    if names != ["delta", "W", "X", "K"] {
        return Err(Error::parse(line, "expected header delta,W,X,K"));
    }
    let (line, vals) = next()?.ok_or_else(|| Error::parse(line + 1, "missing parameter row"))?;
    if vals.len() != 4 {
        return Err(Error::parse(line, "parameter row needs four fields"));
    }
    let num = |s: &str, l: usize| parse_scalar(s).map_err(|e| Error::parse(l, e));
    let delta = num(&vals[0], line)?;
    let w = num(&vals[1], line)?;
    let x = num(&vals[2], line)?;
    let k: usize = vals[3].parse().map_err(|_| Error::parse(line, "K must be a positive integer"))?;
    if k == 0 {
        return Err(Error::parse(line, "K must be a positive integer"));
    }
    let cover = if k > 1 { Some(RotationCover::new(k)?) } else { None };
    let mut inst = Instance { delta: delta.clone(), w, x, k, balls: Vec::new(), tubes: Vec::new() };
    while let Some((line, rec)) = next()? {
        let tag = if &rec[0] == "B" { 3 } else { 4 };
        let window = match rec.get(tag) {
            None | Some("") | Some("unit") => ClipWindow::unit(),
            Some("dual") => ClipWindow::dual(),
            Some(other) => return Err(Error::parse(line, format!("unknown window {other:?}"))),
        };
        match (&rec[0], rec.len()) {
            ("B", 3 | 4) => {
                let c = Point::new(num(&rec[1], line)?, num(&rec[2], line)?);
                inst.balls.push(Ball::new_in(c, delta.clone(), &window).map_err(|e| Error::parse(line, e))?);
            }
            ("T", 4 | 5) => {
                let idx: usize = rec[3].parse().map_err(|_| Error::parse(line, "bad rotation index"))?;
                let rot = rotation_for(&cover, idx, line)?;
                let t = Tube::with_frame(num(&rec[1], line)?, num(&rec[2], line)?, delta.clone(), rot, window)
                    .map_err(|e| Error::parse(line, e))?;
                inst.tubes.push(t);
            }
            _ => return Err(Error::parse(line, "expected B,x,y or T,u,v,k")),
        }
    }
    Ok(inst)
}

fn window_tag(w: &ClipWindow) -> Option<&'static str> {
    if w.is_unit() {
        None
    } else {
        Some("dual")
    }
}

pub fn write_instance<W: Write>(inst: &Instance, out: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().flexible(true).from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    wtr.write_record(["delta", "W", "X", "K"]).map_err(csv_err)?;
    wtr.write_record([format_scalar(&inst.delta), format_scalar(&inst.w), format_scalar(&inst.x), inst.k.to_string()])
        .map_err(csv_err)?;
    for b in &inst.balls {
        let mut rec = vec!["B".to_string(), format_scalar(&b.center().x), format_scalar(&b.center().y)];
        if Ball::new(b.center().clone(), b.radius().clone()).is_err() {
            rec.push("dual".into());
        }
        wtr.write_record(&rec).map_err(csv_err)?;
    }
    for t in &inst.tubes {
        let mut rec = vec![
            "T".to_string(),
            format_scalar(t.position()),
            format_scalar(t.direction()),
            t.rotation().index.to_string(),
        ];
        if let Some(tag) = window_tag(t.clip()) {
            rec.push(tag.into());
        }
        wtr.write_record(&rec).map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Sidecar for Furstenberg instances: `witnesses[t]` indexes the balls.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WitnessFile {
    pub alpha: String,
    pub witnesses: Vec<Vec<usize>>,
}

impl WitnessFile {
    pub fn alpha(&self) -> Result<Scalar> {
        parse_scalar(&self.alpha)
    }
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::Io(e.into()))?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>, R: Read>(input: R) -> Result<T> {
    serde_json::from_reader(input).map_err(|e| Error::parse(e.line(), e))
}

/// Tab-separated table with a header row.
pub fn write_tsv<W: Write>(header: &[&str], rows: &[Vec<String>], mut out: W) -> Result<()> {
    writeln!(out, "{}", header.join("\t"))?;
    for r in rows {
        writeln!(out, "{}", r.join("\t"))?;
    }
    Ok(())
}
