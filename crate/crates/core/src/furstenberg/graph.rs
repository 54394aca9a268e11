use super::pseudotube::{PseudoTube, Square};
use rayon::prelude::*;
use std::collections::HashMap;

/// Geometric graph on square centers; edges join consecutive squares of
/// `Y'(T)` for the tubes of the typical family.
#[derive(Clone, Debug, Default)]
pub struct CrossGraph {
    pub vertices: Vec<Square>,
    /// `(a, b)` with `a < b`, sorted
    pub edges: Vec<(u32, u32)>,
    /// number of tubes in which the edge is a consecutive pair
    pub multiplicity: Vec<u32>,
    index: HashMap<Square, u32>,
}

impl CrossGraph {
    /// `families[t]` lists `Y'(T)` in row order.
    pub fn build(families: &[&[Square]]) -> CrossGraph {
        let mut vertices: Vec<Square> = families.iter().flat_map(|f| f.iter().copied()).collect();
        vertices.sort_unstable();
        vertices.dedup();
        let index: HashMap<Square, u32> = vertices.iter().enumerate().map(|(i, &s)| (s, i as u32)).collect();
        let mut counts: HashMap<(u32, u32), u32> = HashMap::new();
        for f in families {
            for w in f.windows(2) {
                let (a, b) = (index[&w[0]], index[&w[1]]);
                *counts.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let mut edges: Vec<((u32, u32), u32)> = counts.into_iter().collect();
        edges.sort_unstable();
        let (edges, multiplicity) = edges.into_iter().unzip();
        CrossGraph { vertices, edges, multiplicity, index }
    }

    pub fn vertex(&self, s: Square) -> Option<u32> {
        self.index.get(&s).copied()
    }

    /// Vertex position in half-`delta` units; centers are odd.
    pub fn coords(&self, v: u32) -> (i64, i64) {
        let (c, r) = self.vertices[v as usize];
        (2 * c + 1, 2 * r + 1)
    }

    /// Edges with both endpoints in the pseudo-tube, by index.
    pub fn contained_edges(&self, pt: &PseudoTube, members: &[Square]) -> Vec<usize> {
        let mut out = Vec::new();
        for &s in members {
            let a = match self.vertex(s) {
                Some(a) => a,
                None => continue,
            };
            let lo = self.edges.partition_point(|e| e.0 < a);
            for (k, e) in self.edges[lo..].iter().enumerate() {
                if e.0 != a {
                    break;
                }
                if pt.contains(self.vertices[e.1 as usize]) {
                    out.push(lo + k);
                }
            }
        }
        out
    }
}

fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i64 {
    ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
}

fn on_segment(a: (i64, i64), b: (i64, i64), p: (i64, i64)) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

/// Edges without a shared endpoint cross when they meet properly or when
/// an endpoint lies on the other edge. Collinear pairs count zero.
pub fn segments_cross(p: [(i64, i64); 2], q: [(i64, i64); 2]) -> bool {
    let o1 = orient(p[0], p[1], q[0]);
    let o2 = orient(p[0], p[1], q[1]);
    let o3 = orient(q[0], q[1], p[0]);
    let o4 = orient(q[0], q[1], p[1]);
    if o1 == 0 && o2 == 0 {
        return false;
    }
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(p[0], p[1], q[0]))
        || (o2 == 0 && on_segment(p[0], p[1], q[1]))
        || (o3 == 0 && on_segment(q[0], q[1], p[0]))
        || (o4 == 0 && on_segment(q[0], q[1], p[1]))
}

fn edge_pair_crosses(g: &CrossGraph, i: usize, j: usize) -> bool {
    let (a, b) = g.edges[i];
    let (c, d) = g.edges[j];
    if a == c || a == d || b == c || b == d {
        return false;
    }
    segments_cross([g.coords(a), g.coords(b)], [g.coords(c), g.coords(d)])
}

/// Crossing pairs by checking every pair of edges.
pub fn crossings_brute(g: &CrossGraph) -> u64 {
    let m = g.edges.len();
    (0..m)
        .into_par_iter()
        .map(|i| ((i + 1)..m).filter(|&j| edge_pair_crosses(g, i, j)).count() as u64)
        .sum()
}

/// Crossing pairs through a uniform bucket grid over edge bounding boxes.
pub fn crossings(g: &CrossGraph) -> u64 {
    let m = g.edges.len();
    if m < 2 {
        return 0;
    }
    let boxes: Vec<[i64; 4]> = g
        .edges
        .iter()
        .map(|&(a, b)| {
            let (p, q) = (g.coords(a), g.coords(b));
            [p.0.min(q.0), p.1.min(q.1), p.0.max(q.0), p.1.max(q.1)]
        })
        .collect();
    let span = boxes.iter().fold([i64::MAX, i64::MAX, i64::MIN, i64::MIN], |s, b| {
        [s[0].min(b[0]), s[1].min(b[1]), s[2].max(b[2]), s[3].max(b[3])]
    });
    let side = ((span[2] - span[0]).max(span[3] - span[1]) + 1).max(1);
    let cells = ((m as f64).sqrt() as i64).clamp(1, 64);
    let size = (side + cells - 1) / cells;
    let cell = |x: i64, o: i64| (x - o) / size;
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); (cells * cells) as usize];
    for (i, b) in boxes.iter().enumerate() {
        for cx in cell(b[0], span[0])..=cell(b[2], span[0]) {
            for cy in cell(b[1], span[1])..=cell(b[3], span[1]) {
                buckets[(cx * cells + cy) as usize].push(i as u32);
            }
        }
    }
    buckets
        .par_iter()
        .enumerate()
        .map(|(k, list)| {
            let here = (k as i64 / cells, k as i64 % cells);
            let mut n = 0u64;
            for (x, &i) in list.iter().enumerate() {
                for &j in &list[x + 1..] {
                    let (bi, bj) = (&boxes[i as usize], &boxes[j as usize]);
                    // count a pair once, in the first cell of the box overlap
                    let ox = cell(bi[0].max(bj[0]), span[0]);
                    let oy = cell(bi[1].max(bj[1]), span[1]);
                    if (ox, oy) == here && bi[0] <= bj[2] && bj[0] <= bi[2] && bi[1] <= bj[3] && bj[1] <= bi[3] {
                        n += edge_pair_crosses(g, i as usize, j as usize) as u64;
                    }
                }
            }
            n
        })
        .sum()
}
