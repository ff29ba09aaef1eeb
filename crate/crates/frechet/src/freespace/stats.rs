//! The complexity measure `N = |S| + Σ_T (|π^s| + |σ^t|)`.
//!
//! `S` holds the cells of the augmented curves that are nonempty at (1+ε)δ
//! and have at least one long segment; `T` the piece pairs whose first
//! vertices are within `(1+ε)δ + 2Λ`. Computed independently of the sweep.

use std::collections::HashMap;

use serde::Serialize;

use crate::curves::{check_same_dim, dist2, segment_dist2, Curve};
use crate::decomposition::{decompose, lambda, Decomposition, PartKind};
use crate::error::Result;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ComplexityStats {
    #[serde(rename = "S")]
    pub nonempty_boundary_cells: usize,
    #[serde(rename = "piece_pair_sum")]
    pub piece_pair_size_sum: usize,
    #[serde(rename = "N")]
    pub total: usize,
}

impl ComplexityStats {
    pub fn new(nonempty_boundary_cells: usize, piece_pair_size_sum: usize) -> ComplexityStats {
        ComplexityStats {
            nonempty_boundary_cells,
            piece_pair_size_sum,
            total: nonempty_boundary_cells + piece_pair_size_sum,
        }
    }
}

/// Grid cells a box may cover before its segment is checked against
/// everything instead.
const MAX_BUCKETS: i64 = 4096;

/// Uniform grid over the first (at most) two coordinates.
struct Buckets {
    size: f64,
    axes: usize,
    map: HashMap<(i64, i64), Vec<usize>>,
    wide: Vec<usize>,
}

impl Buckets {
    fn new(size: f64, dim: usize) -> Buckets {
        Buckets {
            size,
            axes: dim.min(2),
            map: HashMap::new(),
            wide: Vec::new(),
        }
    }

    /// Bucket ranges covering the box of `points` grown by `pad`, or `None`
    /// if there are too many.
    fn range(&self, points: &[&[f64]], pad: f64) -> Option<[(i64, i64); 2]> {
        let mut out = [(0i64, 0i64); 2];
        let mut count = 1i64;
        for (axis, slot) in out.iter_mut().enumerate().take(self.axes) {
            let lo = points.iter().map(|p| p[axis]).fold(f64::INFINITY, f64::min) - pad;
            let hi = points
                .iter()
                .map(|p| p[axis])
                .fold(f64::NEG_INFINITY, f64::max)
                + pad;
            let (a, b) = ((lo / self.size).floor(), (hi / self.size).floor());
            if !(b - a < MAX_BUCKETS as f64) {
                return None;
            }
            *slot = (a as i64, b as i64);
            count = count.saturating_mul(b as i64 - a as i64 + 1);
        }
        (count <= MAX_BUCKETS).then_some(out)
    }

    fn insert(&mut self, id: usize, points: &[&[f64]], pad: f64) {
        match self.range(points, pad) {
            Some([(x0, x1), (y0, y1)]) => {
                for x in x0..=x1 {
                    for y in y0..=y1 {
                        self.map.entry((x, y)).or_default().push(id);
                    }
                }
            }
            None => self.wide.push(id),
        }
    }

    /// Ids whose padded box may meet the box of `points`; `None` means
    /// "possibly all".
    fn query(&self, points: &[&[f64]], out: &mut Vec<usize>) -> bool {
        out.clear();
        out.extend_from_slice(&self.wide);
        match self.range(points, 0.0) {
            Some([(x0, x1), (y0, y1)]) => {
                for x in x0..=x1 {
                    for y in y0..=y1 {
                        if let Some(ids) = self.map.get(&(x, y)) {
                            out.extend_from_slice(ids);
                        }
                    }
                }
                out.sort_unstable();
                out.dedup();
                true
            }
            None => false,
        }
    }
}

fn segment(c: &Curve, i: usize) -> [&[f64]; 2] {
    [c.vertex(i), c.vertex(i + 1)]
}

fn cell_counts(dp: &Decomposition, ds: &Decomposition, reach: f64, i: usize, j: usize) -> bool {
    let (p, s) = (&dp.augmented, &ds.augmented);
    (!dp.is_piece_segment(i) || !ds.is_piece_segment(j))
        && segment_dist2(p.vertex(i), p.vertex(i + 1), s.vertex(j), s.vertex(j + 1))
            <= reach * reach
}

fn piece_starts(d: &Decomposition) -> Vec<(usize, usize)> {
    d.parts
        .iter()
        .filter(|p| p.kind == PartKind::Piece)
        .map(|p| (p.start, p.vertex_count()))
        .collect()
}

/// `N(π, σ, δ, ε)` by spatial hashing; output equals
/// [`complexity_stats_bruteforce`].
pub fn complexity_stats(
    pi: &Curve,
    sigma: &Curve,
    delta: f64,
    epsilon: f64,
) -> Result<ComplexityStats> {
    check_same_dim(pi, sigma)?;
    let lam = lambda(epsilon, delta)?;
    let (dp, ds) = (decompose(pi, lam)?, decompose(sigma, lam)?);
    let (p, s) = (&dp.augmented, &ds.augmented);
    let reach = (1.0 + epsilon) * delta;

    let mut cells = 0;
    let (cols, rows) = (p.len() - 1, s.len() - 1);
    if cols > 0 && rows > 0 {
        let mut grid = Buckets::new(reach, p.dim());
        for j in 0..rows {
            grid.insert(j, &segment(s, j), reach);
        }
        let mut cand = Vec::new();
        for i in 0..cols {
            if grid.query(&segment(p, i), &mut cand) {
                cells += cand
                    .iter()
                    .filter(|&&j| cell_counts(&dp, &ds, reach, i, j))
                    .count();
            } else {
                cells += (0..rows)
                    .filter(|&j| cell_counts(&dp, &ds, reach, i, j))
                    .count();
            }
        }
    }

    let radius = reach + 2.0 * lam;
    let mut grid = Buckets::new(radius, p.dim());
    let sigma_pieces = piece_starts(&ds);
    for (t, &(start, _)) in sigma_pieces.iter().enumerate() {
        grid.insert(t, &[s.vertex(start)], radius);
    }
    let mut pairs = 0;
    let mut cand = Vec::new();
    for (start, size) in piece_starts(&dp) {
        let x = p.vertex(start);
        let all = !grid.query(&[x], &mut cand);
        let ids: Box<dyn Iterator<Item = usize>> = if all {
            Box::new(0..sigma_pieces.len())
        } else {
            Box::new(cand.iter().copied())
        };
        for t in ids {
            let (ts, tsize) = sigma_pieces[t];
            if dist2(x, s.vertex(ts)) <= radius * radius {
                pairs += size + tsize;
            }
        }
    }
    Ok(ComplexityStats::new(cells, pairs))
}

/// Quadratic enumeration of the same quantity.
pub fn complexity_stats_bruteforce(
    pi: &Curve,
    sigma: &Curve,
    delta: f64,
    epsilon: f64,
) -> Result<ComplexityStats> {
    check_same_dim(pi, sigma)?;
    let lam = lambda(epsilon, delta)?;
    let (dp, ds) = (decompose(pi, lam)?, decompose(sigma, lam)?);
    let reach = (1.0 + epsilon) * delta;
    let (cols, rows) = (dp.augmented.len() - 1, ds.augmented.len() - 1);
    let mut cells = 0;
    for i in 0..cols {
        for j in 0..rows {
            if cell_counts(&dp, &ds, reach, i, j) {
                cells += 1;
            }
        }
    }
    let radius = reach + 2.0 * lam;
    let mut pairs = 0;
    for (a, sa) in piece_starts(&dp) {
        for (b, sb) in piece_starts(&ds) {
            if dist2(dp.augmented.vertex(a), ds.augmented.vertex(b)) <= radius * radius {
                pairs += sa + sb;
            }
        }
    }
    Ok(ComplexityStats::new(cells, pairs))
}
