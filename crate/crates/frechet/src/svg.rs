//! SVG rendering of the free-space diagram.
//!
//! The diagram is drawn over the augmented curves so that piece rectangles
//! fall on cell boundaries. Each cell is a square shaded by the fraction of
//! its area that is free; the fraction is integrated from exact free
//! intervals on a fixed number of slices. Reachable boundary intervals are
//! drawn on top in red. Above [`MAX_ELEMENTS`] cells are merged into coarser
//! tiles and the reachable overlay is dropped.

use std::fmt::Write;

use crate::baseline::{free_interval, propagate_cell, FreeSpaceCell, Interval};
use crate::curves::{check_same_dim, dist, lerp, Curve};
use crate::decomposition::{decompose, lambda, PartKind};
use crate::error::Result;

pub const MAX_ELEMENTS: usize = 250_000;
const SLICES: usize = 16;
const CANVAS: f64 = 1000.0;

/// Fraction of cell `(i, j)` inside the free space.
fn free_fraction(pi: &Curve, sigma: &Curve, i: usize, j: usize, delta: f64) -> f64 {
    let (s0, s1) = (sigma.vertex(j), sigma.vertex(j + 1));
    let mut sum = 0.0;
    for k in 0..SLICES {
        let p = lerp(
            pi.vertex(i),
            pi.vertex(i + 1),
            (k as f64 + 0.5) / SLICES as f64,
        );
        if let Some(f) = free_interval(s0, s1, &p, delta) {
            sum += f.hi - f.lo;
        }
    }
    sum / SLICES as f64
}

/// Reachable parts of every bottom edge (`[j][i]`, row `j` from 0 to `rows`)
/// and left edge (`[i][j]`, column `i` from 0 to `cols`).
#[allow(clippy::type_complexity)]
fn reachable_edges(
    pi: &Curve,
    sigma: &Curve,
    delta: f64,
) -> (Vec<Vec<Option<Interval>>>, Vec<Vec<Option<Interval>>>) {
    let (cols, rows) = (pi.len() - 1, sigma.len() - 1);
    let mut horizontal = vec![vec![None; cols]; rows + 1];
    let mut vertical = vec![vec![None; rows]; cols + 1];
    if dist(pi.vertex(0), sigma.vertex(0)) > delta {
        return (horizontal, vertical);
    }
    // along the diagram's bottom and left borders reachability runs straight
    let mut open = true;
    for i in 0..cols {
        let free = free_interval(pi.vertex(i), pi.vertex(i + 1), sigma.vertex(0), delta);
        horizontal[0][i] = free.filter(|f| open && f.lo == 0.0);
        open = horizontal[0][i].is_some_and(|f| f.hi == 1.0);
    }
    open = true;
    for j in 0..rows {
        let free = free_interval(sigma.vertex(j), sigma.vertex(j + 1), pi.vertex(0), delta);
        vertical[0][j] = free.filter(|f| open && f.lo == 0.0);
        open = vertical[0][j].is_some_and(|f| f.hi == 1.0);
    }
    for j in 0..rows {
        for i in 0..cols {
            let cell = FreeSpaceCell::new(pi, sigma, i, j, delta);
            let (top, right) = propagate_cell(&cell, horizontal[j][i], vertical[i][j]);
            horizontal[j + 1][i] = top;
            vertical[i + 1][j] = right;
        }
    }
    (horizontal, vertical)
}

/// Renders `D_{≤δ}` of the two curves. `epsilon` fixes the piece size used
/// for the outlined rectangles.
pub fn plot_freespace(pi: &Curve, sigma: &Curve, delta: f64, epsilon: f64) -> Result<String> {
    check_same_dim(pi, sigma)?;
    let lam = lambda(epsilon, delta)?;
    let (dp, ds) = (decompose(pi, lam)?, decompose(sigma, lam)?);
    let (p, s) = (&dp.augmented, &ds.augmented);
    let (cols, rows) = (
        p.len().saturating_sub(1).max(1),
        s.len().saturating_sub(1).max(1),
    );
    let unit = CANVAS / cols.max(rows) as f64;
    let (width, height) = (unit * cols as f64, unit * rows as f64);
    // diagram y grows upwards
    let y = |v: f64| height - v * unit;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="-10 -10 {:.3} {:.3}">"#,
        width + 20.0,
        height + 20.0,
        width + 20.0,
        height + 20.0
    );
    let _ = writeln!(
        out,
        r#"<title>free space at delta = {delta}, {} x {} cells</title>"#,
        cols, rows
    );
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{width:.3}" height="{height:.3}" fill="#ffffff" stroke="#000000" stroke-width="0.5"/>"##
    );
    if p.len() < 2 || s.len() < 2 {
        out.push_str("</svg>\n");
        return Ok(out);
    }

    let cells = cols * rows;
    let tile = ((cells as f64 / MAX_ELEMENTS as f64).sqrt().ceil() as usize).max(1);
    if tile > 1 {
        log::warn!("{cells} cells exceed the plot budget; merging {tile}x{tile} cells per tile and omitting reachability");
    }
    let mut elements = 0;
    for tj in (0..rows).step_by(tile) {
        for ti in (0..cols).step_by(tile) {
            let (ci, cj) = ((ti + tile).min(cols), (tj + tile).min(rows));
            let mut sum = 0.0;
            for j in tj..cj {
                for i in ti..ci {
                    sum += free_fraction(p, s, i, j, delta);
                }
            }
            let frac = sum / ((ci - ti) * (cj - tj)) as f64;
            if frac > 0.0 {
                let shade = (255.0 * (1.0 - frac)).round() as u8;
                let _ = writeln!(
                    out,
                    r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#{shade:02x}{shade:02x}ff"/>"##,
                    ti as f64 * unit,
                    y(cj as f64),
                    (ci - ti) as f64 * unit,
                    (cj - tj) as f64 * unit
                );
                elements += 1;
            }
        }
    }

    let pieces = |d: &crate::decomposition::Decomposition| -> Vec<(usize, usize)> {
        d.parts
            .iter()
            .filter(|q| q.kind == PartKind::Piece)
            .map(|q| (q.start, q.end))
            .collect()
    };
    let near = delta + 2.0 * lam;
    'outer: for &(x1, x2) in &pieces(&dp) {
        for &(y1, y2) in &pieces(&ds) {
            if dist(p.vertex(x1), s.vertex(y1)) > near {
                continue;
            }
            if elements >= MAX_ELEMENTS {
                log::warn!("piece outlines truncated at {MAX_ELEMENTS} elements");
                break 'outer;
            }
            let _ = writeln!(
                out,
                r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="#208020" stroke-width="1"/>"##,
                x1 as f64 * unit,
                y(y2 as f64),
                (x2 - x1) as f64 * unit,
                (y2 - y1) as f64 * unit
            );
            elements += 1;
        }
    }

    if tile == 1 {
        let (horizontal, vertical) = reachable_edges(p, s, delta);
        for (j, row) in horizontal.iter().enumerate() {
            for (i, iv) in row.iter().enumerate() {
                if let Some(iv) = iv {
                    let _ = writeln!(
                        out,
                        r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#d02020" stroke-width="1.5"/>"##,
                        (i as f64 + iv.lo) * unit,
                        y(j as f64),
                        (i as f64 + iv.hi) * unit,
                        y(j as f64)
                    );
                }
            }
        }
        for (i, column) in vertical.iter().enumerate() {
            for (j, iv) in column.iter().enumerate() {
                if let Some(iv) = iv {
                    let _ = writeln!(
                        out,
                        r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#d02020" stroke-width="1.5"/>"##,
                        i as f64 * unit,
                        y(j as f64 + iv.lo),
                        i as f64 * unit,
                        y(j as f64 + iv.hi)
                    );
                }
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
