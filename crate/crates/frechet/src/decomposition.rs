//! Splitting a curve into long segments and short pieces.
//!
//! A long segment has length at least `Λ`. A piece is a maximal run that
//! stays strictly within distance `Λ` of its first vertex and is cut where it
//! first reaches distance exactly `Λ`; the cut point becomes a new vertex.

use crate::curves::{dist, dist2, Curve};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartKind {
    LongSegment,
    Piece,
}

/// Vertex range `start..=end` of the augmented curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Part {
    pub kind: PartKind,
    pub start: usize,
    pub end: usize,
}

impl Part {
    pub fn vertex_count(&self) -> usize {
        self.end - self.start + 1
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub augmented: Curve,
    pub parts: Vec<Part>,
    /// Indices (into `augmented`) of cut vertices that were not original.
    pub inserted: Vec<usize>,
    pub lambda: f64,
    segment_part: Vec<usize>,
}

impl Decomposition {
    /// Index of the part containing augmented segment `i`.
    pub fn part_of_segment(&self, i: usize) -> usize {
        self.segment_part[i]
    }

    pub fn is_piece_segment(&self, i: usize) -> bool {
        self.parts[self.segment_part[i]].kind == PartKind::Piece
    }
}

/// `min(√ε / 2, 1/4) · δ`.
pub fn lambda(epsilon: f64, delta: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::ParameterDomain {
            name: "epsilon",
            value: epsilon,
            expected: "(0, 1]",
        });
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::ParameterDomain {
            name: "delta",
            value: delta,
            expected: "> 0",
        });
    }
    Ok((0.5 * epsilon.sqrt()).min(0.25) * delta)
}

pub fn decompose(curve: &Curve, lambda: f64) -> Result<Decomposition> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::ParameterDomain {
            name: "lambda",
            value: lambda,
            expected: "> 0",
        });
    }
    let n = curve.len();
    let dim = curve.dim();
    let snap = 1e-12 * (1.0 + lambda);
    let l2 = lambda * lambda;

    let mut out: Vec<f64> = curve.vertex(0).to_vec();
    let mut parts = Vec::new();
    let mut inserted = Vec::new();
    // `cur` is the augmented index of the current vertex, `next` the first
    // original vertex strictly after it.
    let mut cur = 0usize;
    let mut next = 1usize;

    while next < n {
        let start: Vec<f64> = out[cur * dim..(cur + 1) * dim].to_vec();
        if dist2(&start, curve.vertex(next)) >= l2 {
            out.extend_from_slice(curve.vertex(next));
            parts.push(Part {
                kind: PartKind::LongSegment,
                start: cur,
                end: cur + 1,
            });
            cur += 1;
            next += 1;
            continue;
        }
        let piece_start = cur;
        let mut j = next;
        while j < n && dist2(&start, curve.vertex(j)) < l2 {
            out.extend_from_slice(curve.vertex(j));
            cur += 1;
            j += 1;
        }
        if j == n {
            parts.push(Part {
                kind: PartKind::Piece,
                start: piece_start,
                end: cur,
            });
            break;
        }
        let prev: Vec<f64> = out[cur * dim..(cur + 1) * dim].to_vec();
        let target = curve.vertex(j);
        let lam = exit_parameter(&prev, target, &start, lambda);
        let y = crate::curves::lerp(&prev, target, lam);
        if dist(&y, target) <= snap {
            out.extend_from_slice(target);
            cur += 1;
            next = j + 1;
        } else if dist(&y, &prev) <= snap && cur > piece_start {
            next = j;
        } else {
            out.extend_from_slice(&y);
            cur += 1;
            inserted.push(cur);
            next = j;
        }
        parts.push(Part {
            kind: PartKind::Piece,
            start: piece_start,
            end: cur,
        });
    }

    let augmented = Curve::from_flat(dim, out)?;
    let mut segment_part = vec![0; augmented.len().saturating_sub(1)];
    for (k, part) in parts.iter().enumerate() {
        for s in part.start..part.end {
            segment_part[s] = k;
        }
    }
    Ok(Decomposition {
        augmented,
        parts,
        inserted,
        lambda,
        segment_part,
    })
}

/// Largest `λ ∈ [0,1]` with `‖a + λ(b-a) - c‖ = r`, given `a` strictly inside
/// and `b` on or outside the sphere.
fn exit_parameter(a: &[f64], b: &[f64], c: &[f64], r: f64) -> f64 {
    let mut qa = 0.0;
    let mut qb = 0.0;
    let mut qc = -r * r;
    for k in 0..a.len() {
        let d = b[k] - a[k];
        let w = a[k] - c[k];
        qa += d * d;
        qb += 2.0 * d * w;
        qc += w * w;
    }
    // qc < 0, so the roots have opposite signs and the positive one is wanted
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
    let s = disc.sqrt();
    let t = if qb >= 0.0 {
        (2.0 * qc) / (-qb - s)
    } else {
        (-qb + s) / (2.0 * qa)
    };
    t.clamp(0.0, 1.0)
}
