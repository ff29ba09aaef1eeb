//! Polygonal curves in R^d, parsing, packedness estimation and generators.
//!
//! Vertex indices and curve parameters are zero-based: a curve with `n`
//! vertices is parameterized over `[0, n-1]`, and parameter `i + λ` is the
//! point `(1-λ)·v_i + λ·v_{i+1}`.

mod generate;
mod io;
mod packed;

pub use generate::{gen_cpacked, gen_cpacked_pair, PAIR_NOISE, PAIR_STEP};
pub use io::{parse_curve, read_curve, write_curve};
pub use packed::packedness_estimate;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

/// A discrete traversal: index pairs from `(0, 0)` to `(n-1, m-1)`, each step
/// advancing one or both indices by one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub steps: Vec<(usize, usize)>,
}

impl Witness {
    pub fn is_valid(&self, n: usize, m: usize) -> bool {
        let s = &self.steps;
        if s.first() != Some(&(0, 0)) || s.last() != Some(&(n - 1, m - 1)) {
            return false;
        }
        s.windows(2).all(|w| {
            let (dp, dq) = (w[1].0.wrapping_sub(w[0].0), w[1].1.wrapping_sub(w[0].1));
            dp <= 1 && dq <= 1 && dp + dq >= 1
        })
    }
}

/// Vertices are stored row-major in one flat buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    dim: usize,
    coords: Vec<f64>,
}

impl Curve {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Curve> {
        let first = vertices.first().ok_or(Error::EmptyCurve)?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::ParameterDomain {
                name: "dimension",
                value: 0.0,
                expected: ">= 1",
            });
        }
        let mut coords = Vec::with_capacity(dim * vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(dim, v.len()));
            }
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite(i));
            }
            coords.extend_from_slice(v);
        }
        Ok(Curve { dim, coords })
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Curve> {
        if dim == 0 || coords.is_empty() || coords.len() % dim != 0 {
            return Err(Error::EmptyCurve);
        }
        if let Some(k) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(k / dim));
        }
        Ok(Curve { dim, coords })
    }

    /// Convenience for one-dimensional curves.
    pub fn from_values(values: &[f64]) -> Result<Curve> {
        Curve::from_flat(1, values.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn flat(&self) -> &[f64] {
        &self.coords
    }

    /// Point at parameter `t ∈ [0, n-1]`; exact at integers.
    pub fn point_at(&self, t: f64) -> Result<Point> {
        let n = self.len();
        if !(t >= 0.0 && t <= (n - 1) as f64) {
            return Err(Error::ParameterDomain {
                name: "t",
                value: t,
                expected: "[0, n-1]",
            });
        }
        let i = t.floor() as usize;
        let lam = t - i as f64;
        if lam == 0.0 || i + 1 >= n {
            return Ok(Point(self.vertex(i.min(n - 1)).to_vec()));
        }
        Ok(Point(lerp(self.vertex(i), self.vertex(i + 1), lam)))
    }

    pub fn segment_length(&self, i: usize) -> f64 {
        dist(self.vertex(i), self.vertex(i + 1))
    }

    /// Sub-curve over vertices `a..=b`.
    pub fn slice(&self, a: usize, b: usize) -> Curve {
        Curve {
            dim: self.dim,
            coords: self.coords[a * self.dim..(b + 1) * self.dim].to_vec(),
        }
    }
}

pub fn total_length(curve: &Curve) -> f64 {
    (0..curve.len().saturating_sub(1))
        .map(|i| curve.segment_length(i))
        .sum()
}

pub fn check_same_dim(a: &Curve, b: &Curve) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(())
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

pub fn lerp(a: &[f64], b: &[f64], lam: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + lam * (y - x)).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Squared distance between segments `[a0,a1]` and `[b0,b1]`.
pub fn segment_dist2(a0: &[f64], a1: &[f64], b0: &[f64], b1: &[f64]) -> f64 {
    let d1: Vec<f64> = a1.iter().zip(a0).map(|(x, y)| x - y).collect();
    let d2: Vec<f64> = b1.iter().zip(b0).map(|(x, y)| x - y).collect();
    let r: Vec<f64> = a0.iter().zip(b0).map(|(x, y)| x - y).collect();
    let a = dot(&d1, &d1);
    let e = dot(&d2, &d2);
    let f = dot(&d2, &r);
    let (s, t);
    if a <= f64::EPSILON && e <= f64::EPSILON {
        return dist2(a0, b0);
    }
    if a <= f64::EPSILON {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = dot(&d1, &r);
        if e <= f64::EPSILON {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = dot(&d1, &d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    let p = lerp(a0, a1, s);
    let q = lerp(b0, b1, t);
    dist2(&p, &q)
}
