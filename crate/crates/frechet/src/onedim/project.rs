//! Projecting a pair of short pieces onto the line through their first
//! vertices.

use crate::curves::{dist, Curve};
use crate::error::{Error, Result};

/// Two 1D curves separated by zero: `pi_vals >= 0 >= sigma_vals`.
#[derive(Debug, Clone, PartialEq)]
pub struct Separated1D {
    pub pi_vals: Vec<f64>,
    pub sigma_vals: Vec<f64>,
    /// Whether π was shifted apart from σ before projecting.
    pub translated: bool,
}

/// Projects both pieces onto the line through their initial vertices, with
/// the midpoint of those vertices at 0 and π on the positive side. If the
/// initial vertices are closer than `δ - 2Λ`, π is first moved along that
/// line until they are exactly that far apart.
pub fn project_pieces(
    piece_pi: &Curve,
    piece_sigma: &Curve,
    delta: f64,
    lambda: f64,
) -> Result<Separated1D> {
    crate::curves::check_same_dim(piece_pi, piece_sigma)?;
    for (name, c) in [("pi", piece_pi), ("sigma", piece_sigma)] {
        let first = c.vertex(0);
        let limit = lambda * (1.0 + 1e-9) + 1e-9;
        if let Some(k) = c.vertices().position(|v| dist(v, first) > limit) {
            return Err(Error::Contract(format!(
                "{name} vertex {k} is {} from the piece start, above Λ = {lambda}",
                dist(c.vertex(k), first)
            )));
        }
    }
    let dim = piece_pi.dim();
    let p0 = piece_pi.vertex(0);
    let s0 = piece_sigma.vertex(0);
    let gap = dist(p0, s0);
    let mut dir = vec![0.0; dim];
    if gap > 0.0 {
        for k in 0..dim {
            dir[k] = (p0[k] - s0[k]) / gap;
        }
    } else {
        dir[0] = 1.0;
    }
    let want = delta - 2.0 * lambda;
    let shift = if gap < want { want - gap } else { 0.0 };
    let mid: Vec<f64> = (0..dim)
        .map(|k| 0.5 * (p0[k] + shift * dir[k] + s0[k]))
        .collect();
    let coord = |x: &[f64], off: f64| -> f64 {
        (0..dim)
            .map(|k| (x[k] + off * dir[k] - mid[k]) * dir[k])
            .sum()
    };
    let pi_vals = piece_pi
        .vertices()
        .map(|v| coord(v, shift).max(0.0))
        .collect();
    let sigma_vals = piece_sigma
        .vertices()
        .map(|v| coord(v, 0.0).min(0.0))
        .collect();
    Ok(Separated1D {
        pi_vals,
        sigma_vals,
        translated: shift > 0.0,
    })
}
