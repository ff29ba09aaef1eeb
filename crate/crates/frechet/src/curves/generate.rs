//! Synthetic c-packed curves in the plane.
//!
//! A heading-bounded backbone made of spiral arcs (curvature varying linearly
//! along each arc) carries a zigzag that doubles back across the backbone.
//! The zigzag amplitude controls local density and is tuned by bisection
//! until the packedness estimate lands near the target. The pattern is
//! stationary, so tuning and verification look at a prefix window only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{packedness_estimate, Curve};
use crate::error::{Error, Result};

const MAX_HEADING: f64 = 0.6; // radians, about 34 degrees
const MAX_CURVATURE: f64 = 0.04; // radians per unit step
const TUNE_WINDOW: usize = 400;
const VERIFY_WINDOW: usize = 1500;
const RESOLUTION: usize = 40;
const MAX_ROUNDS: usize = 40;

pub fn gen_cpacked(c_target: f64, n: usize, seed: u64) -> Result<Curve> {
    if !(c_target >= 2.0 && c_target.is_finite()) {
        return Err(Error::ParameterDomain {
            name: "c",
            value: c_target,
            expected: ">= 2",
        });
    }
    if n == 0 {
        return Err(Error::ParameterDomain {
            name: "n",
            value: 0.0,
            expected: ">= 1",
        });
    }
    let backbone = backbone(n, seed);
    if n < 3 {
        return build(&backbone, 0.0);
    }

    let window = &backbone[..n.min(TUNE_WINDOW)];
    let est =
        |amp: f64| -> Result<f64> { Ok(packedness_estimate(&build(window, amp)?, RESOLUTION)) };
    let lo_band = 0.8 * c_target;
    let hi_band = c_target;

    let mut amp = 0.0;
    let base = est(0.0)?;
    if base < lo_band {
        let mut lo = 0.0;
        let mut hi = 0.5;
        let mut rounds = 0;
        while est(hi)? < lo_band {
            lo = hi;
            hi *= 2.0;
            rounds += 1;
            if rounds > MAX_ROUNDS {
                return Err(Error::Generation(format!(
                    "amplitude search diverged for c = {c_target}"
                )));
            }
        }
        amp = hi;
        for _ in 0..MAX_ROUNDS {
            let mid = 0.5 * (lo + hi);
            let e = est(mid)?;
            if e < lo_band {
                lo = mid;
            } else if e > hi_band {
                hi = mid;
            } else {
                amp = mid;
                break;
            }
            amp = hi;
        }
    }

    let curve = build(&backbone, amp)?;
    let check = packedness_estimate(&curve.slice(0, n.min(VERIFY_WINDOW) - 1), RESOLUTION);
    if check < c_target / 2.0 || check > 2.0 * c_target {
        return Err(Error::Generation(format!(
            "estimate {check:.3} outside [{}, {}]",
            c_target / 2.0,
            2.0 * c_target
        )));
    }
    log::debug!(
        "gen_cpacked c={c_target} n={n} seed={seed}: amplitude {amp:.4}, estimate {check:.3}"
    );
    Ok(curve)
}

/// Longest segment of the first curve in [`gen_cpacked_pair`].
pub const PAIR_STEP: f64 = 0.05;
/// Radius of the perturbation applied to the second curve of a pair.
pub const PAIR_NOISE: f64 = 0.02;

/// Two nearby curves for benchmarking the decider: a [`gen_cpacked`] curve
/// with every segment split evenly into parts no longer than [`PAIR_STEP`],
/// and a copy with each vertex moved by at most [`PAIR_NOISE`]. Both have
/// `n` vertices.
///
/// Subdividing keeps the traced path (and so its packedness) but makes
/// segments short enough to form pieces, which is where the decider spends
/// its time.
pub fn gen_cpacked_pair(c_target: f64, n: usize, seed: u64) -> Result<(Curve, Curve)> {
    // generated segments are at least one unit long; very short curves
    // cannot be tuned to the target, so never generate fewer than a hundred
    let coarse_len = ((n as f64 * PAIR_STEP).ceil() as usize + 2).max(100);
    let coarse = gen_cpacked(c_target, coarse_len, seed)?;
    let mut fine = Vec::with_capacity(n);
    'outer: for i in 0..coarse.len() - 1 {
        let parts = (coarse.segment_length(i) / PAIR_STEP).ceil().max(1.0) as usize;
        for step in 0..parts {
            if fine.len() == n {
                break 'outer;
            }
            fine.push(super::lerp(
                coarse.vertex(i),
                coarse.vertex(i + 1),
                step as f64 / parts as f64,
            ));
        }
    }
    if fine.len() < n {
        fine.push(coarse.vertex(coarse.len() - 1).to_vec());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let moved = fine
        .iter()
        .map(|v| {
            let r = PAIR_NOISE * rng.gen::<f64>().sqrt();
            let a = rng.gen::<f64>() * std::f64::consts::TAU;
            vec![v[0] + r * a.cos(), v[1] + r * a.sin()]
        })
        .collect();
    Ok((Curve::new(fine)?, Curve::new(moved)?))
}

/// Unit-step backbone points with their headings.
fn backbone(n: usize, seed: u64) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let (mut x, mut y, mut heading) = (0.0, 0.0, 0.0);
    let mut arc_left = 0usize;
    let (mut k0, mut k1, mut arc_len) = (0.0, 0.0, 1usize);
    for _ in 0..n {
        if arc_left == 0 {
            arc_len = rng.gen_range(20..80);
            arc_left = arc_len;
            k0 = k1;
            k1 = rng.gen_range(-MAX_CURVATURE..MAX_CURVATURE);
        }
        out.push((x, y, heading));
        let s = 1.0 - arc_left as f64 / arc_len as f64;
        let kappa = k0 + (k1 - k0) * s;
        heading += kappa;
        if heading.abs() > MAX_HEADING {
            heading = heading.signum() * MAX_HEADING;
            k1 = -k1;
            k0 = -k0;
        }
        x += heading.cos();
        y += heading.sin();
        arc_left -= 1;
    }
    out
}

fn build(backbone: &[(f64, f64, f64)], amp: f64) -> Result<Curve> {
    let mut coords = Vec::with_capacity(2 * backbone.len());
    for (k, &(x, y, h)) in backbone.iter().enumerate() {
        let side = if k % 2 == 0 { amp } else { -amp };
        coords.push(x - side * h.sin());
        coords.push(y + side * h.cos());
    }
    Curve::from_flat(2, coords)
}
