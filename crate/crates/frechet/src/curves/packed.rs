//! Lower-bound estimate of curve packedness.
//!
//! The ratio `length(curve ∩ B(z, r)) / r` is maximized over vertex and
//! midpoint centers and a quantile subsample of pairwise vertex distances
//! (and their halves). Clipping a segment to a ball is exact.

use super::{dist, dot, Curve};

/// Above this many vertices the radius candidates come from a strided subset.
const RADIUS_SAMPLE_CAP: usize = 3000;

pub fn packedness_estimate(curve: &Curve, resolution: usize) -> f64 {
    let n = curve.len();
    if n < 2 || resolution == 0 {
        return 0.0;
    }
    let radii = candidate_radii(curve, resolution);
    if radii.is_empty() {
        return 0.0;
    }

    let dim = curve.dim();
    let mut centers: Vec<Vec<f64>> = curve.vertices().map(|v| v.to_vec()).collect();
    for i in 0..n - 1 {
        centers.push(super::lerp(curve.vertex(i), curve.vertex(i + 1), 0.5));
    }

    let segs = n - 1;
    let mut dmin = vec![0.0; segs];
    let mut dmax = vec![0.0; segs];
    let lens: Vec<f64> = (0..segs).map(|i| curve.segment_length(i)).collect();
    let mut best = 0.0f64;
    let mut diff = vec![0.0; dim];
    for z in &centers {
        for i in 0..segs {
            let a = curve.vertex(i);
            let b = curve.vertex(i + 1);
            dmax[i] = dist(a, z).max(dist(b, z));
            dmin[i] = point_segment_dist(z, a, b, &mut diff);
        }
        for &r in &radii {
            let mut inside = 0.0;
            for i in 0..segs {
                if dmin[i] >= r {
                    continue;
                }
                if dmax[i] <= r {
                    inside += lens[i];
                } else {
                    inside += clipped_length(z, curve.vertex(i), curve.vertex(i + 1), r);
                }
            }
            best = best.max(inside / r);
        }
    }
    best
}

fn candidate_radii(curve: &Curve, resolution: usize) -> Vec<f64> {
    let n = curve.len();
    let stride = n.div_ceil(RADIUS_SAMPLE_CAP).max(1);
    let idx: Vec<usize> = (0..n).step_by(stride).collect();
    let mut all = Vec::with_capacity(idx.len() * idx.len());
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            let d = dist(curve.vertex(i), curve.vertex(j));
            if d > 0.0 {
                all.push(d);
                all.push(d / 2.0);
            }
        }
    }
    all.sort_by(f64::total_cmp);
    all.dedup();
    if all.len() <= resolution {
        return all;
    }
    let mut out: Vec<f64> = (0..resolution)
        .map(|k| {
            let pos = if resolution == 1 {
                0
            } else {
                k * (all.len() - 1) / (resolution - 1)
            };
            all[pos]
        })
        .collect();
    out.dedup();
    out
}

fn point_segment_dist(z: &[f64], a: &[f64], b: &[f64], diff: &mut [f64]) -> f64 {
    for k in 0..z.len() {
        diff[k] = b[k] - a[k];
    }
    let len2 = dot(diff, diff);
    let t = if len2 > 0.0 {
        let mut s = 0.0;
        for k in 0..z.len() {
            s += (z[k] - a[k]) * diff[k];
        }
        (s / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut d2 = 0.0;
    for k in 0..z.len() {
        let p = a[k] + t * diff[k] - z[k];
        d2 += p * p;
    }
    d2.sqrt()
}

/// Length of segment `[a, b]` inside the closed ball `B(z, r)`.
pub(crate) fn clipped_length(z: &[f64], a: &[f64], b: &[f64], r: f64) -> f64 {
    let d: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let w: Vec<f64> = a.iter().zip(z).map(|(x, y)| x - y).collect();
    let qa = dot(&d, &d);
    if qa == 0.0 {
        return 0.0;
    }
    let qb = 2.0 * dot(&d, &w);
    let qc = dot(&w, &w) - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        return 0.0;
    }
    let s = disc.sqrt();
    let t0 = ((-qb - s) / (2.0 * qa)).max(0.0);
    let t1 = ((-qb + s) / (2.0 * qa)).min(1.0);
    if t1 <= t0 {
        0.0
    } else {
        (t1 - t0) * qa.sqrt()
    }
}
