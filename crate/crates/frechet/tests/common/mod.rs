//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use frechet::Curve;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A 2D walk mixing very short and ordinary steps, so that decompositions
/// contain both pieces and long segments.
pub fn mixed_walk(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Curve {
    let mut p = [
        rng.gen_range(-0.5..0.5) * scale,
        rng.gen_range(-0.5..0.5) * scale,
    ];
    let mut v = vec![p.to_vec()];
    for _ in 1..n {
        let len = if rng.gen_bool(0.5) {
            rng.gen_range(0.01..0.15)
        } else {
            rng.gen_range(0.2..1.2)
        } * scale;
        let a = rng.gen::<f64>() * std::f64::consts::TAU;
        p = [p[0] + len * a.cos(), p[1] + len * a.sin()];
        v.push(p.to_vec());
    }
    Curve::new(v).unwrap()
}

/// Copy of `c` with every vertex moved by up to `noise` per coordinate.
pub fn jitter(rng: &mut ChaCha8Rng, c: &Curve, noise: f64) -> Curve {
    Curve::new(
        c.vertices()
            .map(|v| {
                v.iter()
                    .map(|x| x + rng.gen_range(-noise..=noise))
                    .collect()
            })
            .collect(),
    )
    .unwrap()
}

/// A pair that is either a noisy copy (small distance, long reachable
/// corridor) or two independent walks.
pub fn random_pair(rng: &mut ChaCha8Rng, max_len: usize) -> (Curve, Curve) {
    let n = rng.gen_range(1..=max_len);
    let a = mixed_walk(rng, n, 1.0);
    if rng.gen_bool(0.6) {
        let noise = rng.gen_range(0.0..0.4);
        let b = jitter(rng, &a, noise);
        // occasionally drop or repeat vertices so the lengths differ
        let mut verts: Vec<Vec<f64>> = b.vertices().map(|v| v.to_vec()).collect();
        if verts.len() > 2 && rng.gen_bool(0.5) {
            let k = rng.gen_range(1..verts.len() - 1);
            verts.remove(k);
        }
        if rng.gen_bool(0.3) {
            let k = rng.gen_range(0..verts.len());
            verts.insert(k, verts[k].clone());
        }
        (a, Curve::new(verts).unwrap())
    } else {
        let m = rng.gen_range(1..=max_len);
        (a, mixed_walk(rng, m, 1.0))
    }
}

/// `d_dF(π, σ) ≤ δ` for integer 1D curves by the quadratic DP.
pub fn dfd_le(pi: &[i64], sigma: &[i64], delta: i64) -> bool {
    let (n, m) = (pi.len(), sigma.len());
    let mut ok = vec![false; n * m];
    for p in 0..n {
        for q in 0..m {
            if (pi[p] - sigma[q]).abs() > delta {
                continue;
            }
            ok[p * m + q] = (p == 0 && q == 0)
                || (p > 0 && ok[(p - 1) * m + q])
                || (q > 0 && ok[p * m + q - 1])
                || (p > 0 && q > 0 && ok[(p - 1) * m + q - 1]);
        }
    }
    ok[n * m - 1]
}

/// A separated integer instance: π ≥ 0 ≥ σ.
pub struct Separated {
    pub pi: Vec<i64>,
    pub sigma: Vec<i64>,
    pub delta: i64,
}

pub fn random_separated(rng: &mut ChaCha8Rng, max_len: usize, span: i64) -> Separated {
    let n = rng.gen_range(1..=max_len);
    let m = rng.gen_range(1..=max_len);
    Separated {
        pi: (0..n).map(|_| rng.gen_range(0..=span)).collect(),
        sigma: (0..m).map(|_| -rng.gen_range(0..=span)).collect(),
        delta: rng.gen_range(0..=2 * span),
    }
}

fn interval(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    (a.min(b), a.max(b))
}

/// Outcome of checking one composition property on one instance.
#[derive(Debug, PartialEq, Eq)]
pub enum PropertyCheck {
    /// Hypothesis false, nothing to check.
    Vacuous,
    Holds,
    Counterexample(String),
}

fn conclude(ok: bool, what: impl FnOnce() -> String) -> PropertyCheck {
    if ok {
        PropertyCheck::Holds
    } else {
        PropertyCheck::Counterexample(what())
    }
}

/// Overlapping intervals I, J with feasible traversals against all of σ:
/// their union is feasible too.
pub fn check_overlap_union(rng: &mut ChaCha8Rng, s: &Separated) -> PropertyCheck {
    let (ai, bi) = interval(rng, s.pi.len());
    let (aj, bj) = interval(rng, s.pi.len());
    if bi < aj || bj < ai {
        return PropertyCheck::Vacuous;
    }
    let pi = &s.pi;
    if !(dfd_le(&pi[ai..=bi], &s.sigma, s.delta) && dfd_le(&pi[aj..=bj], &s.sigma, s.delta)) {
        return PropertyCheck::Vacuous;
    }
    let (lo, hi) = (ai.min(aj), bi.max(bj));
    conclude(dfd_le(&pi[lo..=hi], &s.sigma, s.delta), || {
        format!(
            "I=[{ai},{bi}] J=[{aj},{bj}] {:?} {:?} δ={}",
            s.pi, s.sigma, s.delta
        )
    })
}

/// J ⊆ I, π_I feasible against a prefix σ_K and π_J against all of σ:
/// then π from the start of I to the end of J is feasible against σ.
pub fn check_crossing(rng: &mut ChaCha8Rng, s: &Separated) -> PropertyCheck {
    let (ai, bi) = interval(rng, s.pi.len());
    let (aj, bj) = interval(rng, bi - ai + 1);
    let (aj, bj) = (ai + aj, ai + bj);
    let k = rng.gen_range(1..=s.sigma.len());
    let pi = &s.pi;
    if !(dfd_le(&pi[ai..=bi], &s.sigma[..k], s.delta) && dfd_le(&pi[aj..=bj], &s.sigma, s.delta)) {
        return PropertyCheck::Vacuous;
    }
    conclude(dfd_le(&pi[ai..=bj], &s.sigma, s.delta), || {
        format!(
            "I=[{ai},{bi}] J=[{aj},{bj}] k={k} {:?} {:?} δ={}",
            s.pi, s.sigma, s.delta
        )
    })
}

/// a_I ≤ a_J ≤ b_I ≤ b_J, π_I feasible against a prefix σ_K and π_J
/// against all of σ: then I ∪ J is feasible against σ.
pub fn check_prefix_composition(rng: &mut ChaCha8Rng, s: &Separated) -> PropertyCheck {
    let n = s.pi.len();
    let mut ends: Vec<usize> = (0..4).map(|_| rng.gen_range(0..n)).collect();
    ends.sort_unstable();
    let (ai, aj, bi, bj) = (ends[0], ends[1], ends[2], ends[3]);
    let k = rng.gen_range(1..=s.sigma.len());
    let pi = &s.pi;
    if !(dfd_le(&pi[ai..=bi], &s.sigma[..k], s.delta) && dfd_le(&pi[aj..=bj], &s.sigma, s.delta)) {
        return PropertyCheck::Vacuous;
    }
    conclude(dfd_le(&pi[ai..=bj], &s.sigma, s.delta), || {
        format!(
            "I=[{ai},{bi}] J=[{aj},{bj}] k={k} {:?} {:?} δ={}",
            s.pi, s.sigma, s.delta
        )
    })
}

/// Every violated decomposition invariant, as messages.
pub fn decomposition_violations(curve: &Curve, lambda: f64) -> Vec<String> {
    use frechet::curves::{dist, lerp, segment_dist2, total_length};
    use frechet::decomposition::{decompose, PartKind};

    let mut bad = Vec::new();
    let d = match decompose(curve, lambda) {
        Ok(d) => d,
        Err(e) => return vec![format!("decompose failed: {e}")],
    };
    let aug = &d.augmented;
    let scale = 1.0 + curve.flat().iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if curve.len() == 1 {
        if !d.parts.is_empty() {
            bad.push("single vertex should have no parts".into());
        }
        return bad;
    }
    // tiling
    if d.parts.first().map(|p| p.start) != Some(0)
        || d.parts.last().map(|p| p.end) != Some(aug.len() - 1)
    {
        bad.push("parts do not span the augmented curve".into());
    }
    for w in d.parts.windows(2) {
        if w[0].end != w[1].start {
            bad.push(format!("gap between parts {:?} and {:?}", w[0], w[1]));
        }
    }
    let last = d.parts.len() - 1;
    for (k, part) in d.parts.iter().enumerate() {
        let start = aug.vertex(part.start);
        let chord = dist(start, aug.vertex(part.end));
        match part.kind {
            PartKind::LongSegment => {
                if part.end != part.start + 1 || chord < lambda {
                    bad.push(format!("long segment {part:?} has length {chord}"));
                }
            }
            PartKind::Piece => {
                for x in part.start..part.end {
                    if dist(start, aug.vertex(x)) >= lambda {
                        bad.push(format!("piece {part:?}: vertex {x} at distance >= Λ"));
                    }
                }
                if k < last && (chord - lambda).abs() > 1e-9 {
                    bad.push(format!(
                        "interior piece {part:?} has chord {chord}, Λ = {lambda}"
                    ));
                }
                if k == last && chord > lambda + 1e-9 {
                    bad.push(format!("final piece {part:?} has chord {chord} > Λ"));
                }
                for x in part.start..part.end {
                    for step in 1..8 {
                        let y = lerp(aug.vertex(x), aug.vertex(x + 1), step as f64 / 8.0);
                        if dist(start, &y) > lambda + 1e-9 {
                            bad.push(format!("piece {part:?} leaves the Λ-ball on segment {x}"));
                        }
                    }
                }
            }
        }
    }
    // shape: dropping the inserted vertices gives back the original, and
    // each inserted vertex lies on the original segment it splits
    if d.inserted.len() > curve.len() {
        bad.push(format!(
            "{} inserted vertices for {} original",
            d.inserted.len(),
            curve.len()
        ));
    }
    let mut original = Vec::new();
    let mut inserted = d.inserted.iter().peekable();
    for i in 0..aug.len() {
        if inserted.peek() == Some(&&i) {
            inserted.next();
            continue;
        }
        original.push(i);
    }
    if original.len() != curve.len()
        || original
            .iter()
            .enumerate()
            .any(|(k, &i)| aug.vertex(i) != curve.vertex(k))
    {
        bad.push("original vertices not preserved in order".into());
    } else {
        for w in original.windows(2) {
            for x in w[0] + 1..w[1] {
                let (a, b) = (aug.vertex(w[0]), aug.vertex(w[1]));
                if segment_dist2(aug.vertex(x), aug.vertex(x), a, b).sqrt() > 1e-12 * scale {
                    bad.push(format!("inserted vertex {x} is off its segment"));
                }
            }
        }
    }
    let bound = 1.0 + total_length(curve) / lambda + curve.len() as f64;
    if d.parts.len() as f64 > bound {
        bad.push(format!("{} parts exceed {bound}", d.parts.len()));
    }
    bad
}
