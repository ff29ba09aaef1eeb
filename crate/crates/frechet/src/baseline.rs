//! Exact quadratic algorithms: discrete Fréchet by dynamic programming,
//! continuous decision by free-interval propagation, and brute-force
//! reachability for separated one-dimensional curves. These are the oracles
//! the fast decider is checked against.

use crate::curves::{check_same_dim, dist2, total_length, Curve, Witness};
use crate::error::{Error, Result};

/// Closed interval; emptiness is modelled with `Option<Interval>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Option<Interval> {
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Part of `self` at or above `x`.
    pub fn from(&self, x: f64) -> Option<Interval> {
        Interval::new(self.lo.max(x), self.hi)
    }
}

pub fn hull_opt(a: Option<Interval>, b: Option<Interval>) -> Option<Interval> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.hull(&y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Parameters `λ ∈ [0,1]` with `‖(1-λ)a + λb - c‖ ≤ δ`.
///
/// Endpoint membership is decided by direct distance comparison so that two
/// edges sharing a vertex always agree about it.
pub fn free_interval(a: &[f64], b: &[f64], c: &[f64], delta: f64) -> Option<Interval> {
    let d2 = delta * delta;
    let start_free = dist2(a, c) <= d2;
    let end_free = dist2(b, c) <= d2;
    if start_free && end_free {
        return Some(Interval { lo: 0.0, hi: 1.0 });
    }
    let mut qa = 0.0;
    let mut qb = 0.0;
    let mut qc = -d2;
    for k in 0..a.len() {
        let dir = b[k] - a[k];
        let w = a[k] - c[k];
        qa += dir * dir;
        qb += 2.0 * dir * w;
        qc += w * w;
    }
    if qa == 0.0 {
        return None;
    }
    let disc = qb * qb - 4.0 * qa * qc;
    let scale = (qb * qb).max((4.0 * qa * qc).abs()).max(f64::MIN_POSITIVE);
    let (r1, r2) = if disc.abs() <= 1e-12 * scale {
        let t = -qb / (2.0 * qa);
        (t, t)
    } else if disc < 0.0 {
        return None;
    } else {
        let s = disc.sqrt();
        // numerically stable pair of roots
        let q = -0.5 * (qb + qb.signum() * s);
        let (x, y) = if q != 0.0 {
            (q / qa, qc / q)
        } else {
            (0.0, 0.0)
        };
        (x.min(y), x.max(y))
    };
    let lo = if start_free { 0.0 } else { r1.max(0.0) };
    let hi = if end_free { 1.0 } else { r2.min(1.0) };
    Interval::new(lo, hi)
}

/// Free boundary intervals of the cell spanned by π-segment `i` and
/// σ-segment `j`, in cell-local parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSpaceCell {
    pub i: usize,
    pub j: usize,
    pub bottom: Option<Interval>,
    pub left: Option<Interval>,
    pub top: Option<Interval>,
    pub right: Option<Interval>,
}

impl FreeSpaceCell {
    pub fn new(pi: &Curve, sigma: &Curve, i: usize, j: usize, delta: f64) -> FreeSpaceCell {
        let (p0, p1) = (pi.vertex(i), pi.vertex(i + 1));
        let (s0, s1) = (sigma.vertex(j), sigma.vertex(j + 1));
        FreeSpaceCell {
            i,
            j,
            bottom: free_interval(p0, p1, s0, delta),
            top: free_interval(p0, p1, s1, delta),
            left: free_interval(s0, s1, p0, delta),
            right: free_interval(s0, s1, p1, delta),
        }
    }
}

/// Monotone reachability through one convex cell. Entries must already be
/// clipped to the cell's free boundary. Returns `(top, right)` exits.
pub fn propagate_cell(
    cell: &FreeSpaceCell,
    bottom_in: Option<Interval>,
    left_in: Option<Interval>,
) -> (Option<Interval>, Option<Interval>) {
    let top = match (left_in, bottom_in) {
        (Some(_), _) => cell.top,
        (None, Some(b)) => cell.top.and_then(|t| t.from(b.lo)),
        (None, None) => None,
    };
    let right = match (bottom_in, left_in) {
        (Some(_), _) => cell.right,
        (None, Some(l)) => cell.right.and_then(|r| r.from(l.lo)),
        (None, None) => None,
    };
    (top, right)
}

/// Exact exits of a rectangular block of cells.
///
/// `bottom[i]` is the reachable part of the bottom edge of column `i`
/// (length `n-1`), `left[j]` of the left edge of row `j` (length `m-1`).
/// Entries are clipped to the free space. Returns the reachable parts of the
/// top edges and of the right edges.
pub fn region_reach_exact(
    pi: &Curve,
    sigma: &Curve,
    delta: f64,
    bottom: &[Option<Interval>],
    left: &[Option<Interval>],
) -> (Vec<Option<Interval>>, Vec<Option<Interval>>) {
    let cols = pi.len() - 1;
    let rows = sigma.len() - 1;
    assert_eq!(bottom.len(), cols);
    assert_eq!(left.len(), rows);
    let mut row_in: Vec<Option<Interval>> = (0..cols)
        .map(|i| {
            let free = free_interval(pi.vertex(i), pi.vertex(i + 1), sigma.vertex(0), delta);
            bottom[i].and_then(|b| free.and_then(|f| f.intersect(&b)))
        })
        .collect();
    let mut right_out = vec![None; rows];
    for j in 0..rows {
        let free_left = free_interval(sigma.vertex(j), sigma.vertex(j + 1), pi.vertex(0), delta);
        let mut left_in = left[j].and_then(|l| free_left.and_then(|f| f.intersect(&l)));
        for i in 0..cols {
            let cell = FreeSpaceCell::new(pi, sigma, i, j, delta);
            let (top, right) = propagate_cell(&cell, row_in[i], left_in);
            row_in[i] = top;
            left_in = right;
        }
        right_out[j] = left_in;
    }
    (row_in, right_out)
}

/// `d_F(π, σ) ≤ δ`, decided exactly by free-interval propagation.
pub fn continuous_decide(pi: &Curve, sigma: &Curve, delta: f64) -> Result<bool> {
    check_same_dim(pi, sigma)?;
    let (n, m) = (pi.len(), sigma.len());
    let d2 = delta * delta;
    if dist2(pi.vertex(0), sigma.vertex(0)) > d2
        || dist2(pi.vertex(n - 1), sigma.vertex(m - 1)) > d2
    {
        return Ok(false);
    }
    if n == 1 {
        return Ok(sigma.vertices().all(|s| dist2(s, pi.vertex(0)) <= d2));
    }
    if m == 1 {
        return Ok(pi.vertices().all(|p| dist2(p, sigma.vertex(0)) <= d2));
    }
    let mut bottom = vec![None; n - 1];
    let mut left = vec![None; m - 1];
    bottom[0] = Some(Interval { lo: 0.0, hi: 0.0 });
    left[0] = Some(Interval { lo: 0.0, hi: 0.0 });
    let (top, right) = region_reach_exact(pi, sigma, delta, &bottom, &left);
    let hit = |iv: &Option<Interval>| iv.is_some_and(|x| x.contains(1.0));
    Ok(hit(&top[n - 2]) || hit(&right[m - 2]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactValue {
    pub value: f64,
    /// Set when bisection hit its iteration cap before reaching `rel_tol`.
    pub capped: bool,
}

const BISECTION_CAP: usize = 200;

/// Continuous Fréchet distance to relative tolerance by bisection.
pub fn continuous_frechet(pi: &Curve, sigma: &Curve, rel_tol: f64) -> Result<ExactValue> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::ParameterDomain {
            name: "rel_tol",
            value: rel_tol,
            expected: "(0, 1)",
        });
    }
    check_same_dim(pi, sigma)?;
    let (n, m) = (pi.len(), sigma.len());
    let lower = dist2(pi.vertex(0), sigma.vertex(0))
        .max(dist2(pi.vertex(n - 1), sigma.vertex(m - 1)))
        .sqrt();
    if continuous_decide(pi, sigma, lower)? {
        return Ok(ExactValue {
            value: lower,
            capped: false,
        });
    }
    let mut lo = lower;
    let mut hi = lower + total_length(pi) + total_length(sigma);
    while !continuous_decide(pi, sigma, hi)? {
        // only reachable through rounding
        hi = hi * 2.0 + f64::MIN_POSITIVE;
    }
    for _ in 0..BISECTION_CAP {
        if hi * (1.0 - rel_tol) <= lo {
            return Ok(ExactValue {
                value: hi,
                capped: false,
            });
        }
        let mid = 0.5 * (lo + hi);
        if continuous_decide(pi, sigma, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    log::warn!("continuous_frechet: bisection cap reached");
    Ok(ExactValue {
        value: 0.5 * (lo + hi),
        capped: true,
    })
}

/// Discrete Fréchet distance.
pub fn discrete_frechet(pi: &Curve, sigma: &Curve) -> Result<f64> {
    Ok(discrete_frechet_witness(pi, sigma)?.0)
}

/// Discrete Fréchet distance and an optimal traversal. Backtracking prefers
/// the diagonal step, then a step on π, then a step on σ.
pub fn discrete_frechet_witness(pi: &Curve, sigma: &Curve) -> Result<(f64, Witness)> {
    check_same_dim(pi, sigma)?;
    let (n, m) = (pi.len(), sigma.len());
    let mut dp = vec![0.0f64; n * m];
    for p in 0..n {
        for q in 0..m {
            let d = dist2(pi.vertex(p), sigma.vertex(q));
            let prev = match (p, q) {
                (0, 0) => 0.0,
                (0, _) => dp[q - 1],
                (_, 0) => dp[(p - 1) * m],
                _ => dp[(p - 1) * m + q - 1]
                    .min(dp[(p - 1) * m + q])
                    .min(dp[p * m + q - 1]),
            };
            dp[p * m + q] = d.max(prev);
        }
    }
    let mut steps = vec![(n - 1, m - 1)];
    let (mut p, mut q) = (n - 1, m - 1);
    while (p, q) != (0, 0) {
        let mut cands = Vec::with_capacity(3);
        if p > 0 && q > 0 {
            cands.push((p - 1, q - 1));
        }
        if p > 0 {
            cands.push((p - 1, q));
        }
        if q > 0 {
            cands.push((p, q - 1));
        }
        let mut best = cands[0];
        for &c in &cands[1..] {
            if dp[c.0 * m + c.1] < dp[best.0 * m + best.1] {
                best = c;
            }
        }
        (p, q) = best;
        steps.push((p, q));
    }
    steps.reverse();
    Ok((dp[n * m - 1].sqrt(), Witness { steps }))
}

fn one_dim(c: &Curve) -> Result<&[f64]> {
    if c.dim() != 1 {
        return Err(Error::DimensionMismatch(1, c.dim()));
    }
    Ok(c.flat())
}

/// Brute-force exits for entries on π only. See [`reduced_reach_bruteforce_both`].
pub fn reduced_reach_bruteforce(
    pi: &Curve,
    sigma: &Curve,
    delta: f64,
    entries: &[usize],
) -> Result<(Vec<usize>, Vec<usize>)> {
    reduced_reach_bruteforce_both(pi, sigma, delta, entries, &[])
}

/// Boolean reachability over the discrete grid seeded at `(e, 0)` for π
/// entries and `(0, e)` for σ entries. Returns the π-indices `f` with
/// `(f, m-1)` reachable and the σ-indices `f` with `(n-1, f)` reachable.
///
/// Closeness is tested as `π_p - σ_q ≤ δ`, matching the separated setting.
pub fn reduced_reach_bruteforce_both(
    pi: &Curve,
    sigma: &Curve,
    delta: f64,
    pi_entries: &[usize],
    sigma_entries: &[usize],
) -> Result<(Vec<usize>, Vec<usize>)> {
    let a = one_dim(pi)?;
    let b = one_dim(sigma)?;
    let (n, m) = (a.len(), b.len());
    if let Some(&e) = pi_entries.iter().find(|&&e| e >= n) {
        return Err(Error::Contract(format!(
            "entry {e} out of range for n = {n}"
        )));
    }
    if let Some(&e) = sigma_entries.iter().find(|&&e| e >= m) {
        return Err(Error::Contract(format!(
            "entry {e} out of range for m = {m}"
        )));
    }
    let close = |p: usize, q: usize| (a[p] - b[q]).abs() <= delta;
    let mut reach = vec![false; n * m];
    for &e in pi_entries {
        reach[e * m] = close(e, 0);
    }
    for &e in sigma_entries {
        reach[e] = reach[e] || close(0, e);
    }
    for p in 0..n {
        for q in 0..m {
            if reach[p * m + q] || !close(p, q) {
                continue;
            }
            let from = (p > 0 && reach[(p - 1) * m + q])
                || (q > 0 && reach[p * m + q - 1])
                || (p > 0 && q > 0 && reach[(p - 1) * m + q - 1]);
            reach[p * m + q] = from;
        }
    }
    let f_pi = (0..n).filter(|&p| reach[p * m + m - 1]).collect();
    let f_sigma = (0..m).filter(|&q| reach[(n - 1) * m + q]).collect();
    Ok((f_pi, f_sigma))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2(v: &[[f64; 2]]) -> Curve {
        Curve::new(v.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn discrete_examples() {
        assert_eq!(
            discrete_frechet(&c2(&[[0., 0.]]), &c2(&[[3., 4.]])).unwrap(),
            5.0
        );
        let a = c2(&[[0., 0.], [1., 2.], [3., -1.]]);
        assert_eq!(discrete_frechet(&a, &a).unwrap(), 0.0);
        let pi = c2(&[[0., 0.], [1., 0.], [2., 0.]]);
        let sigma = c2(&[[0., 1.], [2., 1.]]);
        let (v, w) = discrete_frechet_witness(&pi, &sigma).unwrap();
        // the middle vertex of π is sqrt 2 from both vertices of σ
        assert_eq!(v, brute_force_discrete(&pi, &sigma));
        assert_eq!(v, 2f64.sqrt());
        assert!(w.is_valid(3, 2));
        assert_eq!(w.steps, vec![(0, 0), (1, 0), (2, 1)]);
    }

    /// Max-cost minimized over every monotone traversal, by enumeration.
    fn brute_force_discrete(pi: &Curve, sigma: &Curve) -> f64 {
        fn go(pi: &Curve, sigma: &Curve, p: usize, q: usize, worst: f64, best: &mut f64) {
            let worst = worst.max(dist2(pi.vertex(p), sigma.vertex(q)).sqrt());
            if (p, q) == (pi.len() - 1, sigma.len() - 1) {
                *best = best.min(worst);
                return;
            }
            for (dp, dq) in [(1, 0), (0, 1), (1, 1)] {
                if p + dp < pi.len() && q + dq < sigma.len() {
                    go(pi, sigma, p + dp, q + dq, worst, best);
                }
            }
        }
        let mut best = f64::INFINITY;
        go(pi, sigma, 0, 0, 0.0, &mut best);
        best
    }

    #[test]
    fn discrete_dimension_mismatch() {
        let a = Curve::from_values(&[0.0]).unwrap();
        assert!(discrete_frechet(&a, &c2(&[[0., 0.]])).is_err());
    }

    #[test]
    fn parallel_segments() {
        let pi = c2(&[[0., 0.], [10., 0.]]);
        let sigma = c2(&[[0., 3.], [10., 3.]]);
        assert!(!continuous_decide(&pi, &sigma, 2.99).unwrap());
        assert!(continuous_decide(&pi, &sigma, 3.0).unwrap());
        assert!(continuous_decide(&pi, &pi, 0.0).unwrap());
        let v = continuous_frechet(&pi, &sigma, 1e-6).unwrap();
        assert!((v.value - 3.0).abs() <= 3e-6 && !v.capped);
        assert_eq!(continuous_frechet(&pi, &pi, 1e-6).unwrap().value, 0.0);
    }

    #[test]
    fn free_interval_cases() {
        let iv = free_interval(&[-2., 0.], &[2., 0.], &[0., 0.6], 1.0).unwrap();
        assert!((iv.lo - 0.3).abs() < 1e-12 && (iv.hi - 0.7).abs() < 1e-12);
        assert!(free_interval(&[-2., 0.], &[2., 0.], &[0., 1.5], 1.0).is_none());
        // tangent
        let iv = free_interval(&[-2., 0.], &[2., 0.], &[0., 1.0], 1.0).unwrap();
        assert!((iv.lo - 0.5).abs() < 1e-6 && (iv.hi - 0.5).abs() < 1e-6);
        // zero-length segment
        assert!(free_interval(&[0., 0.], &[0., 0.], &[0., 1.0], 1.0).is_some());
        assert!(free_interval(&[0., 0.], &[0., 0.], &[0., 1.5], 1.0).is_none());
    }

    #[test]
    fn reduced_examples() {
        let pi = Curve::from_values(&[1.0]).unwrap();
        let sigma = Curve::from_values(&[-1.0, -2.0]).unwrap();
        let (fp, fs) = reduced_reach_bruteforce(&pi, &sigma, 2.0, &[0]).unwrap();
        // π = (1) against all of σ = (-1, -2) costs 3, so no π exit
        assert_eq!(fp, Vec::<usize>::new());
        assert_eq!(fs, vec![0]);
        let (fp, fs) = reduced_reach_bruteforce(&pi, &sigma, 2.0, &[]).unwrap();
        assert!(fp.is_empty() && fs.is_empty());
    }
}
