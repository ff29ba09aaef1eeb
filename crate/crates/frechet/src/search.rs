//! A (1+ε)-approximate Fréchet distance value from the decider.
//!
//! A coarse bracket comes from deciders with ε = 1 on a doubling (or
//! halving) sequence; the bracket is then narrowed with deciders at ε/3.
//! Each narrowing step queries `mid = √(lo·hi/(1+ε/3))`: GT moves `lo` to
//! `mid`, LE moves `hi` to `(1+ε/3)·mid`, which shrinks `hi/lo` to
//! `√((1+ε/3)·hi/lo)` either way and converges to `1+ε/3 < 1+ε`.

use serde::Serialize;

use crate::curves::{check_same_dim, dist, Curve};
use crate::error::{Error, Result};
use crate::freespace::{approximate_decide, Verdict};

/// One decider call and its answer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evidence {
    pub delta: f64,
    pub epsilon: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxResult {
    /// Equal to `upper`.
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub decider_calls: usize,
    /// Every decider call in order, so that the bracket can be re-checked.
    pub evidence: Vec<Evidence>,
}

/// Safety net against float stagnation; far above what convergence needs.
const MAX_CALLS: usize = 400;

struct Driver<'a> {
    pi: &'a Curve,
    sigma: &'a Curve,
    evidence: Vec<Evidence>,
}

impl Driver<'_> {
    fn le(&mut self, delta: f64, epsilon: f64) -> Result<bool> {
        if self.evidence.len() >= MAX_CALLS {
            return Err(Error::Contract(format!(
                "search did not converge in {MAX_CALLS} decider calls"
            )));
        }
        let verdict = approximate_decide(self.pi, self.sigma, delta, epsilon)?.verdict;
        self.evidence.push(Evidence {
            delta,
            epsilon,
            verdict,
        });
        Ok(verdict == Verdict::AtMostOnePlusEpsDelta)
    }
}

pub fn approximate_frechet(pi: &Curve, sigma: &Curve, epsilon: f64) -> Result<ApproxResult> {
    check_same_dim(pi, sigma)?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::ParameterDomain {
            name: "epsilon",
            value: epsilon,
            expected: "(0, 1]",
        });
    }
    let mut drv = Driver {
        pi,
        sigma,
        evidence: Vec::new(),
    };
    let scale = pi
        .flat()
        .iter()
        .chain(sigma.flat())
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let tiny = 1e-30 * scale.max(f64::MIN_POSITIVE);
    let finish = |drv: Driver, lower: f64, upper: f64| ApproxResult {
        value: upper,
        lower,
        upper,
        decider_calls: drv.evidence.len(),
        evidence: drv.evidence,
    };
    if scale == 0.0 || drv.le(tiny, 1.0)? {
        return Ok(finish(drv, 0.0, 0.0));
    }

    let start_gap = dist(pi.vertex(0), sigma.vertex(0));
    let end_gap = dist(pi.vertex(pi.len() - 1), sigma.vertex(sigma.len() - 1));
    let l0 = start_gap.max(end_gap);
    // lower ≤ d_F and d_F ≤ upper throughout
    let (mut lower, mut upper);
    if l0 > 0.0 {
        lower = l0;
        let mut delta = l0;
        loop {
            if drv.le(delta, 1.0)? {
                upper = 2.0 * delta;
                break;
            }
            lower = delta;
            delta *= 2.0;
        }
    } else {
        // every pair of points is within this distance
        let o = sigma.vertex(0);
        let reach = pi.vertices().map(|v| dist(v, o)).fold(0.0, f64::max)
            + sigma.vertices().map(|v| dist(v, o)).fold(0.0, f64::max);
        upper = reach;
        let mut delta = 0.5 * reach;
        loop {
            if !drv.le(delta, 1.0)? {
                lower = delta;
                break;
            }
            upper = upper.min(2.0 * delta);
            delta *= 0.5;
        }
    }

    let third = epsilon / 3.0;
    while upper > (1.0 + epsilon) * lower {
        let mid = (lower * upper / (1.0 + third)).sqrt();
        if drv.le(mid, third)? {
            upper = upper.min((1.0 + third) * mid);
        } else {
            lower = lower.max(mid);
        }
    }
    Ok(finish(drv, lower, upper))
}
