//! Greedy traversal of separated 1D curves.
//!
//! The upper curve `a` has values `>= 0` and the lower curve `b` values
//! `<= 0`, so `(p, q)` is free iff `a[p] - b[q] <= δ`. The set of lower
//! vertices visible from `a[p]` is a threshold set, which is what makes the
//! greedy steps below well defined. Steps on the lower curve are taken on
//! the mirrored instance `(-b, -a)`, where they become steps on the upper one.

use super::range_index::{RangeIndex, ValueRange};
use super::trace::{self, StepKind};
use crate::error::{Error, Result};

/// One orientation of a separated instance.
#[derive(Debug, Clone)]
pub struct Side {
    pub(crate) a: RangeIndex,
    pub(crate) b: RangeIndex,
    pub(crate) delta: i64,
}

impl Side {
    fn new(a: Vec<i64>, b: Vec<i64>, delta: i64) -> Side {
        Side {
            a: RangeIndex::new(a),
            b: RangeIndex::new(b),
            delta,
        }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    pub fn free(&self, p: usize, q: usize) -> bool {
        self.a.value(p) - self.b.value(q) <= self.delta
    }

    /// First index in `[p, end]` whose value is not within δ of `b[q]`, or
    /// `end + 1`.
    pub fn stop(&self, p: usize, end: usize, q: usize) -> usize {
        let threshold = self.b.value(q) + self.delta;
        self.a
            .min_index(ValueRange::greater_than(threshold), p, end)
            .unwrap_or(end + 1)
    }

    /// Smallest reachable index whose visibility contains that of `p`.
    pub fn min_step(&self, p: usize, end: usize, q: usize, d: usize) -> Option<usize> {
        let lowest_seen =
            self.b
                .min_height(ValueRange::at_least(self.a.value(p) - self.delta), q, d)?;
        let stop = self.stop(p, end, q);
        let cand = self
            .a
            .min_index(ValueRange::at_most(lowest_seen + self.delta), p + 1, end)?;
        (cand < stop).then_some(cand)
    }

    /// Largest reachable index with maximal visibility, provided that
    /// visibility contains that of `p`.
    pub fn max_step(&self, p: usize, end: usize, q: usize, d: usize) -> Option<usize> {
        let lowest_seen =
            self.b
                .min_height(ValueRange::at_least(self.a.value(p) - self.delta), q, d)?;
        let stop = self.stop(p, end, q);
        if stop <= p + 1 {
            return None;
        }
        let best = self.a.min_height(
            ValueRange::at_most(lowest_seen + self.delta),
            p + 1,
            stop - 1,
        )?;
        let best_seen = self
            .b
            .min_height(ValueRange::at_least(best - self.delta), q, d)?;
        self.a
            .max_index(ValueRange::at_most(best_seen + self.delta), p + 1, stop - 1)
    }
}

/// A separated instance with both orientations indexed.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub(crate) fwd: Side,
    pub(crate) rev: Side,
}

impl Reduced {
    /// `pi` values must be `>= 0`, `sigma` values `<= 0`, `delta >= 0`.
    pub fn new(pi: Vec<i64>, sigma: Vec<i64>, delta: i64) -> Result<Reduced> {
        if pi.is_empty() || sigma.is_empty() {
            return Err(Error::EmptyCurve);
        }
        if let Some(i) = pi.iter().position(|&v| v < 0) {
            return Err(Error::Contract(format!("pi[{i}] = {} is below 0", pi[i])));
        }
        if let Some(i) = sigma.iter().position(|&v| v > 0) {
            return Err(Error::Contract(format!(
                "sigma[{i}] = {} is above 0",
                sigma[i]
            )));
        }
        if delta < 0 {
            return Err(Error::ParameterDomain {
                name: "delta",
                value: delta as f64,
                expected: ">= 0",
            });
        }
        let rev = Side::new(
            sigma.iter().map(|v| -v).collect(),
            pi.iter().map(|v| -v).collect(),
            delta,
        );
        let fwd = Side::new(pi, sigma, delta);
        Ok(Reduced { fwd, rev })
    }

    pub fn n(&self) -> usize {
        self.fwd.n()
    }

    pub fn m(&self) -> usize {
        self.fwd.m()
    }

    pub fn pi(&self) -> &[i64] {
        self.fwd.a.values()
    }

    pub fn sigma(&self) -> &[i64] {
        self.fwd.b.values()
    }

    pub fn delta(&self) -> i64 {
        self.fwd.delta
    }

    pub fn free(&self, p: usize, q: usize) -> bool {
        self.fwd.free(p, q)
    }

    pub fn stop_pi(&self, p: usize, b: usize, q: usize) -> usize {
        self.fwd.stop(p, b, q)
    }

    pub fn stop_sigma(&self, q: usize, d: usize, p: usize) -> usize {
        self.rev.stop(q, d, p)
    }

    pub fn min_greedy_step_pi(&self, p: usize, b: usize, q: usize, d: usize) -> Option<usize> {
        self.fwd.min_step(p, b, q, d)
    }

    pub fn max_greedy_step_pi(&self, p: usize, b: usize, q: usize, d: usize) -> Option<usize> {
        self.fwd.max_step(p, b, q, d)
    }

    pub fn min_greedy_step_sigma(&self, p: usize, b: usize, q: usize, d: usize) -> Option<usize> {
        self.rev.min_step(q, d, p, b)
    }

    pub fn max_greedy_step_sigma(&self, p: usize, b: usize, q: usize, d: usize) -> Option<usize> {
        self.rev.max_step(q, d, p, b)
    }

    /// Whether the discrete Fréchet distance is at most δ.
    pub fn greedy_decide(&self) -> bool {
        let (n, m) = (self.n(), self.m());
        if !self.free(0, 0) {
            return false;
        }
        let (mut p, mut q) = (0, 0);
        loop {
            let mut moved = false;
            if let Some(p2) = self.fwd.max_step(p, n - 1, q, m - 1) {
                p = p2;
                moved = true;
                trace::record(p, q, StepKind::MaxPi);
            }
            if let Some(q2) = self.rev.max_step(q, m - 1, p, n - 1) {
                q = q2;
                moved = true;
                trace::record(p, q, StepKind::MaxSigma);
            }
            if !moved {
                break;
            }
        }
        p == n - 1 && q == m - 1
    }
}
