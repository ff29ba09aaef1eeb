//! Exit sets of the reduced free-space problem.
//!
//! Given entry vertices on the bottom row (π entries) and on the left column
//! (σ entries), find every π vertex reachable on the top row and every σ
//! vertex reachable on the right column. Each algorithm is written once for
//! an oriented view; the σ-entry variants run on the mirrored view.

use super::greedy::{Reduced, Side};
use super::trace::{self, StepKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EntryExitSets {
    pub entries: Vec<usize>,
    pub f_pi: Vec<usize>,
    pub f_sigma: Vec<usize>,
}

#[derive(Clone, Copy)]
struct View<'a> {
    fwd: &'a Side,
    rev: &'a Side,
    swapped: bool,
}

impl<'a> View<'a> {
    fn swap(self) -> View<'a> {
        View {
            fwd: self.rev,
            rev: self.fwd,
            swapped: !self.swapped,
        }
    }

    fn record(&self, p: usize, q: usize, on_pi: bool, max: bool) {
        let on_pi = on_pi != self.swapped;
        let (p, q) = if self.swapped { (q, p) } else { (p, q) };
        let kind = match (on_pi, max) {
            (true, true) => StepKind::MaxPi,
            (true, false) => StepKind::MinPi,
            (false, true) => StepKind::MaxSigma,
            (false, false) => StepKind::MinSigma,
        };
        trace::record(p, q, kind);
    }

    /// σ indices `e ∈ [q, d]` with `(b, e)` reachable from the greedy pair
    /// `(p, q)` inside `[p, b] × [q, d]`.
    fn find_sigma_exits(&self, p: usize, b: usize, q: usize, d: usize, out: &mut Vec<usize>) {
        let mut stack = vec![(p, q, d)];
        while let Some((p, q, d)) = stack.pop() {
            if q == d {
                if self.fwd.stop(p, b, q) == b + 1 {
                    out.push(q);
                }
                continue;
            }
            if let Some(p2) = self.fwd.max_step(p, b, q, d) {
                self.record(p2, q, true, true);
                stack.push((p2, q, d));
            } else if let Some(q2) = self.rev.max_step(q, d, p, b) {
                self.record(p, q2, false, true);
                stack.push((p, q, q2 - 1));
                stack.push((p, q2, d));
            } else {
                stack.push((p, q, d - 1));
            }
        }
    }

    fn find_pi_exits(&self, p: usize, b: usize, q: usize, d: usize, out: &mut Vec<usize>) {
        self.swap().find_sigma_exits(q, d, p, b, out);
    }

    fn pi_exits_from_pi(&self, entries: &[usize], out: &mut Vec<usize>) {
        let (n, m) = (self.fwd.n(), self.fwd.m());
        let mut dropped_upto: Option<usize> = None;
        for &start in entries {
            if dropped_upto.is_some_and(|u| start <= u) || !self.fwd.free(start, 0) {
                continue;
            }
            let (mut p, mut q) = (start, 0);
            loop {
                let mut moved = false;
                if let Some(q2) = self.rev.max_step(q, m - 1, p, n - 1) {
                    q = q2;
                    moved = true;
                    self.record(p, q, false, true);
                }
                if let Some(p2) = self.fwd.max_step(p, n - 1, q, m - 1) {
                    p = p2;
                    moved = true;
                    self.record(p, q, true, true);
                }
                if !moved {
                    break;
                }
            }
            let last = self.fwd.stop(p, n - 1, q) - 1;
            self.find_pi_exits(start, last, 0, m - 1, out);
            dropped_upto = Some(last);
        }
    }

    fn sigma_exits_from_pi(&self, entries: &[usize], out: &mut Vec<usize>) {
        let (n, m) = (self.fwd.n(), self.fwd.m());
        let delta = self.fwd.delta;
        let mut top: isize = m as isize - 1;
        let mut dropped_upto: Option<usize> = None;
        for &start in entries {
            if top < 0 {
                break;
            }
            if dropped_upto.is_some_and(|u| start <= u) || !self.fwd.free(start, 0) {
                continue;
            }
            // First σ vertex that sees every remaining π vertex.
            let highest = self
                .fwd
                .a
                .max_height(super::range_index::ValueRange::all(), start, n - 1)
                .expect("non-empty range");
            let Some(target) = self.fwd.b.min_index(
                super::range_index::ValueRange::at_least(highest - delta),
                0,
                m - 1,
            ) else {
                continue;
            };
            let (mut p, mut q) = (start, 0);
            while q != target {
                let mut moved = false;
                if let Some(q2) = self.rev.max_step(q, target, p, n - 1) {
                    q = q2;
                    moved = true;
                    self.record(p, q, false, true);
                }
                if q != target {
                    if let Some(p2) = self.fwd.min_step(p, n - 1, q, target) {
                        p = p2;
                        moved = true;
                        self.record(p, q, true, false);
                    }
                }
                if !moved {
                    break;
                }
            }
            if q == target && target as isize <= top {
                self.find_sigma_exits(p, n - 1, target, top as usize, out);
                top = target as isize - 1;
            }
            dropped_upto = Some(p);
        }
    }
}

fn sorted_unique(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn finish(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

impl Reduced {
    fn view(&self) -> View<'_> {
        View {
            fwd: &self.fwd,
            rev: &self.rev,
            swapped: false,
        }
    }

    fn check_range(&self, p: usize, b: usize, q: usize, d: usize) -> Result<()> {
        if p > b || b >= self.n() || q > d || d >= self.m() {
            return Err(Error::Contract(format!(
                "bad ranges [{p}, {b}] x [{q}, {d}] for {} x {}",
                self.n(),
                self.m()
            )));
        }
        Ok(())
    }

    /// σ exits of `π[p..=b]` against `σ[q..=d]`, where `(p, q)` is a greedy
    /// pair of the enclosing instance.
    pub fn find_sigma_exits(&self, p: usize, b: usize, q: usize, d: usize) -> Result<Vec<usize>> {
        self.check_range(p, b, q, d)?;
        let mut out = Vec::new();
        self.view().find_sigma_exits(p, b, q, d, &mut out);
        Ok(finish(out))
    }

    /// π exits for π entries.
    pub fn pi_exits_from_pi(&self, entries: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        self.view()
            .pi_exits_from_pi(&sorted_unique(entries), &mut out);
        finish(out)
    }

    /// σ exits for π entries.
    pub fn sigma_exits_from_pi(&self, entries: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        self.view()
            .sigma_exits_from_pi(&sorted_unique(entries), &mut out);
        finish(out)
    }

    /// Exits for entries on both curves: `entries` on π at σ index 0, and
    /// `sigma_entries` on σ at π index 0.
    pub fn solve_reduced(
        &self,
        entries: &[usize],
        sigma_entries: &[usize],
    ) -> Result<EntryExitSets> {
        if let Some(&e) = entries.iter().find(|&&e| e >= self.n()) {
            return Err(Error::Contract(format!("π entry {e} out of range")));
        }
        if let Some(&e) = sigma_entries.iter().find(|&&e| e >= self.m()) {
            return Err(Error::Contract(format!("σ entry {e} out of range")));
        }
        let e_pi = sorted_unique(entries);
        let e_sigma = sorted_unique(sigma_entries);
        let v = self.view();
        let mut f_pi = Vec::new();
        let mut f_sigma = Vec::new();
        v.pi_exits_from_pi(&e_pi, &mut f_pi);
        v.sigma_exits_from_pi(&e_pi, &mut f_sigma);
        v.swap().sigma_exits_from_pi(&e_sigma, &mut f_pi);
        v.swap().pi_exits_from_pi(&e_sigma, &mut f_sigma);
        Ok(EntryExitSets {
            entries: e_pi,
            f_pi: finish(f_pi),
            f_sigma: finish(f_sigma),
        })
    }
}
