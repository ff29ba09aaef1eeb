//! Orthogonal range queries over `(index, value)` points of a 1D curve.
//!
//! Index-extremal queries (`min_index`, `max_index`) walk a min/max segment
//! tree; value-extremal queries (`min_height`, `max_height`) use a wavelet
//! matrix over value ranks, so a successor/predecessor in an index range costs
//! `O(log distinct values)`. Values are integers, which makes strict and
//! non-strict bounds exact.

use std::ops::Bound;

use crate::error::{Error, Result};

/// A set of admissible values, each end open, closed or unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueRange {
    pub lo: Bound<i64>,
    pub hi: Bound<i64>,
}

impl ValueRange {
    pub fn all() -> Self {
        ValueRange {
            lo: Bound::Unbounded,
            hi: Bound::Unbounded,
        }
    }
    pub fn at_least(x: i64) -> Self {
        ValueRange {
            lo: Bound::Included(x),
            hi: Bound::Unbounded,
        }
    }
    pub fn greater_than(x: i64) -> Self {
        ValueRange {
            lo: Bound::Excluded(x),
            hi: Bound::Unbounded,
        }
    }
    pub fn at_most(x: i64) -> Self {
        ValueRange {
            lo: Bound::Unbounded,
            hi: Bound::Included(x),
        }
    }
    pub fn less_than(x: i64) -> Self {
        ValueRange {
            lo: Bound::Unbounded,
            hi: Bound::Excluded(x),
        }
    }
    pub fn closed(a: i64, b: i64) -> Self {
        ValueRange {
            lo: Bound::Included(a),
            hi: Bound::Included(b),
        }
    }

    /// Inclusive integer bounds; `None` if the range is empty.
    fn inclusive(&self) -> Option<(i64, i64)> {
        let lo = match self.lo {
            Bound::Included(x) => x,
            Bound::Excluded(x) => x.checked_add(1)?,
            Bound::Unbounded => i64::MIN,
        };
        let hi = match self.hi {
            Bound::Included(x) => x,
            Bound::Excluded(x) => x.checked_sub(1)?,
            Bound::Unbounded => i64::MAX,
        };
        (lo <= hi).then_some((lo, hi))
    }

    pub fn contains(&self, v: i64) -> bool {
        self.inclusive().is_some_and(|(lo, hi)| lo <= v && v <= hi)
    }
}

#[derive(Debug, Clone)]
pub struct RangeIndex {
    values: Vec<i64>,
    size: usize,
    tmin: Vec<i64>,
    tmax: Vec<i64>,
    wavelet: Wavelet,
}

impl RangeIndex {
    pub fn new(values: Vec<i64>) -> RangeIndex {
        let n = values.len();
        let size = n.next_power_of_two().max(1);
        let mut tmin = vec![i64::MAX; 2 * size];
        let mut tmax = vec![i64::MIN; 2 * size];
        for (i, &v) in values.iter().enumerate() {
            tmin[size + i] = v;
            tmax[size + i] = v;
        }
        for k in (1..size).rev() {
            tmin[k] = tmin[2 * k].min(tmin[2 * k + 1]);
            tmax[k] = tmax[2 * k].max(tmax[2 * k + 1]);
        }
        let wavelet = Wavelet::new(&values);
        RangeIndex {
            values,
            size,
            tmin,
            tmax,
            wavelet,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> i64 {
        self.values[i]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Smallest `i ∈ [p, b]` with `values[i]` in `range`.
    pub fn min_index(&self, range: ValueRange, p: usize, b: usize) -> Option<usize> {
        let (lo, hi) = range.inclusive()?;
        if p > b || p >= self.len() {
            return None;
        }
        let b = b.min(self.len() - 1);
        self.first_in(1, 0, self.size - 1, p, b, lo, hi)
    }

    /// Largest `i ∈ [p, b]` with `values[i]` in `range`.
    pub fn max_index(&self, range: ValueRange, p: usize, b: usize) -> Option<usize> {
        let (lo, hi) = range.inclusive()?;
        if p > b || p >= self.len() {
            return None;
        }
        let b = b.min(self.len() - 1);
        self.last_in(1, 0, self.size - 1, p, b, lo, hi)
    }

    /// Smallest value in `range` among indices `[p, b]`.
    pub fn min_height(&self, range: ValueRange, p: usize, b: usize) -> Option<i64> {
        let (lo, hi) = range.inclusive()?;
        if p > b || p >= self.len() {
            return None;
        }
        let b = b.min(self.len() - 1);
        let v = self.wavelet.successor(p, b + 1, lo)?;
        (v <= hi).then_some(v)
    }

    /// Largest value in `range` among indices `[p, b]`.
    pub fn max_height(&self, range: ValueRange, p: usize, b: usize) -> Option<i64> {
        let (lo, hi) = range.inclusive()?;
        if p > b || p >= self.len() {
            return None;
        }
        let b = b.min(self.len() - 1);
        let v = self.wavelet.predecessor(p, b + 1, hi)?;
        (v >= lo).then_some(v)
    }

    #[allow(clippy::too_many_arguments)]
    fn first_in(
        &self,
        k: usize,
        l: usize,
        r: usize,
        p: usize,
        b: usize,
        lo: i64,
        hi: i64,
    ) -> Option<usize> {
        if r < p || l > b || self.tmax[k] < lo || self.tmin[k] > hi {
            return None;
        }
        if l == r {
            return Some(l);
        }
        let mid = (l + r) / 2;
        self.first_in(2 * k, l, mid, p, b, lo, hi)
            .or_else(|| self.first_in(2 * k + 1, mid + 1, r, p, b, lo, hi))
    }

    #[allow(clippy::too_many_arguments)]
    fn last_in(
        &self,
        k: usize,
        l: usize,
        r: usize,
        p: usize,
        b: usize,
        lo: i64,
        hi: i64,
    ) -> Option<usize> {
        if r < p || l > b || self.tmax[k] < lo || self.tmin[k] > hi {
            return None;
        }
        if l == r {
            return Some(l);
        }
        let mid = (l + r) / 2;
        self.last_in(2 * k + 1, mid + 1, r, p, b, lo, hi)
            .or_else(|| self.last_in(2 * k, l, mid, p, b, lo, hi))
    }
}

/// Builds an index over values that must sit on the `gamma` grid within
/// `[-bound, bound]`; keys are the integer grid levels.
pub fn build_range_index(values: &[f64], gamma: f64, bound: f64) -> Result<RangeIndex> {
    if !(gamma > 0.0) {
        return Err(Error::ParameterDomain {
            name: "gamma",
            value: gamma,
            expected: "> 0",
        });
    }
    let tol = 1e-9;
    let mut keys = Vec::with_capacity(values.len());
    for (i, &v) in values.iter().enumerate() {
        let level = (v / gamma).round();
        if (v / gamma - level).abs() > tol || v.abs() > bound * (1.0 + tol) {
            return Err(Error::Contract(format!(
                "value {v} at {i} is off the grid or out of bounds"
            )));
        }
        keys.push(level as i64);
    }
    Ok(RangeIndex::new(keys))
}

/// Wavelet matrix over value ranks.
#[derive(Debug, Clone)]
struct Wavelet {
    sorted: Vec<i64>,
    levels: Vec<Level>,
}

#[derive(Debug, Clone)]
struct Level {
    /// zeros[i] = number of zero bits among the first i positions.
    zeros: Vec<u32>,
    total_zeros: usize,
}

impl Wavelet {
    fn new(values: &[i64]) -> Wavelet {
        let mut sorted = values.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let bits = (usize::BITS - sorted.len().leading_zeros()).max(1) as usize;
        let mut cur: Vec<usize> = values
            .iter()
            .map(|v| sorted.binary_search(v).unwrap())
            .collect();
        let mut levels = Vec::with_capacity(bits);
        for lvl in (0..bits).rev() {
            let mut zeros = Vec::with_capacity(cur.len() + 1);
            zeros.push(0u32);
            let mut z = 0u32;
            for &x in &cur {
                if (x >> lvl) & 1 == 0 {
                    z += 1;
                }
                zeros.push(z);
            }
            let mut next: Vec<usize> = cur
                .iter()
                .copied()
                .filter(|x| (x >> lvl) & 1 == 0)
                .collect();
            next.extend(cur.iter().copied().filter(|x| (x >> lvl) & 1 == 1));
            levels.push(Level {
                zeros,
                total_zeros: z as usize,
            });
            cur = next;
        }
        Wavelet { sorted, levels }
    }

    fn bits(&self) -> usize {
        self.levels.len()
    }

    /// Number of ranks `< rank` in positions `[l, r)`.
    fn count_less(&self, mut l: usize, mut r: usize, rank: usize) -> usize {
        if rank >= 1 << self.bits() {
            return r - l;
        }
        let mut count = 0;
        for (d, level) in self.levels.iter().enumerate() {
            let bit = (rank >> (self.bits() - 1 - d)) & 1;
            let (zl, zr) = (level.zeros[l] as usize, level.zeros[r] as usize);
            if bit == 1 {
                count += zr - zl;
                l = level.total_zeros + (l - zl);
                r = level.total_zeros + (r - zr);
            } else {
                l = zl;
                r = zr;
            }
        }
        count
    }

    /// Rank of the `k`-th smallest (0-based) in positions `[l, r)`.
    fn kth_smallest(&self, mut l: usize, mut r: usize, mut k: usize) -> usize {
        let mut rank = 0;
        for level in &self.levels {
            let (zl, zr) = (level.zeros[l] as usize, level.zeros[r] as usize);
            let zeros = zr - zl;
            rank <<= 1;
            if k < zeros {
                l = zl;
                r = zr;
            } else {
                k -= zeros;
                rank |= 1;
                l = level.total_zeros + (l - zl);
                r = level.total_zeros + (r - zr);
            }
        }
        rank
    }

    /// Smallest value `>= x` in positions `[l, r)`.
    fn successor(&self, l: usize, r: usize, x: i64) -> Option<i64> {
        let rank = self.sorted.partition_point(|&v| v < x);
        let below = self.count_less(l, r, rank);
        (below < r - l).then(|| self.sorted[self.kth_smallest(l, r, below)])
    }

    /// Largest value `<= x` in positions `[l, r)`.
    fn predecessor(&self, l: usize, r: usize, x: i64) -> Option<i64> {
        let rank = self.sorted.partition_point(|&v| v <= x);
        let below = self.count_less(l, r, rank);
        (below > 0).then(|| self.sorted[self.kth_smallest(l, r, below - 1)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        let idx = build_range_index(&[1.0, 3.0, 2.0, 3.0], 1.0, 3.0).unwrap();
        assert_eq!(idx.min_index(ValueRange::closed(2, 3), 0, 3), Some(1));
        assert_eq!(idx.max_height(ValueRange::closed(0, 10), 0, 2), Some(3));
        assert_eq!(idx.min_height(ValueRange::greater_than(1), 0, 3), Some(2));
        assert_eq!(idx.max_index(ValueRange::less_than(3), 0, 3), Some(2));
        assert_eq!(idx.min_index(ValueRange::greater_than(3), 0, 3), None);
        assert_eq!(idx.min_index(ValueRange::all(), 3, 2), None);
    }

    #[test]
    fn rejects_off_grid() {
        assert!(build_range_index(&[0.5], 1.0, 3.0).is_err());
        assert!(build_range_index(&[7.0], 1.0, 3.0).is_err());
    }

    fn range_strategy() -> impl Strategy<Value = ValueRange> {
        let b = prop_oneof![
            Just(Bound::Unbounded),
            (-12i64..12).prop_map(Bound::Included),
            (-12i64..12).prop_map(Bound::Excluded),
        ];
        (b.clone(), b).prop_map(|(lo, hi)| ValueRange { lo, hi })
    }

    proptest! {
        #[test]
        fn matches_scan(values in prop::collection::vec(-10i64..10, 1..40),
                        r in range_strategy(), p in 0usize..45, len in 0usize..45) {
            let idx = RangeIndex::new(values.clone());
            let b = p + len;
            let hits: Vec<usize> = (p..=b.min(values.len().saturating_sub(1)))
                .filter(|&i| i < values.len() && r.contains(values[i]))
                .collect();
            prop_assert_eq!(idx.min_index(r, p, b), hits.first().copied());
            prop_assert_eq!(idx.max_index(r, p, b), hits.last().copied());
            prop_assert_eq!(idx.min_height(r, p, b), hits.iter().map(|&i| values[i]).min());
            prop_assert_eq!(idx.max_height(r, p, b), hits.iter().map(|&i| values[i]).max());
        }
    }
}
