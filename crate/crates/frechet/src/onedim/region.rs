//! Exit intervals of a piece×piece block.
//!
//! Pipeline: project both pieces to separated 1D curves, round them onto a
//! grid of spacing `γ = ε̂δ/3`, insert one entry vertex per entered segment,
//! then locate the ends of every exit interval by batched binary searches,
//! each batch answered by one [`Reduced::solve_reduced`] call.
//!
//! Values live in fixed point: one grid level is `FINE` units, so δ is the
//! integer `3K·FINE`. Entry vertices may fall between levels; the fine units
//! keep them exact enough without leaving integer arithmetic.
//!
//! Both curves are handled as a [`Track`] of nonnegative values where
//! smaller means closer to the other curve; for σ that is `-σ̂`.

use crate::baseline::Interval;
use crate::curves::Curve;
use crate::decomposition::lambda;
use crate::error::{Error, Result};
use crate::freespace::ReachFront;

use super::greedy::Reduced;
use super::project::{project_pieces, Separated1D};

const FINE: i64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Grid {
    /// Number of grid levels up to δ, i.e. `3K` with `K = ⌈1/ε̂⌉`.
    levels: i64,
    gamma: f64,
}

impl Grid {
    fn new(delta: f64, epsilon_hat: f64) -> Result<Grid> {
        if !(epsilon_hat > 0.0 && epsilon_hat <= 1.0) {
            return Err(Error::ParameterDomain {
                name: "epsilon_hat",
                value: epsilon_hat,
                expected: "(0, 1]",
            });
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::ParameterDomain {
                name: "delta",
                value: delta,
                expected: "> 0",
            });
        }
        let k = (1.0 / epsilon_hat - 1e-9).ceil().max(1.0) as i64;
        Ok(Grid {
            levels: 3 * k,
            gamma: delta / (3 * k) as f64,
        })
    }

    /// δ in fine units.
    fn bound(&self) -> i64 {
        self.levels * FINE
    }

    /// Grid level at or below `x`, in fine units, unclamped.
    fn floor_units(&self, x: f64) -> f64 {
        (x / self.gamma + 1e-9).floor() * FINE as f64
    }

    fn to_real(&self, units: i64) -> f64 {
        units as f64 * self.gamma / FINE as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Knot {
    /// Parameter along the piece, vertex `k` at `k`.
    t: f64,
    value: i64,
    entry: bool,
}

/// One rounded piece. Knots are the original vertices, crossings of δ and
/// entry vertices, sorted by parameter.
#[derive(Debug, Clone)]
struct Track {
    knots: Vec<Knot>,
    segments: usize,
}

impl Track {
    /// Rounds down onto the grid; values above δ become 2δ, with a knot at
    /// exactly δ wherever a segment crosses it.
    fn build(values: &[f64], grid: &Grid) -> Track {
        let bound = grid.bound();
        let raw: Vec<f64> = values.iter().map(|&x| grid.floor_units(x)).collect();
        let clamp = |r: f64| {
            if r > bound as f64 {
                2 * bound
            } else {
                r as i64
            }
        };
        let mut knots = vec![Knot {
            t: 0.0,
            value: clamp(raw[0]),
            entry: false,
        }];
        let b = bound as f64;
        for i in 0..values.len() - 1 {
            let (r0, r1) = (raw[i], raw[i + 1]);
            if (r0 < b && r1 > b) || (r0 > b && r1 < b) {
                let t = i as f64 + (b - r0) / (r1 - r0);
                knots.push(Knot {
                    t,
                    value: bound,
                    entry: false,
                });
            }
            knots.push(Knot {
                t: (i + 1) as f64,
                value: clamp(r1),
                entry: false,
            });
        }
        Track {
            knots,
            segments: values.len() - 1,
        }
    }

    /// Index `k` of the linear piece `[knots[k], knots[k+1]]` holding `t`.
    fn piece_at(&self, t: f64) -> usize {
        let k = self.knots.partition_point(|x| x.t <= t);
        k.saturating_sub(1).min(self.knots.len() - 2)
    }

    fn interpolate(&self, k: usize, t: f64) -> f64 {
        let (a, b) = (self.knots[k], self.knots[k + 1]);
        if b.t == a.t {
            return a.value as f64;
        }
        let lam = ((t - a.t) / (b.t - a.t)).clamp(0.0, 1.0);
        a.value as f64 + lam * (b.value - a.value) as f64
    }

    /// Parameter on piece `k` where the value is `units`.
    fn param_of(&self, k: usize, units: i64) -> f64 {
        let (a, b) = (self.knots[k], self.knots[k + 1]);
        if a.value == b.value {
            return a.t;
        }
        let lam = (units - a.value) as f64 / (b.value - a.value) as f64;
        (a.t + lam * (b.t - a.t)).clamp(a.t, b.t)
    }

    /// Marks the leftmost point of `seg + iv` whose value is at most
    /// `threshold` as an entry. The point is moved left onto the fine grid
    /// (by less than one fine unit of value) so that it is representable.
    fn add_entry(&mut self, seg: usize, iv: Interval, threshold: i64) {
        let x0 = seg as f64 + iv.lo.clamp(0.0, 1.0);
        let x1 = seg as f64 + iv.hi.clamp(0.0, 1.0);
        let k = self.piece_at(x0);
        let w0 = self.interpolate(k, x0);
        if w0 <= threshold as f64 {
            let (a, b) = (self.knots[k], self.knots[k + 1]);
            let snapped = if b.value > a.value {
                w0.floor() as i64
            } else if b.value < a.value {
                w0.ceil() as i64
            } else {
                a.value
            };
            let t = if snapped as f64 == w0 {
                x0
            } else {
                self.param_of(k, snapped)
            };
            self.insert_entry(k, t, snapped);
            return;
        }
        // only a decreasing segment can become close enough further right
        let end = self.knots.partition_point(|x| x.t <= (seg + 1) as f64) - 1;
        let Some(kc) = (k..end).find(|&j| self.knots[j + 1].value <= threshold) else {
            return;
        };
        let t = self.param_of(kc, threshold);
        if t <= x1 {
            self.insert_entry(kc, t, threshold);
        }
    }

    fn insert_entry(&mut self, k: usize, t: f64, value: i64) {
        let (a, b) = (self.knots[k], self.knots[k + 1]);
        if t <= a.t {
            self.knots[k].entry = true;
        } else if t >= b.t {
            self.knots[k + 1].entry = true;
        } else {
            self.knots.insert(
                k + 1,
                Knot {
                    t,
                    value,
                    entry: true,
                },
            );
        }
    }

    fn values(&self) -> impl Iterator<Item = i64> + '_ {
        self.knots.iter().map(|k| k.value)
    }
}

/// Result of [`round_and_prepare`]: both pieces rounded, with entry
/// vertices inserted.
#[derive(Debug, Clone)]
pub struct Prepared {
    grid: Grid,
    pi: Track,
    sigma: Track,
}

impl Prepared {
    pub fn gamma(&self) -> f64 {
        self.grid.gamma
    }

    /// Rounded π̂ vertices (originals, crossings and entries) as reals.
    pub fn pi_values(&self) -> Vec<f64> {
        self.pi.values().map(|v| self.grid.to_real(v)).collect()
    }

    /// Rounded σ̂ vertices as reals (nonpositive).
    pub fn sigma_values(&self) -> Vec<f64> {
        self.sigma.values().map(|v| -self.grid.to_real(v)).collect()
    }

    /// Parameters of the rounded π̂ vertices along the original piece.
    pub fn pi_params(&self) -> Vec<f64> {
        self.pi.knots.iter().map(|k| k.t).collect()
    }

    pub fn sigma_params(&self) -> Vec<f64> {
        self.sigma.knots.iter().map(|k| k.t).collect()
    }

    /// Indices of entry vertices on π̂.
    pub fn pi_entries(&self) -> Vec<usize> {
        entry_indices(&self.pi)
    }

    pub fn sigma_entries(&self) -> Vec<usize> {
        entry_indices(&self.sigma)
    }
}

fn entry_indices(track: &Track) -> Vec<usize> {
    (0..track.knots.len())
        .filter(|&k| track.knots[k].entry)
        .collect()
}

/// Rounds a separated pair onto the `ε̂δ/3` grid and inserts one entry
/// vertex on each segment whose entry interval meets the rounded free space.
pub fn round_and_prepare(
    sep: &Separated1D,
    delta: f64,
    epsilon_hat: f64,
    entries: &ReachFront,
) -> Result<Prepared> {
    let grid = Grid::new(delta, epsilon_hat)?;
    if sep.pi_vals.is_empty() || sep.sigma_vals.is_empty() {
        return Err(Error::EmptyCurve);
    }
    if sep.pi_vals.iter().any(|&v| v < 0.0) || sep.sigma_vals.iter().any(|&v| v > 0.0) {
        return Err(Error::Contract("curves are not separated by 0".into()));
    }
    let flipped: Vec<f64> = sep.sigma_vals.iter().map(|v| -v).collect();
    let mut pi = Track::build(&sep.pi_vals, &grid);
    let mut sigma = Track::build(&flipped, &grid);
    if entries.horizontal.len() != pi.segments || entries.vertical.len() != sigma.segments {
        return Err(Error::Contract(format!(
            "entry front has {}×{} edges for a {}×{} block",
            entries.horizontal.len(),
            entries.vertical.len(),
            pi.segments,
            sigma.segments
        )));
    }
    let bound = grid.bound();
    let pi_threshold = bound - sigma.knots[0].value;
    let sigma_threshold = bound - pi.knots[0].value;
    // insert from the last segment down so earlier knot indices stay valid
    for seg in (0..pi.segments).rev() {
        if let Some(iv) = entries.horizontal[seg] {
            pi.add_entry(seg, iv, pi_threshold);
        }
    }
    for seg in (0..sigma.segments).rev() {
        if let Some(iv) = entries.vertical[seg] {
            sigma.add_entry(seg, iv, sigma_threshold);
        }
    }
    Ok(Prepared { grid, pi, sigma })
}

/// Search state for the open span between two consecutive knots.
#[derive(Debug, Clone, Copy)]
enum Span {
    /// No grid level strictly inside at or below δ.
    Empty,
    /// Constant value at or below δ: one probe decides the whole span.
    Flat { reach: Option<bool> },
    /// Candidate levels `first..first+count`, reachable ones form a prefix
    /// of length in `[lo, hi]`.
    Levels {
        first: i64,
        count: i64,
        lo: i64,
        hi: i64,
    },
}

fn spans_of(track: &Track, grid: &Grid) -> Vec<Span> {
    track
        .knots
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].value, w[1].value);
            if a == b {
                return if a <= grid.bound() {
                    Span::Flat { reach: None }
                } else {
                    Span::Empty
                };
            }
            let (low, high) = (a.min(b), a.max(b));
            let first = low.div_euclid(FINE) + 1;
            let last = ((high + FINE - 1).div_euclid(FINE) - 1).min(grid.levels);
            if first > last {
                Span::Empty
            } else {
                Span::Levels {
                    first,
                    count: last - first + 1,
                    lo: 0,
                    hi: last - first + 1,
                }
            }
        })
        .collect()
}

/// Probe for span `k` in the next round: parameter, value, and candidate
/// index (unused for flat spans).
fn probe(track: &Track, k: usize, span: &Span) -> Option<(f64, i64, i64)> {
    let (a, b) = (track.knots[k], track.knots[k + 1]);
    match *span {
        Span::Flat { reach: None } => Some((0.5 * (a.t + b.t), a.value, 0)),
        Span::Levels { first, lo, hi, .. } if lo < hi => {
            let c = (lo + hi) / 2;
            let units = (first + c) * FINE;
            Some((track.param_of(k, units), units, c))
        }
        _ => None,
    }
}

/// Reachability of everything known on one track after the searches.
struct Outcome {
    knot_reach: Vec<bool>,
    spans: Vec<Span>,
}

fn search(prep: &Prepared) -> Result<(Outcome, Outcome, usize)> {
    let grid = prep.grid;
    let mut pi_spans = spans_of(&prep.pi, &grid);
    let mut sigma_spans = spans_of(&prep.sigma, &grid);
    let mut pi_reach = vec![false; prep.pi.knots.len()];
    let mut sigma_reach = vec![false; prep.sigma.knots.len()];
    let mut rounds = 0;
    loop {
        // the first round only fixes the knots
        let probes = |track: &Track, spans: &[Span]| -> Vec<Option<(f64, i64, i64)>> {
            (0..spans.len())
                .map(|k| {
                    if rounds == 0 {
                        None
                    } else {
                        probe(track, k, &spans[k])
                    }
                })
                .collect()
        };
        let pi_probes = probes(&prep.pi, &pi_spans);
        let sigma_probes = probes(&prep.sigma, &sigma_spans);
        let pending = pi_probes.iter().chain(&sigma_probes).any(Option::is_some);
        if rounds > 0 && !pending {
            break;
        }
        let (pi_vals, pi_slots, pi_entries) = assemble(&prep.pi, &pi_probes);
        let (sigma_vals, sigma_slots, sigma_entries) = assemble(&prep.sigma, &sigma_probes);
        let (f_pi, f_sigma) = exit_sets(
            pi_vals,
            sigma_vals,
            grid.bound(),
            &pi_entries,
            &sigma_entries,
        )?;
        apply(&f_pi, &pi_slots, &pi_probes, &mut pi_reach, &mut pi_spans);
        apply(
            &f_sigma,
            &sigma_slots,
            &sigma_probes,
            &mut sigma_reach,
            &mut sigma_spans,
        );
        if rounds == 0 {
            settle(&prep.pi, &pi_reach, &mut pi_spans);
            settle(&prep.sigma, &sigma_reach, &mut sigma_spans);
        }
        rounds += 1;
    }
    Ok((
        Outcome {
            knot_reach: pi_reach,
            spans: pi_spans,
        },
        Outcome {
            knot_reach: sigma_reach,
            spans: sigma_spans,
        },
        rounds,
    ))
}

/// Resolves every span whose knots already decide it.
///
/// Inside a span the values are monotone and there is no entry, so the
/// reachable part is a prefix from the lower-valued end: walking along the
/// exit edge towards lower values stays free, and a path to an inner point
/// can be cut back to any point with a smaller value. Hence a span is
/// empty if its lower-valued end is unreachable, and full if its
/// higher-valued end is reachable by a path that does not start there.
fn settle(track: &Track, reach: &[bool], spans: &mut [Span]) {
    for (k, span) in spans.iter_mut().enumerate() {
        let (a, b) = (track.knots[k], track.knots[k + 1]);
        let (low_reach, high_reach, high_entry) = if b.value >= a.value {
            (reach[k], reach[k + 1], b.entry)
        } else {
            // walking right lowers the value, so the right end is the low one
            (reach[k + 1], reach[k], false)
        };
        match span {
            Span::Flat { reach: r } => *r = Some(reach[k]),
            Span::Levels { count, lo, hi, .. } => {
                if !low_reach {
                    *hi = 0;
                } else if high_reach && !high_entry {
                    *lo = *count;
                }
                *lo = (*lo).min(*hi);
            }
            Span::Empty => {}
        }
    }
}

/// Grid size below which the reduced problem is solved by a direct sweep
/// over all vertex pairs; building the range indices costs more than that.
/// Tracing forces the greedy path so that its steps can be observed.
const SMALL_GRID: usize = 400;

/// Exit index sets of the reduced problem on two tracks (σ given as
/// nonnegative distances below 0).
fn exit_sets(
    pi: Vec<i64>,
    sigma: Vec<i64>,
    bound: i64,
    pi_entries: &[usize],
    sigma_entries: &[usize],
) -> Result<(Vec<usize>, Vec<usize>)> {
    let (n, m) = (pi.len(), sigma.len());
    if n * m > SMALL_GRID || super::trace::is_enabled() {
        let reduced = Reduced::new(pi, sigma.iter().map(|v| -v).collect(), bound)?;
        let sets = reduced.solve_reduced(pi_entries, sigma_entries)?;
        return Ok((sets.f_pi, sets.f_sigma));
    }
    Ok(exit_sets_dp(&pi, &sigma, bound, pi_entries, sigma_entries))
}

fn exit_sets_dp(
    pi: &[i64],
    sigma: &[i64],
    bound: i64,
    pi_entries: &[usize],
    sigma_entries: &[usize],
) -> (Vec<usize>, Vec<usize>) {
    let (n, m) = (pi.len(), sigma.len());
    let mut row = vec![false; m];
    let mut seeds = vec![false; m];
    for &e in sigma_entries {
        seeds[e] = true;
    }
    let mut pi_seeded = vec![false; n];
    for &e in pi_entries {
        pi_seeded[e] = true;
    }
    let mut f_pi = Vec::new();
    for p in 0..n {
        // `row` holds p-1 on entry; `diag` is row[q-1] of p-1
        let mut diag = false;
        for q in 0..m {
            let above = row[q];
            let free = pi[p] + sigma[q] <= bound;
            let seeded = (q == 0 && pi_seeded[p]) || (p == 0 && seeds[q]);
            let left = q > 0 && row[q - 1];
            row[q] = free && (seeded || above || left || diag);
            diag = above;
        }
        if row[m - 1] {
            f_pi.push(p);
        }
    }
    let f_sigma = (0..m).filter(|&q| row[q]).collect();
    (f_pi, f_sigma)
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Knot(usize),
    Probe(usize),
}

fn assemble(
    track: &Track,
    probes: &[Option<(f64, i64, i64)>],
) -> (Vec<i64>, Vec<Slot>, Vec<usize>) {
    let mut values = Vec::with_capacity(track.knots.len() + probes.len());
    let mut slots = Vec::with_capacity(values.capacity());
    let mut entries = Vec::new();
    for (k, knot) in track.knots.iter().enumerate() {
        if knot.entry {
            entries.push(values.len());
        }
        values.push(knot.value);
        slots.push(Slot::Knot(k));
        if let Some(Some((_, v, _))) = probes.get(k) {
            values.push(*v);
            slots.push(Slot::Probe(k));
        }
    }
    (values, slots, entries)
}

fn apply(
    exits: &[usize],
    slots: &[Slot],
    probes: &[Option<(f64, i64, i64)>],
    knot_reach: &mut [bool],
    spans: &mut [Span],
) {
    let mut hit = vec![false; slots.len()];
    for &e in exits {
        hit[e] = true;
    }
    for (idx, slot) in slots.iter().enumerate() {
        match *slot {
            Slot::Knot(k) => knot_reach[k] = hit[idx],
            Slot::Probe(k) => {
                let c = probes[k].map(|p| p.2).unwrap_or(0);
                match &mut spans[k] {
                    Span::Flat { reach } => *reach = Some(hit[idx]),
                    Span::Levels { lo, hi, .. } => {
                        if hit[idx] {
                            *lo = c + 1;
                        } else {
                            *hi = c;
                        }
                    }
                    Span::Empty => {}
                }
            }
        }
    }
}

/// A point of known status on one segment, in parameter order.
#[derive(Debug, Clone, Copy)]
struct Known {
    t: f64,
    value: i64,
    reach: bool,
    entry: bool,
}

/// Exit intervals of one track, cell-local.
fn exits_of(track: &Track, outcome: &Outcome) -> Vec<Option<Interval>> {
    let mut result = vec![None; track.segments];
    let mut items: Vec<Known> = Vec::new();
    let mut k = 0;
    for (seg, slot) in result.iter_mut().enumerate() {
        items.clear();
        let end = (seg + 1) as f64;
        while k < track.knots.len() && track.knots[k].t < end {
            let knot = track.knots[k];
            items.push(Known {
                t: knot.t,
                value: knot.value,
                reach: outcome.knot_reach[k],
                entry: knot.entry,
            });
            span_points(track, k, &outcome.spans[k], &mut items);
            k += 1;
        }
        let last = track.knots[k];
        items.push(Known {
            t: last.t,
            value: last.value,
            reach: outcome.knot_reach[k],
            entry: last.entry,
        });
        *slot = hull_with_neighbours(&items, seg);
    }
    result
}

/// Adds the informative points inside span `k`: the reachable prefix ends
/// and the first unreachable candidate.
fn span_points(track: &Track, k: usize, span: &Span, items: &mut Vec<Known>) {
    let (a, b) = (track.knots[k], track.knots[k + 1]);
    match *span {
        Span::Flat { reach: Some(r) } => items.push(Known {
            t: 0.5 * (a.t + b.t),
            value: a.value,
            reach: r,
            entry: false,
        }),
        Span::Levels {
            first, count, lo, ..
        } => {
            let mut picks = vec![0, lo - 1, lo];
            picks.retain(|&c| c >= 0 && c < count);
            picks.dedup();
            if b.value < a.value {
                picks.reverse();
            }
            for c in picks {
                let units = (first + c) * FINE;
                items.push(Known {
                    t: track.param_of(k, units),
                    value: units,
                    reach: c < lo,
                    entry: false,
                });
            }
        }
        _ => {}
    }
}

/// Hull of the reachable points, widened to each neighbouring known point
/// when the value between them changes by at most one grid level.
fn hull_with_neighbours(items: &[Known], seg: usize) -> Option<Interval> {
    let first = items.iter().position(|x| x.reach)?;
    let last = items.iter().rposition(|x| x.reach)?;
    let close = |x: &Known, y: &Known| (x.value - y.value).abs() <= FINE;
    let mut lo = items[first].t;
    if first > 0 && !items[first].entry && close(&items[first - 1], &items[first]) {
        lo = items[first - 1].t;
    }
    let mut hi = items[last].t;
    if last + 1 < items.len() && close(&items[last + 1], &items[last]) {
        hi = items[last + 1].t;
    }
    let base = seg as f64;
    Interval::new((lo - base).clamp(0.0, 1.0), (hi - base).clamp(0.0, 1.0))
}

/// Counters from one block solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RegionStats {
    /// `solve_reduced` calls, one per search round.
    pub rounds: usize,
    /// Vertices of the rounded curves before probing.
    pub vertices: usize,
}

/// Exits on the top and right boundary of the block spanned by two pieces.
///
/// Every emitted point is reachable within `(1+ε)δ`, and every point
/// reachable within δ from the given entries is emitted.
pub fn solve_region_pieces(
    piece_pi: &Curve,
    piece_sigma: &Curve,
    delta: f64,
    epsilon: f64,
    entries: &ReachFront,
) -> Result<ReachFront> {
    solve_region_pieces_with_stats(piece_pi, piece_sigma, delta, epsilon, entries).map(|r| r.0)
}

pub fn solve_region_pieces_with_stats(
    piece_pi: &Curve,
    piece_sigma: &Curve,
    delta: f64,
    epsilon: f64,
    entries: &ReachFront,
) -> Result<(ReachFront, RegionStats)> {
    let lam = lambda(epsilon, delta)?;
    let (cols, rows) = (piece_pi.len() - 1, piece_sigma.len() - 1);
    if entries.is_empty() {
        return Ok((ReachFront::empty(cols, rows), RegionStats::default()));
    }
    let sep = project_pieces(piece_pi, piece_sigma, delta, lam)?;
    let prep = round_and_prepare(&sep, delta, 0.5 * epsilon, entries)?;
    if prep.pi_entries().is_empty() && prep.sigma_entries().is_empty() {
        return Ok((ReachFront::empty(cols, rows), RegionStats::default()));
    }
    let (pi_out, sigma_out, rounds) = search(&prep)?;
    let stats = RegionStats {
        rounds,
        vertices: prep.pi.knots.len() + prep.sigma.knots.len(),
    };
    Ok((
        ReachFront {
            horizontal: exits_of(&prep.pi, &pi_out),
            vertical: exits_of(&prep.sigma, &sigma_out),
        },
        stats,
    ))
}
