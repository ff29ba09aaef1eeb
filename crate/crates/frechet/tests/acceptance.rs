//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs with `cargo test --test acceptance`.

#[global_allocator]
static ALLOCATOR: mimalloc::MiMalloc = mimalloc::MiMalloc;

mod common;

use std::time::Instant;

use common::PropertyCheck;
use frechet::baseline::{
    continuous_decide, continuous_frechet, discrete_frechet, reduced_reach_bruteforce_both,
    region_reach_exact, Interval,
};
use frechet::curves::gen_cpacked_pair;
use frechet::decomposition::lambda;
use frechet::freespace::{approximate_decide, complexity_stats, ReachFront, Verdict};
use frechet::onedim::{solve_region_pieces, RangeIndex, Reduced, ValueRange};
use frechet::search::approximate_frechet;
use frechet::Curve;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Report {
    pass: bool,
    detail: String,
}

fn verdict(failures: &[String], detail: String) -> Report {
    let mut detail = detail;
    if let Some(first) = failures.first() {
        detail = format!("{detail}; {} failures, first: {first}", failures.len());
    }
    Report {
        pass: failures.is_empty(),
        detail,
    }
}

fn values_curve(v: &[i64]) -> Curve {
    Curve::from_values(&v.iter().map(|&x| x as f64).collect::<Vec<_>>()).unwrap()
}

fn decider_soundness() -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut failures = Vec::new();
    let (mut gt, mut le) = (0, 0);
    for case in 0..2000 {
        let (a, b) = common::random_pair(&mut rng, 40);
        let eps = [1.0, 0.5, 0.1, 0.01][case % 4];
        let truth = continuous_frechet(&a, &b, 1e-9).unwrap().value;
        let delta = truth.max(1e-3) * rng.gen_range(0.5..2.0);
        let out = approximate_decide(&a, &b, delta, eps).unwrap();
        let consistent = match out.verdict {
            Verdict::GreaterThanDelta => {
                gt += 1;
                !continuous_decide(&a, &b, delta).unwrap()
            }
            Verdict::AtMostOnePlusEpsDelta => {
                le += 1;
                continuous_decide(&a, &b, (1.0 + eps) * delta).unwrap()
            }
        };
        if !consistent {
            failures.push(format!(
                "case {case}: {} at δ={delta} ε={eps}, d_F={truth}",
                out.verdict
            ));
        }
    }
    verdict(&failures, format!("2000 instances, {gt} GT / {le} LE"))
}

fn greedy_exactness() -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut failures = Vec::new();
    let mut yes = 0;
    for case in 0..2000 {
        let span = rng.gen_range(2..40);
        let inst = common::random_separated(&mut rng, 50, span);
        let greedy = Reduced::new(inst.pi.clone(), inst.sigma.clone(), inst.delta)
            .unwrap()
            .greedy_decide();
        let truth = discrete_frechet(&values_curve(&inst.pi), &values_curve(&inst.sigma)).unwrap()
            <= inst.delta as f64;
        yes += truth as usize;
        if greedy != truth {
            failures.push(format!("case {case}: greedy {greedy}, DP {truth}"));
        }
    }
    verdict(&failures, format!("2000 instances, {yes} feasible"))
}

fn reduced_exactness() -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut failures = Vec::new();
    let mut nonempty = 0;
    for case in 0..1000 {
        let span = rng.gen_range(2..30);
        let inst = common::random_separated(&mut rng, 40, span);
        let pick = |rng: &mut ChaCha8Rng, len: usize| -> Vec<usize> {
            let p = rng.gen_range(0.0..0.5);
            (0..len).filter(|_| rng.gen_bool(p)).collect()
        };
        let pi_entries = pick(&mut rng, inst.pi.len());
        let sigma_entries = pick(&mut rng, inst.sigma.len());
        let reduced = Reduced::new(inst.pi.clone(), inst.sigma.clone(), inst.delta).unwrap();
        let got = reduced.solve_reduced(&pi_entries, &sigma_entries).unwrap();
        let (f_pi, f_sigma) = reduced_reach_bruteforce_both(
            &values_curve(&inst.pi),
            &values_curve(&inst.sigma),
            inst.delta as f64,
            &pi_entries,
            &sigma_entries,
        )
        .unwrap();
        if !(f_pi.is_empty() && f_sigma.is_empty()) {
            nonempty += 1;
        }
        if got.f_pi != f_pi || got.f_sigma != f_sigma {
            failures.push(format!(
                "case {case}: got {:?}/{:?}, expected {f_pi:?}/{f_sigma:?}",
                got.f_pi, got.f_sigma
            ));
        }
    }
    verdict(&failures, format!("1000 instances, {nonempty} with exits"))
}

fn random_piece(rng: &mut ChaCha8Rng, start: [f64; 2], lam: f64, n: usize) -> Curve {
    let mut v = vec![start.to_vec()];
    for _ in 1..n {
        let r = lam * 0.999 * rng.gen::<f64>().sqrt();
        let a = rng.gen::<f64>() * std::f64::consts::TAU;
        v.push(vec![start[0] + r * a.cos(), start[1] + r * a.sin()]);
    }
    Curve::new(v).unwrap()
}

fn random_entries(rng: &mut ChaCha8Rng, n: usize) -> Vec<Option<Interval>> {
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.4) {
                return None;
            }
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            Interval::new(a.min(b), a.max(b))
        })
        .collect()
}

fn covered(inner: &Option<Interval>, outer: &Option<Interval>, tol: f64) -> bool {
    match (inner, outer) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(i), Some(o)) => o.lo <= i.lo + tol && i.hi <= o.hi + tol,
    }
}

fn piece_contract() -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut failures = Vec::new();
    let mut partial = 0;
    let mut done = 0;
    while done < 500 {
        let eps = [1.0, 0.5, 0.1, 0.01][done % 4];
        let delta = 1.0;
        let lam = lambda(eps, delta).unwrap();
        let (n, m) = (rng.gen_range(2..30), rng.gen_range(2..30));
        let gap = if rng.gen_bool(0.2) {
            rng.gen_range(0.0..delta)
        } else {
            rng.gen_range(delta - 2.0 * lam..delta + 2.0 * lam)
        };
        let a = rng.gen::<f64>() * std::f64::consts::TAU;
        let pi = random_piece(&mut rng, [0.0, 0.0], lam, n);
        let sigma = random_piece(&mut rng, [gap * a.cos(), gap * a.sin()], lam, m);
        let entry = ReachFront {
            horizontal: random_entries(&mut rng, n - 1),
            vertical: random_entries(&mut rng, m - 1),
        };
        let out = solve_region_pieces(&pi, &sigma, delta, eps, &entry).unwrap();
        let (top_lo, right_lo) =
            region_reach_exact(&pi, &sigma, delta, &entry.horizontal, &entry.vertical);
        let (top_hi, right_hi) = region_reach_exact(
            &pi,
            &sigma,
            (1.0 + eps) * delta,
            &entry.horizontal,
            &entry.vertical,
        );
        let whole = Interval::new(0.0, 1.0);
        if out
            .horizontal
            .iter()
            .chain(&out.vertical)
            .any(|x| x.is_some() && *x != whole)
        {
            partial += 1;
        }
        let edges = top_lo
            .iter()
            .zip(&out.horizontal)
            .zip(&top_hi)
            .chain(right_lo.iter().zip(&out.vertical).zip(&right_hi));
        for (k, ((lo, got), hi)) in edges.enumerate() {
            if !covered(lo, got, 1e-9) {
                failures.push(format!(
                    "pair {done} edge {k}: misses reachable {lo:?}, emitted {got:?}"
                ));
            }
            if !covered(got, hi, 1e-6) {
                failures.push(format!(
                    "pair {done} edge {k}: emitted {got:?} beyond {hi:?}"
                ));
            }
        }
        done += 1;
    }
    verdict(
        &failures,
        format!("500 piece pairs, {partial} with partial exits, exact interval oracle"),
    )
}

fn value_approximation() -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut failures = Vec::new();
    let mut worst: f64 = 1.0;
    for case in 0..300 {
        let (a, b) = common::random_pair(&mut rng, 30);
        let eps = [1.0, 0.5, 0.1, 0.01][case % 4];
        let truth = continuous_frechet(&a, &b, 1e-9).unwrap().value;
        let r = approximate_frechet(&a, &b, eps).unwrap();
        let ok = if truth == 0.0 {
            r.value == 0.0
        } else {
            let ratio = r.value / truth;
            worst = worst.max((ratio - 1.0) / eps + 1.0);
            (1.0 - 1e-6..=1.0 + eps + 1e-6).contains(&ratio)
        };
        if !ok {
            failures.push(format!("case {case}: ε={eps} value {} vs {truth}", r.value));
        }
    }
    verdict(
        &failures,
        format!("300 pairs, worst (ratio-1)/ε = {:.3}", worst - 1.0),
    )
}

fn traversal_composition() -> Report {
    let mut failures = Vec::new();
    let mut applied = Vec::new();
    let properties: [(
        &str,
        fn(&mut ChaCha8Rng, &common::Separated) -> PropertyCheck,
    ); 3] = [
        ("overlap union", common::check_overlap_union),
        ("crossing", common::check_crossing),
        ("prefix composition", common::check_prefix_composition),
    ];
    for (k, (name, check)) in properties.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(106 + k as u64);
        let mut hits = 0;
        for _ in 0..100_000 {
            let inst = common::random_separated(&mut rng, 8, 6);
            match check(&mut rng, &inst) {
                PropertyCheck::Vacuous => {}
                PropertyCheck::Holds => hits += 1,
                PropertyCheck::Counterexample(msg) => failures.push(format!("{name}: {msg}")),
            }
        }
        applied.push(format!("{name} {hits}"));
    }
    verdict(
        &failures,
        format!(
            "100000 instances per property; hypothesis met: {}",
            applied.join(", ")
        ),
    )
}

fn complexity_scaling() -> Report {
    let delta = 4.0;
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for c in [4.0, 8.0] {
        let (a, b) = gen_cpacked_pair(c, 100_000, 1).unwrap();
        let n_of = |n: usize, eps: f64| -> usize {
            complexity_stats(&a.slice(0, n - 1), &b.slice(0, n - 1), delta, eps)
                .unwrap()
                .total
        };
        let sizes = [10_000, 20_000, 40_000];
        let coarse: Vec<usize> = sizes.iter().map(|&n| n_of(n, 0.04)).collect();
        let fine: Vec<usize> = sizes.iter().map(|&n| n_of(n, 0.01)).collect();
        for k in 1..sizes.len() {
            let ratio = coarse[k] as f64 / coarse[k - 1] as f64;
            if ratio > 2.6 {
                failures.push(format!(
                    "c={c}: N grew {ratio:.3}x from n={} to n={}",
                    sizes[k - 1],
                    sizes[k]
                ));
            }
        }
        let eps_ratios: Vec<f64> = coarse
            .iter()
            .zip(&fine)
            .map(|(&x, &y)| y as f64 / x as f64)
            .collect();
        for (n, r) in sizes.iter().zip(&eps_ratios) {
            if *r > 2.9 {
                failures.push(format!("c={c} n={n}: halving ε twice grew N {r:.3}x"));
            }
        }
        notes.push(format!(
            "c={c}: N/n at ε=0.04 {:.1},{:.1},{:.1}; ε ratio {:.2},{:.2},{:.2}",
            coarse[0] as f64 / 1e4,
            coarse[1] as f64 / 2e4,
            coarse[2] as f64 / 4e4,
            eps_ratios[0],
            eps_ratios[1],
            eps_ratios[2]
        ));
        if c == 8.0 {
            let start = Instant::now();
            let out = approximate_decide(&a, &b, delta, 0.01).unwrap();
            let secs = start.elapsed().as_secs_f64();
            notes.push(format!(
                "n=1e5 c=8 ε=0.01 decide {} in {secs:.1}s (N={})",
                out.verdict, out.stats.total
            ));
            if secs > 60.0 {
                failures.push(format!("decide took {secs:.1}s"));
            }
        }
    }
    verdict(&failures, format!("δ={delta}; {}", notes.join("; ")))
}

fn range_index() -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut failures = Vec::new();
    let mut answered = 0;
    for array in 0..200 {
        let len = rng.gen_range(1..120);
        let spread = rng.gen_range(1..50);
        let values: Vec<i64> = (0..len).map(|_| rng.gen_range(-spread..=spread)).collect();
        let index = RangeIndex::new(values.clone());
        for _ in 0..400 {
            let x = rng.gen_range(-spread - 2..=spread + 2);
            let y = rng.gen_range(-spread - 2..=spread + 2);
            let range = match rng.gen_range(0..6) {
                0 => ValueRange::at_least(x),
                1 => ValueRange::greater_than(x),
                2 => ValueRange::at_most(x),
                3 => ValueRange::less_than(x),
                4 => ValueRange::closed(x.min(y), x.max(y)),
                _ => ValueRange::all(),
            };
            let p = rng.gen_range(0..len + 2);
            let b = rng.gen_range(0..len + 2);
            let inside: Vec<usize> = (p..=b.min(len - 1))
                .filter(|&i| p <= b && range.contains(values[i]))
                .collect();
            let expect = (
                inside.first().copied(),
                inside.last().copied(),
                inside.iter().map(|&i| values[i]).min(),
                inside.iter().map(|&i| values[i]).max(),
            );
            let got = (
                index.min_index(range, p, b),
                index.max_index(range, p, b),
                index.min_height(range, p, b),
                index.max_height(range, p, b),
            );
            answered += expect.0.is_some() as usize;
            if got != expect {
                failures.push(format!(
                    "array {array} {range:?} [{p},{b}]: got {got:?}, scan {expect:?}"
                ));
            }
        }
    }
    verdict(
        &failures,
        format!("200 arrays x 400 queries x 4 kinds, {answered} nonempty"),
    )
}

fn decomposition_invariants() -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut failures = Vec::new();
    for case in 0..1000 {
        let n = rng.gen_range(1..80);
        let scale = [0.1, 1.0, 10.0][case % 3];
        let c = common::mixed_walk(&mut rng, n, scale);
        for lam in [0.02, 0.1, 0.3, 1.0, 5.0] {
            for msg in common::decomposition_violations(&c, lam * scale) {
                failures.push(format!("curve {case} Λ={}: {msg}", lam * scale));
            }
        }
    }
    verdict(&failures, "1000 curves x 5 values of Λ".into())
}

fn main() {
    let criteria: [(&str, fn() -> Report); 9] = [
        ("decider soundness", decider_soundness),
        ("greedy decider exactness", greedy_exactness),
        ("reduced free-space exactness", reduced_exactness),
        ("piece-region contract", piece_contract),
        ("value approximation", value_approximation),
        ("traversal composition", traversal_composition),
        ("complexity scaling", complexity_scaling),
        ("range index", range_index),
        ("decomposition invariants", decomposition_invariants),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let report = run();
        all &= report.pass;
        println!(
            "criterion {} {}: {} ({}; {:.1}s)",
            k + 1,
            name,
            if report.pass { "PASS" } else { "FAIL" },
            report.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if !all {
        std::process::exit(1);
    }
}
