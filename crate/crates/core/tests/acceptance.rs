//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::io::Write;
use std::time::Instant;

use hyperstat::charsum::{census_char_sums, census_char_sums_horner, Histogram};
use hyperstat::experiments::{
    census_parallel, check_lemma_surjectivity, check_sign_patterns, check_value_probabilities, compare_to_trinomial,
    moments_from, patterns_parallel, run_distribution, run_moments, EmpiricalDistribution, RunOptions,
};
use hyperstat::models::{build_trinomial, model_moment, pattern_probability, zeta_series_check, Rational};
use hyperstat::poly::{Shard, ValueConstraint};
use hyperstat::FieldSpec;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

const C: f64 = 10.0;
const BUDGET: u128 = 1_000_000_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn report(id: &str, title: &str, started: Instant, o: &Outcome) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "[{}] criterion {id}: {title} ({:.1}s) {}",
        if o.pass { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64(),
        o.detail
    );
    let _ = out.flush();
}

fn info(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "       {line}");
}

/// Trinomial sum distribution by brute force over all 3^q outcomes.
fn oracle_sum_dist(q: u32) -> Vec<f64> {
    let qf = q as f64;
    let p = [qf / (2.0 * (qf + 1.0)), 1.0 / (qf + 1.0), qf / (2.0 * (qf + 1.0))];
    let mut dist = vec![0.0; 2 * q as usize + 1];
    for idx in 0..3u64.pow(q) {
        let (mut i, mut s, mut pr) = (idx, 0i64, 1.0);
        for _ in 0..q {
            let e = (i % 3) as usize;
            i /= 3;
            s += e as i64 - 1;
            pr *= p[e];
        }
        dist[(s + q as i64) as usize] += pr;
    }
    dist
}

fn odd_prime_powers(limit: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for n in 3..=limit {
        let p = (2..=n).find(|d| n % d == 0).unwrap();
        if p == 2 {
            continue;
        }
        let (mut m, mut k) = (n, 0u32);
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        if m == 1 {
            out.push((p, k));
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let mut failures = Vec::new();

    let mut sf_checks = 0;
    for (p, k) in [(3u64, 1u32), (5, 1), (3, 2)] {
        let f = FieldSpec::new(p, k).unwrap();
        let q = BigUint::from(f.q());
        for d in 2..=7usize {
            let got = BigUint::from(census_parallel(&f, d, true, 0, BUDGET).unwrap().total());
            let want = q.pow(d as u32) - q.pow(d as u32 - 1);
            sf_checks += 1;
            if got != want {
                failures.push(format!("(a) q={} d={d}: {got} != {want}", f.q()));
            }
        }
    }

    let mut constraints = 0u64;
    for p in [3u64, 5] {
        let f = FieldSpec::prime(p).unwrap();
        for d in 0..=4usize {
            for l in 0..=d.min(p as usize) {
                let r = check_lemma_surjectivity(&f, d, l, None, 0, BUDGET).unwrap();
                constraints += r.constraints_checked;
                if !r.verdict || r.expected != (p.pow((d - l) as u32)).to_string() {
                    failures.push(format!("(b) q={p} d={d} l={l}: {} violations", r.violations.len()));
                }
            }
        }
    }
    // Spot check one constraint directly, independent of the report type.
    let f = FieldSpec::prime(5).unwrap();
    let c = ValueConstraint::new(&f, vec![1, 3], vec![4, 0]).unwrap();
    if hyperstat::poly::count_with_values(&f, 4, &c, false, BUDGET).unwrap() != BigUint::from(25u32) {
        failures.push("(b) direct count at q=5 d=4 l=2".into());
    }

    for q in [3u64, 5, 7] {
        let lib = zeta_series_check(q, 30);
        let oracle = (0..=30u32).all(|n| {
            let qb = BigUint::from(q);
            let rhs: BigUint = (0..=n / 2)
                .map(|j| {
                    let e = n - 2 * j;
                    let fd = if e < 2 { qb.pow(e) } else { qb.pow(e) - qb.pow(e - 1) };
                    qb.pow(j) * fd
                })
                .sum();
            rhs == qb.pow(n)
        });
        if !(lib && oracle) {
            failures.push(format!("(c) q={q}: library {lib}, oracle {oracle}"));
        }
    }

    for q in 1..=13u64 {
        let m = build_trinomial(q);
        for zeros in 0..=q {
            let expect = num_traits::pow(m.p_zero.clone(), zeros as usize) * num_traits::pow(m.p_plus.clone(), (q - zeros) as usize);
            let qi = BigInt::from(q);
            let closed = Rational::new(
                BigInt::one(),
                BigInt::from(2).pow((q - zeros) as u32) * qi.clone().pow(zeros as u32),
            ) * num_traits::pow(Rational::new(qi.clone(), qi + 1), q as usize);
            let got = pattern_probability(q, zeros);
            if got != expect || got != closed {
                failures.push(format!("(d) q={q} m={zeros}"));
            }
        }
    }

    outcome(
        failures.is_empty(),
        format!(
            "{sf_checks} square-free counts, {constraints} constraints, zeta to degree 30, patterns q<=13{}",
            if failures.is_empty() { String::new() } else { format!("; failures: {failures:?}") }
        ),
    )
}

fn criterion_2(censuses: &[(usize, EmpiricalDistribution)]) -> Outcome {
    let model = build_trinomial(3);
    let oracle = oracle_sum_dist(3);
    let mut pass = true;
    let mut tvs = Vec::new();
    for (d, emp) in censuses {
        let r = compare_to_trinomial(emp, &model, C).unwrap();
        let bound = C * 3f64.powf((9.0 - *d as f64) / 2.0);
        let mut worst: f64 = 0.0;
        for s in -3i64..=3 {
            let model_p = oracle[(s + 3) as usize];
            let emp_p = emp.counts.get(s) as f64 / emp.total as f64;
            let row = r.row(s).unwrap();
            pass &= (row.model - model_p).abs() < 1e-12;
            let rel = (emp_p / model_p - 1.0).abs();
            worst = worst.max(rel);
            pass &= rel <= bound;
        }
        info(&format!(
            "d={d}: N={} TV={:.3e} max|emp/model-1|={:.3e} bound={:.3e}",
            emp.total, r.aggregates.tv_distance, worst, bound
        ));
        tvs.push(r.aggregates.tv_distance);
    }
    let decreasing = tvs.windows(2).all(|w| w[1] < w[0]);
    outcome(pass && decreasing, format!("TV along d=10,12,14,16: [{}], strictly decreasing: {decreasing}", tvs.iter().map(|t| format!("{t:.3e}")).collect::<Vec<_>>().join(", ")))
}

fn criterion_3() -> (Outcome, Histogram) {
    let f = FieldSpec::prime(3).unwrap();
    let r = check_sign_patterns(&f, 15, C, 0, BUDGET).unwrap();
    let bound = C * 3f64.powi(-3);
    let mut pass = r.rows.len() == 27 && (r.bound - bound).abs() < 1e-12;
    let mut worst: f64 = 0.0;
    for row in &r.rows {
        let m = row.pattern.iter().filter(|&&e| e == 0).count() as i32;
        let model = 2f64.powi(-(3 - m)) * 3f64.powi(-m) * (1.0 + 1.0 / 3.0f64).powi(-3);
        pass &= (row.model - model).abs() < 1e-12;
        let rel = (row.empirical / model - 1.0).abs();
        worst = worst.max(rel);
        pass &= rel <= bound;
    }
    let points: Vec<u32> = f.elements().collect();
    let hist = patterns_parallel(&f, 15, &points, 0, BUDGET).unwrap().sum_histogram(3).unwrap();
    (outcome(pass, format!("27 patterns, worst relative error {worst:.3e} <= {bound:.3e}")), hist)
}

fn criterion_4(d16: &EmpiricalDistribution, d15: &Histogram) -> Outcome {
    let oracle = oracle_sum_dist(3);
    let model_m4: f64 = (-3i64..=3).map(|s| (s as f64).powi(4) * oracle[(s + 3) as usize]).sum::<f64>() / 9.0;
    let lib_m4 = model_moment(3, 4).normalized;
    let n = d16.total as f64;
    let m = |k: i32| d16.counts.iter().map(|(s, c)| c as f64 * (s as f64).powi(k)).sum::<f64>() / n / 3f64.powi(k) * 3f64.powf(k as f64 / 2.0);
    let (m2, m4) = (m(2), m(4));
    let b2 = C * 3f64.powi(-5);
    let b4 = C * 3f64.powi(-2);
    let odd_zero = d15.power_sum(1).is_zero() && d15.power_sum(3).is_zero();
    let report = moments_from(d16, 4, C);
    let consistent = (report.row(2).unwrap().empirical - m2).abs() < 1e-12 && (report.row(4).unwrap().empirical - m4).abs() < 1e-12;
    info(&format!(
        "d=16 odd moments (even d, not symmetric): m1={:.3e} m3={:.3e}; odd-d census d=15: sum S = {}, sum S^3 = {}",
        m(1),
        m(3),
        d15.power_sum(1),
        d15.power_sum(3)
    ));
    let pass = (m2 - 0.75).abs() <= b2 && (m4 - model_m4).abs() <= b4 && odd_zero && consistent && (lib_m4 - model_m4).abs() < 1e-12;
    outcome(
        pass,
        format!(
            "|M2-3/4|={:.3e} <= {b2:.3e}; |M4-{model_m4:.6}|={:.3e} <= {b4:.3e}; odd moments at d=15 exactly 0: {odd_zero}",
            (m2 - 0.75).abs(),
            (m4 - model_m4).abs()
        ),
    )
}

fn criterion_5() -> Outcome {
    let f = FieldSpec::prime(101).unwrap();
    let opts = RunOptions::montecarlo(2_000_000, 20_240_601);
    let r = run_moments(&f, 60, &opts, 4, C).unwrap();
    let targets = [(1u32, 0.0), (2, 1.0), (3, 0.0), (4, 3.0)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, target) in targets {
        let row = r.row(k).unwrap();
        let se = row.std_err.unwrap();
        let z = (row.empirical - target) / se;
        pass &= z.abs() <= 5.0;
        parts.push(format!("m{k}={:.5} (z={z:+.2})", row.empirical));
        info(&format!(
            "m{k}: empirical {:.6}, Gaussian target {target}, finite-q model {:.6}, se {:.2e}, z vs Gaussian {:+.2}, z vs model {:+.2}",
            row.empirical,
            row.model,
            se,
            z,
            row.z_model.unwrap()
        ));
    }
    outcome(pass, format!("q=101 d=60 N=2e6 vs Gaussian: {}", parts.join(", ")))
}

fn criterion_6() -> Outcome {
    let mut pairs = 0;
    let mut pass = true;
    for (p, k) in odd_prime_powers(127) {
        let f = FieldSpec::new(p, k).unwrap();
        let q = f.q() as u64;
        let mut d = 0usize;
        while q.pow(d as u32) <= 1_000_000 {
            for sf in [false, true] {
                let fast = census_char_sums(&f, &Shard::whole(d), sf, BUDGET).unwrap();
                let slow = census_char_sums_horner(&f, &Shard::whole(d), sf, BUDGET).unwrap();
                if fast != slow {
                    pass = false;
                    info(&format!("kernel mismatch at q={q} d={d} squarefree={sf}"));
                }
            }
            pairs += 1;
            d += 1;
        }
    }

    let mut sharded = 0;
    for (p, k, d) in [(3u64, 1u32, 11usize), (5, 1, 7), (3, 2, 5), (7, 1, 6), (101, 1, 3)] {
        let f = FieldSpec::new(p, k).unwrap();
        let serial = census_char_sums(&f, &Shard::whole(d), true, BUDGET).unwrap();
        for threads in [1, 2, 4, 8] {
            pass &= census_parallel(&f, d, true, threads, BUDGET).unwrap() == serial;
            sharded += 1;
        }
        for len in 1..d.min(4) {
            let mut merged = Histogram::new(f.q());
            for s in Shard::partition(&f, d, len) {
                merged.merge(&census_char_sums(&f, &s, true, BUDGET).unwrap()).unwrap();
            }
            pass &= merged == serial;
        }
    }

    let f = FieldSpec::prime(3).unwrap();
    let a = run_distribution(&f, 12, &RunOptions::montecarlo(100_000, 1).with_threads(1)).unwrap();
    let b = run_distribution(&f, 12, &RunOptions::montecarlo(100_000, 1).with_threads(8)).unwrap();
    let again = run_distribution(&f, 12, &RunOptions::montecarlo(100_000, 1).with_threads(3)).unwrap();
    let mc = a.counts == b.counts && a.counts == again.counts;
    pass &= mc;
    outcome(
        pass,
        format!("kernel = reference on {pairs} (q,d) pairs (q<=127, q^d<=1e6); {sharded} sharded runs = serial; MC 1/3/8 threads identical: {mc}"),
    )
}

/// (l, m, nonzero prescriptions, zeros)
type Case = (usize, usize, Vec<(u32, u32)>, Vec<u32>);

fn criterion_7() -> Outcome {
    let f = FieldSpec::prime(3).unwrap();
    let d = 12;
    let q = 3f64;
    let cases: Vec<Case> = {
        let mut v = Vec::new();
        for x in 0..3 {
            for a in 1..3 {
                v.push((1, 0, vec![(x, a)], vec![]));
            }
            v.push((0, 1, vec![], vec![x]));
            for y in (0..3).filter(|&y| y != x) {
                for a in 1..3 {
                    v.push((1, 1, vec![(x, a)], vec![y]));
                    for b in 1..3 {
                        if x < y {
                            v.push((2, 0, vec![(x, a), (y, b)], vec![]));
                        }
                    }
                }
            }
        }
        v
    };
    let mut pass = true;
    let mut worst = [0f64; 4];
    for (l, m, nonzero, zeros) in &cases {
        let r = check_value_probabilities(&f, d, nonzero, zeros, C, BUDGET).unwrap();
        let (l, m) = (*l as i32, *m as i32);
        let main = (1.0 - 1.0 / q).powi(m) * q.powi(-(m + l)) / (1.0 - q.powi(-2)).powi(m + l);
        let bound = C * q.powf((3 * m + 2 * l - d as i32) as f64 / 2.0);
        let rel = (r.empirical / main - 1.0).abs();
        pass &= (r.model - main).abs() < 1e-12 && rel <= bound && (r.bound - bound).abs() < 1e-12;
        let slot = match (l, m) {
            (1, 0) => 0,
            (0, 1) => 1,
            (1, 1) => 2,
            _ => 3,
        };
        worst[slot] = worst[slot].max(rel);
    }
    outcome(
        pass,
        format!(
            "{} constraints; worst relative error (1,0) {:.2e}, (0,1) {:.2e}, (1,1) {:.2e}, (2,0) {:.2e}",
            cases.len(),
            worst[0],
            worst[1],
            worst[2],
            worst[3]
        ),
    )
}

fn main() {
    let mut all = true;
    let mut run = |id: &str, title: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        report(id, title, t, &o);
        all &= o.pass;
    };

    run("1", "exact identities", &mut criterion_1);
    run("6", "oracle equivalences", &mut criterion_6);
    run("7", "constrained value frequencies, q=3 d=12", &mut criterion_7);

    let mut d15 = None;
    run("3", "sign-pattern probabilities, q=3 d=15", &mut || {
        let (o, h) = criterion_3();
        d15 = Some(h);
        o
    });

    let f = FieldSpec::prime(3).unwrap();
    let started = Instant::now();
    let censuses: Vec<(usize, EmpiricalDistribution)> = [10usize, 12, 14, 16]
        .into_iter()
        .map(|d| (d, run_distribution(&f, d, &RunOptions::exhaustive().with_budget(BUDGET)).unwrap()))
        .collect();
    info(&format!("q=3 censuses d=10..16 took {:.1}s", started.elapsed().as_secs_f64()));
    run("2", "distribution of S, q=3 d=10..16", &mut || criterion_2(&censuses));
    run("4", "moments, q=3 d=16", &mut || criterion_4(&censuses[3].1, d15.as_ref().unwrap()));
    run("5", "joint-limit moments, q=101 d=60 Monte Carlo", &mut criterion_5);

    let total: u128 = censuses.iter().map(|(_, e)| e.total).sum();
    info(&format!("polynomials enumerated for criterion 2: {}", total.to_u64().unwrap_or(u64::MAX)));
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "acceptance: {}", if all { "ALL PASS" } else { "FAILURES PRESENT" });
    drop(out);
    if !all {
        std::process::exit(1);
    }
}
