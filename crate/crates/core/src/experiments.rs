//! Censuses, Monte Carlo runs, and their comparison with the trinomial model.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::charsum::{census_char_sums, census_value_patterns, Histogram, PatternCensus, ValueVector, MAX_PATTERN_POINTS};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::models::{
    error_bound_moment, error_bound_theorem1, error_bound_values, exact_string, gaussian_moment, model_moments,
    pattern_probability, prop_main_term, ratio, to_f64, Rational, TrinomialModel,
};
use crate::poly::{
    check_budget, count_squarefree, count_with_values, sample_squarefree_into, MonicCursor, Shard, SquarefreeTester,
    ValueConstraint,
};

/// Default census budget, in polynomials.
pub const DEFAULT_BUDGET: u128 = 100_000_000;
/// Environment variable overriding [`DEFAULT_BUDGET`] in the CLI.
pub const BUDGET_ENV: &str = "HYPERSTAT_BUDGET";
/// Relative errors are only reported where the model probability is at
/// least this large.
pub const REL_ERR_THRESHOLD: f64 = 1e-6;
/// Monte Carlo samples per seeded block.
pub const MC_BLOCK: u64 = 4096;
/// Monte Carlo moment checks accept deviations up to this many standard errors.
pub const MC_Z_LIMIT: f64 = 5.0;

pub const STREAM_SCHEME: &str =
    "ChaCha8Rng::seed_from_u64(seed) with set_stream(block); block b draws samples [4096 b, 4096 (b + 1))";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Montecarlo,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "montecarlo" | "mc" => Ok(Mode::Montecarlo),
            other => Err(Error::InvalidMode(other.to_string())),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Montecarlo => "montecarlo",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub mode: Mode,
    /// Number of Monte Carlo samples (ignored when exhaustive).
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; 0 means one per core.
    pub threads: usize,
    pub budget: u128,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { mode: Mode::Exhaustive, samples: 100_000, seed: 1, threads: 0, budget: DEFAULT_BUDGET }
    }
}

impl RunOptions {
    pub fn exhaustive() -> Self {
        Self::default()
    }

    pub fn montecarlo(samples: u64, seed: u64) -> Self {
        RunOptions { mode: Mode::Montecarlo, samples, seed, ..Self::default() }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }
}

/// Histogram of `S(F)` over `F_d` (exhaustive) or over a seeded sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmpiricalDistribution {
    pub q: u32,
    pub d: usize,
    pub mode: Mode,
    /// Sample count `N`, or `|F_d|` for a census.
    pub total: u128,
    pub seed: Option<u64>,
    pub stream_scheme: Option<&'static str>,
    pub counts: Histogram,
}

impl EmpiricalDistribution {
    pub fn frequency(&self, s: i64) -> Rational {
        ratio(self.counts.get(s), BigInt::from(self.total))
    }

    /// `(1/N) sum_F S(F)^k`, exact.
    pub fn raw_moment(&self, k: u32) -> Rational {
        BigRational::new(self.counts.power_sum(k), BigInt::from(self.total))
    }
}

// Runs `job` over `items` on a pool of `threads` workers and returns the
// results in input order.
fn run_jobs<I, T, F>(threads: usize, items: &[I], job: F) -> Vec<Result<T>>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if threads != 1 && items.len() > 1 {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build();
            if let Ok(pool) = pool {
                return pool.install(|| items.par_iter().map(&job).collect());
            }
        }
    }
    let _ = threads;
    items.iter().map(job).collect()
}

fn effective_threads(threads: usize) -> usize {
    if threads > 0 {
        return threads;
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Shards of `V_d` for a parallel census: enough prefixes for load balance,
/// always leaving the constant coefficient free.
pub fn census_shards(field: &FieldSpec, d: usize, threads: usize) -> Vec<Shard> {
    let want = 8 * effective_threads(threads) as u64;
    let mut len = 0usize;
    let mut count = 1u64;
    while count < want && len + 1 < d {
        len += 1;
        count = count.saturating_mul(field.q() as u64);
    }
    Shard::partition(field, d, len)
}

/// Exhaustive census of `S` over `V_d` or `F_d`, sharded over `threads`.
pub fn census_parallel(
    field: &FieldSpec,
    d: usize,
    squarefree_only: bool,
    threads: usize,
    budget: u128,
) -> Result<Histogram> {
    check_budget(field.q(), d, budget)?;
    let shards = census_shards(field, d, threads);
    let parts = run_jobs(threads, &shards, |s| census_char_sums(field, s, squarefree_only, u128::MAX));
    let mut out = Histogram::new(field.q());
    for part in parts {
        out.merge(&part?)?;
    }
    Ok(out)
}

/// Exhaustive sign-pattern census over `F_d`, sharded over `threads`.
pub fn patterns_parallel(
    field: &FieldSpec,
    d: usize,
    points: &[Elem],
    threads: usize,
    budget: u128,
) -> Result<PatternCensus> {
    check_budget(field.q(), d, budget)?;
    let shards = census_shards(field, d, threads);
    let parts = run_jobs(threads, &shards, |s| census_value_patterns(field, s, points, u128::MAX));
    let mut out = PatternCensus::new(points.to_vec())?;
    for part in parts {
        out.merge(&part?)?;
    }
    Ok(out)
}

fn mc_block(field: &FieldSpec, d: usize, seed: u64, block: u64, n: u64) -> Result<Histogram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let mut hist = Histogram::new(field.q());
    let mut tester = SquarefreeTester::new();
    let mut coeffs = vec![0; d];
    let mut vals = ValueVector::full(field);
    for _ in 0..n {
        sample_squarefree_into(field, &mut tester, &mut coeffs, &mut rng)?;
        vals.reset(field, &coeffs);
        hist.record(vals.char_sum(field));
    }
    Ok(hist)
}

/// Histogram of `S(F)` for `F` uniform in `F_d`: exact by census, or from
/// `samples` seeded draws. Monte Carlo output depends only on
/// `(q, d, samples, seed)`, not on the thread count.
pub fn run_distribution(field: &FieldSpec, d: usize, opts: &RunOptions) -> Result<EmpiricalDistribution> {
    match opts.mode {
        Mode::Exhaustive => {
            let counts = census_parallel(field, d, true, opts.threads, opts.budget)?;
            Ok(EmpiricalDistribution {
                q: field.q(),
                d,
                mode: Mode::Exhaustive,
                total: counts.total(),
                seed: None,
                stream_scheme: None,
                counts,
            })
        }
        Mode::Montecarlo => {
            if d == 0 {
                return Err(Error::InvalidArgument("Monte Carlo sampling needs d >= 1".into()));
            }
            if opts.samples == 0 {
                return Err(Error::InvalidArgument("Monte Carlo sampling needs at least one sample".into()));
            }
            let blocks: Vec<(u64, u64)> = (0..opts.samples.div_ceil(MC_BLOCK))
                .map(|b| (b, MC_BLOCK.min(opts.samples - b * MC_BLOCK)))
                .collect();
            let parts = run_jobs(opts.threads, &blocks, |&(b, n)| mc_block(field, d, opts.seed, b, n));
            let mut counts = Histogram::new(field.q());
            for part in parts {
                counts.merge(&part?)?;
            }
            Ok(EmpiricalDistribution {
                q: field.q(),
                d,
                mode: Mode::Montecarlo,
                total: opts.samples as u128,
                seed: Some(opts.seed),
                stream_scheme: Some(STREAM_SCHEME),
                counts,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub s: i64,
    pub count: u64,
    pub empirical: f64,
    pub empirical_exact: String,
    pub model: f64,
    pub model_exact: String,
    /// `|empirical / model - 1|`, only where `model >= REL_ERR_THRESHOLD`.
    pub rel_err: Option<f64>,
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonAggregates {
    pub tv_distance: f64,
    pub tv_distance_exact: String,
    pub max_rel_err: f64,
    /// `C q^{(3q - d)/2}`.
    pub bound: f64,
    /// False when `d <= 3q`, where the bound is at least `C`.
    pub bound_informative: bool,
    pub rel_err_threshold: f64,
    pub verdict: bool,
}

/// Per-value comparison of an empirical distribution with the sum of `q`
/// trinomials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub q: u32,
    pub d: usize,
    pub constant: f64,
    pub rows: Vec<ComparisonRow>,
    pub aggregates: ComparisonAggregates,
}

impl ComparisonReport {
    pub fn row(&self, s: i64) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.s == s)
    }
}

fn abs_f64(r: &Rational) -> f64 {
    to_f64(&r.abs())
}

fn rel_err(empirical: &Rational, model: &Rational) -> Option<f64> {
    if to_f64(model) < REL_ERR_THRESHOLD {
        return None;
    }
    Some(abs_f64(&(empirical / model - Rational::from_integer(1.into()))))
}

pub fn compare_to_trinomial(
    emp: &EmpiricalDistribution,
    model: &TrinomialModel,
    constant: f64,
) -> Result<ComparisonReport> {
    if model.q != emp.q as u64 {
        return Err(Error::ModelMismatch { model: model.q, data: emp.q as u64 });
    }
    let mut rows = Vec::new();
    let mut tv = Rational::zero();
    for (s, count) in emp.counts.iter() {
        let e = emp.frequency(s);
        let m = model.prob(s);
        let diff = (&e - &m).abs();
        tv += &diff;
        rows.push(ComparisonRow {
            s,
            count,
            empirical: to_f64(&e),
            empirical_exact: exact_string(&e),
            model: to_f64(&m),
            model_exact: exact_string(&m),
            rel_err: rel_err(&e, &m),
            abs_err: to_f64(&diff),
        });
    }
    tv /= Rational::from_integer(2.into());
    let max_rel_err = rows.iter().filter_map(|r| r.rel_err).fold(0.0, f64::max);
    let bound = constant * error_bound_theorem1(emp.q as u64, emp.d as u64);
    let bound_informative = emp.d as u64 > 3 * emp.q as u64;
    Ok(ComparisonReport {
        q: emp.q,
        d: emp.d,
        constant,
        rows,
        aggregates: ComparisonAggregates {
            tv_distance: to_f64(&tv),
            tv_distance_exact: exact_string(&tv),
            max_rel_err,
            bound,
            bound_informative,
            rel_err_threshold: REL_ERR_THRESHOLD,
            verdict: !bound_informative || max_rel_err <= bound,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRow {
    pub k: u32,
    /// `M_k(q, d)` (or its sample estimate).
    pub empirical: f64,
    /// `(1/N) sum S^k`, exact.
    pub empirical_raw_exact: String,
    pub model: f64,
    /// Normalized model moment, exact for even `k`.
    pub model_exact: Option<String>,
    pub gaussian: String,
    /// `C q^{(3k - d)/2}`.
    pub bound: f64,
    /// Sample standard error of the estimate (Monte Carlo only).
    pub std_err: Option<f64>,
    /// `(empirical - model) / std_err`.
    pub z_model: Option<f64>,
    /// `(empirical - gaussian) / std_err`.
    pub z_gaussian: Option<f64>,
    pub verdict: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub q: u32,
    pub d: usize,
    pub mode: Mode,
    pub total: u128,
    pub constant: f64,
    pub rows: Vec<MomentRow>,
    pub verdict: bool,
}

impl MomentReport {
    pub fn row(&self, k: u32) -> Option<&MomentRow> {
        self.rows.iter().find(|r| r.k == k)
    }
}

/// `(1/N) sum_F (S(F)/sqrt(q))^k` as a float, computed from exact power sums.
fn normalized_moment(emp: &EmpiricalDistribution, k: u32) -> f64 {
    to_f64(&emp.raw_moment(k)) / (emp.q as f64).powf(k as f64 / 2.0)
}

fn std_error(emp: &EmpiricalDistribution, k: u32) -> Option<f64> {
    let n = emp.total;
    if n < 2 {
        return None;
    }
    // Sample variance of y = S^k, then scaled by q^{-k}.
    let sum_y = emp.counts.power_sum(k);
    let sum_y2 = emp.counts.power_sum(2 * k);
    let nb = BigInt::from(n);
    let var = BigRational::new(&nb * sum_y2 - &sum_y * &sum_y, &nb * (&nb - 1));
    let var = to_f64(&var) / (emp.q as f64).powi(k as i32);
    Some((var.max(0.0) / n as f64).sqrt())
}

/// Moments `k = 1..=k_max` of an empirical distribution next to the model
/// and Gaussian moments.
pub fn moments_from(emp: &EmpiricalDistribution, k_max: u32, constant: f64) -> MomentReport {
    let q = emp.q as u64;
    let models = model_moments(q, k_max);
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let model = &models[k as usize];
        let empirical = normalized_moment(emp, k);
        let gaussian = gaussian_moment(k);
        let gaussian_f = gaussian.to_f64().unwrap_or(f64::INFINITY);
        let bound = constant * error_bound_moment(q, emp.d as u64, k);
        let (std_err, z_model, z_gaussian, verdict) = match emp.mode {
            Mode::Exhaustive => (None, None, None, (empirical - model.normalized).abs() <= bound),
            Mode::Montecarlo => {
                let se = std_error(emp, k);
                let z = |target: f64| se.map(|se| if se > 0.0 { (empirical - target) / se } else { 0.0 });
                let zm = z(model.normalized);
                (se, zm, z(gaussian_f), zm.is_some_and(|z| z.abs() <= MC_Z_LIMIT))
            }
        };
        rows.push(MomentRow {
            k,
            empirical,
            empirical_raw_exact: exact_string(&emp.raw_moment(k)),
            model: model.normalized,
            model_exact: model.normalized_exact(q).map(|r| exact_string(&r)),
            gaussian: gaussian.to_string(),
            bound,
            std_err,
            z_model,
            z_gaussian,
            verdict,
        });
    }
    let verdict = rows.iter().all(|r| r.verdict);
    MomentReport { q: emp.q, d: emp.d, mode: emp.mode, total: emp.total, constant, rows, verdict }
}

pub fn run_moments(
    field: &FieldSpec,
    d: usize,
    opts: &RunOptions,
    k_max: u32,
    constant: f64,
) -> Result<MomentReport> {
    let emp = run_distribution(field, d, opts)?;
    Ok(moments_from(&emp, k_max, constant))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub points: Vec<Elem>,
    pub values: Vec<Elem>,
    pub count: String,
}

/// Outcome of checking `#{F in V_d : F(x_i) = a_i} = q^{d-l}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub q: u32,
    pub d: usize,
    pub l: usize,
    pub expected: String,
    pub constraints_checked: u64,
    pub violations: Vec<Violation>,
    pub verdict: bool,
}

fn combinations(n: u32, l: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(l);
    fn rec(start: u32, n: u32, l: usize, cur: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, l, cur, out);
            cur.pop();
        }
    }
    rec(0, n, l, &mut cur, &mut out);
    out
}

/// Checks the evaluation-count identity for every constraint on `l` points
/// (`trials = None`) or for `trials` random ones.
pub fn check_lemma_surjectivity(
    field: &FieldSpec,
    d: usize,
    l: usize,
    trials: Option<u64>,
    seed: u64,
    budget: u128,
) -> Result<SurjectivityReport> {
    let q = field.q();
    if l > d || l > q as usize {
        return Err(Error::InvalidArgument(format!("need l <= min(d, q), got l={l}, d={d}, q={q}")));
    }
    check_budget(q, d, budget)?;
    let expected = BigUint::from(q).pow((d - l) as u32);
    let mut violations = Vec::new();
    let mut checked = 0u64;
    match trials {
        None => {
            let cells = (q as usize).checked_pow(l as u32).filter(|&c| c <= 1 << 24).ok_or_else(|| {
                Error::InvalidArgument(format!("{q}^{l} value tuples is too many to tabulate"))
            })?;
            for points in combinations(q, l) {
                let mut vals = ValueVector::at(points.clone());
                let mut tally = vec![0u64; cells];
                let mut cursor = MonicCursor::new(field, &Shard::whole(d));
                while !cursor.is_done() {
                    vals.reset(field, cursor.coeffs());
                    let idx = vals.values().iter().rev().fold(0usize, |acc, &v| acc * q as usize + v as usize);
                    tally[idx] += 1;
                    cursor.advance();
                }
                for (idx, &count) in tally.iter().enumerate() {
                    checked += 1;
                    if BigUint::from(count) != expected {
                        let mut rest = idx;
                        let values = (0..l)
                            .map(|_| {
                                let v = (rest % q as usize) as Elem;
                                rest /= q as usize;
                                v
                            })
                            .collect();
                        violations.push(Violation { points: points.clone(), values, count: count.to_string() });
                    }
                }
            }
        }
        Some(n) => {
            use rand::seq::index::sample;
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..n {
                let points: Vec<Elem> =
                    sample(&mut rng, q as usize, l).into_iter().map(|x| x as Elem).collect();
                let values: Vec<Elem> = (0..l).map(|_| rng.gen_range(0..q)).collect();
                let c = ValueConstraint::new(field, points.clone(), values.clone())?;
                let count = count_with_values(field, d, &c, false, budget)?;
                checked += 1;
                if count != expected {
                    violations.push(Violation { points, values, count: count.to_string() });
                }
            }
        }
    }
    Ok(SurjectivityReport {
        q,
        d,
        l,
        expected: expected.to_string(),
        constraints_checked: checked,
        verdict: violations.is_empty(),
        violations,
    })
}

/// Frequency over `F_d` of prescribed nonzero values and zeros, against the
/// main term `(1 - 1/q)^m q^{-(m+l)} / (1 - q^{-2})^{m+l}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueCheckReport {
    pub q: u32,
    pub d: usize,
    pub l: usize,
    pub m: usize,
    pub points: Vec<Elem>,
    pub values: Vec<Elem>,
    pub count: String,
    pub population: String,
    pub empirical: f64,
    pub empirical_exact: String,
    pub model: f64,
    pub model_exact: String,
    pub rel_err: f64,
    pub abs_err: f64,
    /// `C q^{(3m + 2l - d)/2}`.
    pub bound: f64,
    pub verdict: bool,
}

pub fn check_value_probabilities(
    field: &FieldSpec,
    d: usize,
    nonzero: &[(Elem, Elem)],
    zeros: &[Elem],
    constant: f64,
    budget: u128,
) -> Result<ValueCheckReport> {
    if nonzero.iter().any(|&(_, a)| a == 0) {
        return Err(Error::InvalidConstraint("prescribed nonzero value is zero".into()));
    }
    let points: Vec<Elem> = nonzero.iter().map(|&(x, _)| x).chain(zeros.iter().copied()).collect();
    let values: Vec<Elem> = nonzero.iter().map(|&(_, a)| a).chain(zeros.iter().map(|_| 0)).collect();
    let constraint = ValueConstraint::new(field, points.clone(), values.clone())?;
    let count = count_with_values(field, d, &constraint, true, budget)?;
    let population = count_squarefree(field.q() as u64, d as u32);
    let empirical = BigRational::new(BigInt::from(count.clone()), BigInt::from(population.clone()));
    let (l, m) = (nonzero.len(), zeros.len());
    let q = field.q() as u64;
    let model = prop_main_term(q, l as u64, m as u64);
    let rel = abs_f64(&(&empirical / &model - Rational::from_integer(1.into())));
    let bound = constant * error_bound_values(q, d as u64, l as u64, m as u64);
    Ok(ValueCheckReport {
        q: field.q(),
        d,
        l,
        m,
        points,
        values,
        count: count.to_string(),
        population: population.to_string(),
        empirical: to_f64(&empirical),
        empirical_exact: exact_string(&empirical),
        model: to_f64(&model),
        model_exact: exact_string(&model),
        rel_err: rel,
        abs_err: abs_f64(&(&empirical - &model)),
        bound,
        verdict: rel <= bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternRow {
    pub pattern: Vec<i8>,
    pub zeros: usize,
    pub count: u64,
    pub empirical: f64,
    pub empirical_exact: String,
    pub model: f64,
    pub model_exact: String,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternReport {
    pub q: u32,
    pub d: usize,
    pub constant: f64,
    pub rows: Vec<PatternRow>,
    pub total_frequency_exact: String,
    pub worst_rel_err: f64,
    /// `C q^{(3q - d)/2}`.
    pub bound: f64,
    pub verdict: bool,
}

/// All `3^q` sign patterns of `(chi(F(x)))_{x in F_q}` over `F_d` against
/// `2^{-(q-m)} q^{-m} / (1 + 1/q)^q`.
pub fn check_sign_patterns(
    field: &FieldSpec,
    d: usize,
    constant: f64,
    threads: usize,
    budget: u128,
) -> Result<PatternReport> {
    let q = field.q();
    if q as usize > MAX_PATTERN_POINTS {
        return Err(Error::InvalidArgument(format!("q = {q} has too many sign patterns to tabulate")));
    }
    let points: Vec<Elem> = field.elements().collect();
    let census = patterns_parallel(field, d, &points, threads, budget)?;
    let population = BigInt::from(census.total());
    let mut rows = Vec::new();
    let mut total = Rational::zero();
    for (pattern, count) in census.iter() {
        let zeros = pattern.iter().filter(|&&e| e == 0).count();
        let e = BigRational::new(BigInt::from(count), population.clone());
        let m = pattern_probability(q as u64, zeros as u64);
        total += &e;
        rows.push(PatternRow {
            zeros,
            count,
            empirical: to_f64(&e),
            empirical_exact: exact_string(&e),
            model: to_f64(&m),
            model_exact: exact_string(&m),
            rel_err: abs_f64(&(&e / &m - Rational::from_integer(1.into()))),
            pattern,
        });
    }
    let worst_rel_err = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    let bound = constant * error_bound_theorem1(q as u64, d as u64);
    Ok(PatternReport {
        q,
        d,
        constant,
        rows,
        total_frequency_exact: exact_string(&total),
        worst_rel_err,
        bound,
        verdict: worst_rel_err <= bound,
    })
}
