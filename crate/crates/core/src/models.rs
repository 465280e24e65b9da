//! Exact-rational predictions of the trinomial model.
//!
//! `X` takes the values `-1, 0, +1` with probabilities
//! `q/(2(q+1)), 1/(q+1), q/(2(q+1))`, and `S(F)` over `F_d` is compared with
//! the sum of `q` independent copies. Everything here is exact; floating
//! point only appears in [`ModelMoment::normalized`] and the error bounds.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::poly::count_squarefree;

pub type Rational = BigRational;

/// Implied constant applied to every `O(.)` bound unless overridden.
pub const DEFAULT_CHECK_CONSTANT: f64 = 10.0;

// Above this q, model moments come from powering the single-variable moment
// sequence instead of the full convolution.
const CONVOLUTION_MOMENT_LIMIT: u64 = 512;

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Closest `f64`, also for numerators and denominators beyond `f64` range.
pub fn to_f64(r: &Rational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() && (x != 0.0 || r.is_zero()) {
            return x;
        }
    }
    let (n, d) = (r.numer(), r.denom());
    let shift = n.bits() as i64 - d.bits() as i64;
    let (n2, d2) = if shift > 0 {
        (n.clone(), d << (shift as usize))
    } else {
        (n << ((-shift) as usize), d.clone())
    };
    let mantissa = Rational::new(n2, d2).to_f64().unwrap_or(f64::NAN);
    mantissa * 2f64.powi(shift as i32)
}

/// `"num/den"` in lowest terms.
pub fn exact_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// The law of one trinomial variable and of the sum of `q` of them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrinomialModel {
    pub q: u64,
    #[serde(serialize_with = "ser_rational")]
    pub p_zero: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub p_plus: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub p_minus: Rational,
    /// `P(X_1 + ... + X_q = s)` at index `s + q`.
    #[serde(serialize_with = "ser_rationals")]
    pub sum_dist: Vec<Rational>,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&exact_string(r))
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(exact_string))
}

/// Builds the model by `q`-fold exact convolution. The formulas make sense
/// for any `q >= 1`; only odd prime powers correspond to fields.
pub fn build_trinomial(q: u64) -> TrinomialModel {
    assert!(q >= 1, "trinomial model needs q >= 1");
    // Integer weights (q, 2, q) over the common denominator 2(q + 1).
    let weights = [BigUint::from(q), BigUint::from(2u32), BigUint::from(q)];
    let mut dist = vec![BigUint::one()];
    for _ in 0..q {
        let mut next = vec![BigUint::zero(); dist.len() + 2];
        for (i, c) in dist.iter().enumerate() {
            for (j, w) in weights.iter().enumerate() {
                next[i + j] += c * w;
            }
        }
        dist = next;
    }
    let denom = BigInt::from(2 * (q + 1)).pow(q as u32);
    let sum_dist = dist
        .into_iter()
        .map(|c| Rational::new(BigInt::from(c), denom.clone()))
        .collect();
    TrinomialModel {
        q,
        p_zero: ratio(1, q + 1),
        p_plus: ratio(q, 2 * (q + 1)),
        p_minus: ratio(q, 2 * (q + 1)),
        sum_dist,
    }
}

impl TrinomialModel {
    /// `P(sum = s)`; zero outside `[-q, q]`.
    pub fn prob(&self, s: i64) -> Rational {
        let q = self.q as i64;
        if s.abs() > q {
            return Rational::zero();
        }
        self.sum_dist[(s + q) as usize].clone()
    }

    /// `E[(X_1 + ... + X_q)^k]` from the distribution.
    pub fn raw_moment(&self, k: u32) -> Rational {
        let q = self.q as i64;
        self.sum_dist
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| p * int(BigInt::from(i as i64 - q).pow(k)))
            .fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// `2^{-(q-m)} q^{-m} / (1 + 1/q)^q`: the probability that `q` independent
/// trinomials realize one fixed sign pattern with exactly `m` zeros.
pub fn pattern_probability(q: u64, m: u64) -> Rational {
    assert!(m <= q, "pattern with more zeros than points");
    let two_pow = int(BigInt::from(2u32).pow((q - m) as u32));
    let q_pow = int(BigInt::from(q).pow(m as u32));
    let base = Rational::one() + ratio(1, q);
    let base_pow = num_traits::pow(base, q as usize);
    Rational::one() / (two_pow * q_pow * base_pow)
}

/// `q^{-l} / (1 - q^{-2})^l`.
pub fn lemma_nonzero_main_term(q: u64, l: u64) -> Rational {
    prop_main_term(q, l, 0)
}

/// `(1 - 1/q)^m q^{-(m+l)} / (1 - q^{-2})^{m+l}`.
pub fn prop_main_term(q: u64, l: u64, m: u64) -> Rational {
    let one = Rational::one();
    let zero_factor = num_traits::pow(&one - ratio(1, q), m as usize);
    let q_pow = num_traits::pow(ratio(1, q), (m + l) as usize);
    let sieve = num_traits::pow(&one - ratio(1, q * q), (m + l) as usize);
    zero_factor * q_pow / sieve
}

/// One row of model moments for the normalized sum `(X_1 + ... + X_q)/sqrt(q)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelMoment {
    pub k: u32,
    /// `E[(X_1 + ... + X_q)^k]`, exact.
    #[serde(serialize_with = "ser_rational")]
    pub raw: Rational,
    /// `raw / q^{k/2}`.
    pub normalized: f64,
}

impl ModelMoment {
    /// The normalized moment as an exact rational, available for even `k`.
    pub fn normalized_exact(&self, q: u64) -> Option<Rational> {
        self.k.is_multiple_of(2).then(|| &self.raw / int(BigInt::from(q).pow(self.k / 2)))
    }
}

/// `E[((X_1 + ... + X_q)/sqrt(q))^k]`.
pub fn model_moment(q: u64, k: u32) -> ModelMoment {
    let raw = if q <= CONVOLUTION_MOMENT_LIMIT {
        build_trinomial(q).raw_moment(k)
    } else {
        sum_moments_by_powering(q, k)[k as usize].clone()
    };
    moment_row(q, k, raw)
}

/// Same as [`model_moment`] for many `k`, sharing one model.
pub fn model_moments(q: u64, k_max: u32) -> Vec<ModelMoment> {
    if q <= CONVOLUTION_MOMENT_LIMIT {
        let model = build_trinomial(q);
        (0..=k_max).map(|k| moment_row(q, k, model.raw_moment(k))).collect()
    } else {
        let raws = sum_moments_by_powering(q, k_max);
        (0..=k_max).map(|k| moment_row(q, k, raws[k as usize].clone())).collect()
    }
}

fn moment_row(q: u64, k: u32, raw: Rational) -> ModelMoment {
    let normalized = if k % 2 == 1 {
        0.0
    } else {
        to_f64(&(&raw / int(BigInt::from(q).pow(k / 2))))
    };
    ModelMoment { k, raw, normalized }
}

/// Raw moments `E[(X_1 + ... + X_q)^j]` for `j = 0..=k_max`, obtained by
/// binary powering of the single-variable moment sequence under the
/// binomial convolution `M_{a+b}[k] = sum_j C(k, j) M_a[j] M_b[k-j]`.
pub fn sum_moments_by_powering(q: u64, k_max: u32) -> Vec<Rational> {
    let len = k_max as usize + 1;
    let even = ratio(q, q + 1);
    let single: Vec<Rational> = (0..len)
        .map(|j| match j {
            0 => Rational::one(),
            j if j % 2 == 1 => Rational::zero(),
            _ => even.clone(),
        })
        .collect();
    let binom = binomials(k_max);
    let combine = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
        (0..len)
            .map(|k| {
                (0..=k)
                    .filter(|&j| !a[j].is_zero() && !b[k - j].is_zero())
                    .map(|j| &a[j] * &b[k - j] * int(binom[k][j].clone()))
                    .fold(Rational::zero(), |acc, x| acc + x)
            })
            .collect()
    };
    let mut acc: Vec<Rational> = (0..len).map(|j| if j == 0 { Rational::one() } else { Rational::zero() }).collect();
    let mut base = single;
    let mut n = q;
    while n > 0 {
        if n & 1 == 1 {
            acc = combine(&acc, &base);
        }
        n >>= 1;
        if n > 0 {
            base = combine(&base, &base);
        }
    }
    acc
}

fn binomials(n: u32) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for i in 1..=n as usize {
        let prev = &rows[i - 1];
        let row = (0..=i)
            .map(|j| {
                let a = if j > 0 { prev[j - 1].clone() } else { BigInt::zero() };
                let b = if j < i { prev[j].clone() } else { BigInt::zero() };
                a + b
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// Moments of the standard Gaussian: `(k-1)!!` for even `k`, 0 for odd `k`.
pub fn gaussian_moment(k: u32) -> BigUint {
    if k % 2 == 1 {
        return BigUint::zero();
    }
    (1..k).step_by(2).fold(BigUint::one(), |acc, j| acc * j)
}

/// `q^{(3q - d)/2}`, the relative error scale for the distribution of `S`.
pub fn error_bound_theorem1(q: u64, d: u64) -> f64 {
    (q as f64).powf((3.0 * q as f64 - d as f64) / 2.0)
}

/// `q^{(3k - d)/2}`, the error scale of the `k`-th moment.
pub fn error_bound_moment(q: u64, d: u64, k: u32) -> f64 {
    (q as f64).powf((3.0 * k as f64 - d as f64) / 2.0)
}

/// `q^{(3m + 2l - d)/2}`, the relative error scale for `l` prescribed nonzero
/// values and `m` prescribed zeros.
pub fn error_bound_values(q: u64, d: u64, l: u64, m: u64) -> f64 {
    (q as f64).powf((3.0 * m as f64 + 2.0 * l as f64 - d as f64) / 2.0)
}

/// Compares the power-series coefficients of `1/(1 - qu)` and
/// `(1/(1 - qu^2)) * sum_d counts[d] u^d` up to degree `counts.len() - 1`.
/// Returns the first degree where they differ.
pub fn zeta_series_first_mismatch(q: u64, counts: &[BigUint]) -> Option<usize> {
    let qb = BigUint::from(q);
    (0..counts.len()).find(|&n| {
        let lhs = qb.pow(n as u32);
        let rhs: BigUint = (0..=n / 2).map(|j| qb.pow(j as u32) * &counts[n - 2 * j]).sum();
        lhs != rhs
    })
}

/// True iff the zeta identity holds to degree `max_degree` with the
/// square-free counts `q^d - q^{d-1}`.
pub fn zeta_series_check(q: u64, max_degree: u32) -> bool {
    let counts: Vec<BigUint> = (0..=max_degree).map(|d| count_squarefree(q, d)).collect();
    zeta_series_first_mismatch(q, &counts).is_none()
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc = acc.div_floor(&BigUint::from(i + 1));
    }
    acc
}

/// True iff `r` is in lowest terms with a positive denominator.
pub fn is_canonical(r: &Rational) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}
