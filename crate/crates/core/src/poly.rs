//! Monic polynomials over a [`FieldSpec`]: evaluation, square-free testing,
//! exhaustive enumeration, rejection sampling and brute-force counting.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};

/// Cap on rejection-sampling trials before [`Error::SamplingStalled`].
pub const MAX_SAMPLING_TRIALS: usize = 10_000;

/// A monic polynomial `X^d + c_{d-1} X^{d-1} + ... + c_0`. Only the `d`
/// non-leading coefficients are stored, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonicPoly {
    coeffs: Vec<Elem>,
}

impl MonicPoly {
    pub fn new(coeffs: Vec<Elem>) -> Self {
        MonicPoly { coeffs }
    }

    /// Validates that every coefficient is an element of `field`.
    pub fn in_field(field: &FieldSpec, coeffs: Vec<Elem>) -> Result<Self> {
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= field.q()) {
            return Err(Error::InvalidArgument(format!(
                "coefficient {bad} is not an element of F_{}",
                field.q()
            )));
        }
        Ok(MonicPoly { coeffs })
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        MonicPoly { coeffs: Vec::new() }
    }

    /// `X - r`.
    pub fn linear(field: &FieldSpec, root: Elem) -> Self {
        MonicPoly { coeffs: vec![field.neg(root)] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Dense coefficient vector including the leading 1.
    pub fn to_dense(&self) -> Vec<Elem> {
        let mut v = self.coeffs.clone();
        v.push(1);
        v
    }

    pub fn mul(&self, other: &MonicPoly, field: &FieldSpec) -> MonicPoly {
        let a = self.to_dense();
        let b = other.to_dense();
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(x, y));
            }
        }
        out.pop();
        MonicPoly { coeffs: out }
    }

    /// Human-readable form such as `X^3 + 2X + 1`; extension-field
    /// coefficients are printed by index.
    pub fn display(&self) -> String {
        let d = self.degree();
        let mut terms = vec![monomial(1, d)];
        for i in (0..d).rev() {
            let c = self.coeffs[i];
            if c != 0 {
                terms.push(monomial(c, i));
            }
        }
        terms.join(" + ")
    }
}

fn monomial(c: Elem, i: usize) -> String {
    let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
    match i {
        0 => coeff,
        1 => format!("{coeff}X"),
        _ => format!("{coeff}X^{i}"),
    }
}

/// Horner evaluation of `f` at `x`, including the implicit leading term.
#[inline]
pub fn evaluate(field: &FieldSpec, f: &MonicPoly, x: Elem) -> Elem {
    evaluate_coeffs(field, &f.coeffs, x)
}

#[inline]
pub(crate) fn evaluate_coeffs(field: &FieldSpec, coeffs: &[Elem], x: Elem) -> Elem {
    coeffs.iter().rev().fold(1, |acc, &c| field.add(field.mul(acc, x), c))
}

/// Formal derivative as a dense, trimmed coefficient vector (empty for the
/// zero polynomial).
pub fn derivative(field: &FieldSpec, f: &MonicPoly) -> Vec<Elem> {
    let mut out = Vec::with_capacity(f.degree());
    derivative_into(field, &f.coeffs, &mut out);
    out
}

fn derivative_into(field: &FieldSpec, coeffs: &[Elem], out: &mut Vec<Elem>) {
    out.clear();
    for (i, &c) in coeffs.iter().chain(std::iter::once(&1)).enumerate().skip(1) {
        out.push(field.mul(field.from_int((i % field.p() as usize) as i64), c));
    }
    trim(out);
}

#[inline]
fn trim(v: &mut Vec<Elem>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

// a <- a mod b, for nonzero trimmed b; leaves a trimmed.
fn rem_in_place(field: &FieldSpec, a: &mut Vec<Elem>, b: &[Elem]) {
    let db = b.len() - 1;
    let lead_inv = field.inv_nonzero(b[db]);
    while a.len() > db {
        let top = a.len() - 1;
        let c = field.mul(a[top], lead_inv);
        if c != 0 {
            let off = top - db;
            for j in 0..db {
                a[off + j] = field.sub(a[off + j], field.mul(c, b[j]));
            }
        }
        a.pop();
        trim(a);
    }
}

/// Greatest common divisor of two dense polynomials, made monic. Returns the
/// empty vector when both inputs are zero.
pub fn gcd(field: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        rem_in_place(field, &mut x, &y);
        std::mem::swap(&mut x, &mut y);
    }
    if let Some(&lead) = x.last() {
        let inv = field.inv_nonzero(lead);
        for c in x.iter_mut() {
            *c = field.mul(*c, inv);
        }
    }
    x
}

/// Reusable scratch space for repeated square-free tests.
#[derive(Debug, Default, Clone)]
pub struct SquarefreeTester {
    a: Vec<Elem>,
    b: Vec<Elem>,
}

impl SquarefreeTester {
    pub fn new() -> Self {
        Self::default()
    }

    /// Square-free test on the non-leading coefficients of a monic polynomial.
    pub fn test(&mut self, field: &FieldSpec, coeffs: &[Elem]) -> bool {
        let d = coeffs.len();
        if d <= 1 {
            return true;
        }
        derivative_into(field, coeffs, &mut self.b);
        if self.b.is_empty() {
            // F' = 0 means F is a p-th power.
            return false;
        }
        self.a.clear();
        self.a.extend_from_slice(coeffs);
        self.a.push(1);
        let (x, y) = (&mut self.a, &mut self.b);
        while !y.is_empty() {
            rem_in_place(field, x, y);
            std::mem::swap(x, y);
        }
        x.len() == 1
    }
}

/// True iff `f` has no repeated irreducible factor, i.e. `gcd(f, f')` is a
/// nonzero constant.
pub fn is_squarefree(field: &FieldSpec, f: &MonicPoly) -> bool {
    SquarefreeTester::new().test(field, &f.coeffs)
}

/// `|F_d|`: `q^d - q^(d-1)` for `d >= 2`, `q^d` for `d < 2`.
pub fn count_squarefree(q: u64, d: u32) -> BigUint {
    let qb = BigUint::from(q);
    if d < 2 {
        qb.pow(d)
    } else {
        qb.pow(d) - qb.pow(d - 1)
    }
}

/// A contiguous block of `V_d`: the `prefix.len()` highest non-leading
/// coefficients are fixed (`prefix[0]` is the coefficient of `X^{d-1}`), the
/// rest range over the whole field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shard {
    pub degree: usize,
    pub prefix: Vec<Elem>,
}

impl Shard {
    /// The single shard covering all of `V_d`.
    pub fn whole(degree: usize) -> Self {
        Shard { degree, prefix: Vec::new() }
    }

    /// Partition of `V_d` by every possible prefix of length `prefix_len`
    /// (clamped to `d`), in odometer order.
    pub fn partition(field: &FieldSpec, degree: usize, prefix_len: usize) -> Vec<Shard> {
        let len = prefix_len.min(degree);
        let q = field.q();
        let mut out = Vec::new();
        let mut prefix = vec![0; len];
        loop {
            out.push(Shard { degree, prefix: prefix.clone() });
            // Last prefix entry varies fastest, matching the odometer order.
            let mut i = len;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                prefix[i] += 1;
                if prefix[i] < q {
                    break;
                }
                prefix[i] = 0;
            }
        }
    }

    /// Number of free (low) coefficients.
    pub fn free(&self) -> usize {
        self.degree - self.prefix.len()
    }

    pub fn size(&self, q: u32) -> u128 {
        (q as u128).pow(self.free() as u32)
    }

    /// Initial coefficient vector (free coefficients zero).
    pub(crate) fn start(&self) -> Vec<Elem> {
        let mut coeffs = vec![0; self.degree];
        for (i, &c) in self.prefix.iter().enumerate() {
            coeffs[self.degree - 1 - i] = c;
        }
        coeffs
    }
}

/// Odometer over the monic polynomials of a shard, constant term fastest.
///
/// This is a lending-style cursor: [`MonicCursor::coeffs`] exposes the
/// current polynomial without allocation and [`MonicCursor::advance`] moves
/// on, reporting the lowest coefficient position that changed.
#[derive(Debug, Clone)]
pub struct MonicCursor {
    q: u32,
    free: usize,
    coeffs: Vec<Elem>,
    done: bool,
}

impl MonicCursor {
    pub fn new(field: &FieldSpec, shard: &Shard) -> Self {
        MonicCursor { q: field.q(), free: shard.free(), coeffs: shard.start(), done: false }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Steps to the next polynomial. Returns the highest coefficient index
    /// that changed, or `None` once the shard is exhausted.
    #[inline]
    pub fn advance(&mut self) -> Option<usize> {
        for i in 0..self.free {
            self.coeffs[i] += 1;
            if self.coeffs[i] < self.q {
                return Some(i);
            }
            self.coeffs[i] = 0;
        }
        self.done = true;
        None
    }

}

/// Streaming iterator over `V_d` (or one shard of it) in odometer order.
#[derive(Debug, Clone)]
pub struct MonicIter {
    cursor: MonicCursor,
}

impl Iterator for MonicIter {
    type Item = MonicPoly;

    fn next(&mut self) -> Option<MonicPoly> {
        if self.cursor.is_done() {
            return None;
        }
        let out = MonicPoly::new(self.cursor.coeffs().to_vec());
        self.cursor.advance();
        Some(out)
    }
}

/// Every monic polynomial of degree `d`, constant coefficient varying fastest.
pub fn enumerate_monic(field: &FieldSpec, d: usize) -> MonicIter {
    enumerate_shard(field, &Shard::whole(d))
}

pub fn enumerate_shard(field: &FieldSpec, shard: &Shard) -> MonicIter {
    MonicIter { cursor: MonicCursor::new(field, shard) }
}

/// A uniformly random element of `F_d`: uniform coefficients, rejected until
/// square-free.
pub fn sample_squarefree<R: Rng + ?Sized>(
    field: &FieldSpec,
    d: usize,
    rng: &mut R,
) -> Result<MonicPoly> {
    let mut tester = SquarefreeTester::new();
    let mut coeffs = vec![0; d];
    sample_squarefree_into(field, &mut tester, &mut coeffs, rng)?;
    Ok(MonicPoly::new(coeffs))
}

/// Allocation-free variant of [`sample_squarefree`]; the degree is
/// `coeffs.len()`. Returns the number of trials used.
pub fn sample_squarefree_into<R: Rng + ?Sized>(
    field: &FieldSpec,
    tester: &mut SquarefreeTester,
    coeffs: &mut [Elem],
    rng: &mut R,
) -> Result<usize> {
    let q = field.q();
    for trial in 1..=MAX_SAMPLING_TRIALS {
        for c in coeffs.iter_mut() {
            *c = rng.gen_range(0..q);
        }
        if tester.test(field, coeffs) {
            return Ok(trial);
        }
    }
    Err(Error::SamplingStalled(MAX_SAMPLING_TRIALS))
}

/// Prescribed values `F(points[i]) = values[i]` at distinct points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueConstraint {
    points: Vec<Elem>,
    values: Vec<Elem>,
}

impl ValueConstraint {
    pub fn new(field: &FieldSpec, points: Vec<Elem>, values: Vec<Elem>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::InvalidConstraint(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        if points.iter().chain(&values).any(|&x| x >= field.q()) {
            return Err(Error::InvalidConstraint("element outside the field".into()));
        }
        let mut seen = points.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != points.len() {
            return Err(Error::InvalidConstraint("points must be distinct".into()));
        }
        Ok(ValueConstraint { points, values })
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_satisfied_by(&self, field: &FieldSpec, coeffs: &[Elem]) -> bool {
        self.points
            .iter()
            .zip(&self.values)
            .all(|(&x, &a)| evaluate_coeffs(field, coeffs, x) == a)
    }
}

/// Errors unless `q^d` polynomials fit within `budget`.
pub fn check_budget(q: u32, d: usize, budget: u128) -> Result<()> {
    let needed = (q as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::CensusBudgetExceeded { needed, budget });
    }
    Ok(())
}

/// Brute-force count of `F` in `V_d` (or `F_d` when `squarefree_only`) that
/// satisfy the constraint.
pub fn count_with_values(
    field: &FieldSpec,
    d: usize,
    constraint: &ValueConstraint,
    squarefree_only: bool,
    budget: u128,
) -> Result<BigUint> {
    check_budget(field.q(), d, budget)?;
    let mut tester = SquarefreeTester::new();
    let mut cursor = MonicCursor::new(field, &Shard::whole(d));
    let mut count = 0u64;
    while !cursor.is_done() {
        let c = cursor.coeffs();
        if constraint.is_satisfied_by(field, c) && (!squarefree_only || tester.test(field, c)) {
            count += 1;
        }
        cursor.advance();
    }
    Ok(BigUint::from(count))
}

/// `|V_d| = q^d`.
pub fn count_monic(q: u64, d: u32) -> BigUint {
    if d == 0 {
        return BigUint::one();
    }
    BigUint::from(q).pow(d)
}
