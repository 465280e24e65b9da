//! The character sum `S(F) = sum_x chi(F(x))`, point counts, and exhaustive
//! census kernels over `V_d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::poly::{check_budget, evaluate, evaluate_coeffs, MonicCursor, MonicPoly, Shard, SquarefreeTester};

/// `S(F)`.
pub fn char_sum(field: &FieldSpec, f: &MonicPoly) -> i64 {
    field.elements().map(|x| field.quad_char(evaluate(field, f, x)) as i64).sum()
}

/// `q + 1 + S(F)`: the number of points on the smooth projective model of
/// `Y^2 = F(X)` when `F` is square-free of degree at least 3. Computed for
/// any `F`.
pub fn point_count(field: &FieldSpec, f: &MonicPoly) -> i64 {
    field.q() as i64 + 1 + char_sum(field, f)
}

/// `(d - 1) sqrt(q)`, the classical bound on `|S(F)|` for square-free `F`.
pub fn weil_bound(q: u32, d: usize) -> f64 {
    (d as f64 - 1.0).max(0.0) * (q as f64).sqrt()
}

/// The image of `F` under `F(X) -> c^d F(X / c)`. For odd `d` and a
/// non-square `c` this is a bijection of `F_d` that negates `S`.
pub fn twist(field: &FieldSpec, f: &MonicPoly, c: Elem) -> MonicPoly {
    let d = f.degree();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &a)| field.mul(field.pow(c, (d - i) as u64), a))
        .collect();
    MonicPoly::new(coeffs)
}

/// Values `F(x)` at a fixed list of points, kept in step with a
/// [`MonicCursor`].
#[derive(Debug, Clone)]
pub struct ValueVector {
    points: Vec<Elem>,
    vals: Vec<Elem>,
}

impl ValueVector {
    /// Tracks every element of the field.
    pub fn full(field: &FieldSpec) -> Self {
        Self::at(field.elements().collect())
    }

    pub fn at(points: Vec<Elem>) -> Self {
        let vals = vec![0; points.len()];
        ValueVector { points, vals }
    }

    pub fn values(&self) -> &[Elem] {
        &self.vals
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    /// Fresh Horner evaluation at every point.
    pub fn reset(&mut self, field: &FieldSpec, coeffs: &[Elem]) {
        for (v, &x) in self.vals.iter_mut().zip(&self.points) {
            *v = evaluate_coeffs(field, coeffs, x);
        }
    }

    /// Adds `delta` to every value, i.e. to the constant coefficient.
    #[inline]
    pub fn shift(&mut self, field: &FieldSpec, delta: Elem) {
        for v in self.vals.iter_mut() {
            *v = field.add(*v, delta);
        }
    }

    #[inline]
    pub fn char_sum(&self, field: &FieldSpec) -> i64 {
        match field.chi_table() {
            Some(chi) => self.vals.iter().map(|&v| chi[v as usize] as i64).sum(),
            None => self.vals.iter().map(|&v| field.quad_char(v) as i64).sum(),
        }
    }
}

/// Exact counts of `S = s` for `s in [-q, q]`, stored densely with offset `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    q: u32,
    counts: Vec<u64>,
}

impl Histogram {
    pub fn new(q: u32) -> Self {
        Histogram { q, counts: vec![0; 2 * q as usize + 1] }
    }

    /// Builds a histogram from `(s, count)` pairs.
    pub fn from_counts(q: u32, pairs: impl IntoIterator<Item = (i64, u64)>) -> Result<Self> {
        let mut h = Self::new(q);
        for (s, c) in pairs {
            h.add_count(s, c)?;
        }
        Ok(h)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    fn slot(&self, s: i64) -> Option<usize> {
        let q = self.q as i64;
        (-q..=q).contains(&s).then(|| (s + q) as usize)
    }

    #[inline]
    pub fn record(&mut self, s: i64) {
        let i = self.slot(s).expect("character sum outside [-q, q]");
        self.counts[i] += 1;
    }

    pub fn add_count(&mut self, s: i64, c: u64) -> Result<()> {
        let i = self
            .slot(s)
            .ok_or_else(|| Error::InvalidArgument(format!("value {s} outside [-q, q]")))?;
        self.counts[i] = self.counts[i].checked_add(c).ok_or(Error::HistogramOverflow)?;
        Ok(())
    }

    pub fn get(&self, s: i64) -> u64 {
        self.slot(s).map_or(0, |i| self.counts[i])
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// `(s, count)` over the full domain `[-q, q]`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        let q = self.q as i64;
        self.counts.iter().enumerate().map(move |(i, &c)| (i as i64 - q, c))
    }

    /// Cell-wise sum; overflow is an error rather than a wrap.
    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if other.q != self.q {
            return Err(Error::ModelMismatch { model: self.q as u64, data: other.q as u64 });
        }
        for (a, &b) in self.counts.iter_mut().zip(&other.counts) {
            *a = a.checked_add(b).ok_or(Error::HistogramOverflow)?;
        }
        Ok(())
    }

    /// `sum_s count(s) * s^k` as an exact integer.
    pub fn power_sum(&self, k: u32) -> num_bigint::BigInt {
        self.iter()
            .filter(|&(_, c)| c > 0)
            .map(|(s, c)| num_bigint::BigInt::from(s).pow(k) * c)
            .sum()
    }
}

/// Census of `S(F)` over a shard of `V_d` (or its square-free part), using
/// the incremental value vector: the constant coefficient is innermost, so
/// each step only adds a constant to the `q` tracked values.
pub fn census_char_sums(
    field: &FieldSpec,
    shard: &Shard,
    squarefree_only: bool,
    budget: u128,
) -> Result<Histogram> {
    check_shard_budget(field, shard, budget)?;
    let mut hist = Histogram::new(field.q());
    let mut vals = ValueVector::full(field);
    let mut tester = SquarefreeTester::new();
    let mut cursor = MonicCursor::new(field, shard);
    let mut changed = None;
    let mut prev_c0 = 0;
    loop {
        let coeffs = cursor.coeffs();
        match changed {
            Some(0) => vals.shift(field, field.sub(coeffs[0], prev_c0)),
            _ => vals.reset(field, coeffs),
        }
        debug_assert!(spot_check(field, &vals, coeffs));
        if !squarefree_only || tester.test(field, coeffs) {
            hist.record(vals.char_sum(field));
        }
        prev_c0 = coeffs.first().copied().unwrap_or(0);
        changed = cursor.advance();
        if changed.is_none() {
            return Ok(hist);
        }
    }
}

fn spot_check(field: &FieldSpec, vals: &ValueVector, coeffs: &[Elem]) -> bool {
    // Checking one point per step keeps debug builds usable.
    match vals.points().first() {
        Some(&x) => vals.values()[0] == evaluate_coeffs(field, coeffs, x),
        None => true,
    }
}

/// Reference census: fresh Horner evaluation of every polynomial at every
/// point. Used to cross-check [`census_char_sums`].
pub fn census_char_sums_horner(
    field: &FieldSpec,
    shard: &Shard,
    squarefree_only: bool,
    budget: u128,
) -> Result<Histogram> {
    check_shard_budget(field, shard, budget)?;
    let mut hist = Histogram::new(field.q());
    let mut tester = SquarefreeTester::new();
    let mut cursor = MonicCursor::new(field, shard);
    while !cursor.is_done() {
        let coeffs = cursor.coeffs();
        if !squarefree_only || tester.test(field, coeffs) {
            let s: i64 = field
                .elements()
                .map(|x| field.quad_char(evaluate_coeffs(field, coeffs, x)) as i64)
                .sum();
            hist.record(s);
        }
        cursor.advance();
    }
    Ok(hist)
}

fn check_shard_budget(field: &FieldSpec, shard: &Shard, budget: u128) -> Result<()> {
    check_budget(field.q(), shard.free(), budget)
}

/// Largest number of points a pattern census accepts (`3^n` cells).
pub const MAX_PATTERN_POINTS: usize = 20;

/// Counts of each sign pattern `(chi(F(x_1)), ..., chi(F(x_n)))`. Pattern
/// `eps` lives at index `sum_i (eps_i + 1) 3^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCensus {
    points: Vec<Elem>,
    counts: Vec<u64>,
}

impl PatternCensus {
    pub fn new(points: Vec<Elem>) -> Result<Self> {
        if points.len() > MAX_PATTERN_POINTS {
            return Err(Error::InvalidArgument(format!(
                "pattern census over {} points exceeds {MAX_PATTERN_POINTS}",
                points.len()
            )));
        }
        let cells = 3usize.pow(points.len() as u32);
        Ok(PatternCensus { points, counts: vec![0; cells] })
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    pub fn index_of(pattern: &[i8]) -> usize {
        pattern.iter().rev().fold(0, |acc, &e| acc * 3 + (e + 1) as usize)
    }

    pub fn pattern_at(&self, mut index: usize) -> Vec<i8> {
        (0..self.points.len())
            .map(|_| {
                let e = (index % 3) as i8 - 1;
                index /= 3;
                e
            })
            .collect()
    }

    pub fn get(&self, pattern: &[i8]) -> u64 {
        self.counts[Self::index_of(pattern)]
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// `(pattern, count)` over all `3^n` cells.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<i8>, u64)> + '_ {
        self.counts.iter().enumerate().map(|(i, &c)| (self.pattern_at(i), c))
    }

    /// Counts of `chi(F(x_i)) = -1, 0, +1`.
    pub fn marginal(&self, i: usize) -> [u64; 3] {
        let stride = 3usize.pow(i as u32);
        let mut out = [0u64; 3];
        for (idx, &c) in self.counts.iter().enumerate() {
            out[(idx / stride) % 3] += c;
        }
        out
    }

    /// Histogram of `sum_i eps_i`; equals the census of `S` when the points
    /// are the whole field.
    pub fn sum_histogram(&self, q: u32) -> Result<Histogram> {
        let mut h = Histogram::new(q);
        for (pattern, c) in self.iter() {
            let s: i64 = pattern.iter().map(|&e| e as i64).sum();
            h.add_count(s, c)?;
        }
        Ok(h)
    }

    pub fn merge(&mut self, other: &PatternCensus) -> Result<()> {
        if other.points != self.points {
            return Err(Error::InvalidArgument("pattern censuses over different points".into()));
        }
        for (a, &b) in self.counts.iter_mut().zip(&other.counts) {
            *a = a.checked_add(b).ok_or(Error::HistogramOverflow)?;
        }
        Ok(())
    }
}

/// Census over the square-free polynomials of a shard of the sign pattern
/// of `F` at the given distinct points.
pub fn census_value_patterns(
    field: &FieldSpec,
    shard: &Shard,
    points: &[Elem],
    budget: u128,
) -> Result<PatternCensus> {
    check_shard_budget(field, shard, budget)?;
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != points.len() || points.iter().any(|&x| x >= field.q()) {
        return Err(Error::InvalidArgument("pattern points must be distinct field elements".into()));
    }
    let mut out = PatternCensus::new(points.to_vec())?;
    let mut vals = ValueVector::at(points.to_vec());
    let mut tester = SquarefreeTester::new();
    let mut cursor = MonicCursor::new(field, shard);
    let mut changed = None;
    let mut prev_c0 = 0;
    loop {
        let coeffs = cursor.coeffs();
        match changed {
            Some(0) => vals.shift(field, field.sub(coeffs[0], prev_c0)),
            _ => vals.reset(field, coeffs),
        }
        if tester.test(field, coeffs) {
            let idx = vals
                .values()
                .iter()
                .rev()
                .fold(0usize, |acc, &v| acc * 3 + (field.quad_char(v) + 1) as usize);
            out.counts[idx] += 1;
        }
        prev_c0 = coeffs.first().copied().unwrap_or(0);
        changed = cursor.advance();
        if changed.is_none() {
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{enumerate_monic, is_squarefree};

    fn f3() -> FieldSpec {
        FieldSpec::new(3, 1).unwrap()
    }

    #[test]
    fn char_sum_examples() {
        let f = f3();
        assert_eq!(char_sum(&f, &MonicPoly::new(vec![0])), 0);
        assert_eq!(char_sum(&f, &MonicPoly::new(vec![1, 0])), -1);
        for q in [3u64, 5, 7, 11] {
            let f = FieldSpec::new(q, 1).unwrap();
            assert_eq!(char_sum(&f, &MonicPoly::new(vec![0, 0])), q as i64 - 1);
        }
        let f9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(char_sum(&f9, &MonicPoly::new(vec![0, 0])), 8);
    }

    #[test]
    fn point_count_examples() {
        let f = f3();
        assert_eq!(point_count(&f, &MonicPoly::new(vec![1, 0])), 3);
        // X^3 + 2X takes values 0, 0, 0 on F_3, so S = 0.
        let g = MonicPoly::new(vec![0, 2, 0]);
        assert_eq!(char_sum(&f, &g), 0);
        assert_eq!(point_count(&f, &g), 4);
    }

    #[test]
    fn census_quadratics_over_f3() {
        let f = f3();
        let h = census_char_sums(&f, &Shard::whole(2), true, 1 << 20).unwrap();
        assert_eq!(h.total(), 6);
        let mut by_hand = Histogram::new(3);
        for g in enumerate_monic(&f, 2).filter(|g| is_squarefree(&f, g)) {
            by_hand.record(char_sum(&f, &g));
        }
        assert_eq!(h, by_hand);
        let all = census_char_sums(&f, &Shard::whole(2), false, 1 << 20).unwrap();
        assert_eq!(all.total(), 9);
        assert!(all.iter().all(|(s, c)| c == 0 || s.abs() <= 3));
    }

    #[test]
    fn census_over_extension_field_matches_reference() {
        let f = FieldSpec::new(3, 2).unwrap();
        for d in 0..=3 {
            let fast = census_char_sums(&f, &Shard::whole(d), true, 1 << 20).unwrap();
            let slow = census_char_sums_horner(&f, &Shard::whole(d), true, 1 << 20).unwrap();
            assert_eq!(fast, slow, "d = {d}");
        }
    }

    #[test]
    fn census_budget() {
        let f = f3();
        assert!(matches!(
            census_char_sums(&f, &Shard::whole(10), true, 1000),
            Err(Error::CensusBudgetExceeded { .. })
        ));
    }

    #[test]
    fn histogram_overflow_is_reported() {
        let mut a = Histogram::new(3);
        a.add_count(0, u64::MAX).unwrap();
        let mut b = Histogram::new(3);
        b.record(0);
        assert_eq!(a.merge(&b), Err(Error::HistogramOverflow));
        assert!(a.add_count(4, 1).is_err());
    }

    #[test]
    fn pattern_census_quadratics() {
        let f = f3();
        let pc = census_value_patterns(&f, &Shard::whole(2), &[0, 1, 2], 1 << 20).unwrap();
        assert_eq!(pc.iter().count(), 27);
        assert_eq!(pc.total(), 6);
        let direct = census_char_sums(&f, &Shard::whole(2), true, 1 << 20).unwrap();
        assert_eq!(pc.sum_histogram(3).unwrap(), direct);
        assert_eq!(PatternCensus::index_of(&pc.pattern_at(17)), 17);
    }

    #[test]
    fn twist_negates_odd_degree_sums() {
        let f = FieldSpec::new(5, 1).unwrap();
        let c = f.non_square();
        for g in enumerate_monic(&f, 3).filter(|g| is_squarefree(&f, g)) {
            let t = twist(&f, &g, c);
            assert!(is_squarefree(&f, &t));
            assert_eq!(char_sum(&f, &t), -char_sum(&f, &g));
        }
    }
}
