//! Odd finite fields `F_q`, `q = p^k`, with elements addressed by a canonical
//! index in `[0, q)`.
//!
//! Prime fields use direct modular arithmetic. Extension fields are stored as
//! `F_p[t] / (m(t))` where `m` is the smallest monic irreducible of degree `k`
//! (coefficient vectors read as base-`p` integers, constant term least
//! significant). An element's index is that same base-`p` reading of its
//! coefficient vector, so the prime subfield occupies indices `0..p`.
//! Extension arithmetic goes through discrete log / antilog tables, with a
//! Zech table for addition.

use crate::error::{Error, Result};

/// Canonical index of a field element.
pub type Elem = u32;

/// Largest supported prime field order (exclusive).
pub const MAX_PRIME_FIELD: u64 = 1 << 31;
/// Largest supported extension field order (inclusive).
pub const MAX_EXTENSION_FIELD: u64 = 1 << 16;

// Fields up to this order get dense q*q multiplication (and addition) tables.
const DENSE_LIMIT: u64 = 1024;
// Above this order a prime field evaluates the character by exponentiation.
const CHI_TABLE_LIMIT: u64 = 1 << 22;

const ZECH_ZERO: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct ExtTables {
    /// Modulus coefficients, constant term first, including the leading 1.
    modulus: Vec<u32>,
    generator: Elem,
    /// `log[a]` for `a != 0`.
    log: Vec<u32>,
    /// `exp[i] = g^i` for `i in 0..q-1`.
    exp: Vec<Elem>,
    /// `zech[n] = log(1 + g^n)`, or `ZECH_ZERO` when `g^n = -1`.
    zech: Vec<u32>,
}

/// A concrete odd finite field together with its quadratic character table.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    ext: Option<ExtTables>,
    mul_table: Option<Vec<u16>>,
    add_table: Option<Vec<u16>>,
    inv_table: Option<Vec<u32>>,
    chi: Option<Vec<i8>>,
}

impl FieldSpec {
    /// Builds `F_{p^k}`.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("field exponent k must be at least 1".into()));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let too_large = Error::FieldTooLarge { p, k };
        let q = p.checked_pow(k).ok_or(too_large.clone())?;
        let bound = if k == 1 { MAX_PRIME_FIELD - 1 } else { MAX_EXTENSION_FIELD };
        if q > bound {
            return Err(too_large);
        }

        let mut field = FieldSpec {
            p: p as u32,
            k,
            q: q as u32,
            ext: None,
            mul_table: None,
            add_table: None,
            inv_table: None,
            chi: None,
        };
        if k > 1 {
            field.ext = Some(ExtTables::build(p as u32, k));
        }
        field.build_tables();
        Ok(field)
    }

    /// Shorthand for the prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let q64 = self.q as u64;
        if q64 <= DENSE_LIMIT {
            let mut mul = vec![0u16; q * q];
            for a in 0..self.q {
                for b in a..self.q {
                    let c = self.mul_slow(a, b) as u16;
                    mul[a as usize * q + b as usize] = c;
                    mul[b as usize * q + a as usize] = c;
                }
            }
            self.mul_table = Some(mul);
            if self.ext.is_some() {
                let mut add = vec![0u16; q * q];
                for a in 0..self.q {
                    for b in a..self.q {
                        let c = self.add_slow(a, b) as u16;
                        add[a as usize * q + b as usize] = c;
                        add[b as usize * q + a as usize] = c;
                    }
                }
                self.add_table = Some(add);
            }
        }
        if q64 <= MAX_EXTENSION_FIELD {
            let inv = (0..self.q)
                .map(|a| if a == 0 { 0 } else { self.pow(a, q64 - 2) })
                .collect();
            self.inv_table = Some(inv);
        }
        if q64 <= CHI_TABLE_LIMIT {
            let mut chi = vec![-1i8; q];
            chi[0] = 0;
            match &self.ext {
                // Squares are exactly the even powers of a generator.
                Some(t) => {
                    for (c, &log) in chi.iter_mut().zip(&t.log).skip(1) {
                        *c = if log % 2 == 0 { 1 } else { -1 };
                    }
                }
                None => {
                    for x in 1..q as u64 {
                        chi[(x * x % q64) as usize] = 1;
                    }
                }
            }
            self.chi = Some(chi);
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Field order `q = p^k`.
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    /// The irreducible modulus (constant term first, leading 1 included) for
    /// extension fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.ext.as_ref().map(|t| t.modulus.as_slice())
    }

    /// The multiplicative generator used for the log tables (extension fields).
    pub fn generator(&self) -> Option<Elem> {
        self.ext.as_ref().map(|t| t.generator)
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.q
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    /// Coefficients of `a` over `F_p` (length `k`, constant term first).
    pub fn to_coeffs(&self, a: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut rest = a;
        for _ in 0..self.k {
            out.push(rest % self.p);
            rest /= self.p;
        }
        out
    }

    /// Inverse of [`FieldSpec::to_coeffs`]; coefficients are reduced mod `p`.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.k as usize {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients given for a degree-{} extension",
                coeffs.len(),
                self.k
            )));
        }
        Ok(coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.p + c % self.p))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(a < self.q && b < self.q);
        if let Some(t) = &self.add_table {
            return t[a as usize * self.q as usize + b as usize] as Elem;
        }
        self.add_slow(a, b)
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        match &self.ext {
            None => {
                let s = a as u64 + b as u64;
                if s >= self.p as u64 {
                    (s - self.p as u64) as Elem
                } else {
                    s as Elem
                }
            }
            Some(t) => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let order = self.q - 1;
                let la = t.log[a as usize];
                let lb = t.log[b as usize];
                let n = if lb >= la { lb - la } else { lb + order - la };
                match t.zech[n as usize] {
                    ZECH_ZERO => 0,
                    z => t.exp[((la as u64 + z as u64) % order as u64) as usize],
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if a == 0 {
            return 0;
        }
        match &self.ext {
            None => self.p - a,
            Some(t) => {
                let order = self.q - 1;
                t.exp[((t.log[a as usize] + order / 2) % order) as usize]
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        if self.ext.is_none() {
            if a >= b {
                a - b
            } else {
                a + (self.p - b)
            }
        } else {
            self.add(a, self.neg(b))
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(a < self.q && b < self.q);
        if let Some(t) = &self.mul_table {
            return t[a as usize * self.q as usize + b as usize] as Elem;
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        match &self.ext {
            None => ((a as u64 * b as u64) % self.p as u64) as Elem,
            Some(t) => {
                if a == 0 || b == 0 {
                    return 0;
                }
                let order = self.q - 1;
                let s = t.log[a as usize] + t.log[b as usize];
                t.exp[(if s >= order { s - order } else { s }) as usize]
            }
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_nonzero(a))
    }

    /// Inverse of an element the caller knows to be nonzero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: Elem) -> Elem {
        debug_assert!(a != 0);
        match &self.inv_table {
            Some(t) => t[a as usize],
            None => self.pow(a, self.q as u64 - 2),
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_any(acc, base);
            }
            base = self.mul_any(base, base);
            e >>= 1;
        }
        acc
    }

    // `pow` runs while the dense tables are still being built.
    #[inline]
    fn mul_any(&self, a: Elem, b: Elem) -> Elem {
        match &self.mul_table {
            Some(_) => self.mul(a, b),
            None => self.mul_slow(a, b),
        }
    }

    /// The quadratic character, with `chi(0) = 0`.
    #[inline]
    pub fn quad_char(&self, a: Elem) -> i8 {
        match &self.chi {
            Some(t) => t[a as usize],
            None => self.euler_criterion(a),
        }
    }

    /// The full character table, indexed by element, when it is materialized.
    pub fn chi_table(&self) -> Option<&[i8]> {
        self.chi.as_deref()
    }

    /// `a^((q-1)/2)` mapped to `{-1, 0, 1}`.
    pub fn euler_criterion(&self, a: Elem) -> i8 {
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.q as u64 - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Smallest-index non-square.
    pub fn non_square(&self) -> Elem {
        self.elements()
            .find(|&a| self.quad_char(a) == -1)
            .expect("an odd field has non-squares")
    }

    /// Discrete log relative to the stored generator (extension fields only).
    pub fn discrete_log(&self, a: Elem) -> Option<u32> {
        match &self.ext {
            Some(t) if a != 0 => Some(t.log[a as usize]),
            _ => None,
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Elem) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.q as u64 - 1;
        let mut ord = n;
        for r in prime_factors(n) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == 1 {
                ord /= r;
            }
        }
        Ok(ord)
    }
}

impl ExtTables {
    fn build(p: u32, k: u32) -> Self {
        let modulus = smallest_irreducible(p, k);
        let q = p.pow(k);
        let order = (q - 1) as u64;
        let factors = prime_factors(order);

        let mulmod = |a: u32, b: u32| poly_mulmod(a, b, &modulus, p, k);
        let powmod = |a: u32, mut e: u64| {
            let (mut base, mut acc) = (a, 1u32);
            while e > 0 {
                if e & 1 == 1 {
                    acc = mulmod(acc, base);
                }
                base = mulmod(base, base);
                e >>= 1;
            }
            acc
        };
        let generator = (2..q)
            .find(|&g| factors.iter().all(|&r| powmod(g, order / r) != 1))
            .expect("the multiplicative group of a finite field is cyclic");

        let mut log = vec![0u32; q as usize];
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut x = 1u32;
        for i in 0..q - 1 {
            exp[i as usize] = x;
            log[x as usize] = i;
            x = mulmod(x, generator);
        }
        debug_assert_eq!(x, 1);

        let zech = exp
            .iter()
            .map(|&e| {
                let c0 = e % p;
                let plus_one = e - c0 + (c0 + 1) % p;
                if plus_one == 0 {
                    ZECH_ZERO
                } else {
                    log[plus_one as usize]
                }
            })
            .collect();

        ExtTables { modulus, generator, log, exp, zech }
    }
}

/// Deterministic trial division; inputs are below 2^31 in practice.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn digits(mut idx: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for slot in out.iter_mut() {
        *slot = idx % p;
        idx /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

// Remainder of `a` modulo a monic `m` over F_p, in place; returns the
// trimmed length.
fn poly_rem_monic(a: &mut Vec<u64>, m: &[u64], p: u64) {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap() % p;
        if lead != 0 {
            let off = a.len() - dm;
            for j in 0..dm {
                a[off + j] = (a[off + j] + (p - lead) * m[j]) % p;
            }
        }
    }
}

fn poly_mulmod(a: u32, b: u32, modulus: &[u32], p: u32, k: u32) -> u32 {
    let (da, db) = (digits(a, p, k as usize), digits(b, p, k as usize));
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * k as usize - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    let m: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
    poly_rem_monic(&mut prod, &m, p64);
    let out: Vec<u32> = prod.iter().map(|&c| c as u32).collect();
    undigits(&out, p)
}

/// True iff the monic polynomial `f` (constant term first, leading 1
/// included) has no monic factor of degree `1..=deg/2` over `F_p`.
pub fn is_irreducible_mod_p(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    let fp: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    for dd in 1..=deg / 2 {
        for idx in 0..(p as u64).pow(dd as u32) {
            let mut g: Vec<u64> = digits(idx as u32, p, dd).into_iter().map(u64::from).collect();
            g.push(1);
            let mut r = fp.clone();
            poly_rem_monic(&mut r, &g, p as u64);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `k` over `F_p`, constant term first.
pub fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    (0..p.pow(k))
        .map(|idx| {
            let mut f = digits(idx, p, k as usize);
            f.push(1);
            f
        })
        .find(|f| is_irreducible_mod_p(f, p))
        .expect("irreducible polynomials exist in every degree")
}
