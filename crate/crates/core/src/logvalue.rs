//! Exact scalars of the form `r + (1/π)·Σ c_p·log p` over primes `p`.
//!
//! Unique factorization makes the canonical form a complete equality oracle:
//! the value is zero iff the rational part and every coefficient vanish
//! (`π` and the `log p` are linearly independent over the rationals). Only
//! ordering questions need numerics, and those are answered by interval
//! evaluation at escalating precision, so no floating point ever decides
//! equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{bigint::Sign, BigInt, BigUint, Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::{GaussianRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogValueError {
    #[error("log of zero requested")]
    LogOfZero,
    #[error("sign could not be resolved at maximal precision")]
    SignUnresolved,
}

/// `rational_part + (1/π)·Σ log_part[p]·log(p)`, kept canonical: no zero
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LogValue {
    rational_part: Rational,
    log_part: BTreeMap<BigUint, Rational>,
}

impl LogValue {
    pub fn zero() -> Self {
        LogValue { rational_part: Rational::zero(), log_part: BTreeMap::new() }
    }

    pub fn from_rational(r: Rational) -> Self {
        LogValue { rational_part: r, log_part: BTreeMap::new() }
    }

    /// `(1/π)·log|z|` for a nonzero Gaussian rational `z`, computed exactly
    /// through the prime factorization of `|z|² = re² + im²`.
    pub fn log_abs(z: &GaussianRational) -> Result<Self, LogValueError> {
        if z.is_zero() {
            return Err(LogValueError::LogOfZero);
        }
        let norm = z.norm_sqr(); // positive rational
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let mut log_part = BTreeMap::new();
        let mut add_factors = |n: &BigUint, sign: i64| {
            for (p, e) in factorize(n.clone()) {
                let coeff = &half * Rational::from_integer(BigInt::from(e as i64 * sign));
                merge(&mut log_part, p, coeff);
            }
        };
        add_factors(norm.numer().magnitude(), 1);
        add_factors(norm.denom().magnitude(), -1);
        Ok(LogValue { rational_part: Rational::zero(), log_part })
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational_part
    }

    pub fn log_coefficients(&self) -> impl Iterator<Item = (&BigUint, &Rational)> {
        self.log_part.iter()
    }

    pub fn coefficient_of(&self, prime: u64) -> Rational {
        self.log_part.get(&BigUint::from(prime)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.rational_part.is_zero() && self.log_part.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LogValue::zero();
        }
        LogValue {
            rational_part: &self.rational_part * c,
            log_part: self.log_part.iter().map(|(p, v)| (p.clone(), v * c)).collect(),
        }
    }

    /// Exact sign via canonical form first, then interval evaluation of
    /// `rational_part·π + Σ c_p·log p` at escalating precision.
    pub fn sign(&self) -> Result<Ordering, LogValueError> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        // pure rational or pure single-signed log parts resolve instantly
        let mut terms = 16usize;
        while terms <= 1 << 14 {
            let (lo, hi) = self.pi_scaled_interval(terms);
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
            terms *= 2;
        }
        Err(LogValueError::SignUnresolved)
    }

    /// Absolute value, chosen by the resolved sign.
    pub fn abs(&self) -> Result<LogValue, LogValueError> {
        match self.sign()? {
            Ordering::Less => Ok(-self.clone()),
            _ => Ok(self.clone()),
        }
    }

    pub fn numeric_cmp(&self, other: &LogValue) -> Result<Ordering, LogValueError> {
        (self.clone() - other.clone()).sign()
    }

    /// Rational interval containing `value·π`.
    fn pi_scaled_interval(&self, terms: usize) -> (Rational, Rational) {
        let (mut lo, mut hi) = scale_interval(&self.rational_part, &pi_interval(terms));
        for (p, c) in &self.log_part {
            let (l, h) = scale_interval(c, &ln_interval(p, terms));
            lo += l;
            hi += h;
        }
        (lo, hi)
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = self.rational_part.to_f64().unwrap_or(f64::NAN);
        let pi = std::f64::consts::PI;
        for (p, c) in &self.log_part {
            v += c.to_f64().unwrap_or(f64::NAN) * p.to_f64().unwrap_or(f64::NAN).ln() / pi;
        }
        v
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        let mut log_part = self.log_part;
        for (p, c) in rhs.log_part {
            merge(&mut log_part, p, c);
        }
        LogValue { rational_part: self.rational_part + rhs.rational_part, log_part }
    }
}

impl Sub for LogValue {
    type Output = LogValue;
    fn sub(self, rhs: LogValue) -> LogValue {
        self + (-rhs)
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue {
            rational_part: -self.rational_part,
            log_part: self.log_part.into_iter().map(|(p, c)| (p, -c)).collect(),
        }
    }
}

impl fmt::Display for LogValue {
    /// Symbolic form, e.g. `0`, `3/2`, `(log 2)/π`, `1 + (log 3 - log 2)/π`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut wrote = false;
        if !self.rational_part.is_zero() {
            write!(f, "{}", self.rational_part)?;
            wrote = true;
        }
        if !self.log_part.is_empty() {
            if wrote {
                write!(f, " + ")?;
            }
            write!(f, "(")?;
            for (k, (p, c)) in self.log_part.iter().enumerate() {
                let neg = c.is_negative();
                let mag = c.abs();
                if k == 0 {
                    if neg {
                        write!(f, "-")?;
                    }
                } else if neg {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                if mag.is_one() {
                    write!(f, "log {p}")?;
                } else {
                    write!(f, "{mag} log {p}")?;
                }
            }
            write!(f, ")/π")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn merge(map: &mut BTreeMap<BigUint, Rational>, p: BigUint, c: Rational) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(p) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get() + &c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

fn scale_interval(c: &Rational, iv: &(Rational, Rational)) -> (Rational, Rational) {
    if c.is_negative() {
        (c * &iv.1, c * &iv.0)
    } else {
        (c * &iv.0, c * &iv.1)
    }
}

/// Machin's formula with explicit alternating-series bounds.
fn pi_interval(terms: usize) -> (Rational, Rational) {
    let (a_lo, a_hi) = atan_inv_interval(5, terms);
    let (b_lo, b_hi) = atan_inv_interval(239, terms);
    let sixteen = Rational::from_integer(BigInt::from(16));
    let four = Rational::from_integer(BigInt::from(4));
    (&sixteen * &a_lo - &four * &b_hi, &sixteen * &a_hi - &four * &b_lo)
}

/// `atan(1/x)` by its alternating series; the error is bounded by the first
/// omitted term.
fn atan_inv_interval(x: i64, terms: usize) -> (Rational, Rational) {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut sum = Rational::zero();
    let mut power = x.clone(); // x^{2k+1}
    let mut k = 0usize;
    loop {
        let term = Rational::new(BigInt::one(), &power * BigInt::from(2 * k as i64 + 1));
        if k >= terms {
            // alternating: truncation error within ±term
            return if k % 2 == 0 {
                (sum.clone(), sum + term)
            } else {
                (sum.clone() - term, sum)
            };
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power *= &x2;
        k += 1;
    }
}

/// `log p = k·log 2 + log(p / 2^k)` with `p/2^k ∈ [1,2)`, both pieces by the
/// `atanh` series with an explicit geometric tail bound.
fn ln_interval(p: &BigUint, terms: usize) -> (Rational, Rational) {
    let bits = p.bits() as i64 - 1; // 2^bits <= p < 2^{bits+1}
    let two_k = BigInt::from(BigUint::one() << (bits as u64));
    let reduced = Rational::new(BigInt::from(p.clone()), two_k);
    let (r_lo, r_hi) = ln_reduced_interval(&reduced, terms);
    if bits == 0 {
        return (r_lo, r_hi);
    }
    let k = Rational::from_integer(BigInt::from(bits));
    let (l2_lo, l2_hi) = ln_reduced_interval(&Rational::from_integer(BigInt::from(2)), terms);
    (&k * &l2_lo + r_lo, &k * &l2_hi + r_hi)
}

/// `log q` for `q ∈ [1,2]` via `2·atanh((q-1)/(q+1))`.
fn ln_reduced_interval(q: &Rational, terms: usize) -> (Rational, Rational) {
    let one = Rational::one();
    let x = (q - &one) / (q + &one); // in [0, 1/3]
    if x.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let x2 = &x * &x;
    let mut sum = Rational::zero();
    let mut power = x.clone();
    for k in 0..terms {
        sum += Rational::new(BigInt::one(), BigInt::from(2 * k as i64 + 1)) * &power;
        power *= &x2;
    }
    // tail: Σ_{k≥terms} x^{2k+1}/(2k+1) ≤ x^{2·terms+1} / (1 - x²)
    let tail = &power / (&one - &x2);
    let two = Rational::from_integer(BigInt::from(2));
    (&two * &sum, &two * (&sum + &tail))
}

/// Prime factorization: trial division for small factors, then Pollard's
/// rho with deterministic Miller-Rabin certification.
pub fn factorize(mut n: BigUint) -> Vec<(BigUint, u64)> {
    let mut out: BTreeMap<BigUint, u64> = BTreeMap::new();
    if n <= BigUint::one() {
        return Vec::new();
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        let p = BigUint::from(small);
        while (&n % &p).is_zero() {
            *out.entry(p.clone()).or_insert(0) += 1;
            n /= &p;
        }
    }
    let mut d = BigUint::from(37u64);
    let limit = BigUint::from(1_000_000u64);
    while &d * &d <= n && d <= limit {
        while (&n % &d).is_zero() {
            *out.entry(d.clone()).or_insert(0) += 1;
            n /= &d;
        }
        d += 2u64;
    }
    if n > BigUint::one() {
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if is_probable_prime(&m) {
                *out.entry(m).or_insert(0) += 1;
            } else {
                let f = pollard_rho(&m);
                stack.push(&m / &f);
                stack.push(f);
            }
        }
    }
    out.into_iter().collect()
}

fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u64);
    if n < &two {
        return false;
    }
    if n == &two {
        return true;
    }
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - BigUint::one();
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    // deterministic for n < 3.3·10^24
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u64);
    }
    let mut c = BigUint::one();
    loop {
        let mut x = BigUint::from(2u64);
        let mut y = BigUint::from(2u64);
        let mut d = BigUint::one();
        let f = |v: &BigUint, c: &BigUint| (v * v + c) % n;
        while d.is_one() {
            x = f(&x, &c);
            y = f(&f(&y, &c), &c);
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = gcd(diff, n.clone());
        }
        if !d.is_one() && &d != n {
            return d;
        }
        c += BigUint::one();
    }
}

fn gcd(a: BigUint, b: BigUint) -> BigUint {
    a.gcd(&b)
}

/// Exactness helper: the sign of a rational as a `BigInt` sign.
pub fn rational_sign(r: &Rational) -> Sign {
    r.numer().sign()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn log_abs_of_units_is_zero() {
        assert!(LogValue::log_abs(&g("1")).unwrap().is_zero());
        assert!(LogValue::log_abs(&g("i")).unwrap().is_zero());
        assert!(LogValue::log_abs(&g("-1")).unwrap().is_zero());
        assert!(LogValue::log_abs(&g("0")).is_err());
    }

    #[test]
    fn log_abs_of_two_has_coefficient_one_on_prime_two() {
        let v = LogValue::log_abs(&g("2")).unwrap();
        assert_eq!(v.coefficient_of(2), rational(1, 1));
        assert!(v.rational_part().is_zero());
        assert_eq!(format!("{v}"), "(log 2)/π");
    }

    #[test]
    fn additivity_under_multiplication() {
        let z = g("3/2+1/3i");
        let w = g("-7+2i");
        let zw = z.clone() * w.clone();
        let sum = LogValue::log_abs(&z).unwrap() + LogValue::log_abs(&w).unwrap();
        assert_eq!(LogValue::log_abs(&zw).unwrap(), sum);
    }

    #[test]
    fn half_integer_coefficients_appear_for_non_square_norms() {
        // |1+i|² = 2
        let v = LogValue::log_abs(&g("1+i")).unwrap();
        assert_eq!(v.coefficient_of(2), rational(1, 2));
        assert_eq!(format!("{v}"), "(1/2 log 2)/π");
    }

    #[test]
    fn sign_resolution_and_abs() {
        let two = LogValue::log_abs(&g("2")).unwrap();
        assert_eq!(two.sign().unwrap(), Ordering::Greater);
        let inv = LogValue::log_abs(&g("1/2")).unwrap();
        assert_eq!(inv.sign().unwrap(), Ordering::Less);
        assert_eq!(inv.abs().unwrap(), two);
        assert_eq!(LogValue::zero().sign().unwrap(), Ordering::Equal);
        // a close call: 8/3 · log 3 vs 3 · log 2 → log(3^{8/3}) vs log 8:
        // 3^{8/3} ≈ 18.72 > 8, so the difference is positive
        let a = LogValue::log_abs(&g("3")).unwrap().scale(&rational(8, 3));
        let b = LogValue::log_abs(&g("2")).unwrap().scale(&rational(3, 1));
        assert_eq!((a - b).sign().unwrap(), Ordering::Greater);
        // mixed rational and log parts: 1 - (log 2)/π < 1 but > 0
        let mixed = LogValue::from_rational(rational(1, 1)) - two.clone();
        assert_eq!(mixed.sign().unwrap(), Ordering::Greater);
        let mixed = LogValue::from_rational(rational(1, 5)) - two;
        assert_eq!(mixed.sign().unwrap(), Ordering::Less);
    }

    #[test]
    fn exact_equality_is_structural() {
        // log|3/10| = log 3 - log 2 - log 5
        let v = LogValue::log_abs(&g("3/10")).unwrap();
        let w = LogValue::log_abs(&g("3")).unwrap()
            - LogValue::log_abs(&g("2")).unwrap()
            - LogValue::log_abs(&g("5")).unwrap();
        assert_eq!(v, w);
        assert_eq!(format!("{v}"), "(-log 2 + log 3 - log 5)/π");
    }

    #[test]
    fn factorization_handles_larger_inputs() {
        let n = BigUint::from(600_851_475_143u64);
        let fs = factorize(n.clone());
        let mut prod = BigUint::one();
        for (p, e) in &fs {
            assert!(is_probable_prime(p));
            for _ in 0..*e {
                prod *= p;
            }
        }
        assert_eq!(prod, n);
    }

    #[test]
    fn numeric_value_matches_f64() {
        let v = LogValue::log_abs(&g("2")).unwrap();
        let expect = 2f64.ln() / std::f64::consts::PI;
        assert!((v.to_f64() - expect).abs() < 1e-15);
    }
}
