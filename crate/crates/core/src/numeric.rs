//! Exact integer helpers shared by every other module: integer square
//! roots, the Kronecker symbol, and quadratic irrationals `(P + sqrt(D)) / Q`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};

/// Exact rationals, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// `floor(sqrt(n))`.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return Err(domain(format!("isqrt of negative number {n}")));
    }
    Ok(n.sqrt())
}

pub fn isqrt_i64(n: i64) -> Result<i64> {
    if n < 0 {
        return Err(domain(format!("isqrt of negative number {n}")));
    }
    Ok((n as u64).sqrt() as i64)
}

/// Returns the square root of `n` if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn is_square(n: &BigInt) -> bool {
    exact_sqrt(n).is_some()
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut f = 5u64;
    while f.saturating_mul(f) <= n {
        if n.is_multiple_of(f) || n.is_multiple_of(f + 2) {
            return false;
        }
        f += 6;
    }
    true
}

/// The Kronecker symbol `(a / n)`, defined for every pair of integers.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut sign = 1i8;
    let mut n = n.clone();
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            sign = -sign;
        }
    }
    let twos = n.trailing_zeros().unwrap_or(0);
    if twos > 0 {
        if a.is_even() {
            return 0;
        }
        // (a/2) = (-1)^((a^2-1)/8)
        if twos % 2 == 1 {
            let r8 = a.mod_floor(&BigInt::from(8)).to_u8().unwrap_or(0);
            if r8 == 3 || r8 == 5 {
                sign = -sign;
            }
        }
        n >>= twos;
    }
    sign * jacobi_odd(a.mod_floor(&n), n)
}

pub fn kronecker_i64(a: i64, n: i64) -> i8 {
    kronecker(&BigInt::from(a), &BigInt::from(n))
}

/// Jacobi symbol for `0 <= a < n`, `n` odd and positive.
fn jacobi_odd(mut a: BigInt, mut n: BigInt) -> i8 {
    let mut sign = 1i8;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        let twos = a.trailing_zeros().unwrap_or(0);
        if twos > 0 {
            a >>= twos;
            if twos % 2 == 1 {
                let r8 = n.mod_floor(&eight);
                if r8 == three || r8 == five {
                    sign = -sign;
                }
            }
        }
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        sign
    } else {
        0
    }
}

/// 2-adic valuation of a nonzero integer.
pub fn two_adic_valuation(n: i64) -> u32 {
    debug_assert!(n != 0);
    n.trailing_zeros()
}

/// A real quadratic irrational `(P + sqrt(D)) / Q`.
///
/// `Q` divides `P^2 - D`, which keeps every continued fraction step in the
/// integers. `Q` may be negative; `D` is positive and never a perfect square.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    p: BigInt,
    q: BigInt,
    d: BigInt,
}

impl QuadIrr {
    /// Builds `(p + sqrt(d)) / q`, rescaling numerator and denominator by
    /// `|q|` when `q` does not already divide `p^2 - d`.
    pub fn new(p: BigInt, q: BigInt, d: BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(domain("quadratic irrational with zero denominator"));
        }
        if !d.is_positive() {
            return Err(domain(format!("radicand {d} must be positive")));
        }
        if is_square(&d) {
            return Err(domain(format!("radicand {d} is a perfect square")));
        }
        if (&p * &p - &d).is_multiple_of(&q) {
            return Ok(Self { p, q, d });
        }
        let scale = q.abs();
        Ok(Self {
            p: p * &scale,
            d: d * &q * &q,
            q: q * scale,
        })
    }

    pub fn sqrt(n: i64) -> Result<Self> {
        Self::new(BigInt::zero(), BigInt::one(), BigInt::from(n))
    }

    pub fn from_i64(p: i64, q: i64, d: i64) -> Result<Self> {
        Self::new(BigInt::from(p), BigInt::from(q), BigInt::from(d))
    }

    /// Internal constructor for states already known to be normalized.
    pub(crate) fn from_parts_unchecked(p: BigInt, q: BigInt, d: BigInt) -> Self {
        debug_assert!((&p * &p - &d).is_multiple_of(&q));
        Self { p, q, d }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// The smallest integer `>= self`.
    pub fn ceil(&self) -> BigInt {
        let root = self.d.sqrt();
        if self.q.is_positive() {
            // The value is irrational, so ceil = floor + 1, and
            // floor((P + sqrt D)/Q) = floor((P + isqrt D)/Q) for Q > 0.
            (&self.p + root).div_floor(&self.q) + 1
        } else {
            let q = -&self.q;
            -((&self.p + root).div_floor(&q))
        }
    }

    /// Approximate value, for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        (p + d.sqrt()) / q
    }
}

impl fmt::Display for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + sqrt({}))/{}", self.p, self.d, self.q)
    }
}

/// Exact ceiling of a quadratic irrational.
pub fn ceil_of(x: &QuadIrr) -> BigInt {
    x.ceil()
}
