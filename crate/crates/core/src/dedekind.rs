//! Dedekind sums `s(h, k) = sum_{n=1}^{k} ((hn/k)) ((n/k))` and the integer
//! invariant `n_A = (a + d)/c - 3 - 12 s(d, c)` of a hyperbolic matrix.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{consistency, domain, Result};
use crate::numeric::Rational;

/// An integral 2x2 matrix `[[a, b], [c, d]]` of determinant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SL2Matrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl SL2Matrix {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let m = Self { a, b, c, d };
        if !m.det().is_one() {
            return Err(domain(format!("{m} has determinant {}", m.det())));
        }
        Ok(m)
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub(crate) fn new_unchecked(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new_unchecked(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new_unchecked(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn inverse(&self) -> Self {
        Self::new_unchecked(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > BigInt::from(2)
    }
}

impl fmt::Display for SL2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// The sawtooth `((x))`: `x - floor(x) - 1/2`, or 0 at integers.
pub fn sawtooth(x: &Rational) -> Rational {
    if x.is_integer() {
        Rational::zero()
    } else {
        x - x.floor() - Rational::new(BigInt::one(), BigInt::from(2))
    }
}

fn check_args(h: &BigInt, k: &BigInt) -> Result<()> {
    if !k.is_positive() {
        return Err(domain(format!("Dedekind sum modulus {k} must be positive")));
    }
    if !h.gcd(k).is_one() {
        return Err(domain(format!("s({h}, {k}): arguments are not coprime")));
    }
    Ok(())
}

/// Direct O(k) evaluation of the defining sum. Intended as a test oracle.
pub fn dedekind_sum_naive(h: &BigInt, k: &BigInt) -> Result<Rational> {
    check_args(h, k)?;
    let mut total = Rational::zero();
    let mut n = BigInt::one();
    while &n <= k {
        let x = Rational::new(h * &n, k.clone());
        let y = Rational::new(n.clone(), k.clone());
        total += sawtooth(&x) * sawtooth(&y);
        n += 1;
    }
    Ok(total)
}

/// `s(h, k)` in O(log k) steps using periodicity and the reciprocity law
/// `s(h,k) + s(k,h) = -1/4 + (h/k + k/h + 1/(hk)) / 12`.
pub fn dedekind_sum(h: &BigInt, k: &BigInt) -> Result<Rational> {
    check_args(h, k)?;
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    let mut h = h.mod_floor(k);
    let mut k = k.clone();
    let mut acc = Rational::zero();
    let mut negate = false;
    while !k.is_one() {
        let term = Rational::new(&h * &h + &k * &k + 1u32, BigInt::from(12) * &h * &k) - &quarter;
        if negate {
            acc -= term;
        } else {
            acc += term;
        }
        negate = !negate;
        let r = k.mod_floor(&h);
        k = h;
        h = r;
    }
    Ok(acc)
}

/// `n_A = (a + d)/c - 3 - 12 s(d, c)`; the result is always an integer.
pub fn n_a(m: &SL2Matrix) -> Result<BigInt> {
    if !m.det().is_one() {
        return Err(domain(format!("{m} is not in SL(2, Z)")));
    }
    if !m.c.is_positive() {
        return Err(domain(format!("{m} needs a positive lower-left entry")));
    }
    if !m.is_hyperbolic() {
        return Err(domain(format!("{m} is not hyperbolic")));
    }
    let s = dedekind_sum(&m.d, &m.c)?;
    let value = Rational::new(m.trace(), m.c.clone())
        - Rational::from_integer(BigInt::from(3))
        - Rational::from_integer(BigInt::from(12)) * s;
    if !value.is_integer() {
        return Err(consistency(format!("n_A of {m} is not an integer: {value}")));
    }
    Ok(value.to_integer())
}

/// `(-1)^((1/2)((c-1)/2 - 6c s(d,c)))` for odd positive `c`, which equals
/// the Jacobi symbol `(d/c)`. Errors if the exponent is not an integer.
pub fn dedekind_jacobi_sign(d: &BigInt, c: &BigInt) -> Result<i8> {
    if !c.is_positive() || c.is_even() {
        return Err(domain(format!("modulus {c} must be odd and positive")));
    }
    let s = dedekind_sum(d, c)?;
    let six_c = Rational::from_integer(BigInt::from(6) * c);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let exponent = half * (Rational::from_integer((c - 1u32) / 2u32) - six_c * s);
    if !exponent.is_integer() {
        return Err(consistency(format!(
            "parity exponent for ({d}/{c}) is not an integer: {exponent}"
        )));
    }
    Ok(if exponent.to_integer().is_even() { 1 } else { -1 })
}
