//! Minimal solution of `d^2 - p c^2 = 1`, i.e. the totally positive
//! fundamental unit `d + c sqrt(p)` of `Q(sqrt p)` for primes `p = 3 mod 4`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::contfrac::{neg_cf, period_matrix};
use crate::error::{consistency, domain, Result};
use crate::numeric::{exact_sqrt, is_prime, kronecker, QuadIrr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    pub p: i64,
    pub d: BigInt,
    pub c: BigInt,
}

impl PellSolution {
    /// Builds a solution after checking `d^2 - p c^2 = 1` with `d, c > 0`.
    pub fn new(p: i64, d: BigInt, c: BigInt) -> Result<Self> {
        let sol = Self { p, d, c };
        if !sol.d.is_positive() || !sol.c.is_positive() || !sol.norm().is_one() {
            return Err(consistency(format!(
                "({}, {}) does not solve d^2 - {p} c^2 = 1",
                sol.d, sol.c
            )));
        }
        Ok(sol)
    }

    pub fn norm(&self) -> BigInt {
        &self.d * &self.d - BigInt::from(self.p) * &self.c * &self.c
    }

    /// Integers `R, S > 0` with `2(d - c sqrt p) = (R - S sqrt p)^2`,
    /// i.e. `R^2 + p S^2 = 2d` and `RS = c`.
    ///
    /// Taking norms gives `R^2 - p S^2 = +-2`, so `R^2` is `d + 1` or `d - 1`.
    pub fn half_unit_root(&self) -> Option<(BigInt, BigInt)> {
        let p = BigInt::from(self.p);
        for r2 in [&self.d + 1u32, &self.d - 1u32] {
            let Some(r) = exact_sqrt(&r2) else { continue };
            if r.is_zero() || !self.c.is_multiple_of(&r) {
                continue;
            }
            let s = &self.c / &r;
            if &r * &r + &p * &s * &s == BigInt::from(2) * &self.d {
                return Some((r, s));
            }
        }
        None
    }

    pub fn d_digits(&self) -> usize {
        self.d.to_str_radix(10).len()
    }

    pub fn c_digits(&self) -> usize {
        self.c.to_str_radix(10).len()
    }
}

/// Rejects anything that is not a prime congruent to 3 mod 4.
pub fn check_prime_3_mod_4(p: i64) -> Result<()> {
    if p <= 0 || !is_prime(p as u64) {
        return Err(domain(format!("{p} is not prime")));
    }
    if p % 4 != 3 {
        return Err(domain(format!("p = {p} is not 3 (mod 4)")));
    }
    Ok(())
}

/// Fundamental solution read off the negative continued fraction of `sqrt p`:
/// the period matrix product has trace `2d`.
pub fn fundamental_pell(p: i64) -> Result<PellSolution> {
    check_prime_3_mod_4(p)?;
    let cf = neg_cf(&QuadIrr::sqrt(p)?)?;
    pell_from_period(p, &cf.period)
}

pub fn pell_from_period(p: i64, period: &[BigInt]) -> Result<PellSolution> {
    let trace = period_matrix(period).trace();
    if trace.is_odd() {
        return Err(consistency(format!("period matrix of sqrt({p}) has odd trace {trace}")));
    }
    let d: BigInt = trace >> 1u32;
    let (c2, rem) = (&d * &d - BigInt::one()).div_rem(&BigInt::from(p));
    if !rem.is_zero() {
        return Err(consistency(format!("d = {d} does not satisfy p | d^2 - 1 for p = {p}")));
    }
    let c = exact_sqrt(&c2)
        .ok_or_else(|| consistency(format!("(d^2 - 1)/{p} is not a square for d = {d}")))?;
    PellSolution::new(p, d, c)
}

/// Smallest solution with `c <= max_c`, by direct search. Test oracle.
pub fn pell_brute_force(p: i64, max_c: u64) -> Option<PellSolution> {
    let pb = BigInt::from(p);
    (1..=max_c).find_map(|c| {
        let c = BigInt::from(c);
        let d2 = &pb * &c * &c + 1u32;
        exact_sqrt(&d2).map(|d| PellSolution { p, d, c })
    })
}

/// The right-hand sides of the unit congruences
/// `m = U + 2 (mod 4)` and `m = 2 + pU - 2 (T/U) (mod 8)` with `T = d`, `U = c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WilliamsData {
    pub mod4: i64,
    pub mod8: i64,
}

pub fn williams_unit_congruence_data(sol: &PellSolution) -> WilliamsData {
    let u = &sol.c;
    let t = &sol.d;
    let mod4 = (u + 2u32).mod_floor(&BigInt::from(4));
    let jac = i64::from(kronecker(t, u));
    let mod8 = (BigInt::from(2) + BigInt::from(sol.p) * u - 2 * jac).mod_floor(&BigInt::from(8));
    WilliamsData {
        mod4: small(&mod4),
        mod8: small(&mod8),
    }
}

fn small(n: &BigInt) -> i64 {
    i64::try_from(n).expect("residue fits in i64")
}
