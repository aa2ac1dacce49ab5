//! Negative (Hirzebruch-Jung) continued fractions
//! `x = b0 - 1/(b1 - 1/(b2 - ...))` of quadratic irrationals.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::dedekind::SL2Matrix;
use crate::error::{Error, Result};
use crate::numeric::{QuadIrr, Rational};

/// Default cap on the number of expansion states visited before giving up.
pub const DEFAULT_MAX_STEPS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegCF {
    pub head: BigInt,
    pub preperiod: Vec<BigInt>,
    /// Minimal period; every entry is at least 2.
    pub period: Vec<BigInt>,
}

impl NegCF {
    /// `sum (b_i - 3)` over the period.
    pub fn n(&self) -> BigInt {
        n_from_period(&self.period)
    }

    /// Product of `[[b, -1], [1, 0]]` over the period.
    pub fn period_matrix(&self) -> SL2Matrix {
        period_matrix(&self.period)
    }

    /// Partial quotients after the head, unrolled through the period.
    pub fn quotients(&self) -> impl Iterator<Item = &BigInt> + '_ {
        self.preperiod.iter().chain(self.period.iter().cycle())
    }

    /// Value of the truncated expansion `b0 - 1/(b1 - ... - 1/b_k)`.
    pub fn convergent(&self, k: usize) -> Rational {
        let tail: Vec<&BigInt> = self.quotients().take(k).collect();
        let mut acc: Option<Rational> = None;
        for b in tail.into_iter().rev() {
            let b = Rational::from_integer(b.clone());
            acc = Some(match acc {
                None => b,
                Some(v) => b - v.recip(),
            });
        }
        let head = Rational::from_integer(self.head.clone());
        match acc {
            None => head,
            Some(v) => head - v.recip(),
        }
    }
}

impl fmt::Display for NegCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; ", self.head)?;
        for b in &self.preperiod {
            write!(f, "{b},")?;
        }
        write!(f, "(")?;
        for (i, b) in self.period.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")]")
    }
}

/// Advances `x -> 1/(b - x)` in place of `(P, Q)`; `D` is unchanged.
fn step(p: &BigInt, q: &BigInt, d: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let p1 = b * q - p;
    let q1 = (&p1 * &p1 - d) / q;
    (p1, q1)
}

pub fn neg_cf(x: &QuadIrr) -> Result<NegCF> {
    neg_cf_with_limit(x, DEFAULT_MAX_STEPS)
}

/// Expands `x`, detecting the period at the first repeated `(P, Q)` state.
pub fn neg_cf_with_limit(x: &QuadIrr, max_steps: usize) -> Result<NegCF> {
    let d = x.d().clone();
    let head = x.ceil();
    let (mut p, mut q) = step(x.p(), x.q(), &d, &head);
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut quotients = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let period = quotients.split_off(start);
            return Ok(NegCF {
                head,
                preperiod: quotients,
                period,
            });
        }
        if quotients.len() >= max_steps {
            return Err(Error::StepLimit(max_steps));
        }
        let state = QuadIrr::from_parts_unchecked(p.clone(), q.clone(), d.clone());
        let b = state.ceil();
        seen.insert((p.clone(), q.clone()), quotients.len());
        let next = step(&p, &q, &d, &b);
        quotients.push(b);
        p = next.0;
        q = next.1;
    }
}

pub fn n_from_period(period: &[BigInt]) -> BigInt {
    period.iter().map(|b| b - 3).sum()
}

pub fn period_matrix(period: &[BigInt]) -> SL2Matrix {
    period.iter().fold(SL2Matrix::identity(), |acc, b| {
        acc.mul(&SL2Matrix::new_unchecked(
            b.clone(),
            -BigInt::one(),
            BigInt::one(),
            BigInt::zero(),
        ))
    })
}

/// `m(p) = (1/3) sum (b_i - 3)` over the period of `sqrt(p)`.
pub fn m_of_p(p: i64) -> Result<Rational> {
    Ok(m_from_period(&neg_cf(&QuadIrr::sqrt(p)?)?.period))
}

pub fn m_from_period(period: &[BigInt]) -> Rational {
    Rational::new(n_from_period(period), BigInt::from(3))
}

/// Returns `m` as an integer when it is one.
pub fn m_integral(m: &Rational) -> Option<i64> {
    if m.is_integer() {
        m.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn expand(p: i64, q: i64, d: i64) -> NegCF {
        neg_cf(&QuadIrr::from_i64(p, q, d).unwrap()).unwrap()
    }

    /// Independent floating-point iteration of b = ceil(x), x <- 1/(b - x).
    fn float_quotients(mut x: f64, k: usize) -> Vec<i64> {
        let mut out = Vec::new();
        for _ in 0..k {
            let b = x.ceil();
            out.push(b as i64);
            x = 1.0 / (b - x);
        }
        out
    }

    #[test]
    fn sqrt_79() {
        let cf = expand(0, 1, 79);
        assert_eq!(cf.head, BigInt::from(9));
        assert!(cf.preperiod.is_empty());
        assert_eq!(cf.period, ints(&[9, 18]));
        assert_eq!(cf.to_string(), "[9; (9,18)]");
    }

    #[test]
    fn ideal_fixed_points() {
        let cf = expand(1, 3, 79);
        assert_eq!(cf.head, BigInt::from(4));
        assert_eq!(cf.period, ints(&[2, 2, 4, 3, 7]));
        assert_eq!(cf.n(), BigInt::from(3));

        let cf = expand(13, 18, 439);
        assert_eq!(cf.head, BigInt::from(2));
        assert_eq!(cf.period, ints(&[9, 5, 5, 2, 3]));
        assert_eq!(cf.n(), BigInt::from(9));

        let cf = expand(7, 13, 439);
        assert_eq!(cf.head, BigInt::from(3));
        assert_eq!(
            cf.period,
            ints(&[2, 2, 2, 2, 2, 3, 3, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 5])
        );
        assert_eq!(cf.n(), BigInt::from(-15));

        // The conjugate ideal (-7 + sqrt 439, 13) = (6 + sqrt 439, 13) has the
        // reversed cycle.
        let cf = expand(6, 13, 439);
        assert_eq!(cf.head, BigInt::from(3));
        assert_eq!(
            cf.period,
            ints(&[2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 3, 3, 2, 2, 2, 2, 2, 5])
        );
    }

    #[test]
    fn sqrt_7_matches_float_iteration() {
        let cf = expand(0, 1, 7);
        assert_eq!(cf.head, BigInt::from(3));
        assert_eq!(cf.period, ints(&[3, 6]));
        assert_eq!(float_quotients(7f64.sqrt(), 5), vec![3, 3, 6, 3, 6]);
    }

    #[test]
    fn sqrt_11() {
        assert_eq!(expand(0, 1, 11).period, ints(&[2, 2, 8]));
    }

    #[test]
    fn n_from_period_examples() {
        assert_eq!(n_from_period(&ints(&[9, 18])), BigInt::from(21));
        assert_eq!(n_from_period(&ints(&[2, 2, 4, 3, 7])), BigInt::from(3));
        assert_eq!(n_from_period(&ints(&[3, 3, 3, 3])), BigInt::zero());
    }

    #[test]
    fn m_values() {
        for (p, m) in [(7, 1), (79, 7), (439, 19), (43063, 193)] {
            let got = m_of_p(p).unwrap();
            assert_eq!(m_integral(&got), Some(m), "p = {p}");
        }
        let m3 = m_of_p(3).unwrap();
        assert_eq!(m3, Rational::new(BigInt::one(), BigInt::from(3)));
        assert_eq!(m_integral(&m3), None);
    }

    #[test]
    fn preperiod_is_reported() {
        // (1 + sqrt 7)/(-3): value ~ -1.215, not reduced, so a preperiod appears.
        let x = QuadIrr::from_i64(1, -3, 7).unwrap();
        let cf = neg_cf(&x).unwrap();
        let want = float_quotients(x.to_f64(), 12);
        let got: Vec<i64> = std::iter::once(&cf.head)
            .chain(cf.quotients())
            .take(12)
            .map(|b| b.to_i64().unwrap())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn step_limit_is_an_error() {
        let x = QuadIrr::from_i64(7, 13, 439).unwrap();
        assert_eq!(neg_cf_with_limit(&x, 5), Err(Error::StepLimit(5)));
    }

    #[test]
    fn period_matrix_of_sqrt_79() {
        let m = expand(0, 1, 79).period_matrix();
        // [[9,-1],[1,0]] * [[18,-1],[1,0]] = [[161,-9],[18,-1]]
        assert_eq!(m.trace(), BigInt::from(160));
        assert_eq!(m.det(), BigInt::one());
    }

    #[test]
    fn convergents_approach_value() {
        let x = QuadIrr::from_i64(7, 13, 439).unwrap();
        let cf = neg_cf(&x).unwrap();
        let target = x.to_f64();
        let mut last = f64::INFINITY;
        for k in 1..30 {
            let v = cf.convergent(k);
            let err = (v.to_f64().unwrap() - target).abs();
            assert!(err <= last, "k = {k}");
            last = err;
        }
        assert!(last < 1e-9);
    }
}
