//! Per-class invariants `t_C = chi(I) n(I)` and the congruence checks for a
//! single prime `p = 3 (mod 4)`.
//!
//! For an ideal `I = (a + sqrt p, b)` and the fundamental unit `d + c sqrt p`,
//! the action of the unit on the basis `(a + sqrt p, b)` is the matrix
//! `[[d + ac, c(p - a^2)/b], [cb, d - ac]]`. `n(I)` is computed twice: from
//! the period of the negative continued fraction of `(a + sqrt p)/b`, and
//! from that matrix via Dedekind sums. The two must agree.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::classgroup::{
    chi_of_ideal, find_representative_in, h_minus_oracle, IdealRep, WideClassGroup,
};
use crate::contfrac::{m_from_period, neg_cf_with_limit, NegCF, DEFAULT_MAX_STEPS};
use crate::dedekind::{n_a, SL2Matrix};
use crate::error::{consistency, domain, Error, Result};
use crate::numeric::{QuadIrr, Rational};
use crate::pell::{
    check_prime_3_mod_4, pell_from_period, williams_unit_congruence_data, PellSolution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub max_cf_steps: usize,
    /// Starting bound for the odd-norm representative search.
    pub search_bound: i64,
    /// The search bound doubles on failure until it exceeds this.
    pub max_search_bound: i64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_cf_steps: DEFAULT_MAX_STEPS,
            search_bound: 50,
            max_search_bound: 50 << 10,
        }
    }
}

/// Unit data that may come from a cache instead of being recomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitData {
    pub pell: PellSolution,
    /// Minimal period of the negative continued fraction of `sqrt p`.
    pub period: Vec<BigInt>,
}

impl UnitData {
    pub fn compute(p: i64, max_cf_steps: usize) -> Result<Self> {
        check_prime_3_mod_4(p)?;
        let cf = neg_cf_with_limit(&QuadIrr::sqrt(p)?, max_cf_steps)?;
        let pell = pell_from_period(p, &cf.period)?;
        Ok(Self {
            pell,
            period: cf.period,
        })
    }

    /// Checks a cached record: the period must reproduce the stored unit.
    pub fn validate(&self) -> Result<()> {
        if self.pell.norm() != BigInt::from(1) {
            return Err(consistency(format!("cached unit for {} has norm != 1", self.pell.p)));
        }
        let recomputed = pell_from_period(self.pell.p, &self.period)?;
        if recomputed != self.pell {
            return Err(consistency(format!(
                "cached period for {} does not match cached unit",
                self.pell.p
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTerm {
    pub rep: IdealRep,
    pub chi: i8,
    pub n_cf: i64,
    pub n_dedekind: i64,
    pub t: i64,
    pub cf: NegCF,
}

/// Matrix of multiplication by `d + c sqrt p` on the basis `(a + sqrt p, b)`.
pub fn matrix_for_ideal(rep: &IdealRep, sol: &PellSolution) -> Result<SL2Matrix> {
    if rep.p != sol.p {
        return Err(domain(format!("{rep} and unit for p = {} differ", sol.p)));
    }
    let (a, b, p) = (BigInt::from(rep.a), BigInt::from(rep.b), BigInt::from(rep.p));
    let (d, c) = (&sol.d, &sol.c);
    let (top_right, rem) = (c * (&p - &a * &a)).div_rem(&b);
    if rem != BigInt::from(0) {
        return Err(consistency(format!("{rep}: b does not divide c(p - a^2)")));
    }
    let m = SL2Matrix::new(d + &a * c, top_right, c * &b, d - &a * c)
        .map_err(|_| consistency(format!("matrix for {rep} is not unimodular")))?;
    if m.trace() != BigInt::from(2) * d {
        return Err(consistency(format!("matrix for {rep} has trace != 2d")));
    }
    Ok(m)
}

fn to_i64(n: &BigInt) -> Result<i64> {
    n.to_i64()
        .ok_or_else(|| consistency(format!("n-value {n} does not fit in 64 bits")))
}

/// `n(I)` by both routes, with the continued fraction of `(a + sqrt p)/b`.
pub fn n_of_ideal_with(
    rep: &IdealRep,
    sol: &PellSolution,
    max_cf_steps: usize,
) -> Result<(i64, NegCF)> {
    let w = QuadIrr::from_i64(rep.a, rep.b, rep.p)?;
    let cf = neg_cf_with_limit(&w, max_cf_steps)?;
    let n_cf = to_i64(&cf.n())?;
    let n_ded = to_i64(&n_a(&matrix_for_ideal(rep, sol)?)?)?;
    if n_cf != n_ded {
        return Err(consistency(format!(
            "{rep}: n from continued fraction {n_cf} != n from Dedekind sums {n_ded}"
        )));
    }
    Ok((n_cf, cf))
}

pub fn n_of_ideal(rep: &IdealRep, sol: &PellSolution) -> Result<i64> {
    Ok(n_of_ideal_with(rep, sol, DEFAULT_MAX_STEPS)?.0)
}

pub fn t_of_class_with(rep: &IdealRep, sol: &PellSolution, max_cf_steps: usize) -> Result<ClassTerm> {
    let (n, cf) = n_of_ideal_with(rep, sol, max_cf_steps)?;
    let chi = chi_of_ideal(rep);
    Ok(ClassTerm {
        rep: *rep,
        chi,
        n_cf: n,
        n_dedekind: n,
        t: i64::from(chi) * n,
        cf,
    })
}

pub fn t_of_class(rep: &IdealRep, sol: &PellSolution) -> Result<ClassTerm> {
    t_of_class_with(rep, sol, DEFAULT_MAX_STEPS)
}

fn class_terms(group: &WideClassGroup, sol: &PellSolution, max_cf_steps: usize) -> Result<Vec<ClassTerm>> {
    group
        .representatives()
        .iter()
        .map(|rep| t_of_class_with(rep, sol, max_cf_steps))
        .collect()
}

/// `h(-p) = (1/3) sum_C t_C`, checked against the form-counting oracle.
pub fn zagier_h_minus(p: i64) -> Result<i64> {
    let unit = UnitData::compute(p, DEFAULT_MAX_STEPS)?;
    let group = WideClassGroup::new(p)?;
    let terms = class_terms(&group, &unit.pell, DEFAULT_MAX_STEPS)?;
    let h = zagier_sum(p, &terms)?;
    let oracle = h_minus_oracle(p)?;
    if h != oracle {
        return Err(Error::Verification(format!(
            "p = {p}: (1/3) sum t_C = {h} but h(-p) = {oracle}"
        )));
    }
    Ok(h)
}

fn zagier_sum(p: i64, terms: &[ClassTerm]) -> Result<i64> {
    let total: i64 = terms.iter().map(|t| t.t).sum();
    if total % 3 != 0 {
        return Err(Error::Verification(format!("p = {p}: sum t_C = {total} is not divisible by 3")));
    }
    Ok(total / 3)
}

/// `h(p) h(-p) - m` is `0 (mod 16)` when `h(p) = +-1 (mod 8)` and `8 (mod 16)`
/// when `h(p) = +-3 (mod 8)`.
pub fn guy_check(h_plus: i64, h_minus: i64, m: i64) -> bool {
    let r = (h_plus * h_minus - m).rem_euclid(16);
    match h_plus.rem_euclid(8) {
        1 | 7 => r == 0,
        3 | 5 => r == 8,
        _ => false,
    }
}

/// `((p-1)/2)! mod p`, which is `1` or `p - 1` for `p = 3 (mod 4)`.
pub fn half_factorial_mod(p: i64) -> i64 {
    let p128 = i128::from(p);
    let mut acc: i128 = 1;
    for k in 2..=((p - 1) / 2) {
        acc = acc * i128::from(k) % p128;
    }
    acc as i64
}

/// `h(-p) = 1 (mod 4)` iff `((p-1)/2)! = -1 (mod p)`, and `3 (mod 4)` iff it is `1`.
pub fn mordell_check(p: i64, h_minus: i64) -> Result<bool> {
    if p <= 3 {
        return Err(domain("Mordell's congruence needs p > 3"));
    }
    let w = half_factorial_mod(p);
    let expected = if w == p - 1 {
        1
    } else if w == 1 {
        3
    } else {
        return Err(consistency(format!("((p-1)/2)! = {w} (mod {p}) is not +-1")));
    };
    Ok(h_minus.rem_euclid(4) == expected)
}

/// The two unit congruences `m = U + 2 (mod 4)` and
/// `m = 2 + pU - 2 (T/U) (mod 8)`.
pub fn williams_check(m: i64, sol: &PellSolution) -> (bool, bool) {
    let w = williams_unit_congruence_data(sol);
    (m.rem_euclid(4) == w.mod4, m.rem_euclid(8) == w.mod8)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Checks {
    /// `h(-p) = h(p) m(p) (mod 16)`.
    pub mod16: bool,
    pub guy: bool,
    /// `3 h(-p) = sum t_C` exactly, with `h(-p)` from the form count.
    pub thmz2: bool,
    /// `h(-p) = m(p)` when `h(p) = 1`; vacuously true otherwise.
    pub thmz: bool,
    /// The principal class has `chi = 1` and `t = 3 m(p)`.
    pub identity: bool,
    /// `t_C = t_{C^-1}` for every class.
    pub inverses: bool,
    /// All `t_C` agree mod 8.
    pub mod8: bool,
    /// `m = U + 2 (mod 4)` and `h(-p) = h(p)(U + 2) (mod 4)`.
    pub williams4: bool,
    pub williams8: bool,
    pub mordell: bool,
    /// `h(p)` and `h(-p)` are odd.
    pub parity: bool,
    /// `d` even, `c` odd, and `2(d - c sqrt p)` is a square in `Z[sqrt p]`.
    pub pell_units: bool,
    /// Odd-norm, `chi = 1` representatives give the same `t_C`.
    pub rep_independence: bool,
}

impl Checks {
    pub fn named(&self) -> [(&'static str, bool); 13] {
        [
            ("mod16", self.mod16),
            ("guy", self.guy),
            ("thmz2", self.thmz2),
            ("thmz", self.thmz),
            ("identity", self.identity),
            ("inverses", self.inverses),
            ("mod8", self.mod8),
            ("williams4", self.williams4),
            ("williams8", self.williams8),
            ("mordell", self.mordell),
            ("parity", self.parity),
            ("pell_units", self.pell_units),
            ("rep_independence", self.rep_independence),
        ]
    }

    pub fn all(&self) -> bool {
        self.named().iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.named()
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| *name)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct PrimeReport {
    pub p: i64,
    pub m: Rational,
    pub unit: UnitData,
    pub h_plus: i64,
    pub h_minus_oracle: i64,
    pub h_minus_zagier: i64,
    pub elementary_divisors: Vec<u64>,
    /// One term per class, in class-group order (principal class first).
    pub classes: Vec<ClassTerm>,
    /// `inverse_of[k]` is the index of the class inverse to class `k`.
    pub inverse_of: Vec<usize>,
    /// Odd-norm, `chi = 1` representative found for each class.
    pub odd_representatives: Vec<IdealRep>,
    pub checks: Checks,
    pub elapsed: Duration,
}

impl PrimeReport {
    pub fn m_integer(&self) -> i64 {
        self.m.to_integer().to_i64().unwrap_or(i64::MAX)
    }

    pub fn all_ok(&self) -> bool {
        self.checks.all()
    }

    /// `t` values sorted by `|t|` descending, then `t` descending.
    pub fn t_multiset(&self) -> Vec<i64> {
        let mut ts: Vec<i64> = self.classes.iter().map(|c| c.t).collect();
        ts.sort_by_key(|&t| (std::cmp::Reverse(t.abs()), std::cmp::Reverse(t)));
        ts
    }
}

pub fn verify_main(p: i64) -> Result<PrimeReport> {
    verify_with(p, &VerifyOptions::default(), None)
}

/// Full verification for one prime. Failed congruences are reported in
/// [`PrimeReport::checks`]; broken internal identities are errors.
pub fn verify_with(p: i64, opts: &VerifyOptions, cached: Option<UnitData>) -> Result<PrimeReport> {
    let start = Instant::now();
    check_prime_3_mod_4(p)?;
    if p == 3 {
        return Err(domain("p = 3 is outside the verified domain (m(3) = 1/3)"));
    }
    let unit = match cached {
        Some(u) if u.pell.p == p => {
            u.validate()?;
            u
        }
        Some(u) => {
            return Err(domain(format!("cached unit for {} supplied for p = {p}", u.pell.p)))
        }
        None => UnitData::compute(p, opts.max_cf_steps)?,
    };
    let sol = &unit.pell;
    let m = m_from_period(&unit.period);
    if !m.is_integer() {
        return Err(consistency(format!("m({p}) = {m} is not an integer")));
    }
    let m_int = m
        .to_integer()
        .to_i64()
        .ok_or_else(|| consistency(format!("m({p}) does not fit in 64 bits")))?;

    let group = WideClassGroup::new(p)?;
    let h_plus = group.order() as i64;
    let h_minus = h_minus_oracle(p)?;
    let classes = class_terms(&group, sol, opts.max_cf_steps)?;
    let total: i64 = classes.iter().map(|c| c.t).sum();
    let h_minus_zagier = total.div_euclid(3);

    let inverse_of = (0..classes.len())
        .map(|k| group.inverse(k))
        .collect::<Result<Vec<_>>>()?;

    let mut odd_representatives = Vec::with_capacity(classes.len());
    let mut rep_independence = true;
    for term in &classes {
        let rep = find_representative_in(
            &group,
            &term.rep,
            opts.search_bound,
            opts.max_search_bound,
        )?;
        let alt = t_of_class_with(&rep, sol, opts.max_cf_steps)?;
        rep_independence &= alt.chi == 1 && rep.b % 4 == 1 && alt.t == term.t;
        odd_representatives.push(rep);
    }

    let (w4, w8) = williams_check(m_int, sol);
    let unit_mod4 = williams_unit_congruence_data(sol).mod4;
    let t0 = classes[0].t;
    let checks = Checks {
        mod16: (h_minus - h_plus * m_int).rem_euclid(16) == 0,
        guy: guy_check(h_plus, h_minus, m_int),
        thmz2: total == 3 * h_minus && h_minus_zagier == h_minus,
        thmz: h_plus != 1 || h_minus == m_int,
        identity: classes[0].rep == IdealRep::unit(p) && classes[0].chi == 1 && t0 == 3 * m_int,
        inverses: inverse_of
            .iter()
            .enumerate()
            .all(|(k, &j)| classes[k].t == classes[j].t),
        mod8: classes.iter().all(|c| (c.t - t0).rem_euclid(8) == 0),
        williams4: w4 && (h_minus - h_plus * unit_mod4).rem_euclid(4) == 0,
        williams8: w8,
        mordell: mordell_check(p, h_minus)?,
        parity: h_plus % 2 == 1 && h_minus % 2 == 1,
        pell_units: sol.d.is_even() && sol.c.is_odd() && sol.half_unit_root().is_some(),
        rep_independence,
    };

    Ok(PrimeReport {
        p,
        m,
        unit,
        h_plus,
        h_minus_oracle: h_minus,
        h_minus_zagier,
        elementary_divisors: group.elementary_divisors()?,
        classes,
        inverse_of,
        odd_representatives,
        checks,
        elapsed: start.elapsed(),
    })
}
