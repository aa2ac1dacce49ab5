//! Binary quadratic forms `a x^2 + b xy + c y^2`.
//!
//! Definite forms of discriminant `-p` give the brute-force count of
//! `h(-p)`. Indefinite forms of discriminant `4p` are organized into
//! cycles of reduced forms; each cycle is one narrow class, and the cycles
//! of `f` and `-f` together form one wide ideal class of `Q(sqrt p)`.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{consistency, domain, Error, Result};
use crate::numeric::{isqrt_i64, kronecker_i64, two_adic_valuation};
use crate::pell::check_prime_3_mod_4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        let d = i128::from(self.b) * i128::from(self.b)
            - 4 * i128::from(self.a) * i128::from(self.c);
        i64::try_from(d).expect("discriminant overflows i64")
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (i128::from(x), i128::from(y));
        i128::from(self.a) * x * x + i128::from(self.b) * x * y + i128::from(self.c) * y * y
    }

    /// `(-a, b, -c)`: same wide class, opposite narrow class.
    pub fn neg(&self) -> Self {
        Self::new(-self.a, self.b, -self.c)
    }

    /// `(a, -b, c)`, a representative of the inverse class.
    pub fn inverse(&self) -> Self {
        Self::new(self.a, -self.b, self.c)
    }

    /// The form `f(x X + r Y, y X + s Y)`.
    pub fn transform(&self, x: i64, r: i64, y: i64, s: i64) -> Result<Self> {
        let (a, b, c) = (i128::from(self.a), i128::from(self.b), i128::from(self.c));
        let (x, r, y, s) = (i128::from(x), i128::from(r), i128::from(y), i128::from(s));
        let na = a * x * x + b * x * y + c * y * y;
        let nb = 2 * a * x * r + b * (x * s + y * r) + 2 * c * y * s;
        let nc = a * r * r + b * r * s + c * s * s;
        Ok(Self::new(fit(na)?, fit(nb)?, fit(nc)?))
    }
}

impl fmt::Display for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn fit(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| domain(format!("form coefficient {x} overflows i64")))
}

/// `(g, x, y)` with `g = a x + b y`, `g >= 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

// ---------------------------------------------------------------------------
// Definite forms

/// `h(-p)` by counting reduced primitive forms of discriminant `-p`.
pub fn h_minus_oracle(p: i64) -> Result<i64> {
    check_prime_3_mod_4(p)?;
    if p == 3 {
        return Err(domain("h(-p) oracle requires p > 3"));
    }
    let mut count = 0;
    let mut a = 1i64;
    while 3 * a * a <= p {
        for b in (-a + 1)..=a {
            let num = b * b + p;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            if QForm::new(a, b, c).is_primitive() {
                count += 1;
            }
        }
        a += 1;
    }
    Ok(count)
}

// ---------------------------------------------------------------------------
// Indefinite forms

/// Reduced indefinite forms of one discriminant, grouped into cycles.
#[derive(Debug, Clone)]
pub struct FormCycles {
    disc: i64,
    root: i64,
    cycles: Vec<Vec<QForm>>,
    cycle_of: HashMap<QForm, usize>,
}

fn check_indefinite_disc(disc: i64) -> Result<i64> {
    if disc <= 0 {
        return Err(domain(format!("discriminant {disc} is not positive")));
    }
    let root = isqrt_i64(disc)?;
    if root * root == disc {
        return Err(domain(format!("discriminant {disc} is a perfect square")));
    }
    if disc.rem_euclid(4) > 1 {
        return Err(domain(format!("{disc} is not a discriminant")));
    }
    Ok(root)
}

/// `|sqrt(disc) - 2|a|| < b < sqrt(disc)`, with `root = floor(sqrt(disc))`.
fn is_reduced_with(f: &QForm, root: i64) -> bool {
    let two_a = 2 * f.a.abs();
    if f.b <= 0 || f.b > root {
        return false;
    }
    if two_a <= root {
        f.b > root - two_a
    } else {
        two_a - f.b <= root
    }
}

/// One step of the reduction operator: `(a, b, c) -> (c, r, (r^2 - disc)/4c)`
/// with `r = -b (mod 2c)` in the standard interval.
fn rho_with(f: &QForm, disc: i64, root: i64) -> Result<QForm> {
    let c = f.c;
    if c == 0 {
        return Err(domain(format!("{f} represents zero")));
    }
    let m = 2 * i128::from(c.abs());
    let nb = -i128::from(f.b);
    let root = i128::from(root);
    let r = if i128::from(c.abs()) <= root {
        root - (root - nb).rem_euclid(m)
    } else {
        let r = nb.rem_euclid(m);
        if r > m / 2 {
            r - m
        } else {
            r
        }
    };
    let nc = (r * r - i128::from(disc)) / (4 * i128::from(c));
    Ok(QForm::new(c, fit(r)?, fit(nc)?))
}

pub fn is_reduced_indefinite(f: &QForm) -> bool {
    let disc = f.disc();
    match check_indefinite_disc(disc) {
        Ok(root) => is_reduced_with(f, root),
        Err(_) => false,
    }
}

/// Applies the reduction operator until a reduced form is reached.
pub fn reduce_indefinite(f: &QForm) -> Result<QForm> {
    let disc = f.disc();
    let root = check_indefinite_disc(disc)?;
    let mut g = *f;
    // Each step roughly halves |c| until reduced; 4096 is far beyond any i64 input.
    for _ in 0..4096 {
        if is_reduced_with(&g, root) {
            return Ok(g);
        }
        g = rho_with(&g, disc, root)?;
    }
    Err(consistency(format!("reduction of {f} did not terminate")))
}

/// The cycle of reduced forms containing `reduce(f)`, starting at `reduce(f)`.
pub fn cycle(f: &QForm) -> Result<Vec<QForm>> {
    let start = reduce_indefinite(f)?;
    let disc = start.disc();
    let root = check_indefinite_disc(disc)?;
    let mut out = vec![start];
    let mut g = rho_with(&start, disc, root)?;
    while g != start {
        out.push(g);
        if out.len() > 4 * disc as usize {
            return Err(consistency(format!("cycle of {start} does not close")));
        }
        g = rho_with(&g, disc, root)?;
    }
    Ok(out)
}

/// Proper equivalence: the reduced cycles of `f` and `g` coincide.
pub fn is_equivalent(f: &QForm, g: &QForm) -> Result<bool> {
    if f.disc() != g.disc() {
        return Err(domain(format!(
            "discriminants differ: {} vs {}",
            f.disc(),
            g.disc()
        )));
    }
    let target = reduce_indefinite(g)?;
    Ok(cycle(f)?.contains(&target))
}

/// Every reduced primitive form of discriminant `disc`.
pub fn reduced_forms(disc: i64) -> Result<Vec<QForm>> {
    let root = check_indefinite_disc(disc)?;
    let mut out = Vec::new();
    let parity = disc.rem_euclid(2);
    let mut b = if parity == 0 { 2 } else { 1 };
    while b <= root {
        let n = (disc - b * b) / 4;
        let mut a = 1i64;
        while a * a <= n {
            if n % a == 0 {
                for div in [a, n / a] {
                    for f in [QForm::new(div, b, -n / div), QForm::new(-div, b, n / div)] {
                        if is_reduced_with(&f, root) && f.is_primitive() {
                            out.push(f);
                        }
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    out.sort();
    out.dedup();
    Ok(out)
}

impl FormCycles {
    pub fn new(disc: i64) -> Result<Self> {
        let root = check_indefinite_disc(disc)?;
        let forms = reduced_forms(disc)?;
        let mut cycle_of = HashMap::with_capacity(forms.len());
        let mut cycles = Vec::new();
        for f in &forms {
            if cycle_of.contains_key(f) {
                continue;
            }
            let cyc = cycle(f)?;
            for g in &cyc {
                if cycle_of.insert(*g, cycles.len()).is_some() {
                    return Err(consistency(format!("{g} lies on two cycles")));
                }
            }
            cycles.push(cyc);
        }
        if cycle_of.len() != forms.len() {
            return Err(consistency("cycles contain forms missing from the enumeration"));
        }
        Ok(Self {
            disc,
            root,
            cycles,
            cycle_of,
        })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn cycles(&self) -> &[Vec<QForm>] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Index of the cycle (narrow class) containing `f`.
    pub fn cycle_index(&self, f: &QForm) -> Result<usize> {
        if f.disc() != self.disc {
            return Err(domain(format!("{f} does not have discriminant {}", self.disc)));
        }
        let g = if is_reduced_with(f, self.root) {
            *f
        } else {
            reduce_indefinite(f)?
        };
        self.cycle_of
            .get(&g)
            .copied()
            .ok_or_else(|| consistency(format!("reduced form {g} not in any cycle")))
    }
}

// ---------------------------------------------------------------------------
// Ideals of Z[sqrt p]

/// The ideal `I = (a + sqrt p, b)` with ordered basis `(a + sqrt p, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IdealRep {
    pub a: i64,
    pub b: i64,
    pub p: i64,
}

impl IdealRep {
    pub fn new(a: i64, b: i64, p: i64) -> Result<Self> {
        if b <= 0 {
            return Err(domain(format!("ideal norm {b} must be positive")));
        }
        let n = i128::from(a) * i128::from(a) - i128::from(p);
        if n % i128::from(b) != 0 {
            return Err(domain(format!("{b} does not divide {a}^2 - {p}")));
        }
        Ok(Self { a, b, p })
    }

    pub fn unit(p: i64) -> Self {
        Self { a: 0, b: 1, p }
    }

    pub fn norm(&self) -> i64 {
        self.b
    }

    /// The form `N(x (a + sqrt p) + y b) / b` up to orientation:
    /// `(b, -2a, (a^2 - p)/b)`.
    pub fn to_form(&self) -> QForm {
        let c = (i128::from(self.a) * i128::from(self.a) - i128::from(self.p)) / i128::from(self.b);
        QForm::new(self.b, -2 * self.a, c as i64)
    }
}

impl fmt::Display for IdealRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + sqrt({}), {})", self.a, self.p, self.b)
    }
}

/// Maps a form of discriminant `4p` with positive leading coefficient
/// `(A, B, C)` to `(-B/2 + sqrt p, A)`, with `-B/2` reduced into `[0, A)`.
pub fn form_to_ideal(f: &QForm, p: i64) -> Result<IdealRep> {
    if f.disc() != 4 * p {
        return Err(domain(format!("{f} does not have discriminant 4p = {}", 4 * p)));
    }
    if f.a <= 0 {
        return Err(domain(format!("{f} has non-positive leading coefficient")));
    }
    IdealRep::new((-f.b / 2).rem_euclid(f.a), f.a, p)
}

/// Genus character for `4p = (-4)(-p)`: with `N = 2^v N'`,
/// `chi = (-p / 2)^v (-4 / N')`.
pub fn chi_of_ideal(rep: &IdealRep) -> i8 {
    let n = rep.norm();
    let v = two_adic_valuation(n);
    let odd = n >> v;
    let two_part = if v.is_multiple_of(2) { 1 } else { kronecker_i64(-rep.p, 2) };
    two_part * kronecker_i64(-4, odd)
}

// ---------------------------------------------------------------------------
// Composition

/// Gauss composition of two primitive forms of the same discriminant with
/// positive leading coefficients (united-form algorithm).
pub fn gauss_compose(f: &QForm, g: &QForm) -> Result<QForm> {
    let disc = f.disc();
    if g.disc() != disc {
        return Err(domain(format!("discriminants differ: {disc} vs {}", g.disc())));
    }
    let (f, g) = (positive_leading(f)?, positive_leading(g)?);
    let (f1, f2) = if f.a > g.a { (g, f) } else { (f, g) };
    let (a1, b1) = (i128::from(f1.a), i128::from(f1.b));
    let (a2, b2, c2) = (i128::from(f2.a), i128::from(f2.b), i128::from(f2.c));
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (y1, d) = if a2 % a1 == 0 {
        (0, a1)
    } else {
        let (d, u, _) = ext_gcd(a2, a1);
        (u, d)
    };
    let (x2, y2, d1) = if s % d == 0 {
        (0, -1, d)
    } else {
        let (d1, x2, y2) = ext_gcd(s, d);
        (x2, -y2, d1)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let num = b3 * b3 - i128::from(disc);
    if num % (4 * a3) != 0 {
        return Err(consistency(format!("composition of {f1} and {f2} failed")));
    }
    Ok(QForm::new(fit(a3)?, fit(b3)?, fit(num / (4 * a3))?))
}

/// An equivalent form with `a > 0`.
fn positive_leading(f: &QForm) -> Result<QForm> {
    if f.a > 0 {
        return Ok(*f);
    }
    // (a, b, c) ~ (c, -b, a); reduced indefinite forms have ac < 0.
    let g = reduce_indefinite(f)?;
    if g.a > 0 {
        Ok(g)
    } else {
        Ok(QForm::new(g.c, -g.b, g.a))
    }
}

// ---------------------------------------------------------------------------
// Wide class group of Q(sqrt p)

/// The wide class group of `Z[sqrt p]`, each class a pair of cycles `{C, -C}`.
#[derive(Debug, Clone)]
pub struct WideClassGroup {
    p: i64,
    cycles: FormCycles,
    class_of_cycle: Vec<usize>,
    /// Cycle indices of each class; class 0 is the principal class.
    classes: Vec<[usize; 2]>,
    reps: Vec<IdealRep>,
}

impl WideClassGroup {
    pub fn new(p: i64) -> Result<Self> {
        check_prime_3_mod_4(p)?;
        if p == 3 {
            return Err(domain("class group enumeration requires p > 3"));
        }
        let cycles = FormCycles::new(4 * p)?;
        let n = cycles.len();
        if n % 2 != 0 {
            return Err(consistency(format!("odd number {n} of cycles for 4p = {}", 4 * p)));
        }
        let mut pairs: Vec<[usize; 2]> = Vec::with_capacity(n / 2);
        let mut seen = vec![false; n];
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let j = cycles.cycle_index(&cycles.cycles()[i][0].neg())?;
            if j == i {
                return Err(consistency(format!(
                    "cycle {i} is fixed by (a,b,c) -> (-a,b,-c)"
                )));
            }
            seen[i] = true;
            seen[j] = true;
            pairs.push([i, j]);
        }
        let mut labelled: Vec<([usize; 2], IdealRep)> = pairs
            .into_iter()
            .map(|pair| Ok((pair, pair_representative(&cycles, pair, p)?)))
            .collect::<Result<_>>()?;
        labelled.sort_by_key(|(_, rep)| (rep.b, rep.a));
        let principal = cycles.cycle_index(&QForm::new(1, 0, -p))?;
        let pos = labelled
            .iter()
            .position(|(pair, _)| pair.contains(&principal))
            .ok_or_else(|| consistency("principal cycle missing"))?;
        let first = labelled.remove(pos);
        labelled.insert(0, first);

        let mut class_of_cycle = vec![0; n];
        for (k, (pair, _)) in labelled.iter().enumerate() {
            class_of_cycle[pair[0]] = k;
            class_of_cycle[pair[1]] = k;
        }
        let (classes, reps) = labelled.into_iter().unzip();
        Ok(Self {
            p,
            cycles,
            class_of_cycle,
            classes,
            reps,
        })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    /// `h(p)`.
    pub fn order(&self) -> usize {
        self.classes.len()
    }

    pub fn cycles(&self) -> &FormCycles {
        &self.cycles
    }

    /// Canonical representative of each class; index 0 is `(0 + sqrt p, 1)`.
    pub fn representatives(&self) -> &[IdealRep] {
        &self.reps
    }

    pub fn class_of_form(&self, f: &QForm) -> Result<usize> {
        Ok(self.class_of_cycle[self.cycles.cycle_index(f)?])
    }

    pub fn class_of_ideal(&self, rep: &IdealRep) -> Result<usize> {
        if rep.p != self.p {
            return Err(domain(format!("{rep} is not an ideal of Q(sqrt {})", self.p)));
        }
        self.class_of_form(&rep.to_form())
    }

    pub fn inverse(&self, class: usize) -> Result<usize> {
        self.class_of_form(&self.reps[class].to_form().inverse())
    }

    pub fn compose(&self, x: usize, y: usize) -> Result<usize> {
        let f = gauss_compose(&self.reps[x].to_form(), &self.reps[y].to_form())?;
        self.class_of_form(&f)
    }

    pub fn element_order(&self, class: usize) -> Result<usize> {
        let mut acc = class;
        let mut k = 1;
        while acc != 0 {
            acc = self.compose(acc, class)?;
            k += 1;
            if k > self.order() {
                return Err(consistency(format!("class {class} has no finite order")));
            }
        }
        Ok(k)
    }

    /// Invariant factors `d_1 | d_2 | ... ` of the group, ascending.
    pub fn elementary_divisors(&self) -> Result<Vec<u64>> {
        let orders = (0..self.order())
            .map(|c| self.element_order(c).map(|o| o as u64))
            .collect::<Result<Vec<_>>>()?;
        Ok(invariant_factors(self.order() as u64, &orders))
    }

    /// Finds a representative of the same class with odd norm `= 1 (mod 4)`,
    /// hence `chi = 1`, by scanning values `f(x, y)` with `|x|, |y| <= bound`.
    pub fn find_representative(&self, rep: &IdealRep, bound: i64) -> Result<IdealRep> {
        let class = self.class_of_ideal(rep)?;
        let f = rep.to_form();
        let mut best: Option<(i128, i64, i64)> = None;
        for y in 0..=bound {
            for x in -bound..=bound {
                if x.gcd(&y) != 1 || (y == 0 && x != 1) {
                    continue;
                }
                let n = f.eval(x, y).abs();
                if n % 4 != 1 {
                    continue;
                }
                if best.is_none_or(|(m, _, _)| n < m) {
                    best = Some((n, x, y));
                }
            }
        }
        let (_, x, y) = best.ok_or(Error::SearchBound(bound))?;
        // (-a, b, -c) takes the value -f(x, y) at (x, -y)
        let (g, y) = if f.eval(x, y) > 0 { (f, y) } else { (f.neg(), -y) };
        // x s - y r = 1
        let (_, s, t) = ext_gcd(i128::from(x), i128::from(y));
        let (r, s) = (-(t as i64), s as i64);
        let h = g.transform(x, r, y, s)?;
        let found = form_to_ideal(&h, self.p)?;
        if self.class_of_ideal(&found)? != class {
            return Err(consistency(format!(
                "{found} is not in the class of {rep}"
            )));
        }
        Ok(found)
    }
}

/// Representative with the smallest `(b, a)` among forms with positive
/// leading coefficient in either cycle of the pair.
fn pair_representative(cycles: &FormCycles, pair: [usize; 2], p: i64) -> Result<IdealRep> {
    pair.iter()
        .flat_map(|&i| cycles.cycles()[i].iter())
        .filter(|f| f.a > 0)
        .map(|f| form_to_ideal(f, p))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min_by_key(|r| (r.b, r.a))
        .ok_or_else(|| consistency("cycle pair without a positive form"))
}

/// Invariant factors of an abelian group of the given order from the
/// multiset of element orders.
fn invariant_factors(order: u64, element_orders: &[u64]) -> Vec<u64> {
    let mut per_prime: Vec<Vec<u32>> = Vec::new();
    let mut primes = Vec::new();
    let mut m = order;
    let mut q = 2;
    while m > 1 {
        if m.is_multiple_of(q) {
            let mut e = 0;
            while m.is_multiple_of(q) {
                m /= q;
                e += 1;
            }
            // r_j = log_q #{g : g^(q^j) = 1}; parts with exponent >= j number r_j - r_{j-1}
            let rank = |j: u32| -> u32 {
                let qj = q.pow(j);
                let count = element_orders.iter().filter(|&&o| qj % o == 0).count() as u64;
                count.ilog(q)
            };
            let mut parts = Vec::new();
            for j in 1..=e {
                let at_least = rank(j) - rank(j - 1);
                parts.push(at_least);
            }
            // exponents: number of parts equal to j is parts[j-1] - parts[j]
            let mut exps = Vec::new();
            for j in (1..=e).rev() {
                let ge = parts[(j - 1) as usize];
                let gt = if j < e { parts[j as usize] } else { 0 };
                exps.extend(std::iter::repeat_n(j, (ge - gt) as usize));
            }
            per_prime.push(exps);
            primes.push(q);
        }
        q += 1;
    }
    let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut out: Vec<u64> = (0..len)
        .map(|k| {
            primes
                .iter()
                .zip(&per_prime)
                .map(|(&q, exps)| exps.get(k).map_or(1, |&e| q.pow(e)))
                .product()
        })
        .collect();
    out.sort_unstable();
    out
}

/// Class number of `Q(sqrt p)`: half the number of cycles of disc `4p`.
pub fn class_number_real(p: i64) -> Result<i64> {
    check_prime_3_mod_4(p)?;
    let n = FormCycles::new(4 * p)?.len();
    if n % 2 != 0 {
        return Err(consistency(format!("odd number {n} of cycles for p = {p}")));
    }
    Ok((n / 2) as i64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroupDescription {
    pub p: i64,
    pub representatives: Vec<IdealRep>,
    pub elementary_divisors: Vec<u64>,
}

pub fn enumerate_wide_classes(p: i64) -> Result<ClassGroupDescription> {
    let group = WideClassGroup::new(p)?;
    let h = class_number_real(p)?;
    if group.order() as i64 != h {
        return Err(consistency(format!(
            "{} representatives but h({p}) = {h}",
            group.order()
        )));
    }
    Ok(ClassGroupDescription {
        p,
        representatives: group.representatives().to_vec(),
        elementary_divisors: group.elementary_divisors()?,
    })
}

pub fn class_group_structure(p: i64) -> Result<Vec<u64>> {
    WideClassGroup::new(p)?.elementary_divisors()
}

/// [`WideClassGroup::find_representative`] with a bound that doubles on
/// failure, up to `max_bound`.
pub fn find_representative(rep: &IdealRep, start_bound: i64, max_bound: i64) -> Result<IdealRep> {
    let group = WideClassGroup::new(rep.p)?;
    find_representative_in(&group, rep, start_bound, max_bound)
}

pub fn find_representative_in(
    group: &WideClassGroup,
    rep: &IdealRep,
    start_bound: i64,
    max_bound: i64,
) -> Result<IdealRep> {
    let mut bound = start_bound.max(1);
    loop {
        match group.find_representative(rep, bound) {
            Err(Error::SearchBound(_)) if bound < max_bound => bound *= 2,
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::is_prime;

    fn primes_3_mod_4(lo: i64, hi: i64) -> impl Iterator<Item = i64> {
        (lo..=hi).filter(|&p| p % 4 == 3 && is_prime(p as u64))
    }

    #[test]
    fn h_minus_examples() {
        assert_eq!(h_minus_oracle(7).unwrap(), 1);
        assert_eq!(h_minus_oracle(79).unwrap(), 5);
        assert_eq!(h_minus_oracle(439).unwrap(), 15);
        assert_eq!(h_minus_oracle(43063).unwrap(), 73);
        assert!(h_minus_oracle(3).is_err());
        assert!(h_minus_oracle(13).is_err());
    }

    #[test]
    fn principal_cycle_for_79() {
        let f = QForm::new(1, 16, -15);
        assert!(is_reduced_indefinite(&f));
        let cyc = cycle(&QForm::new(1, 0, -79)).unwrap();
        assert!(cyc.contains(&f));
        assert!(cycle(&f).unwrap().contains(&f));
        assert_eq!(FormCycles::new(316).unwrap().len(), 6);
    }

    #[test]
    fn cycles_partition_reduced_forms() {
        for disc in [316, 1756, 4 * 43063, 4 * 7, 5 * 4 * 3 + 1] {
            let fc = FormCycles::new(disc).unwrap();
            let total: usize = fc.cycles().iter().map(Vec::len).sum();
            assert_eq!(total, reduced_forms(disc).unwrap().len());
            for cyc in fc.cycles() {
                assert!(cyc.iter().all(is_reduced_indefinite));
            }
        }
    }

    #[test]
    fn bad_discriminants() {
        assert!(reduce_indefinite(&QForm::new(1, 0, 1)).is_err());
        assert!(reduce_indefinite(&QForm::new(1, 0, -4)).is_err());
        assert!(is_equivalent(&QForm::new(1, 0, -7), &QForm::new(1, 0, -79)).is_err());
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number_real(79).unwrap(), 3);
        assert_eq!(class_number_real(439).unwrap(), 5);
        assert_eq!(class_number_real(43063).unwrap(), 9);
        assert_eq!(class_number_real(7).unwrap(), 1);
    }

    #[test]
    fn form_to_ideal_examples() {
        let r = form_to_ideal(&QForm::new(3, -2, -26), 79).unwrap();
        assert_eq!((r.a, r.b), (1, 3));
        let r = form_to_ideal(&QForm::new(1, 0, -79), 79).unwrap();
        assert_eq!((r.a, r.b), (0, 1));
        let r = form_to_ideal(&QForm::new(13, -14, -30), 439).unwrap();
        assert_eq!((r.a, r.b), (7, 13));
        assert!(form_to_ideal(&QForm::new(-3, -2, 26), 79).is_err());
        assert!(form_to_ideal(&QForm::new(3, -2, -26), 83).is_err());
    }

    #[test]
    fn ideal_rep_validation() {
        assert!(IdealRep::new(1, 3, 79).is_ok());
        assert!(IdealRep::new(1, 5, 79).is_err());
        assert!(IdealRep::new(1, 0, 79).is_err());
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi_of_ideal(&IdealRep::new(1, 3, 79).unwrap()), -1);
        assert_eq!(chi_of_ideal(&IdealRep::new(7, 13, 439).unwrap()), 1);
        assert_eq!(chi_of_ideal(&IdealRep::new(13, 18, 439).unwrap()), 1);
        for p in [7, 79, 439] {
            assert_eq!(chi_of_ideal(&IdealRep::new(0, p, p).unwrap()), -1);
            assert_eq!(chi_of_ideal(&IdealRep::unit(p)), 1);
        }
    }

    /// chi evaluated prime by prime on the factorization of the norm,
    /// using the nonzero factor of (-4/q), (-p/q) at ramified primes.
    fn chi_by_factorization(rep: &IdealRep) -> i8 {
        let mut n = rep.norm();
        let mut chi = 1i8;
        let mut q = 2;
        while n > 1 {
            while n % q == 0 {
                n /= q;
                let x = kronecker_i64(-4, q);
                let y = kronecker_i64(-rep.p, q);
                assert!(x == 0 || y == 0 || x == y, "characters disagree at {q}");
                chi *= if x != 0 { x } else { y };
            }
            q += 1;
        }
        chi
    }

    #[test]
    fn chi_matches_factorization() {
        for p in [7, 11, 19, 79, 439, 1999] {
            for b in 1..10_000i64 {
                // any a with b | a^2 - p gives an ideal of norm b
                let Some(a) = (0..b).find(|a| (a * a - p) % b == 0) else { continue };
                let rep = IdealRep::new(a, b, p).unwrap();
                assert_eq!(chi_of_ideal(&rep), chi_by_factorization(&rep), "{rep}");
            }
        }
    }

    #[test]
    fn equivalence() {
        let f = QForm::new(1, 16, -15);
        assert!(is_equivalent(&f, &f).unwrap());
        let cyc = cycle(&f).unwrap();
        assert!(is_equivalent(&cyc[1], &cyc[3]).unwrap());
        assert!(!is_equivalent(&f, &f.neg()).unwrap());
    }

    #[test]
    fn composition_laws() {
        for p in [79, 439, 1999, 43063] {
            let g = WideClassGroup::new(p).unwrap();
            let disc = 4 * p;
            let principal = QForm::new(1, 0, -p);
            for cyc in g.cycles().cycles() {
                let f = cyc[0];
                let id = gauss_compose(&principal, &f).unwrap();
                assert_eq!(id.disc(), disc);
                assert!(is_equivalent(&id, &f).unwrap());
                let inv = gauss_compose(&f, &f.inverse()).unwrap();
                assert!(is_equivalent(&inv, &principal).unwrap());
            }
            let h = g.order();
            for x in 0..h {
                for y in 0..h {
                    assert_eq!(g.compose(x, y).unwrap(), g.compose(y, x).unwrap());
                    for z in 0..h.min(4) {
                        let l = g.compose(g.compose(x, y).unwrap(), z).unwrap();
                        let r = g.compose(x, g.compose(y, z).unwrap()).unwrap();
                        assert_eq!(l, r);
                    }
                }
                let inv = g.inverse(x).unwrap();
                assert_eq!(g.compose(x, inv).unwrap(), 0);
            }
        }
    }

    #[test]
    fn composition_rejects_mismatch() {
        assert!(gauss_compose(&QForm::new(1, 0, -7), &QForm::new(1, 0, -79)).is_err());
    }

    #[test]
    fn group_structures() {
        assert_eq!(class_group_structure(79).unwrap(), vec![3]);
        assert_eq!(class_group_structure(439).unwrap(), vec![5]);
        assert_eq!(class_group_structure(43063).unwrap(), vec![3, 3]);
        assert_eq!(class_group_structure(7).unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn invariant_factor_bookkeeping() {
        // Z/2 x Z/4: orders 1,2,2,2,4,4,4,4
        assert_eq!(invariant_factors(8, &[1, 2, 2, 2, 4, 4, 4, 4]), vec![2, 4]);
        // Z/3 x Z/3
        assert_eq!(invariant_factors(9, &[1, 3, 3, 3, 3, 3, 3, 3, 3]), vec![3, 3]);
        // Z/15
        let orders: Vec<u64> = (0..15u64).map(|k| 15 / k.gcd(&15)).collect();
        assert_eq!(invariant_factors(15, &orders), vec![15]);
    }

    #[test]
    fn wide_classes() {
        let d = enumerate_wide_classes(79).unwrap();
        assert_eq!(d.representatives.len(), 3);
        assert_eq!(d.representatives[0], IdealRep::unit(79));
        assert_eq!(d.elementary_divisors, vec![3]);
        let d = enumerate_wide_classes(439).unwrap();
        assert_eq!(d.representatives.len(), 5);
        let d = enumerate_wide_classes(7).unwrap();
        assert_eq!(d.representatives, vec![IdealRep::unit(7)]);
    }

    #[test]
    fn representatives_are_valid_and_in_distinct_classes() {
        for p in primes_3_mod_4(7, 3000) {
            let g = WideClassGroup::new(p).unwrap();
            for (k, rep) in g.representatives().iter().enumerate() {
                assert_eq!((rep.a * rep.a - p) % rep.b, 0);
                assert_eq!(g.class_of_ideal(rep).unwrap(), k);
            }
            assert_eq!(g.order() % 2, 1, "h({p}) even");
            assert_eq!(h_minus_oracle(p).unwrap() % 2, 1, "h(-{p}) even");
        }
    }

    #[test]
    fn find_representative_examples() {
        let unit = find_representative(&IdealRep::unit(79), 50, 6400).unwrap();
        assert_eq!(unit, IdealRep::unit(79));
        let g = WideClassGroup::new(79).unwrap();
        let src = IdealRep::new(1, 3, 79).unwrap();
        let r = find_representative_in(&g, &src, 50, 6400).unwrap();
        assert_eq!(r.b % 4, 1);
        assert_eq!(chi_of_ideal(&r), 1);
        assert_eq!(g.class_of_ideal(&r).unwrap(), g.class_of_ideal(&src).unwrap());

        let src = IdealRep::new(7, 13, 439).unwrap();
        let r = find_representative(&src, 50, 6400).unwrap();
        assert_eq!(r, src);
    }

    #[test]
    fn find_representative_small_bound_errors() {
        let g = WideClassGroup::new(79).unwrap();
        // Bound 0 leaves no coprime (x, y) to try.
        let src = IdealRep::new(1, 3, 79).unwrap();
        assert_eq!(g.find_representative(&src, 0), Err(Error::SearchBound(0)));
    }
}
