//! Reproduction of the three worked examples `p = 79, 439, 43063`, checked
//! against embedded golden values. Output is byte-stable.

use std::fmt::Write as _;

use anyhow::Result;
use class16_core::classgroup::chi_of_ideal;
use class16_core::contfrac::neg_cf;
use class16_core::verifier::n_of_ideal;
use class16_core::{verify_main, IdealRep, QuadIrr};

struct Golden {
    p: i64,
    m: i64,
    pell: (&'static str, &'static str),
    h_plus: i64,
    h_minus: i64,
    group: &'static [u64],
    /// Sorted by `|t|` descending, then `t` descending.
    t: &'static [i64],
    expansions: &'static [Expansion],
}

/// Expansion of `(a + sqrt p)/b` and the ideal `(a + sqrt p, b)`.
struct Expansion {
    a: i64,
    b: i64,
    text: &'static str,
    period_len: usize,
    n: i64,
    chi: i8,
}

const GOLDENS: [Golden; 3] = [
    Golden {
        p: 79,
        m: 7,
        pell: ("80", "9"),
        h_plus: 3,
        h_minus: 5,
        group: &[3],
        t: &[21, -3, -3],
        expansions: &[
            Expansion { a: 0, b: 1, text: "[9; (9,18)]", period_len: 2, n: 21, chi: 1 },
            Expansion { a: 1, b: 3, text: "[4; (2,2,4,3,7)]", period_len: 5, n: 3, chi: -1 },
        ],
    },
    Golden {
        p: 439,
        m: 19,
        pell: ("440", "21"),
        h_plus: 5,
        h_minus: 15,
        group: &[5],
        t: &[57, -15, -15, 9, 9],
        expansions: &[
            Expansion {
                a: 7,
                b: 13,
                text: "[3; (2,2,2,2,2,3,3,2,2,2,2,2,2,2,2,2,2,2,2,5)]",
                period_len: 20,
                n: -15,
                chi: 1,
            },
            Expansion { a: 13, b: 18, text: "[2; (9,5,5,2,3)]", period_len: 5, n: 9, chi: 1 },
        ],
    },
    Golden {
        p: 43063,
        m: 193,
        pell: ("39110204168", "188468139"),
        h_plus: 9,
        h_minus: 73,
        group: &[3, 3],
        t: &[579, -141, -141, -69, -69, 51, 51, -21, -21],
        expansions: &[],
    },
];

/// Groups equal values: `{579, -141 x2, ...}`.
pub fn format_multiset(ts: &[i64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < ts.len() {
        let j = ts[i..].iter().take_while(|&&t| t == ts[i]).count();
        parts.push(if j == 1 {
            ts[i].to_string()
        } else {
            format!("{} x{j}", ts[i])
        });
        i += j;
    }
    format!("{{{}}}", parts.join(", "))
}

fn join(ts: &[i64]) -> String {
    ts.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")
}

fn expect<T: PartialEq + std::fmt::Debug>(
    out: &mut String,
    ok: &mut bool,
    what: &str,
    got: T,
    want: T,
) {
    if got != want {
        *ok = false;
        let _ = writeln!(out, "  MISMATCH {what}: got {got:?}, expected {want:?}");
    }
}

/// Returns the rendered output and whether every golden value matched.
pub fn run_examples() -> Result<(String, bool)> {
    let mut out = String::new();
    let mut ok = true;
    for (k, g) in GOLDENS.iter().enumerate() {
        let r = verify_main(g.p)?;
        let m = r.m_integer();
        let _ = writeln!(out, "Example {}: p = {}", k + 1, g.p);
        let _ = writeln!(out, "  m({})={}", g.p, r.m);
        expect(&mut out, &mut ok, "m", m, g.m);
        let _ = writeln!(out, "  pell: d={} c={}", r.unit.pell.d, r.unit.pell.c);
        expect(
            &mut out,
            &mut ok,
            "pell",
            (r.unit.pell.d.to_string(), r.unit.pell.c.to_string()),
            (g.pell.0.to_string(), g.pell.1.to_string()),
        );
        let _ = writeln!(out, "  h({})={}  class group {:?}", g.p, r.h_plus, r.elementary_divisors);
        expect(&mut out, &mut ok, "h(p)", r.h_plus, g.h_plus);
        expect(&mut out, &mut ok, "class group", r.elementary_divisors.as_slice(), g.group);
        for e in g.expansions {
            let cf = neg_cf(&QuadIrr::from_i64(e.a, e.b, g.p)?)?;
            let rep = IdealRep::new(e.a, e.b, g.p)?;
            let n = n_of_ideal(&rep, &r.unit.pell)?;
            let chi = chi_of_ideal(&rep);
            let _ = writeln!(
                out,
                "  ({}+sqrt({}))/{} = {}  period length {}  n={}  chi={}",
                e.a,
                g.p,
                e.b,
                cf,
                cf.period.len(),
                n,
                chi
            );
            expect(&mut out, &mut ok, "expansion", cf.to_string().as_str(), e.text);
            expect(&mut out, &mut ok, "period length", cf.period.len(), e.period_len);
            expect(&mut out, &mut ok, "n", n, e.n);
            expect(&mut out, &mut ok, "chi", chi, e.chi);
        }
        let ts = r.t_multiset();
        let _ = writeln!(out, "  t_C: {}", format_multiset(&ts));
        expect(&mut out, &mut ok, "t multiset", ts.as_slice(), g.t);
        let sum: i64 = ts.iter().sum();
        let _ = writeln!(
            out,
            "  h(-{})=(1/3)({})={}  form count {}",
            g.p,
            join(&ts),
            r.h_minus_zagier,
            r.h_minus_oracle
        );
        expect(&mut out, &mut ok, "sum t_C", sum, 3 * g.h_minus);
        expect(&mut out, &mut ok, "h(-p) Zagier", r.h_minus_zagier, g.h_minus);
        expect(&mut out, &mut ok, "h(-p) oracle", r.h_minus_oracle, g.h_minus);
        let hm = r.h_plus * m;
        let _ = writeln!(
            out,
            "  h(p)m(p)={} = {} (mod 16), h(-p)={} = {} (mod 16)",
            hm,
            hm.rem_euclid(16),
            r.h_minus_oracle,
            r.h_minus_oracle.rem_euclid(16)
        );
        let failures = r.checks.failures();
        if failures.is_empty() {
            let _ = writeln!(out, "  checks: all passed");
        } else {
            ok = false;
            let _ = writeln!(out, "  checks FAILED: {}", failures.join(", "));
        }
    }
    let _ = writeln!(out, "{}", if ok { "all examples match" } else { "EXAMPLES MISMATCH" });
    Ok((out, ok))
}
