//! JSON and text renderings of a verified prime.

use std::fmt::{self, Write as _};

use class16_core::PrimeReport;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest magnitude a JSON number can carry without loss in a double.
const SAFE_INTEGER: i64 = (1 << 53) - 1;

/// An integer written as a JSON number when it is within 53 bits and as a
/// decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.abs() <= SAFE_INTEGER => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_str_radix(10)),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                v.parse::<BigInt>().map(JsonInt).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellJson {
    pub d: JsonInt,
    pub c: JsonInt,
    pub digits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepJson {
    pub a: i64,
    pub b: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub rep: RepJson,
    pub chi: i8,
    pub n: i64,
    pub t: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksJson {
    pub mod16: bool,
    pub guy: bool,
    pub thmz2: bool,
    pub thmz: bool,
    pub identity: bool,
    pub inverses: bool,
    pub mod8: bool,
    pub williams4: bool,
    pub williams8: bool,
    pub mordell: bool,
    pub parity: bool,
    pub pell_units: bool,
    pub rep_independence: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub p: i64,
    pub m: JsonInt,
    pub h_plus: i64,
    pub h_minus_oracle: i64,
    pub h_minus_zagier: i64,
    pub class_group: Vec<u64>,
    pub period_length: usize,
    pub pell: PellJson,
    pub classes: Vec<ClassJson>,
    pub checks: ChecksJson,
    pub all_ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    pub version: String,
}

impl ReportJson {
    pub fn from_report(r: &PrimeReport, with_timing: bool) -> Self {
        let mut classes: Vec<ClassJson> = r
            .classes
            .iter()
            .map(|c| ClassJson {
                rep: RepJson {
                    a: c.rep.a,
                    b: c.rep.b,
                },
                chi: c.chi,
                n: c.n_cf,
                t: c.t,
            })
            .collect();
        classes.sort_by_key(|c| {
            (
                std::cmp::Reverse(c.t.abs()),
                std::cmp::Reverse(c.t),
                c.rep.b,
                c.rep.a,
            )
        });
        let ch = &r.checks;
        Self {
            p: r.p,
            m: JsonInt(r.m.to_integer()),
            h_plus: r.h_plus,
            h_minus_oracle: r.h_minus_oracle,
            h_minus_zagier: r.h_minus_zagier,
            class_group: r.elementary_divisors.clone(),
            period_length: r.unit.period.len(),
            pell: PellJson {
                d: JsonInt(r.unit.pell.d.clone()),
                c: JsonInt(r.unit.pell.c.clone()),
                digits: r.unit.pell.d_digits(),
            },
            classes,
            checks: ChecksJson {
                mod16: ch.mod16,
                guy: ch.guy,
                thmz2: ch.thmz2,
                thmz: ch.thmz,
                identity: ch.identity,
                inverses: ch.inverses,
                mod8: ch.mod8,
                williams4: ch.williams4,
                williams8: ch.williams8,
                mordell: ch.mordell,
                parity: ch.parity,
                pell_units: ch.pell_units,
                rep_independence: ch.rep_independence,
            },
            all_ok: r.all_ok(),
            timing_ms: with_timing.then_some(r.elapsed.as_millis() as u64),
            version: VERSION.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Human-readable report for `verify`.
pub fn render_text(r: &PrimeReport, with_timing: bool) -> String {
    let j = ReportJson::from_report(r, with_timing);
    let mut s = String::new();
    let sol = &r.unit.pell;
    let _ = writeln!(s, "p = {}", r.p);
    let _ = writeln!(s, "m(p) = {}  (period length {})", r.m, j.period_length);
    let _ = writeln!(s, "pell: d = {}, c = {}  ({} digits)", sol.d, sol.c, j.pell.digits);
    let _ = writeln!(s, "h(p) = {}  class group {:?}", r.h_plus, r.elementary_divisors);
    let _ = writeln!(
        s,
        "h(-p) = {} (form count), {} (sum of t_C / 3)",
        r.h_minus_oracle, r.h_minus_zagier
    );
    let _ = writeln!(s, "classes:");
    for c in &j.classes {
        let _ = writeln!(
            s,
            "  ({} + sqrt {}, {})  chi = {:+}  n = {}  t = {}",
            c.rep.a, r.p, c.rep.b, c.chi, c.n, c.t
        );
    }
    let _ = writeln!(
        s,
        "h(-p) - h(p) m(p) = {} - {} = {} (mod 16: {})",
        r.h_minus_oracle,
        r.h_plus * r.m_integer(),
        r.h_minus_oracle - r.h_plus * r.m_integer(),
        (r.h_minus_oracle - r.h_plus * r.m_integer()).rem_euclid(16)
    );
    let _ = write!(s, "checks:");
    for (name, ok) in r.checks.named() {
        let _ = write!(s, " {name}={}", if ok { "ok" } else { "FAIL" });
    }
    let _ = writeln!(s);
    if let Some(ms) = j.timing_ms {
        let _ = writeln!(s, "time: {ms} ms");
    }
    let _ = writeln!(
        s,
        "{}",
        if r.all_ok() {
            "all checks passed".to_string()
        } else {
            format!("FAILED: {}", r.checks.failures().join(", "))
        }
    );
    s
}

/// One summary line of a sweep.
pub fn summary_line(r: &PrimeReport) -> String {
    let status = if r.all_ok() {
        "ok".to_string()
    } else {
        format!("FAIL {}", r.checks.failures().join(","))
    };
    format!(
        "p={} h+={} h-={} m={} {}",
        r.p, r.h_plus, r.h_minus_oracle, r.m, status
    )
}

pub const CSV_HEADER: &str = "p,h_plus,h_minus,m,mod16_ok,all_ok,ms";

pub fn csv_row(r: &PrimeReport, with_timing: bool) -> String {
    let ms = if with_timing {
        r.elapsed.as_millis().to_string()
    } else {
        String::new()
    };
    format!(
        "{},{},{},{},{},{},{}",
        r.p,
        r.h_plus,
        r.h_minus_oracle,
        r.m,
        r.checks.mod16,
        r.all_ok(),
        ms
    )
}
