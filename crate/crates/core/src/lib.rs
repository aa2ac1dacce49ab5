//! Exact computations around the congruence `h(-p) = h(p) m(p) (mod 16)` for
//! primes `p = 3 (mod 4)`: negative continued fractions, Dedekind sums,
//! fundamental units, indefinite binary quadratic forms, and the per-class
//! invariants `t_C` whose sum is `3 h(-p)`.

pub mod classgroup;
pub mod contfrac;
pub mod dedekind;
pub mod error;
pub mod numeric;
pub mod pell;
pub mod verifier;

pub use classgroup::{IdealRep, QForm, WideClassGroup};
pub use contfrac::{neg_cf, NegCF};
pub use dedekind::SL2Matrix;
pub use error::{Error, Result};
pub use numeric::{QuadIrr, Rational};
pub use pell::PellSolution;
pub use verifier::{verify_main, verify_with, PrimeReport, UnitData, VerifyOptions};
