use class16_core::numeric::is_prime;
use class16_core::pell::{fundamental_pell, pell_brute_force};
use num_bigint::BigInt;
use num_traits::One;

/// First convergent of the ordinary continued fraction of `sqrt p` solving
/// `d^2 - p c^2 = 1`.
fn by_convergents(p: i64) -> (BigInt, BigInt) {
    let a0 = (1..).take_while(|x: &i64| x * x <= p).last().unwrap();
    let (mut m, mut q, mut a) = (0i64, 1i64, a0);
    let (mut h0, mut h1) = (BigInt::one(), BigInt::from(a0));
    let (mut k0, mut k1) = (BigInt::from(0), BigInt::one());
    while &h1 * &h1 - BigInt::from(p) * &k1 * &k1 != BigInt::one() {
        m = q * a - m;
        q = (p - m * m) / q;
        a = (a0 + m) / q;
        let h2 = BigInt::from(a) * &h1 + &h0;
        let k2 = BigInt::from(a) * &k1 + &k0;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    (h1, k1)
}

#[test]
fn period_method_matches_convergents() {
    for p in (3..1500).step_by(4).filter(|&p| is_prime(p as u64)) {
        let s = fundamental_pell(p).unwrap();
        assert_eq!((s.d.clone(), s.c.clone()), by_convergents(p), "p = {p}");
        if let Some(b) = pell_brute_force(p, 20_000) {
            assert_eq!(b, s, "p = {p}");
        }
    }
}

#[test]
fn units_have_half_roots() {
    for p in (7..1500).step_by(4).filter(|&p| is_prime(p as u64)) {
        let s = fundamental_pell(p).unwrap();
        let (r, t) = s.half_unit_root().unwrap_or_else(|| panic!("p = {p}"));
        assert_eq!(&r * &t, s.c);
        assert_eq!(&r * &r + BigInt::from(p) * &t * &t, &s.d * 2u32);
    }
}
