//! Independent numeric oracles for frozen values: crude but honest
//! computations sharing nothing with the engine paths they check.

use primezeta::alpha::alpha_table_mobius;
use primezeta::pzeta::{prime_zeta_derivative, prime_zeta_direct, prime_zeta_mobius, prime_zeta_series};
use primezeta::real::{PrecisionPolicy, Real};
use primezeta::sieve::PrimeSieve;
use primezeta::zeta::zeta_derivatives_int;

/// zeta'(2) by brute force: -sum_{j<=1e7} log j / j^2 in compensated f64
/// plus the crude integral tail -(log N + 1)/N. Good to ~1e-13.
#[test]
fn zeta_prime_2_against_f64_brute_force() {
    let n = 10_000_000u64;
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for j in 2..=n {
        let jf = j as f64;
        let x = jf.ln() / (jf * jf);
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    let nf = n as f64;
    let oracle = -(s + c) - (nf.ln() + 1.0) / nf;
    let engine = zeta_derivatives_int(2, 1, PrecisionPolicy::new(30)).unwrap();
    let gap = (engine.derivative(1).to_f64() - oracle).abs();
    assert!(gap < 1e-12, "zeta'(2) brute force vs engine: {gap:.3e}");
}

/// li(2) by naive summation: terms (log 2)^k/(k k!) computed from scratch
/// (explicit powers and factorials, fixed 60-term count), at a wider policy.
#[test]
fn li_2_against_naive_series() {
    let pol = PrecisionPolicy::with_guard(50, 15).unwrap();
    let log2 = Real::from_u64(2, pol).ln();
    let mut sum = Real::euler_gamma(pol).add(&log2.ln());
    for k in 1..=60u64 {
        let mut fact = Real::one(pol);
        for i in 2..=k {
            fact = fact.mul_u64(i);
        }
        sum = sum.add(&log2.powi(k as i64).div(&fact.mul_u64(k)));
    }
    let engine = primezeta::logint::log_integral(&Real::from_u64(2, pol), pol).unwrap();
    let gap = engine.sub(&sum).abs();
    assert!(gap < Real::pow10(-50, pol), "li(2) naive vs engine: {gap}");
    assert_eq!(sum.format_digits(20), "1.0451637801174927848");
}

/// Series route vs Mobius route across the grid s in {1.05 .. 1.4}: the
/// difference stays within ten times the recorded first-omitted-term model.
#[test]
fn series_route_grid_agreement() {
    let pol = PrecisionPolicy::new(30);
    let table = alpha_table_mobius(11, pol).unwrap();
    for s_text in ["1.05", "1.1", "1.2", "1.3", "1.4"] {
        let s = Real::parse(s_text, pol).unwrap();
        let series = prime_zeta_series(&s, &table, 10, pol).unwrap();
        let mobius = prime_zeta_mobius(&s, pol).unwrap();
        let gap = series.value.sub(&mobius.value).abs();
        let gate = series.error_estimate.mul_u64(10);
        assert!(gap <= gate, "s={s_text}: gap {gap} vs model x10 {gate}");
    }
}

/// P^(m) against central finite differences of the direct route, m in {1,2}
/// at s in {2, 3}, step 1e-6, matching truncation so the prime tails cancel.
#[test]
fn derivative_matches_finite_differences() {
    let pol = PrecisionPolicy::new(30);
    let sieve = PrimeSieve::build(10_000).unwrap();
    let h = Real::pow10(-6, pol);
    for s0 in [2u64, 3] {
        let s = Real::from_u64(s0, pol);
        let up = prime_zeta_direct(&s.add(&h), pol, &sieve).unwrap().value;
        let mid = prime_zeta_direct(&s, pol, &sieve).unwrap().value;
        let dn = prime_zeta_direct(&s.sub(&h), pol, &sieve).unwrap().value;
        // P' = -(sum log p / p^s)
        let d1 = prime_zeta_derivative(1, &s, &sieve, pol).unwrap();
        let fd1 = up.sub(&dn).div(&h.mul_u64(2));
        let gap1 = fd1.add(&d1).abs().to_f64();
        assert!(gap1 < 1e-6, "s={s0} m=1: {gap1:.2e}");
        // P'' = +(sum log^2 p / p^s)
        let d2 = prime_zeta_derivative(2, &s, &sieve, pol).unwrap();
        let fd2 = up.add(&dn).sub(&mid.mul_u64(2)).div(&h.mul(&h));
        let gap2 = fd2.sub(&d2).abs().to_f64();
        assert!(gap2 < 1e-6, "s={s0} m=2: {gap2:.2e}");
    }
}

/// Pushing the Mobius cutoff far beyond its stopping rule (via a much larger
/// guard) changes no digit the original certificate claimed.
#[test]
fn truncation_robustness_under_deeper_cutoffs() {
    let base = PrecisionPolicy::new(30); // K ~ working * 3.3
    let deep = PrecisionPolicy::with_guard(30, 60).unwrap(); // nearly doubled K
    let t_base = alpha_table_mobius(6, base).unwrap();
    let t_deep = alpha_table_mobius(6, deep).unwrap();
    for n in 0..=6 {
        let a = &t_base.get(n, primezeta::alpha::AlphaMethod::Mobius).unwrap().value;
        let b = &t_deep.get(n, primezeta::alpha::AlphaMethod::Mobius).unwrap().value;
        let a30 = a.format_digits(30);
        let b30 = b.format_digits(30);
        assert_eq!(a30, b30, "alpha_{n} certified digits drifted");
    }
}
