//! P(s) = sum_p p^-s on the real axis s > 1 by four routes: direct
//! summation, Mobius inversion of log zeta, the s = 1 series expansion, and
//! the remainder-integral continuation
//! P(s) = log(1/(s-1)) + s int_1^T t^(-s-1) [pi(t) - li(t)] dt.
//!
//! Real evaluation at or below s = 1 is rejected everywhere: the expansion
//! branch cut sits on (1/2, 1] and no side convention is fixed there.

use crate::alpha::{AlphaMethod, AlphaTable};
use crate::error::{Error, Result};
use crate::logint::{exp_integral_e1, log_integral};
use crate::mobius::MobiusTable;
use crate::real::{PrecisionPolicy, Real};
use crate::sieve::PrimeSieve;
use crate::zeta::zeta_value;

/// Evaluation route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeZetaMethod {
    Direct,
    Mobius,
    Series,
    RemainderIntegral,
}

impl PrimeZetaMethod {
    pub fn name(&self) -> &'static str {
        match self {
            PrimeZetaMethod::Direct => "direct",
            PrimeZetaMethod::Mobius => "mobius",
            PrimeZetaMethod::Series => "series",
            PrimeZetaMethod::RemainderIntegral => "remainder_integral",
        }
    }
}

/// A value of P(s) with its recorded error bound or model (never absent).
#[derive(Debug, Clone)]
pub struct PrimeZetaValue {
    pub s: Real,
    pub value: Real,
    pub method: PrimeZetaMethod,
    pub error_estimate: Real,
    /// Direct route only: the estimated prime tail sum beyond the sieve,
    /// int_N^inf t^-s / log t dt = E1((s-1) log N). Adding it moves the
    /// bare sum onto the true value up to the remainder-term fluctuation.
    pub tail_correction: Option<Real>,
}

impl PrimeZetaValue {
    /// Bare value plus the recorded tail correction, when one exists.
    pub fn corrected_value(&self) -> Real {
        match &self.tail_correction {
            Some(t) => self.value.add(t),
            None => self.value.clone(),
        }
    }
}

fn require_s_above_1(s: &Real, op: &'static str, policy: PrecisionPolicy) -> Result<()> {
    if *s <= Real::one(policy) {
        return Err(Error::branch(
            op,
            format!("P(s) diverges at s = 1 and real evaluation below 1 sits on the branch cut; got s = {s}"),
        ));
    }
    Ok(())
}

/// Direct summation over sieve primes: sum_{p<=N} p^-s.
///
/// The returned value is the bare partial sum; `error_estimate` is the crude
/// composite-tail model N^(1-s)/(s-1) and `tail_correction` the refined
/// li-density tail estimate.
pub fn prime_zeta_direct(s: &Real, policy: PrecisionPolicy, sieve: &PrimeSieve) -> Result<PrimeZetaValue> {
    require_s_above_1(s, "prime_zeta_direct", policy)?;
    let n = sieve.limit();
    let int_s = match s.floor_u64() {
        Ok((k, true)) => Some(k as i64),
        _ => None,
    };
    // forward per-segment partial sums at full precision, merged in order
    let partials: Vec<Real> = sieve.map_segments_ordered(|seg| {
        let mut acc = Real::zero(policy);
        seg.for_each_prime(|p| {
            let term = match int_s {
                Some(k) => Real::from_u64(p, policy).powi(-k),
                None => Real::from_u64(p, policy).ln().mul(s).neg().exp(),
            };
            acc = acc.add(&term);
        });
        acc
    });
    let mut value = Real::zero(policy);
    for part in &partials {
        value = value.add(part);
    }
    let s_minus_1 = s.sub(&Real::one(policy));
    let nr = Real::from_u64(n, policy);
    // N^(1-s)/(s-1)
    let crude = nr.pow(&s_minus_1.neg()).div(&s_minus_1);
    let tail = exp_integral_e1(&s_minus_1.mul(&nr.ln()), policy);
    Ok(PrimeZetaValue {
        s: s.clone(),
        value,
        method: PrimeZetaMethod::Direct,
        error_estimate: crude,
        tail_correction: Some(tail),
    })
}

/// Mobius inversion: P(s) = sum_{k>=1} mu(k)/k log zeta(ks), truncated when
/// the leading Dirichlet term 2^-ks of log zeta(ks) drops below one working
/// ulp.
pub fn prime_zeta_mobius(s: &Real, policy: PrecisionPolicy) -> Result<PrimeZetaValue> {
    require_s_above_1(s, "prime_zeta_mobius", policy)?;
    let s_f64 = s.to_f64();
    let wd = policy.working_digits() as f64;
    let k_max = (wd * std::f64::consts::LN_10 / (s_f64 * std::f64::consts::LN_2)).ceil() as u64 + 2;
    let mobius = MobiusTable::build(k_max + 1)?;
    let mut value = Real::zero(policy);
    for k in 1..=k_max {
        let mu = if k == 1 { 1 } else { mobius.mu(k) };
        if mu == 0 {
            continue;
        }
        let ks = s.mul_u64(k);
        let log_zeta = zeta_value(&ks, policy)?.log_zeta();
        let mut term = log_zeta.div_u64(k);
        if mu < 0 {
            term = term.neg();
        }
        value = value.add(&term);
    }
    // tail: |log zeta(ks)| <= 2^(1-ks) for ks >= 2, geometric in k
    let tail = Real::from_u64(2, policy)
        .pow(&s.mul_u64(k_max + 1).neg())
        .mul_u64(4);
    Ok(PrimeZetaValue {
        s: s.clone(),
        value,
        method: PrimeZetaMethod::Mobius,
        error_estimate: tail,
        tail_correction: None,
    })
}

/// The s = 1 expansion: log(1/(s-1)) + sum_{n<=N} alpha_n (s-1)^n / n!.
///
/// Requires |s-1| < 1/2 (radius of the regular part) and real s > 1 so the
/// log term is real. The table must hold the Mobius-route alpha_n up to
/// n_terms + 1; the last coefficient prices the truncation error model
/// |alpha_{N+1}| |s-1|^(N+1) / (N+1)!.
pub fn prime_zeta_series(
    s: &Real,
    alpha: &AlphaTable,
    n_terms: usize,
    policy: PrecisionPolicy,
) -> Result<PrimeZetaValue> {
    require_s_above_1(s, "prime_zeta_series", policy)?;
    let h = s.sub(&Real::one(policy));
    let half = Real::parse("0.5", policy).expect("constant");
    if h.abs() >= half {
        return Err(Error::OutOfDisk { s: s.to_decimal_string() });
    }
    let coeff = |n: usize| -> Result<Real> {
        alpha
            .get(n, AlphaMethod::Mobius)
            .map(|e| e.value.clone())
            .ok_or_else(|| Error::UnsupportedOrder {
                n,
                msg: "alpha table does not hold the Mobius-route coefficient".into(),
            })
    };
    let mut value = h.recip().ln();
    let mut h_pow = Real::one(policy);
    let mut fact = Real::one(policy);
    for n in 0..=n_terms {
        if n > 0 {
            h_pow = h_pow.mul(&h);
            fact = fact.mul_u64(n as u64);
        }
        value = value.add(&coeff(n)?.mul(&h_pow).div(&fact));
    }
    let error_model = coeff(n_terms + 1)?
        .abs()
        .mul(&h_pow.mul(&h).abs())
        .div(&fact.mul_u64(n_terms as u64 + 1));
    Ok(PrimeZetaValue {
        s: s.clone(),
        value,
        method: PrimeZetaMethod::Series,
        error_estimate: error_model,
        tail_correction: None,
    })
}

/// sum_{p<=N} log^m(p) p^-s: the magnitude of the m-th derivative of P.
/// The derivative itself is P^(m)(s) = (-1)^m times this sum (the sign
/// convention is left to the caller so no route silently flips it).
pub fn prime_zeta_derivative(
    m: usize,
    s: &Real,
    sieve: &PrimeSieve,
    policy: PrecisionPolicy,
) -> Result<Real> {
    require_s_above_1(s, "prime_zeta_derivative", policy)?;
    let int_s = match s.floor_u64() {
        Ok((k, true)) => Some(k as i64),
        _ => None,
    };
    let partials: Vec<Real> = sieve.map_segments_ordered(|seg| {
        let mut acc = Real::zero(policy);
        seg.for_each_prime(|p| {
            let pr = Real::from_u64(p, policy);
            let lp = pr.ln();
            let base = match int_s {
                Some(k) => pr.powi(-k),
                None => lp.mul(s).neg().exp(),
            };
            acc = acc.add(&base.mul(&lp.powi(m as i64)));
        });
        acc
    });
    let mut value = Real::zero(policy);
    for part in &partials {
        value = value.add(part);
    }
    Ok(value)
}

/// The Eq-(42)-style continuation truncated at T:
/// log(1/(s-1)) + s int_1^T t^(-s-1) f(t) dt, f = pi - li.
///
/// The pi part is exact between prime jumps:
/// s int t^(-s-1) pi dt = sum_{p<=T} p^-s - pi(T) T^-s. The li part
/// integrates by parts; the t -> 1 divergence cancels analytically against
/// a -log(s-1), leaving -T^-s li(T) + log(1/(s-1)) - E1((s-1) log T).
/// The recorded tail model is T^(1/2-s) log T.
pub fn prime_zeta_remainder_integral(
    s: &Real,
    t: u64,
    sieve: &PrimeSieve,
    policy: PrecisionPolicy,
) -> Result<PrimeZetaValue> {
    require_s_above_1(s, "prime_zeta_remainder_integral", policy)?;
    if t < 2 {
        return Err(Error::domain("prime_zeta_remainder_integral", "requires T >= 2"));
    }
    if t > sieve.limit() {
        return Err(Error::OutOfRange { x: t.to_string(), limit: sieve.limit() });
    }
    let int_s = match s.floor_u64() {
        Ok((k, true)) => Some(k as i64),
        _ => None,
    };
    let mut partial = Real::zero(policy);
    sieve.for_each_prime(2, t, |p| {
        let term = match int_s {
            Some(k) => Real::from_u64(p, policy).powi(-k),
            None => Real::from_u64(p, policy).ln().mul(s).neg().exp(),
        };
        partial = partial.add(&term);
    })?;
    let tr = Real::from_u64(t, policy);
    let log_t = tr.ln();
    let s_minus_1 = s.sub(&Real::one(policy));
    let log_term = s_minus_1.recip().ln();
    let t_pow = match int_s {
        Some(k) => tr.powi(-k),
        None => log_t.mul(s).neg().exp(),
    };
    let pi_t = Real::from_u64(sieve.prime_count(t as f64)?.doubled(), policy).div_u64(2);
    let li_t = log_integral(&tr, policy)?;

    let pi_part = partial.sub(&pi_t.mul(&t_pow));
    let li_part = t_pow
        .mul(&li_t)
        .neg()
        .add(&log_term)
        .sub(&exp_integral_e1(&s_minus_1.mul(&log_t), policy));
    let value = log_term.add(&pi_part).sub(&li_part);
    // T^(1/2-s) log T
    let half = Real::parse("0.5", policy).expect("constant");
    let tail_model = tr.pow(&half.sub(s)).mul(&log_t);
    Ok(PrimeZetaValue {
        s: s.clone(),
        value,
        method: PrimeZetaMethod::RemainderIntegral,
        error_estimate: tail_model,
        tail_correction: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::alpha_table_mobius;

    fn p30() -> PrecisionPolicy {
        PrecisionPolicy::new(30)
    }

    fn r(s: &str) -> Real {
        Real::parse(s, p30()).unwrap()
    }

    #[test]
    fn mobius_at_2_reference() {
        // P(2) = 0.45224742004106549850654336483222 (independent reference)
        let v = prime_zeta_mobius(&Real::from_u64(2, p30()), p30()).unwrap();
        assert_eq!(v.value.format_digits(25), "0.4522474200410654985065434");
        assert!(v.error_estimate < p30().target_eps());
    }

    #[test]
    fn mobius_between_1_and_2() {
        let v = prime_zeta_mobius(&r("1.2"), p30()).unwrap();
        assert_eq!(v.value.format_digits(20), "1.5197683128182746490");
    }

    #[test]
    fn rejects_pole_and_cut() {
        let pol = p30();
        let one = Real::one(pol);
        assert!(prime_zeta_mobius(&one, pol).is_err());
        assert!(prime_zeta_mobius(&r("0.8"), pol).is_err());
        let sieve = PrimeSieve::build(1000).unwrap();
        assert!(prime_zeta_direct(&one, pol, &sieve).is_err());
        assert!(prime_zeta_remainder_integral(&one, 1000, &sieve, pol).is_err());
    }

    #[test]
    fn direct_small_sieve_with_tail() {
        let pol = p30();
        let sieve = PrimeSieve::build(100_000).unwrap();
        let v = prime_zeta_direct(&Real::from_u64(2, pol), pol, &sieve).unwrap();
        // bare sum is short of P(2) by roughly 1/(N log N) ~ 8.7e-7
        let p2 = r("0.452247420041065498506543364832");
        let bare_gap = v.value.sub(&p2).to_f64();
        assert!(bare_gap < 0.0 && bare_gap.abs() < 1.1e-6);
        // corrected value lands much closer
        let corr_gap = v.corrected_value().sub(&p2).to_f64().abs();
        assert!(corr_gap < 3e-9, "corrected gap {corr_gap}");
        // crude model bounds the bare gap
        assert!(v.error_estimate.to_f64() > bare_gap.abs());
    }

    #[test]
    fn direct_tail_model_reported_for_slow_s() {
        // s = 1.05: the tail model must exceed 1e-3 and be reported
        let pol = p30();
        let sieve = PrimeSieve::build(10_000).unwrap();
        let v = prime_zeta_direct(&r("1.05"), pol, &sieve).unwrap();
        assert!(v.error_estimate.to_f64() > 1e-3);
    }

    #[test]
    fn p4_leading_term_dominance() {
        let pol = p30();
        let sieve = PrimeSieve::build(100_000).unwrap();
        let v = prime_zeta_direct(&Real::from_u64(4, pol), pol, &sieve).unwrap();
        // sum_{p>=3} p^-4 < int_2^inf t^-4 dt = 1/24 (actual: 0.01449)
        let gap = v.value.sub(&r("0.0625")).to_f64();
        assert!(gap > 0.0 && gap < 1.0 / 24.0, "P(4) - 2^-4 = {gap}");
    }

    #[test]
    fn series_inside_disk() {
        let pol = p30();
        let table = alpha_table_mobius(11, pol).unwrap();
        let v = prime_zeta_series(&r("1.2"), &table, 10, pol).unwrap();
        let mob = prime_zeta_mobius(&r("1.2"), pol).unwrap();
        let gap = v.value.sub(&mob.value).abs();
        assert!(gap.to_f64() < 1e-3);
        // the recorded error model covers the actual gap
        assert!(gap <= v.error_estimate, "gap {gap} > model {}", v.error_estimate);
    }

    #[test]
    fn series_rejects_outside_disk_and_cut() {
        let pol = p30();
        let table = alpha_table_mobius(3, pol).unwrap();
        assert!(matches!(
            prime_zeta_series(&r("1.5"), &table, 2, pol),
            Err(Error::OutOfDisk { .. })
        ));
        assert!(prime_zeta_series(&r("0.9"), &table, 2, pol).is_err());
    }

    #[test]
    fn series_edge_of_disk_reports_model() {
        let pol = p30();
        let table = alpha_table_mobius(11, pol).unwrap();
        let v = prime_zeta_series(&r("1.499"), &table, 10, pol).unwrap();
        // slow convergence: the model must admit it (> 1e-6 scale)
        assert!(v.error_estimate.to_f64() > 1e-6);
    }

    #[test]
    fn derivative_reduces_to_direct_at_m0() {
        let pol = p30();
        let sieve = PrimeSieve::build(10_000).unwrap();
        let d0 = prime_zeta_derivative(0, &Real::from_u64(2, pol), &sieve, pol).unwrap();
        let direct = prime_zeta_direct(&Real::from_u64(2, pol), pol, &sieve).unwrap();
        assert_eq!(d0, direct.value);
    }

    #[test]
    fn derivative_positive_terms() {
        let pol = p30();
        let sieve = PrimeSieve::build(1000).unwrap();
        let d2 = prime_zeta_derivative(2, &Real::from_u64(3, pol), &sieve, pol).unwrap();
        assert!(d2.is_positive());
    }

    #[test]
    fn remainder_integral_close_at_s2() {
        let pol = p30();
        let sieve = PrimeSieve::build(1_000_000).unwrap();
        let v = prime_zeta_remainder_integral(&Real::from_u64(2, pol), 1_000_000, &sieve, pol).unwrap();
        // oracle gap vs P(2): 1.26e-10
        let p2 = r("0.452247420041065498506543364832");
        assert!(v.value.sub(&p2).abs().to_f64() < 1e-9);
        assert!(v.error_estimate.to_f64() < 1e-7);
    }

    #[test]
    fn remainder_integral_at_1_1() {
        let pol = p30();
        let sieve = PrimeSieve::build(1_000_000).unwrap();
        let v = prime_zeta_remainder_integral(&r("1.1"), 1_000_000, &sieve, pol).unwrap();
        let mob = prime_zeta_mobius(&r("1.1"), pol).unwrap();
        let gap = v.value.sub(&mob.value).abs().to_f64();
        assert!(gap < v.error_estimate.to_f64(), "gap {gap} vs model {}", v.error_estimate);
    }

    #[test]
    fn series_approaches_log_singularity_plus_alpha0() {
        // as s -> 1+ the value minus log(1/(s-1)) tends to alpha_0
        let pol = p30();
        let table = alpha_table_mobius(11, pol).unwrap();
        let s = r("1.000001");
        let v = prime_zeta_series(&s, &table, 10, pol).unwrap();
        let log_term = s.sub(&Real::one(pol)).recip().ln();
        let alpha0 = r("-0.315718452053890076851085251474");
        let gap = v.value.sub(&log_term).sub(&alpha0).abs().to_f64();
        // remaining terms are alpha_1 h + ... ~ 1.3e-6
        assert!(gap < 1e-5, "regular part off by {gap}");
        // the Mobius route survives this close to the pole too
        let m = prime_zeta_mobius(&s, pol).unwrap();
        assert!(m.value.sub(&v.value).abs().to_f64() < 1e-9);
    }

    #[test]
    fn decreasing_on_grid() {
        let pol = p30();
        let mut prev: Option<Real> = None;
        for i in 0..20 {
            // s = 1.1 + 4.9 i / 19
            let s = r("1.1").add(&Real::from_u64(49 * i, pol).div_u64(190));
            let v = prime_zeta_mobius(&s, pol).unwrap();
            if let Some(p) = prev {
                assert!(v.value < p, "P(s) must decrease, step {i}");
            }
            prev = Some(v.value);
        }
    }
}
