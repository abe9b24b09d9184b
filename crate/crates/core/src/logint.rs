//! Logarithmic integral li(x) and the exponential-integral tail helper.

use crate::error::{Error, Result};
use crate::real::{PrecisionPolicy, Real};

/// li(x) for x > 1 via the everywhere-positive series
/// gamma + log log x + sum_{k>=1} (log x)^k / (k k!).
///
/// Terms are positive for x > 1, so there is no cancellation; summation
/// stops once the current term is below one working ulp and the term ratio
/// has fallen under 1/2 (geometric tail below one ulp).
pub fn log_integral(x: &Real, policy: PrecisionPolicy) -> Result<Real> {
    if *x <= Real::one(policy) {
        return Err(Error::domain(
            "log_integral",
            format!("requires x > 1 (series center singularity at 1), got {x}"),
        ));
    }
    let l = x.ln();
    let mut sum = Real::euler_gamma(policy).add(&l.ln());
    let eps = policy.working_eps();
    let mut term = Real::one(policy);
    let mut k: u64 = 0;
    loop {
        k += 1;
        // term_k = L^k / (k k!) = term_{k-1} * L * (k-1) / k^2
        term = if k == 1 {
            l.clone()
        } else {
            term.mul(&l).mul_u64(k - 1).div_u64(k * k)
        };
        sum = sum.add(&term);
        if term < eps {
            // ratio term_{k+1}/term_k = L k / (k+1)^2
            let ratio_num = l.mul_u64(k);
            let ratio_den = Real::from_u64((k + 1) * (k + 1), policy);
            if ratio_num.mul_u64(2) < ratio_den {
                break;
            }
        }
        assert!(k < 1_000_000, "li series failed to terminate");
    }
    Ok(sum)
}

/// E1(x) = int_x^inf e^-t/t dt for x > 0.
///
/// Used for Dirichlet-tail estimates of prime sums (the density at t is
/// 1/log t, so int_N^inf t^-s/log t dt = E1((s-1) log N)). The convergent
/// series loses about x/ln 10 digits to cancellation, so it runs at an
/// inflated internal policy; above x = 30 the asymptotic expansion is
/// already accurate far beyond the working precision of any caller.
pub(crate) fn exp_integral_e1(x: &Real, policy: PrecisionPolicy) -> Real {
    assert!(x.is_positive(), "E1 tail helper requires x > 0");
    let xf = x.to_f64();
    if xf <= 30.0 {
        // inflate to absorb the e^x cancellation
        let extra = (xf / std::f64::consts::LN_10).ceil() as u32 + 5;
        let wide = PrecisionPolicy::with_guard(
            policy.target_digits() + extra,
            policy.guard_digits(),
        )
        .expect("inflated policy");
        let xw = Real::parse(&x.to_string_full(), wide).expect("re-parse at wider policy");
        let mut sum = Real::euler_gamma(wide).neg().sub(&xw.ln());
        let eps = wide.working_eps();
        let mut power = Real::one(wide);
        let mut sign_pos = true;
        let mut k: u64 = 0;
        loop {
            k += 1;
            power = power.mul(&xw).div_u64(k);
            let term = power.div_u64(k);
            sum = if sign_pos { sum.add(&term) } else { sum.sub(&term) };
            sign_pos = !sign_pos;
            if term < eps && k as f64 > xf {
                break;
            }
            assert!(k < 100_000, "E1 series failed to terminate");
        }
        Real::parse(&sum.to_string_full(), policy).expect("narrow back")
    } else {
        // e^-x/x * sum_i (-1)^i i!/x^i, truncated at the smallest term
        let lead = x.neg().exp().div(x);
        let mut sum = Real::one(policy);
        let mut term = Real::one(policy);
        let mut sign_pos = true;
        let mut i: u64 = 0;
        loop {
            i += 1;
            let next = term.mul_u64(i).div(x);
            if next >= term || i as f64 >= xf {
                break;
            }
            term = next;
            sign_pos = !sign_pos;
            sum = if sign_pos { sum.add(&term) } else { sum.sub(&term) };
        }
        lead.mul(&sum)
    }
}
