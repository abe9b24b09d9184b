//! High-precision zeta values and derivatives at real points a >= 2 (a > 1
//! for the plain value), and Taylor coefficients of log zeta.
//!
//! zeta^(m)(a) = sum_j (-log j)^m j^-a is computed as a direct sum over
//! j < J plus an Euler-Maclaurin tail: the integral int_J^inf (log t)^m t^-a
//! dt in closed form, the midpoint term, and eight Bernoulli corrections.
//! J doubles until the first omitted Bernoulli term falls below one working
//! ulp, which keeps the asymptotic series in its convergent-looking regime.

use crate::error::{Error, Result};
use crate::real::{PrecisionPolicy, Real};
use crate::series::{series_log, PowerSeries};

/// B_2..B_26 as exact (numerator, denominator) pairs.
const BERNOULLI: [(i64, i64); 13] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (3617, -510), // B_16 = -3617/510
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
];

/// Number of Bernoulli correction terms in the tail.
const EM_TERMS: usize = 8;

pub(crate) fn bernoulli(r: usize) -> (i64, i64) {
    BERNOULLI[r - 1]
}

/// Derivatives of t^(-a) (log t)^m, kept as t^(-a-u) * sum_i c_i (log t)^i.
struct LogPolyDeriv {
    a: Real,
    u: u64,
    coeffs: Vec<Real>,
}

impl LogPolyDeriv {
    fn new(a: &Real, m: usize, policy: PrecisionPolicy) -> Self {
        let mut coeffs = vec![Real::zero(policy); m + 1];
        coeffs[m] = Real::one(policy);
        LogPolyDeriv { a: a.clone(), u: 0, coeffs }
    }

    /// One d/dt step: c'_i = (i+1) c_{i+1} - (a+u) c_i, u -> u+1.
    fn differentiate(&mut self) {
        let policy = self.a.policy();
        let au = self.a.add(&Real::from_u64(self.u, policy));
        let m = self.coeffs.len() - 1;
        let mut next = vec![Real::zero(policy); m + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            let mut v = self.coeffs[i].mul(&au).neg();
            if i < m {
                v = v.add(&self.coeffs[i + 1].mul_u64(i as u64 + 1));
            }
            *slot = v;
        }
        self.coeffs = next;
        self.u += 1;
    }

    /// Evaluates at t with precomputed log t and t^-a.
    fn eval(&self, t: u64, log_t: &Real, t_pow_neg_a: &Real) -> Real {
        let policy = self.a.policy();
        let mut poly = Real::zero(policy);
        let mut lp = Real::one(policy);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                lp = lp.mul(log_t);
            }
            poly = poly.add(&c.mul(&lp));
        }
        let tu = Real::from_u64(t, policy).powi(-(self.u as i64));
        poly.mul(t_pow_neg_a).mul(&tu)
    }
}

/// f64 estimate of the first omitted Bernoulli term at truncation point j,
/// for the highest derivative order in the call. Used only to pick J.
fn em_next_term_estimate(a: f64, order: usize, j: u64) -> f64 {
    let d = 2 * EM_TERMS + 1; // order of the derivative in the omitted term
    let mut c = vec![0.0f64; order + 1];
    c[order] = 1.0;
    let mut u = 0.0f64;
    for _ in 0..d {
        let mut next = vec![0.0f64; order + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            let mut v = -(a + u) * c[i];
            if i < order {
                v += c[i + 1] * (i + 1) as f64;
            }
            *slot = v;
        }
        c = next;
        u += 1.0;
    }
    let l = (j as f64).ln();
    let mut poly = 0.0f64;
    let mut lp = 1.0f64;
    for ci in &c {
        poly += ci.abs() * lp;
        lp *= l.max(1.0);
    }
    // B_18/18! ~ 8.59e-3 / 6.4e15
    let b_over_fact = 8.6e-3 / 6.4e15;
    let ln_mag = poly.max(f64::MIN_POSITIVE).ln() - (a + u) * (j as f64).ln();
    b_over_fact * ln_mag.exp()
}

/// Truncation point: the design-rule seed working_digits * 1.5 / log(a+1),
/// doubled until the omitted Euler-Maclaurin term is below one working ulp.
fn choose_j(a_f64: f64, order: usize, policy: PrecisionPolicy) -> u64 {
    let wd = policy.working_digits() as f64;
    let seed = (wd * 1.5 / (a_f64 - 1.0 + 2.0).ln()).ceil() as u64;
    let mut j = seed.max(16);
    let threshold = 10f64.powf(-(wd + 2.0));
    while em_next_term_estimate(a_f64, order, j) > threshold {
        j *= 2;
        assert!(j < 1 << 34, "Euler-Maclaurin truncation failed to stabilize");
    }
    j
}

/// zeta(a), zeta'(a), ..., zeta^(M)(a) at a real point.
#[derive(Debug, Clone)]
pub struct ZetaDerivatives {
    point: Real,
    values: Vec<Real>,
    zeta_minus_1: Real,
    truncation_j: u64,
}

impl ZetaDerivatives {
    pub fn point(&self) -> &Real {
        &self.point
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    /// zeta^(m)(a).
    pub fn derivative(&self, m: usize) -> &Real {
        &self.values[m]
    }

    pub fn zeta(&self) -> &Real {
        &self.values[0]
    }

    /// zeta(a) - 1 held to full absolute accuracy (no rounding against the
    /// leading 1), needed for log zeta at large arguments.
    pub fn zeta_minus_1(&self) -> &Real {
        &self.zeta_minus_1
    }

    /// log zeta(a) through log1p of zeta(a)-1: exact even when zeta(a)
    /// rounds to 1 at working precision.
    pub fn log_zeta(&self) -> Real {
        self.zeta_minus_1.ln_1p()
    }

    pub fn truncation_j(&self) -> u64 {
        self.truncation_j
    }
}

/// Cache of ln(j) values shared across repeated derivative calls (the
/// Mobius sum hits the same small j for every k).
#[derive(Default)]
pub(crate) struct LnCache {
    values: Vec<Option<Real>>,
}

impl LnCache {
    fn ln(&mut self, t: u64, policy: PrecisionPolicy) -> Real {
        let i = t as usize;
        if i >= self.values.len() {
            self.values.resize(i + 1, None);
        }
        if let Some(v) = &self.values[i] {
            debug_assert!(v.policy() == policy);
            return v.clone();
        }
        let v = Real::from_u64(t, policy).ln();
        self.values[i] = Some(v.clone());
        v
    }
}

/// Derivatives of zeta at real a >= 2, orders 0..=order (order <= 64).
pub fn zeta_derivatives(a: &Real, order: usize, policy: PrecisionPolicy) -> Result<ZetaDerivatives> {
    if *a < Real::from_u64(2, policy) {
        return Err(Error::domain(
            "zeta_derivatives",
            format!("requires a >= 2, got {a} (use zeta_value for a in (1,2))"),
        ));
    }
    if order > 64 {
        return Err(Error::domain("zeta_derivatives", "order capped at 64"));
    }
    Ok(zeta_derivatives_unchecked(a, order, policy, None, &mut LnCache::default()))
}

/// Same with a caller-held ln cache (used by the coefficient engine).
pub(crate) fn zeta_derivatives_cached(
    a: &Real,
    order: usize,
    policy: PrecisionPolicy,
    cache: &mut LnCache,
) -> Result<ZetaDerivatives> {
    if *a < Real::from_u64(2, policy) {
        return Err(Error::domain("zeta_derivatives", format!("requires a >= 2, got {a}")));
    }
    Ok(zeta_derivatives_unchecked(a, order, policy, None, cache))
}

/// Convenience wrapper for integer arguments.
pub fn zeta_derivatives_int(k: u64, order: usize, policy: PrecisionPolicy) -> Result<ZetaDerivatives> {
    zeta_derivatives(&Real::from_u64(k, policy), order, policy)
}

/// Plain zeta(a) for any real a > 1; the a >= 2 restriction is lifted for
/// the value itself (needed by the Mobius route's k = 1 term).
pub fn zeta_value(a: &Real, policy: PrecisionPolicy) -> Result<ZetaDerivatives> {
    if *a <= Real::one(policy) {
        return Err(Error::domain("zeta_value", format!("requires a > 1, got {a}")));
    }
    Ok(zeta_derivatives_unchecked(a, 0, policy, None, &mut LnCache::default()))
}

fn zeta_derivatives_unchecked(
    a: &Real,
    order: usize,
    policy: PrecisionPolicy,
    forced_j: Option<u64>,
    lns: &mut LnCache,
) -> ZetaDerivatives {
    let a_f64 = a.to_f64();
    let j_cut = forced_j.unwrap_or_else(|| choose_j(a_f64, order, policy));

    // integer exponents take the exact powi path
    let int_a = match a.floor_u64() {
        Ok((k, true)) => Some(k),
        _ => None,
    };
    let pow_neg_a = |t: u64| -> Real {
        match int_a {
            Some(k) => Real::from_u64(t, policy).powi(-(k as i64)),
            None => Real::from_u64(t, policy).ln().mul(a).neg().exp(),
        }
    };

    // direct part: j = 2 .. j_cut-1
    let mut direct = vec![Real::zero(policy); order + 1];
    for t in 2..j_cut {
        let lt = lns.ln(t, policy);
        let pa = pow_neg_a(t);
        let mut lp = pa.clone();
        direct[0] = direct[0].add(&lp);
        for slot in direct.iter_mut().skip(1) {
            lp = lp.mul(&lt);
            *slot = slot.add(&lp);
        }
    }

    // Euler-Maclaurin tail from j_cut
    let log_j = lns.ln(j_cut, policy);
    let pa_j = pow_neg_a(j_cut);
    let b = a.sub(&Real::one(policy));
    // e^{-b log J} = J^{-a} * J
    let exp_neg_bl = pa_j.mul_u64(j_cut);
    let mut tails = Vec::with_capacity(order + 1);
    for m in 0..=order {
        // integral: e^{-bL} sum_{i=0}^{m} (m!/i!) L^i / b^{m-i+1}
        let mut integral = Real::zero(policy);
        let mut fact_ratio = Real::one(policy); // m!/i! for i = m down to 0
        let mut i = m as i64;
        loop {
            let li = log_j.powi(i);
            let bp = b.powi(m as i64 - i + 1);
            integral = integral.add(&fact_ratio.mul(&li).div(&bp));
            if i == 0 {
                break;
            }
            fact_ratio = fact_ratio.mul_u64(i as u64);
            i -= 1;
        }
        integral = integral.mul(&exp_neg_bl);

        // midpoint term: f(J)/2
        let f_j = log_j.powi(m as i64).mul(&pa_j);
        let mut tail = integral.add(&f_j.div_u64(2));

        // Bernoulli corrections: - sum_r B_2r/(2r)! f^(2r-1)(J)
        let mut deriv = LogPolyDeriv::new(a, m, policy);
        let mut fact = Real::one(policy); // (2r)!
        for r in 1..=EM_TERMS {
            deriv.differentiate();
            if r > 1 {
                deriv.differentiate();
            }
            fact = fact.mul_u64(2 * r as u64 - 1).mul_u64(if r == 1 { 2 } else { 2 * r as u64 });
            let (num, den) = bernoulli(r);
            let coeff = Real::from_i64(num, policy).div(&Real::from_i64(den, policy)).div(&fact);
            let f_d = deriv.eval(j_cut, &log_j, &pa_j);
            tail = tail.sub(&coeff.mul(&f_d));
        }
        tails.push(tail);
    }

    let zeta_minus_1 = direct[0].add(&tails[0]);
    let mut values = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let magnitude = direct[m].add(&tails[m]);
        let signed = if m % 2 == 1 { magnitude.neg() } else { magnitude };
        values.push(if m == 0 { signed.add(&Real::one(policy)) } else { signed });
    }

    ZetaDerivatives { point: a.clone(), values, zeta_minus_1, truncation_j: j_cut }
}

/// Taylor coefficients of log zeta about a: coefficient m is
/// (log zeta)^(m)(a) / m!.
#[derive(Debug, Clone)]
pub struct LogZetaTaylor {
    series: PowerSeries,
}

impl LogZetaTaylor {
    pub fn point(&self) -> &Real {
        self.series.center()
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn coeff(&self, m: usize) -> &Real {
        self.series.coeff(m)
    }

    /// (log zeta)^(m)(a) = m! * coeff(m).
    pub fn derivative(&self, m: usize) -> Real {
        let mut fact = Real::one(self.series.policy());
        for i in 2..=m as u64 {
            fact = fact.mul_u64(i);
        }
        self.coeff(m).mul(&fact)
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }
}

/// Builds the zeta Taylor series about a from [`zeta_derivatives`] and
/// applies the formal logarithm.
pub fn log_zeta_taylor(a: &Real, order: usize, policy: PrecisionPolicy) -> Result<LogZetaTaylor> {
    let zd = zeta_derivatives(a, order, policy)?;
    Ok(log_zeta_taylor_from(&zd))
}

/// Same, reusing an existing derivative bundle (shared across callers).
pub fn log_zeta_taylor_from(zd: &ZetaDerivatives) -> LogZetaTaylor {
    let policy = zd.point().policy();
    let order = zd.order();
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut fact = Real::one(policy);
    for m in 0..=order {
        if m > 1 {
            fact = fact.mul_u64(m as u64);
        }
        coeffs.push(zd.derivative(m).div(&fact));
    }
    let f = PowerSeries::new(zd.point().clone(), coeffs);
    let mut logged = series_log(&f).expect("zeta(a) > 1 for a > 1");
    // replace the constant term with the log1p form, exact at large a where
    // zeta(a) rounds to 1
    let mut c: Vec<Real> = logged.coeffs().to_vec();
    c[0] = zd.log_zeta();
    logged = PowerSeries::new(zd.point().clone(), c);
    LogZetaTaylor { series: logged }
}
