//! Truncated power series over [`Real`] with formal logarithm and exponential.
//!
//! A series is a coefficient vector c_0..c_N about a stated expansion point;
//! all ring operations truncate consistently at order N.

use crate::error::{Error, Result};
use crate::real::{PrecisionPolicy, Real};

/// Taylor polynomial c_0 + c_1 (s-a) + ... + c_N (s-a)^N about center a.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    center: Real,
    coeffs: Vec<Real>,
}

impl PowerSeries {
    pub fn new(center: Real, coeffs: Vec<Real>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        assert!(
            coeffs.iter().all(|c| c.policy() == center.policy()),
            "mixed precision policies in series"
        );
        PowerSeries { center, coeffs }
    }

    /// Constant series of the given order (all higher coefficients zero).
    pub fn constant(value: Real, order: usize) -> Self {
        let mut coeffs = vec![Real::zero(value.policy()); order + 1];
        coeffs[0] = value.clone();
        PowerSeries { center: Real::zero(value.policy()), coeffs }
    }

    pub fn center(&self) -> &Real {
        &self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &Real {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn policy(&self) -> PrecisionPolicy {
        self.center.policy()
    }

    fn check_compatible(&self, other: &PowerSeries) {
        assert_eq!(self.center, other.center, "series centers differ");
        assert_eq!(self.order(), other.order(), "series orders differ");
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        self.check_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        PowerSeries { center: self.center.clone(), coeffs }
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        self.check_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect();
        PowerSeries { center: self.center.clone(), coeffs }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        self.check_compatible(other);
        let n = self.order();
        let zero = Real::zero(self.policy());
        let mut coeffs = vec![zero; n + 1];
        for i in 0..=n {
            for j in 0..=(n - i) {
                coeffs[i + j] = coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        PowerSeries { center: self.center.clone(), coeffs }
    }

    pub fn scale(&self, k: &Real) -> PowerSeries {
        let coeffs = self.coeffs.iter().map(|c| c.mul(k)).collect();
        PowerSeries { center: self.center.clone(), coeffs }
    }

    /// Evaluates the polynomial at offset h from the center (Horner).
    pub fn eval_offset(&self, h: &Real) -> Real {
        let mut acc = self.coeffs.last().unwrap().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(h).add(c);
        }
        acc
    }
}

/// Formal logarithm of a series with positive constant term.
///
/// Uses the standard recurrence from g' f = f': only ring operations and
/// divisions by c_0. A non-positive constant term is a branch ambiguity and
/// is rejected.
pub fn series_log(f: &PowerSeries) -> Result<PowerSeries> {
    if !f.coeff(0).is_positive() {
        return Err(Error::domain(
            "series_log",
            "constant coefficient must be positive (branch would be ambiguous)",
        ));
    }
    let n = f.order();
    let c0 = f.coeff(0);
    let mut g: Vec<Real> = Vec::with_capacity(n + 1);
    g.push(if f.coeff(0) == &Real::one(f.policy()) {
        Real::zero(f.policy())
    } else {
        c0.ln()
    });
    for m in 1..=n {
        // g_m = (f_m - (1/m) sum_{j=1}^{m-1} j g_j f_{m-j}) / c_0
        let mut s = f.coeff(m).clone();
        for (j, gj) in g.iter().enumerate().skip(1) {
            let t = gj.mul_u64(j as u64).mul(f.coeff(m - j));
            s = s.sub(&t.div_u64(m as u64));
        }
        g.push(s.div(c0));
    }
    Ok(PowerSeries::new(f.center().clone(), g))
}

/// Formal exponential of a series.
pub fn series_exp(g: &PowerSeries) -> PowerSeries {
    let n = g.order();
    let mut h: Vec<Real> = Vec::with_capacity(n + 1);
    h.push(if g.coeff(0).is_zero() { Real::one(g.policy()) } else { g.coeff(0).exp() });
    for m in 1..=n {
        // m h_m = sum_{k=1}^{m} k g_k h_{m-k}
        let mut s = Real::zero(g.policy());
        for k in 1..=m {
            s = s.add(&g.coeff(k).mul_u64(k as u64).mul(&h[m - k]));
        }
        h.push(s.div_u64(m as u64));
    }
    PowerSeries::new(g.center().clone(), h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::PrecisionPolicy;

    fn p30() -> PrecisionPolicy {
        PrecisionPolicy::new(30)
    }

    fn series(coeffs: &[&str], pol: PrecisionPolicy) -> PowerSeries {
        let c = coeffs.iter().map(|s| Real::parse(s, pol).unwrap()).collect();
        PowerSeries::new(Real::one(pol), c)
    }

    #[test]
    fn log_of_constant_one_is_zero() {
        let f = PowerSeries::constant(Real::one(p30()), 5);
        let g = series_log(&f).unwrap();
        assert!(g.coeffs().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn log_of_one_plus_x_is_mercator() {
        let pol = p30();
        let f = series(&["1", "1", "0", "0"], pol);
        let g = series_log(&f).unwrap();
        let eps = pol.working_eps();
        assert!(g.coeff(0).is_zero());
        assert!((g.coeff(1).sub(&Real::one(pol))).abs() < eps);
        assert!((g.coeff(2).add(&Real::parse("0.5", pol).unwrap())).abs() < eps);
        let third = Real::one(pol).div_u64(3);
        assert!((g.coeff(3).sub(&third)).abs() < eps);
    }

    #[test]
    fn log_rejects_nonpositive_constant_term() {
        let pol = p30();
        assert!(series_log(&series(&["0", "1"], pol)).is_err());
        assert!(series_log(&series(&["-2", "1"], pol)).is_err());
    }

    #[test]
    fn exp_log_round_trip_fixed_vector() {
        let pol = p30();
        let g = series(&["0", "0.3", "-0.125", "0.0625", "0.41", "-0.77"], pol);
        let f = series_exp(&g);
        let back = series_log(&f).unwrap();
        let tol = pol.target_eps();
        for i in 0..=g.order() {
            assert!(
                (back.coeff(i).sub(g.coeff(i))).abs() < tol,
                "coefficient {i} drifted: {} vs {}",
                back.coeff(i),
                g.coeff(i)
            );
        }
    }

    #[test]
    fn mul_truncates_consistently() {
        let pol = p30();
        let f = series(&["1", "2", "3"], pol);
        let g = series(&["4", "5", "6"], pol);
        let h = f.mul(&g);
        // (1+2x+3x^2)(4+5x+6x^2) = 4 + 13x + 28x^2 + ...
        assert_eq!(h.coeff(0), &Real::from_u64(4, pol));
        assert_eq!(h.coeff(1), &Real::from_u64(13, pol));
        assert_eq!(h.coeff(2), &Real::from_u64(28, pol));
        assert_eq!(h.order(), 2);
    }

    #[test]
    fn eval_offset_horner() {
        let pol = p30();
        let f = series(&["1", "1", "1"], pol);
        let h = Real::parse("0.5", pol).unwrap();
        let v = f.eval_offset(&h);
        assert!((v.sub(&Real::parse("1.75", pol).unwrap())).abs() < pol.working_eps());
    }
}
