//! The expansion coefficients alpha_n of P(s) about s = 1, computed to full
//! working precision through the Mobius series
//!
//!   alpha_n = g_n + sum_{k>=2} mu(k)/k * k^n * (log zeta)^(n)(k)
//!
//! plus the hand-coded closed forms for n in {1,2,3} used as cross-checks.

use crate::error::{Error, Result};
use crate::mobius::MobiusTable;
use crate::real::{PrecisionPolicy, Real};
use crate::stieltjes::{g_coefficients_from, g_polynomial, StieltjesTable};
use crate::zeta::{log_zeta_taylor_from, zeta_derivatives_cached, LnCache};

/// How an alpha value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaMethod {
    Mobius,
    Limit,
    Integral,
}

impl AlphaMethod {
    pub fn name(&self) -> &'static str {
        match self {
            AlphaMethod::Mobius => "mobius",
            AlphaMethod::Limit => "limit",
            AlphaMethod::Integral => "integral",
        }
    }
}

/// Where the Mobius series was cut and what the tail costs.
#[derive(Debug, Clone)]
pub struct TruncationReport {
    terms_used: u64,
    last_term_magnitude: Real,
    tail_bound: Real,
}

impl TruncationReport {
    fn new(terms_used: u64, last_term_magnitude: Real, tail_bound: Real) -> Self {
        assert!(
            tail_bound >= last_term_magnitude,
            "tail bound must dominate the last term"
        );
        TruncationReport { terms_used, last_term_magnitude, tail_bound }
    }

    /// K, the first squarefree k excluded from the sum.
    pub fn terms_used(&self) -> u64 {
        self.terms_used
    }

    pub fn last_term_magnitude(&self) -> &Real {
        &self.last_term_magnitude
    }

    pub fn tail_bound(&self) -> &Real {
        &self.tail_bound
    }
}

/// One computed coefficient.
#[derive(Debug, Clone)]
pub struct AlphaEntry {
    pub n: usize,
    pub value: Real,
    pub method: AlphaMethod,
    pub truncation: Option<TruncationReport>,
    /// Recorded bound (Mobius tail) or tolerance model (limit/integral).
    pub tolerance: Real,
}

impl AlphaEntry {
    /// Decimal digits certified by the recorded tolerance, capped at the
    /// policy target.
    pub fn certified_digits(&self) -> u32 {
        let v = self.value.to_f64().abs();
        let t = self.tolerance.to_f64();
        if t <= 0.0 || v == 0.0 {
            return self.value.policy().target_digits();
        }
        let d = (v / t).log10().floor();
        d.clamp(0.0, self.value.policy().target_digits() as f64) as u32
    }
}

/// Coefficients keyed by (n, method); at most one entry per key.
#[derive(Debug, Clone, Default)]
pub struct AlphaTable {
    entries: Vec<AlphaEntry>,
}

impl AlphaTable {
    pub fn insert(&mut self, entry: AlphaEntry) {
        assert!(
            self.get(entry.n, entry.method).is_none(),
            "duplicate alpha entry for (n={}, {})",
            entry.n,
            entry.method.name()
        );
        self.entries.push(entry);
    }

    pub fn get(&self, n: usize, method: AlphaMethod) -> Option<&AlphaEntry> {
        self.entries.iter().find(|e| e.n == n && e.method == method)
    }

    pub fn entries(&self) -> &[AlphaEntry] {
        &self.entries
    }

    /// The comparison certificate between two methods at the same n: the
    /// weaker (larger) of the two recorded tolerances.
    pub fn comparison_tolerance(&self, n: usize, a: AlphaMethod, b: AlphaMethod) -> Option<Real> {
        let ta = &self.get(n, a)?.tolerance;
        let tb = &self.get(n, b)?.tolerance;
        Some(if ta >= tb { ta.clone() } else { tb.clone() })
    }
}

/// Smallest squarefree k with k^n 2^-k below one working ulp. The k-th term
/// of the Mobius series is dominated by the 2^-k leading Dirichlet term of
/// log zeta(k), so this cut leaves a tail under 4 K^n 2^-K.
fn mobius_cutoff(n: usize, policy: PrecisionPolicy, mobius: &MobiusTable) -> u64 {
    let wd = policy.working_digits() as f64;
    let ln10 = std::f64::consts::LN_10;
    let ln2 = std::f64::consts::LN_2;
    let mut k = 2u64;
    loop {
        let log_term = n as f64 * (k as f64).ln() - k as f64 * ln2;
        if log_term < -wd * ln10 && mobius.mu(k) != 0 {
            return k;
        }
        k += 1;
        assert!(k < 1 << 20, "Mobius cutoff failed to resolve");
    }
}

fn tail_bound(n: usize, cutoff: u64, policy: PrecisionPolicy) -> Real {
    // 4 K^n 2^-K
    Real::from_u64(cutoff, policy)
        .powi(n as i64)
        .mul(&Real::from_u64(2, policy).powi(-(cutoff as i64)))
        .mul_u64(4)
}

/// All alpha_0..alpha_{n_max} by the Mobius route, sharing one zeta
/// derivative bundle per k (computed at the highest order still active).
///
/// Summation is sequential in ascending k; k^n is carried in exact integer
/// arithmetic before conversion.
pub fn alpha_table_mobius(n_max: usize, policy: PrecisionPolicy) -> Result<AlphaTable> {
    let stieltjes = StieltjesTable::bundled(policy)?;
    alpha_table_mobius_from(&stieltjes, n_max, policy)
}

/// Same, against an explicit Stieltjes table (lets verification inject
/// external or faulty data).
pub fn alpha_table_mobius_from(
    stieltjes: &StieltjesTable,
    n_max: usize,
    policy: PrecisionPolicy,
) -> Result<AlphaTable> {
    let g = g_coefficients_from(stieltjes, n_max)?;

    // per-n cutoffs; K(n) grows with n, so k sweeps to K(n_max)
    let probe = MobiusTable::build(1 << 14)?;
    let cutoffs: Vec<u64> = (0..=n_max).map(|n| mobius_cutoff(n, policy, &probe)).collect();
    let k_max = *cutoffs.iter().max().unwrap();
    let mobius = MobiusTable::build(k_max)?;

    let mut sums = vec![Real::zero(policy); n_max + 1];
    let mut last_terms = vec![Real::zero(policy); n_max + 1];
    let mut lns = LnCache::default();
    let mut factorials = Vec::with_capacity(n_max + 1);
    let mut fact = Real::one(policy);
    for n in 0..=n_max {
        if n > 1 {
            fact = fact.mul_u64(n as u64);
        }
        factorials.push(fact.clone());
    }

    for k in 2..k_max {
        if mobius.mu(k) == 0 {
            continue;
        }
        let active_order = match (0..=n_max).rev().find(|&n| k < cutoffs[n]) {
            Some(n) => n,
            None => continue,
        };
        let zd = zeta_derivatives_cached(&Real::from_u64(k, policy), active_order, policy, &mut lns)?;
        let lz = log_zeta_taylor_from(&zd);
        // mu(k)/k * k^n * n! * coeff_n, with k^(n-1) exact
        for n in 0..=active_order {
            let k_pow = Real::from_u64(k, policy).powi(n as i64 - 1);
            let mut term = lz.coeff(n).mul(&factorials[n]).mul(&k_pow);
            if mobius.mu(k) < 0 {
                term = term.neg();
            }
            sums[n] = sums[n].add(&term);
            last_terms[n] = term.abs();
        }
    }

    let mut table = AlphaTable::default();
    for n in 0..=n_max {
        let bound = tail_bound(n, cutoffs[n], policy);
        let report = TruncationReport::new(cutoffs[n], last_terms[n].clone(), bound.clone());
        table.insert(AlphaEntry {
            n,
            value: g[n].add(&sums[n]),
            method: AlphaMethod::Mobius,
            truncation: Some(report),
            tolerance: bound,
        });
    }
    Ok(table)
}

/// alpha_n by the Mobius route.
pub fn alpha_mobius(n: usize, policy: PrecisionPolicy) -> Result<AlphaEntry> {
    let table = alpha_table_mobius(n, policy)?;
    Ok(table.get(n, AlphaMethod::Mobius).expect("just computed").clone())
}

/// alpha_0 = sum_{k>=2} mu(k)/k log zeta(k): the n = 0 series with g_0 = 0.
pub fn alpha0_series(policy: PrecisionPolicy) -> Result<AlphaEntry> {
    alpha_mobius(0, policy)
}

/// The printed closed forms for n in {1, 2, 3}: the g_n constant plus the
/// explicit zeta-derivative ratio sums. Shares the zeta derivative values
/// with the generic route but not the series-log path, so agreement
/// exercises the formal logarithm.
pub fn special_case_closed_form(n: usize, policy: PrecisionPolicy) -> Result<Real> {
    let stieltjes = StieltjesTable::bundled(policy)?;
    special_case_closed_form_from(&stieltjes, n, policy)
}

/// Same, against an explicit Stieltjes table.
pub fn special_case_closed_form_from(
    stieltjes: &StieltjesTable,
    n: usize,
    policy: PrecisionPolicy,
) -> Result<Real> {
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedOrder {
            n,
            msg: "closed forms are printed only for n in {1, 2, 3}".into(),
        });
    }
    let constant = g_polynomial(n, stieltjes)?;

    let probe = MobiusTable::build(1 << 14)?;
    let cutoff = mobius_cutoff(n, policy, &probe);
    let mobius = MobiusTable::build(cutoff)?;
    let mut lns = LnCache::default();
    let mut sum = Real::zero(policy);
    for k in 2..cutoff {
        if mobius.mu(k) == 0 {
            continue;
        }
        let zd = zeta_derivatives_cached(&Real::from_u64(k, policy), n, policy, &mut lns)?;
        let z = zd.zeta();
        let r1 = zd.derivative(1).div(z);
        let bracket = match n {
            1 => r1,
            2 => {
                // -z'^2/z^2 + z''/z
                zd.derivative(2).div(z).sub(&r1.mul(&r1))
            }
            _ => {
                // 2 z'^3/z^3 - 3 z' z''/z^2 + z'''/z
                let r2 = zd.derivative(2).div(z);
                r1.powi(3)
                    .mul_u64(2)
                    .sub(&r1.mul(&r2).mul_u64(3))
                    .add(&zd.derivative(3).div(z))
            }
        };
        let k_pow = Real::from_u64(k, policy).powi(n as i64 - 1);
        let mut term = bracket.mul(&k_pow);
        if mobius.mu(k) < 0 {
            term = term.neg();
        }
        sum = sum.add(&term);
    }
    Ok(constant.add(&sum))
}

/// Residual of the closed form against the generic Mobius route
/// (Faa-di-Bruno consistency check).
pub fn special_case_residual(n: usize, policy: PrecisionPolicy) -> Result<Real> {
    let closed = special_case_closed_form(n, policy)?;
    let generic = alpha_mobius(n, policy)?;
    Ok(closed.sub(&generic.value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p30() -> PrecisionPolicy {
        PrecisionPolicy::new(30)
    }

    #[test]
    fn alpha0_reference() {
        let e = alpha0_series(p30()).unwrap();
        assert_eq!(e.value.format_digits(20), "-0.31571845205389007685");
        let rep = e.truncation.as_ref().unwrap();
        assert!(rep.tail_bound() < &p30().target_eps());
        assert!(rep.terms_used() > 100);
    }

    #[test]
    fn alpha0_plus_gamma_is_meissel_mertens() {
        // the 20-digit print is truncated, not rounded, so compare within
        // one unit of its last digit
        let e = alpha0_series(p30()).unwrap();
        let m = e.value.add(&Real::euler_gamma(p30()));
        let printed = Real::parse("0.26149721284764278375", p30()).unwrap();
        assert!(m.sub(&printed).abs() < Real::pow10(-20, p30()));
    }

    #[test]
    fn alpha_1_reference() {
        let e = alpha_mobius(1, p30()).unwrap();
        assert_eq!(e.value.format_digits(20), "1.3325822757332208818");
    }

    #[test]
    fn special_cases_match_printed_values() {
        let pol = p30();
        let expected = [
            "1.3325822757332208818",
            "-2.5551076154464452396",
            "10.253827096911007539",
        ];
        for (n, want) in (1..=3).zip(expected) {
            let v = special_case_closed_form(n, pol).unwrap();
            assert_eq!(v.format_digits(20), want, "n={n}");
        }
    }

    #[test]
    fn faa_di_bruno_consistency() {
        let pol = p30();
        let tol = Real::pow10(-(pol.target_digits() as i64 - 5), pol);
        for n in 1..=3 {
            let r = special_case_residual(n, pol).unwrap().abs();
            assert!(r < tol, "n={n}: residual {r}");
        }
    }

    #[test]
    fn unsupported_special_case() {
        assert!(special_case_closed_form(0, p30()).is_err());
        assert!(special_case_closed_form(4, p30()).is_err());
    }

    #[test]
    fn table_rejects_duplicates() {
        let pol = p30();
        let mut t = AlphaTable::default();
        let e = AlphaEntry {
            n: 0,
            value: Real::zero(pol),
            method: AlphaMethod::Limit,
            truncation: None,
            tolerance: Real::one(pol),
        };
        t.insert(e.clone());
        let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            t.insert(e);
        }));
        assert!(result.is_err());
    }

    #[test]
    fn comparison_uses_weaker_certificate() {
        let pol = p30();
        let mut t = AlphaTable::default();
        t.insert(AlphaEntry {
            n: 0,
            value: Real::zero(pol),
            method: AlphaMethod::Mobius,
            truncation: None,
            tolerance: Real::pow10(-40, pol),
        });
        t.insert(AlphaEntry {
            n: 0,
            value: Real::zero(pol),
            method: AlphaMethod::Limit,
            truncation: None,
            tolerance: Real::pow10(-2, pol),
        });
        let tol = t
            .comparison_tolerance(0, AlphaMethod::Mobius, AlphaMethod::Limit)
            .unwrap();
        assert_eq!(tol, Real::pow10(-2, pol));
        assert!(t.comparison_tolerance(1, AlphaMethod::Mobius, AlphaMethod::Limit).is_none());
    }

    #[test]
    fn truncation_report_invariant() {
        let pol = p30();
        let result = std::panic::catch_unwind(|| {
            TruncationReport::new(10, Real::one(pol), Real::zero(pol))
        });
        assert!(result.is_err(), "tail bound below last term must be rejected");
    }
}
