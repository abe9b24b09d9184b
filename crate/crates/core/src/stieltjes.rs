//! Stieltjes constants gamma_0..gamma_20 from a bundled 50-digit data file,
//! and the g_n coefficients of the log zeta expansion about s = 1.
//!
//! The data file was produced by an Euler-Maclaurin evaluation of the
//! defining limit gamma_n = lim_m [sum_{k<=m} log^n k / k - log^{n+1} m /
//! (n+1)]; the same oracle lives in the test suite and re-derives the
//! entries in CI. The file checksum is pinned here so silent edits fail
//! loudly.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::real::{PrecisionPolicy, Real};
use crate::series::{series_log, PowerSeries};

const BUNDLED: &str = include_str!("../data/stieltjes.txt");
const BUNDLED_SHA256: &str = "72a9c88319af16f6fa9208030dc8bcccde380395f60343ee450639a74a348534";

/// Decimal digits the bundled entries are good to.
pub const BUNDLED_DIGITS: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Bundled,
    External,
}

/// gamma_0..gamma_N with provenance and precision metadata.
#[derive(Debug, Clone)]
pub struct StieltjesTable {
    values: Vec<Real>,
    provenance: Provenance,
    certified_digits: u32,
    policy: PrecisionPolicy,
}

impl StieltjesTable {
    /// Loads the bundled table, verifying the pinned checksum.
    pub fn bundled(policy: PrecisionPolicy) -> Result<Self> {
        let digest = hex(&Sha256::digest(BUNDLED.as_bytes()));
        if digest != BUNDLED_SHA256 {
            return Err(Error::Data(format!(
                "bundled Stieltjes data failed its checksum pin: {digest}"
            )));
        }
        Self::parse(BUNDLED, Provenance::Bundled, BUNDLED_DIGITS, policy)
    }

    /// Parses table text: one line per constant, "index whitespace value".
    /// Indices must be 0..n contiguous.
    pub fn parse(
        text: &str,
        provenance: Provenance,
        certified_digits: u32,
        policy: PrecisionPolicy,
    ) -> Result<Self> {
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (idx, val) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::Data(format!("stieltjes line {} malformed", lineno + 1)))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::Data(format!("stieltjes line {}: bad index", lineno + 1)))?;
            if idx != values.len() {
                return Err(Error::Data(format!(
                    "stieltjes line {}: expected index {}, found {}",
                    lineno + 1,
                    values.len(),
                    idx
                )));
            }
            let v = Real::parse(val.trim(), policy)
                .map_err(|_| Error::Data(format!("stieltjes line {}: bad value", lineno + 1)))?;
            values.push(v);
        }
        if values.is_empty() {
            return Err(Error::Data("stieltjes table is empty".into()));
        }
        // gamma_0 must be Euler's constant; a cheap tripwire against loading
        // the wrong file entirely
        let g0_gap = values[0].sub(&Real::euler_gamma(policy)).abs();
        if g0_gap > Real::pow10(-(certified_digits.min(policy.working_digits()) as i64) , policy).mul_u64(10) {
            return Err(Error::Data("stieltjes table: gamma_0 is not Euler's constant".into()));
        }
        Ok(StieltjesTable { values, provenance, certified_digits, policy })
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn certified_digits(&self) -> u32 {
        self.certified_digits
    }

    pub fn policy(&self) -> PrecisionPolicy {
        self.policy
    }

    /// gamma_n.
    pub fn gamma(&self, n: usize) -> Result<&Real> {
        self.values.get(n).ok_or_else(|| Error::UnsupportedOrder {
            n,
            msg: format!("bundled Stieltjes table ends at order {}", self.order()),
        })
    }
}

/// gamma_n from the bundled table at the given policy.
pub fn stieltjes(n: usize, policy: PrecisionPolicy) -> Result<Real> {
    let table = StieltjesTable::bundled(policy)?;
    table.gamma(n).cloned()
}

/// g_0..g_{n_max}: Taylor coefficients of log zeta(s) + log(s-1) about s=1,
/// scaled so that log zeta(s) = log(1/(s-1)) + sum g_n (s-1)^n / n!.
///
/// Built by the formal logarithm of (s-1) zeta(s), whose Taylor coefficients
/// about s=1 are 1 and (-1)^(m-1) gamma_{m-1}/(m-1)!. The Stieltjes
/// polynomial forms for n <= 6 are the cross-check, not the implementation.
pub fn g_coefficients(n_max: usize, policy: PrecisionPolicy) -> Result<Vec<Real>> {
    let table = StieltjesTable::bundled(policy)?;
    g_coefficients_from(&table, n_max)
}

/// Same, against an explicit (possibly external) table.
pub fn g_coefficients_from(table: &StieltjesTable, n_max: usize) -> Result<Vec<Real>> {
    let policy = table.policy();
    if n_max >= 1 && n_max - 1 > table.order() {
        return Err(Error::UnsupportedOrder {
            n: n_max,
            msg: format!("g_{n_max} needs gamma_{}, table ends at {}", n_max - 1, table.order()),
        });
    }
    // (s-1) zeta(s) = 1 + sum_{m>=1} (-1)^(m-1) gamma_{m-1}/(m-1)! (s-1)^m
    let mut coeffs = Vec::with_capacity(n_max + 1);
    coeffs.push(Real::one(policy));
    let mut fact = Real::one(policy);
    for m in 1..=n_max {
        if m > 1 {
            fact = fact.mul_u64(m as u64 - 1);
        }
        let c = table.gamma(m - 1)?.div(&fact);
        coeffs.push(if m.is_multiple_of(2) { c.neg() } else { c });
    }
    let f = PowerSeries::new(Real::one(policy), coeffs);
    let lam = series_log(&f)?;
    // g_n = n! * lambda_n; g_0 = log 1 = 0 exactly
    let mut out = Vec::with_capacity(n_max + 1);
    let mut fact = Real::one(policy);
    for n in 0..=n_max {
        if n > 1 {
            fact = fact.mul_u64(n as u64);
        }
        out.push(lam.coeff(n).mul(&fact));
    }
    Ok(out)
}

/// The printed Stieltjes-polynomial forms of g_1..g_6, used as an
/// independent cross-check of the series-log route.
pub fn g_polynomial(n: usize, table: &StieltjesTable) -> Result<Real> {
    let policy = table.policy();
    let g = |i: usize| table.gamma(i).cloned();
    let c = |k: i64| Real::from_i64(k, policy);
    let value = match n {
        0 => Real::zero(policy),
        1 => g(0)?,
        2 => {
            // -gamma^2 - 2 gamma_1
            let gm = g(0)?;
            gm.mul(&gm).neg().sub(&g(1)?.mul_u64(2))
        }
        3 => {
            // 2 gamma^3 + 6 gamma gamma_1 + 3 gamma_2
            let gm = g(0)?;
            gm.powi(3)
                .mul_u64(2)
                .add(&gm.mul(&g(1)?).mul_u64(6))
                .add(&g(2)?.mul_u64(3))
        }
        4 => {
            // -6 g^4 - 12 g1^2 - 24 g^2 g1 - 12 g g2 - 4 g3
            let gm = g(0)?;
            let g1 = g(1)?;
            c(-6)
                .mul(&gm.powi(4))
                .sub(&g1.mul(&g1).mul_u64(12))
                .sub(&gm.mul(&gm).mul(&g1).mul_u64(24))
                .sub(&gm.mul(&g(2)?).mul_u64(12))
                .sub(&g(3)?.mul_u64(4))
        }
        5 => {
            // 120 g^3 g1 + 120 g g1^2 + 60 g^2 g2 + 60 g1 g2 + 20 g g3
            //   + 5 g4 + 24 g^5
            let gm = g(0)?;
            let g1 = g(1)?;
            let g2 = g(2)?;
            gm.powi(3)
                .mul(&g1)
                .mul_u64(120)
                .add(&gm.mul(&g1).mul(&g1).mul_u64(120))
                .add(&gm.mul(&gm).mul(&g2).mul_u64(60))
                .add(&g1.mul(&g2).mul_u64(60))
                .add(&gm.mul(&g(3)?).mul_u64(20))
                .add(&g(4)?.mul_u64(5))
                .add(&gm.powi(5).mul_u64(24))
        }
        6 => {
            // -720 g^4 g1 - 1080 g^2 g1^2 - 240 g1^3 - 360 g^3 g2
            //   - 720 g g1 g2 - 90 g2^2 - 120 g^2 g3 - 120 g1 g3
            //   - 30 g g4 - 6 g5 - 120 g^6
            let gm = g(0)?;
            let g1 = g(1)?;
            let g2 = g(2)?;
            let g3 = g(3)?;
            c(-720)
                .mul(&gm.powi(4))
                .mul(&g1)
                .sub(&gm.mul(&gm).mul(&g1).mul(&g1).mul_u64(1080))
                .sub(&g1.powi(3).mul_u64(240))
                .sub(&gm.powi(3).mul(&g2).mul_u64(360))
                .sub(&gm.mul(&g1).mul(&g2).mul_u64(720))
                .sub(&g2.mul(&g2).mul_u64(90))
                .sub(&gm.mul(&gm).mul(&g3).mul_u64(120))
                .sub(&g1.mul(&g3).mul_u64(120))
                .sub(&gm.mul(&g(4)?).mul_u64(30))
                .sub(&g(5)?.mul_u64(6))
                .sub(&gm.powi(6).mul_u64(120))
        }
        _ => {
            return Err(Error::UnsupportedOrder {
                n,
                msg: "polynomial forms are printed only up to g_6".into(),
            })
        }
    };
    Ok(value)
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
