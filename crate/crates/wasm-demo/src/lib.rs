//! Browser bindings: every export takes plain numbers/strings and returns a
//! JSON string, so the page needs no generated TypeScript and the same
//! functions are testable natively.
//!
//! Errors come back as `{"error": "..."}` rather than thrown exceptions;
//! the page decides how to surface them.

use std::cell::RefCell;

use wasm_bindgen::prelude::wasm_bindgen;

use primezeta::alpha::{alpha_table_mobius, AlphaMethod, AlphaTable};
use primezeta::empirical::{default_checkpoints, mertens_series};
use primezeta::pzeta::{prime_zeta_direct, prime_zeta_mobius, prime_zeta_series, PrimeZetaValue};
use primezeta::real::{PrecisionPolicy, Real};
use primezeta::sieve::PrimeSieve;

thread_local! {
    static SIEVE_CACHE: RefCell<Option<(u64, PrimeSieve)>> = const { RefCell::new(None) };
    static ALPHA_CACHE: RefCell<Option<(u32, usize, AlphaTable)>> = const { RefCell::new(None) };
}

fn with_sieve<T>(limit: u64, f: impl FnOnce(&PrimeSieve) -> T) -> Result<T, String> {
    SIEVE_CACHE.with(|cell| {
        let mut slot = cell.borrow_mut();
        let rebuild = !matches!(&*slot, Some((l, _)) if *l == limit);
        if rebuild {
            let sieve = PrimeSieve::build(limit).map_err(|e| e.to_string())?;
            *slot = Some((limit, sieve));
        }
        Ok(f(&slot.as_ref().unwrap().1))
    })
}

fn with_alpha<T>(
    digits: u32,
    n_max: usize,
    f: impl FnOnce(&AlphaTable) -> T,
) -> Result<T, String> {
    ALPHA_CACHE.with(|cell| {
        let mut slot = cell.borrow_mut();
        let ok = matches!(&*slot, Some((d, n, _)) if *d == digits && *n >= n_max);
        if !ok {
            let table = alpha_table_mobius(n_max, PrecisionPolicy::new(digits))
                .map_err(|e| e.to_string())?;
            *slot = Some((digits, n_max, table));
        }
        Ok(f(&slot.as_ref().unwrap().2))
    })
}

fn err_json(msg: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": msg.to_string() }).to_string()
}

fn value_json(v: &PrimeZetaValue) -> serde_json::Value {
    serde_json::json!({
        "s": v.s.to_f64(),
        "value": v.corrected_value().to_decimal_string(),
        "value_f64": v.corrected_value().to_f64(),
        "method": v.method.name(),
        "tolerance": v.error_estimate.format_digits(3),
    })
}

fn clamp_digits(digits: u32) -> u32 {
    digits.clamp(5, 34)
}

/// alpha_0..alpha_{n_max} by the Mobius route. Rows carry the decimal value,
/// an f64 shadow for plotting, the truncation cutoff and certified digits.
#[wasm_bindgen]
pub fn alpha_table_json(n_max: usize, digits: u32) -> String {
    let n_max = n_max.min(20);
    let digits = clamp_digits(digits);
    let result = with_alpha(digits, n_max, |table| {
        let rows: Vec<_> = (0..=n_max)
            .map(|n| {
                let e = table.get(n, AlphaMethod::Mobius).expect("computed");
                let k = e.truncation.as_ref().map(|t| t.terms_used()).unwrap_or(0);
                serde_json::json!({
                    "n": n,
                    "value": e.value.to_decimal_string(),
                    "value_f64": e.value.to_f64(),
                    "method": "mobius",
                    "tolerance": e.tolerance.format_digits(3),
                    "terms": k,
                    "certified_digits": e.certified_digits(),
                })
            })
            .collect();
        serde_json::json!({ "digits": digits, "rows": rows }).to_string()
    });
    result.unwrap_or_else(err_json)
}

/// P(s) at one point by the requested route(s).
#[wasm_bindgen]
pub fn prime_zeta_json(s: f64, digits: u32, sieve_limit: f64, series_terms: usize) -> String {
    let digits = clamp_digits(digits);
    let policy = PrecisionPolicy::new(digits);
    let s_real = match Real::parse(&format!("{s}"), policy) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    let mobius = match prime_zeta_mobius(&s_real, policy) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    let mut routes = vec![value_json(&mobius)];
    let terms = series_terms.clamp(1, 19);
    let series = with_alpha(digits, terms + 1, |table| {
        prime_zeta_series(&s_real, table, terms, policy)
    });
    match series {
        Ok(Ok(v)) => routes.push(value_json(&v)),
        Ok(Err(e)) => routes.push(serde_json::json!({ "method": "series", "error": e.to_string() })),
        Err(e) => routes.push(serde_json::json!({ "method": "series", "error": e })),
    }
    let limit = (sieve_limit as u64).clamp(1_000, 20_000_000);
    let direct = with_sieve(limit, |sieve| prime_zeta_direct(&s_real, policy, sieve));
    match direct {
        Ok(Ok(v)) => routes.push(value_json(&v)),
        Ok(Err(e)) => routes.push(serde_json::json!({ "method": "direct", "error": e.to_string() })),
        Err(e) => routes.push(serde_json::json!({ "method": "direct", "error": e })),
    }
    serde_json::json!({ "s": s, "routes": routes }).to_string()
}

/// P(s) sampled on [s_min, s_max] via the Mobius route, with the pure log
/// singularity alongside so the page can plot the regular part.
#[wasm_bindgen]
pub fn prime_zeta_curve_json(s_min: f64, s_max: f64, points: usize) -> String {
    let points = points.clamp(2, 400);
    if !(s_min > 1.0 && s_max > s_min) {
        return err_json("need 1 < s_min < s_max");
    }
    let policy = PrecisionPolicy::new(16);
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let s = s_min + (s_max - s_min) * i as f64 / (points - 1) as f64;
        let s_real = match Real::parse(&format!("{s}"), policy) {
            Ok(v) => v,
            Err(e) => return err_json(e),
        };
        match prime_zeta_mobius(&s_real, policy) {
            Ok(v) => {
                let log_part = 1.0 / (s - 1.0);
                rows.push(serde_json::json!({
                    "s": s,
                    "p": v.value.to_f64(),
                    "log_singularity": log_part.ln(),
                }));
            }
            Err(e) => return err_json(e),
        }
    }
    serde_json::json!({ "points": rows }).to_string()
}

/// Convergence of the Mertens prime sums toward alpha_n: checkpoints at
/// powers of ten up to x_max, with the tolerance model and the Mobius-route
/// reference value.
#[wasm_bindgen]
pub fn mertens_convergence_json(n: usize, x_max: f64, digits: u32) -> String {
    let n = n.min(6);
    let digits = clamp_digits(digits);
    let policy = PrecisionPolicy::new(digits);
    let x_max = (x_max as u64).clamp(1_000, 20_000_000);
    let reference = match with_alpha(digits, n, |t| {
        t.get(n, AlphaMethod::Mobius).expect("computed").value.clone()
    }) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    let result = with_sieve(x_max, |sieve| {
        mertens_series(n, &default_checkpoints(x_max), sieve, policy)
    });
    match result {
        Ok(Ok(series)) => {
            let rows: Vec<_> = series
                .checkpoints
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "x": c.x,
                        "partial": c.partial.to_f64(),
                        "estimate": c.estimate.to_f64(),
                        "tolerance": c.tolerance.to_f64(),
                    })
                })
                .collect();
            serde_json::json!({
                "n": n,
                "alpha": reference.to_f64(),
                "alpha_decimal": reference.to_decimal_string(),
                "checkpoints": rows,
                "csv": series.to_csv(),
            })
            .to_string()
        }
        Ok(Err(e)) => err_json(e),
        Err(e) => err_json(e),
    }
}
