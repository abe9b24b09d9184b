//! Row rendering. Values are always decimal strings, never binary floats,
//! so 30-digit fidelity survives any consumer. JSON rows carry exactly the
//! keys {n|s, value, method, tolerance}.

use primezeta::alpha::AlphaTable;
use primezeta::pzeta::{PrimeZetaMethod, PrimeZetaValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Input echoes drop trailing zeros; computed values never do.
fn trim_echo(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn alpha_rows(table: &AlphaTable, format: Format) -> String {
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str("n,value,method,tolerance\n");
    }
    for e in table.entries() {
        let value = e.value.to_decimal_string();
        let tol = e.tolerance.format_digits(3);
        match format {
            Format::Text => {
                out.push_str(&format!(
                    "{:<3} {:<40} {:<8} tolerance={} certified_digits={}\n",
                    e.n,
                    value,
                    e.method.name(),
                    tol,
                    e.certified_digits()
                ));
            }
            Format::Json => {
                let row = serde_json::json!({
                    "n": e.n,
                    "value": value,
                    "method": e.method.name(),
                    "tolerance": tol,
                });
                out.push_str(&row.to_string());
                out.push('\n');
            }
            Format::Csv => {
                out.push_str(&format!("{},{},{},{}\n", e.n, value, e.method.name(), tol));
            }
        }
    }
    out
}

pub fn value_row(v: &PrimeZetaValue, format: Format) -> String {
    // the direct route reports its tail-corrected value; the bare partial
    // sum is recoverable by subtracting the printed tail estimate
    let value = v.corrected_value().to_decimal_string();
    let tol = v.error_estimate.format_digits(3);
    match format {
        Format::Text => {
            let mut line = format!(
                "P({}) = {}  method={}  error<={}",
                trim_echo(&v.s.to_decimal_string()),
                value,
                v.method.name(),
                tol
            );
            if let Some(t) = &v.tail_correction {
                line.push_str(&format!("  tail_correction={}", t.format_digits(6)));
            }
            if v.method == PrimeZetaMethod::Series {
                line.push_str("  (error model from the first omitted term)");
            }
            line.push('\n');
            line
        }
        Format::Json => {
            let row = serde_json::json!({
                "s": trim_echo(&v.s.to_decimal_string()),
                "value": value,
                "method": v.method.name(),
                "tolerance": tol,
            });
            format!("{row}\n")
        }
        Format::Csv => format!(
            "s,value,method,tolerance\n{},{},{},{}\n",
            trim_echo(&v.s.to_decimal_string()),
            value,
            v.method.name(),
            tol
        ),
    }
}
