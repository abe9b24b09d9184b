//! Run configuration: built-in defaults, overridden by the config file,
//! overridden by flags.

use std::path::Path;

use primezeta::Error;

use crate::output::Format;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub digits: u32,
    pub sieve_limit: u64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { digits: 30, sieve_limit: 100_000_000, format: Format::Text }
    }
}

impl RunConfig {
    /// defaults < config file < flags.
    pub fn resolve(
        config_path: Option<&Path>,
        digits: Option<u32>,
        sieve_limit: Option<u64>,
        format: Option<Format>,
    ) -> primezeta::Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = config_path {
            let text = std::fs::read_to_string(path)?;
            cfg.apply_file(&text)?;
        }
        if let Some(d) = digits {
            cfg.digits = d;
        }
        if let Some(l) = sieve_limit {
            cfg.sieve_limit = l;
        }
        if let Some(f) = format {
            cfg.format = f;
        }
        if cfg.digits == 0 || cfg.digits > 50 {
            return Err(Error::domain(
                "config",
                "digits must be in 1..=50 (the bundled constants carry 50 digits)",
            ));
        }
        Ok(cfg)
    }

    /// Plain key=value lines; '#' starts a comment; unknown keys are errors.
    fn apply_file(&mut self, text: &str) -> primezeta::Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::domain("config", format!("line {}: expected key=value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "digits" => {
                    self.digits = value
                        .parse()
                        .map_err(|_| Error::domain("config", format!("line {}: bad digits", lineno + 1)))?
                }
                "sieve_limit" => {
                    self.sieve_limit = value
                        .parse()
                        .map_err(|_| Error::domain("config", format!("line {}: bad sieve_limit", lineno + 1)))?
                }
                "format" => {
                    self.format = match value {
                        "text" => Format::Text,
                        "json" => Format::Json,
                        "csv" => Format::Csv,
                        _ => {
                            return Err(Error::domain(
                                "config",
                                format!("line {}: format must be text|json|csv", lineno + 1),
                            ))
                        }
                    }
                }
                _ => {
                    return Err(Error::domain(
                        "config",
                        format!("line {}: unknown key `{key}`", lineno + 1),
                    ))
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_flags_over_file_over_defaults() {
        let mut cfg = RunConfig::default();
        cfg.apply_file("# comment\ndigits = 20\nsieve_limit=1000 # inline\n").unwrap();
        assert_eq!(cfg.digits, 20);
        assert_eq!(cfg.sieve_limit, 1000);
        assert!(matches!(cfg.format, Format::Text));
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut cfg = RunConfig::default();
        assert!(cfg.apply_file("nope=1\n").is_err());
        assert!(cfg.apply_file("digits\n").is_err());
    }
}
