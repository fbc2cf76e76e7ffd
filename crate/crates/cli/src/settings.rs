//! Flat `key = value` settings merged from a config file and command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use chaoslab_core::{Error, Params};

#[derive(Debug)]
pub enum CliError {
    /// Bad input; exit code 2.
    Config(String),
    /// Escape, step underflow or a degenerate fit; exit code 3.
    Numerical(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Numerical(_) => 3,
            Self::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(m) => write!(f, "config error: {m}"),
            Self::Numerical(m) => write!(f, "numerical failure: {m}"),
            Self::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::DegenerateParams(_) | Error::ZeroCoefficient(_) => {
                Self::Config(e.to_string())
            }
            Error::StepUnderflow { .. }
            | Error::Escaped { .. }
            | Error::NotEquilibrium { .. }
            | Error::DegenerateFit { .. } => Self::Numerical(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Canonical key spelling: lower case with underscores.
pub fn canonical(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config(format!(
                "line {}: expected key = value, got {raw:?}",
                n + 1
            )));
        };
        out.push((canonical(k), v.trim().to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// File entries first, flags override. Every key must be in `allowed`.
    pub fn build(
        allowed: &[&str],
        file: Option<&Path>,
        flags: Vec<(String, String)>,
    ) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            for (k, v) in parse_config_text(&text)? {
                if !allowed.contains(&k.as_str()) {
                    return Err(CliError::Config(format!(
                        "unknown key '{k}' in {}",
                        path.display()
                    )));
                }
                values.insert(k, v);
            }
        }
        for (k, v) in flags {
            let k = canonical(&k);
            if !allowed.contains(&k.as_str()) {
                return Err(CliError::Config(format!("unknown key '{k}'")));
            }
            values.insert(k, v);
        }
        Ok(Self { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, what: &str) -> CliResult<Option<T>> {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Config(format!("{key}: expected {what}, got {v:?}")))
            })
            .transpose()
    }

    pub fn opt_f64(&self, key: &str) -> CliResult<Option<f64>> {
        self.parsed(key, "a number")
    }

    pub fn f64(&self, key: &str, default: f64) -> CliResult<f64> {
        Ok(self.opt_f64(key)?.unwrap_or(default))
    }

    pub fn usize(&self, key: &str, default: usize) -> CliResult<usize> {
        // accept forms like 1e6 for counts
        match self.raw(key) {
            None => Ok(default),
            Some(v) => match v.parse::<usize>() {
                Ok(n) => Ok(n),
                Err(_) => match v.parse::<f64>() {
                    Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < 1e18 => Ok(x as usize),
                    _ => Err(CliError::Config(format!(
                        "{key}: expected a nonnegative integer, got {v:?}"
                    ))),
                },
            },
        }
    }

    pub fn u64(&self, key: &str, default: u64) -> CliResult<u64> {
        self.usize(key, default as usize).map(|v| v as u64)
    }

    pub fn str<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.raw(key).unwrap_or(default)
    }

    pub fn bool(&self, key: &str, default: bool) -> CliResult<bool> {
        match self.raw(key) {
            None => Ok(default),
            Some("true" | "1" | "yes" | "on") => Ok(true),
            Some("false" | "0" | "no" | "off") => Ok(false),
            Some(v) => Err(CliError::Config(format!("{key}: expected true/false, got {v:?}"))),
        }
    }

    pub fn list(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        let Some(v) = self.raw(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|c| {
                c.trim().parse::<f64>().map_err(|_| {
                    CliError::Config(format!("{key}: malformed number list {v:?}"))
                })
            })
            .collect::<CliResult<Vec<f64>>>()
            .map(Some)
    }

    pub fn state<const N: usize>(&self, key: &str, default: [f64; N]) -> CliResult<[f64; N]> {
        match self.list(key)? {
            None => Ok(default),
            Some(v) => <[f64; N]>::try_from(v.as_slice()).map_err(|_| {
                CliError::Config(format!("{key}: expected {N} comma-separated numbers, got {}", v.len()))
            }),
        }
    }

    /// `base` with any of `a1..a8` overridden.
    pub fn params(&self, base: Params) -> CliResult<Params> {
        let mut a = base.to_array();
        for (k, slot) in a.iter_mut().enumerate() {
            if let Some(v) = self.opt_f64(&format!("a{}", k + 1))? {
                *slot = v;
            }
        }
        Ok(Params::from_array(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let pairs = parse_config_text("# c\n t-end = 20 \n\na8=1.2 # trailing\n").unwrap();
        assert_eq!(
            pairs,
            vec![("t_end".into(), "20".into()), ("a8".into(), "1.2".into())]
        );
        assert!(parse_config_text("novalue\n").is_err());
    }

    #[test]
    fn flags_override_and_unknown_keys() {
        let s = Settings::build(&["a8", "ic"], None, vec![("a8".into(), "1.2".into())]).unwrap();
        assert_eq!(s.f64("a8", 0.0).unwrap(), 1.2);
        assert!(Settings::build(&["a8"], None, vec![("bogus".into(), "1".into())]).is_err());
    }

    #[test]
    fn state_parsing() {
        let s = Settings::build(&["ic"], None, vec![("ic".into(), "1,-1,0".into())]).unwrap();
        assert_eq!(s.state("ic", [0.0; 3]).unwrap(), [1.0, -1.0, 0.0]);
        assert!(s.state::<6>("ic", [0.0; 6]).is_err());
        let bad = Settings::build(&["ic"], None, vec![("ic".into(), "1,x,0".into())]).unwrap();
        assert!(bad.state("ic", [0.0; 3]).is_err());
    }

    #[test]
    fn counts_accept_exponent_form() {
        let s = Settings::build(&["n"], None, vec![("n".into(), "1e6".into())]).unwrap();
        assert_eq!(s.usize("n", 0).unwrap(), 1_000_000);
    }
}
