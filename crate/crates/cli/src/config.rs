//! Flat `key = value` run configuration.
//!
//! One key per line, `#` starts a comment, blank lines are ignored. Every key
//! is optional; missing keys take the defaults below and are listed in
//! [`ParsedConfig::defaulted`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crase_core::sweep::SweepSpec;
use crase_core::{CraseError, OracleConfig, RateParams};

use crate::error::CliError;

/// All recognised keys, in dump order.
pub const KEYS: [&str; 21] = [
    "gamma_b1",
    "gamma_a1",
    "gamma_b2",
    "gamma_a2",
    "m_oscillators",
    "delta_max",
    "dt",
    "t_region",
    "mode_sigma",
    "mode_center",
    "sqrt_eps_min",
    "sqrt_eps_max",
    "sqrt_eps_steps",
    "cosh_chi_min",
    "cosh_chi_max",
    "cosh_chi_steps",
    "theta_policy",
    "levels",
    "tolerance",
    "csv_path",
    "svg_path",
];

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Rates and discretization; `oracle.rates` is also what `analytic` uses.
    pub oracle: OracleConfig,
    pub sweep: SweepSpec,
    /// Convergence-study depth.
    pub levels: u32,
    /// Largest accepted oracle-vs-analytic relative delta.
    pub tolerance: f64,
    pub csv_path: Option<PathBuf>,
    pub svg_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            oracle: OracleConfig::default(),
            sweep: SweepSpec::default(),
            levels: 3,
            tolerance: 0.1,
            csv_path: None,
            svg_path: None,
        }
    }
}

impl RunConfig {
    pub fn rates(&self) -> RateParams {
        self.oracle.rates
    }

    /// Canonical text form. Floats use the shortest representation that
    /// parses back to the same bits, so `parse(dump(c)) == c`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let value = self.value_of(key);
            if !value.is_empty() {
                writeln!(out, "{key} = {value}").unwrap();
            }
        }
        out
    }

    fn value_of(&self, key: &str) -> String {
        let o = &self.oracle;
        let s = &self.sweep;
        let path = |p: &Option<PathBuf>| {
            p.as_ref()
                .map_or(String::new(), |p| p.display().to_string())
        };
        match key {
            "gamma_b1" => o.rates.gamma_b1.to_string(),
            "gamma_a1" => o.rates.gamma_a1.to_string(),
            "gamma_b2" => o.rates.gamma_b2.to_string(),
            "gamma_a2" => o.rates.gamma_a2.to_string(),
            "m_oscillators" => o.m_oscillators.to_string(),
            "delta_max" => o.delta_max.to_string(),
            "dt" => o.dt.to_string(),
            "t_region" => o.t_region.to_string(),
            "mode_sigma" => o.mode_sigma.to_string(),
            "mode_center" => o.mode_center.to_string(),
            "sqrt_eps_min" => s.sqrt_eps.min.to_string(),
            "sqrt_eps_max" => s.sqrt_eps.max.to_string(),
            "sqrt_eps_steps" => s.sqrt_eps.steps.to_string(),
            "cosh_chi_min" => s.cosh_chi.min.to_string(),
            "cosh_chi_max" => s.cosh_chi.max.to_string(),
            "cosh_chi_steps" => s.cosh_chi.steps.to_string(),
            "theta_policy" => s.theta_policy.to_string(),
            "levels" => self.levels.to_string(),
            "tolerance" => self.tolerance.to_string(),
            "csv_path" => path(&self.csv_path),
            "svg_path" => path(&self.svg_path),
            _ => unreachable!("unknown key {key}"),
        }
    }
}

/// A parsed configuration plus the keys that were filled from defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConfig {
    pub config: RunConfig,
    pub defaulted: Vec<&'static str>,
}

pub fn parse_config(path: &Path) -> Result<ParsedConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
        line: None,
        key: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_str(&text)
}

fn config_err(line: usize, key: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        line: Some(line),
        key: Some(key.to_string()),
        message: message.into(),
    }
}

pub fn parse_str(text: &str) -> Result<ParsedConfig, CliError> {
    // key -> (line number, raw value)
    let mut raw: BTreeMap<&'static str, (usize, String)> = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(CliError::Config {
                line: Some(line_no),
                key: None,
                message: format!("expected 'key = value', got '{content}'"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(config_err(line_no, key, "unknown key"));
        };
        if value.is_empty() {
            return Err(config_err(line_no, key, "missing value"));
        }
        if let Some((first, _)) = raw.get(known) {
            return Err(config_err(
                line_no,
                key,
                format!("duplicate key (first set on line {first})"),
            ));
        }
        raw.insert(known, (line_no, value.to_string()));
    }

    let mut cfg = RunConfig::default();
    let defaulted: Vec<&'static str> = KEYS
        .iter()
        .copied()
        .filter(|k| !raw.contains_key(k))
        .collect();
    for (&key, (line, value)) in &raw {
        assign(&mut cfg, key, *line, value)?;
    }
    validate(&cfg, &raw)?;
    Ok(ParsedConfig {
        config: cfg,
        defaulted,
    })
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64, CliError> {
    let v: f64 = value
        .parse()
        .map_err(|_| config_err(line, key, format!("expected a number, got '{value}'")))?;
    if !v.is_finite() {
        return Err(config_err(
            line,
            key,
            format!("must be finite, got '{value}'"),
        ));
    }
    Ok(v)
}

fn parse_usize(line: usize, key: &str, value: &str) -> Result<usize, CliError> {
    value.parse().map_err(|_| {
        config_err(
            line,
            key,
            format!("expected a non-negative integer, got '{value}'"),
        )
    })
}

fn assign(
    cfg: &mut RunConfig,
    key: &'static str,
    line: usize,
    value: &str,
) -> Result<(), CliError> {
    let o = &mut cfg.oracle;
    let s = &mut cfg.sweep;
    let f = || parse_f64(line, key, value);
    let u = || parse_usize(line, key, value);
    match key {
        "gamma_b1" => o.rates.gamma_b1 = f()?,
        "gamma_a1" => o.rates.gamma_a1 = f()?,
        "gamma_b2" => o.rates.gamma_b2 = f()?,
        "gamma_a2" => o.rates.gamma_a2 = f()?,
        "m_oscillators" => o.m_oscillators = u()?,
        "delta_max" => o.delta_max = f()?,
        "dt" => o.dt = f()?,
        "t_region" => o.t_region = f()?,
        "mode_sigma" => o.mode_sigma = f()?,
        "mode_center" => o.mode_center = f()?,
        "sqrt_eps_min" => s.sqrt_eps.min = f()?,
        "sqrt_eps_max" => s.sqrt_eps.max = f()?,
        "sqrt_eps_steps" => s.sqrt_eps.steps = u()?,
        "cosh_chi_min" => s.cosh_chi.min = f()?,
        "cosh_chi_max" => s.cosh_chi.max = f()?,
        "cosh_chi_steps" => s.cosh_chi.steps = u()?,
        "theta_policy" => {
            s.theta_policy = value
                .parse()
                .map_err(|e: String| config_err(line, key, e))?
        }
        "levels" => {
            cfg.levels = u32::try_from(u()?).map_err(|_| config_err(line, key, "too large"))?
        }
        "tolerance" => {
            let t = f()?;
            if t <= 0.0 {
                return Err(config_err(line, key, format!("must be > 0, got {t}")));
            }
            cfg.tolerance = t;
        }
        "csv_path" => cfg.csv_path = Some(PathBuf::from(value)),
        "svg_path" => cfg.svg_path = Some(PathBuf::from(value)),
        _ => unreachable!("key list and match arms agree"),
    }
    Ok(())
}

/// Cross-key constraints, reported against the line of the most specific key.
fn validate(
    cfg: &RunConfig,
    raw: &BTreeMap<&'static str, (usize, String)>,
) -> Result<(), CliError> {
    let at = |keys: &[&'static str]| -> (Option<usize>, Option<String>) {
        keys.iter()
            .find_map(|k| raw.get(k).map(|(l, _)| (Some(*l), Some(k.to_string()))))
            .unwrap_or((None, Some(keys[0].to_string())))
    };
    let wrap = |keys: &[&'static str], e: CraseError| {
        let (line, key) = at(keys);
        CliError::Config {
            line,
            key,
            message: e.to_string(),
        }
    };

    cfg.oracle.rates.validate().map_err(|e| {
        let m = e.to_string();
        let keys: &[&'static str] = if m.contains("region-2") || m.contains("gamma_b2 + gamma_a2") {
            &["gamma_b2", "gamma_a2"]
        } else if let Some(k) = KEYS[..4].iter().find(|k| m.contains(&format!("{k} must"))) {
            std::slice::from_ref(k)
        } else {
            &["gamma_a1", "gamma_b1"]
        };
        wrap(keys, e)
    })?;
    cfg.sweep.validate().map_err(|e| {
        let m = e.to_string();
        let keys: &[&'static str] = if m.contains("sqrt_eps") {
            &["sqrt_eps_steps", "sqrt_eps_min", "sqrt_eps_max"]
        } else if m.contains("cosh_chi") {
            &["cosh_chi_min", "cosh_chi_steps", "cosh_chi_max"]
        } else {
            &["theta_policy"]
        };
        wrap(keys, e)
    })?;
    cfg.oracle.validate().map_err(|e| {
        let m = e.to_string();
        // Messages lead with the offending key; the support checks do not.
        let key = KEYS[4..10]
            .iter()
            .copied()
            .find(|k| m.contains(&format!(": {k} ")))
            .unwrap_or("mode_center");
        wrap(&[key], e)
    })?;
    Ok(())
}
