use crate::error::{Error, Result};

/// Workload parameters. Times are in seconds; an infinite churn interval or
/// stale time disables that mechanism.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadConfig {
    pub num_items: usize,
    pub num_servers: usize,
    pub num_requests: usize,
    /// Probability that a request repeats the previous target.
    pub locality: f64,
    pub churn_mean_interval: f64,
    pub stale_time: f64,
    pub seed: u64,
    /// Zipf exponent for non-repeat draws; `None` means uniform.
    pub zipf_exponent: Option<f64>,
}

impl Default for WorkloadConfig {
    fn default() -> Self {
        WorkloadConfig {
            num_items: 10_000,
            num_servers: 20,
            num_requests: 100_000,
            locality: 0.7,
            churn_mean_interval: 200.0 * 60.0,
            stale_time: 200.0 * 60.0,
            seed: 0,
            zipf_exponent: None,
        }
    }
}

impl WorkloadConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.num_items == 0 {
            return bad("num_items must be positive".into());
        }
        if self.num_servers == 0 {
            return bad("num_servers must be positive".into());
        }
        if !(0.0..1.0).contains(&self.locality) {
            return bad(format!("locality must lie in [0, 1), got {}", self.locality));
        }
        if !(self.churn_mean_interval > 0.0) {
            return bad(format!("churn_mean_interval must be positive, got {}", self.churn_mean_interval));
        }
        if !(self.stale_time > 0.0) {
            return bad(format!("stale_time must be positive, got {}", self.stale_time));
        }
        if let Some(s) = self.zipf_exponent {
            if !(s > 0.0) || !s.is_finite() {
                return bad(format!("zipf_exponent must be positive, got {s}"));
            }
        }
        Ok(())
    }

    /// Sets one field from its textual form. Returns `Ok(false)` for keys
    /// that are not workload fields so callers can layer their own keys.
    pub fn set(&mut self, key: &str, value: &str) -> Result<bool> {
        let invalid = |e: String| Error::InvalidConfig(format!("{key}: {e}"));
        match key {
            "num_items" => self.num_items = value.parse().map_err(|e| invalid(format!("{e}")))?,
            "num_servers" => self.num_servers = value.parse().map_err(|e| invalid(format!("{e}")))?,
            "num_requests" => self.num_requests = value.parse().map_err(|e| invalid(format!("{e}")))?,
            "locality" => self.locality = parse_f64(value).map_err(invalid)?,
            "churn_mean_interval" => self.churn_mean_interval = parse_f64(value).map_err(invalid)?,
            "stale_time" => self.stale_time = parse_f64(value).map_err(invalid)?,
            "seed" => self.seed = value.parse().map_err(|e| invalid(format!("{e}")))?,
            "zipf_exponent" => {
                self.zipf_exponent = match value {
                    "none" => None,
                    v => Some(parse_f64(v).map_err(invalid)?),
                }
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Parses a flat `key = value` file. Unknown keys are rejected.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut config = WorkloadConfig::default();
        for (line, key, value) in parse_key_values(text)? {
            if !config.set(&key, &value)? {
                return Err(Error::Parse { line, msg: format!("unknown key {key:?}") });
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn to_text(&self) -> String {
        let zipf = self.zipf_exponent.map_or("none".to_string(), |s| s.to_string());
        format!(
            "num_items = {}\nnum_servers = {}\nnum_requests = {}\nlocality = {}\n\
             churn_mean_interval = {}\nstale_time = {}\nseed = {}\nzipf_exponent = {}\n",
            self.num_items,
            self.num_servers,
            self.num_requests,
            self.locality,
            self.churn_mean_interval,
            self.stale_time,
            self.seed,
            zipf
        )
    }
}

/// Accepts ordinary floats plus `inf` for "disabled".
pub(crate) fn parse_f64(value: &str) -> std::result::Result<f64, String> {
    match value {
        "inf" | "none" => Ok(f64::INFINITY),
        v => v.parse::<f64>().map_err(|e| format!("{e}")),
    }
}

/// Splits `key = value` lines, skipping blanks and `#` comments. Returns
/// `(line number, key, value)` triples.
pub fn parse_key_values(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            msg: format!("expected `key = value`, got {raw:?}"),
        })?;
        out.push((idx + 1, key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}
