use crate::protocol::{BurstLength, BurstType, CasLatency, Geometry, ModeRegister, TimingConfig};
use thiserror::Error;

/// Everything a simulation run needs, parsed from a `key=value` config file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub timing: TimingConfig,
    pub cas_latency: CasLatency,
    pub burst_length: BurstLength,
    pub burst_type: BurstType,
    pub row_bits: u32,
    pub col_bits: u32,
    /// Missed refresh intervals tolerated before retention is lost.
    pub grace_factor: u32,
    /// Hard cap on simulated clocks; exceeding it is a timeout.
    pub max_cycles: u64,
    /// Extended mode register payload driven during initialization.
    pub emrs_payload: u32,
    /// Overrides the derived DLL-reset MRS payload when set.
    pub mrs_reset_payload: Option<u32>,
    /// Divides the modeled power-up delay for desk-scale runs (1 = the
    /// full 200us).
    pub power_up_scale: f64,
    /// Seed for random traffic mode.
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            timing: TimingConfig::default(),
            cas_latency: CasLatency::Cl2,
            burst_length: BurstLength::Bl4,
            burst_type: BurstType::Sequential,
            row_bits: 13,
            col_bits: 10,
            grace_factor: 2,
            max_cycles: 10_000_000,
            emrs_payload: 0,
            mrs_reset_payload: None,
            power_up_scale: 1.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line 1: expected header `format=1`, found `{0}`")]
    BadHeader(String),
    #[error("line {line}: expected key=value")]
    MissingEquals { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value `{value}` for `{key}`")]
    BadValue { line: usize, key: String, value: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

impl SimConfig {
    pub fn geometry(&self) -> Geometry {
        Geometry { row_bits: self.row_bits, col_bits: self.col_bits }
    }

    pub fn mode_register(&self) -> ModeRegister {
        ModeRegister {
            burst_length: self.burst_length,
            burst_type: self.burst_type,
            cas_latency: self.cas_latency,
            operating_mode: 0,
        }
    }

    /// The MRS payload driven mid-initialization: normal operation with the
    /// DLL reset bit set, unless overridden in the config.
    pub fn mrs_reset_payload(&self) -> u32 {
        if let Some(word) = self.mrs_reset_payload {
            return word;
        }
        let mr = ModeRegister { operating_mode: 0b10, ..self.mode_register() };
        crate::protocol::encode_mode_register(&mr).expect("validated fields") as u32
    }

    /// Power-up delay after compression by `power_up_scale`.
    pub fn effective_power_up_ns(&self) -> f64 {
        self.timing.power_up_delay_ns / self.power_up_scale
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.timing.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if !(1..=16).contains(&self.row_bits) {
            return Err(ConfigError::Invalid(format!(
                "row_bits must be 1..=16, got {}",
                self.row_bits
            )));
        }
        // Column addresses share the pins with the auto-precharge flag on
        // A10, so columns must stay below bit 10. The burst window must
        // also fit in the column field.
        if !(3..=10).contains(&self.col_bits) {
            return Err(ConfigError::Invalid(format!(
                "col_bits must be 3..=10, got {}",
                self.col_bits
            )));
        }
        if self.burst_length != BurstLength::Bl4 {
            return Err(ConfigError::Invalid(
                "burst_length must be 4: one 64-bit bus word is one burst of four 16-bit beats"
                    .into(),
            ));
        }
        if self.grace_factor == 0 {
            return Err(ConfigError::Invalid("grace_factor must be at least 1".into()));
        }
        if self.emrs_payload >= 1 << 13 {
            return Err(ConfigError::Invalid(format!(
                "emrs_payload {:#x} exceeds the 13 address pins",
                self.emrs_payload
            )));
        }
        if !self.power_up_scale.is_finite() || self.power_up_scale < 1.0 {
            return Err(ConfigError::Invalid(format!(
                "power_up_scale must be at least 1, got {}",
                self.power_up_scale
            )));
        }
        if self.max_cycles == 0 {
            return Err(ConfigError::Invalid("max_cycles must be positive".into()));
        }
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(
    value: &str,
    key: &str,
    line: usize,
) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
    })
}

fn parse_hex_u32(value: &str, key: &str, line: usize) -> Result<u32, ConfigError> {
    let s = value.strip_prefix("0x").unwrap_or(value);
    u32::from_str_radix(s, 16).map_err(|_| ConfigError::BadValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
    })
}

/// Parses the versioned `key=value` config format. Unknown keys are
/// rejected; missing keys keep their defaults.
///
/// ```text
/// format=1
/// tck_ns=10
/// cas_latency=2.5
/// burst_type=interleaved
/// ```
pub fn parse_config(text: &str) -> Result<SimConfig, ConfigError> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .map(|(_, l)| l.trim().to_string())
        .unwrap_or_default();
    if header != "format=1" {
        return Err(ConfigError::BadHeader(header));
    }

    let mut cfg = SimConfig::default();
    for (idx, raw) in lines {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or(ConfigError::MissingEquals { line })?;
        let bad = || ConfigError::BadValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
        };
        match key {
            "t_ck_ns" => cfg.timing.t_ck_ns = parse_num(value, key, line)?,
            "t_rp_ns" => cfg.timing.t_rp_ns = parse_num(value, key, line)?,
            "t_rcd_ns" => cfg.timing.t_rcd_ns = parse_num(value, key, line)?,
            "t_rfc_ns" => cfg.timing.t_rfc_ns = parse_num(value, key, line)?,
            "t_mrd_ns" => cfg.timing.t_mrd_ns = parse_num(value, key, line)?,
            "t_wr_ns" => cfg.timing.t_wr_ns = parse_num(value, key, line)?,
            "power_up_delay_ns" => cfg.timing.power_up_delay_ns = parse_num(value, key, line)?,
            "power_up_scale" => cfg.power_up_scale = parse_num(value, key, line)?,
            "refresh_interval_ns" => {
                cfg.timing.refresh_interval_ns = parse_num(value, key, line)?
            }
            "cas_latency" => {
                cfg.cas_latency = match value {
                    "2" => CasLatency::Cl2,
                    "2.5" => CasLatency::Cl2p5,
                    "3" => CasLatency::Cl3,
                    _ => return Err(bad()),
                }
            }
            "burst_length" => {
                let n: u32 = parse_num(value, key, line)?;
                cfg.burst_length = BurstLength::from_len(n).ok_or_else(bad)?;
            }
            "burst_type" => {
                cfg.burst_type = match value {
                    "sequential" => BurstType::Sequential,
                    "interleaved" => BurstType::Interleaved,
                    _ => return Err(bad()),
                }
            }
            "row_bits" => cfg.row_bits = parse_num(value, key, line)?,
            "col_bits" => cfg.col_bits = parse_num(value, key, line)?,
            "grace_factor" => cfg.grace_factor = parse_num(value, key, line)?,
            "max_cycles" => cfg.max_cycles = parse_num(value, key, line)?,
            "emrs_payload" => cfg.emrs_payload = parse_hex_u32(value, key, line)?,
            "mrs_reset_payload" => {
                cfg.mrs_reset_payload = Some(parse_hex_u32(value, key, line)?)
            }
            "seed" => cfg.seed = parse_num(value, key, line)?,
            _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        assert_eq!(SimConfig::default().validate(), Ok(()));
    }

    #[test]
    fn parses_overrides_and_comments() {
        let cfg = parse_config(
            "format=1\n\
             # timing\n\
             t_ck_ns=7.5\n\
             cas_latency=2.5\n\
             burst_type=interleaved\n\
             col_bits=9  # smaller page\n\
             emrs_payload=0x4\n",
        )
        .unwrap();
        assert_eq!(cfg.timing.t_ck_ns, 7.5);
        assert_eq!(cfg.cas_latency, CasLatency::Cl2p5);
        assert_eq!(cfg.burst_type, BurstType::Interleaved);
        assert_eq!(cfg.col_bits, 9);
        assert_eq!(cfg.emrs_payload, 4);
    }

    #[test]
    fn rejects_unknown_key() {
        let err = parse_config("format=1\nbogus=1\n").unwrap_err();
        assert_eq!(err, ConfigError::UnknownKey { line: 2, key: "bogus".into() });
    }

    #[test]
    fn rejects_bad_header() {
        assert!(matches!(parse_config("tck_ns=10\n"), Err(ConfigError::BadHeader(_))));
    }

    #[test]
    fn rejects_bad_cas_latency() {
        let err = parse_config("format=1\ncas_latency=4\n").unwrap_err();
        assert!(matches!(err, ConfigError::BadValue { line: 2, .. }));
    }

    #[test]
    fn rejects_wide_columns() {
        let err = parse_config("format=1\ncol_bits=11\n").unwrap_err();
        assert!(matches!(err, ConfigError::Invalid(_)));
    }
}
