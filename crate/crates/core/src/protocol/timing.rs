use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Named timing parameters, used to label checker violations and to address
/// individual controller waits in tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TimingParam {
    TRp,
    TRcd,
    TRfc,
    TMrd,
    /// tDAL = tWR + tRP: last write data beat to next command.
    TDal,
    RefreshInterval,
}

impl TimingParam {
    pub fn name(self) -> &'static str {
        match self {
            TimingParam::TRp => "tRP",
            TimingParam::TRcd => "tRCD",
            TimingParam::TRfc => "tRFC",
            TimingParam::TMrd => "tMRD",
            TimingParam::TDal => "tDAL",
            TimingParam::RefreshInterval => "tREFI",
        }
    }
}

/// Clock period and delay parameters, all in nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingConfig {
    pub t_ck_ns: f64,
    pub t_rp_ns: f64,
    pub t_rfc_ns: f64,
    pub t_mrd_ns: f64,
    pub t_rcd_ns: f64,
    pub t_wr_ns: f64,
    /// Power/clock stabilization delay before the first executable command.
    pub power_up_delay_ns: f64,
    pub refresh_interval_ns: f64,
}

impl Default for TimingConfig {
    fn default() -> Self {
        // DDR-200 class numbers at tCK = 10 ns.
        TimingConfig {
            t_ck_ns: 10.0,
            t_rp_ns: 20.0,
            t_rfc_ns: 70.0,
            t_mrd_ns: 15.0,
            t_rcd_ns: 20.0,
            t_wr_ns: 15.0,
            power_up_delay_ns: 200_000.0,
            refresh_interval_ns: 7_800.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TimingError {
    #[error("{field} must be positive, got {value}")]
    NotPositive { field: &'static str, value: f64 },
    #[error("{field} must be non-negative, got {value}")]
    Negative { field: &'static str, value: f64 },
}

impl TimingConfig {
    pub fn validate(&self) -> Result<(), TimingError> {
        let positive = [
            ("t_ck_ns", self.t_ck_ns),
            ("t_rp_ns", self.t_rp_ns),
            ("t_rfc_ns", self.t_rfc_ns),
            ("t_rcd_ns", self.t_rcd_ns),
            ("t_wr_ns", self.t_wr_ns),
            ("power_up_delay_ns", self.power_up_delay_ns),
            ("refresh_interval_ns", self.refresh_interval_ns),
        ];
        for (field, value) in positive {
            if value <= 0.0 {
                return Err(TimingError::NotPositive { field, value });
            }
        }
        if self.t_mrd_ns < 0.0 {
            return Err(TimingError::Negative { field: "t_mrd_ns", value: self.t_mrd_ns });
        }
        Ok(())
    }

    /// tDAL: write recovery plus auto-precharge period.
    pub fn t_dal_ns(&self) -> f64 {
        self.t_wr_ns + self.t_rp_ns
    }

    pub fn param_ns(&self, param: TimingParam) -> f64 {
        match param {
            TimingParam::TRp => self.t_rp_ns,
            TimingParam::TRcd => self.t_rcd_ns,
            TimingParam::TRfc => self.t_rfc_ns,
            TimingParam::TMrd => self.t_mrd_ns,
            TimingParam::TDal => self.t_dal_ns(),
            TimingParam::RefreshInterval => self.refresh_interval_ns,
        }
    }

    /// Additional wait-state cycles a state machine spends on `param` after
    /// its command state.
    pub fn wait_cycles(&self, param: TimingParam) -> u32 {
        delay_cycles(self.param_ns(param), self.t_ck_ns)
    }

    /// Minimum whole clock cycles separating two commands governed by `param`.
    pub fn min_gap_cycles(&self, param: TimingParam) -> u64 {
        cycles_for(self.param_ns(param), self.t_ck_ns)
    }
}

// Guard against representation noise when t_ns is an exact multiple of tCK.
const ROUNDING_EPS: f64 = 1e-9;

/// Number of additional wait-state cycles needed after a command state to
/// cover `t_ns`: max(0, ceil(t/tCK) - 1). The command state itself accounts
/// for one tCK, so when tCK >= t the delay state is skipped entirely.
pub fn delay_cycles(t_ns: f64, t_ck_ns: f64) -> u32 {
    assert!(t_ck_ns > 0.0, "clock period must be positive");
    let cycles = (t_ns / t_ck_ns - ROUNDING_EPS).ceil();
    if cycles <= 1.0 {
        0
    } else {
        cycles as u32 - 1
    }
}

/// Whole clock cycles covering `t_ns`: ceil(t/tCK), never less than one.
pub fn cycles_for(t_ns: f64, t_ck_ns: f64) -> u64 {
    assert!(t_ck_ns > 0.0, "clock period must be positive");
    let cycles = (t_ns / t_ck_ns - ROUNDING_EPS).ceil();
    if cycles <= 1.0 {
        1
    } else {
        cycles as u64
    }
}
