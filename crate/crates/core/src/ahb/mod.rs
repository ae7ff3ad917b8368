//! AHB slave front-end and a trace-replaying master model.
//!
//! The slave translates bus transfers into controller requests, stretching
//! `hready` while a transfer is in flight. Requests colliding with a refresh
//! are answered with a two-cycle SPLIT response and re-granted once the
//! controller is idle again; the master retries split transfers exactly
//! once per grant.

mod master;
mod slave;
mod trace;

pub use master::{AhbMaster, MasterStats};
pub use slave::{AhbSlave, ControllerStatus, SlaveState, SlaveStep};
pub use trace::{beat_address, master_replay, parse_trace, TraceEntry, TraceFormatError};

use serde::{Deserialize, Serialize};

/// AHB transfer type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HTrans {
    Idle,
    Busy,
    NonSeq,
    Seq,
}

/// AHB burst kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HBurst {
    Single,
    Incr,
    Wrap4,
    Incr4,
    Wrap8,
    Incr8,
    Wrap16,
    Incr16,
}

impl HBurst {
    /// Fixed beat count, or None for the undefined-length INCR burst.
    pub fn beats(self) -> Option<u32> {
        match self {
            HBurst::Single => Some(1),
            HBurst::Incr => None,
            HBurst::Wrap4 | HBurst::Incr4 => Some(4),
            HBurst::Wrap8 | HBurst::Incr8 => Some(8),
            HBurst::Wrap16 | HBurst::Incr16 => Some(16),
        }
    }

    pub fn is_wrap(self) -> bool {
        matches!(self, HBurst::Wrap4 | HBurst::Wrap8 | HBurst::Wrap16)
    }

    pub fn name(self) -> &'static str {
        match self {
            HBurst::Single => "SINGLE",
            HBurst::Incr => "INCR",
            HBurst::Wrap4 => "WRAP4",
            HBurst::Incr4 => "INCR4",
            HBurst::Wrap8 => "WRAP8",
            HBurst::Incr8 => "INCR8",
            HBurst::Wrap16 => "WRAP16",
            HBurst::Incr16 => "INCR16",
        }
    }

    pub fn parse(s: &str) -> Option<HBurst> {
        Some(match s {
            "SINGLE" => HBurst::Single,
            "INCR" => HBurst::Incr,
            "WRAP4" => HBurst::Wrap4,
            "INCR4" => HBurst::Incr4,
            "WRAP8" => HBurst::Wrap8,
            "INCR8" => HBurst::Incr8,
            "WRAP16" => HBurst::Wrap16,
            "INCR16" => HBurst::Incr16,
            _ => return None,
        })
    }
}

/// One address-phase transfer as driven by the master. Write data is
/// carried alongside the address for simulation convenience.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AhbTransfer {
    pub htrans: HTrans,
    pub haddr: u32,
    pub hwrite: bool,
    /// log2 of the transfer size in bytes; this design supports only 3
    /// (64-bit).
    pub hsize: u8,
    pub hburst: HBurst,
    pub hwdata: u64,
}

impl AhbTransfer {
    pub fn idle() -> Self {
        AhbTransfer {
            htrans: HTrans::Idle,
            haddr: 0,
            hwrite: false,
            hsize: 3,
            hburst: HBurst::Single,
            hwdata: 0,
        }
    }
}

/// AHB response encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HResp {
    Okay,
    Error,
    Split,
}

/// Slave response for one bus clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AhbResponse {
    pub hready: bool,
    pub hresp: HResp,
    pub hrdata: u64,
}

impl AhbResponse {
    pub fn okay() -> Self {
        AhbResponse { hready: true, hresp: HResp::Okay, hrdata: 0 }
    }
}

/// A transfer descriptor handed from the slave to the controller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemRequest {
    /// Linear system-word address.
    pub linear_addr: u64,
    pub is_read: bool,
    pub beat_count: u32,
    /// Identifies the transfer across SPLIT retirement and re-grant.
    pub request_id: u64,
}
