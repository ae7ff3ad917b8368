use serde::{Deserialize, Serialize};

/// One completed system transfer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransactionRecord {
    pub is_read: bool,
    /// Linear 64-bit-word address.
    pub linear_addr: u64,
    /// Clock on which the controller sampled the request.
    pub sample_cycle: u64,
    /// First clock the command machine was back in idle.
    pub idle_cycle: u64,
    /// Whole transaction length in clocks, including the one-clock command
    /// pin skew.
    pub latency_clocks: u64,
    /// Data returned to the bus (reads only).
    pub data: Option<u64>,
}

/// End-of-run summary, serializable as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub format: u32,
    pub cycles: u64,
    pub tck_ns: f64,
    pub reads: u64,
    pub writes: u64,
    pub refresh_count: u64,
    /// SPLIT responses issued for transfers colliding with refresh.
    pub splits: u64,
    /// Split transfers re-driven after re-grant.
    pub retries: u64,
    pub bus_errors: u64,
    /// Clocks where ACTIVE/READ/WRITE appeared on the pins while the
    /// refresh acknowledge was high. Always zero for a correct controller.
    pub ref_ack_conflicts: u64,
    pub bytes_transferred: u64,
    pub bandwidth_mbytes_per_s: f64,
    pub violations: Vec<String>,
    pub transactions: Vec<TransactionRecord>,
}

impl SimReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
