//! Whole-system simulation: configuration, the closed-loop engine, the
//! end-of-run report, and a deterministic random traffic generator.

mod config;
mod engine;
mod report;
mod traffic;

pub use config::{parse_config, ConfigError, SimConfig};
pub use engine::{PinRecord, SimError, Simulation};
pub use report::{SimReport, TransactionRecord};
pub use traffic::random_traffic;
