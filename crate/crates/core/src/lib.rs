//! Cycle-accurate model of an AHB-fronted DDR SDRAM controller.
//!
//! The crate is split along the same seams as the hardware it models:
//!
//! * [`protocol`] — shared vocabulary: DDR commands, control-signal levels,
//!   the mode register, address geometry and timing parameters.
//! * [`controller`] — the controller proper: the initialization FSM, the
//!   command FSM, the refresh counter and the signal generation stage.
//! * [`memory`] — a behavioral quad-bank DDR SDRAM device that stores data
//!   and doubles as a strict protocol/timing checker.
//! * [`datapath`] — 64-bit system word to 16-bit double-data-rate beat
//!   conversion.
//! * [`ahb`] — AHB slave front-end and a trace-replaying master model.
//! * [`sim`] — the clock engine wiring everything together, plus config and
//!   trace ingestion, statistics and reporting.

pub mod ahb;
pub mod controller;
pub mod datapath;
pub mod memory;
pub mod protocol;
pub mod sim;

pub use protocol::{
    Command, ControlSignals, DdrAddress, Geometry, Level, ModeRegister, TimingConfig,
};
