//! Shared DDR protocol vocabulary: commands, control signals, the mode
//! register, address geometry and timing parameters.

mod address;
mod command;
mod mode_register;
mod timing;

pub use address::{join_address, split_address, AddressError, DdrAddress, Geometry};
pub use command::{decode_command, encode_command, Command, CommandError, ControlSignals, Level};
pub use mode_register::{
    decode_mode_register, encode_mode_register, BurstLength, BurstType, CasLatency,
    ModeRegister, ModeRegisterError,
};
pub use timing::{cycles_for, delay_cycles, TimingConfig, TimingError, TimingParam};
