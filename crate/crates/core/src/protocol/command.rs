use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Logic level on a control line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    L,
    H,
}

/// The commands a DDR SDRAM controller can issue.
///
/// `Deselect` is distinguished from `Nop` only by the chip-select level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Command {
    LoadModeRegister,
    AutoRefresh,
    Precharge,
    Active,
    Write,
    Read,
    Nop,
    Deselect,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::LoadModeRegister,
        Command::AutoRefresh,
        Command::Precharge,
        Command::Active,
        Command::Write,
        Command::Read,
        Command::Nop,
        Command::Deselect,
    ];

    /// Short mnemonic used in trace output.
    pub fn mnemonic(self) -> &'static str {
        match self {
            Command::LoadModeRegister => "LMR",
            Command::AutoRefresh => "AR",
            Command::Precharge => "PRE",
            Command::Active => "ACT",
            Command::Write => "WR",
            Command::Read => "RD",
            Command::Nop => "NOP",
            Command::Deselect => "DESL",
        }
    }
}

/// RAS/CAS/WE/CKE/CS line levels for one clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlSignals {
    pub ras: Level,
    pub cas: Level,
    pub we: Level,
    /// Held high after device configuration.
    pub cke: Level,
    /// Held low during device operation; high selects no device.
    pub cs: Level,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CommandError {
    /// The RAS/CAS/WE combination is not assigned by the command table.
    #[error("unknown command encoding ras={0:?} cas={1:?} we={2:?}")]
    UnknownCommand(Level, Level, Level),
    /// Decoding requires the clock-enable line high.
    #[error("clock enable low; command bus not sampled")]
    ClockDisabled,
}

/// Encodes a command onto the RAS/CAS/WE/CKE/CS lines.
pub fn encode_command(cmd: Command) -> ControlSignals {
    use Level::{H, L};
    let (ras, cas, we, cs) = match cmd {
        Command::LoadModeRegister => (L, L, L, L),
        Command::AutoRefresh => (L, L, H, L),
        Command::Precharge => (L, H, L, L),
        Command::Active => (L, H, H, L),
        Command::Write => (H, L, L, L),
        Command::Read => (H, L, H, L),
        Command::Nop => (H, H, H, L),
        Command::Deselect => (H, H, H, H),
    };
    ControlSignals { ras, cas, we, cke: H, cs }
}

/// Decodes control-signal levels back into a command.
///
/// Chip select high yields `Deselect` regardless of the other lines. The one
/// RAS/CAS/WE combination (H,H,L) not assigned by the command table is
/// rejected rather than aliased.
pub fn decode_command(sig: ControlSignals) -> Result<Command, CommandError> {
    use Level::{H, L};
    if sig.cke == L {
        return Err(CommandError::ClockDisabled);
    }
    if sig.cs == H {
        return Ok(Command::Deselect);
    }
    match (sig.ras, sig.cas, sig.we) {
        (L, L, L) => Ok(Command::LoadModeRegister),
        (L, L, H) => Ok(Command::AutoRefresh),
        (L, H, L) => Ok(Command::Precharge),
        (L, H, H) => Ok(Command::Active),
        (H, L, L) => Ok(Command::Write),
        (H, L, H) => Ok(Command::Read),
        (H, H, H) => Ok(Command::Nop),
        (H, H, L) => Err(CommandError::UnknownCommand(sig.ras, sig.cas, sig.we)),
    }
}
