use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Programmed burst length, address pins A0-A2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BurstLength {
    Bl2,
    Bl4,
    Bl8,
}

impl BurstLength {
    // a burst always has a length; is_empty would be meaningless
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> u32 {
        match self {
            BurstLength::Bl2 => 2,
            BurstLength::Bl4 => 4,
            BurstLength::Bl8 => 8,
        }
    }

    pub fn from_len(len: u32) -> Option<BurstLength> {
        match len {
            2 => Some(BurstLength::Bl2),
            4 => Some(BurstLength::Bl4),
            8 => Some(BurstLength::Bl8),
            _ => None,
        }
    }
}

/// Column ordering within a burst, address pin A3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BurstType {
    Sequential,
    Interleaved,
}

/// CAS latency, address pins A4-A6. Stored in half-cycle units so that
/// CL = 2.5 is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CasLatency {
    Cl2,
    Cl2p5,
    Cl3,
}

impl CasLatency {
    /// Latency in half clock cycles.
    pub fn half_cycles(self) -> u32 {
        match self {
            CasLatency::Cl2 => 4,
            CasLatency::Cl2p5 => 5,
            CasLatency::Cl3 => 6,
        }
    }

    /// Whole clock cycles the command FSM spends in its CAS-latency state.
    pub fn fsm_cycles(self) -> u32 {
        self.half_cycles().div_ceil(2)
    }
}

/// Contents of the device mode register.
///
/// Loading requires BA0 = BA1 = 0; the extended mode register (BA0 = 1) is
/// carried as an opaque payload elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeRegister {
    pub burst_length: BurstLength,
    pub burst_type: BurstType,
    pub cas_latency: CasLatency,
    /// Operating mode field, pins A7-A12, carried opaquely. Bit A8 is the
    /// self-clearing DLL-reset bit; it reads back as zero.
    pub operating_mode: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModeRegisterError {
    #[error("invalid {field} code {code:#05b}")]
    InvalidField { field: &'static str, code: u16 },
    #[error("operating mode {0:#x} does not fit in A7-A12")]
    OperatingModeTooWide(u8),
}

const BL_SHIFT: u16 = 0;
const BT_SHIFT: u16 = 3;
const CL_SHIFT: u16 = 4;
const OP_SHIFT: u16 = 7;

/// Packs a mode register onto address pins A0-A12.
pub fn encode_mode_register(mr: &ModeRegister) -> Result<u16, ModeRegisterError> {
    if mr.operating_mode >= 1 << 6 {
        return Err(ModeRegisterError::OperatingModeTooWide(mr.operating_mode));
    }
    let bl = match mr.burst_length {
        BurstLength::Bl2 => 0b001,
        BurstLength::Bl4 => 0b010,
        BurstLength::Bl8 => 0b011,
    };
    let bt = match mr.burst_type {
        BurstType::Sequential => 0,
        BurstType::Interleaved => 1,
    };
    let cl = match mr.cas_latency {
        CasLatency::Cl2 => 0b010,
        CasLatency::Cl2p5 => 0b110,
        CasLatency::Cl3 => 0b011,
    };
    Ok(bl << BL_SHIFT
        | bt << BT_SHIFT
        | cl << CL_SHIFT
        | (mr.operating_mode as u16) << OP_SHIFT)
}

/// Inverse of [`encode_mode_register`]; unassigned field codes are errors.
pub fn decode_mode_register(word: u16) -> Result<ModeRegister, ModeRegisterError> {
    let bl_code = (word >> BL_SHIFT) & 0b111;
    let burst_length = match bl_code {
        0b001 => BurstLength::Bl2,
        0b010 => BurstLength::Bl4,
        0b011 => BurstLength::Bl8,
        code => return Err(ModeRegisterError::InvalidField { field: "burst_length", code }),
    };
    let burst_type = if (word >> BT_SHIFT) & 1 == 0 {
        BurstType::Sequential
    } else {
        BurstType::Interleaved
    };
    let cl_code = (word >> CL_SHIFT) & 0b111;
    let cas_latency = match cl_code {
        0b010 => CasLatency::Cl2,
        0b110 => CasLatency::Cl2p5,
        0b011 => CasLatency::Cl3,
        code => return Err(ModeRegisterError::InvalidField { field: "cas_latency", code }),
    };
    let operating_mode = ((word >> OP_SHIFT) & 0b11_1111) as u8;
    Ok(ModeRegister { burst_length, burst_type, cas_latency, operating_mode })
}
