use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Device organization. Bank count and data widths are fixed by the design:
/// quad bank, 16-bit device data bus, 64-bit system data bus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    pub row_bits: u32,
    pub col_bits: u32,
}

impl Geometry {
    pub const BANK_COUNT: u32 = 4;
    pub const BANK_BITS: u32 = 2;
    pub const DEVICE_DATA_BITS: u32 = 16;
    pub const SYSTEM_DATA_BITS: u32 = 64;

    /// Total addressable units under the row|bank|column slicing.
    pub fn capacity(&self) -> u64 {
        1u64 << (self.row_bits + Self::BANK_BITS + self.col_bits)
    }

    pub fn rows(&self) -> u32 {
        1 << self.row_bits
    }

    pub fn cols(&self) -> u32 {
        1 << self.col_bits
    }
}

impl Default for Geometry {
    // 13 row bits x 10 column bits x 4 banks of 16-bit cells = 64 MiB
    fn default() -> Self {
        Geometry { row_bits: 13, col_bits: 10 }
    }
}

/// Decoded device address for one access.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdrAddress {
    pub bank: u8,
    pub row: u32,
    pub column: u32,
    /// Driven on address bit A10 with READ/WRITE commands.
    pub auto_precharge: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AddressError {
    #[error("address {addr:#x} out of range (capacity {capacity:#x})")]
    AddressOutOfRange { addr: u64, capacity: u64 },
    #[error("{field} {value:#x} exceeds {bits}-bit field")]
    FieldOutOfRange { field: &'static str, value: u64, bits: u32 },
}

/// Bit-slices a linear address as {row | bank | column}, most to least
/// significant. Sequential addresses stay within an open row and rotate
/// banks between rows. `auto_precharge` defaults to false.
pub fn split_address(linear: u64, geom: &Geometry) -> Result<DdrAddress, AddressError> {
    if linear >= geom.capacity() {
        return Err(AddressError::AddressOutOfRange { addr: linear, capacity: geom.capacity() });
    }
    let col_mask = (1u64 << geom.col_bits) - 1;
    let column = (linear & col_mask) as u32;
    let bank = ((linear >> geom.col_bits) & 0b11) as u8;
    let row = (linear >> (geom.col_bits + Geometry::BANK_BITS)) as u32;
    Ok(DdrAddress { bank, row, column, auto_precharge: false })
}

/// Inverse of [`split_address`].
pub fn join_address(addr: &DdrAddress, geom: &Geometry) -> Result<u64, AddressError> {
    if addr.row >= geom.rows() {
        return Err(AddressError::FieldOutOfRange {
            field: "row",
            value: addr.row as u64,
            bits: geom.row_bits,
        });
    }
    if addr.column >= geom.cols() {
        return Err(AddressError::FieldOutOfRange {
            field: "column",
            value: addr.column as u64,
            bits: geom.col_bits,
        });
    }
    if addr.bank as u32 >= Geometry::BANK_COUNT {
        return Err(AddressError::FieldOutOfRange {
            field: "bank",
            value: addr.bank as u64,
            bits: Geometry::BANK_BITS,
        });
    }
    Ok(((addr.row as u64) << (geom.col_bits + Geometry::BANK_BITS))
        | ((addr.bank as u64) << geom.col_bits)
        | addr.column as u64)
}
