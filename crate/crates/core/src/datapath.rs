//! Width conversion between the 64-bit system bus and the 16-bit
//! double-data-rate device bus.
//!
//! One 64-bit system word maps onto one BL=4 device burst: four 16-bit
//! beats, least-significant word first, on rising/falling edge pairs across
//! two clocks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Edge {
    Rising,
    Falling,
}

/// One 16-bit transfer on the device data pins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Beat {
    pub clock: u64,
    pub edge: Edge,
    pub data: u16,
}

/// An ordered sequence of device-side data beats. Beats alternate
/// rising/falling with nondecreasing clock index; a burst of BL words spans
/// exactly BL/2 clocks.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BeatStream {
    pub beats: Vec<Beat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatapathError {
    #[error("malformed beat stream: {0}")]
    MalformedStream(&'static str),
}

/// Splits a 64-bit word into four beats starting at `start_clock`, on edges
/// (c,R),(c,F),(c+1,R),(c+1,F).
pub fn pack_write(word: u64, start_clock: u64) -> BeatStream {
    let beats = (0..4)
        .map(|i| Beat {
            clock: start_clock + i as u64 / 2,
            edge: if i % 2 == 0 { Edge::Rising } else { Edge::Falling },
            data: (word >> (16 * i)) as u16,
        })
        .collect();
    BeatStream { beats }
}

/// Reassembles a 64-bit word from exactly four well-formed beats.
pub fn unpack_read(stream: &BeatStream) -> Result<u64, DatapathError> {
    if stream.beats.len() != 4 {
        return Err(DatapathError::MalformedStream("expected exactly 4 beats"));
    }
    for (i, pair) in stream.beats.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        let expect = if i % 2 == 0 {
            a.edge == Edge::Rising && b.edge == Edge::Falling && b.clock == a.clock
        } else {
            a.edge == Edge::Falling && b.edge == Edge::Rising && b.clock == a.clock + 1
        };
        if !expect {
            return Err(DatapathError::MalformedStream("beats must alternate R/F across BL/2 clocks"));
        }
    }
    Ok(stream
        .beats
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, b)| acc | (b.data as u64) << (16 * i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_zero() {
        let s = pack_write(0, 7);
        assert_eq!(s.beats.iter().map(|b| b.data).collect::<Vec<_>>(), vec![0, 0, 0, 0]);
        assert_eq!(s.beats[0].clock, 7);
        assert_eq!(s.beats[3].clock, 8);
    }

    #[test]
    fn pack_order_lsw_first() {
        let s = pack_write(0x4444_3333_2222_1111, 0);
        assert_eq!(
            s.beats.iter().map(|b| b.data).collect::<Vec<_>>(),
            vec![0x1111, 0x2222, 0x3333, 0x4444]
        );
    }

    #[test]
    fn unpack_inverse() {
        let s = pack_write(0x4444_3333_2222_1111, 3);
        assert_eq!(unpack_read(&s), Ok(0x4444_3333_2222_1111));
    }

    #[test]
    fn unpack_wrong_count() {
        let mut s = pack_write(1, 0);
        s.beats.pop();
        assert!(matches!(unpack_read(&s), Err(DatapathError::MalformedStream(_))));
    }

    #[test]
    fn unpack_wrong_alternation() {
        let mut s = pack_write(1, 0);
        s.beats[1].edge = Edge::Rising;
        assert!(matches!(unpack_read(&s), Err(DatapathError::MalformedStream(_))));
    }

    #[test]
    fn burst_spans_two_clocks() {
        let s = pack_write(u64::MAX, 10);
        assert_eq!(s.beats.len(), 4);
        assert_eq!(s.beats.last().unwrap().clock - s.beats[0].clock, 1);
    }
}
