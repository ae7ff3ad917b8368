use thiserror::Error;

use super::HBurst;

/// One burst from a trace file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub is_read: bool,
    pub hburst: HBurst,
    /// Byte address of the first beat.
    pub addr: u32,
    /// Write data, one word per beat. Empty for reads.
    pub data: Vec<u64>,
    pub beat_count: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceFormatError {
    #[error("line 1: expected header `format=1`, found `{0}`")]
    BadHeader(String),
    #[error("line {line}: expected R or W, found `{token}`")]
    BadDirection { line: usize, token: String },
    #[error("line {line}: unknown burst kind `{token}`")]
    BadBurst { line: usize, token: String },
    #[error("line {line}: bad hex value `{token}`")]
    BadHex { line: usize, token: String },
    #[error("line {line}: bad beat count `{token}`")]
    BadCount { line: usize, token: String },
    #[error("line {line}: expected {expected} data words, found {found}")]
    DataCount { line: usize, expected: u32, found: usize },
    #[error("line {line}: missing operand")]
    MissingField { line: usize },
}

fn parse_hex<T>(tok: &str, line: usize) -> Result<T, TraceFormatError>
where
    T: TryFrom<u64>,
{
    let s = tok.strip_prefix("0x").unwrap_or(tok);
    let v = u64::from_str_radix(s, 16)
        .map_err(|_| TraceFormatError::BadHex { line, token: tok.to_string() })?;
    T::try_from(v).map_err(|_| TraceFormatError::BadHex { line, token: tok.to_string() })
}

/// Parses the versioned trace format:
///
/// ```text
/// format=1
/// # comment
/// W INCR4 0x100 0x1111 0x2222 0x3333 0x4444
/// R WRAP8 0x40
/// R INCR 0x200 3
/// ```
///
/// Write bursts list one 64-bit hex word per beat. Fixed-length read
/// bursts take no operands beyond the address; the undefined-length
/// `INCR` read takes a decimal beat count.
pub fn parse_trace(text: &str) -> Result<Vec<TraceEntry>, TraceFormatError> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .map(|(_, l)| l.trim().to_string())
        .unwrap_or_default();
    if header != "format=1" {
        return Err(TraceFormatError::BadHeader(header));
    }

    let mut entries = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut toks = body.split_whitespace();
        let dir = toks.next().ok_or(TraceFormatError::MissingField { line })?;
        let is_read = match dir {
            "R" => true,
            "W" => false,
            other => {
                return Err(TraceFormatError::BadDirection { line, token: other.to_string() })
            }
        };
        let burst_tok = toks.next().ok_or(TraceFormatError::MissingField { line })?;
        let hburst = HBurst::parse(burst_tok)
            .ok_or_else(|| TraceFormatError::BadBurst { line, token: burst_tok.to_string() })?;
        let addr_tok = toks.next().ok_or(TraceFormatError::MissingField { line })?;
        let addr: u32 = parse_hex(addr_tok, line)?;

        let rest: Vec<&str> = toks.collect();
        let entry = if is_read {
            let beat_count = match hburst.beats() {
                Some(n) => {
                    if !rest.is_empty() {
                        return Err(TraceFormatError::DataCount {
                            line,
                            expected: 0,
                            found: rest.len(),
                        });
                    }
                    n
                }
                None => {
                    let tok = rest.first().ok_or(TraceFormatError::MissingField { line })?;
                    if rest.len() > 1 {
                        return Err(TraceFormatError::DataCount {
                            line,
                            expected: 1,
                            found: rest.len(),
                        });
                    }
                    tok.parse::<u32>()
                        .ok()
                        .filter(|&n| n > 0)
                        .ok_or_else(|| TraceFormatError::BadCount {
                            line,
                            token: tok.to_string(),
                        })?
                }
            };
            TraceEntry { is_read, hburst, addr, data: Vec::new(), beat_count }
        } else {
            let mut data = Vec::with_capacity(rest.len());
            for tok in &rest {
                data.push(parse_hex::<u64>(tok, line)?);
            }
            if let Some(n) = hburst.beats() {
                if data.len() != n as usize {
                    return Err(TraceFormatError::DataCount {
                        line,
                        expected: n,
                        found: data.len(),
                    });
                }
            } else if data.is_empty() {
                return Err(TraceFormatError::MissingField { line });
            }
            let beat_count = data.len() as u32;
            TraceEntry { is_read, hburst, addr, data, beat_count }
        };
        entries.push(entry);
    }
    Ok(entries)
}

/// Byte address of beat `i` of a burst. Incrementing bursts step by the
/// 8-byte transfer size; wrapping bursts stay within the naturally
/// aligned window of `beats * 8` bytes.
pub fn beat_address(hburst: HBurst, base: u32, beat_count: u32, i: u32) -> u32 {
    let step = 8u32;
    if hburst.is_wrap() {
        let window = beat_count * step;
        let window_base = base & !(window - 1);
        window_base | (base.wrapping_add(i * step) & (window - 1))
    } else {
        base + i * step
    }
}

/// Expands a burst into the per-beat (byte address, write data) sequence
/// the master will drive.
pub fn master_replay(entry: &TraceEntry) -> Vec<(u32, Option<u64>)> {
    (0..entry.beat_count)
        .map(|i| {
            let addr = beat_address(entry.hburst, entry.addr, entry.beat_count, i);
            let data = if entry.is_read { None } else { Some(entry.data[i as usize]) };
            (addr, data)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_trace() {
        let text = "format=1\n\
                    # setup\n\
                    W INCR4 0x100 0x1 0x2 0x3 0x4\n\
                    R WRAP8 0x40  # trailing comment\n\
                    R INCR 0x200 3\n\
                    W SINGLE 0x8 0xdead\n";
        let entries = parse_trace(text).unwrap();
        assert_eq!(entries.len(), 4);
        assert_eq!(entries[0].beat_count, 4);
        assert_eq!(entries[0].data, vec![1, 2, 3, 4]);
        assert_eq!(entries[1].hburst, HBurst::Wrap8);
        assert_eq!(entries[1].beat_count, 8);
        assert_eq!(entries[2].beat_count, 3);
        assert_eq!(entries[3].addr, 8);
    }

    #[test]
    fn rejects_missing_header() {
        let err = parse_trace("W SINGLE 0x0 0x1\n").unwrap_err();
        assert!(matches!(err, TraceFormatError::BadHeader(_)));
    }

    #[test]
    fn rejects_wrong_data_count() {
        let err = parse_trace("format=1\nW INCR4 0x0 0x1 0x2\n").unwrap_err();
        assert_eq!(err, TraceFormatError::DataCount { line: 2, expected: 4, found: 2 });
    }

    #[test]
    fn rejects_bad_hex() {
        let err = parse_trace("format=1\nR SINGLE 0xzz\n").unwrap_err();
        assert!(matches!(err, TraceFormatError::BadHex { line: 2, .. }));
    }

    #[test]
    fn wrap4_wraps_inside_window() {
        // window = 32 bytes; base 0x18 is the last beat slot, so the
        // burst wraps back to the window base.
        let addrs: Vec<u32> = (0..4).map(|i| beat_address(HBurst::Wrap4, 0x18, 4, i)).collect();
        assert_eq!(addrs, vec![0x18, 0x00, 0x08, 0x10]);
    }

    #[test]
    fn incr8_is_linear() {
        let addrs: Vec<u32> = (0..8).map(|i| beat_address(HBurst::Incr8, 0x40, 8, i)).collect();
        assert_eq!(addrs, (0..8).map(|i| 0x40 + 8 * i).collect::<Vec<u32>>());
    }

    #[test]
    fn replay_pairs_data_with_beats() {
        let entry = TraceEntry {
            is_read: false,
            hburst: HBurst::Incr4,
            addr: 0x20,
            data: vec![10, 11, 12, 13],
            beat_count: 4,
        };
        let beats = master_replay(&entry);
        assert_eq!(beats[2], (0x30, Some(12)));
    }
}
