use super::trace::{beat_address, TraceEntry};
use super::{AhbResponse, AhbTransfer, HResp, HTrans};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MasterStats {
    pub beats_completed: u64,
    pub splits_seen: u64,
    pub retries: u64,
    pub errors_seen: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MasterState {
    /// Driving the current beat, waiting for it to complete.
    Drive,
    /// Retired after a SPLIT; waiting for the slave's retry grant.
    Parked,
    /// Burst aborted on ERROR; idling until hready before moving on.
    AbortWait,
    Done,
}

/// Replays trace bursts beat by beat, honouring SPLIT retirement and
/// ERROR aborts.
#[derive(Debug)]
pub struct AhbMaster {
    entries: Vec<TraceEntry>,
    entry_idx: usize,
    beat_idx: u32,
    state: MasterState,
    started: bool,
    pub stats: MasterStats,
    /// Data observed on completed read beats, as (linear word address,
    /// value) pairs in bus order.
    pub reads: Vec<(u64, u64)>,
}

impl AhbMaster {
    pub fn new(entries: Vec<TraceEntry>) -> Self {
        let state = if entries.is_empty() { MasterState::Done } else { MasterState::Drive };
        AhbMaster {
            entries,
            entry_idx: 0,
            beat_idx: 0,
            state,
            started: false,
            stats: MasterStats::default(),
            reads: Vec::new(),
        }
    }

    pub fn done(&self) -> bool {
        self.state == MasterState::Done
    }

    fn current_beat(&self) -> (u32, Option<u64>, bool) {
        let entry = &self.entries[self.entry_idx];
        let addr = beat_address(entry.hburst, entry.addr, entry.beat_count, self.beat_idx);
        let data = if entry.is_read {
            None
        } else {
            Some(entry.data[self.beat_idx as usize])
        };
        (addr, data, entry.is_read)
    }

    fn advance_beat(&mut self) {
        self.beat_idx += 1;
        if self.beat_idx >= self.entries[self.entry_idx].beat_count {
            self.advance_entry();
        }
    }

    fn advance_entry(&mut self) {
        self.entry_idx += 1;
        self.beat_idx = 0;
        if self.entry_idx >= self.entries.len() {
            self.state = MasterState::Done;
        }
    }

    /// Produces the transfer for this bus clock given last clock's
    /// response and retry grant.
    pub fn drive(&mut self, prev: &AhbResponse, retry_grant: bool) -> AhbTransfer {
        match self.state {
            MasterState::Drive => {
                if self.started {
                    match (prev.hready, prev.hresp) {
                        (true, HResp::Okay) => {
                            let (addr, _, is_read) = self.current_beat();
                            if is_read {
                                self.reads.push(((addr >> 3) as u64, prev.hrdata));
                            }
                            self.stats.beats_completed += 1;
                            self.advance_beat();
                        }
                        (_, HResp::Split) => {
                            self.stats.splits_seen += 1;
                            self.state = MasterState::Parked;
                            return AhbTransfer::idle();
                        }
                        (_, HResp::Error) => {
                            self.stats.errors_seen += 1;
                            self.advance_entry();
                            if self.state != MasterState::Done {
                                self.state = MasterState::AbortWait;
                            }
                            return AhbTransfer::idle();
                        }
                        (false, HResp::Okay) => {} // wait state, hold the transfer
                    }
                }
                if self.state == MasterState::Done {
                    return AhbTransfer::idle();
                }
                self.started = true;
                let (addr, data, is_read) = self.current_beat();
                AhbTransfer {
                    htrans: if self.beat_idx == 0 { HTrans::NonSeq } else { HTrans::Seq },
                    haddr: addr,
                    hwrite: !is_read,
                    hsize: 3,
                    hburst: self.entries[self.entry_idx].hburst,
                    hwdata: data.unwrap_or(0),
                }
            }
            MasterState::Parked => {
                if retry_grant {
                    self.stats.retries += 1;
                    self.state = MasterState::Drive;
                    self.started = false;
                }
                AhbTransfer::idle()
            }
            MasterState::AbortWait => {
                if prev.hready {
                    self.state = MasterState::Drive;
                    self.started = false;
                }
                AhbTransfer::idle()
            }
            MasterState::Done => AhbTransfer::idle(),
        }
    }
}
