//! Behavioral quad-bank DDR SDRAM device.
//!
//! Stores data, executes the seven commands, and doubles as a strict
//! protocol/timing checker: every constraint violation is collected with its
//! cycle number, and the model keeps running. Undefined reads return the
//! poison pattern so long fuzz runs complete.

mod checker;
mod violation;

pub use violation::{Violation, ViolationKind};

use crate::datapath::Edge;
use crate::protocol::{
    decode_mode_register, BurstType, Command, Geometry, ModeRegister, TimingConfig, TimingParam,
};
use checker::InitRecognizer;
use std::collections::HashMap;
use thiserror::Error;

/// Data pattern returned by undefined reads (never-written cells, rows that
/// lost retention).
pub const POISON: u16 = 0xDEAD;

/// Precharge-all / auto-precharge flag on the address pins.
const A10: u32 = 1 << 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BankStatus {
    Idle,
    Active { row: u32 },
}

/// Per-bank device state. At most one row may be open per bank.
#[derive(Debug, Clone, Copy)]
struct BankState {
    status: BankStatus,
    last_active_cycle: u64,
    /// Earliest cycle the bank may accept ACTIVE again (precharge or write
    /// recovery in progress before that), and the parameter that set it.
    ready_at: u64,
    ready_param: TimingParam,
}

impl BankState {
    fn new() -> Self {
        BankState {
            status: BankStatus::Idle,
            last_active_cycle: 0,
            ready_at: 0,
            ready_param: TimingParam::TRp,
        }
    }
}

/// A read or write burst in flight on the data pins.
#[derive(Debug, Clone)]
struct Burst {
    bank: u8,
    row: u32,
    col_base: u32,
    is_write: bool,
    burst_len: u32,
    burst_type: BurstType,
    auto_precharge: bool,
    /// Half-cycle index of the first beat (2 * cycle + falling).
    start_half: u64,
    beats_done: u32,
}

/// The harness drove or requested a data beat outside any burst window.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("beat overrun at cycle {cycle}: {detail}")]
pub struct BeatOverrun {
    pub cycle: u64,
    pub detail: String,
}

/// Behavioral DDR SDRAM device and protocol checker.
#[derive(Debug, Clone)]
pub struct DdrMemory {
    geom: Geometry,
    timing: TimingConfig,
    /// Missed refresh intervals tolerated before rows go stale.
    grace_factor: u32,
    banks: [BankState; Geometry::BANK_COUNT as usize],
    cells: HashMap<(u8, u32, u32), u16>,
    mode_register: Option<ModeRegister>,
    initialized: bool,
    init: InitRecognizer,
    last_lmr_cycle: Option<u64>,
    last_refresh_cycle: Option<u64>,
    /// No executable command allowed before this cycle (tRFC after refresh).
    refresh_lockout_until: u64,
    bursts: std::collections::VecDeque<Burst>,
    retention_lost: bool,
    overdue_reported: bool,
    refresh_count: u64,
    bytes_written: u64,
}

impl DdrMemory {
    pub fn new(geom: Geometry, timing: TimingConfig, grace_factor: u32) -> Self {
        DdrMemory {
            geom,
            timing,
            grace_factor,
            banks: [BankState::new(); 4],
            cells: HashMap::new(),
            mode_register: None,
            initialized: false,
            init: InitRecognizer::new(),
            last_lmr_cycle: None,
            last_refresh_cycle: None,
            refresh_lockout_until: 0,
            bursts: std::collections::VecDeque::new(),
            retention_lost: false,
            overdue_reported: false,
            refresh_count: 0,
            bytes_written: 0,
        }
    }

    pub fn initialized(&self) -> bool {
        self.initialized
    }

    pub fn mode_register(&self) -> Option<&ModeRegister> {
        self.mode_register.as_ref()
    }

    pub fn refresh_count(&self) -> u64 {
        self.refresh_count
    }

    pub fn bytes_written(&self) -> u64 {
        self.bytes_written
    }

    pub fn cell(&self, bank: u8, row: u32, col: u32) -> Option<u16> {
        self.cells.get(&(bank, row, col)).copied()
    }

    pub fn cells_stored(&self) -> usize {
        self.cells.len()
    }

    fn min_gap(&self, param: TimingParam) -> u64 {
        self.timing.min_gap_cycles(param)
    }

    /// Latches one command. Violations are collected, never thrown; the
    /// model keeps running on its best-effort interpretation.
    pub fn apply_command(
        &mut self,
        cmd: Command,
        addr: u32,
        bank: u8,
        cycle: u64,
    ) -> Vec<Violation> {
        if matches!(cmd, Command::Nop | Command::Deselect) {
            self.init.note_nop();
            return Vec::new();
        }
        if !self.initialized {
            return self.check_init_sequence(cmd, addr, bank, cycle);
        }

        let mut violations = Vec::new();
        if let Some(lmr) = self.last_lmr_cycle {
            if cycle - lmr < self.min_gap(TimingParam::TMrd) {
                violations.push(Violation::timing(
                    cycle,
                    TimingParam::TMrd,
                    format!("{} issued {} cycles after LOAD MODE REGISTER", cmd.mnemonic(), cycle - lmr),
                ));
            }
        }
        if cycle < self.refresh_lockout_until {
            violations.push(Violation::timing(
                cycle,
                TimingParam::TRfc,
                format!("{} issued during refresh period", cmd.mnemonic()),
            ));
        }

        match cmd {
            Command::Active => self.do_active(addr, bank, cycle, &mut violations),
            Command::Read | Command::Write => {
                self.do_read_write(cmd == Command::Write, addr, bank, cycle, &mut violations)
            }
            Command::Precharge => self.do_precharge(addr, bank, cycle),
            Command::AutoRefresh => self.do_auto_refresh(cycle, &mut violations),
            Command::LoadModeRegister => self.do_lmr(addr, bank, cycle, &mut violations),
            Command::Nop | Command::Deselect => unreachable!(),
        }
        violations
    }

    fn do_active(&mut self, addr: u32, bank: u8, cycle: u64, violations: &mut Vec<Violation>) {
        let row = addr & (self.geom.rows() - 1);
        let b = &mut self.banks[(bank & 0b11) as usize];
        if let BankStatus::Active { row: open } = b.status {
            violations.push(Violation::new(
                cycle,
                ViolationKind::BankAlreadyActive,
                format!("bank {bank} already has row {open} open"),
            ));
        }
        if cycle < b.ready_at {
            violations.push(Violation::timing(
                cycle,
                b.ready_param,
                format!("ACTIVE to bank {bank} {} cycles early", b.ready_at - cycle),
            ));
        }
        b.status = BankStatus::Active { row };
        b.last_active_cycle = cycle;
    }

    fn do_read_write(
        &mut self,
        is_write: bool,
        addr: u32,
        bank: u8,
        cycle: u64,
        violations: &mut Vec<Violation>,
    ) {
        let name = if is_write { "WRITE" } else { "READ" };
        let bank_idx = (bank & 0b11) as usize;
        let row = match self.banks[bank_idx].status {
            BankStatus::Active { row } => row,
            BankStatus::Idle => {
                violations.push(Violation::new(
                    cycle,
                    ViolationKind::BankNotActive,
                    format!("{name} to idle bank {bank}"),
                ));
                0
            }
        };
        let gap = cycle.saturating_sub(self.banks[bank_idx].last_active_cycle);
        if matches!(self.banks[bank_idx].status, BankStatus::Active { .. })
            && gap < self.min_gap(TimingParam::TRcd)
        {
            violations.push(Violation::timing(
                cycle,
                TimingParam::TRcd,
                format!("{name} {gap} cycles after ACTIVE to bank {bank}"),
            ));
        }
        let Some(mr) = self.mode_register else {
            violations.push(Violation::new(
                cycle,
                ViolationKind::NotInitialized,
                format!("{name} with mode register unset"),
            ));
            return;
        };
        let col = addr & (self.geom.cols() - 1) & !A10;
        let start_half = if is_write {
            // Write latency is one clock.
            2 * (cycle + 1)
        } else {
            2 * cycle + mr.cas_latency.half_cycles() as u64
        };
        self.bursts.push_back(Burst {
            bank: bank & 0b11,
            row,
            col_base: col,
            is_write,
            burst_len: mr.burst_length.len(),
            burst_type: mr.burst_type,
            auto_precharge: addr & A10 != 0,
            start_half,
            beats_done: 0,
        });
    }

    fn do_precharge(&mut self, addr: u32, bank: u8, cycle: u64) {
        let ready = cycle + self.min_gap(TimingParam::TRp);
        let all = addr & A10 != 0;
        for (i, b) in self.banks.iter_mut().enumerate() {
            if all || i == (bank & 0b11) as usize {
                b.status = BankStatus::Idle;
                b.ready_at = ready;
                b.ready_param = TimingParam::TRp;
            }
        }
    }

    fn do_auto_refresh(&mut self, cycle: u64, violations: &mut Vec<Violation>) {
        for (i, b) in self.banks.iter().enumerate() {
            if let BankStatus::Active { row } = b.status {
                violations.push(Violation::new(
                    cycle,
                    ViolationKind::BanksNotIdle,
                    format!("AUTO REFRESH with bank {i} row {row} open"),
                ));
            } else if cycle < b.ready_at {
                violations.push(Violation::timing(
                    cycle,
                    b.ready_param,
                    format!("AUTO REFRESH {} cycles before bank {i} is idle", b.ready_at - cycle),
                ));
            }
        }
        self.note_refresh(cycle);
    }

    fn note_refresh(&mut self, cycle: u64) {
        self.last_refresh_cycle = Some(cycle);
        self.refresh_lockout_until = cycle + self.min_gap(TimingParam::TRfc);
        self.refresh_count += 1;
        self.overdue_reported = false;
    }

    fn do_lmr(&mut self, addr: u32, bank: u8, cycle: u64, violations: &mut Vec<Violation>) {
        for (i, b) in self.banks.iter().enumerate() {
            if matches!(b.status, BankStatus::Active { .. }) {
                violations.push(Violation::new(
                    cycle,
                    ViolationKind::BanksNotIdle,
                    format!("LOAD MODE REGISTER with bank {i} open"),
                ));
            }
        }
        self.last_lmr_cycle = Some(cycle);
        if bank & 0b11 == 0 {
            self.store_mode_register(addr, cycle, violations);
        }
        // Extended registers (BA0 = 1) are carried opaquely.
    }

    fn store_mode_register(&mut self, addr: u32, cycle: u64, violations: &mut Vec<Violation>) {
        match decode_mode_register(addr as u16) {
            Ok(mut mr) => {
                // A8 (DLL reset) is self-clearing: model it as cleared as
                // soon as the load completes.
                mr.operating_mode &= !0b10;
                self.mode_register = Some(mr);
            }
            Err(err) => violations.push(Violation::new(
                cycle,
                ViolationKind::UnknownCommand,
                format!("mode register payload {addr:#x}: {err}"),
            )),
        }
    }

    /// Runs the initialization recognizer over one command. On completion of
    /// the required order with all gaps satisfied, the device becomes
    /// initialized.
    pub fn check_init_sequence(
        &mut self,
        cmd: Command,
        addr: u32,
        bank: u8,
        cycle: u64,
    ) -> Vec<Violation> {
        let mut recognizer = std::mem::replace(&mut self.init, InitRecognizer::new());
        let violations = recognizer.observe(self, cmd, addr, bank, cycle);
        self.init = recognizer;
        violations
    }

    /// One half-cycle data transfer. Supply `write_data` during write burst
    /// windows; read bursts return their data beats.
    pub fn data_beat(
        &mut self,
        cycle: u64,
        edge: Edge,
        write_data: Option<u16>,
    ) -> Result<Option<u16>, BeatOverrun> {
        let half = 2 * cycle + u64::from(edge == Edge::Falling);
        let Some(burst) = self.bursts.front_mut() else {
            if write_data.is_some() {
                return Err(BeatOverrun { cycle, detail: "write data with no burst in flight".into() });
            }
            return Ok(None);
        };
        let expected = burst.start_half + burst.beats_done as u64;
        if half < expected {
            if write_data.is_some() {
                return Err(BeatOverrun { cycle, detail: "write data before burst window".into() });
            }
            return Ok(None);
        }
        if half > expected {
            let detail = format!("half-cycle {half} past scheduled beat {expected}");
            self.bursts.pop_front();
            return Err(BeatOverrun { cycle, detail });
        }

        let col = burst_column(burst.col_base, burst.beats_done, burst.burst_len, burst.burst_type);
        let key = (burst.bank, burst.row, col);
        let is_write = burst.is_write;
        let result = if is_write {
            let Some(data) = write_data else {
                return Err(BeatOverrun { cycle, detail: "missing write data in burst window".into() });
            };
            self.cells.insert(key, data);
            self.bytes_written += 2;
            None
        } else {
            if write_data.is_some() {
                return Err(BeatOverrun { cycle, detail: "write data during read burst".into() });
            }
            let data = if self.retention_lost {
                POISON
            } else {
                self.cells.get(&key).copied().unwrap_or(POISON)
            };
            Some(data)
        };

        burst.beats_done += 1;
        if burst.beats_done == burst.burst_len {
            let (bank, auto_precharge) = (burst.bank, burst.auto_precharge);
            self.bursts.pop_front();
            if auto_precharge {
                let param = if is_write { TimingParam::TDal } else { TimingParam::TRp };
                let gap = self.min_gap(param);
                let b = &mut self.banks[bank as usize];
                b.status = BankStatus::Idle;
                b.ready_at = cycle + gap;
                b.ready_param = param;
            }
        }
        Ok(result)
    }

    /// Periodic retention audit. Once the gap since the last refresh exceeds
    /// grace_factor missed intervals, the stored rows are considered stale
    /// and reads return poison from then on.
    pub fn refresh_audit(&mut self, cycle: u64) -> Vec<Violation> {
        let Some(last) = self.last_refresh_cycle else {
            return Vec::new();
        };
        let budget =
            self.timing.min_gap_cycles(TimingParam::RefreshInterval) * self.grace_factor as u64;
        if cycle - last > budget {
            self.retention_lost = true;
            if !self.overdue_reported {
                self.overdue_reported = true;
                return vec![Violation::new(
                    cycle,
                    ViolationKind::RefreshOverdue,
                    format!("no refresh for {} cycles (budget {budget})", cycle - last),
                )];
            }
        }
        Vec::new()
    }

    fn set_initialized(&mut self) {
        self.initialized = true;
    }
}

/// Column address of beat `index` within a burst window.
fn burst_column(base: u32, index: u32, burst_len: u32, burst_type: BurstType) -> u32 {
    let mask = burst_len - 1;
    let window = base & !mask;
    match burst_type {
        BurstType::Sequential => window | ((base + index) & mask),
        BurstType::Interleaved => window | ((base ^ index) & mask),
    }
}
