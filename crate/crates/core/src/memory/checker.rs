//! Recognizer for the power-up initialization sequence.
//!
//! Accepts the order the initialization FSM produces: NOP, PRECHARGE ALL,
//! LMR (extended), LMR (DLL reset), PRECHARGE ALL, AUTO REFRESH x2, LMR
//! (operating mode), with tRP/tMRD/tRFC gaps enforced where the FSM waits.
//! There is no gap requirement between the two back-to-back register loads.

use super::{DdrMemory, Violation, ViolationKind, A10};
use crate::protocol::{Command, TimingParam};

const EMRS_BANK: u8 = 0b01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    PrechargeAll1,
    LoadEmrs,
    LoadMrsDllReset,
    PrechargeAll2,
    AutoRefresh1,
    AutoRefresh2,
    LoadMrsOperating,
    Done,
}

impl Stage {
    fn describe(self) -> &'static str {
        match self {
            Stage::PrechargeAll1 | Stage::PrechargeAll2 => "PRECHARGE ALL",
            Stage::LoadEmrs => "LOAD MODE REGISTER (extended)",
            Stage::LoadMrsDllReset => "LOAD MODE REGISTER (DLL reset)",
            Stage::AutoRefresh1 | Stage::AutoRefresh2 => "AUTO REFRESH",
            Stage::LoadMrsOperating => "LOAD MODE REGISTER (operating mode)",
            Stage::Done => "no further command",
        }
    }

    /// Minimum gap from the previous accepted command, if any.
    fn gap_param(self) -> Option<TimingParam> {
        match self {
            Stage::PrechargeAll1 => None,
            Stage::LoadEmrs => Some(TimingParam::TRp),
            Stage::LoadMrsDllReset => None,
            Stage::PrechargeAll2 => Some(TimingParam::TMrd),
            Stage::AutoRefresh1 => Some(TimingParam::TRp),
            Stage::AutoRefresh2 => Some(TimingParam::TRfc),
            Stage::LoadMrsOperating => Some(TimingParam::TRfc),
            Stage::Done => None,
        }
    }
}

#[derive(Debug, Clone)]
pub(super) struct InitRecognizer {
    stage: Stage,
    nop_seen: bool,
    last_cmd_cycle: Option<u64>,
}

impl InitRecognizer {
    pub(super) fn new() -> Self {
        InitRecognizer { stage: Stage::PrechargeAll1, nop_seen: false, last_cmd_cycle: None }
    }

    pub(super) fn note_nop(&mut self) {
        self.nop_seen = true;
    }

    pub(super) fn observe(
        &mut self,
        dev: &mut DdrMemory,
        cmd: Command,
        addr: u32,
        bank: u8,
        cycle: u64,
    ) -> Vec<Violation> {
        let mut violations = Vec::new();

        if matches!(cmd, Command::Read | Command::Write | Command::Active) {
            violations.push(Violation::new(
                cycle,
                ViolationKind::NotInitialized,
                format!("{} before initialization completed", cmd.mnemonic()),
            ));
            return violations;
        }

        if !self.matches(cmd, addr, bank) {
            violations.push(Violation::new(
                cycle,
                ViolationKind::InitOrderViolation,
                format!("expected {}, observed {}", self.stage.describe(), cmd.mnemonic()),
            ));
            return violations;
        }

        if self.stage == Stage::PrechargeAll1 && !self.nop_seen {
            violations.push(Violation::new(
                cycle,
                ViolationKind::InitOrderViolation,
                "PRECHARGE ALL with no preceding NOP".to_string(),
            ));
        }

        if let (Some(param), Some(prev)) = (self.stage.gap_param(), self.last_cmd_cycle) {
            let gap = cycle - prev;
            if gap < dev.min_gap(param) {
                violations.push(Violation::timing(
                    cycle,
                    param,
                    format!("{} {} cycles after previous command", cmd.mnemonic(), gap),
                ));
            }
        }

        match self.stage {
            Stage::LoadMrsDllReset | Stage::LoadMrsOperating => {
                dev.store_mode_register(addr, cycle, &mut violations);
            }
            Stage::AutoRefresh1 | Stage::AutoRefresh2 => dev.note_refresh(cycle),
            _ => {}
        }

        self.last_cmd_cycle = Some(cycle);
        self.stage = match self.stage {
            Stage::PrechargeAll1 => Stage::LoadEmrs,
            Stage::LoadEmrs => Stage::LoadMrsDllReset,
            Stage::LoadMrsDllReset => Stage::PrechargeAll2,
            Stage::PrechargeAll2 => Stage::AutoRefresh1,
            Stage::AutoRefresh1 => Stage::AutoRefresh2,
            Stage::AutoRefresh2 => Stage::LoadMrsOperating,
            Stage::LoadMrsOperating => {
                dev.last_lmr_cycle = Some(cycle);
                dev.set_initialized();
                Stage::Done
            }
            Stage::Done => Stage::Done,
        };
        violations
    }

    fn matches(&self, cmd: Command, addr: u32, bank: u8) -> bool {
        match self.stage {
            Stage::PrechargeAll1 | Stage::PrechargeAll2 => {
                cmd == Command::Precharge && addr & A10 != 0
            }
            Stage::LoadEmrs => cmd == Command::LoadModeRegister && bank & 0b11 == EMRS_BANK,
            Stage::LoadMrsDllReset | Stage::LoadMrsOperating => {
                cmd == Command::LoadModeRegister && bank & 0b11 == 0
            }
            Stage::AutoRefresh1 | Stage::AutoRefresh2 => cmd == Command::AutoRefresh,
            Stage::Done => false,
        }
    }
}
