use super::CyclePlan;
use serde::{Deserialize, Serialize};

/// States of the command FSM.
///
/// `Refresh` covers both the AUTO REFRESH issue clock and the tRFC wait,
/// counted internally. `ReadCmd`/`WriteCmd` always carry the auto-precharge
/// bit, so every access leaves the banks idle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CmdState {
    Idle,
    Active,
    WaitTrcd,
    ReadCmd,
    CasLatency,
    ReadData,
    WriteCmd,
    WriteData,
    WaitTdal,
    Refresh,
}

/// Command FSM. Forced to `Idle` by reset and held there while
/// initialization is incomplete; started from the outside via
/// [`CmdFsm::start_access`] / [`CmdFsm::start_refresh`] (the controller
/// wrapper arbitrates refresh priority).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmdFsm {
    pub state: CmdState,
    wait_left: u32,
    beats_left: u32,
    /// Clocks spent in the current state; 0 on the entry clock.
    age: u32,
}

impl CmdFsm {
    pub fn new() -> Self {
        CmdFsm { state: CmdState::Idle, wait_left: 0, beats_left: 0, age: 0 }
    }

    pub fn reset(&mut self) {
        *self = CmdFsm::new();
    }

    /// True on the first clock of the current state.
    pub fn just_entered(&self) -> bool {
        self.age == 0
    }

    /// Begins a read/write cycle: effective state next clock is `Active`.
    pub fn start_access(&mut self, _plan: &CyclePlan) {
        debug_assert_eq!(self.state, CmdState::Idle);
        self.enter(CmdState::Active);
    }

    /// Begins a refresh cycle: effective state next clock is `Refresh`,
    /// which lasts one clock plus the tRFC wait.
    pub fn start_refresh(&mut self, plan: &CyclePlan) {
        debug_assert_eq!(self.state, CmdState::Idle);
        self.wait_left = plan.t_rfc_waits;
        self.enter(CmdState::Refresh);
    }

    /// Advances one transition. `is_read` is the sys_r_wn level, consulted
    /// on the clock the tRCD delay expires.
    pub fn step(&mut self, is_read: bool, plan: &CyclePlan) {
        use CmdState::*;
        match self.state {
            Idle => self.age += 1,
            Active => {
                if plan.t_rcd_waits > 0 {
                    self.wait_left = plan.t_rcd_waits;
                    self.enter(WaitTrcd);
                } else {
                    self.branch_read_write(is_read, plan);
                }
            }
            WaitTrcd => {
                self.wait_left -= 1;
                if self.wait_left == 0 {
                    self.branch_read_write(is_read, plan);
                } else {
                    self.age += 1;
                }
            }
            ReadCmd => {
                // CL >= 2, so the CAS wait is never skipped.
                self.wait_left = plan.cas_cycles;
                self.enter(CasLatency);
            }
            CasLatency => {
                self.wait_left -= 1;
                if self.wait_left == 0 {
                    self.beats_left = plan.data_clocks;
                    self.enter(ReadData);
                } else {
                    self.age += 1;
                }
            }
            ReadData => {
                self.beats_left -= 1;
                if self.beats_left == 0 {
                    self.enter(Idle);
                } else {
                    self.age += 1;
                }
            }
            WriteCmd => {
                // Write latency is one clock: data follows the command state.
                self.beats_left = plan.data_clocks;
                self.enter(WriteData);
            }
            WriteData => {
                self.beats_left -= 1;
                if self.beats_left == 0 {
                    if plan.t_dal_waits > 0 {
                        self.wait_left = plan.t_dal_waits;
                        self.enter(WaitTdal);
                    } else {
                        self.enter(Idle);
                    }
                } else {
                    self.age += 1;
                }
            }
            WaitTdal => {
                self.wait_left -= 1;
                if self.wait_left == 0 {
                    self.enter(Idle);
                } else {
                    self.age += 1;
                }
            }
            Refresh => {
                if self.wait_left == 0 {
                    self.enter(Idle);
                } else {
                    self.wait_left -= 1;
                    self.age += 1;
                }
            }
        }
    }

    fn branch_read_write(&mut self, is_read: bool, _plan: &CyclePlan) {
        self.enter(if is_read { CmdState::ReadCmd } else { CmdState::WriteCmd });
    }

    fn enter(&mut self, state: CmdState) {
        self.state = state;
        self.age = 0;
    }
}

impl Default for CmdFsm {
    fn default() -> Self {
        Self::new()
    }
}
