//! The controller proper: initialization FSM, command FSM, refresh counter
//! and the signal-generation stage that drives the device pins.
//!
//! Commands appear on the pins one clock after the FSM state that issues
//! them, so the [`Controller`] registers its outputs for one cycle. All
//! state is explicit; independent controllers may run on different threads.

mod cmd_fsm;
mod init_fsm;
mod refresh;
mod signal;

pub use cmd_fsm::{CmdFsm, CmdState};
pub use init_fsm::{InitFsm, InitState};
pub use refresh::RefreshCounter;
pub use signal::signal_generate;

use crate::protocol::{
    encode_mode_register, Command, DdrAddress, Geometry, ModeRegister, TimingConfig, TimingParam,
};
use serde::{Deserialize, Serialize};

/// Wait-state lengths in cycles, derived from a [`TimingConfig`] once so the
/// FSMs never do nanosecond arithmetic. Fields are open so tests can perturb
/// individual waits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclePlan {
    pub power_up_cycles: u64,
    pub t_rp_waits: u32,
    pub t_rfc_waits: u32,
    pub t_mrd_waits: u32,
    pub t_rcd_waits: u32,
    pub t_dal_waits: u32,
    /// Clocks the command FSM spends in the CAS-latency state.
    pub cas_cycles: u32,
    /// Clocks per data burst on the system clock: BL/2.
    pub data_clocks: u32,
}

impl CyclePlan {
    pub fn new(timing: &TimingConfig, mr: &ModeRegister) -> Self {
        CyclePlan {
            power_up_cycles: crate::protocol::cycles_for(timing.power_up_delay_ns, timing.t_ck_ns),
            t_rp_waits: timing.wait_cycles(TimingParam::TRp),
            t_rfc_waits: timing.wait_cycles(TimingParam::TRfc),
            t_mrd_waits: timing.wait_cycles(TimingParam::TMrd),
            t_rcd_waits: timing.wait_cycles(TimingParam::TRcd),
            t_dal_waits: timing.wait_cycles(TimingParam::TDal),
            cas_cycles: mr.cas_latency.fsm_cycles(),
            data_clocks: mr.burst_length.len() / 2,
        }
    }

    pub fn wait_mut(&mut self, param: TimingParam) -> &mut u32 {
        match param {
            TimingParam::TRp => &mut self.t_rp_waits,
            TimingParam::TRfc => &mut self.t_rfc_waits,
            TimingParam::TMrd => &mut self.t_mrd_waits,
            TimingParam::TRcd => &mut self.t_rcd_waits,
            TimingParam::TDal => &mut self.t_dal_waits,
            TimingParam::RefreshInterval => panic!("refresh interval is not a wait state"),
        }
    }
}

/// System-side inputs sampled at each rising clock edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerInputs {
    pub reset: bool,
    /// High once the 200us power/clock stabilization delay has elapsed.
    pub sys_dly_200us_done: bool,
    /// Active-low address strobe: false while a request is presented.
    pub sys_adsn: bool,
    /// High for read, low for write.
    pub sys_r_wn: bool,
    /// Linear system-word address of the presented request.
    pub sys_addr: u64,
}

impl ControllerInputs {
    pub fn idle() -> Self {
        ControllerInputs {
            reset: false,
            sys_dly_200us_done: true,
            sys_adsn: true,
            sys_r_wn: true,
            sys_addr: 0,
        }
    }
}

/// What the data path should do this clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DataPhase {
    None,
    ReadCapture,
    WriteDrive,
}

/// Pin-level outputs for one clock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerOutputs {
    pub command: Command,
    /// Address pin payload: row, column (bit 10 = auto precharge) or
    /// mode-register word.
    pub ddr_addr: u32,
    pub ddr_bank: u8,
    pub sys_init_done: bool,
    pub sys_ref_ack: bool,
    pub data_phase: DataPhase,
}

impl ControllerOutputs {
    pub fn nop() -> Self {
        ControllerOutputs {
            command: Command::Nop,
            ddr_addr: 0,
            ddr_bank: 0,
            sys_init_done: false,
            sys_ref_ack: false,
            data_phase: DataPhase::None,
        }
    }
}

/// A request the controller has latched for service.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatchedRequest {
    pub addr: DdrAddress,
    pub is_read: bool,
}

/// A transaction that returned to idle this clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletedTransaction {
    pub is_read: bool,
    pub addr: DdrAddress,
    /// Clock on which sys_adsn was sampled low.
    pub sample_cycle: u64,
    /// First clock back in c_idle.
    pub idle_cycle: u64,
}

/// Per-clock edge events, reported on the FSM timeline (not pin timeline).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ControllerEvents {
    /// A request was sampled this clock.
    pub accepted: bool,
    pub completed: Option<CompletedTransaction>,
    pub refresh_started: bool,
    pub refresh_completed: bool,
}

/// Composite controller: both FSMs, the refresh counter, the one-deep latch
/// for requests arriving during refresh, and the output register that gives
/// commands their one-clock pin skew.
#[derive(Debug, Clone)]
pub struct Controller {
    pub init: InitFsm,
    pub cmd: CmdFsm,
    pub refresh: RefreshCounter,
    plan: CyclePlan,
    timing: TimingConfig,
    mr: ModeRegister,
    geom: Geometry,
    emrs_payload: u32,
    mrs_reset_payload: u32,
    latched: Option<LatchedRequest>,
    pending: Option<LatchedRequest>,
    out_reg: ControllerOutputs,
    sample_cycle: u64,
    cycle: u64,
}

impl Controller {
    pub fn new(
        timing: TimingConfig,
        mr: ModeRegister,
        geom: Geometry,
        emrs_payload: u32,
        mrs_reset_payload: u32,
    ) -> Self {
        let plan = CyclePlan::new(&timing, &mr);
        Self::with_plan(timing, mr, geom, emrs_payload, mrs_reset_payload, plan)
    }

    /// As [`Controller::new`] but with explicit wait-state lengths.
    pub fn with_plan(
        timing: TimingConfig,
        mr: ModeRegister,
        geom: Geometry,
        emrs_payload: u32,
        mrs_reset_payload: u32,
        plan: CyclePlan,
    ) -> Self {
        Controller {
            init: InitFsm::new(),
            cmd: CmdFsm::new(),
            refresh: RefreshCounter::new(),
            plan,
            timing,
            mr,
            geom,
            emrs_payload,
            mrs_reset_payload,
            latched: None,
            pending: None,
            out_reg: ControllerOutputs::nop(),
            sample_cycle: 0,
            cycle: 0,
        }
    }

    pub fn plan(&self) -> &CyclePlan {
        &self.plan
    }

    pub fn mode_register_word(&self) -> u32 {
        encode_mode_register(&self.mr).expect("mode register validated at construction") as u32
    }

    /// True while the command FSM can accept a new request next clock.
    pub fn is_idle(&self) -> bool {
        self.cmd.state == CmdState::Idle && self.init.done()
    }

    pub fn refresh_in_progress(&self) -> bool {
        self.cmd.state == CmdState::Refresh
    }

    /// Advances one rising clock edge. The returned outputs are the pin
    /// values for this clock, i.e. they reflect last clock's FSM states.
    pub fn clock(&mut self, inputs: &ControllerInputs) -> (ControllerOutputs, ControllerEvents) {
        if inputs.reset {
            self.init.reset();
            self.cmd.reset();
            self.refresh = RefreshCounter::new();
            self.latched = None;
            self.pending = None;
            self.out_reg = ControllerOutputs::nop();
            self.cycle += 1;
            return (ControllerOutputs::nop(), ControllerEvents::default());
        }

        let out = self.out_reg;
        let mut events = ControllerEvents::default();

        // Register next clock's pin values from this clock's states.
        self.out_reg = signal_generate(
            &self.init,
            &self.cmd,
            self.latched.as_ref(),
            self.mode_register_word(),
            self.emrs_payload,
            self.mrs_reset_payload,
        );

        // The command FSM samples sys_init_done as of this clock's state.
        let init_done = self.init.done();
        self.init.step(inputs.sys_dly_200us_done, &self.plan);

        let prev_state = self.cmd.state;
        if prev_state == CmdState::Idle && init_done {
            if self.refresh.request() {
                self.cmd.start_refresh(&self.plan);
                events.refresh_started = true;
                // Refresh wins a tie; remember the loser.
                if self.pending.is_none() {
                    if let Some(req) = self.request_from(inputs) {
                        self.pending = Some(req);
                    }
                }
            } else if let Some(req) = self.pending.take().or_else(|| self.request_from(inputs)) {
                self.latched = Some(req);
                self.sample_cycle = self.cycle;
                self.cmd.start_access(&self.plan);
                events.accepted = true;
            }
        } else {
            if prev_state == CmdState::Refresh && self.pending.is_none() {
                // One-deep latch for requests arriving mid-refresh.
                if let Some(req) = self.request_from(inputs) {
                    self.pending = Some(req);
                }
            }
            let is_read = self.latched.map(|r| r.is_read).unwrap_or(true);
            self.cmd.step(is_read, &self.plan);
            if self.cmd.state == CmdState::Idle {
                if prev_state == CmdState::Refresh {
                    events.refresh_completed = true;
                } else if let Some(req) = self.latched.take() {
                    events.completed = Some(CompletedTransaction {
                        is_read: req.is_read,
                        addr: req.addr,
                        sample_cycle: self.sample_cycle,
                        idle_cycle: self.cycle + 1,
                    });
                }
            }
        }

        self.refresh
            .step(self.cmd.state == CmdState::Refresh, &self.timing);

        self.cycle += 1;
        (out, events)
    }

    fn request_from(&self, inputs: &ControllerInputs) -> Option<LatchedRequest> {
        if inputs.sys_adsn {
            return None;
        }
        let mut addr = crate::protocol::split_address(inputs.sys_addr, &self.geom).ok()?;
        // This design always closes the row after the burst.
        addr.auto_precharge = true;
        Some(LatchedRequest { addr, is_read: inputs.sys_r_wn })
    }
}
