use std::collections::VecDeque;

use crate::ahb::{
    AhbMaster, AhbResponse, AhbSlave, ControllerStatus, SystemRequest, TraceEntry,
};
use crate::controller::{Controller, ControllerInputs, CyclePlan};
use crate::datapath::{pack_write, Beat, Edge};
use crate::memory::{BeatOverrun, DdrMemory, Violation};
use crate::protocol::{cycles_for, Command, Geometry};
use thiserror::Error;

use super::config::SimConfig;
use super::report::{SimReport, TransactionRecord};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("simulation exceeded max_cycles ({0})")]
    Timeout(u64),
    #[error("cycle {cycle}: word address {linear_addr:#x} outside device capacity")]
    AddressOutOfRange { cycle: u64, linear_addr: u64 },
    #[error(transparent)]
    Beat(#[from] BeatOverrun),
}

/// A non-NOP command observed on the device pins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PinRecord {
    pub cycle: u64,
    pub command: Command,
    pub addr: u32,
    pub bank: u8,
}

impl std::fmt::Display for PinRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "cycle={} cmd={} addr={:#x} bank={}",
            self.cycle,
            self.command.mnemonic(),
            self.addr,
            self.bank
        )
    }
}

/// The bus transfer currently in flight through the controller.
#[derive(Debug, Clone, Copy)]
struct Outstanding {
    req: SystemRequest,
    wdata: u64,
    accepted: bool,
    /// Read finished in the command machine; data beats still arriving.
    awaiting_data: bool,
}

/// Closed-loop simulation: trace-driven bus master, AHB slave front-end,
/// controller and behavioral device, advanced one clock at a time.
pub struct Simulation {
    cfg: SimConfig,
    geom: Geometry,
    controller: Controller,
    memory: DdrMemory,
    slave: AhbSlave,
    master: AhbMaster,
    power_up_cycles: u64,
    cycle: u64,
    outstanding: Option<Outstanding>,
    write_beats: VecDeque<Beat>,
    read_capture: Vec<Beat>,
    prev_response: AhbResponse,
    retry_grant: bool,
    violations: Vec<Violation>,
    transactions: Vec<TransactionRecord>,
    refresh_count: u64,
    ref_ack_conflicts: u64,
    bytes_transferred: u64,
    pin_log: Vec<PinRecord>,
    fsm_trace: Option<Vec<String>>,
}

impl Simulation {
    pub fn new(cfg: SimConfig, entries: Vec<TraceEntry>) -> Self {
        let plan = CyclePlan::new(&cfg.timing, &cfg.mode_register());
        Self::with_plan(cfg, entries, plan)
    }

    /// As [`Simulation::new`] but with explicit controller wait-state
    /// lengths, so individual waits can be perturbed while the device
    /// checks against the true timing.
    pub fn with_plan(cfg: SimConfig, entries: Vec<TraceEntry>, plan: CyclePlan) -> Self {
        let geom = cfg.geometry();
        let controller = Controller::with_plan(
            cfg.timing,
            cfg.mode_register(),
            geom,
            cfg.emrs_payload,
            cfg.mrs_reset_payload(),
            plan,
        );
        let memory = DdrMemory::new(geom, cfg.timing, cfg.grace_factor);
        Simulation {
            cfg,
            geom,
            controller,
            memory,
            slave: AhbSlave::new(),
            master: AhbMaster::new(entries),
            power_up_cycles: cycles_for(cfg.effective_power_up_ns(), cfg.timing.t_ck_ns),
            cycle: 0,
            outstanding: None,
            write_beats: VecDeque::new(),
            read_capture: Vec::new(),
            prev_response: AhbResponse::okay(),
            retry_grant: false,
            violations: Vec::new(),
            transactions: Vec::new(),
            refresh_count: 0,
            ref_ack_conflicts: 0,
            bytes_transferred: 0,
            pin_log: Vec::new(),
            fsm_trace: None,
        }
    }

    pub fn enable_fsm_trace(&mut self) {
        self.fsm_trace = Some(Vec::new());
    }

    pub fn fsm_trace(&self) -> Option<&[String]> {
        self.fsm_trace.as_deref()
    }

    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn transactions(&self) -> &[TransactionRecord] {
        &self.transactions
    }

    pub fn pin_log(&self) -> &[PinRecord] {
        &self.pin_log
    }

    pub fn master(&self) -> &AhbMaster {
        &self.master
    }

    pub fn memory(&self) -> &DdrMemory {
        &self.memory
    }

    pub fn refresh_count(&self) -> u64 {
        self.refresh_count
    }

    /// Runs the whole trace to completion.
    pub fn run(&mut self) -> Result<(), SimError> {
        while !(self.master.done() && self.outstanding.is_none()) {
            self.step()?;
        }
        Ok(())
    }

    /// Runs until the initialization sequence completes, plus enough
    /// clocks for the final command to reach the pins.
    pub fn run_until_init_done(&mut self) -> Result<(), SimError> {
        while !self.controller.init.done() {
            self.step()?;
        }
        for _ in 0..3 {
            self.step()?;
        }
        Ok(())
    }

    /// Advances one clock.
    pub fn step(&mut self) -> Result<(), SimError> {
        if self.cycle >= self.cfg.max_cycles {
            return Err(SimError::Timeout(self.cfg.max_cycles));
        }
        let cycle = self.cycle;

        // Bus side first: the master reacts to last clock's response, the
        // slave to the controller's state as of this clock.
        let status = ControllerStatus {
            initialized: self.controller.init.done(),
            busy: !self.controller.is_idle(),
            refreshing: self.controller.refresh_in_progress(),
            refresh_pending: self.controller.refresh.request(),
        };
        let transfer = self.master.drive(&self.prev_response, self.retry_grant);
        let sstep = self.slave.step(&transfer, status);
        self.retry_grant = sstep.retry_grant;
        self.prev_response = sstep.response;
        if let Some(req) = sstep.request {
            // One 64-bit word is four device columns; requests are issued
            // on the device-linear address grid.
            if req.linear_addr * 4 >= self.geom.capacity() {
                return Err(SimError::AddressOutOfRange { cycle, linear_addr: req.linear_addr });
            }
            self.outstanding = Some(Outstanding {
                req,
                wdata: transfer.hwdata,
                accepted: false,
                awaiting_data: false,
            });
        }

        let mut inputs = ControllerInputs::idle();
        inputs.sys_dly_200us_done = cycle >= self.power_up_cycles;
        if let Some(o) = &self.outstanding {
            if !o.accepted {
                inputs.sys_adsn = false;
                inputs.sys_r_wn = o.req.is_read;
                inputs.sys_addr = o.req.linear_addr * 4;
            }
        }

        let (out, events) = self.controller.clock(&inputs);
        if events.accepted {
            if let Some(o) = &mut self.outstanding {
                o.accepted = true;
            }
        }
        if events.refresh_completed {
            self.refresh_count += 1;
        }
        if out.sys_ref_ack
            && matches!(out.command, Command::Active | Command::Read | Command::Write)
        {
            self.ref_ack_conflicts += 1;
        }
        if let Some(trace) = &mut self.fsm_trace {
            trace.push(format!(
                "cycle={} init={:?} cmd={:?} pins={}",
                cycle, self.controller.init.state, self.controller.cmd.state, out.command.mnemonic()
            ));
        }

        // Device side: pins carry this clock's registered command.
        if !matches!(out.command, Command::Nop | Command::Deselect) {
            self.pin_log.push(PinRecord {
                cycle,
                command: out.command,
                addr: out.ddr_addr,
                bank: out.ddr_bank,
            });
        }
        let vs = self.memory.apply_command(out.command, out.ddr_addr, out.ddr_bank, cycle);
        self.violations.extend(vs);
        match out.command {
            Command::Write => {
                let word = self.outstanding.as_ref().map(|o| o.wdata).unwrap_or(0);
                // Write latency is one clock after the command pins.
                self.write_beats.extend(pack_write(word, cycle + 1).beats);
            }
            Command::Read => self.read_capture.clear(),
            _ => {}
        }

        for edge in [Edge::Rising, Edge::Falling] {
            let wdata = match self.write_beats.front() {
                Some(b) if b.clock == cycle && b.edge == edge => {
                    Some(self.write_beats.pop_front().unwrap().data)
                }
                _ => None,
            };
            if let Some(data) = self.memory.data_beat(cycle, edge, wdata)? {
                self.read_capture.push(Beat { clock: cycle, edge, data });
            }
        }
        self.violations.extend(self.memory.refresh_audit(cycle));

        if let Some(done) = events.completed {
            let record = TransactionRecord {
                is_read: done.is_read,
                linear_addr: self.outstanding.map(|o| o.req.linear_addr).unwrap_or(0),
                sample_cycle: done.sample_cycle,
                idle_cycle: done.idle_cycle,
                // Inclusive state span plus the one-clock command pin skew.
                latency_clocks: done.idle_cycle - done.sample_cycle + 2,
                data: None,
            };
            self.transactions.push(record);
            if done.is_read {
                if let Some(o) = &mut self.outstanding {
                    o.awaiting_data = true;
                }
            } else if let Some(o) = self.outstanding.take() {
                self.slave.complete(o.req.request_id, 0);
                self.bytes_transferred += 8;
            }
        }

        if let Some(o) = self.outstanding {
            if o.awaiting_data && self.read_capture.len() == 4 {
                let word = self
                    .read_capture
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, b)| acc | (b.data as u64) << (16 * i));
                self.read_capture.clear();
                if let Some(rec) = self.transactions.last_mut() {
                    rec.data = Some(word);
                }
                self.slave.complete(o.req.request_id, word);
                self.bytes_transferred += 8;
                self.outstanding = None;
            }
        }

        self.cycle += 1;
        Ok(())
    }

    pub fn report(&self) -> SimReport {
        let seconds = self.cycle as f64 * self.cfg.timing.t_ck_ns * 1e-9;
        let reads = self.transactions.iter().filter(|t| t.is_read).count() as u64;
        SimReport {
            format: 1,
            cycles: self.cycle,
            tck_ns: self.cfg.timing.t_ck_ns,
            reads,
            writes: self.transactions.len() as u64 - reads,
            refresh_count: self.refresh_count,
            splits: self.slave.splits,
            retries: self.master.stats.retries,
            bus_errors: self.slave.errors,
            ref_ack_conflicts: self.ref_ack_conflicts,
            bytes_transferred: self.bytes_transferred,
            bandwidth_mbytes_per_s: if seconds > 0.0 {
                self.bytes_transferred as f64 / seconds / 1e6
            } else {
                0.0
            },
            violations: self.violations.iter().map(|v| v.to_string()).collect(),
            transactions: self.transactions.clone(),
        }
    }
}
