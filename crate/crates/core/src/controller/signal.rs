use super::{
    CmdFsm, CmdState, ControllerOutputs, DataPhase, InitFsm, InitState, LatchedRequest,
};
use crate::protocol::Command;

/// Precharge-all / auto-precharge flag, address bit A10.
pub const A10: u32 = 1 << 10;

/// Extended mode register bank select (BA0 = 1).
const EMRS_BANK: u8 = 0b01;

/// Pure signal generation: maps the two FSM states and the latched request
/// onto command, address and bank pins. The caller registers the result for
/// one clock, which gives commands their pin skew relative to the states.
pub fn signal_generate(
    init: &InitFsm,
    cmd: &CmdFsm,
    latched: Option<&LatchedRequest>,
    mode_register_word: u32,
    emrs_payload: u32,
    mrs_reset_payload: u32,
) -> ControllerOutputs {
    let mut out = ControllerOutputs::nop();
    out.sys_init_done = init.done();
    out.sys_ref_ack = cmd.state == CmdState::Refresh;

    if !init.done() {
        match init.state {
            InitState::PrechargeAll1 | InitState::PrechargeAll2 => {
                out.command = Command::Precharge;
                out.ddr_addr = A10;
            }
            InitState::LoadEmrs => {
                out.command = Command::LoadModeRegister;
                out.ddr_addr = emrs_payload;
                out.ddr_bank = EMRS_BANK;
            }
            InitState::LoadMrsDllReset => {
                out.command = Command::LoadModeRegister;
                out.ddr_addr = mrs_reset_payload;
            }
            InitState::LoadMrsOperating => {
                out.command = Command::LoadModeRegister;
                out.ddr_addr = mode_register_word;
            }
            InitState::AutoRefresh1 | InitState::AutoRefresh2 => {
                out.command = Command::AutoRefresh;
            }
            _ => {}
        }
        return out;
    }

    match cmd.state {
        CmdState::Active => {
            if let Some(req) = latched {
                out.command = Command::Active;
                out.ddr_addr = req.addr.row;
                out.ddr_bank = req.addr.bank;
            }
        }
        CmdState::ReadCmd | CmdState::WriteCmd => {
            if let Some(req) = latched {
                out.command =
                    if cmd.state == CmdState::ReadCmd { Command::Read } else { Command::Write };
                out.ddr_addr = req.addr.column | if req.addr.auto_precharge { A10 } else { 0 };
                out.ddr_bank = req.addr.bank;
            }
        }
        CmdState::ReadData => out.data_phase = DataPhase::ReadCapture,
        CmdState::WriteData => out.data_phase = DataPhase::WriteDrive,
        CmdState::Refresh if cmd.just_entered() => {
            out.command = Command::AutoRefresh;
        }
        _ => {}
    }
    out
}
