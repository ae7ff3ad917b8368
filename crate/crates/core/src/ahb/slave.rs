use super::{AhbResponse, AhbTransfer, HResp, HTrans, SystemRequest};

/// Controller-side status the slave samples each bus clock.
#[derive(Debug, Clone, Copy, Default)]
pub struct ControllerStatus {
    pub initialized: bool,
    pub busy: bool,
    pub refreshing: bool,
    pub refresh_pending: bool,
}

impl ControllerStatus {
    fn refresh_collision(&self) -> bool {
        self.refreshing || self.refresh_pending
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlaveState {
    Idle,
    /// Request handed to the controller; hready held low until it
    /// completes.
    Wait { request_id: u64 },
    /// Completion observed; drive hready with read data this clock.
    Respond { hrdata: u64 },
    /// First SPLIT clock: hready low.
    SplitFirst,
    /// Second SPLIT clock: hready high, master must retire.
    SplitSecond,
    /// Split transfer parked until the controller drains its refresh.
    SplitParked,
    /// First ERROR clock: hready low.
    ErrorFirst,
    /// Second ERROR clock: hready high.
    ErrorSecond,
}

/// Per-clock slave output back to the simulation engine.
#[derive(Debug, Clone, Copy)]
pub struct SlaveStep {
    pub response: AhbResponse,
    /// Request to present to the controller this clock, if any.
    pub request: Option<SystemRequest>,
    /// Tells the master a previously split transfer may be retried.
    pub retry_grant: bool,
}

#[derive(Debug)]
pub struct AhbSlave {
    state: SlaveState,
    next_id: u64,
    pub splits: u64,
    pub errors: u64,
}

impl Default for AhbSlave {
    fn default() -> Self {
        AhbSlave { state: SlaveState::Idle, next_id: 0, splits: 0, errors: 0 }
    }
}

impl AhbSlave {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&self) -> SlaveState {
        self.state
    }

    /// Called by the engine when the controller finishes the transfer the
    /// slave is waiting on.
    pub fn complete(&mut self, request_id: u64, hrdata: u64) {
        if let SlaveState::Wait { request_id: id } = self.state {
            if id == request_id {
                self.state = SlaveState::Respond { hrdata };
            }
        }
    }

    /// Advances one bus clock. `transfer` is the address-phase transfer
    /// currently driven by the master.
    pub fn step(&mut self, transfer: &AhbTransfer, status: ControllerStatus) -> SlaveStep {
        let mut out = SlaveStep {
            response: AhbResponse::okay(),
            request: None,
            retry_grant: false,
        };
        match self.state {
            SlaveState::Idle => {
                if matches!(transfer.htrans, HTrans::NonSeq | HTrans::Seq) {
                    if transfer.hsize != 3 || transfer.haddr & 7 != 0 {
                        self.errors += 1;
                        self.state = SlaveState::ErrorFirst;
                        out.response =
                            AhbResponse { hready: false, hresp: HResp::Error, hrdata: 0 };
                    } else if status.refresh_collision() || !status.initialized {
                        self.splits += 1;
                        self.state = SlaveState::SplitFirst;
                        out.response =
                            AhbResponse { hready: false, hresp: HResp::Split, hrdata: 0 };
                    } else {
                        let request_id = self.next_id;
                        self.next_id += 1;
                        out.request = Some(SystemRequest {
                            linear_addr: (transfer.haddr >> 3) as u64,
                            is_read: !transfer.hwrite,
                            beat_count: 1,
                            request_id,
                        });
                        self.state = SlaveState::Wait { request_id };
                        out.response.hready = false;
                    }
                }
            }
            SlaveState::Wait { .. } => {
                out.response.hready = false;
            }
            SlaveState::Respond { hrdata } => {
                out.response.hrdata = hrdata;
                self.state = SlaveState::Idle;
            }
            SlaveState::SplitFirst => {
                out.response = AhbResponse { hready: true, hresp: HResp::Split, hrdata: 0 };
                self.state = SlaveState::SplitSecond;
            }
            SlaveState::SplitSecond => {
                // Transfer is retired from the bus; park it until the
                // controller is free again.
                self.state = SlaveState::SplitParked;
            }
            SlaveState::SplitParked => {
                if status.initialized && !status.refresh_collision() && !status.busy {
                    out.retry_grant = true;
                    self.state = SlaveState::Idle;
                }
            }
            SlaveState::ErrorFirst => {
                out.response = AhbResponse { hready: true, hresp: HResp::Error, hrdata: 0 };
                self.state = SlaveState::ErrorSecond;
            }
            SlaveState::ErrorSecond => {
                self.state = SlaveState::Idle;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ahb::HBurst;

    fn read_xfer(addr: u32) -> AhbTransfer {
        AhbTransfer {
            htrans: HTrans::NonSeq,
            haddr: addr,
            hwrite: false,
            hsize: 3,
            hburst: HBurst::Single,
            hwdata: 0,
        }
    }

    fn ready_status() -> ControllerStatus {
        ControllerStatus { initialized: true, ..Default::default() }
    }

    #[test]
    fn accepts_and_completes_a_read() {
        let mut slave = AhbSlave::new();
        let step = slave.step(&read_xfer(0x40), ready_status());
        let req = step.request.unwrap();
        assert_eq!(req.linear_addr, 8);
        assert!(req.is_read);
        assert!(!step.response.hready);

        // waits with hready low until completion arrives
        let step = slave.step(&read_xfer(0x40), ready_status());
        assert!(!step.response.hready);
        slave.complete(req.request_id, 0xabcd);
        let step = slave.step(&AhbTransfer::idle(), ready_status());
        assert!(step.response.hready);
        assert_eq!(step.response.hrdata, 0xabcd);
        assert_eq!(slave.state(), SlaveState::Idle);
    }

    #[test]
    fn refresh_collision_gives_two_cycle_split_then_regrant() {
        let mut slave = AhbSlave::new();
        let busy = ControllerStatus { initialized: true, refreshing: true, ..Default::default() };
        let step = slave.step(&read_xfer(0x40), busy);
        assert_eq!(step.response.hresp, HResp::Split);
        assert!(!step.response.hready);
        let step = slave.step(&read_xfer(0x40), busy);
        assert_eq!(step.response.hresp, HResp::Split);
        assert!(step.response.hready);
        // parked while the refresh drains
        let step = slave.step(&AhbTransfer::idle(), busy);
        assert!(!step.retry_grant);
        let step = slave.step(&AhbTransfer::idle(), ready_status());
        assert!(step.retry_grant);
        assert_eq!(slave.splits, 1);
    }

    #[test]
    fn narrow_transfer_errors() {
        let mut slave = AhbSlave::new();
        let mut xfer = read_xfer(0x40);
        xfer.hsize = 2;
        let step = slave.step(&xfer, ready_status());
        assert_eq!(step.response.hresp, HResp::Error);
        assert!(!step.response.hready);
        let step = slave.step(&xfer, ready_status());
        assert_eq!(step.response.hresp, HResp::Error);
        assert!(step.response.hready);
        assert_eq!(slave.errors, 1);
    }

    #[test]
    fn misaligned_address_errors() {
        let mut slave = AhbSlave::new();
        let step = slave.step(&read_xfer(0x44), ready_status());
        assert_eq!(step.response.hresp, HResp::Error);
    }
}
