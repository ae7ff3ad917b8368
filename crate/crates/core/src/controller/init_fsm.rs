use super::CyclePlan;
use serde::{Deserialize, Serialize};

/// States of the initialization FSM. The precharge/load/refresh states each
/// issue one command; the wait states hold for the cycle counts in the
/// [`CyclePlan`] and are skipped entirely when the wait is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitState {
    Idle,
    Nop,
    PrechargeAll1,
    WaitTrp1,
    LoadEmrs,
    LoadMrsDllReset,
    WaitTmrd1,
    PrechargeAll2,
    WaitTrp2,
    AutoRefresh1,
    WaitTrfc1,
    AutoRefresh2,
    WaitTrfc2,
    LoadMrsOperating,
    WaitTmrd2,
    Ready,
}

/// Initialization FSM. Forced to `Idle` by reset; `Ready` is absorbing
/// until the next reset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitFsm {
    pub state: InitState,
    wait_left: u32,
}

impl InitFsm {
    pub fn new() -> Self {
        InitFsm { state: InitState::Idle, wait_left: 0 }
    }

    pub fn reset(&mut self) {
        *self = InitFsm::new();
    }

    pub fn done(&self) -> bool {
        self.state == InitState::Ready
    }

    /// Advances exactly one transition per rising clock edge.
    pub fn step(&mut self, sys_dly_200us_done: bool, plan: &CyclePlan) {
        use InitState::*;
        self.state = match self.state {
            Idle => {
                if sys_dly_200us_done {
                    Nop
                } else {
                    Idle
                }
            }
            Nop => PrechargeAll1,
            PrechargeAll1 => self.enter_wait(WaitTrp1, plan.t_rp_waits, LoadEmrs),
            WaitTrp1 => self.tick_wait(LoadEmrs),
            LoadEmrs => LoadMrsDllReset,
            LoadMrsDllReset => self.enter_wait(WaitTmrd1, plan.t_mrd_waits, PrechargeAll2),
            WaitTmrd1 => self.tick_wait(PrechargeAll2),
            PrechargeAll2 => self.enter_wait(WaitTrp2, plan.t_rp_waits, AutoRefresh1),
            WaitTrp2 => self.tick_wait(AutoRefresh1),
            AutoRefresh1 => self.enter_wait(WaitTrfc1, plan.t_rfc_waits, AutoRefresh2),
            WaitTrfc1 => self.tick_wait(AutoRefresh2),
            AutoRefresh2 => self.enter_wait(WaitTrfc2, plan.t_rfc_waits, LoadMrsOperating),
            WaitTrfc2 => self.tick_wait(LoadMrsOperating),
            LoadMrsOperating => self.enter_wait(WaitTmrd2, plan.t_mrd_waits, Ready),
            WaitTmrd2 => self.tick_wait(Ready),
            Ready => Ready,
        };
    }

    fn enter_wait(&mut self, wait: InitState, waits: u32, skip_to: InitState) -> InitState {
        if waits == 0 {
            skip_to
        } else {
            self.wait_left = waits;
            wait
        }
    }

    fn tick_wait(&mut self, next: InitState) -> InitState {
        self.wait_left -= 1;
        if self.wait_left == 0 {
            next
        } else {
            self.state
        }
    }
}

impl Default for InitFsm {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{BurstLength, BurstType, CasLatency, ModeRegister, TimingConfig};

    fn plan() -> CyclePlan {
        let mr = ModeRegister {
            burst_length: BurstLength::Bl4,
            burst_type: BurstType::Sequential,
            cas_latency: CasLatency::Cl2,
            operating_mode: 0,
        };
        CyclePlan::new(&TimingConfig::default(), &mr)
    }

    #[test]
    fn holds_idle_until_power_up() {
        let mut fsm = InitFsm::new();
        for _ in 0..5 {
            fsm.step(false, &plan());
            assert_eq!(fsm.state, InitState::Idle);
        }
    }

    #[test]
    fn idle_to_nop_to_pre() {
        let mut fsm = InitFsm::new();
        fsm.step(true, &plan());
        assert_eq!(fsm.state, InitState::Nop);
        fsm.step(true, &plan());
        assert_eq!(fsm.state, InitState::PrechargeAll1);
    }

    #[test]
    fn full_sequence_with_default_timing() {
        // tRP=20 -> 1 wait, tRFC=70 -> 6 waits, tMRD=15 -> 1 wait at tCK=10
        let p = plan();
        assert_eq!((p.t_rp_waits, p.t_rfc_waits, p.t_mrd_waits), (1, 6, 1));
        let mut fsm = InitFsm::new();
        let mut states = Vec::new();
        while fsm.state != InitState::Ready {
            fsm.step(true, &p);
            states.push(fsm.state);
            assert!(states.len() < 100, "init did not terminate");
        }
        use InitState::*;
        assert_eq!(
            states,
            vec![
                Nop,
                PrechargeAll1,
                WaitTrp1,
                LoadEmrs,
                LoadMrsDllReset,
                WaitTmrd1,
                PrechargeAll2,
                WaitTrp2,
                AutoRefresh1,
                WaitTrfc1,
                WaitTrfc1,
                WaitTrfc1,
                WaitTrfc1,
                WaitTrfc1,
                WaitTrfc1,
                AutoRefresh2,
                WaitTrfc2,
                WaitTrfc2,
                WaitTrfc2,
                WaitTrfc2,
                WaitTrfc2,
                WaitTrfc2,
                LoadMrsOperating,
                WaitTmrd2,
                Ready,
            ]
        );
    }

    #[test]
    fn zero_waits_skip_delay_states() {
        // Fast clock relative to delays: every wait collapses.
        let mut p = plan();
        p.t_rp_waits = 0;
        p.t_rfc_waits = 0;
        p.t_mrd_waits = 0;
        let mut fsm = InitFsm::new();
        let mut states = Vec::new();
        while fsm.state != InitState::Ready {
            fsm.step(true, &p);
            states.push(fsm.state);
        }
        use InitState::*;
        assert_eq!(
            states,
            vec![
                Nop,
                PrechargeAll1,
                LoadEmrs,
                LoadMrsDllReset,
                PrechargeAll2,
                AutoRefresh1,
                AutoRefresh2,
                LoadMrsOperating,
                Ready,
            ]
        );
    }

    #[test]
    fn ready_is_absorbing() {
        let mut fsm = InitFsm::new();
        while fsm.state != InitState::Ready {
            fsm.step(true, &plan());
        }
        for _ in 0..10 {
            fsm.step(true, &plan());
            assert_eq!(fsm.state, InitState::Ready);
        }
        fsm.reset();
        assert_eq!(fsm.state, InitState::Idle);
    }
}
