use crate::protocol::TimingParam;
use serde::{Deserialize, Serialize};
use std::fmt;

/// What a checker violation is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    TimingViolation(TimingParam),
    BankNotActive,
    BankAlreadyActive,
    NotInitialized,
    BanksNotIdle,
    RefreshOverdue,
    UnknownCommand,
    InitOrderViolation,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::TimingViolation(p) => write!(f, "TimingViolation({})", p.name()),
            ViolationKind::BankNotActive => write!(f, "BankNotActive"),
            ViolationKind::BankAlreadyActive => write!(f, "BankAlreadyActive"),
            ViolationKind::NotInitialized => write!(f, "NotInitialized"),
            ViolationKind::BanksNotIdle => write!(f, "BanksNotIdle"),
            ViolationKind::RefreshOverdue => write!(f, "RefreshOverdue"),
            ViolationKind::UnknownCommand => write!(f, "UnknownCommand"),
            ViolationKind::InitOrderViolation => write!(f, "InitOrderViolation"),
        }
    }
}

/// One checker finding, stamped with the cycle it was detected on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub cycle: u64,
    pub kind: ViolationKind,
    pub detail: String,
}

impl Violation {
    pub fn new(cycle: u64, kind: ViolationKind, detail: String) -> Self {
        Violation { cycle, kind, detail }
    }

    pub fn timing(cycle: u64, param: TimingParam, detail: String) -> Self {
        Violation::new(cycle, ViolationKind::TimingViolation(param), detail)
    }
}

// Log line format: one violation per line.
impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cycle={} kind={} detail={}", self.cycle, self.kind, self.detail)
    }
}
