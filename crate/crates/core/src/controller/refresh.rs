use crate::protocol::TimingConfig;

/// The refresh counter. Asserts its request once a refresh interval has
/// elapsed and holds it until acknowledged. The acknowledge retires one
/// interval rather than restarting the count, so time spent waiting for the
/// bus is never lost: a starved counter catches up with back-to-back
/// refreshes and the long-run rate stays at one per interval.
#[derive(Debug, Clone, PartialEq)]
pub struct RefreshCounter {
    elapsed_ns: f64,
    req: bool,
    was_ack: bool,
}

impl RefreshCounter {
    pub fn new() -> Self {
        RefreshCounter { elapsed_ns: 0.0, req: false, was_ack: false }
    }

    pub fn request(&self) -> bool {
        self.req
    }

    /// Advances one clock. `ack` is the refresh-acknowledge level; only its
    /// rising edge retires an interval.
    pub fn step(&mut self, ack: bool, timing: &TimingConfig) {
        self.elapsed_ns += timing.t_ck_ns;
        if ack && !self.was_ack {
            self.elapsed_ns = (self.elapsed_ns - timing.refresh_interval_ns).max(0.0);
        }
        self.was_ack = ack;
        self.req = self.elapsed_ns >= timing.refresh_interval_ns;
    }
}

impl Default for RefreshCounter {
    fn default() -> Self {
        Self::new()
    }
}
