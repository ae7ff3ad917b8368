//! Shared setup for the simulator benchmarks.

use ddrsim_core::ahb::TraceEntry;
use ddrsim_core::sim::{random_traffic, SimConfig, Simulation};

/// Stock configuration with the power-up delay compressed so benches
/// measure steady-state behavior, not the idle wait.
pub fn bench_config() -> SimConfig {
    let cfg = SimConfig { power_up_scale: 1000.0, ..SimConfig::default() };
    cfg.validate().expect("bench config");
    cfg
}

pub fn bench_traffic(seed: u64, count: usize) -> Vec<TraceEntry> {
    random_traffic(seed, count, &bench_config().geometry())
}

/// Runs one full simulation and returns the cycle count.
pub fn run_once(entries: Vec<TraceEntry>) -> u64 {
    let mut sim = Simulation::new(bench_config(), entries);
    sim.run().expect("bench trace runs clean");
    sim.cycle()
}
