use crate::ahb::{HBurst, TraceEntry};
use crate::protocol::Geometry;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BURST_KINDS: [HBurst; 8] = [
    HBurst::Single,
    HBurst::Incr,
    HBurst::Incr4,
    HBurst::Wrap4,
    HBurst::Incr8,
    HBurst::Wrap8,
    HBurst::Incr16,
    HBurst::Wrap16,
];

/// Deterministic random burst mix. Reads are biased toward previously
/// written addresses so data comparisons exercise real hits; all transfers
/// are 64-bit aligned and stay inside the device.
pub fn random_traffic(seed: u64, count: usize, geom: &Geometry) -> Vec<TraceEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // One 64-bit word spans four 16-bit device columns.
    let word_capacity = (geom.capacity() / 4) as u32;
    let byte_capacity = word_capacity * 8;
    let mut written_bases: Vec<u32> = Vec::new();
    let mut entries = Vec::with_capacity(count);

    for _ in 0..count {
        let mut hburst = BURST_KINDS[rng.gen_range(0..BURST_KINDS.len())];
        let mut beat_count = hburst.beats().unwrap_or_else(|| rng.gen_range(1..=8));
        if beat_count * 8 > byte_capacity {
            hburst = HBurst::Single;
            beat_count = 1;
        }
        let span = beat_count * 8;
        let is_read = !written_bases.is_empty() && rng.gen_bool(0.5);

        let addr = if is_read && rng.gen_bool(0.7) {
            let base = written_bases[rng.gen_range(0..written_bases.len())];
            if hburst.is_wrap() {
                // Any wrap stays inside its window; just keep the base on
                // the word grid and the window inside the device.
                base.min(byte_capacity - span) & !7
            } else {
                base.min(byte_capacity - span)
            }
        } else {
            rng.gen_range(0..=(byte_capacity - span) / 8) * 8
        };

        let data = if is_read {
            Vec::new()
        } else {
            written_bases.push(addr);
            (0..beat_count).map(|_| rng.gen::<u64>()).collect()
        };
        entries.push(TraceEntry { is_read, hburst, addr, data, beat_count });
    }
    entries
}
