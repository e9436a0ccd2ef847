//! Empirical cost-constant calibration.
//!
//! Runs fixed-seed workloads on the working-set heap and divides the
//! measured abstract-operation totals by the analytic work estimates:
//!
//! * `c_push`: push-attributed ops per push over a push-only workload.
//! * `c_pop`: pop-attributed ops per unit of `1 + log2(age)` summed over
//!   the pops of a mixed workload.
//! * `c_deckey`: decrease-key-attributed ops per unit of the constant
//!   budget 5 per decrease, over a decrease-heavy workload.
//!
//! Constants are serialized as `name = value` lines so a calibration file
//! can be frozen into the test suite and compared against fresh runs.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::counters::OpTag;
use crate::workset::WorkSetHeap;
use crate::Key;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Calibration {
    pub c_push: f64,
    pub c_pop: f64,
    pub c_deckey: f64,
}

pub const PUSH_WORKLOAD_OPS: usize = 100_000;
pub const MIXED_WORKLOAD_OPS: usize = 100_000;
pub const DECKEY_WORKLOAD_SIZE: usize = 20_000;
pub const DECKEY_ROUNDS: usize = 5;
pub const CALIBRATION_SEED: u64 = 0xC0FFEE;

/// Per-decrease abstract-op budget the `c_deckey` constant is measured
/// against: one bucket lookup, one cut, one link, one index update, and
/// slack for the occasional cascade.
pub const DECKEY_UNIT: f64 = 5.0;

pub fn run_calibration() -> Calibration {
    Calibration {
        c_push: calibrate_push(),
        c_pop: calibrate_pop(),
        c_deckey: calibrate_deckey(),
    }
}

fn calibrate_push() -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(CALIBRATION_SEED);
    let mut h: WorkSetHeap<Key> = WorkSetHeap::new();
    for _ in 0..PUSH_WORKLOAD_OPS {
        h.push(rng.gen_range(-1_000_000..1_000_000));
    }
    h.counters().total_for(OpTag::Push) as f64 / PUSH_WORKLOAD_OPS as f64
}

fn calibrate_pop() -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(CALIBRATION_SEED + 1);
    let mut h: WorkSetHeap<Key> = WorkSetHeap::new();
    let mut work_units = 0.0f64;
    for _ in 0..MIXED_WORKLOAD_OPS {
        if rng.gen_bool(0.5) || h.is_empty() {
            h.push(rng.gen_range(-1_000_000..1_000_000));
        } else {
            h.pop().unwrap();
            let age = h.last_pop_stats().unwrap().age;
            work_units += 1.0 + (age.max(1) as f64).log2();
        }
    }
    h.counters().total_for(OpTag::Pop) as f64 / work_units
}

fn calibrate_deckey() -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(CALIBRATION_SEED + 2);
    let mut h: WorkSetHeap<Key> = WorkSetHeap::new();
    let handles: Vec<_> =
        (0..DECKEY_WORKLOAD_SIZE).map(|_| h.push(rng.gen_range(0..1_000_000))).collect();
    let mut decreases = 0u64;
    for round in 1..=DECKEY_ROUNDS {
        for &e in &handles {
            let cur = h.key_of(e).unwrap();
            h.decrease_key(e, cur - rng.gen_range(1..100) * round as Key).unwrap();
            decreases += 1;
        }
    }
    h.counters().total_for(OpTag::DecreaseKey) as f64 / (DECKEY_UNIT * decreases as f64)
}

pub fn to_kv(c: &Calibration) -> String {
    std::format!("c_push = {:.6}\nc_pop = {:.6}\nc_deckey = {:.6}\n", c.c_push, c.c_pop, c.c_deckey)
}

pub fn parse_kv(text: &str) -> Result<Calibration, String> {
    let mut c_push = None;
    let mut c_pop = None;
    let mut c_deckey = None;
    for (idx, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (name, value) = trimmed
            .split_once('=')
            .ok_or_else(|| std::format!("line {}: expected `name = value`", idx + 1))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|e| std::format!("line {}: bad value: {e}", idx + 1))?;
        match name.trim() {
            "c_push" => c_push = Some(value),
            "c_pop" => c_pop = Some(value),
            "c_deckey" => c_deckey = Some(value),
            other => return Err(std::format!("line {}: unknown constant `{other}`", idx + 1)),
        }
    }
    Ok(Calibration {
        c_push: c_push.ok_or("missing c_push")?,
        c_pop: c_pop.ok_or("missing c_pop")?,
        c_deckey: c_deckey.ok_or("missing c_deckey")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_roundtrip() {
        let c = Calibration { c_push: 3.25, c_pop: 7.5, c_deckey: 1.125 };
        assert_eq!(parse_kv(&to_kv(&c)).unwrap(), c);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_kv("c_push 3\n").is_err());
        assert!(parse_kv("c_push = x\n").is_err());
        assert!(parse_kv("c_bogus = 1\n").is_err());
        assert!(parse_kv("c_push = 1\nc_pop = 1\n").is_err());
    }

    #[test]
    fn calibration_is_deterministic_and_positive() {
        let a = run_calibration();
        let b = run_calibration();
        assert_eq!(a, b);
        assert!(a.c_push > 0.0 && a.c_pop > 0.0 && a.c_deckey > 0.0);
    }
}
