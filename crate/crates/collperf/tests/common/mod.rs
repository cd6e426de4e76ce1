//! Shared helpers for the integration suites: synthetic tables, a random
//! valid-table generator and an exhaustive segment-search oracle.

// Each test target uses its own subset of these helpers.
#![allow(dead_code)]

use collperf::optimize::SegmentedModel;
use collperf::params::{ParamRow, ParamTable, SegmentSpec};
use rand::rngs::StdRng;
use rand::Rng;

/// Synthetic table with L = 10 and g(m) = m, os(m) = or(m) = m/2 for every m
/// up to 1e6; two rows plus linear interpolation make the functions exact.
pub fn t0() -> ParamTable {
    ParamTable::from_parts(
        10.0,
        vec![
            ParamRow::new(1, 1.0, 0.5, 0.5),
            ParamRow::new(1_000_000, 1_000_000.0, 500_000.0, 500_000.0),
        ],
    )
    .unwrap()
}

/// Table with exactly affine gap g(m) = a + b*m (two rows interpolate it
/// without error) and overheads at half the gap.
pub fn affine_table(a: f64, b: f64, latency: f64, max_size: u64) -> ParamTable {
    let row = |size: u64| {
        let g = a + b * size as f64;
        ParamRow::new(size, g, g / 2.0, g / 2.0)
    };
    ParamTable::from_parts(latency, vec![row(1), row(max_size)]).unwrap()
}

/// Ethernet-like signature: latency dominates the per-byte gap, overheads are
/// a fixed fraction of the gap. Mirrors a switched 100 Mb/s cluster.
pub fn ethernet_like() -> ParamTable {
    let a = 4.5e-5;
    let b = 8e-8;
    let row = |size: u64| {
        let g = a + b * size as f64;
        ParamRow::new(size, g, 0.4 * g, 0.4 * g)
    };
    ParamTable::from_parts(
        1e-4,
        vec![
            row(1),
            row(64),
            row(1024),
            row(16_384),
            row(262_144),
            row(2_097_152),
        ],
    )
    .unwrap()
}

/// A random valid table: increasing sizes from 1, a noisy affine-ish gap
/// (dips between rows are allowed) and overheads strictly below the gap.
pub fn random_table(rng: &mut StdRng) -> ParamTable {
    let latency = 10f64.powf(rng.random_range(-5.0..-2.5));
    let base = 10f64.powf(rng.random_range(-6.0..-4.0));
    let per_byte = 10f64.powf(rng.random_range(-9.0..-6.5));
    let mut sizes = vec![1u64];
    let mut size = 1u64;
    for _ in 0..rng.random_range(3..8) {
        size = size.saturating_mul(rng.random_range(4..32));
        sizes.push(size);
    }
    let mut rows: Vec<ParamRow> = sizes
        .iter()
        .map(|&size| {
            let jitter: f64 = rng.random_range(0.8..1.25);
            let g = (base + per_byte * size as f64) * jitter;
            ParamRow::new(
                size,
                g,
                g * rng.random_range(0.2..0.95),
                g * rng.random_range(0.2..0.95),
            )
        })
        .collect();
    // Dips between interior rows are fine, but the final interval's slope must
    // not be negative: queries far beyond the measured range extrapolate that
    // slope and would otherwise go negative.
    let prev = rows[rows.len() - 2];
    let last = rows.last_mut().unwrap();
    last.gap = last.gap.max(prev.gap);
    last.send_overhead = last.send_overhead.max(prev.send_overhead);
    last.recv_overhead = last.recv_overhead.max(prev.recv_overhead);
    ParamTable::from_parts(latency, rows).unwrap()
}

/// Exhaustive segment search over every multiple of `unit` in [unit, m],
/// ties toward the larger size. The oracle the optimizer is checked against;
/// it never touches the search code.
pub fn brute_force_segment(
    model: SegmentedModel,
    table: &ParamTable,
    procs: u32,
    message_size: u64,
    unit: u64,
) -> (u64, f64) {
    let mut best: Option<(u64, f64)> = None;
    let mut s = unit;
    while s <= message_size {
        let spec = SegmentSpec::new(message_size, s, unit).unwrap();
        let time = model
            .evaluate(table, procs, message_size, spec)
            .unwrap()
            .time;
        best = match best {
            None => Some((s, time)),
            Some((bs, bt)) if time < bt || (time == bt && s > bs) => Some((s, time)),
            keep => keep,
        };
        s += unit;
    }
    best.expect("at least one candidate")
}
