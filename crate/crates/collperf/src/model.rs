//! Closed-form completion-time models for broadcast, scatter and all-to-all
//! implementation strategies over a pLogP table.
//!
//! With `P` processes, an `m`-byte message, latency `L`, gap `g`, overheads
//! `os`/`or`, and segments of size `s` in count `k = ceil(m/s)`:
//!
//! ```text
//! broadcast  flat                  (P-1)*g(m) + L
//!            flat rendezvous       (P-1)*g(m) + 2*g(1) + 3*L
//!            flat segmented        (P-1)*(g(s)*k) + L
//!            chain                 (P-1)*(g(m) + L)
//!            chain rendezvous      (P-1)*(g(m) + 2*g(1) + 3*L)
//!            pipeline (seg chain)  (P-1)*(g(s) + L) + g(s)*(k-1)
//!            binary tree           <= ceil(log2 P)*(2*g(m) + L)     [upper bound]
//!            binomial tree         floor(log2 P)*g(m) + ceil(log2 P)*L
//!            binomial rendezvous   floor(log2 P)*g(m) + ceil(log2 P)*(2*g(1) + 3*L)
//!            binomial segmented    floor(log2 P)*g(s)*k + ceil(log2 P)*L
//! scatter    flat                  (P-1)*g(m) + L
//!            chain                 sum_{j=1..P-1} g(j*m) + (P-1)*L
//!            binomial              sum_{j=0..ceil(log2 P)-1} g(2^j*m) + ceil(log2 P)*L
//! alltoall   lower bound           (P-1)*os(m) + (P-1)*or(m) + L
//!            upper bound           (P-1)*g(m)  + (P-1)*or(m) + L
//! ```
//!
//! Logarithms are computed exactly on integers so power-of-two boundaries
//! never flip on floating-point rounding. Every prediction carries a labeled
//! term breakdown that sums to its time.

use crate::error::ModelError;
use crate::params::{ParamTable, SegmentSpec};
use std::fmt;

/// Collective-operation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Broadcast,
    Scatter,
    AllToAll,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Broadcast => "broadcast",
            Family::Scatter => "scatter",
            Family::AllToAll => "alltoall",
        })
    }
}

/// Broadcast implementation variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BroadcastVariant {
    Flat,
    FlatRendezvous,
    FlatSegmented,
    Chain,
    ChainRendezvous,
    /// Segmented chain.
    Pipeline,
    Binary,
    Binomial,
    BinomialRendezvous,
    BinomialSegmented,
}

/// Scatter implementation variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScatterVariant {
    Flat,
    Chain,
    Binomial,
}

/// All-to-all prediction variants: the two bounds and the contended blend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AllToAllVariant {
    LowerBound,
    UpperBound,
    Contended,
}

/// A concrete implementation strategy; the variant is valid for its family by
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Broadcast(BroadcastVariant),
    Scatter(ScatterVariant),
    AllToAll(AllToAllVariant),
}

impl Strategy {
    pub fn family(&self) -> Family {
        match self {
            Strategy::Broadcast(_) => Family::Broadcast,
            Strategy::Scatter(_) => Family::Scatter,
            Strategy::AllToAll(_) => Family::AllToAll,
        }
    }

    /// True for the variants that take a segment spec.
    pub fn is_segmented(&self) -> bool {
        matches!(
            self,
            Strategy::Broadcast(
                BroadcastVariant::FlatSegmented
                    | BroadcastVariant::Pipeline
                    | BroadcastVariant::BinomialSegmented
            )
        )
    }

    /// Parses a variant name within a family. `chain_segmented` is accepted as
    /// an alias for `pipeline`.
    pub fn parse(family: Family, name: &str) -> Option<Strategy> {
        let s = match (family, name) {
            (Family::Broadcast, "flat") => Strategy::Broadcast(BroadcastVariant::Flat),
            (Family::Broadcast, "flat_rendezvous") => {
                Strategy::Broadcast(BroadcastVariant::FlatRendezvous)
            }
            (Family::Broadcast, "flat_segmented") => {
                Strategy::Broadcast(BroadcastVariant::FlatSegmented)
            }
            (Family::Broadcast, "chain") => Strategy::Broadcast(BroadcastVariant::Chain),
            (Family::Broadcast, "chain_rendezvous") => {
                Strategy::Broadcast(BroadcastVariant::ChainRendezvous)
            }
            (Family::Broadcast, "pipeline" | "chain_segmented") => {
                Strategy::Broadcast(BroadcastVariant::Pipeline)
            }
            (Family::Broadcast, "binary") => Strategy::Broadcast(BroadcastVariant::Binary),
            (Family::Broadcast, "binomial") => Strategy::Broadcast(BroadcastVariant::Binomial),
            (Family::Broadcast, "binomial_rendezvous") => {
                Strategy::Broadcast(BroadcastVariant::BinomialRendezvous)
            }
            (Family::Broadcast, "binomial_segmented") => {
                Strategy::Broadcast(BroadcastVariant::BinomialSegmented)
            }
            (Family::Scatter, "flat") => Strategy::Scatter(ScatterVariant::Flat),
            (Family::Scatter, "chain") => Strategy::Scatter(ScatterVariant::Chain),
            (Family::Scatter, "binomial") => Strategy::Scatter(ScatterVariant::Binomial),
            (Family::AllToAll, "lower") => Strategy::AllToAll(AllToAllVariant::LowerBound),
            (Family::AllToAll, "upper") => Strategy::AllToAll(AllToAllVariant::UpperBound),
            (Family::AllToAll, "contended") => Strategy::AllToAll(AllToAllVariant::Contended),
            _ => return None,
        };
        Some(s)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Strategy::Broadcast(v) => match v {
                BroadcastVariant::Flat => "flat",
                BroadcastVariant::FlatRendezvous => "flat_rendezvous",
                BroadcastVariant::FlatSegmented => "flat_segmented",
                BroadcastVariant::Chain => "chain",
                BroadcastVariant::ChainRendezvous => "chain_rendezvous",
                BroadcastVariant::Pipeline => "pipeline",
                BroadcastVariant::Binary => "binary",
                BroadcastVariant::Binomial => "binomial",
                BroadcastVariant::BinomialRendezvous => "binomial_rendezvous",
                BroadcastVariant::BinomialSegmented => "binomial_segmented",
            },
            Strategy::Scatter(v) => match v {
                ScatterVariant::Flat => "flat",
                ScatterVariant::Chain => "chain",
                ScatterVariant::Binomial => "binomial",
            },
            Strategy::AllToAll(v) => match v {
                AllToAllVariant::LowerBound => "lower",
                AllToAllVariant::UpperBound => "upper",
                AllToAllVariant::Contended => "contended",
            },
        };
        f.write_str(name)
    }
}

/// One labeled component of a predicted time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub label: &'static str,
    pub seconds: f64,
}

impl Term {
    fn new(label: &'static str, seconds: f64) -> Self {
        Term { label, seconds }
    }
}

/// A predicted completion time together with its input context and a term
/// breakdown that sums to it.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub strategy: Strategy,
    pub procs: u32,
    pub message_size: u64,
    pub segment: Option<SegmentSpec>,
    /// Predicted completion time in seconds; equals the sum of `terms`.
    pub time: f64,
    pub terms: Vec<Term>,
    /// Set when the model only bounds the time from above (binary tree).
    pub upper_bound: bool,
    /// Set when any queried size fell beyond the table's measured range.
    pub extrapolated: bool,
    /// Contention factor used, for the contended all-to-all prediction.
    pub gamma: Option<f64>,
}

impl Prediction {
    fn from_terms(
        strategy: Strategy,
        procs: u32,
        message_size: u64,
        segment: Option<SegmentSpec>,
        terms: Vec<Term>,
        extrapolated: bool,
    ) -> Prediction {
        let time = terms.iter().map(|t| t.seconds).sum();
        Prediction {
            strategy,
            procs,
            message_size,
            segment,
            time,
            terms,
            upper_bound: false,
            extrapolated,
            gamma: None,
        }
    }
}

/// floor(log2 p) for p >= 1, computed on integers.
pub fn floor_log2(p: u32) -> u32 {
    assert!(p >= 1);
    31 - p.leading_zeros()
}

/// ceil(log2 p) for p >= 1, computed on integers.
pub fn ceil_log2(p: u32) -> u32 {
    floor_log2(p) + u32::from(!p.is_power_of_two())
}

fn check(table: &ParamTable, procs: u32, message_size: u64) -> Result<(), ModelError> {
    let _ = table;
    if procs < 2 {
        return Err(ModelError::InvalidProcessCount(procs));
    }
    if message_size < 1 {
        return Err(ModelError::InvalidMessageSize);
    }
    Ok(())
}

fn check_segment(message_size: u64, seg: &SegmentSpec) -> Result<(), ModelError> {
    if seg.size > message_size || seg.count != message_size.div_ceil(seg.size) {
        return Err(ModelError::InvalidSegment(format!(
            "segment ({} x {}) does not cover message of {} bytes",
            seg.size, seg.count, message_size
        )));
    }
    Ok(())
}

/// Flat-tree broadcast: the root sends the full message to each rank in turn.
pub fn bcast_flat(table: &ParamTable, procs: u32, m: u64) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    let p1 = (procs - 1) as f64;
    let terms = vec![
        Term::new("gap", p1 * table.gap(m)),
        Term::new("latency", table.latency()),
    ];
    Ok(Prediction::from_terms(
        Strategy::Broadcast(BroadcastVariant::Flat),
        procs,
        m,
        None,
        terms,
        table.is_extrapolated(m),
    ))
}

/// Flat-tree broadcast preceded by a rendezvous handshake per transfer.
pub fn bcast_flat_rendezvous(
    table: &ParamTable,
    procs: u32,
    m: u64,
) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    let p1 = (procs - 1) as f64;
    let terms = vec![
        Term::new("gap", p1 * table.gap(m)),
        Term::new("rendezvous", 2.0 * table.gap(1)),
        Term::new("latency", 3.0 * table.latency()),
    ];
    Ok(Prediction::from_terms(
        Strategy::Broadcast(BroadcastVariant::FlatRendezvous),
        procs,
        m,
        None,
        terms,
        table.is_extrapolated(m),
    ))
}

/// Segmented flat-tree broadcast: the root's link carries k segments per rank.
pub fn bcast_flat_segmented(
    table: &ParamTable,
    procs: u32,
    m: u64,
    seg: SegmentSpec,
) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    check_segment(m, &seg)?;
    let p1 = (procs - 1) as f64;
    let terms = vec![
        Term::new("gap", p1 * (table.gap(seg.size) * seg.count as f64)),
        Term::new("latency", table.latency()),
    ];
    Ok(Prediction::from_terms(
        Strategy::Broadcast(BroadcastVariant::FlatSegmented),
        procs,
        m,
        Some(seg),
        terms,
        table.is_extrapolated(seg.size),
    ))
}

/// Chain broadcast: each rank forwards the full message to its successor.
pub fn bcast_chain(table: &ParamTable, procs: u32, m: u64) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    let p1 = (procs - 1) as f64;
    let terms = vec![
        Term::new("gap", p1 * table.gap(m)),
        Term::new("latency", p1 * table.latency()),
    ];
    Ok(Prediction::from_terms(
        Strategy::Broadcast(BroadcastVariant::Chain),
        procs,
        m,
        None,
        terms,
        table.is_extrapolated(m),
    ))
}

/// Chain broadcast with a rendezvous handshake on every hop.
pub fn bcast_chain_rendezvous(
    table: &ParamTable,
    procs: u32,
    m: u64,
) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    let p1 = (procs - 1) as f64;
    let terms = vec![
        Term::new("gap", p1 * table.gap(m)),
        Term::new("rendezvous", p1 * (2.0 * table.gap(1))),
        Term::new("latency", p1 * (3.0 * table.latency())),
    ];
    Ok(Prediction::from_terms(
        Strategy::Broadcast(BroadcastVariant::ChainRendezvous),
        procs,
        m,
        None,
        terms,
        table.is_extrapolated(m),
    ))
}

/// Segmented chain (pipeline) broadcast: reception of segment j+1 overlaps the
/// forwarding of segment j, leaving one per-hop cost plus a pipeline fill.
pub fn bcast_pipeline(
    table: &ParamTable,
    procs: u32,
    m: u64,
    seg: SegmentSpec,
) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    check_segment(m, &seg)?;
    let p1 = (procs - 1) as f64;
    let gs = table.gap(seg.size);
    let terms = vec![
        Term::new("gap", p1 * gs),
        Term::new("latency", p1 * table.latency()),
        Term::new("pipeline_fill", gs * (seg.count - 1) as f64),
    ];
    Ok(Prediction::from_terms(
        Strategy::Broadcast(BroadcastVariant::Pipeline),
        procs,
        m,
        Some(seg),
        terms,
        table.is_extrapolated(seg.size),
    ))
}

/// Binary-tree broadcast. The model only bounds the completion time from
/// above, so the prediction is flagged as an upper bound.
pub fn bcast_binary(table: &ParamTable, procs: u32, m: u64) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    let cl = ceil_log2(procs) as f64;
    let terms = vec![
        Term::new("gap_upper_bound", cl * (2.0 * table.gap(m))),
        Term::new("latency_upper_bound", cl * table.latency()),
    ];
    let mut p = Prediction::from_terms(
        Strategy::Broadcast(BroadcastVariant::Binary),
        procs,
        m,
        None,
        terms,
        table.is_extrapolated(m),
    );
    p.upper_bound = true;
    Ok(p)
}

/// Binomial-tree broadcast: doubling schedule of depth ceil(log2 P).
pub fn bcast_binomial(table: &ParamTable, procs: u32, m: u64) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    let fl = floor_log2(procs) as f64;
    let cl = ceil_log2(procs) as f64;
    let terms = vec![
        Term::new("gap", fl * table.gap(m)),
        Term::new("latency", cl * table.latency()),
    ];
    Ok(Prediction::from_terms(
        Strategy::Broadcast(BroadcastVariant::Binomial),
        procs,
        m,
        None,
        terms,
        table.is_extrapolated(m),
    ))
}

/// Binomial-tree broadcast with a rendezvous handshake per tree level.
pub fn bcast_binomial_rendezvous(
    table: &ParamTable,
    procs: u32,
    m: u64,
) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    let fl = floor_log2(procs) as f64;
    let cl = ceil_log2(procs) as f64;
    let terms = vec![
        Term::new("gap", fl * table.gap(m)),
        Term::new("rendezvous", cl * (2.0 * table.gap(1))),
        Term::new("latency", cl * (3.0 * table.latency())),
    ];
    Ok(Prediction::from_terms(
        Strategy::Broadcast(BroadcastVariant::BinomialRendezvous),
        procs,
        m,
        None,
        terms,
        table.is_extrapolated(m),
    ))
}

/// Segmented binomial-tree broadcast (store-and-forward per level).
pub fn bcast_binomial_segmented(
    table: &ParamTable,
    procs: u32,
    m: u64,
    seg: SegmentSpec,
) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    check_segment(m, &seg)?;
    let fl = floor_log2(procs) as f64;
    let cl = ceil_log2(procs) as f64;
    let terms = vec![
        Term::new("gap", fl * (table.gap(seg.size) * seg.count as f64)),
        Term::new("latency", cl * table.latency()),
    ];
    Ok(Prediction::from_terms(
        Strategy::Broadcast(BroadcastVariant::BinomialSegmented),
        procs,
        m,
        Some(seg),
        terms,
        table.is_extrapolated(seg.size),
    ))
}

/// Flat scatter: the root sends each rank its own m-byte block in turn.
pub fn scatter_flat(table: &ParamTable, procs: u32, m: u64) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    let p1 = (procs - 1) as f64;
    let terms = vec![
        Term::new("gap", p1 * table.gap(m)),
        Term::new("latency", table.latency()),
    ];
    Ok(Prediction::from_terms(
        Strategy::Scatter(ScatterVariant::Flat),
        procs,
        m,
        None,
        terms,
        table.is_extrapolated(m),
    ))
}

/// Chain scatter: each rank forwards the shrinking bulk of remaining blocks.
/// Queries g at sizes j*m, which may extrapolate beyond the measured range.
pub fn scatter_chain(table: &ParamTable, procs: u32, m: u64) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    let mut gap_sum = 0.0;
    let mut extrapolated = false;
    for j in 1..procs as u64 {
        let size = j.saturating_mul(m);
        gap_sum += table.gap(size);
        extrapolated |= table.is_extrapolated(size);
    }
    let terms = vec![
        Term::new("gap", gap_sum),
        Term::new("latency", (procs - 1) as f64 * table.latency()),
    ];
    Ok(Prediction::from_terms(
        Strategy::Scatter(ScatterVariant::Chain),
        procs,
        m,
        None,
        terms,
        extrapolated,
    ))
}

/// Binomial scatter: bulk messages of 2^j blocks travel down the doubling
/// tree. Queries g at sizes 2^j*m, which may extrapolate.
pub fn scatter_binomial(table: &ParamTable, procs: u32, m: u64) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    let levels = ceil_log2(procs);
    let mut gap_sum = 0.0;
    let mut extrapolated = false;
    for j in 0..levels {
        let size = m.saturating_mul(1u64 << j.min(63));
        gap_sum += table.gap(size);
        extrapolated |= table.is_extrapolated(size);
    }
    let terms = vec![
        Term::new("gap", gap_sum),
        Term::new("latency", levels as f64 * table.latency()),
    ];
    Ok(Prediction::from_terms(
        Strategy::Scatter(ScatterVariant::Binomial),
        procs,
        m,
        None,
        terms,
        extrapolated,
    ))
}

/// All-to-all lower bound: every rank overlaps sends and receives, paying only
/// the send and receive overheads plus one latency.
pub fn alltoall_lower(table: &ParamTable, procs: u32, m: u64) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    let p1 = (procs - 1) as f64;
    let terms = vec![
        Term::new("send_overhead", p1 * table.send_overhead(m)),
        Term::new("recv_overhead", p1 * table.recv_overhead(m)),
        Term::new("latency", table.latency()),
    ];
    Ok(Prediction::from_terms(
        Strategy::AllToAll(AllToAllVariant::LowerBound),
        procs,
        m,
        None,
        terms,
        table.is_extrapolated(m),
    ))
}

/// All-to-all upper bound: link contention serialises each rank's sends at the
/// full gap.
pub fn alltoall_upper(table: &ParamTable, procs: u32, m: u64) -> Result<Prediction, ModelError> {
    check(table, procs, m)?;
    let p1 = (procs - 1) as f64;
    let terms = vec![
        Term::new("gap", p1 * table.gap(m)),
        Term::new("recv_overhead", p1 * table.recv_overhead(m)),
        Term::new("latency", table.latency()),
    ];
    Ok(Prediction::from_terms(
        Strategy::AllToAll(AllToAllVariant::UpperBound),
        procs,
        m,
        None,
        terms,
        table.is_extrapolated(m),
    ))
}

/// True when a d-ary tree of fan-out `fan_out` and height `height` can reach
/// `procs` nodes, i.e. sum_{i=0..height} fan_out^i >= procs.
pub fn tree_feasible(fan_out: u64, height: u32, procs: u64) -> bool {
    let mut total: u64 = 0;
    let mut term: u64 = 1;
    for _ in 0..=height {
        total = total.saturating_add(term);
        if total >= procs {
            return true;
        }
        term = term.saturating_mul(fan_out);
    }
    total >= procs
}
