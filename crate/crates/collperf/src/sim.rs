//! Discrete-event execution of collective schedules under pLogP timing.
//!
//! Timing semantics: a send occupies the sender's link for the gap of its
//! payload, so consecutive sends from one node are spaced at least that far
//! apart; the message lands one latency after the link frees
//! (`arrival = send_start + g(payload) + L`); a node may begin forwarding a
//! (segment of a) message at its arrival time; the root starts at t = 0.
//!
//! The one exception is the overlapped all-to-all mode, which realises the
//! lower-bound construction: there a send occupies the link only for the send
//! overhead `os(m)`, since the node regains the network interface as soon as
//! the send call returns. In both all-to-all modes each node is additionally
//! charged `(P-1) * or(m)` of receive processing after its last arrival, so
//! the completion exceeds the last wire arrival by that tail.
//!
//! Broadcast and scatter schedules reproduce their closed-form models exactly
//! (binomial shapes at power-of-two process counts; for other counts the
//! schedule is the ground truth and the ceil/floor closed form an
//! approximation). Simulations are single-threaded and deterministic.

use crate::error::ModelError;
use crate::model::ceil_log2;
use crate::params::{ParamTable, SegmentSpec};
use std::fmt;

/// What happened at an event's timestamp.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// The acting node's link starts transmitting.
    SendStart,
    /// The link frees (one gap after the start).
    SendEnd,
    /// The payload lands at the acting node (one latency after the link frees).
    Arrival,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::SendStart => "send_start",
            EventKind::SendEnd => "send_end",
            EventKind::Arrival => "arrival",
        })
    }
}

/// One timestamped schedule event. For sends, `node` is the sender and `peer`
/// the receiver; for arrivals, `node` is the receiver and `peer` the sender.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub kind: EventKind,
    pub node: u32,
    pub peer: u32,
    /// Bytes charged on the link (segments are charged their full size).
    pub payload: u64,
    pub time: f64,
    /// Segment ordinal; 0 for unsegmented messages.
    pub segment_index: u32,
}

/// A complete simulated schedule.
#[derive(Debug, Clone)]
pub struct Timeline {
    /// Events sorted by time, then by acting node (stable).
    pub events: Vec<Event>,
    /// Time at which every node is done, in seconds.
    pub completion: f64,
    /// Per-rank completion times.
    pub per_node_completion: Vec<f64>,
}

impl Timeline {
    /// One event per line: `time node kind peer payload segment_index`, time
    /// printed with 9 decimal places.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&format!(
                "{:.9} {} {} {} {} {}\n",
                e.time, e.node, e.kind, e.peer, e.payload, e.segment_index
            ));
        }
        out
    }

    /// Checks that consecutive sends from each node never overlap on its link.
    pub fn check_link_gaps(&self) -> Result<(), String> {
        let nodes = self.per_node_completion.len();
        for n in 0..nodes as u32 {
            let mut last_end: Option<f64> = None;
            for e in self.events.iter().filter(|e| e.node == n) {
                match e.kind {
                    EventKind::SendStart => {
                        if let Some(end) = last_end {
                            if e.time < end {
                                return Err(format!(
                                    "node {n} starts a send at {} before its link frees at {end}",
                                    e.time
                                ));
                            }
                        }
                    }
                    EventKind::SendEnd => last_end = Some(e.time),
                    EventKind::Arrival => {}
                }
            }
        }
        Ok(())
    }

    /// Checks that no node other than `origin` sends a segment before
    /// receiving it.
    pub fn check_causality(&self, origin: u32) -> Result<(), String> {
        for e in &self.events {
            if e.kind != EventKind::SendStart || e.node == origin {
                continue;
            }
            let got = self
                .events
                .iter()
                .filter(|a| {
                    a.kind == EventKind::Arrival
                        && a.node == e.node
                        && a.segment_index == e.segment_index
                })
                .map(|a| a.time)
                .fold(f64::INFINITY, f64::min);
            if got > e.time {
                return Err(format!(
                    "node {} sends segment {} at {} but first receives it at {}",
                    e.node, e.segment_index, e.time, got
                ));
            }
        }
        Ok(())
    }
}

/// Tree shape a broadcast or scatter schedule follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeShape {
    Flat,
    Chain,
    Binomial,
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TreeShape::Flat => "flat",
            TreeShape::Chain => "chain",
            TreeShape::Binomial => "binomial",
        })
    }
}

/// How an all-to-all exchange paces each node's sends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllToAllMode {
    /// Sends spaced by the full gap; realises the upper bound.
    Serialized,
    /// Sends spaced by the send overhead only; realises the lower bound.
    Overlapped,
}

impl fmt::Display for AllToAllMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AllToAllMode::Serialized => "serialized",
            AllToAllMode::Overlapped => "overlapped",
        })
    }
}

struct Engine<'t> {
    table: &'t ParamTable,
    events: Vec<Event>,
    link_free: Vec<f64>,
    last_arrival: Vec<f64>,
    last_send_end: Vec<f64>,
}

impl<'t> Engine<'t> {
    fn new(table: &'t ParamTable, procs: u32) -> Self {
        Engine {
            table,
            events: Vec::new(),
            link_free: vec![0.0; procs as usize],
            last_arrival: vec![0.0; procs as usize],
            last_send_end: vec![0.0; procs as usize],
        }
    }

    /// Schedules one send; returns the arrival time at the receiver.
    fn send(
        &mut self,
        from: u32,
        to: u32,
        payload: u64,
        ready: f64,
        occupancy: f64,
        segment_index: u32,
    ) -> f64 {
        let start = ready.max(self.link_free[from as usize]);
        let end = start + occupancy;
        let arrival = end + self.table.latency();
        self.link_free[from as usize] = end;
        self.last_send_end[from as usize] = end;
        let a = &mut self.last_arrival[to as usize];
        *a = a.max(arrival);
        self.events.push(Event {
            kind: EventKind::SendStart,
            node: from,
            peer: to,
            payload,
            time: start,
            segment_index,
        });
        self.events.push(Event {
            kind: EventKind::SendEnd,
            node: from,
            peer: to,
            payload,
            time: end,
            segment_index,
        });
        self.events.push(Event {
            kind: EventKind::Arrival,
            node: to,
            peer: from,
            payload,
            time: arrival,
            segment_index,
        });
        arrival
    }

    fn finish(mut self, per_node_completion: Vec<f64>) -> Timeline {
        self.events
            .sort_by(|a, b| a.time.total_cmp(&b.time).then(a.node.cmp(&b.node)));
        let completion = per_node_completion.iter().copied().fold(0.0, f64::max);
        Timeline {
            events: self.events,
            completion,
            per_node_completion,
        }
    }

    fn wire_completion(self) -> Timeline {
        let per_node: Vec<f64> = self
            .last_arrival
            .iter()
            .zip(&self.last_send_end)
            .map(|(&a, &s)| a.max(s))
            .collect();
        self.finish(per_node)
    }
}

fn check(procs: u32, message_size: u64) -> Result<(), ModelError> {
    if procs < 2 {
        return Err(ModelError::InvalidProcessCount(procs));
    }
    if message_size < 1 {
        return Err(ModelError::InvalidMessageSize);
    }
    Ok(())
}

/// Segment sizes and count for a possibly segmented message. The short final
/// segment is charged the full segment size, matching the closed forms.
fn pieces(message_size: u64, seg: Option<SegmentSpec>) -> Result<(u64, u32), ModelError> {
    match seg {
        None => Ok((message_size, 1)),
        Some(s) => {
            if s.size > message_size || s.count != message_size.div_ceil(s.size) {
                return Err(ModelError::InvalidSegment(format!(
                    "segment ({} x {}) does not cover message of {} bytes",
                    s.size, s.count, message_size
                )));
            }
            Ok((s.size, s.count as u32))
        }
    }
}

/// Simulates a broadcast of `message_size` bytes from rank 0 over `procs`
/// ranks. Segments apply to every shape; the segmented chain is the pipeline.
pub fn simulate_broadcast(
    table: &ParamTable,
    procs: u32,
    message_size: u64,
    shape: TreeShape,
    seg: Option<SegmentSpec>,
) -> Result<Timeline, ModelError> {
    check(procs, message_size)?;
    let (piece, count) = pieces(message_size, seg)?;
    let g = table.gap(piece);
    let mut engine = Engine::new(table, procs);

    match shape {
        TreeShape::Flat => {
            for target in 1..procs {
                for j in 0..count {
                    engine.send(0, target, piece, 0.0, g, j);
                }
            }
        }
        TreeShape::Chain => {
            let mut avail = vec![0.0f64; count as usize];
            for node in 1..procs {
                for j in 0..count {
                    avail[j as usize] = engine.send(node - 1, node, piece, avail[j as usize], g, j);
                }
            }
        }
        TreeShape::Binomial => {
            // Doubling schedule: in round r every informed rank below 2^r
            // sends to rank + 2^r, greedily as its link frees.
            let mut avail: Vec<Vec<f64>> = vec![Vec::new(); procs as usize];
            avail[0] = vec![0.0; count as usize];
            let mut offset = 1u32;
            while offset < procs {
                for rank in 0..offset.min(procs) {
                    let target = rank + offset;
                    if target >= procs {
                        continue;
                    }
                    let mut got = Vec::with_capacity(count as usize);
                    for j in 0..count {
                        let ready = avail[rank as usize][j as usize];
                        got.push(engine.send(rank, target, piece, ready, g, j));
                    }
                    avail[target as usize] = got;
                }
                offset = offset.saturating_mul(2);
            }
        }
    }
    Ok(engine.wire_completion())
}

/// Simulates a scatter of one distinct `message_size`-byte block per rank from
/// rank 0. Chain and binomial shapes forward aggregated bulk payloads.
pub fn simulate_scatter(
    table: &ParamTable,
    procs: u32,
    message_size: u64,
    shape: TreeShape,
) -> Result<Timeline, ModelError> {
    check(procs, message_size)?;
    let mut engine = Engine::new(table, procs);

    match shape {
        TreeShape::Flat => {
            let g = table.gap(message_size);
            for target in 1..procs {
                engine.send(0, target, message_size, 0.0, g, 0);
            }
        }
        TreeShape::Chain => {
            // Rank i forwards the blocks of every rank behind it.
            let mut avail = 0.0f64;
            for node in 1..procs {
                let payload = (procs - node) as u64 * message_size;
                avail = engine.send(node - 1, node, payload, avail, table.gap(payload), 0);
            }
        }
        TreeShape::Binomial => {
            scatter_subtree(&mut engine, message_size, procs, 0, ceil_log2(procs), 0.0);
        }
    }
    Ok(engine.wire_completion())
}

/// Recursive halving: the subtree root sends each child the bulk block for the
/// child's whole span, largest span first.
fn scatter_subtree(
    engine: &mut Engine<'_>,
    message_size: u64,
    procs: u32,
    root: u32,
    span_log: u32,
    avail: f64,
) {
    for i in (0..span_log).rev() {
        let child = root + (1u32 << i);
        if child >= procs {
            continue;
        }
        let blocks = (1u64 << i).min((procs - child) as u64);
        let payload = blocks * message_size;
        let arrival = engine.send(root, child, payload, avail, engine.table.gap(payload), 0);
        scatter_subtree(engine, message_size, procs, child, i, arrival);
    }
}

/// Simulates a complete exchange: every rank sends a distinct block to every
/// other rank in rotated order, then pays `(P-1) * or(m)` of receive
/// processing after its last arrival.
pub fn simulate_alltoall(
    table: &ParamTable,
    procs: u32,
    message_size: u64,
    mode: AllToAllMode,
) -> Result<Timeline, ModelError> {
    check(procs, message_size)?;
    let occupancy = match mode {
        AllToAllMode::Serialized => table.gap(message_size),
        AllToAllMode::Overlapped => table.send_overhead(message_size),
    };
    let mut engine = Engine::new(table, procs);
    for round in 1..procs {
        for node in 0..procs {
            let target = (node + round) % procs;
            engine.send(node, target, message_size, 0.0, occupancy, 0);
        }
    }
    let recv_tail = (procs - 1) as f64 * table.recv_overhead(message_size);
    let per_node: Vec<f64> = engine.last_arrival.iter().map(|&a| a + recv_tail).collect();
    Ok(engine.finish(per_node))
}
