//! Strategy selection: evaluates every candidate implementation of a
//! collective for a given table, process count and message size, and ranks
//! them by predicted time. Segmented candidates are tuned with the segment
//! optimizer first. Ties break toward the simpler strategy in a fixed declared
//! order, so reports are deterministic.

use crate::contention::{self, ContentionModel};
use crate::error::ModelError;
use crate::model::{
    self, AllToAllVariant, BroadcastVariant, Family, Prediction, ScatterVariant, Strategy,
};
use crate::optimize::{self, SegmentedModel};
use crate::params::{ParamTable, SegmentSpec};

/// Ranked predictions for one (family, P, m) cell.
#[derive(Debug, Clone)]
pub struct SelectionReport {
    pub family: Family,
    pub procs: u32,
    pub message_size: u64,
    /// All evaluated candidates, ascending by time (ties by declared order).
    pub ranked: Vec<Prediction>,
    /// Notes that qualify the ranking (bound values, extrapolated parameters).
    pub caveats: Vec<String>,
}

impl SelectionReport {
    /// The minimum-time strategy.
    pub fn winner(&self) -> &Prediction {
        &self.ranked[0]
    }

    /// The winner's tuned segment, for segmented strategies.
    pub fn winner_segment(&self) -> Option<SegmentSpec> {
        self.ranked[0].segment
    }
}

/// The candidate sets the comparison methodology actually measures.
pub fn default_candidates(family: Family) -> Vec<Strategy> {
    match family {
        Family::Broadcast => vec![
            Strategy::Broadcast(BroadcastVariant::Flat),
            Strategy::Broadcast(BroadcastVariant::Chain),
            Strategy::Broadcast(BroadcastVariant::Binomial),
            Strategy::Broadcast(BroadcastVariant::Pipeline),
        ],
        Family::Scatter => vec![
            Strategy::Scatter(ScatterVariant::Flat),
            Strategy::Scatter(ScatterVariant::Chain),
            Strategy::Scatter(ScatterVariant::Binomial),
        ],
        Family::AllToAll => vec![
            Strategy::AllToAll(AllToAllVariant::LowerBound),
            Strategy::AllToAll(AllToAllVariant::UpperBound),
            Strategy::AllToAll(AllToAllVariant::Contended),
        ],
    }
}

/// Tie-break rank: simplest strategies first, then segmented, then rendezvous.
fn declared_order(strategy: Strategy) -> u8 {
    match strategy {
        Strategy::Broadcast(v) => match v {
            BroadcastVariant::Flat => 0,
            BroadcastVariant::Chain => 1,
            BroadcastVariant::Binomial => 2,
            BroadcastVariant::Binary => 3,
            BroadcastVariant::FlatSegmented => 4,
            BroadcastVariant::Pipeline => 5,
            BroadcastVariant::BinomialSegmented => 6,
            BroadcastVariant::FlatRendezvous => 7,
            BroadcastVariant::ChainRendezvous => 8,
            BroadcastVariant::BinomialRendezvous => 9,
        },
        Strategy::Scatter(v) => match v {
            ScatterVariant::Flat => 0,
            ScatterVariant::Chain => 1,
            ScatterVariant::Binomial => 2,
        },
        Strategy::AllToAll(v) => match v {
            AllToAllVariant::LowerBound => 0,
            AllToAllVariant::UpperBound => 1,
            AllToAllVariant::Contended => 2,
        },
    }
}

/// Evaluates one strategy directly. Segmented strategies require `seg`;
/// the contended all-to-all requires `gamma`.
pub fn evaluate(
    table: &ParamTable,
    strategy: Strategy,
    procs: u32,
    message_size: u64,
    seg: Option<SegmentSpec>,
    gamma: Option<&ContentionModel>,
) -> Result<Prediction, ModelError> {
    if strategy.is_segmented() && seg.is_none() {
        return Err(ModelError::InvalidSegment(format!(
            "strategy {strategy} requires a segment size"
        )));
    }
    if !strategy.is_segmented() && seg.is_some() {
        return Err(ModelError::InvalidSegment(format!(
            "strategy {strategy} does not take a segment size"
        )));
    }
    match strategy {
        Strategy::Broadcast(v) => match v {
            BroadcastVariant::Flat => model::bcast_flat(table, procs, message_size),
            BroadcastVariant::FlatRendezvous => {
                model::bcast_flat_rendezvous(table, procs, message_size)
            }
            BroadcastVariant::FlatSegmented => {
                model::bcast_flat_segmented(table, procs, message_size, seg.unwrap())
            }
            BroadcastVariant::Chain => model::bcast_chain(table, procs, message_size),
            BroadcastVariant::ChainRendezvous => {
                model::bcast_chain_rendezvous(table, procs, message_size)
            }
            BroadcastVariant::Pipeline => {
                model::bcast_pipeline(table, procs, message_size, seg.unwrap())
            }
            BroadcastVariant::Binary => model::bcast_binary(table, procs, message_size),
            BroadcastVariant::Binomial => model::bcast_binomial(table, procs, message_size),
            BroadcastVariant::BinomialRendezvous => {
                model::bcast_binomial_rendezvous(table, procs, message_size)
            }
            BroadcastVariant::BinomialSegmented => {
                model::bcast_binomial_segmented(table, procs, message_size, seg.unwrap())
            }
        },
        Strategy::Scatter(v) => match v {
            ScatterVariant::Flat => model::scatter_flat(table, procs, message_size),
            ScatterVariant::Chain => model::scatter_chain(table, procs, message_size),
            ScatterVariant::Binomial => model::scatter_binomial(table, procs, message_size),
        },
        Strategy::AllToAll(v) => match v {
            AllToAllVariant::LowerBound => model::alltoall_lower(table, procs, message_size),
            AllToAllVariant::UpperBound => model::alltoall_upper(table, procs, message_size),
            AllToAllVariant::Contended => {
                let model = gamma.ok_or(ModelError::GammaRequired)?;
                contention::predict_alltoall(table, procs, message_size, model)
            }
        },
    }
}

/// Evaluates every candidate (tuning the segment size for segmented variants)
/// and returns the full ranking.
pub fn select(
    table: &ParamTable,
    family: Family,
    procs: u32,
    message_size: u64,
    unit: u64,
    candidates: Option<&[Strategy]>,
    gamma: Option<&ContentionModel>,
) -> Result<SelectionReport, ModelError> {
    let default;
    let candidates = match candidates {
        Some(c) => c,
        None => {
            default = default_candidates(family);
            &default
        }
    };
    if candidates.is_empty() {
        return Err(ModelError::EmptyCandidates);
    }
    for c in candidates {
        if c.family() != family {
            return Err(ModelError::FamilyMismatch {
                strategy: c.to_string(),
                family: family.to_string(),
            });
        }
    }

    let mut ranked = Vec::with_capacity(candidates.len());
    for &strategy in candidates {
        let prediction = match SegmentedModel::for_strategy(strategy) {
            Some(segmented) => {
                let search =
                    optimize::optimize_segment(segmented, table, procs, message_size, unit)?;
                evaluate(
                    table,
                    strategy,
                    procs,
                    message_size,
                    Some(search.best),
                    gamma,
                )?
            }
            None => evaluate(table, strategy, procs, message_size, None, gamma)?,
        };
        ranked.push(prediction);
    }
    ranked.sort_by(|a, b| {
        a.time
            .total_cmp(&b.time)
            .then_with(|| declared_order(a.strategy).cmp(&declared_order(b.strategy)))
    });

    let mut caveats = Vec::new();
    for p in &ranked {
        if p.upper_bound {
            caveats.push(format!("{}: model value is an upper bound", p.strategy));
        }
        if p.extrapolated {
            caveats.push(format!(
                "{}: gap/overhead queried beyond the measured size range (extrapolated)",
                p.strategy
            ));
        }
    }

    Ok(SelectionReport {
        family,
        procs,
        message_size,
        ranked,
        caveats,
    })
}
