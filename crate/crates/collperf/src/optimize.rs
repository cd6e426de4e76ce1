//! Segment-size search for the segmented broadcast models.
//!
//! The search runs in two phases: a sweep over the power-of-two ladder
//! `s = m / 2^i` (each candidate rounded down to a multiple of the datatype
//! unit), then local hill climbing in steps of one unit from the sweep winner.
//! Ties always break toward the larger segment size, so results are
//! reproducible.

use crate::error::ModelError;
use crate::model::{self, BroadcastVariant, Prediction, Strategy};
use crate::params::{ParamTable, SegmentSpec};
use std::collections::HashMap;

/// The segmented cost models a search can optimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentedModel {
    FlatSegmented,
    Pipeline,
    BinomialSegmented,
}

impl SegmentedModel {
    pub fn strategy(&self) -> Strategy {
        match self {
            SegmentedModel::FlatSegmented => Strategy::Broadcast(BroadcastVariant::FlatSegmented),
            SegmentedModel::Pipeline => Strategy::Broadcast(BroadcastVariant::Pipeline),
            SegmentedModel::BinomialSegmented => {
                Strategy::Broadcast(BroadcastVariant::BinomialSegmented)
            }
        }
    }

    /// The segmented model behind a strategy, when it has one.
    pub fn for_strategy(strategy: Strategy) -> Option<SegmentedModel> {
        match strategy {
            Strategy::Broadcast(BroadcastVariant::FlatSegmented) => {
                Some(SegmentedModel::FlatSegmented)
            }
            Strategy::Broadcast(BroadcastVariant::Pipeline) => Some(SegmentedModel::Pipeline),
            Strategy::Broadcast(BroadcastVariant::BinomialSegmented) => {
                Some(SegmentedModel::BinomialSegmented)
            }
            _ => None,
        }
    }

    /// Evaluates the model at one segment spec.
    pub fn evaluate(
        &self,
        table: &ParamTable,
        procs: u32,
        message_size: u64,
        seg: SegmentSpec,
    ) -> Result<Prediction, ModelError> {
        match self {
            SegmentedModel::FlatSegmented => {
                model::bcast_flat_segmented(table, procs, message_size, seg)
            }
            SegmentedModel::Pipeline => model::bcast_pipeline(table, procs, message_size, seg),
            SegmentedModel::BinomialSegmented => {
                model::bcast_binomial_segmented(table, procs, message_size, seg)
            }
        }
    }
}

/// Outcome of a segment-size search.
#[derive(Debug, Clone)]
pub struct SegmentSearchResult {
    /// Minimizing segment spec (ties broken toward larger size).
    pub best: SegmentSpec,
    /// Predicted time at `best`, in seconds.
    pub time: f64,
    /// Number of model evaluations performed.
    pub evaluated: usize,
    /// Every evaluated (segment size, predicted time) pair, in evaluation order.
    pub trace: Vec<(u64, f64)>,
    /// Set when hill climbing ran out of its step budget while an improving
    /// neighbor still existed; the result is then the best seen so far.
    pub budget_exhausted: bool,
}

struct Search<'t> {
    model: SegmentedModel,
    table: &'t ParamTable,
    procs: u32,
    message_size: u64,
    unit: u64,
    cache: HashMap<u64, f64>,
    trace: Vec<(u64, f64)>,
    evaluated: usize,
}

impl<'t> Search<'t> {
    fn eval(&mut self, size: u64) -> Result<f64, ModelError> {
        if let Some(&t) = self.cache.get(&size) {
            return Ok(t);
        }
        let seg = SegmentSpec::new(self.message_size, size, self.unit)?;
        let time = self
            .model
            .evaluate(self.table, self.procs, self.message_size, seg)?
            .time;
        self.cache.insert(size, time);
        self.trace.push((size, time));
        self.evaluated += 1;
        Ok(time)
    }

    fn finish(self, best_size: u64, best_time: f64, budget_exhausted: bool) -> SegmentSearchResult {
        SegmentSearchResult {
            best: SegmentSpec::new(self.message_size, best_size, self.unit)
                .expect("best candidate is valid"),
            time: best_time,
            evaluated: self.evaluated,
            trace: self.trace,
            budget_exhausted,
        }
    }
}

fn check_search_inputs(procs: u32, message_size: u64, unit: u64) -> Result<(), ModelError> {
    if procs < 2 {
        return Err(ModelError::InvalidProcessCount(procs));
    }
    if message_size < 1 {
        return Err(ModelError::InvalidMessageSize);
    }
    if unit < 1 {
        return Err(ModelError::InvalidSegment("unit must be at least 1".into()));
    }
    if message_size < unit {
        return Err(ModelError::InvalidSegment(format!(
            "message size {message_size} is smaller than the datatype unit {unit}"
        )));
    }
    Ok(())
}

/// Power-of-two candidate sizes for a message: `m / 2^i` rounded down to a
/// multiple of `unit`, deduplicated, in decreasing order.
fn power_of_two_candidates(message_size: u64, unit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 0u32;
    while let Some(raw) = message_size.checked_shr(i) {
        if raw < unit {
            break;
        }
        let rounded = raw / unit * unit;
        if out.last() != Some(&rounded) {
            out.push(rounded);
        }
        i += 1;
    }
    out
}

/// Evaluates the model at every power-of-two candidate and returns the
/// minimizer, ties toward the larger size.
pub fn sweep_powers_of_two(
    model: SegmentedModel,
    table: &ParamTable,
    procs: u32,
    message_size: u64,
    unit: u64,
) -> Result<SegmentSearchResult, ModelError> {
    check_search_inputs(procs, message_size, unit)?;
    let mut search = Search {
        model,
        table,
        procs,
        message_size,
        unit,
        cache: HashMap::new(),
        trace: Vec::new(),
        evaluated: 0,
    };
    let mut best: Option<(u64, f64)> = None;
    // Candidates are generated in decreasing size order, so keeping the first
    // strict minimum breaks ties toward the larger segment.
    for size in power_of_two_candidates(message_size, unit) {
        let time = search.eval(size)?;
        if best.is_none_or(|(_, t)| time < t) {
            best = Some((size, time));
        }
    }
    let (size, time) = best.expect("at least one candidate since message_size >= unit");
    Ok(search.finish(size, time, false))
}

/// Local refinement: repeatedly steps the segment size by one unit toward a
/// strictly lower predicted time until no neighbor improves. The number of
/// accepted moves is capped at `10 * log2(m)`; on exhaustion the best size
/// seen so far is returned with `budget_exhausted` set.
pub fn hill_climb(
    model: SegmentedModel,
    table: &ParamTable,
    procs: u32,
    message_size: u64,
    unit: u64,
    start: SegmentSpec,
) -> Result<SegmentSearchResult, ModelError> {
    check_search_inputs(procs, message_size, unit)?;
    if start.unit != unit || start != SegmentSpec::new(message_size, start.size, unit)? {
        return Err(ModelError::InvalidSegment(format!(
            "start segment ({} x {}, unit {}) is not valid for message size {} and unit {}",
            start.size, start.count, start.unit, message_size, unit
        )));
    }
    let mut search = Search {
        model,
        table,
        procs,
        message_size,
        unit,
        cache: HashMap::new(),
        trace: Vec::new(),
        evaluated: 0,
    };

    let budget = (10.0 * (message_size as f64).log2()).ceil() as usize;
    let mut cur = start.size;
    let mut cur_time = search.eval(cur)?;
    let mut best = (cur, cur_time);
    let mut moves = 0usize;
    let mut budget_exhausted = false;

    loop {
        // Larger neighbor first so equal-time moves prefer the larger size.
        let mut next: Option<(u64, f64)> = None;
        for cand in [cur.checked_add(unit), cur.checked_sub(unit)]
            .into_iter()
            .flatten()
        {
            if cand < unit || cand > message_size {
                continue;
            }
            let t = search.eval(cand)?;
            if t < best.1 || (t == best.1 && cand > best.0) {
                best = (cand, t);
            }
            if t < cur_time && next.is_none_or(|(_, nt)| t < nt) {
                next = Some((cand, t));
            }
        }
        let Some((size, time)) = next else { break };
        if moves >= budget {
            budget_exhausted = true;
            break;
        }
        cur = size;
        cur_time = time;
        moves += 1;
    }
    Ok(search.finish(best.0, best.1, budget_exhausted))
}

/// Full search: power-of-two sweep, then hill climbing from the sweep winner.
/// The refined time is never worse than the sweep's.
pub fn optimize_segment(
    model: SegmentedModel,
    table: &ParamTable,
    procs: u32,
    message_size: u64,
    unit: u64,
) -> Result<SegmentSearchResult, ModelError> {
    let sweep = sweep_powers_of_two(model, table, procs, message_size, unit)?;
    let climb = hill_climb(model, table, procs, message_size, unit, sweep.best)?;
    let (best, time) = if climb.time < sweep.time
        || (climb.time == sweep.time && climb.best.size > sweep.best.size)
    {
        (climb.best, climb.time)
    } else {
        (sweep.best, sweep.time)
    };
    let mut trace = sweep.trace;
    trace.extend(&climb.trace);
    Ok(SegmentSearchResult {
        best,
        time,
        evaluated: sweep.evaluated + climb.evaluated,
        trace,
        budget_exhausted: climb.budget_exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::t0;

    #[test]
    fn candidates_follow_the_ladder() {
        assert_eq!(power_of_two_candidates(64, 1), vec![64, 32, 16, 8, 4, 2, 1]);
        assert_eq!(power_of_two_candidates(9, 1), vec![9, 4, 2, 1]);
        assert_eq!(power_of_two_candidates(10, 4), vec![8, 4]); // rounded down to unit
        assert_eq!(power_of_two_candidates(4, 4), vec![4]);
    }

    #[test]
    fn sweep_pipeline_finds_smallest_segment() {
        // On t0 the pipeline time is 7*(s+10) + (64/s - 1)*s = 70 + 6s + 64,
        // so the smallest candidate wins with time 140.
        let t = t0();
        let r = sweep_powers_of_two(SegmentedModel::Pipeline, &t, 8, 64, 1).unwrap();
        assert_eq!(r.best.size, 1);
        assert_eq!(r.best.count, 64);
        assert_eq!(r.time, 140.0);
        assert_eq!(r.evaluated, 7);
        assert_eq!(r.trace.len(), 7);
    }

    #[test]
    fn sweep_single_candidate_when_message_equals_unit() {
        let t = t0();
        let r = sweep_powers_of_two(SegmentedModel::Pipeline, &t, 4, 4, 4).unwrap();
        assert_eq!(r.best.size, 4);
        assert_eq!(r.best.count, 1);
        assert_eq!(r.evaluated, 1);
    }

    #[test]
    fn sweep_ties_break_to_larger_segment() {
        // On t0 g(s) = s, so flat segmented time is (P-1)*s*k + L with s*k == m
        // for every power-of-two candidate: all tie, the full message wins.
        let t = t0();
        let r = sweep_powers_of_two(SegmentedModel::FlatSegmented, &t, 4, 16, 1).unwrap();
        assert_eq!(r.best.size, 16);
        assert_eq!(r.time, 58.0); // 3*16 + 10
        let times: Vec<f64> = r.trace.iter().map(|&(_, t)| t).collect();
        assert!(times.iter().all(|&t| t == times[0]));
    }

    #[test]
    fn hill_climb_descends_to_global_minimum() {
        let t = t0();
        let start = SegmentSpec::new(64, 2, 1).unwrap();
        let r = hill_climb(SegmentedModel::Pipeline, &t, 8, 64, 1, start).unwrap();
        assert_eq!(r.best.size, 1);
        assert_eq!(r.time, 140.0);
        assert!(!r.budget_exhausted);
    }

    #[test]
    fn hill_climb_stays_at_minimum() {
        let t = t0();
        let start = SegmentSpec::new(64, 1, 1).unwrap();
        let r = hill_climb(SegmentedModel::Pipeline, &t, 8, 64, 1, start).unwrap();
        assert_eq!(r.best.size, 1);
        // Start plus its single legal neighbor (s = 2); s = 0 is out of range.
        assert_eq!(r.evaluated, 2);
        assert!(!r.budget_exhausted);
    }

    #[test]
    fn hill_climb_rejects_bad_start() {
        let t = t0();
        let start = SegmentSpec::new(64, 2, 2).unwrap();
        assert!(matches!(
            hill_climb(SegmentedModel::Pipeline, &t, 8, 64, 1, start),
            Err(ModelError::InvalidSegment(_))
        ));
    }

    #[test]
    fn optimize_never_loses_to_the_sweep() {
        let t = t0();
        for (p, m) in [(4u32, 24u64), (8, 64), (16, 100), (5, 17)] {
            let sweep = sweep_powers_of_two(SegmentedModel::Pipeline, &t, p, m, 1).unwrap();
            let full = optimize_segment(SegmentedModel::Pipeline, &t, p, m, 1).unwrap();
            assert!(full.time <= sweep.time);
            assert!(full.trace.iter().any(|&(s, _)| s == full.best.size));
            let min = full
                .trace
                .iter()
                .map(|&(_, t)| t)
                .fold(f64::INFINITY, f64::min);
            assert_eq!(full.time, min);
        }
    }

    #[test]
    fn trace_entries_reproduce_model_times() {
        let t = t0();
        let r = optimize_segment(SegmentedModel::Pipeline, &t, 8, 64, 1).unwrap();
        for &(s, recorded) in &r.trace {
            let seg = SegmentSpec::new(64, s, 1).unwrap();
            let again = SegmentedModel::Pipeline
                .evaluate(&t, 8, 64, seg)
                .unwrap()
                .time;
            assert_eq!(recorded, again);
        }
    }

    #[test]
    fn message_smaller_than_unit_rejected() {
        let t = t0();
        assert!(matches!(
            sweep_powers_of_two(SegmentedModel::Pipeline, &t, 4, 3, 4),
            Err(ModelError::InvalidSegment(_))
        ));
    }
}
