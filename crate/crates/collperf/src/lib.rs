//! Analytic performance toolkit for intra-cluster collective communications.
//!
//! Given a measured pLogP network signature (latency `L`, per-size gap `g(m)`
//! and send/receive overheads `os(m)`/`or(m)`), this crate predicts the
//! completion time of broadcast, scatter and all-to-all implementation
//! strategies, tunes message segment sizes, calibrates a contention factor
//! for the all-to-all bounds from observed runs, and picks the best strategy
//! per (process count, message size). A discrete-event schedule simulator
//! executes the same algorithms event by event and serves as an independent
//! cross-check of every closed form.

pub mod cli;
pub mod contention;
pub mod error;
pub mod model;
pub mod optimize;
pub mod params;
pub mod select;
pub mod sim;

pub use contention::{ContentionModel, GammaSource, Measurement, MeasurementSet};
pub use error::{ModelError, ParseError};
pub use model::{
    AllToAllVariant, BroadcastVariant, Family, Prediction, ScatterVariant, Strategy, Term,
};
pub use optimize::{SegmentSearchResult, SegmentedModel};
pub use params::{ParamRow, ParamTable, SegmentSpec};
pub use select::SelectionReport;
pub use sim::{AllToAllMode, Event, EventKind, Timeline, TreeShape};
