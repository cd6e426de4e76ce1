//! Measured pLogP network signature: end-to-end latency plus per-size rows of
//! gap and send/receive overheads, queried at arbitrary message sizes through
//! piecewise-linear interpolation.
//!
//! The gap `g(m)` is the minimum interval between consecutive transmissions of
//! `m`-byte messages on one link; `os(m)`/`or(m)` are the CPU-side send and
//! receive overheads. All times are seconds. Tables are immutable once built,
//! so they can be shared freely across threads; every query is pure.

use crate::error::{ModelError, ParseError};

/// Positive, finite seconds; NaN and infinities are measurement garbage.
pub(crate) fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// One measured row: a message size with its gap and overheads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRow {
    /// Message size in bytes (>= 1).
    pub size: u64,
    /// Gap g(size) in seconds.
    pub gap: f64,
    /// Send overhead os(size) in seconds.
    pub send_overhead: f64,
    /// Receive overhead or(size) in seconds.
    pub recv_overhead: f64,
}

impl ParamRow {
    pub fn new(size: u64, gap: f64, send_overhead: f64, recv_overhead: f64) -> Self {
        ParamRow {
            size,
            gap,
            send_overhead,
            recv_overhead,
        }
    }

    fn validate(&self) -> Result<(), String> {
        if self.size < 1 {
            return Err("message size must be at least 1".into());
        }
        if !positive(self.gap) {
            return Err("gap must be positive".into());
        }
        if !positive(self.send_overhead) {
            return Err("send overhead must be positive".into());
        }
        if !positive(self.recv_overhead) {
            return Err("receive overhead must be positive".into());
        }
        if self.gap < self.send_overhead {
            return Err("gap smaller than send overhead".into());
        }
        if self.gap < self.recv_overhead {
            return Err("gap smaller than receive overhead".into());
        }
        Ok(())
    }
}

/// A validated pLogP parameter table.
///
/// Invariants enforced on construction: latency > 0, at least two rows, rows
/// strictly increasing in size, a size-1 row present (the rendezvous models
/// need `g(1)`), and per-row `g >= os`, `g >= or`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamTable {
    latency: f64,
    rows: Vec<ParamRow>,
}

impl ParamTable {
    /// Builds a table from already-parsed parts, checking every invariant.
    pub fn from_parts(latency: f64, rows: Vec<ParamRow>) -> Result<Self, ParseError> {
        if !positive(latency) {
            return Err(ParseError::Invalid("latency must be positive".into()));
        }
        if rows.len() < 2 {
            return Err(ParseError::Invalid(
                "parameter table needs at least 2 rows".into(),
            ));
        }
        for (i, row) in rows.iter().enumerate() {
            row.validate()
                .map_err(|m| ParseError::Invalid(format!("row {}: {m}", i + 1)))?;
            if i > 0 && row.size <= rows[i - 1].size {
                return Err(ParseError::Invalid(format!(
                    "row {}: non-increasing message size",
                    i + 1
                )));
            }
        }
        if rows[0].size != 1 {
            return Err(ParseError::Invalid(
                "parameter table needs a row for message size 1".into(),
            ));
        }
        Ok(ParamTable { latency, rows })
    }

    /// Parses the plain-text parameter format.
    ///
    /// First non-comment line: `L <seconds>`. Every following non-comment line:
    /// `<size_bytes> <gap_s> <send_overhead_s> <recv_overhead_s>`. Lines
    /// starting with `#` and blank lines are ignored. Scientific notation is
    /// accepted everywhere.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut latency: Option<(usize, f64)> = None;
        let mut rows: Vec<(usize, ParamRow)> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if latency.is_none() {
                if fields.len() != 2 || fields[0] != "L" {
                    return Err(ParseError::at(
                        lineno,
                        "expected latency line `L <seconds>`",
                    ));
                }
                let l: f64 = fields[1]
                    .parse()
                    .map_err(|_| ParseError::at(lineno, "latency is not a number"))?;
                if !positive(l) {
                    return Err(ParseError::at(lineno, "latency must be positive"));
                }
                latency = Some((lineno, l));
                continue;
            }
            if fields.len() != 4 {
                return Err(ParseError::at(
                    lineno,
                    "expected `<size> <gap> <send_overhead> <recv_overhead>`",
                ));
            }
            let size: u64 = fields[0]
                .parse()
                .map_err(|_| ParseError::at(lineno, "message size is not a positive integer"))?;
            let mut vals = [0.0f64; 3];
            for (v, f) in vals.iter_mut().zip(&fields[1..]) {
                *v = f
                    .parse()
                    .map_err(|_| ParseError::at(lineno, format!("`{f}` is not a number")))?;
            }
            let row = ParamRow::new(size, vals[0], vals[1], vals[2]);
            row.validate().map_err(|m| ParseError::at(lineno, m))?;
            if let Some((_, prev)) = rows.last() {
                if row.size <= prev.size {
                    return Err(ParseError::at(lineno, "non-increasing message size"));
                }
            }
            rows.push((lineno, row));
        }

        let (_, latency) = latency
            .ok_or_else(|| ParseError::Invalid("missing latency line `L <seconds>`".into()))?;
        ParamTable::from_parts(latency, rows.into_iter().map(|(_, r)| r).collect())
    }

    /// End-to-end latency L in seconds.
    pub fn latency(&self) -> f64 {
        self.latency
    }

    /// The measured rows, strictly increasing in size.
    pub fn rows(&self) -> &[ParamRow] {
        &self.rows
    }

    /// Largest measured message size; queries above it extrapolate.
    pub fn max_measured_size(&self) -> u64 {
        self.rows.last().expect("table has rows").size
    }

    /// True when a query at `size` falls beyond the measured range and is
    /// answered by extending the final interval's per-byte slope.
    pub fn is_extrapolated(&self, size: u64) -> bool {
        size > self.max_measured_size()
    }

    /// Gap g(size) in seconds. Exact at measured rows, piecewise-linear in
    /// between, last-interval slope beyond the largest row.
    pub fn gap(&self, size: u64) -> f64 {
        self.value_at(size, |r| r.gap)
    }

    /// Send overhead os(size) in seconds; same interpolation as [`gap`](Self::gap).
    pub fn send_overhead(&self, size: u64) -> f64 {
        self.value_at(size, |r| r.send_overhead)
    }

    /// Receive overhead or(size) in seconds; same interpolation as [`gap`](Self::gap).
    pub fn recv_overhead(&self, size: u64) -> f64 {
        self.value_at(size, |r| r.recv_overhead)
    }

    /// Returns a copy with latency, gaps and overheads all multiplied by `c`
    /// (a time-unit change). `c` must be positive.
    pub fn scaled(&self, c: f64) -> ParamTable {
        assert!(c > 0.0, "scale factor must be positive");
        ParamTable {
            latency: self.latency * c,
            rows: self
                .rows
                .iter()
                .map(|r| ParamRow::new(r.size, r.gap * c, r.send_overhead * c, r.recv_overhead * c))
                .collect(),
        }
    }

    fn value_at(&self, size: u64, col: fn(&ParamRow) -> f64) -> f64 {
        assert!(size >= 1, "parameter query at size 0");
        let rows = &self.rows;
        match rows.binary_search_by(|r| r.size.cmp(&size)) {
            Ok(i) => col(&rows[i]),
            // Below the smallest row: clamp to it (the size-1 row, which the
            // invariants require, so this only triggers for size == 1 hits above).
            Err(0) => col(&rows[0]),
            Err(i) if i == rows.len() => {
                // Beyond the measured range: continue the last interval's slope.
                lerp(&rows[i - 2], &rows[i - 1], size, col)
            }
            Err(i) => lerp(&rows[i - 1], &rows[i], size, col),
        }
    }
}

fn lerp(lo: &ParamRow, hi: &ParamRow, size: u64, col: fn(&ParamRow) -> f64) -> f64 {
    let x0 = lo.size as f64;
    let x1 = hi.size as f64;
    let y0 = col(lo);
    let y1 = col(hi);
    y0 + (size as f64 - x0) * (y1 - y0) / (x1 - x0)
}

/// A message split into `count` segments of `size` bytes, where `size` is a
/// positive multiple of the basic-datatype `unit`. The final segment may be
/// short but is charged the full per-segment gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentSpec {
    /// Segment size in bytes.
    pub size: u64,
    /// Segment count, `ceil(message_size / size)`.
    pub count: u64,
    /// Basic-datatype size in bytes.
    pub unit: u64,
}

impl SegmentSpec {
    /// Builds a segment spec for a message of `message_size` bytes.
    pub fn new(message_size: u64, size: u64, unit: u64) -> Result<Self, ModelError> {
        if unit < 1 {
            return Err(ModelError::InvalidSegment("unit must be at least 1".into()));
        }
        if message_size < 1 {
            return Err(ModelError::InvalidMessageSize);
        }
        if size < 1 {
            return Err(ModelError::InvalidSegment(
                "segment size must be at least 1".into(),
            ));
        }
        if !size.is_multiple_of(unit) {
            return Err(ModelError::InvalidSegment(format!(
                "segment size {size} is not a multiple of unit {unit}"
            )));
        }
        if size > message_size {
            return Err(ModelError::InvalidSegment(format!(
                "segment size {size} exceeds message size {message_size}"
            )));
        }
        Ok(SegmentSpec {
            size,
            count: message_size.div_ceil(size),
            unit,
        })
    }

    /// The whole message as a single segment.
    pub fn whole(message_size: u64, unit: u64) -> Result<Self, ModelError> {
        SegmentSpec::new(message_size, message_size, unit)
    }
}
