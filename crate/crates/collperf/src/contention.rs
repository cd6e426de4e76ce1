//! All-to-all contention prediction.
//!
//! The completion time of a contended exchange is modelled as a linear blend
//! of the two bounds, `T = Lower + (Upper - Lower) * gamma`. The factor gamma
//! is a dimensionless signature of the network: it can be fixed (the classic
//! Ethernet value is 2/5) or fitted to observed completion times by least
//! squares on the blend equation. The older shared-network linear model
//! `T = l + b * gamma / W` is provided as a standalone utility.

use crate::error::{ModelError, ParseError};
use crate::model::{self, AllToAllVariant, Prediction, Strategy, Term};
use crate::params::{positive, ParamTable};

/// Where a contention factor came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaSource {
    Fixed,
    Fitted,
}

/// A contention factor with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ContentionModel {
    /// Blend factor; 0 reproduces the lower bound, 1 the upper bound.
    pub gamma: f64,
    pub source: GammaSource,
    /// Root-mean-square error of the fit in seconds, when fitted.
    pub fit_residual: Option<f64>,
    /// Number of measurements that informed the fit.
    pub sample_count: usize,
}

impl ContentionModel {
    /// A fixed, externally supplied factor.
    pub fn fixed(gamma: f64) -> Self {
        ContentionModel {
            gamma,
            source: GammaSource::Fixed,
            fit_residual: None,
            sample_count: 0,
        }
    }

    /// A fitted gamma outside [0, 1] is diagnostic evidence that the linear
    /// blend does not describe the network; it is reported, never clamped.
    pub fn gamma_out_of_range(&self) -> bool {
        !(0.0..=1.0).contains(&self.gamma)
    }
}

/// One observed all-to-all completion time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub procs: u32,
    pub message_size: u64,
    /// Observed completion time in seconds (averaged upstream).
    pub observed: f64,
}

/// Observed completion times keyed by (process count, message size).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MeasurementSet {
    pub entries: Vec<Measurement>,
}

impl MeasurementSet {
    /// Parses the plain-text measurement format: one `<P> <m_bytes>
    /// <observed_seconds>` triple per line, `#` comments and blank lines
    /// ignored.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(ParseError::at(
                    lineno,
                    "expected `<P> <m_bytes> <observed_seconds>`",
                ));
            }
            let procs: u32 = fields[0]
                .parse()
                .map_err(|_| ParseError::at(lineno, "process count is not an integer"))?;
            let message_size: u64 = fields[1]
                .parse()
                .map_err(|_| ParseError::at(lineno, "message size is not an integer"))?;
            let observed: f64 = fields[2]
                .parse()
                .map_err(|_| ParseError::at(lineno, "observed time is not a number"))?;
            if procs < 2 {
                return Err(ParseError::at(lineno, "process count must be at least 2"));
            }
            if message_size < 1 {
                return Err(ParseError::at(lineno, "message size must be at least 1"));
            }
            if !positive(observed) {
                return Err(ParseError::at(lineno, "observed time must be positive"));
            }
            entries.push(Measurement {
                procs,
                message_size,
                observed,
            });
        }
        Ok(MeasurementSet { entries })
    }
}

/// Predicts a contended all-to-all completion as the blend of the two bounds.
/// The endpoints gamma = 0 and gamma = 1 return the bound values exactly.
pub fn predict_alltoall(
    table: &ParamTable,
    procs: u32,
    message_size: u64,
    model: &ContentionModel,
) -> Result<Prediction, ModelError> {
    let lower = model::alltoall_lower(table, procs, message_size)?;
    let upper = model::alltoall_upper(table, procs, message_size)?;
    let span = upper.time - lower.time;
    let gamma = model.gamma;
    let terms = vec![
        Term {
            label: "lower_bound",
            seconds: lower.time,
        },
        Term {
            label: "contention",
            seconds: span * gamma,
        },
    ];
    let time = if gamma == 0.0 {
        lower.time
    } else if gamma == 1.0 {
        upper.time
    } else {
        lower.time + span * gamma
    };
    Ok(Prediction {
        strategy: Strategy::AllToAll(AllToAllVariant::Contended),
        procs,
        message_size,
        segment: None,
        time,
        terms,
        upper_bound: false,
        extrapolated: lower.extrapolated || upper.extrapolated,
        gamma: Some(gamma),
    })
}

/// Fits gamma to a measurement set by closed-form least squares on the blend
/// equation. Entries whose bounds coincide carry no information about gamma
/// and are skipped.
pub fn fit_gamma(table: &ParamTable, set: &MeasurementSet) -> Result<ContentionModel, ModelError> {
    if set.entries.is_empty() {
        return Err(ModelError::EmptyMeasurements);
    }
    let mut numerator = 0.0f64;
    let mut denominator = 0.0f64;
    let mut used: Vec<(f64, f64, f64)> = Vec::new(); // (lower, span, observed)
    for e in &set.entries {
        if !positive(e.observed) {
            return Err(ModelError::InvalidMeasurement(format!(
                "observed time {} for (P={}, m={}) is not positive",
                e.observed, e.procs, e.message_size
            )));
        }
        let lower = model::alltoall_lower(table, e.procs, e.message_size)?.time;
        let upper = model::alltoall_upper(table, e.procs, e.message_size)?.time;
        let span = upper - lower;
        if span <= 0.0 {
            continue;
        }
        numerator += (e.observed - lower) * span;
        denominator += span * span;
        used.push((lower, span, e.observed));
    }
    if used.is_empty() {
        return Err(ModelError::DegenerateMeasurements);
    }
    let gamma = numerator / denominator;
    let sum_sq: f64 = used
        .iter()
        .map(|&(lower, span, observed)| {
            let r = observed - (lower + gamma * span);
            r * r
        })
        .sum();
    let residual = (sum_sq / used.len() as f64).sqrt();
    Ok(ContentionModel {
        gamma,
        source: GammaSource::Fitted,
        fit_residual: Some(residual),
        sample_count: used.len(),
    })
}

/// The reference shared-network linear model `T = l + b * gamma / W`, with
/// link latency `l` (seconds), message size `b` (bytes), bandwidth `W`
/// (bytes/second) and contention factor `gamma`.
pub fn linear_contention_time(
    latency: f64,
    bytes: f64,
    bandwidth: f64,
    gamma: f64,
) -> Result<f64, ModelError> {
    if !positive(bandwidth) {
        return Err(ModelError::InvalidBandwidth);
    }
    Ok(latency + bytes * gamma / bandwidth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::t0;

    #[test]
    fn blend_with_fitted_ethernet_factor() {
        // Lower = 34, Upper = 46 on t0 at P=4, m=8; gamma = 2/5 lands at 38.8.
        let t = t0();
        let p = predict_alltoall(&t, 4, 8, &ContentionModel::fixed(0.4)).unwrap();
        assert!((p.time - 38.8).abs() < 1e-12);
        assert_eq!(p.gamma, Some(0.4));
    }

    #[test]
    fn blend_endpoints_are_the_bounds() {
        let t = t0();
        for (procs, m) in [(2u32, 1u64), (4, 8), (24, 10)] {
            let lower = model::alltoall_lower(&t, procs, m).unwrap().time;
            let upper = model::alltoall_upper(&t, procs, m).unwrap().time;
            assert_eq!(
                predict_alltoall(&t, procs, m, &ContentionModel::fixed(0.0))
                    .unwrap()
                    .time,
                lower
            );
            assert_eq!(
                predict_alltoall(&t, procs, m, &ContentionModel::fixed(1.0))
                    .unwrap()
                    .time,
                upper
            );
        }
    }

    #[test]
    fn blend_monotone_in_gamma() {
        let t = t0();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=10 {
            let gamma = i as f64 / 10.0;
            let p = predict_alltoall(&t, 6, 100, &ContentionModel::fixed(gamma)).unwrap();
            assert!(p.time >= prev);
            prev = p.time;
        }
    }

    #[test]
    fn fit_recovers_planted_factor_exactly() {
        let t = t0();
        let mut entries = Vec::new();
        for procs in [2u32, 4, 8, 16] {
            for m in [64u64, 1024] {
                let lower = model::alltoall_lower(&t, procs, m).unwrap().time;
                let upper = model::alltoall_upper(&t, procs, m).unwrap().time;
                entries.push(Measurement {
                    procs,
                    message_size: m,
                    observed: lower + 0.4 * (upper - lower),
                });
            }
        }
        let fit = fit_gamma(&t, &MeasurementSet { entries }).unwrap();
        assert!((fit.gamma - 0.4).abs() <= 1e-12);
        assert!(fit.fit_residual.unwrap() <= 1e-12);
        assert_eq!(fit.sample_count, 8);
        assert_eq!(fit.source, GammaSource::Fitted);
        assert!(!fit.gamma_out_of_range());
    }

    #[test]
    fn fit_observed_at_lower_gives_zero() {
        let t = t0();
        let entries = [(4u32, 64u64), (8, 256)]
            .into_iter()
            .map(|(procs, m)| Measurement {
                procs,
                message_size: m,
                observed: model::alltoall_lower(&t, procs, m).unwrap().time,
            })
            .collect();
        let fit = fit_gamma(&t, &MeasurementSet { entries }).unwrap();
        assert_eq!(fit.gamma, 0.0);
    }

    #[test]
    fn fit_rejects_empty_and_degenerate_sets() {
        let t = t0();
        assert_eq!(
            fit_gamma(&t, &MeasurementSet::default()).unwrap_err(),
            ModelError::EmptyMeasurements
        );
        // A table with g == os everywhere makes Upper == Lower at every size.
        let flat = crate::params::ParamTable::from_parts(
            10.0,
            vec![
                crate::params::ParamRow::new(1, 1.0, 1.0, 0.5),
                crate::params::ParamRow::new(1000, 1000.0, 1000.0, 500.0),
            ],
        )
        .unwrap();
        let set = MeasurementSet {
            entries: vec![Measurement {
                procs: 4,
                message_size: 8,
                observed: 50.0,
            }],
        };
        assert_eq!(
            fit_gamma(&flat, &set).unwrap_err(),
            ModelError::DegenerateMeasurements
        );
    }

    #[test]
    fn fit_invariant_under_time_unit_change() {
        let t = t0();
        let entries: Vec<Measurement> = [(4u32, 64u64), (8, 128), (16, 512)]
            .into_iter()
            .map(|(procs, m)| {
                let lower = model::alltoall_lower(&t, procs, m).unwrap().time;
                let upper = model::alltoall_upper(&t, procs, m).unwrap().time;
                Measurement {
                    procs,
                    message_size: m,
                    observed: lower + 0.3 * (upper - lower),
                }
            })
            .collect();
        let base = fit_gamma(
            &t,
            &MeasurementSet {
                entries: entries.clone(),
            },
        )
        .unwrap();
        let scaled_set = MeasurementSet {
            entries: entries
                .iter()
                .map(|e| Measurement {
                    observed: e.observed * 1e-3,
                    ..*e
                })
                .collect(),
        };
        let scaled = fit_gamma(&t.scaled(1e-3), &scaled_set).unwrap();
        assert!((base.gamma - scaled.gamma).abs() <= 1e-12);
    }

    #[test]
    fn measurement_parsing() {
        let set = MeasurementSet::parse("# obs\n4 1024 3.5e-3\n8 1024 9e-3\n").unwrap();
        assert_eq!(set.entries.len(), 2);
        assert_eq!(set.entries[0].procs, 4);
        assert!(MeasurementSet::parse("4 1024\n").is_err());
        assert!(MeasurementSet::parse("1 1024 3e-3\n").is_err());
        assert!(MeasurementSet::parse("4 1024 -1\n").is_err());
    }

    #[test]
    fn linear_model_examples() {
        let t = linear_contention_time(0.001, 1e6, 12.5e6, 8.0).unwrap();
        assert!((t - 0.641).abs() < 1e-12);
        assert_eq!(linear_contention_time(0.002, 0.0, 1e6, 3.0).unwrap(), 0.002);
        let plain = linear_contention_time(0.001, 5e5, 1e6, 1.0).unwrap();
        assert!((plain - 0.501).abs() < 1e-12);
        assert_eq!(
            linear_contention_time(0.001, 1.0, 0.0, 1.0).unwrap_err(),
            ModelError::InvalidBandwidth
        );
    }
}
