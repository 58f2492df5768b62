//! Accuracy measures for effort estimates.
//!
//! `actual` is always the observed effort (AE) and `estimated` the model
//! output (EE).
//!
//! * MRE is `|AE - EE| / |AE|`, relative to the actual value.
//! * MER is `|AE - EE| / |EE|`, relative to the estimate.
//! * PRED(N) is the percentage of observations with MRE at most N/100.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("length mismatch: {actual} actual values vs {estimated} estimates")]
    LengthMismatch { actual: usize, estimated: usize },
    #[error("empty input")]
    Empty,
    #[error("MRE undefined at index {0}")]
    MreUndefined(usize),
    #[error("MER undefined at index {0}")]
    MerUndefined(usize),
    #[error("R² undefined: {0}")]
    RSquaredUndefined(&'static str),
    #[error("PRED threshold must be positive")]
    BadThreshold,
    #[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Several(Vec<MetricError>),
}

/// Whether metrics were computed on min-max scaled values or original units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Normalized,
    Original,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Normalized => "normalized",
            Scale::Original => "original",
        })
    }
}

fn check_pair(actual: &[f64], estimated: &[f64]) -> Result<(), MetricError> {
    if actual.len() != estimated.len() {
        return Err(MetricError::LengthMismatch {
            actual: actual.len(),
            estimated: estimated.len(),
        });
    }
    if actual.is_empty() {
        return Err(MetricError::Empty);
    }
    Ok(())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Mean squared error.
pub fn mse(actual: &[f64], estimated: &[f64]) -> Result<f64, MetricError> {
    check_pair(actual, estimated)?;
    let sum: f64 = actual.iter().zip(estimated).map(|(a, e)| (a - e) * (a - e)).sum();
    Ok(sum / actual.len() as f64)
}

pub fn rmse(actual: &[f64], estimated: &[f64]) -> Result<f64, MetricError> {
    mse(actual, estimated).map(f64::sqrt)
}

/// Per-observation magnitude of relative error.
pub fn mre_each(actual: &[f64], estimated: &[f64]) -> Result<Vec<f64>, MetricError> {
    check_pair(actual, estimated)?;
    actual
        .iter()
        .zip(estimated)
        .enumerate()
        .map(|(i, (&a, &e))| {
            if a == 0.0 {
                Err(MetricError::MreUndefined(i))
            } else {
                Ok((a - e).abs() / a.abs())
            }
        })
        .collect()
}

/// Per-observation magnitude of error relative to the estimate.
pub fn mer_each(actual: &[f64], estimated: &[f64]) -> Result<Vec<f64>, MetricError> {
    check_pair(actual, estimated)?;
    actual
        .iter()
        .zip(estimated)
        .enumerate()
        .map(|(i, (&a, &e))| {
            if e == 0.0 {
                Err(MetricError::MerUndefined(i))
            } else {
                Ok((a - e).abs() / e.abs())
            }
        })
        .collect()
}

pub fn mmre(actual: &[f64], estimated: &[f64]) -> Result<f64, MetricError> {
    mre_each(actual, estimated).map(|m| mean(&m))
}

pub fn mmer(actual: &[f64], estimated: &[f64]) -> Result<f64, MetricError> {
    mer_each(actual, estimated).map(|m| mean(&m))
}

pub fn mdmer(actual: &[f64], estimated: &[f64]) -> Result<f64, MetricError> {
    mer_each(actual, estimated).and_then(|m| median(&m))
}

/// Median; for even lengths the mean of the two middle order statistics.
pub fn median(values: &[f64]) -> Result<f64, MetricError> {
    if values.is_empty() {
        return Err(MetricError::Empty);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    Ok(if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    })
}

/// Median of precomputed MREs.
pub fn mdmre(mres: &[f64]) -> Result<f64, MetricError> {
    median(mres)
}

/// Percentage (0..=100) of MREs at most `n_pct / 100`.
pub fn pred(n_pct: u32, mres: &[f64]) -> Result<f64, MetricError> {
    if n_pct == 0 {
        return Err(MetricError::BadThreshold);
    }
    if mres.is_empty() {
        return Err(MetricError::Empty);
    }
    let limit = f64::from(n_pct) / 100.0;
    let hits = mres.iter().filter(|&&m| m <= limit).count();
    Ok(100.0 * hits as f64 / mres.len() as f64)
}

/// Coefficient of determination `1 - SSE / SST`.
pub fn r_squared(actual: &[f64], estimated: &[f64]) -> Result<f64, MetricError> {
    check_pair(actual, estimated)?;
    if actual.len() < 2 {
        return Err(MetricError::RSquaredUndefined("fewer than two observations"));
    }
    let m = mean(actual);
    let sst: f64 = actual.iter().map(|a| (a - m) * (a - m)).sum();
    if sst == 0.0 {
        return Err(MetricError::RSquaredUndefined("actual values are constant"));
    }
    let sse: f64 = actual.iter().zip(estimated).map(|(a, e)| (a - e) * (a - e)).sum();
    Ok(1.0 - sse / sst)
}

/// Every accuracy measure for one set of predictions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub mse: f64,
    pub rmse: f64,
    pub mmre: f64,
    pub mmer: f64,
    pub mdmre: f64,
    pub mdmer: f64,
    pub pred8: f64,
    pub pred25: f64,
    pub r_squared: f64,
    pub n: usize,
    pub scale: Scale,
}

impl EvaluationReport {
    pub const CSV_HEADER: &'static str = "scale,n,mse,rmse,mmre,mmer,mdmre,mdmer,pred8,pred25,r_squared";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.scale,
            self.n,
            self.mse,
            self.rmse,
            self.mmre,
            self.mmer,
            self.mdmre,
            self.mdmer,
            self.pred8,
            self.pred25,
            self.r_squared
        )
    }
}

/// Computes the whole battery. Every failing sub-metric is reported.
pub fn evaluate_all(actual: &[f64], estimated: &[f64], scale: Scale) -> Result<EvaluationReport, MetricError> {
    check_pair(actual, estimated)?;
    let mut errors = Vec::new();
    fn keep(errors: &mut Vec<MetricError>, r: Result<f64, MetricError>) -> f64 {
        r.unwrap_or_else(|e| {
            errors.push(e);
            f64::NAN
        })
    }

    let mse_v = keep(&mut errors, mse(actual, estimated));
    let (mmre_v, mdmre_v, pred8, pred25) = match mre_each(actual, estimated) {
        Ok(mres) => (
            mean(&mres),
            keep(&mut errors, mdmre(&mres)),
            keep(&mut errors, pred(8, &mres)),
            keep(&mut errors, pred(25, &mres)),
        ),
        Err(e) => {
            errors.push(e);
            (f64::NAN, f64::NAN, f64::NAN, f64::NAN)
        }
    };
    let (mmer_v, mdmer_v) = match mer_each(actual, estimated) {
        Ok(mers) => (mean(&mers), keep(&mut errors, median(&mers))),
        Err(e) => {
            errors.push(e);
            (f64::NAN, f64::NAN)
        }
    };
    let r2 = keep(&mut errors, r_squared(actual, estimated));

    match errors.len() {
        0 => Ok(EvaluationReport {
            mse: mse_v,
            rmse: mse_v.sqrt(),
            mmre: mmre_v,
            mmer: mmer_v,
            mdmre: mdmre_v,
            mdmer: mdmer_v,
            pred8,
            pred25,
            r_squared: r2,
            n: actual.len(),
            scale,
        }),
        1 => Err(errors.remove(0)),
        _ => Err(MetricError::Several(errors)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mse_and_rmse() {
        assert_eq!(mse(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(mse(&[0.0, 2.0], &[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(rmse(&[0.0, 2.0], &[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(mse(&[], &[]).unwrap_err(), MetricError::Empty);
        assert!(matches!(
            mse(&[1.0], &[1.0, 2.0]),
            Err(MetricError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn relative_errors() {
        assert_eq!(
            mre_each(&[100.0, 50.0, 7.0], &[75.0, 60.0, 7.0]).unwrap(),
            vec![0.25, 0.2, 0.0]
        );
        assert_eq!(mer_each(&[100.0], &[80.0]).unwrap(), vec![0.25]);
        assert_eq!(
            mre_each(&[1.0, 0.0], &[1.0, 1.0]).unwrap_err().to_string(),
            "MRE undefined at index 1"
        );
        assert_eq!(
            mer_each(&[1.0, 1.0], &[0.0, 1.0]).unwrap_err().to_string(),
            "MER undefined at index 0"
        );
        assert_eq!(mmre(&[2.0, 3.0], &[2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(mmer(&[2.0, 3.0], &[2.0, 3.0]).unwrap(), 0.0);
        // MREs 0.1 and 0.3
        assert!((mmre(&[10.0, 10.0], &[11.0, 7.0]).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn medians() {
        assert_eq!(mdmre(&[0.3, 0.1, 0.2]).unwrap(), 0.2);
        assert!((mdmre(&[0.1, 0.3]).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(mdmre(&[]).unwrap_err(), MetricError::Empty);
        assert_eq!(mdmer(&[100.0, 10.0], &[100.0, 10.0]).unwrap(), 0.0);
    }

    #[test]
    fn pred_counts() {
        assert_eq!(pred(25, &[0.1, 0.2, 0.3, 0.5]).unwrap(), 50.0);
        assert_eq!(pred(8, &[0.05; 7]).unwrap(), 100.0);
        assert_eq!(pred(25, &[0.25]).unwrap(), 100.0);
        assert_eq!(pred(25, &[]).unwrap_err(), MetricError::Empty);
        assert_eq!(pred(0, &[0.1]).unwrap_err(), MetricError::BadThreshold);
    }

    #[test]
    fn r_squared_cases() {
        assert_eq!(r_squared(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 1.0);
        assert_eq!(r_squared(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]).unwrap(), 0.0);
        assert!(matches!(
            r_squared(&[1.0, 1.0], &[1.0, 2.0]),
            Err(MetricError::RSquaredUndefined(_))
        ));
    }

    #[test]
    fn perfect_predictions() {
        let a = [3.0, 1.0, 4.0, 1.5, 9.0];
        let r = evaluate_all(&a, &a, Scale::Original).unwrap();
        assert_eq!(
            (r.mse, r.rmse, r.mmre, r.mmer, r.mdmre, r.mdmer),
            (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
        );
        assert_eq!((r.pred8, r.pred25, r.r_squared, r.n), (100.0, 100.0, 1.0, 5));
    }

    #[test]
    fn errors_are_collected() {
        let err = evaluate_all(&[0.0, 1.0], &[0.0, 1.0], Scale::Normalized).unwrap_err();
        match err {
            MetricError::Several(v) => {
                assert_eq!(v, vec![MetricError::MreUndefined(0), MetricError::MerUndefined(0)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
