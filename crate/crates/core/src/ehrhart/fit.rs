use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// The exponent `(d-1)(d-2)/(2d-3)` of the error bound for `d ≥ 2`; zero
/// below.
pub fn target_error_exponent(d: usize) -> f64 {
    if d < 2 {
        return 0.0;
    }
    let d = d as f64;
    (d - 1.0) * (d - 2.0) / (2.0 * d - 3.0)
}

/// Least-squares slope of `log E(t)` against `log t`, where `E` is the
/// running maximum of the nonzero errors.
///
/// Rows are `(t, |error|)` with `t` strictly increasing and positive; at
/// least eight rows are required.
pub fn fit_error_exponent(rows: &[(f64, f64)]) -> Result<f64> {
    if rows.len() < 8 {
        return Err(Error::InsufficientData(format!(
            "need at least 8 rows, got {}",
            rows.len()
        )));
    }
    if !rows.windows(2).all(|w| w[0].0 < w[1].0) || rows[0].0.is_nan() || rows[0].0 <= 0.0 {
        return Err(Error::InvalidArgument(
            "t must be positive and strictly increasing".into(),
        ));
    }
    let mut envelope = 0.0f64;
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|&&(_, e)| e > 0.0)
        .map(|&(t, e)| {
            envelope = envelope.max(e);
            (libm::log(t), libm::log(envelope))
        })
        .collect();
    if points.len() < 2 {
        return Err(Error::InsufficientData(
            "fewer than two nonzero errors".into(),
        ));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}
