use crate::{Error, Result};

/// `log sum_i w_i exp(v_i)`, shifted by the largest `v_i` so that nothing
/// overflows or underflows before the final logarithm.
pub fn log_sum_exp(values: &[f64], weights: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::domain("log_sum_exp of an empty list"));
    }
    if values.len() != weights.len() {
        return Err(Error::domain(format!(
            "log_sum_exp: {} values but {} weights",
            values.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0)) {
        return Err(Error::domain(format!(
            "log_sum_exp: weight {w} is not positive"
        )));
    }
    if values.len() == 1 {
        return Ok(values[0] + weights[0].ln());
    }
    Ok(log_sum_exp_unchecked(
        values.iter().copied().zip(weights.iter().copied()),
    ))
}

/// Stable log-sum-exp over `(value, weight)` pairs; weights assumed positive.
pub(crate) fn log_sum_exp_unchecked(terms: impl Iterator<Item = (f64, f64)> + Clone) -> f64 {
    let max = terms
        .clone()
        .map(|(v, _)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    let sum: f64 = terms.map(|(v, w)| w * (v - max).exp()).sum();
    max + sum.ln()
}
