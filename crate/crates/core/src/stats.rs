//! Chi-squared tests used to check sampled outcomes against exact distributions.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{config, Result};

/// Minimum expected count per bin before bins are pooled.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

fn p_value(statistic: f64, dof: usize) -> Result<f64> {
    if dof == 0 {
        return Ok(1.0);
    }
    let dist = ChiSquared::new(dof as f64).map_err(|e| config(e.to_string()))?;
    Ok(dist.sf(statistic))
}

/// Goodness of fit of `observed` counts against `probs`. Bins with expected
/// count below [`MIN_EXPECTED`] are pooled, smallest first, until every
/// pooled bin reaches it.
pub fn goodness_of_fit(observed: &[u64], probs: &[f64]) -> Result<ChiSquareResult> {
    if observed.len() != probs.len() || observed.is_empty() {
        return Err(config("observed and expected must have the same non-zero length"));
    }
    let n: u64 = observed.iter().sum();
    if n == 0 {
        return Err(config("no observations"));
    }
    let total_p: f64 = probs.iter().sum();
    let mut bins: Vec<(f64, f64)> = observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| (o as f64, p / total_p * n as f64))
        .collect();
    bins.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (o, e) in bins {
        acc = (acc.0 + o, acc.1 + e);
        if acc.1 >= MIN_EXPECTED {
            pooled.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 || acc.0 > 0.0 {
        match pooled.last_mut() {
            Some(last) => *last = (last.0 + acc.0, last.1 + acc.1),
            None => pooled.push(acc),
        }
    }
    let mut statistic = 0.0;
    for &(o, e) in &pooled {
        if e > 0.0 {
            statistic += (o - e).powi(2) / e;
        } else if o > 0.0 {
            statistic = f64::INFINITY;
        }
    }
    let dof = pooled.len().saturating_sub(1);
    Ok(ChiSquareResult { statistic, dof, p_value: p_value(statistic, dof)? })
}

/// Pearson independence test on an `r × c` contingency table.
pub fn independence(table: &[Vec<u64>]) -> Result<ChiSquareResult> {
    let rows = table.len();
    let cols = table.first().map_or(0, Vec::len);
    if rows < 2 || cols < 2 || table.iter().any(|r| r.len() != cols) {
        return Err(config("contingency table must be rectangular and at least 2x2"));
    }
    let row_sums: Vec<f64> = table.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    let col_sums: Vec<f64> = (0..cols).map(|j| table.iter().map(|r| r[j]).sum::<u64>() as f64).collect();
    let n: f64 = row_sums.iter().sum();
    if n == 0.0 {
        return Err(config("no observations"));
    }
    let mut statistic = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, &o) in row.iter().enumerate() {
            let e = row_sums[i] * col_sums[j] / n;
            if e > 0.0 {
                statistic += (o as f64 - e).powi(2) / e;
            }
        }
    }
    let nonzero_rows = row_sums.iter().filter(|&&s| s > 0.0).count();
    let nonzero_cols = col_sums.iter().filter(|&&s| s > 0.0).count();
    let dof = nonzero_rows.saturating_sub(1) * nonzero_cols.saturating_sub(1);
    Ok(ChiSquareResult { statistic, dof, p_value: p_value(statistic, dof)? })
}
