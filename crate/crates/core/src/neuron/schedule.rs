use serde::{Deserialize, Serialize};

use crate::error::{config, Result};

/// Slack used when flooring `bias + z`, so that values that are integers in
/// exact arithmetic are not knocked down by rounding.
const FLOOR_SLACK: f64 = 1e-9;

/// Spreads at or below this are rounding noise from equal weights.
const SIGMA_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    /// Standard deviations of this weight above the mean weight.
    pub n_sigma: f64,
    /// Oracle + diffusion rounds for this input.
    pub reps: u32,
}

/// Per-input repetition counts for one neuron.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RepetitionSchedule {
    pub entries: Vec<ScheduleEntry>,
}

impl RepetitionSchedule {
    /// Schedule with the given counts and zero z-scores.
    pub fn from_reps(reps: &[u32]) -> Self {
        Self {
            entries: reps.iter().map(|&reps| ScheduleEntry { n_sigma: 0.0, reps }).collect(),
        }
    }

    pub fn reps(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.reps).collect()
    }

    pub fn n_sigma(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.n_sigma).collect()
    }

    pub fn total_reps(&self) -> u64 {
        self.entries.iter().map(|e| u64::from(e.reps)).sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Repetitions from weights: `reps_i = clamp(⌊bias + N_i⌋, 0, cap)` with
/// `N_i = (w_i − mean) / σ` and `σ` the population standard deviation over
/// the weights. Zero spread gives `N_i = 0`. A lone weight of exactly 1 is
/// not applied at all.
pub fn repetition_schedule(weights: &[f64], bias: f64, cap: Option<u32>) -> Result<RepetitionSchedule> {
    if weights.is_empty() {
        return Err(config("repetition schedule needs at least one weight"));
    }
    if let Some(w) = weights.iter().find(|&&w| !(w > 0.0 && w <= 1.0)) {
        return Err(config(format!("weight {w} outside (0, 1]")));
    }
    check_bias(bias)?;

    if weights.len() == 1 && weights[0] == 1.0 {
        return Ok(RepetitionSchedule { entries: vec![ScheduleEntry { n_sigma: 0.0, reps: 0 }] });
    }

    let n = weights.len() as f64;
    let mean = weights.iter().sum::<f64>() / n;
    let sigma = (weights.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / n).sqrt();

    let entries = weights
        .iter()
        .map(|&w| {
            let n_sigma = if sigma > SIGMA_FLOOR { (w - mean) / sigma } else { 0.0 };
            let raw = (bias + n_sigma + FLOOR_SLACK).floor();
            let mut reps = if raw <= 0.0 { 0 } else { raw as u32 };
            if let Some(cap) = cap {
                reps = reps.min(cap);
            }
            ScheduleEntry { n_sigma, reps }
        })
        .collect();
    Ok(RepetitionSchedule { entries })
}

pub(crate) fn check_bias(bias: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&bias) {
        return Err(config(format!("bias {bias} outside [0, 1]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lone_unit_weight_is_not_applied() {
        for bias in [0.0, 0.5, 1.0] {
            assert_eq!(repetition_schedule(&[1.0], bias, None).unwrap().reps(), vec![0]);
        }
    }

    #[test]
    fn equal_weights_use_bias_only() {
        let s = repetition_schedule(&[0.5, 0.5, 0.5], 0.9, None).unwrap();
        assert_eq!(s.n_sigma(), vec![0.0; 3]);
        assert_eq!(s.reps(), vec![0, 0, 0]);
        let s = repetition_schedule(&[0.25; 4], 1.0, None).unwrap();
        assert_eq!(s.reps(), vec![1; 4]);
    }

    #[test]
    fn worked_z_scores() {
        // mean 2/3, population sigma sqrt(1/18) = 0.2357
        let s = repetition_schedule(&[0.5, 0.5, 1.0], 1.0, None).unwrap();
        let n = s.n_sigma();
        let r = 1.0 / 2f64.sqrt();
        assert!((n[0] + r).abs() < 1e-12 && (n[1] + r).abs() < 1e-12);
        assert!((n[2] - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(s.reps(), vec![0, 0, 2]);
        assert_eq!(s.total_reps(), 2);
    }

    #[test]
    fn equal_weights_with_rounding_noise() {
        let s = repetition_schedule(&[1.0 / 7.0; 7], 1.0, None).unwrap();
        assert_eq!(s.reps(), vec![1; 7]);
        assert_eq!(s.n_sigma(), vec![0.0; 7]);
    }

    #[test]
    fn cap_clamps() {
        let s = repetition_schedule(&[0.5, 0.5, 1.0], 1.0, Some(1)).unwrap();
        assert_eq!(s.reps(), vec![0, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(repetition_schedule(&[], 0.5, None).is_err());
        assert!(repetition_schedule(&[0.0, 0.5], 0.5, None).is_err());
        assert!(repetition_schedule(&[1.2], 0.5, None).is_err());
        assert!(repetition_schedule(&[0.5], 1.5, None).is_err());
        assert!(repetition_schedule(&[0.5], -0.1, None).is_err());
    }
}
