use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::NeuronConfig;
use crate::error::{config, Result};
use crate::qsim::BitString;

/// Closed-form target state of a receiver: the bias on `|0…0⟩` plus, for
/// each input, the sum of its pairwise weight products with every other
/// input carrying the same list.
///
/// Coefficients are scaled so that `b² + Σ_i Σ_{j≠i} δ(x_i,x_j)(w_i w_j)² = 1`
/// holds for the scaled bias and weight products.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealNeuronState {
    pub l: usize,
    /// Coefficients before scaling.
    pub raw: BTreeMap<BitString, f64>,
    /// Multiplier applied to every coefficient.
    pub scale: f64,
    /// Scaled `b² + Σ δ (w_i w_j)²`; 1 up to rounding.
    pub normalization: f64,
}

impl IdealNeuronState {
    pub fn coefficients(&self) -> BTreeMap<BitString, f64> {
        self.raw.iter().map(|(k, v)| (*k, v * self.scale)).collect()
    }

    pub fn coefficient(&self, pattern: &BitString) -> f64 {
        self.raw.get(pattern).copied().unwrap_or(0.0) * self.scale
    }

    /// Pattern with the largest coefficient magnitude; lowest pattern on ties.
    pub fn dominant_pattern(&self) -> Option<BitString> {
        self.raw
            .iter()
            .fold(None::<(BitString, f64)>, |best, (k, v)| match best {
                Some((_, bv)) if bv >= v.abs() => best,
                _ => Some((*k, v.abs())),
            })
            .map(|(k, _)| k)
    }
}

pub fn ideal_state(cfg: &NeuronConfig) -> Result<IdealNeuronState> {
    cfg.validate()?;
    let xs: Vec<BitString> = cfg
        .inputs
        .iter()
        .enumerate()
        .map(|(i, input)| {
            input
                .value
                .to_bits()
                .ok_or_else(|| config(format!("input {i} is not a basis list: {}", input.value)))
        })
        .collect::<Result<_>>()?;
    let ws: Vec<f64> = cfg.inputs.iter().map(|i| i.params.weight).collect();

    let zero = BitString::new(cfg.l, 0);
    let mut raw = BTreeMap::from([(zero, cfg.bias)]);
    let mut pair_sum = 0.0;
    for (i, xi) in xs.iter().enumerate() {
        for (j, xj) in xs.iter().enumerate() {
            // ⟨x_i|x_j⟩ and δ(x_i, x_j) coincide for basis states.
            if i != j && xi == xj {
                *raw.entry(*xi).or_insert(0.0) += ws[i] * ws[j];
                pair_sum += (ws[i] * ws[j]).powi(2);
            }
        }
    }
    let total = cfg.bias.powi(2) + pair_sum;
    if total <= 0.0 {
        return Err(config("ideal state is zero: bias is 0 and no two inputs coincide"));
    }
    let scale = 1.0 / total.sqrt();
    Ok(IdealNeuronState { l: cfg.l, raw, scale, normalization: total * scale * scale })
}
