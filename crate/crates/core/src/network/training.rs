use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{open_commitment, Network, Opening, Role, RoundOutcome, TrainingParams};
use crate::error::{Error, Result};
use crate::neuron::OutputKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightUpdate {
    pub receiver: usize,
    /// Source id, or `None` for the receiver's bias.
    pub source: Option<usize>,
    pub before: f64,
    pub after: f64,
}

/// Updates receiver weights once the sender's vote is opened.
///
/// A source whose forwarded list carried the opened bit on `id_set` gains
/// `eta`; any other source, including one that sent nothing, loses `eta`.
/// Weights stay in `[w_min, 1]`. A receiver's bias rises by `eta_bias` when
/// it stayed silent while another honest receiver echoed the opened bit, and
/// falls by `eta_bias` when it echoed the wrong bit.
pub fn train_step(
    net: &Network,
    outcome: &RoundOutcome,
    opening: Opening,
    params: &TrainingParams,
) -> Result<(Network, Vec<WeightUpdate>)> {
    if !open_commitment(&outcome.commitment, opening.bit, &opening.nonce) {
        return Err(Error::UnverifiedCommitment);
    }
    let bit = opening.bit;
    let id_set = &net.config.id_set;
    let mut next = net.clone();
    let mut updates = Vec::new();
    let consensus_elsewhere = outcome
        .receivers
        .iter()
        .any(|r| r.honest && r.output.echoed_bit() == Some(bit));

    for res in &outcome.receivers {
        let p = &mut next.participants[res.id];
        for (&source, w) in p.inbound.iter_mut() {
            let correct = res
                .inputs
                .iter()
                .find(|i| i.source == source)
                .is_some_and(|i| i.bits.matches(id_set, bit));
            let delta = if correct { params.eta } else { -params.eta };
            let after = (*w + delta).clamp(params.w_min, 1.0);
            if after != *w {
                updates.push(WeightUpdate { receiver: res.id, source: Some(source), before: *w, after });
                *w = after;
            }
        }
        let delta = match (res.output.kind, res.output.echoed_bit()) {
            (OutputKind::Silent, _) if consensus_elsewhere => params.eta_bias,
            (OutputKind::Echo, Some(b)) if b != bit => -params.eta_bias,
            _ => 0.0,
        };
        let after = (p.bias + delta).clamp(0.0, 1.0);
        if after != p.bias {
            updates.push(WeightUpdate { receiver: res.id, source: None, before: p.bias, after });
            p.bias = after;
        }
    }
    Ok((next, updates))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PruneReport {
    pub removed_edges: Vec<(usize, usize)>,
    pub inactivated: Vec<usize>,
}

/// Drops edges whose weight fell to `w_min` or below and deactivates
/// participants left without outbound edges, and receivers left without
/// inbound ones. Does nothing until `history` spans `silence_threshold`
/// rounds.
pub fn prune(net: &Network, history: &[RoundOutcome], params: &TrainingParams) -> (Network, PruneReport) {
    let mut next = net.clone();
    let mut report = PruneReport::default();
    if history.len() < params.silence_threshold {
        return (next, report);
    }
    for p in next.participants.iter_mut() {
        let weak: Vec<usize> = p
            .inbound
            .iter()
            .filter(|(_, &w)| w <= params.w_min)
            .map(|(&s, _)| s)
            .collect();
        for s in weak {
            p.inbound.remove(&s);
            next.edges.remove(&(s, p.id));
            report.removed_edges.push((s, p.id));
        }
    }
    let with_outbound: BTreeSet<usize> = next.edges.iter().map(|e| e.0).collect();
    for p in next.participants.iter_mut() {
        let orphan = match p.role {
            Role::Sender | Role::Distributor => !with_outbound.contains(&p.id),
            Role::Receiver => p.inbound.is_empty(),
        };
        if p.active && orphan {
            p.active = false;
            report.inactivated.push(p.id);
        }
    }
    (next, report)
}
