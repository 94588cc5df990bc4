//! Sender / distributor / receiver network for detectable Byzantine agreement.
//!
//! Participant ids: 0 is the sender, `1..=D` the distributors and
//! `D+1..=D+R` the receivers. Edge weights live on the receiving end.

mod commitment;
mod ternary;
mod training;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::circuits::OracleParams;
use crate::error::{config, Result};
use crate::neuron::{evolve, DiffusionMode, NeuronConfig, NeuronInput, NeuronOutput};
use crate::qsim::{BitString, GateOp, RandomStream, StateVector, MAX_QUBITS};

pub use commitment::{commit, open_commitment, Commitment, Opening};
pub use ternary::TernaryList;
pub use training::{prune, train_step, PruneReport, WeightUpdate};

pub const SENDER: usize = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Sender,
    Distributor,
    Receiver,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ByzantineStrategy {
    /// Flips every bit it forwards.
    BitFlip,
    /// Forwards uniformly random bits.
    RandomList,
    /// Sends nothing.
    Silent,
    /// Honest to even-indexed recipients, flipped to odd-indexed ones.
    Equivocate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Honesty {
    Honest,
    Byzantine(ByzantineStrategy),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Participant {
    pub id: usize,
    pub role: Role,
    pub honesty: Honesty,
    pub active: bool,
    /// Weight of each inbound edge, keyed by source id.
    pub inbound: BTreeMap<usize, f64>,
    /// Neuron bias; only meaningful for receivers.
    pub bias: f64,
}

impl Participant {
    pub fn is_honest(&self) -> bool {
        self.honesty == Honesty::Honest
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ByzantineSpec {
    pub id: usize,
    pub strategy: ByzantineStrategy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainingParams {
    pub eta: f64,
    pub eta_bias: f64,
    pub w_min: f64,
    pub silence_threshold: usize,
}

impl Default for TrainingParams {
    fn default() -> Self {
        Self { eta: 0.05, eta_bias: 0.05, w_min: 0.01, silence_threshold: 5 }
    }
}

fn default_bias() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub list_len: usize,
    pub distributors: usize,
    pub receivers: usize,
    /// The sender's vote bit.
    pub vote: u8,
    pub id_set: Vec<usize>,
    /// List the sender distributes; defaults to `vote` on `id_set` and 0 elsewhere.
    #[serde(default)]
    pub list: Option<TernaryList>,
    #[serde(default = "default_bias")]
    pub bias: f64,
    #[serde(default)]
    pub diffusion: DiffusionMode,
    #[serde(default)]
    pub cap: Option<u32>,
    /// Adds receiver to receiver edges and a second sub-round.
    #[serde(default)]
    pub receiver_edges: bool,
    #[serde(default)]
    pub byzantine: Vec<ByzantineSpec>,
    #[serde(default)]
    pub training: TrainingParams,
}

impl NetworkConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| config(format!("network config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn num_participants(&self) -> usize {
        1 + self.distributors + self.receivers
    }

    pub fn receiver_ids(&self) -> std::ops::RangeInclusive<usize> {
        self.distributors + 1..=self.distributors + self.receivers
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_QUBITS).contains(&self.list_len) {
            return Err(config(format!("list_len {} outside 1..={MAX_QUBITS}", self.list_len)));
        }
        if self.distributors == 0 || self.receivers == 0 {
            return Err(config("need at least one distributor and one receiver"));
        }
        OracleParams::new(self.id_set.clone(), self.vote, 1.0, self.list_len)?;
        if self.diffusion == DiffusionMode::Simplified && self.id_set.len() != 2 {
            return Err(config("simplified diffusion needs |id_set| = 2"));
        }
        if let Some(list) = &self.list {
            if list.len() != self.list_len {
                return Err(config(format!(
                    "list length {} does not match list_len {}",
                    list.len(),
                    self.list_len
                )));
            }
        }
        crate::neuron::repetition_schedule(&[0.5], self.bias, None)?;
        let t = &self.training;
        if !(t.eta >= 0.0 && t.eta_bias >= 0.0 && t.w_min >= 0.0 && t.w_min < 1.0) {
            return Err(config("training rates must be >= 0 and w_min in [0, 1)"));
        }
        let fan_in = self.fan_in();
        if 1.0 / fan_in as f64 <= t.w_min {
            return Err(config(format!(
                "initial weight 1/{fan_in} is not above w_min {}",
                t.w_min
            )));
        }
        let mut seen = BTreeSet::new();
        for b in &self.byzantine {
            if b.id >= self.num_participants() {
                return Err(config(format!("byzantine id {} out of range", b.id)));
            }
            if !seen.insert(b.id) {
                return Err(config(format!("byzantine id {} listed twice", b.id)));
            }
        }
        Ok(())
    }

    fn fan_in(&self) -> usize {
        self.distributors + if self.receiver_edges { self.receivers - 1 } else { 0 }
    }

    /// The list the sender hands to distributors.
    pub fn sender_list(&self) -> TernaryList {
        self.list.clone().unwrap_or_else(|| {
            let mut v = vec![0u8; self.list_len];
            for &j in &self.id_set {
                v[j] = self.vote;
            }
            TernaryList::new(v).expect("list_len >= 1")
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub config: NetworkConfig,
    pub participants: Vec<Participant>,
    /// Directed edges `(from, to)`.
    pub edges: BTreeSet<(usize, usize)>,
}

pub fn build_network(cfg: &NetworkConfig) -> Result<Network> {
    cfg.validate()?;
    let d = cfg.distributors;
    let receivers = cfg.receiver_ids();
    let mut edges = BTreeSet::new();
    for dist in 1..=d {
        edges.insert((SENDER, dist));
        for r in receivers.clone() {
            edges.insert((dist, r));
        }
    }
    if cfg.receiver_edges {
        for a in receivers.clone() {
            for b in receivers.clone() {
                if a != b {
                    edges.insert((a, b));
                }
            }
        }
    }
    let byz: BTreeMap<usize, ByzantineStrategy> = cfg.byzantine.iter().map(|b| (b.id, b.strategy)).collect();
    let participants = (0..cfg.num_participants())
        .map(|id| {
            let role = match id {
                SENDER => Role::Sender,
                i if i <= d => Role::Distributor,
                _ => Role::Receiver,
            };
            let sources: Vec<usize> = edges.iter().filter(|e| e.1 == id).map(|e| e.0).collect();
            let w = if role == Role::Distributor { 1.0 } else { 1.0 / sources.len().max(1) as f64 };
            Participant {
                id,
                role,
                honesty: byz.get(&id).map_or(Honesty::Honest, |&s| Honesty::Byzantine(s)),
                active: true,
                inbound: sources.into_iter().map(|s| (s, w)).collect(),
                bias: cfg.bias,
            }
        })
        .collect();
    Ok(Network { config: cfg.clone(), participants, edges })
}

impl Network {
    pub fn participant(&self, id: usize) -> &Participant {
        &self.participants[id]
    }

    pub fn receivers(&self) -> impl Iterator<Item = &Participant> {
        self.participants.iter().filter(|p| p.role == Role::Receiver)
    }

    pub fn distributors(&self) -> impl Iterator<Item = &Participant> {
        self.participants.iter().filter(|p| p.role == Role::Distributor)
    }

    /// True when strictly fewer than a third of the participants are Byzantine.
    pub fn is_honest_majority(&self) -> bool {
        let byz = self.participants.iter().filter(|p| !p.is_honest()).count();
        3 * byz < self.participants.len()
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<f64> {
        self.participants[to].inbound.get(&from).copied()
    }

    fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.contains(&(from, to)) && self.participants[from].active && self.participants[to].active
    }
}

/// Prepares the register a distributor receives: 0/1 positions as basis
/// states, 2 positions as `|+⟩`, or `|−⟩` when `b_hint` is 0.
pub fn encode_list(list: &TernaryList, b_hint: u8) -> Result<StateVector> {
    let mut state = StateVector::new(list.len())?;
    for (j, &v) in list.values().iter().enumerate() {
        match v {
            1 => state.apply(&GateOp::x(j))?,
            2 => {
                if b_hint == 0 {
                    state.apply(&GateOp::x(j))?;
                }
                state.apply(&GateOp::h(j))?;
            }
            _ => {}
        }
    }
    Ok(state)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Payload {
    /// Sender to distributor: the encoded list.
    Register { list: TernaryList, b_hint: u8 },
    /// Sender to receiver: the oracle parameters.
    Params { id_set: Vec<usize>, b: u8 },
    /// Measured list forwarded to a receiver.
    List { bits: BitString },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub from: usize,
    pub to: usize,
    pub sub_round: u8,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub source: usize,
    pub bits: BitString,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReceiverResult {
    pub id: usize,
    pub honest: bool,
    /// `b` the sender told this receiver to look for, if it said anything.
    pub expected_b: Option<u8>,
    pub inputs: Vec<InputRecord>,
    pub output: NeuronOutput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundOutcome {
    pub round: u64,
    pub commitment: Commitment,
    pub messages: Vec<Message>,
    pub receivers: Vec<ReceiverResult>,
    /// Bit echoed by every honest active receiver, if they all agree.
    pub agreed_bit: Option<u8>,
    /// The sender's opened vote.
    pub committed_bit: u8,
    pub success: bool,
}

impl RoundOutcome {
    pub fn opening(&self) -> Option<Opening> {
        self.commitment.opened
    }
}

fn flip_bits(bits: BitString) -> BitString {
    BitString::new(bits.len(), !bits.value() & ((1usize << bits.len()) - 1))
}

fn random_bits(len: usize, rng: &mut RandomStream) -> BitString {
    let bits: Vec<u8> = (0..len).map(|_| rng.next_bit()).collect();
    BitString::from_bits(&bits)
}

/// What a participant actually forwards to the `k`-th recipient.
fn forward(
    honesty: Honesty,
    k: usize,
    bits: BitString,
    rng: &mut RandomStream,
) -> Option<BitString> {
    match honesty {
        Honesty::Honest => Some(bits),
        Honesty::Byzantine(ByzantineStrategy::BitFlip) => Some(flip_bits(bits)),
        Honesty::Byzantine(ByzantineStrategy::RandomList) => Some(random_bits(bits.len(), rng)),
        Honesty::Byzantine(ByzantineStrategy::Silent) => None,
        Honesty::Byzantine(ByzantineStrategy::Equivocate) => {
            Some(if k.is_multiple_of(2) { bits } else { flip_bits(bits) })
        }
    }
}

/// Sender's message to the `k`-th recipient: the list and vote it claims.
fn sender_view(
    honesty: Honesty,
    k: usize,
    list: &TernaryList,
    cfg: &NetworkConfig,
    rng: &mut RandomStream,
) -> Option<(TernaryList, u8)> {
    let flipped = |list: &TernaryList| {
        let mut v = list.values().to_vec();
        for &j in &cfg.id_set {
            v[j] = 1 - cfg.vote;
        }
        TernaryList::new(v).expect("non-empty")
    };
    match honesty {
        Honesty::Honest => Some((list.clone(), cfg.vote)),
        Honesty::Byzantine(ByzantineStrategy::BitFlip) => Some((flipped(list), 1 - cfg.vote)),
        Honesty::Byzantine(ByzantineStrategy::RandomList) => {
            let bits = random_bits(list.len(), rng);
            Some((TernaryList::from_bits(&bits), rng.next_bit()))
        }
        Honesty::Byzantine(ByzantineStrategy::Silent) => None,
        Honesty::Byzantine(ByzantineStrategy::Equivocate) => Some(if k.is_multiple_of(2) {
            (list.clone(), cfg.vote)
        } else {
            (flipped(list), 1 - cfg.vote)
        }),
    }
}

fn receiver_neuron(
    net: &Network,
    id: usize,
    b: u8,
    received: &BTreeMap<usize, BitString>,
) -> Result<(NeuronConfig, Vec<InputRecord>)> {
    let cfg = &net.config;
    let p = net.participant(id);
    let mut inputs = Vec::new();
    let mut records = Vec::new();
    for (&source, &bits) in received {
        let weight = p.inbound[&source];
        inputs.push(NeuronInput {
            value: TernaryList::from_bits(&bits),
            params: OracleParams { id_set: cfg.id_set.clone(), b, weight },
        });
        records.push(InputRecord { source, bits, weight });
    }
    let neuron = NeuronConfig { l: cfg.list_len, bias: p.bias, diffusion: cfg.diffusion, cap: cfg.cap, inputs };
    Ok((neuron, records))
}

/// Runs one round: commit, distribute, receive (optionally twice), open.
/// Randomness for participant `i` comes from `rng.derive(i)`.
pub fn run_round(net: &Network, list: &TernaryList, rng: &RandomStream, round: u64) -> Result<RoundOutcome> {
    let cfg = &net.config;
    if list.len() != cfg.list_len {
        return Err(config(format!("list length {} does not match list_len {}", list.len(), cfg.list_len)));
    }
    let mut streams: Vec<RandomStream> = (0..net.participants.len()).map(|i| rng.derive(i as u64)).collect();

    let sender = net.participant(SENDER);
    let mut nonce = [0u8; 16];
    streams[SENDER].fill_bytes(&mut nonce);
    let mut commitment = commit(cfg.vote, nonce);
    let mut messages = Vec::new();

    // Sub-round 0: sender to distributors and receivers.
    let mut dist_lists: BTreeMap<usize, (TernaryList, u8)> = BTreeMap::new();
    let mut recv_b: BTreeMap<usize, u8> = BTreeMap::new();
    if sender.active {
        let targets: Vec<usize> = net.edges.iter().filter(|e| e.0 == SENDER).map(|e| e.1).collect();
        for (k, &d) in targets.iter().enumerate() {
            if !net.has_edge(SENDER, d) {
                continue;
            }
            if let Some((l, b)) = sender_view(sender.honesty, k, list, cfg, &mut streams[SENDER]) {
                messages.push(Message { from: SENDER, to: d, sub_round: 0, payload: Payload::Register { list: l.clone(), b_hint: b } });
                dist_lists.insert(d, (l, b));
            }
        }
        for (k, r) in cfg.receiver_ids().enumerate() {
            if !net.participants[r].active {
                continue;
            }
            if let Some((_, b)) = sender_view(sender.honesty, k, list, cfg, &mut streams[SENDER]) {
                messages.push(Message { from: SENDER, to: r, sub_round: 0, payload: Payload::Params { id_set: cfg.id_set.clone(), b } });
                recv_b.insert(r, b);
            }
        }
    }

    // Sub-round 1: distributors measure and forward.
    let mut received: BTreeMap<usize, BTreeMap<usize, BitString>> = BTreeMap::new();
    for (&d, (l, b)) in &dist_lists {
        let p = net.participant(d);
        let bits = crate::neuron::run_distributor(encode_list(l, *b)?, &mut streams[d]);
        let targets: Vec<usize> = net.edges.iter().filter(|e| e.0 == d).map(|e| e.1).collect();
        for (k, &r) in targets.iter().enumerate() {
            if !net.has_edge(d, r) {
                continue;
            }
            if let Some(sent) = forward(p.honesty, k, bits, &mut streams[d]) {
                messages.push(Message { from: d, to: r, sub_round: 1, payload: Payload::List { bits: sent } });
                received.entry(r).or_default().insert(d, sent);
            }
        }
    }

    let mut results: BTreeMap<usize, ReceiverResult> = BTreeMap::new();
    let run = |id: usize, got: &BTreeMap<usize, BitString>, stream: &mut RandomStream| -> Result<ReceiverResult> {
        let b = recv_b.get(&id).copied();
        let (output, inputs) = match b {
            Some(b) if !got.is_empty() => {
                let (neuron, records) = receiver_neuron(net, id, b, got)?;
                (evolve(&neuron)?.sample(stream), records)
            }
            _ => (NeuronOutput::silent(BitString::new(cfg.list_len, 0)), Vec::new()),
        };
        Ok(ReceiverResult { id, honest: net.participant(id).is_honest(), expected_b: b, inputs, output })
    };
    for r in cfg.receiver_ids() {
        if net.participants[r].active {
            let got = received.get(&r).cloned().unwrap_or_default();
            results.insert(r, run(r, &got, &mut streams[r])?);
        }
    }

    // Sub-round 2: receivers forward their measured lists to each other.
    if cfg.receiver_edges {
        let mut second = received.clone();
        for (&r, res) in &results {
            let p = net.participant(r);
            let targets: Vec<usize> = net.edges.iter().filter(|e| e.0 == r).map(|e| e.1).collect();
            for (k, &t) in targets.iter().enumerate() {
                if !net.has_edge(r, t) {
                    continue;
                }
                if let Some(sent) = forward(p.honesty, k, res.output.measured_bits, &mut streams[r]) {
                    messages.push(Message { from: r, to: t, sub_round: 2, payload: Payload::List { bits: sent } });
                    second.entry(t).or_default().insert(r, sent);
                }
            }
        }
        for r in cfg.receiver_ids() {
            if net.participants[r].active {
                let got = second.get(&r).cloned().unwrap_or_default();
                results.insert(r, run(r, &got, &mut streams[r])?);
            }
        }
    }

    let receivers: Vec<ReceiverResult> = results.into_values().collect();
    let honest: Vec<&ReceiverResult> = receivers.iter().filter(|r| r.honest).collect();
    let agreed_bit = match honest.first().and_then(|r| r.output.echoed_bit()) {
        Some(b) if honest.iter().all(|r| r.output.echoed_bit() == Some(b)) => Some(b),
        _ => None,
    };
    let opened = commitment.open(Opening { bit: cfg.vote, nonce });
    debug_assert!(opened);
    Ok(RoundOutcome {
        round,
        commitment,
        messages,
        receivers,
        agreed_bit,
        committed_bit: cfg.vote,
        success: agreed_bit == Some(cfg.vote),
    })
}
