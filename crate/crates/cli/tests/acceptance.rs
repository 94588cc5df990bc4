//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

#[path = "../../core/tests/common/dense.rs"]
mod dense;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use amn_core::circuits::{build_diffusion_full, build_diffusion_simplified, decompose_ccz, decompose_cz, OracleParams};
use amn_core::feasibility::{
    check_budget, max_participants, repetition_cap, time_of_diffusion, time_of_oracle, time_of_repetition,
    DeviceProfile, Nanos, TimingModel,
};
use amn_core::network::{build_network, encode_list, prune, run_round, train_step, NetworkConfig, RoundOutcome, TernaryList};
use amn_core::neuron::{evolve, output_distribution, repetition_schedule, run_distributor, DiffusionMode, NeuronConfig, NeuronInput};
use amn_core::qsim::{BitString, RandomStream};
use amn_core::stats::{goodness_of_fit, independence};
use dense::{fragment_matrix, Dense};
use num_complex::Complex64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn timing_exactness() -> Outcome {
    let p = DeviceProfile::default();
    let m = TimingModel::Paper;
    let got = (time_of_oracle(&p, m), time_of_diffusion(&p, m), time_of_repetition(&p, m));
    let want = (Nanos(2100), Nanos(640), Nanos(2740));
    let msg = format!("oracle {} diffusion {} repetition {}", got.0, got.1, got.2);
    check(got == want, msg.clone(), msg)
}

fn participant_bounds() -> Outcome {
    let t_rep = Nanos(2740);
    let a = max_participants(Nanos(22_400), t_rep).map_err(|e| e.to_string())?;
    let b = max_participants(Nanos(5_000_000), t_rep).map_err(|e| e.to_string())?;
    let msg = format!(
        "22.4us -> {} (root {:.4}), 5ms -> {} (root {:.4})",
        a.reported, a.exact_root, b.reported, b.exact_root
    );
    let ok = a.reported == 6
        && b.reported == 85
        && (a.exact_root - 5.72).abs() <= 0.01
        && (b.exact_root - 85.44).abs() <= 0.01;
    check(ok, msg.clone(), msg)
}

fn pair_config(reps_inputs: usize, bias: f64) -> NeuronConfig {
    let input = NeuronInput {
        value: TernaryList::new(vec![1, 1]).unwrap(),
        params: OracleParams { id_set: vec![0, 1], b: 1, weight: 0.5 },
    };
    NeuronConfig { l: 2, bias, diffusion: DiffusionMode::Simplified, cap: None, inputs: vec![input; reps_inputs] }
}

fn grover_exactness() -> Outcome {
    let p = |cfg: &NeuronConfig| -> Result<f64, String> {
        let d = output_distribution(cfg).map_err(|e| e.to_string())?;
        Ok(d.get(&BitString::new(2, 3)).copied().unwrap_or(0.0))
    };
    let r0 = p(&pair_config(1, 0.0))?;
    let r1 = p(&pair_config(1, 1.0))?;
    let r2 = p(&pair_config(2, 1.0))?;
    let msg = format!("p(11) at r=0,1,2: {r0:.12}, {r1:.12}, {r2:.12}");
    let ok = (r0 - 0.25).abs() < 1e-9 && (r1 - 1.0).abs() < 1e-9 && (r2 - 0.25).abs() < 1e-9;
    check(ok, msg.clone(), msg)
}

fn distributor_randomness() -> Outcome {
    let shots = 10_000;
    let list = TernaryList::new(vec![2, 0, 2, 1, 2, 0]).unwrap();
    let superposed = [0usize, 2, 4];
    let mut worst_freq: f64 = 0.0;
    let mut worst_p: f64 = 1.0;
    for b_hint in [0u8, 1] {
        let reg = encode_list(&list, b_hint).map_err(|e| e.to_string())?;
        let mut rng = RandomStream::new(40 + u64::from(b_hint));
        let draws: Vec<BitString> = (0..shots).map(|_| run_distributor(reg.clone(), &mut rng)).collect();
        if draws.iter().any(|d| d.bit(1) != 0 || d.bit(3) != 1 || d.bit(5) != 0) {
            return Err("a basis position changed".into());
        }
        for &q in &superposed {
            let f = draws.iter().filter(|d| d.bit(q) == 1).count() as f64 / shots as f64;
            worst_freq = worst_freq.max((f - 0.5).abs());
        }
        for (i, &a) in superposed.iter().enumerate() {
            for &b in &superposed[i + 1..] {
                let mut t = vec![vec![0u64; 2]; 2];
                for d in &draws {
                    t[d.bit(a) as usize][d.bit(b) as usize] += 1;
                }
                worst_p = worst_p.min(independence(&t).map_err(|e| e.to_string())?.p_value);
            }
        }
    }
    let msg = format!("max |freq - 0.5| = {worst_freq:.4}, min independence p = {worst_p:.4}");
    check(worst_freq <= 0.02 && worst_p > 0.01, msg.clone(), msg)
}

fn soundness() -> Outcome {
    let one = Complex64::new(1.0, 0.0);
    let mut ccz = vec![one; 8];
    ccz[7] = -one;
    let d_ccz = fragment_matrix(&decompose_ccz()).distance_up_to_phase(&Dense::diagonal(&ccz));
    let d_cz = fragment_matrix(&decompose_cz()).distance_up_to_phase(&Dense::diagonal(&[one, one, one, -one]));
    let full = fragment_matrix(&build_diffusion_full(2, 0, 2).map_err(|e| e.to_string())?);
    let simple = fragment_matrix(&build_diffusion_simplified([0, 1], 0, 2).map_err(|e| e.to_string())?);
    let d_diff = full.distance_up_to_phase(&simple);
    let msg = format!("ccz {d_ccz:.2e}, cz {d_cz:.2e}, diffusion {d_diff:.2e}");
    check(d_ccz < 1e-10 && d_cz < 1e-10 && d_diff < 1e-10, msg.clone(), msg)
}

/// Ten l = 6 neuron configs spanning matching, non-matching, mixed `b`,
/// unequal weights and both diffusion modes.
fn neuron_corpus() -> Vec<NeuronConfig> {
    let mut rng = RandomStream::new(6);
    (0..10)
        .map(|k| {
            let n = 1 + (rng.next_u64() % 5) as usize;
            let inputs = (0..n)
                .map(|_| {
                    let a = (rng.next_u64() % 6) as usize;
                    let b = (a + 1 + (rng.next_u64() % 5) as usize) % 6;
                    let mut id_set = vec![a, b];
                    id_set.sort_unstable();
                    let bit = rng.next_bit();
                    let mut value: Vec<u8> = (0..6).map(|_| rng.next_bit()).collect();
                    if rng.next_f64() < 0.7 {
                        for &q in &id_set {
                            value[q] = bit;
                        }
                    }
                    NeuronInput {
                        value: TernaryList::new(value).unwrap(),
                        params: OracleParams { id_set, b: bit, weight: 0.1 + 0.9 * rng.next_f64() },
                    }
                })
                .collect();
            NeuronConfig {
                l: 6,
                bias: if k % 3 == 0 { 0.5 } else { 1.0 },
                diffusion: if k % 4 == 3 { DiffusionMode::Full } else { DiffusionMode::Simplified },
                cap: None,
                inputs,
            }
        })
        .collect()
}

fn simulability() -> Outcome {
    let shots = 10_000;
    let mut ps = Vec::new();
    for (k, cfg) in neuron_corpus().iter().enumerate() {
        let evolved = evolve(cfg).map_err(|e| e.to_string())?;
        let dist = evolved.distribution();
        let mut rng = RandomStream::new(600 + k as u64);
        let mut counts: BTreeMap<BitString, u64> = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(evolved.sample(&mut rng).measured_bits).or_default() += 1;
        }
        if counts.keys().any(|k| !dist.contains_key(k)) {
            return Err(format!("config {k}: sampled a zero-probability pattern"));
        }
        let observed: Vec<u64> = dist.keys().map(|b| counts.get(b).copied().unwrap_or(0)).collect();
        let probs: Vec<f64> = dist.values().copied().collect();
        ps.push(goodness_of_fit(&observed, &probs).map_err(|e| e.to_string())?.p_value);
    }
    let min = ps.iter().copied().fold(1.0, f64::min);
    let msg = format!("10 configs, min p = {min:.4}");
    check(ps.iter().all(|&p| p > 0.01), msg.clone(), msg)
}

fn network_config(d: usize, byzantine: &str) -> NetworkConfig {
    NetworkConfig::from_json(&format!(
        r#"{{"list_len": 6, "distributors": {d}, "receivers": 4, "vote": 1, "id_set": [0, 2], "bias": 1.0, "byzantine": [{byzantine}]}}"#
    ))
    .unwrap()
}

fn unanimous(out: &RoundOutcome) -> bool {
    let honest: Vec<_> = out.receivers.iter().filter(|r| r.honest).collect();
    let bit = honest
        .first()
        .and_then(|r| r.output.echoed_bit())
        .filter(|&b| honest.iter().all(|r| r.output.echoed_bit() == Some(b)));
    bit == out.agreed_bit
}

fn consensus_suite() -> Outcome {
    let err = |e: amn_core::Error| e.to_string();
    let cfg = network_config(4, "");
    let net = build_network(&cfg).map_err(err)?;
    let list = cfg.sender_list();
    let mut success = 0;
    for seed in 0..20 {
        let out = run_round(&net, &list, &RandomStream::new(seed), 0).map_err(err)?;
        if !unanimous(&out) {
            return Err(format!("seed {seed}: unanimity rule violated"));
        }
        success += usize::from(out.success);
    }
    let rate = success as f64 / 20.0;

    let cfg = network_config(5, r#"{"id": 1, "strategy": "bit-flip"}"#);
    let mut net = build_network(&cfg).map_err(err)?;
    let master = RandomStream::new(3);
    let mut history = Vec::new();
    let mut pruned_at = None;
    let mut monotone = true;
    for round in 0..50u64 {
        let out = run_round(&net, &cfg.sender_list(), &master.derive(round), round).map_err(err)?;
        if !unanimous(&out) {
            return Err(format!("training round {round}: unanimity rule violated"));
        }
        let (next, _) = train_step(&net, &out, out.opening().unwrap(), &cfg.training).map_err(err)?;
        for r in next.receivers() {
            for (&s, &w) in &r.inbound {
                let old = net.weight(s, r.id).unwrap();
                monotone &= if s == 1 { w <= old } else { w >= old };
            }
        }
        history.push(out);
        let (next, report) = prune(&next, &history, &cfg.training);
        if pruned_at.is_none() && report.inactivated.contains(&1) {
            pruned_at = Some(round);
        }
        net = next;
    }

    let by_size: Vec<String> = (1..=7)
        .map(|d| {
            let cfg = network_config(d, "");
            let net = build_network(&cfg).unwrap();
            let ok = (0..20)
                .filter(|&s| run_round(&net, &cfg.sender_list(), &RandomStream::new(s), 0).unwrap().success)
                .count();
            format!("{d}+4:{ok}/20")
        })
        .collect();
    let msg = format!(
        "4+4 honest success {rate:.2}; monotone {monotone}; flipper pruned at round {pruned_at:?}; honest by size [{}]",
        by_size.join(" ")
    );
    check(rate >= 0.95 && monotone && pruned_at.is_some(), msg.clone(), msg)
}

fn budget_enforcement() -> Outcome {
    let mut rng = RandomStream::new(8);
    let mut profile = DeviceProfile::default();
    for trial in 0..100 {
        let p = 4 + (rng.next_u64() % 9) as u32;
        profile.t2 = Nanos(10_000 + rng.next_u64() % 10_000_000);
        let bias = rng.next_f64();
        let t_rep = time_of_repetition(&profile, TimingModel::Paper);
        let cap = repetition_cap(p, profile.t2, t_rep, bias).map_err(|e| e.to_string())?;
        let weights: Vec<f64> = (0..p / 2).map(|_| 0.01 + 0.99 * rng.next_f64()).collect();
        let schedule = repetition_schedule(&weights, bias, Some(cap)).map_err(|e| e.to_string())?;
        let report = check_budget(&schedule, &profile, TimingModel::Paper);
        if !report.budget_ok {
            return Err(format!("trial {trial}: p={p} t2={} t_assoc={}", profile.t2, report.t_assoc));
        }
    }
    Ok("100 trials, p in 4..=12, all T_assoc < T2".into())
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn determinism() -> Outcome {
    let dir = configs_dir();
    let s = |p: &str| dir.join(p).display().to_string();
    let runs: Vec<Vec<String>> = vec![
        vec!["neuron".into(), "--config".into(), s("neuron_worked.json"), "--seed".into(), "5".into(), "--exact".into()],
        vec!["neuron".into(), "--config".into(), s("neuron_pair.json"), "--seed".into(), "5".into(), "--format".into(), "csv".into()],
        vec!["consensus".into(), "--config".into(), s("network_flipper.json"), "--seed".into(), "5".into(), "--rounds".into(), "10".into(), "--train".into()],
        vec!["consensus".into(), "--config".into(), s("network_superposed.json"), "--seed".into(), "5".into(), "--rounds".into(), "5".into()],
        vec!["feasibility".into(), "--sweep".into(), "1ms..5ms".into(), "--step".into(), "1ms".into()],
        vec!["feasibility".into(), "--t2".into(), "22.4us".into(), "--timing-model".into(), "strict".into(), "--format".into(), "csv".into()],
    ];
    for args in &runs {
        let once = || {
            Command::new(env!("CARGO_BIN_EXE_amn"))
                .args(args)
                .arg("--deterministic")
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (once()?, once()?);
        if !a.status.success() || a.stdout.is_empty() {
            return Err(format!("{} failed: {}", args[0], String::from_utf8_lossy(&a.stderr)));
        }
        if a.stdout != b.stdout {
            return Err(format!("{} output differs between runs", args.join(" ")));
        }
    }
    Ok(format!("{} invocations byte-identical across two runs", runs.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("timing exactness", timing_exactness),
        ("participant bounds", participant_bounds),
        ("grover exactness", grover_exactness),
        ("distributor randomness", distributor_randomness),
        ("oracle/diffusion soundness", soundness),
        ("classical simulability", simulability),
        ("consensus property suite", consensus_suite),
        ("budget enforcement", budget_enforcement),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}) [{ms} ms]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail}) [{ms} ms]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
