use std::path::PathBuf;

use amn_core::network::{build_network, prune, run_round, train_step, NetworkConfig, RoundOutcome};
use amn_core::qsim::RandomStream;
use clap::Args;
use serde_json::json;

use crate::{read_file, require_seed, CliError, CliResult, CommonArgs, Report};

#[derive(Debug, Args)]
pub struct ConsensusArgs {
    /// Network config JSON.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub rounds: u64,
    /// Open the commitment after each round, train and prune.
    #[arg(long)]
    pub train: bool,
}

/// Unanimity over honest receivers, recomputed from the outcome.
fn check_round(out: &RoundOutcome) -> CliResult<()> {
    let honest: Vec<_> = out.receivers.iter().filter(|r| r.honest).collect();
    let unanimous = honest
        .first()
        .and_then(|r| r.output.echoed_bit())
        .filter(|&b| honest.iter().all(|r| r.output.echoed_bit() == Some(b)));
    if unanimous != out.agreed_bit {
        return Err(CliError::Invariant(format!(
            "round {}: agreed bit {:?} disagrees with honest echoes",
            out.round, out.agreed_bit
        )));
    }
    Ok(())
}

pub fn run(args: &ConsensusArgs, common: &CommonArgs) -> CliResult<Report> {
    let mut cfg = NetworkConfig::from_json(&read_file(&args.config)?)?;
    if let Some(mode) = common.diffusion {
        cfg.diffusion = mode;
        cfg.validate()?;
    }
    let seed = if args.rounds > 0 { Some(require_seed(common, "consensus with --rounds > 0")?) } else { common.seed };
    let master = RandomStream::new(seed.unwrap_or(0));
    let list = cfg.sender_list();
    let mut net = build_network(&cfg)?;
    let mut history: Vec<RoundOutcome> = Vec::new();
    let mut transcript = Vec::new();
    let mut pruned_edges = Vec::new();
    let mut rows = Vec::new();

    for round in 0..args.rounds {
        let before = net.clone();
        let out = run_round(&net, &list, &master.derive(round), round)?;
        if net != before {
            return Err(CliError::Invariant(format!("round {round} mutated the network")));
        }
        check_round(&out)?;
        rows.push(vec![
            round.to_string(),
            out.agreed_bit.map_or(String::new(), |b| b.to_string()),
            out.committed_bit.to_string(),
            out.success.to_string(),
        ]);
        let mut entry = json!({ "outcome": &out });
        if args.train {
            let opening = out.opening().ok_or_else(|| CliError::Invariant("commitment left unopened".into()))?;
            let (trained, updates) = train_step(&net, &out, opening, &cfg.training)?;
            history.push(out);
            let (pruned, report) = prune(&trained, &history, &cfg.training);
            pruned_edges.extend(report.removed_edges.iter().copied());
            entry["weight_updates"] = json!(updates);
            entry["prune"] = json!(report);
            net = pruned;
        } else {
            history.push(out);
        }
        transcript.push(entry);
    }

    let successes = history.iter().filter(|o| o.success).count();
    let agreed = history.iter().filter(|o| o.agreed_bit.is_some()).count();
    let weights: Vec<_> = net
        .participants
        .iter()
        .flat_map(|p| p.inbound.iter().map(move |(&from, &w)| json!({ "from": from, "to": p.id, "weight": w })))
        .collect();
    let summary = json!({
        "rounds": args.rounds,
        "successes": successes,
        "agreements": agreed,
        "success_rate": (args.rounds > 0).then(|| successes as f64 / args.rounds as f64),
        "honest_majority": net.is_honest_majority(),
        "final_weights": weights,
        "final_bias": net.receivers().map(|r| json!({ "receiver": r.id, "bias": r.bias })).collect::<Vec<_>>(),
        "pruned_edges": pruned_edges,
        "inactive": net.participants.iter().filter(|p| !p.active).map(|p| p.id).collect::<Vec<_>>(),
    });
    let report = Report::new(json!({
        "command": "consensus",
        "seed": seed,
        "train": args.train,
        "list": list,
        "transcript": transcript,
        "summary": summary,
    }))?;
    Ok(report.with_table(&["round", "agreed_bit", "committed_bit", "success"], rows))
}
