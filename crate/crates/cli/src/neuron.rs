use std::collections::BTreeMap;
use std::path::PathBuf;

use amn_core::feasibility::check_budget;
use amn_core::neuron::{evolve, NeuronConfig, OutputKind};
use amn_core::qsim::RandomStream;
use clap::Args;
use serde_json::json;

use crate::{load_profile, read_file, require_seed, CliResult, CommonArgs, Report};

#[derive(Debug, Args)]
pub struct NeuronArgs {
    /// Neuron config JSON.
    #[arg(long)]
    pub config: PathBuf,
    /// Number of sampled runs.
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    /// Include the exact output distribution.
    #[arg(long)]
    pub exact: bool,
}

pub fn run(args: &NeuronArgs, common: &CommonArgs) -> CliResult<Report> {
    let mut cfg = NeuronConfig::from_json(&read_file(&args.config)?)?;
    if let Some(mode) = common.diffusion {
        cfg.diffusion = mode;
        cfg.validate()?;
    }
    let profile = load_profile(common)?;
    let seed = if args.shots > 0 { Some(require_seed(common, "neuron with --shots > 0")?) } else { common.seed };

    let evolved = evolve(&cfg)?;
    let timing = check_budget(&evolved.schedule, &profile, common.timing_model);
    let mut warnings = profile.sanity_warnings();
    if !timing.budget_ok {
        warnings.push(format!("t_assoc {} is not below T2 {}", timing.t_assoc, timing.t2));
    }

    let dist = evolved.distribution();
    let mut rows: BTreeMap<String, (f64, u64)> = BTreeMap::new();
    let exact = args.exact.then(|| {
        for (k, p) in &dist {
            rows.entry(k.to_string()).or_default().0 = *p;
        }
        json!({
            "distribution": dist.iter().map(|(k, p)| (k.to_string(), *p)).collect::<BTreeMap<_, _>>(),
            "decode": evolved.decode_distribution(),
        })
    });

    let sampled = seed.filter(|_| args.shots > 0).map(|seed| {
        let mut rng = RandomStream::new(seed);
        let outcomes: Vec<_> = (0..args.shots).map(|_| evolved.sample(&mut rng)).collect();
        let mut freq: BTreeMap<String, u64> = BTreeMap::new();
        for o in &outcomes {
            *freq.entry(o.measured_bits.to_string()).or_default() += 1;
            rows.entry(o.measured_bits.to_string()).or_default().1 += 1;
        }
        let silent = outcomes.iter().filter(|o| o.kind == OutputKind::Silent).count();
        json!({
            "count": args.shots,
            "silent": silent,
            "frequencies": freq,
            "outcomes": outcomes,
        })
    });

    let report = Report::new(json!({
        "command": "neuron",
        "seed": seed,
        "l": cfg.l,
        "diffusion": cfg.diffusion,
        "schedule": {
            "reps": evolved.schedule.reps(),
            "n_sigma": evolved.schedule.n_sigma(),
            "executed": evolved.executed,
        },
        "timing": timing,
        "warnings": warnings,
        "exact": exact,
        "shots": sampled,
    }))?;
    let table = rows
        .into_iter()
        .map(|(bits, (p, n))| vec![bits, p.to_string(), n.to_string()])
        .collect();
    Ok(report.with_table(&["pattern", "probability", "count"], table))
}
