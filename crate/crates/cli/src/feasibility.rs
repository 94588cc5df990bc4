use amn_core::feasibility::{
    max_participants, max_std_range, time_of_diffusion, time_of_oracle, Nanos,
};
use clap::Args;
use serde_json::json;

use crate::{load_profile, CliError, CliResult, CommonArgs, Report};

#[derive(Debug, Args)]
pub struct FeasibilityArgs {
    /// Coherence time, e.g. `22.4us`. Defaults to the profile's T2.
    #[arg(long)]
    pub t2: Option<Nanos>,
    /// Repetition time. Defaults to oracle + diffusion for the profile.
    #[arg(long)]
    pub trep: Option<Nanos>,
    /// T2 range `start..end`, inclusive, e.g. `1ms..5ms`.
    #[arg(long, conflicts_with = "t2")]
    pub sweep: Option<String>,
    /// Sweep step.
    #[arg(long, requires = "sweep")]
    pub step: Option<Nanos>,
    /// Participant counts for the repetition range columns.
    #[arg(long, value_delimiter = ',', default_value = "4,6,8,10,12")]
    pub p: Vec<u32>,
}

fn parse_sweep(spec: &str, step: Option<Nanos>) -> CliResult<Vec<Nanos>> {
    let (a, b) = spec
        .split_once("..")
        .ok_or_else(|| CliError::Config(format!("sweep \"{spec}\" is not start..end")))?;
    let start: Nanos = a.parse()?;
    let end: Nanos = b.parse()?;
    let step = step.ok_or_else(|| CliError::Config("--sweep needs --step".into()))?;
    if step.0 == 0 || start.0 == 0 || end < start {
        return Err(CliError::Config("sweep needs 0 < start <= end and a positive step".into()));
    }
    Ok((0..).map(|k| Nanos(start.0 + k * step.0)).take_while(|t| *t <= end).collect())
}

pub fn run(args: &FeasibilityArgs, common: &CommonArgs) -> CliResult<Report> {
    let profile = load_profile(common)?;
    let t_oracle = time_of_oracle(&profile, common.timing_model);
    let t_diffusion = time_of_diffusion(&profile, common.timing_model);
    let t_rep = args.trep.unwrap_or(t_oracle + t_diffusion);
    if t_rep.0 == 0 {
        return Err(CliError::Config("repetition time must be positive".into()));
    }
    let t2s = match &args.sweep {
        Some(spec) => parse_sweep(spec, args.step)?,
        None => vec![args.t2.unwrap_or(profile.t2)],
    };
    if t2s.iter().any(|t| t.0 == 0) {
        return Err(CliError::Config("T2 must be positive".into()));
    }
    if let Some(&p) = args.p.iter().find(|&&p| p < 2) {
        return Err(CliError::Config(format!("participant count {p} must be at least 2")));
    }

    let mut rows = Vec::new();
    let mut table = Vec::new();
    for t2 in t2s {
        let bound = max_participants(t2, t_rep)?;
        let ranges = args
            .p
            .iter()
            .map(|&p| Ok((p, max_std_range(p, t2, t_rep, None)?)))
            .collect::<CliResult<Vec<_>>>()?;
        let mut line = vec![t2.0.to_string(), t_rep.0.to_string(), bound.exact_root.to_string(), bound.reported.to_string()];
        line.extend(ranges.iter().map(|(_, r)| r.to_string()));
        table.push(line);
        rows.push(json!({
            "t2": t2,
            "t_rep": t_rep,
            "exact_root": bound.exact_root,
            "reported": bound.reported,
            "max_std_range": ranges.iter().map(|(p, r)| json!({ "p": p, "value": r })).collect::<Vec<_>>(),
        }));
    }

    let mut header: Vec<String> = ["t2_ns", "t_rep_ns", "exact_root", "reported"].map(String::from).to_vec();
    header.extend(args.p.iter().map(|p| format!("max_std_range_p{p}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let report = Report::new(json!({
        "command": "feasibility",
        "timing_model": common.timing_model,
        "t_oracle": t_oracle,
        "t_diffusion": t_diffusion,
        "t_rep": t_rep,
        "warnings": profile.sanity_warnings(),
        "rows": rows,
    }))?;
    Ok(report.with_table(&header, table))
}
