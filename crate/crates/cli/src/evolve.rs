use std::io::Write;
use std::path::PathBuf;

use clap::Args;

use urkit_core::dynamics::profile::ProfileSpec;
use urkit_core::dynamics::{canonical_initial, integrate_epsilon, trajectory_rows};
use urkit_core::io::parse_complex;

use crate::{emit, invalid, read_file, CliError, CliResult, OutArg};

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    /// Profile JSON: `{kind: "omega"|"g123", omega0, samples | expressions}`.
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t_start: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t_end: f64,
    /// Output intervals; the trajectory has `steps + 1` rows.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Initial ε (default: the ground state of the ω₀ oscillator).
    #[arg(long, allow_hyphen_values = true, requires = "deps0")]
    pub eps0: Option<String>,
    /// Initial ε̇.
    #[arg(long, allow_hyphen_values = true, requires = "eps0")]
    pub deps0: Option<String>,
    #[command(flatten)]
    pub out: OutArg,
}

pub fn run(a: &EvolveArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let spec: ProfileSpec = serde_json::from_str(&read_file(&a.profile)?)
        .map_err(|e| invalid(format!("bad profile JSON: {e}")))?;
    let profile = spec.build()?;
    if a.steps == 0 || !(a.t_end > a.t_start) {
        return Err(invalid("need t_end > t_start and at least one step"));
    }
    let ts: Vec<f64> = (0..=a.steps)
        .map(|i| a.t_start + (a.t_end - a.t_start) * i as f64 / a.steps as f64)
        .collect();
    let (eps0, deps0) = match (&a.eps0, &a.deps0) {
        (Some(e), Some(d)) => (parse_complex(e)?, parse_complex(d)?),
        _ => canonical_initial(spec.omega0),
    };
    let traj = integrate_epsilon(&profile, &ts, eps0, deps0)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in trajectory_rows(&traj, spec.omega0) {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    emit(&a.out, stdout, &String::from_utf8(bytes).expect("csv output is UTF-8"))?;
    Ok(0)
}
