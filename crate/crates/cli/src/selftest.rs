use std::io::Write;

use clap::Args;

use urkit_core::acceptance::{run_seeded, CRITERIA};
use urkit_core::random::DEFAULT_SEED;

use crate::{parse_orders, to_json, CliResult, EXIT_NUMERIC};

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    /// Comma-separated criterion numbers (default: all).
    #[arg(long)]
    pub only: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Print the outcomes as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

pub fn run(a: &SelftestArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let ids: Vec<u32> = match &a.only {
        Some(s) => parse_orders(s)?.into_iter().map(|i| i as u32).collect(),
        None => CRITERIA.iter().map(|c| c.0).collect(),
    };
    let mut outcomes = Vec::with_capacity(ids.len());
    for id in ids {
        let o = run_seeded(id, a.seed)?;
        if !a.json {
            writeln!(stdout, "{}", o.line())?;
            for n in &o.notes {
                writeln!(stdout, "        {n}")?;
            }
        }
        outcomes.push(o);
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    if a.json {
        stdout.write_all(to_json(&outcomes).as_bytes())?;
    } else {
        writeln!(stdout, "{passed}/{} criteria passed", outcomes.len())?;
    }
    Ok(if passed == outcomes.len() { 0 } else { EXIT_NUMERIC })
}
