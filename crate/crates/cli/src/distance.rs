use std::io::Write;
use std::path::PathBuf;

use clap::Args;

use urkit_core::hilbert::{boson_rep, su11_rep, su2_rep};
use urkit_core::metrics::g_overlap;
use urkit_core::{BasisSpec, Operator, C64};

use crate::report::load_state;
use crate::{emit, invalid, to_json, CliResult, OutArg};

#[derive(Debug, Clone, Args)]
pub struct DistanceArgs {
    /// The two state JSON files.
    #[arg(long = "state", num_args = 1, required = true)]
    pub states: Vec<PathBuf>,
    /// Weighting observable: `identity`, or `number` for the shifted
    /// number operator of the basis (n+1, K₃, or J₃+j+1).
    #[arg(long, default_value = "identity")]
    pub observable: String,
    #[command(flatten)]
    pub out: OutArg,
}

/// Strictly positive weighting observables by name.
pub fn weighting_observable(name: &str, basis: &BasisSpec) -> CliResult<Operator> {
    let op = match (name, *basis) {
        ("identity", _) => Operator::identity(*basis),
        ("number", BasisSpec::Fock { n }) => {
            let b = boson_rep(n)?;
            let one = Operator::identity(*basis);
            Operator::combination("n+1", &[(C64::new(1.0, 0.0), &b.n), (C64::new(1.0, 0.0), &one)])?
        }
        ("number", BasisSpec::Su11 { k, n }) => su11_rep(k, n)?.k3,
        ("number", BasisSpec::Su2 { two_j }) => {
            let j = two_j as f64 / 2.0;
            let r = su2_rep(j)?;
            let one = Operator::identity(*basis);
            Operator::combination("J3+j+1", &[(C64::new(1.0, 0.0), &r.j3), (C64::new(j + 1.0, 0.0), &one)])?
        }
        ("number", b) => return Err(invalid(format!("no number observable on {}", b.describe()))),
        _ => return Err(invalid(format!("unknown observable {name:?}; expected identity or number"))),
    };
    Ok(op)
}

pub fn run(a: &DistanceArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    if a.states.len() != 2 {
        return Err(invalid(format!("distance needs exactly two --state files, got {}", a.states.len())));
    }
    let psi1 = load_state(&a.states[0])?;
    let psi2 = load_state(&a.states[1])?;
    let x = weighting_observable(&a.observable, &psi1.basis)?;
    let d = g_overlap(&psi1, &psi2, &x)?;
    emit(&a.out, stdout, &to_json(&d))?;
    Ok(0)
}
