use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use urkit_core::hilbert::DensityMatrix;
use urkit_core::io::StateRecord;
use urkit_core::moments::{moment_report_with, MomentOptions, MomentReportJson, StateRef};
use urkit_core::urcheck::{char_ur_report, complementary, default_alpha, hadamard_alpha, ReportOptions};
use urkit_core::{BasisSpec, ObservableSet, StateVector, URReport};

use crate::{emit, invalid, parse_orders, read_file, to_json, CliResult, OutArg};

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// State JSON file; repeat for multi-state forms (up to 8).
    #[arg(long = "state", required = true)]
    pub states: Vec<PathBuf>,
    /// Observable set: canonical[:s], su11[:k], su2[:j], a2-quadratures.
    /// Without an explicit k or j the state's own index is used.
    #[arg(long)]
    pub observables: String,
    /// Orders of the characteristic relations, e.g. `1,2,3` (default: all).
    #[arg(long)]
    pub orders: Option<String>,
    /// Scale of the complementary form: a number, or `variance` for the
    /// product-of-variances bound. Needed for unbounded sets; su(2) sets
    /// default to the largest C_r(σ) over the states and the maximally
    /// mixed state.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Order used by the complementary form (default: highest order).
    #[arg(long)]
    pub complementary_order: Option<usize>,
    /// Largest tail mass accepted from a truncated state.
    #[arg(long, default_value_t = MomentOptions::default().tail_limit)]
    pub tail_limit: f64,
    #[command(flatten)]
    pub out: OutArg,
}

/// Output of `urkit report`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportOutput {
    pub observable_set: String,
    pub basis: String,
    pub report: URReport,
    /// Per-state moments in the order the states were given.
    pub moments: Vec<MomentReportJson>,
}

/// The registry set matching a state basis. `su11` and `su2` without an
/// index take the basis index; the cutoff is the basis per-mode cutoff.
pub fn observable_set_for(name: &str, basis: &BasisSpec) -> CliResult<ObservableSet> {
    let resolved = match (name, basis) {
        ("su11", BasisSpec::Su11 { k, .. }) => format!("su11:{k}"),
        ("su2", BasisSpec::Su2 { two_j }) => format!("su2:{}", *two_j as f64 / 2.0),
        _ => name.to_string(),
    };
    let set = ObservableSet::from_name(&resolved, basis.cutoff())?;
    if set.basis() != *basis {
        return Err(urkit_core::Error::BasisMismatch(format!(
            "observable set {resolved} lives on {}, state on {}",
            set.basis().describe(),
            basis.describe()
        ))
        .into());
    }
    Ok(set)
}

/// How the complementary scale was requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum AlphaSpec {
    Value(f64),
    Variance,
}

pub(crate) fn parse_alpha(s: &str) -> CliResult<AlphaSpec> {
    if s == "variance" {
        return Ok(AlphaSpec::Variance);
    }
    s.parse()
        .map(AlphaSpec::Value)
        .map_err(|_| invalid(format!("--alpha takes a number or \"variance\", got {s:?}")))
}

/// The scale for a family of reports, or `None` when an unbounded set has
/// no `--alpha`.
pub(crate) fn family_alpha(
    spec: Option<AlphaSpec>,
    set: &ObservableSet,
    reports: &[URReport],
    r: usize,
    opts: &ReportOptions,
) -> CliResult<Option<f64>> {
    Ok(match spec {
        Some(AlphaSpec::Value(a)) => Some(a),
        Some(AlphaSpec::Variance) => Some(hadamard_alpha(reports, r)?),
        None if matches!(set.basis(), BasisSpec::Su2 { .. }) => {
            let mixed = DensityMatrix::maximally_mixed(set.basis());
            let mut all = reports.to_vec();
            all.push(char_ur_report(set, &[StateRef::from(&mixed)], opts)?);
            Some(default_alpha(&all, r)?)
        }
        None => None,
    })
}

pub(crate) fn load_state(path: &std::path::Path) -> CliResult<StateVector> {
    Ok(StateRecord::from_json(&read_file(path)?)?.to_state()?)
}

pub fn run(a: &ReportArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let states = a.states.iter().map(|p| load_state(p)).collect::<CliResult<Vec<_>>>()?;
    let basis = states[0].basis;
    let set = observable_set_for(&a.observables, &basis)?;
    let orders = a.orders.as_deref().map(parse_orders).transpose()?;
    let opts = ReportOptions {
        orders: orders.clone(),
        moments: MomentOptions { tail_limit: a.tail_limit },
    };
    let refs: Vec<StateRef> = states.iter().map(StateRef::from).collect();
    let mut report = char_ur_report(&set, &refs, &opts)?;
    let moments = refs
        .iter()
        .map(|s| moment_report_with(&set, *s, &opts.moments).map(|m| m.to_json()))
        .collect::<urkit_core::Result<Vec<_>>>()?;

    let alpha_spec = a.alpha.as_deref().map(parse_alpha).transpose()?;
    let r = match a.complementary_order {
        Some(r) => r,
        None => *report.orders.keys().max().ok_or_else(|| invalid("report has no orders"))?,
    };
    if let Some(alpha) = family_alpha(alpha_spec, &set, std::slice::from_ref(&report), r, &opts)? {
        report.complementary = Some(complementary(&report, r, alpha)?);
    }

    let out = ReportOutput {
        observable_set: set.name.clone(),
        basis: basis.describe(),
        report,
        moments,
    };
    emit(&a.out, stdout, &to_json(&out))?;
    Ok(0)
}
