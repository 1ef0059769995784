use std::collections::BTreeMap;
use std::io::Write;

use clap::Args;

use urkit_core::io::{Family, ParamValue, FAMILY_NAMES};

use crate::{emit, key_value, resolve_cutoff, CliResult, OutArg};

/// Family parameters given as flags. Complex values accept `0.3+0.4i`,
/// `-2i` or `re,im`.
#[derive(Debug, Clone, Default, Args)]
pub struct FamilyParams {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    /// Squeeze magnitude, used with `--theta` instead of `--u`/`--v`.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Bargmann index.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Spin.
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<String>,
    /// Fock level of a squeezed number state.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    /// Any parameter as `key=value`.
    #[arg(long = "param", value_name = "KEY=VALUE", allow_hyphen_values = true)]
    pub extra: Vec<String>,
}

impl FamilyParams {
    pub fn to_map(&self) -> CliResult<BTreeMap<String, ParamValue>> {
        let named = [
            ("alpha", &self.alpha),
            ("xi", &self.xi),
            ("z", &self.z),
            ("tau", &self.tau),
            ("u", &self.u),
            ("v", &self.v),
            ("w", &self.w),
            ("r", &self.r),
            ("theta", &self.theta),
            ("k", &self.k),
            ("j", &self.j),
            ("m", &self.m),
        ];
        let mut map = BTreeMap::new();
        for (key, val) in named {
            if let Some(v) = val {
                map.insert(key.to_string(), ParamValue::Text(v.clone()));
            }
        }
        for kv in &self.extra {
            let (k, v) = key_value(kv)?;
            map.insert(k, ParamValue::Text(v));
        }
        Ok(map)
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// One of glauber, canonical-ss, squeezed-fock, bg-cs, su11-cs,
    /// even-cs, odd-cs, su2-cs, intelligent.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(FAMILY_NAMES))]
    pub family: String,
    /// Levels kept in truncated spaces (default: $URKIT_CUTOFF or 128).
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[command(flatten)]
    pub params: FamilyParams,
    #[command(flatten)]
    pub out: OutArg,
}

pub fn run(a: &StateArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let cutoff = resolve_cutoff(a.cutoff)?;
    let fam = Family::from_params(&a.family, &a.params.to_map()?)?;
    let mut json = fam.record(cutoff)?.to_json();
    json.push('\n');
    emit(&a.out, stdout, &json)?;
    Ok(0)
}
