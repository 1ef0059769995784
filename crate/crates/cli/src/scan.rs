use std::collections::BTreeMap;
use std::io::Write;

use clap::Args;
use rand::Rng;
use rayon::prelude::*;

use urkit_core::io::{Family, ParamValue, FAMILY_NAMES};
use urkit_core::moments::{MomentOptions, StateRef};
use urkit_core::random::{self, DEFAULT_SEED};
use urkit_core::urcheck::{char_ur_report, complementary, ReportOptions};
use urkit_core::{BasisSpec, URReport};

use crate::report::{family_alpha, observable_set_for, parse_alpha};
use crate::{emit, invalid, key_value, parse_orders, resolve_cutoff, CliError, CliResult, OutArg};

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(FAMILY_NAMES))]
    pub family: String,
    /// Observable set, as for `report`.
    #[arg(long)]
    pub observables: String,
    #[arg(long)]
    pub orders: Option<String>,
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Fixed parameter `key=value`.
    #[arg(long = "set", value_name = "KEY=VALUE", allow_hyphen_values = true)]
    pub fixed: Vec<String>,
    /// Grid axis `key=lo:hi:n` (endpoints included). The first axis varies
    /// slowest. `alpha.re` / `alpha.im` style keys set one part of a
    /// complex parameter.
    #[arg(long = "grid", value_name = "KEY=LO:HI:N", allow_hyphen_values = true)]
    pub grid: Vec<String>,
    /// Uniformly sampled axis `key=lo:hi`.
    #[arg(long = "random", value_name = "KEY=LO:HI", allow_hyphen_values = true)]
    pub random: Vec<String>,
    /// Random samples per grid point.
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads. Rows come out in grid order for any value.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Complementary scale, as for `report`. `variance` takes the largest
    /// product-of-variances bound over the whole scan.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub complementary_order: Option<usize>,
    #[arg(long, default_value_t = MomentOptions::default().tail_limit)]
    pub tail_limit: f64,
    #[command(flatten)]
    pub out: OutArg,
}

/// One scan point: its index and the scanned parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub index: usize,
    pub values: Vec<(String, f64)>,
}

fn parse_axis(s: &str, parts: usize) -> CliResult<(String, Vec<f64>)> {
    let (key, spec) = key_value(s)?;
    let nums: Vec<&str> = spec.split(':').collect();
    if nums.len() != parts {
        return Err(invalid(format!("axis {s:?} needs {parts} ':'-separated numbers")));
    }
    let vals = nums
        .iter()
        .map(|t| t.parse::<f64>().map_err(|_| invalid(format!("bad number {t:?} in {s:?}"))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok((key, vals))
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Expands grid and random axes into points. Random values at point `i`
/// are drawn from a generator seeded by `seed + i`, so they do not depend
/// on evaluation order.
pub fn scan_points(grid: &[String], rand_axes: &[String], samples: usize, seed: u64) -> CliResult<Vec<ScanPoint>> {
    if samples == 0 {
        return Err(invalid("--samples must be at least 1"));
    }
    let mut axes = Vec::new();
    for g in grid {
        let (key, v) = parse_axis(g, 3)?;
        let n = v[2];
        if !(n >= 1.0 && n.fract() == 0.0) {
            return Err(invalid(format!("grid {g:?} needs a positive integer count")));
        }
        axes.push((key, linspace(v[0], v[1], n as usize)));
    }
    let rand_axes = rand_axes
        .iter()
        .map(|s| {
            let (k, v) = parse_axis(s, 2)?;
            if !(v[0] <= v[1]) {
                return Err(invalid(format!("random axis {s:?} needs lo <= hi")));
            }
            Ok((k, v[0], v[1]))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let n_grid: usize = axes.iter().map(|(_, v)| v.len()).product();
    let mut points = Vec::with_capacity(n_grid * samples);
    for g in 0..n_grid {
        let mut fixed = Vec::with_capacity(axes.len());
        let mut rem = g;
        for (key, vals) in axes.iter().rev() {
            fixed.push((key.clone(), vals[rem % vals.len()]));
            rem /= vals.len();
        }
        fixed.reverse();
        for s in 0..samples {
            let index = g * samples + s;
            let mut rng = random::rng(seed.wrapping_add(index as u64));
            let mut values = fixed.clone();
            for (key, lo, hi) in &rand_axes {
                values.push((key.clone(), lo + (hi - lo) * rng.random::<f64>()));
            }
            points.push(ScanPoint { index, values });
        }
    }
    Ok(points)
}

/// Parameter map of a point: fixed text values overlaid with scanned reals,
/// `key.re` / `key.im` pairs joined into one complex value.
fn point_params(fixed: &BTreeMap<String, ParamValue>, p: &ScanPoint) -> BTreeMap<String, ParamValue> {
    let mut m = fixed.clone();
    let mut parts: BTreeMap<String, [f64; 2]> = BTreeMap::new();
    for (key, x) in &p.values {
        if let Some(base) = key.strip_suffix(".re") {
            parts.entry(base.to_string()).or_default()[0] = *x;
        } else if let Some(base) = key.strip_suffix(".im") {
            parts.entry(base.to_string()).or_default()[1] = *x;
        } else {
            m.insert(key.clone(), ParamValue::Real(*x));
        }
    }
    for (key, z) in parts {
        m.insert(key, ParamValue::Complex(z));
    }
    m
}

struct Row {
    tail_mass: f64,
    report: URReport,
}

fn eval_point(
    family: &str,
    fixed: &BTreeMap<String, ParamValue>,
    p: &ScanPoint,
    cutoff: usize,
    observables: &str,
    opts: &ReportOptions,
) -> CliResult<Row> {
    let psi = Family::from_params(family, &point_params(fixed, p))?.build(cutoff)?;
    // scanned k or j changes the space, so the set follows each state
    let set = observable_set_for(observables, &psi.basis)?;
    let report = char_ur_report(&set, &[StateRef::from(&psi)], opts)?;
    Ok(Row {
        tail_mass: psi.tail_mass,
        report,
    })
}

fn fmt(x: f64) -> String {
    format!("{x:?}")
}

pub fn run(a: &ScanArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    if a.jobs == 0 {
        return Err(invalid("--jobs must be at least 1"));
    }
    let cutoff = resolve_cutoff(a.cutoff)?;
    let mut fixed = BTreeMap::new();
    for kv in &a.fixed {
        let (k, v) = key_value(kv)?;
        fixed.insert(k, ParamValue::Text(v));
    }
    let points = scan_points(&a.grid, &a.random, a.samples, a.seed)?;

    // Set size and the su(2) default scale come from the first state that builds.
    let mut first_err = None;
    let mut basis: Option<BasisSpec> = None;
    for p in &points {
        match Family::from_params(&a.family, &point_params(&fixed, p)).and_then(|f| f.build(cutoff)) {
            Ok(psi) => {
                basis = Some(psi.basis);
                break;
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let basis = match basis {
        Some(b) => b,
        None => return Err(first_err.expect("at least one point failed").into()),
    };
    let set = observable_set_for(&a.observables, &basis)?;
    let orders = match a.orders.as_deref() {
        Some(s) => parse_orders(s)?,
        None => (1..=set.len()).collect(),
    };
    if let Some(bad) = orders.iter().find(|r| **r > set.len()) {
        return Err(invalid(format!("order {bad} exceeds the set size {}", set.len())));
    }
    let opts = ReportOptions {
        orders: Some(orders.clone()),
        moments: MomentOptions { tail_limit: a.tail_limit },
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    let rows: Vec<CliResult<Row>> = pool.install(|| {
        points
            .par_iter()
            .map(|p| eval_point(&a.family, &fixed, p, cutoff, &a.observables, &opts))
            .collect()
    });

    let r_comp = a.complementary_order.unwrap_or(*orders.iter().max().expect("orders are nonempty"));
    if !orders.contains(&r_comp) {
        return Err(invalid(format!("complementary order {r_comp} is not among the scanned orders")));
    }
    let ok: Vec<URReport> = rows.iter().filter_map(|r| r.as_ref().ok().map(|r| r.report.clone())).collect();
    let alpha_spec = a.alpha.as_deref().map(parse_alpha).transpose()?;
    let alpha = if ok.is_empty() {
        None
    } else {
        family_alpha(alpha_spec, &set, &ok, r_comp, &opts)?
    };

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = vec!["index".into()];
    header.extend(points[0].values.iter().map(|(k, _)| k.clone()));
    header.extend(["status".into(), "tail_mass".into()]);
    for r in &orders {
        header.extend([format!("c{r}_sigma"), format!("c{r}_comm"), format!("gap{r}"), format!("saturated{r}")]);
    }
    header.push("min_gap".into());
    if alpha.is_some() {
        header.extend(["alpha".into(), "p_sq".into(), "v_sq".into()]);
    }
    w.write_record(&header)?;

    for (p, row) in points.iter().zip(&rows) {
        let mut rec: Vec<String> = vec![p.index.to_string()];
        rec.extend(p.values.iter().map(|(_, x)| fmt(*x)));
        match row {
            Ok(row) => {
                rec.extend(["ok".into(), fmt(row.tail_mass)]);
                for r in &orders {
                    let o = row.report.order(*r).expect("requested orders are present");
                    rec.extend([fmt(o.c_sigma), fmt(o.c_comm), fmt(o.gap), o.saturated.to_string()]);
                }
                rec.push(fmt(row.report.min_gap()));
                if let Some(al) = alpha {
                    let c = complementary(&row.report, r_comp, al)?;
                    rec.extend([fmt(al), fmt(c.p_sq), fmt(c.v_sq)]);
                }
            }
            Err(e) => {
                rec.extend([e.kind().to_string(), String::new()]);
                let blanks = 4 * orders.len() + 1 + if alpha.is_some() { 3 } else { 0 };
                rec.extend(std::iter::repeat_n(String::new(), blanks));
            }
        }
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    emit(&a.out, stdout, &String::from_utf8(bytes).expect("csv output is UTF-8"))?;
    Ok(0)
}
