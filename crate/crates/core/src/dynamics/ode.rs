//! Adaptive Dormand–Prince 5(4) integration for small fixed-size systems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-12,
            atol: 1e-14,
            max_steps: 2_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` from `t0` through every time in `ts`
/// (nondecreasing, all ≥ `t0`) and returns the state at each.
pub fn integrate<const N: usize, F>(f: F, t0: f64, y0: [f64; N], ts: &[f64], tol: &Tolerances) -> Result<Vec<[f64; N]>>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let mut out = Vec::with_capacity(ts.len());
    let mut t = t0;
    let mut y = y0;
    let mut h: f64 = 0.0;
    let mut steps = 0usize;
    for &target in ts {
        if !(target >= t) {
            return Err(crate::error::invalid("integration times must be nondecreasing and start at t0"));
        }
        if h == 0.0 {
            h = ((target - t) * 1e-3).max(1e-6);
        }
        while t < target {
            steps += 1;
            if steps > tol.max_steps {
                return Err(Error::StepSize(format!("more than {} steps before t = {target}", tol.max_steps)));
            }
            let last = t + h >= target;
            let step = if last { target - t } else { h };
            let (y_new, err) = dp_step(&f, t, &y, step)?;
            let mut norm = 0.0;
            for i in 0..N {
                let sc = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
                norm += (err[i] / sc).powi(2);
            }
            let norm = (norm / N as f64).sqrt();
            if !norm.is_finite() {
                return Err(Error::StepSize(format!("non-finite error estimate at t = {t}")));
            }
            if norm <= 1.0 {
                t = if last { target } else { t + step };
                y = y_new;
            }
            let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
            if !(last && norm <= 1.0) {
                h = step * factor;
            }
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepSize(format!("step size underflow at t = {t}")));
            }
        }
        out.push(y);
    }
    Ok(out)
}

fn dp_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64) -> Result<([f64; N], [f64; N])>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let mut k = [[0.0; N]; 7];
    for s in 0..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        k[s] = f(t + C[s] * h, &ys)?;
    }
    let mut y5 = *y;
    let mut err = [0.0; N];
    for s in 0..7 {
        for i in 0..N {
            y5[i] += h * B5[s] * k[s][i];
            err[i] += h * (B5[s] - B4[s]) * k[s][i];
        }
    }
    Ok((y5, err))
}
