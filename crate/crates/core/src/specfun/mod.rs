//! Pochhammer symbols, log-Gamma with sign, confluent 0F1 and terminating 2F1.

pub mod dd;

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};
use dd::DDComplex;

/// Value of a summed series together with convergence bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: Complex64,
    pub terms_used: usize,
    pub converged: bool,
}

const MAX_TERMS: usize = 10_000;

/// Rising factorial `(a)_n = a (a+1) … (a+n-1)`.
pub fn pochhammer(a: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, m| acc * (a + m as f64))
}

/// `ln|Γ(x)|` and the sign of `Γ(x)` for real `x`; poles are rejected.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(invalid(format!("ln_gamma of non-finite {x}")));
    }
    if x > 0.0 {
        return Ok((ln_gamma(x), 1.0));
    }
    if x == x.floor() {
        return Err(invalid(format!("Gamma has a pole at {x}")));
    }
    let s = (std::f64::consts::PI * x).sin();
    let lg = std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma(1.0 - x);
    Ok((lg, s.signum()))
}

/// `ln (a)_n` for `a > 0`.
pub fn ln_pochhammer(a: f64, n: usize) -> f64 {
    ln_gamma(a + n as f64) - ln_gamma(a)
}

/// `ln n!`.
pub fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Series for `0F1(;c;x) = Σ xⁿ / ((c)_n n!)` with `c > 0`, `x ≥ 0`.
pub fn hyp0f1_series(c: f64, x: f64) -> Result<SeriesResult> {
    if !(c > 0.0) {
        return Err(invalid(format!("0F1 needs c > 0, got {c}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(invalid(format!("0F1 needs finite x >= 0, got {x}")));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= x / ((c + nf) * (nf + 1.0));
        sum += term;
        // terms are positive and eventually decreasing
        if term < 1e-17 * sum && nf + 1.0 > x / c {
            return Ok(SeriesResult {
                value: Complex64::new(sum, 0.0),
                terms_used: n + 2,
                converged: true,
            });
        }
        if !sum.is_finite() {
            break;
        }
    }
    Err(Error::Numeric(format!(
        "0F1({c}; {x}) did not converge within {MAX_TERMS} terms"
    )))
}

pub fn hyp0f1(c: f64, x: f64) -> Result<f64> {
    Ok(hyp0f1_series(c, x)?.value.re)
}

fn check_no_pole(c: Complex64, n: usize) -> Result<()> {
    for m in 0..n {
        if (c + m as f64).norm() == 0.0 {
            return Err(invalid(format!(
                "2F1 denominator (c)_m vanishes at m = {m} for c = {c}"
            )));
        }
    }
    Ok(())
}

/// `2F1(a, -n; c; x) = Σ_{m=0}^{n} (a)_m (-n)_m / ((c)_m m!) x^m`, summed
/// forward in double precision.
pub fn gauss2f1_terminating(a: Complex64, n: usize, c: Complex64, x: Complex64) -> Result<Complex64> {
    check_no_pole(c, n)?;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for m in 0..n {
        let mf = m as f64;
        term = term * (a + mf) * (mf - n as f64) / ((c + mf) * (mf + 1.0)) * x;
        sum += term;
    }
    Ok(sum)
}

/// Same polynomial evaluated by Horner's rule from the highest power down.
pub fn gauss2f1_terminating_horner(
    a: Complex64,
    n: usize,
    c: Complex64,
    x: Complex64,
) -> Result<Complex64> {
    check_no_pole(c, n)?;
    // nested form 1 + t_1 x (1 + t_2 x (1 + ...)), t_{m+1} = ratio of terms
    let mut acc = Complex64::new(1.0, 0.0);
    for m in (0..n).rev() {
        let mf = m as f64;
        let ratio = (a + mf) * (mf - n as f64) / ((c + mf) * (mf + 1.0));
        acc = Complex64::new(1.0, 0.0) + ratio * x * acc;
    }
    Ok(acc)
}

/// Terminating 2F1 summed in double-double arithmetic. Used where the
/// polynomial suffers heavy cancellation.
pub fn gauss2f1_terminating_dd(
    a: Complex64,
    n: usize,
    c: Complex64,
    x: Complex64,
) -> Result<Complex64> {
    check_no_pole(c, n)?;
    gauss2f1_terminating_dd_exact(a.into(), n, c.into(), x.into())
}

pub(crate) fn gauss2f1_terminating_dd_exact(
    a: DDComplex,
    n: usize,
    c: DDComplex,
    x: DDComplex,
) -> Result<Complex64> {
    let mut term = DDComplex::ONE;
    let mut sum = DDComplex::ONE;
    for m in 0..n {
        let mf = DDComplex::from(m as f64);
        let num = (a + mf) * DDComplex::from(m as f64 - n as f64) * x;
        let den = (c + mf) * DDComplex::from(m as f64 + 1.0);
        term = term * num / den;
        sum = sum + term;
    }
    let v = sum.to_c64();
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Numeric(format!("terminating 2F1 overflowed at n = {n}")));
    }
    Ok(v)
}
