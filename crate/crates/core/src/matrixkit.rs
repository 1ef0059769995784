//! Dense complex matrix services.
//!
//! Everything here works on `nalgebra::DMatrix<Complex64>`. The characteristic
//! coefficients follow the convention `det(M - λI) = Σ C_r (-λ)^{n-r}`, so
//! `C_1` is the trace, `C_n` the determinant and `C_r` the sum of the order-r
//! principal minors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type RMatrix = DMatrix<f64>;

/// Entrywise Hermiticity tolerance, relative to the max-norm.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub(crate) const I: C64 = C64::new(0.0, 1.0);
pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Validated square matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix(CMatrix);

impl SquareMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        check_square(&m)?;
        check_finite(&m)?;
        Ok(SquareMatrix(m))
    }

    /// Build from row-major entries; `entries.len()` must be `dim²`.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(invalid(format!(
                "expected {} entries for dim {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(CMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }
}

/// Coefficients `C_0..C_n` of the characteristic polynomial, `C_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharCoeffs {
    pub coeffs: Vec<C64>,
}

impl CharCoeffs {
    pub fn order(&self, r: usize) -> C64 {
        self.coeffs[r]
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len() - 1
    }
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(invalid(format!(
            "matrix must be square and non-empty, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(invalid("matrix has non-finite entries"));
    }
    Ok(())
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| c(x, 0.0))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Characteristic coefficients by the Faddeev–LeVerrier recurrence.
pub fn char_coeffs(m: &CMatrix) -> Result<CharCoeffs> {
    check_square(m)?;
    check_finite(m)?;
    let n = m.nrows();
    // c[k] are the coefficients of det(λI - M) = Σ c[k] λ^k with c[n] = 1.
    let mut c = vec![ZERO; n + 1];
    c[n] = ONE;
    let mut mk = CMatrix::zeros(n, n);
    for k in 1..=n {
        mk = m * &mk;
        for i in 0..n {
            mk[(i, i)] += c[n - k + 1];
        }
        let am = m * &mk;
        c[n - k] = -am.trace() / (k as f64);
    }
    let mut coeffs: Vec<C64> = (0..=n)
        .map(|r| if r % 2 == 0 { c[n - r] } else { -c[n - r] })
        .collect();
    coeffs[0] = ONE;
    Ok(CharCoeffs { coeffs })
}

/// Real-matrix convenience wrapper returning real coefficients.
pub fn char_coeffs_real(m: &RMatrix) -> Result<Vec<f64>> {
    Ok(char_coeffs(&to_complex(m))?
        .coeffs
        .into_iter()
        .map(|z| z.re)
        .collect())
}

/// Determinant via LU.
pub fn det(m: &CMatrix) -> Result<C64> {
    check_square(m)?;
    Ok(m.clone().lu().determinant())
}

/// Sum of all principal minors of order `r`, by explicit enumeration.
pub fn principal_minor_sum(m: &CMatrix, r: usize) -> Result<C64> {
    check_square(m)?;
    let n = m.nrows();
    if r == 0 || r > n {
        return Err(invalid(format!("order {r} out of range 1..={n}")));
    }
    let mut total = ZERO;
    for_each_combination(n, r, &mut |idx| {
        let sub = CMatrix::from_fn(r, r, |i, j| m[(idx[i], idx[j])]);
        total += sub.lu().determinant();
    });
    Ok(total)
}

fn for_each_combination(n: usize, r: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == r {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, f);
            cur.pop();
        }
    }
    rec(0, n, r, &mut Vec::with_capacity(r), f);
}

/// Largest entrywise deviation from Hermiticity, relative to the max-norm.
pub fn hermitian_defect(h: &CMatrix) -> f64 {
    let scale = max_abs(h);
    if scale == 0.0 {
        return 0.0;
    }
    let n = h.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst / scale
}

fn check_hermitian(h: &CMatrix) -> Result<()> {
    check_square(h)?;
    check_finite(h)?;
    let d = hermitian_defect(h);
    if d > HERMITIAN_TOL {
        return Err(invalid(format!(
            "matrix is not Hermitian: relative defect {d:.3e}"
        )));
    }
    Ok(())
}

fn hermitian_part(h: &CMatrix) -> CMatrix {
    (h + h.adjoint()) * c(0.5, 0.0)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn psd_min_eig(h: &CMatrix) -> Result<f64> {
    check_hermitian(h)?;
    let vals = hermitian_part(h).symmetric_eigenvalues();
    Ok(vals.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Eigendecomposition of a Hermitian matrix with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector for `values[i]`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(h: &CMatrix) -> Result<Self> {
        check_hermitian(h)?;
        let eig = hermitian_part(h).symmetric_eigen();
        let n = h.nrows();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
        Ok(HermitianEigen { values, vectors })
    }

    /// `exp(-i t H) x`, in O(n²) per call.
    pub fn apply_phase_exp(&self, t: f64, x: &CVector) -> CVector {
        let mut y = self.vectors.ad_mul(x);
        for (yi, &lam) in y.iter_mut().zip(&self.values) {
            *yi *= C64::from_polar(1.0, -t * lam);
        }
        &self.vectors * y
    }

    /// `f(H)` for a scalar function applied to the spectrum.
    pub fn apply_fn(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let s = f(self.values[j]);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// One eigenpair of a general complex matrix.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: C64,
    /// Unit-norm eigenvector.
    pub vector: CVector,
    /// `‖Mv − λv‖ / max(‖M‖_max, tiny)`.
    pub residual: f64,
    /// Distance to the nearest other eigenvalue, relative to `‖M‖_max`.
    pub separation: f64,
}

/// All eigenpairs of a general complex matrix via complex Schur form and
/// triangular back-substitution.
pub fn eigen_general(m: &CMatrix) -> Result<Vec<EigenPair>> {
    check_square(m)?;
    check_finite(m)?;
    let n = m.nrows();
    let scale = max_abs(m).max(f64::MIN_POSITIVE);
    let schur = nalgebra::Schur::try_new(m.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let lambdas: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let smin = (f64::EPSILON * scale).max(f64::MIN_POSITIVE * 1e20);

    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lam = lambdas[k];
        // Solve (T[..k,..k] - λ I) x = -T[..k, k], x_k = 1.
        let mut x = CVector::zeros(n);
        x[k] = ONE;
        for i in (0..k).rev() {
            let mut s = t[(i, k)];
            for j in i + 1..k {
                s += t[(i, j)] * x[j];
            }
            let mut d = t[(i, i)] - lam;
            if d.norm() < smin {
                d = c(smin, 0.0);
            }
            x[i] = -s / d;
            // rescale to avoid overflow on nearly defective blocks
            let xm = x.iter().fold(0.0f64, |a, z| a.max(z.norm()));
            if xm > 1e100 {
                x /= c(xm, 0.0);
            }
        }
        let mut v = &q * x;
        let nv = v.norm();
        v /= c(nv, 0.0);
        let res = (m * &v - &v * lam).norm() / scale;
        let sep = lambdas
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &mu)| (mu - lam).norm())
            .fold(f64::INFINITY, f64::min)
            / scale;
        out.push(EigenPair {
            value: lam,
            vector: v,
            residual: res,
            separation: sep,
        });
    }
    Ok(out)
}

/// Unit vector spanning the (numerical) kernel of `M − zI` restricted to the
/// first `n−1` rows, i.e. the solution of the truncated eigen-recurrence.
pub fn kernel_vector(m: &CMatrix, z: C64) -> Result<(CVector, f64)> {
    check_square(m)?;
    check_finite(m)?;
    let n = m.nrows();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] -= z;
    }
    let full = a.clone();
    for j in 0..n {
        a[(n - 1, j)] = ZERO;
    }
    let svd = a.svd(false, true);
    let vt = svd
        .v_t
        .ok_or_else(|| Error::Numeric("SVD failed to produce right vectors".into()))?;
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let v: CVector = vt.row(imin).adjoint();
    let v = &v / c(v.norm(), 0.0);
    let res = (&full * &v).norm();
    Ok((v, res))
}

/// Right singular vector of `M − zI` for its smallest singular value, with
/// the residual `‖(M − zI)v‖`.
pub fn least_singular_vector(m: &CMatrix, z: C64) -> Result<(CVector, f64)> {
    check_square(m)?;
    check_finite(m)?;
    let mut a = m.clone();
    for i in 0..a.nrows() {
        a[(i, i)] -= z;
    }
    let svd = a.clone().svd(false, true);
    let vt = svd
        .v_t
        .ok_or_else(|| Error::Numeric("SVD failed to produce right vectors".into()))?;
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let v: CVector = vt.row(imin).adjoint();
    let v = &v / c(v.norm(), 0.0);
    let res = (&a * &v).norm();
    Ok((v, res))
}

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    check_square(a)?;
    check_finite(a)?;
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    const THETA13: f64 = 5.371920351148152;
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm1 > THETA13 {
        (norm1 / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * c(0.5f64.powi(s), 0.0);
    let id = CMatrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let r = |x: f64| c(x, 0.0);
    let u_inner = &a6 * (&a6 * r(B[13]) + &a4 * r(B[11]) + &a2 * r(B[9]))
        + &a6 * r(B[7])
        + &a4 * r(B[5])
        + &a2 * r(B[3])
        + &id * r(B[1]);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * r(B[12]) + &a4 * r(B[10]) + &a2 * r(B[8]))
        + &a6 * r(B[6])
        + &a4 * r(B[4])
        + &a2 * r(B[2])
        + &id * r(B[0]);
    let p = &v + &u;
    let q = &v - &u;
    let mut f = q
        .lu()
        .solve(&p)
        .ok_or_else(|| Error::Numeric("singular Padé denominator".into()))?;
    for _ in 0..s {
        f = &f * &f;
    }
    Ok(f)
}

/// Inverse of a general complex matrix; `None` when singular.
pub fn inverse(m: &CMatrix) -> Option<CMatrix> {
    m.clone().try_inverse()
}

/// `⟨x|y⟩` with the first argument conjugated.
pub fn inner(x: &CVector, y: &CVector) -> C64 {
    x.dotc(y)
}
