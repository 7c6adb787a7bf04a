//! Dense complex matrix kernel.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Index rearrangements
//! (partial trace, partial transpose, realignment) are written out
//! explicitly over mixed-radix multi-indices; spectral work is delegated
//! to nalgebra.

use nalgebra::{DMatrix, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{EntError, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Ordered subsystem dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimSpec {
    dims: Vec<usize>,
}

impl DimSpec {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(EntError::Dim("empty dimension list".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(EntError::Dim(format!("subsystem dimension {d} < 2")));
        }
        Ok(DimSpec { dims })
    }

    pub fn bipartite(d1: usize, d2: usize) -> Result<Self> {
        Self::new(vec![d1, d2])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn order(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn get(&self, i: usize) -> usize {
        self.dims[i]
    }

    fn check_square(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() || m.nrows() != self.order() {
            return Err(EntError::Dim(format!(
                "matrix {}x{} does not match dims {:?}",
                m.nrows(),
                m.ncols(),
                self.dims
            )));
        }
        Ok(())
    }

    fn check_part(&self, part: usize) -> Result<()> {
        if part >= self.dims.len() {
            return Err(EntError::Dim(format!(
                "subsystem {part} out of range for {} parties",
                self.dims.len()
            )));
        }
        Ok(())
    }

    fn two(&self) -> Result<(usize, usize)> {
        if self.dims.len() != 2 {
            return Err(EntError::Dim(format!("expected bipartite dims, got {:?}", self.dims)));
        }
        Ok((self.dims[0], self.dims[1]))
    }

    fn digits(&self, mut idx: usize, out: &mut [usize]) {
        for (k, &d) in self.dims.iter().enumerate().rev() {
            out[k] = idx % d;
            idx /= d;
        }
    }

    fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.dims).fold(0, |acc, (&x, &d)| acc * d + x)
    }
}

impl std::fmt::Display for DimSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", s.join("x"))
    }
}

/// Rank cutoff policy for singular values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankTol {
    Relative(f64),
    Absolute(f64),
}

impl Default for RankTol {
    fn default() -> Self {
        RankTol::Relative(DEFAULT_RANK_TOL)
    }
}

impl RankTol {
    pub fn cutoff(&self, largest: f64) -> f64 {
        match *self {
            RankTol::Relative(r) => r * largest,
            RankTol::Absolute(a) => a,
        }
    }

    /// Relative tolerance from `ENTKIT_DEFAULT_TOL`, falling back to the default.
    pub fn from_env() -> Self {
        std::env::var("ENTKIT_DEFAULT_TOL")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v >= 0.0)
            .map(RankTol::Relative)
            .unwrap_or_default()
    }
}

/// Sorted real spectrum with a rank count.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub values: Vec<f64>,
    pub tolerance: f64,
    pub rank_at_tolerance: usize,
}

impl SpectralSummary {
    fn from_values(mut values: Vec<f64>, tol: RankTol) -> Self {
        values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        let largest = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tolerance = tol.cutoff(largest);
        let rank_at_tolerance = values.iter().filter(|v| v.abs() > tolerance).count();
        SpectralSummary { values, tolerance, rank_at_tolerance }
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<ComplexMatrix> {
    if entries.len() != rows * cols {
        return Err(EntError::Dim(format!(
            "{} entries for a {rows}x{cols} matrix",
            entries.len()
        )));
    }
    if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(EntError::Input("non-finite matrix entry".into()));
    }
    Ok(DMatrix::from_row_slice(rows, cols, entries))
}

pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    assert_eq!(entries.len(), rows * cols);
    DMatrix::from_fn(rows, cols, |i, j| re(entries[i * cols + j]))
}

pub fn to_row_major(m: &ComplexMatrix) -> Vec<C64> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

pub fn identity(n: usize) -> ComplexMatrix {
    DMatrix::identity(n, n)
}

pub fn diag_real(d: &[f64]) -> ComplexMatrix {
    let n = d.len();
    DMatrix::from_fn(n, n, |i, j| if i == j { re(d[i]) } else { C64::new(0.0, 0.0) })
}

/// Column vector with a single unit entry.
pub fn basis_ket(dim: usize, idx: usize) -> ComplexMatrix {
    let mut v = DMatrix::zeros(dim, 1);
    v[(idx, 0)] = re(1.0);
    v
}

/// Column vector from real amplitudes at given positions.
pub fn ket(dim: usize, amps: &[(usize, f64)]) -> ComplexMatrix {
    let mut v = DMatrix::zeros(dim, 1);
    for &(i, a) in amps {
        v[(i, 0)] += re(a);
    }
    v
}

/// `|v⟩⟨v|` for a column vector.
pub fn projector(v: &ComplexMatrix) -> ComplexMatrix {
    v * v.adjoint()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

/// `max|A − A†|`.
pub fn hermitian_defect(a: &ComplexMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    (a - a.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

pub fn is_hermitian(a: &ComplexMatrix) -> bool {
    hermitian_defect(a) <= HERMITIAN_TOL * max_abs(a).max(1.0)
}

pub fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()).scale(0.5)
}

pub fn is_real(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.im.abs() <= HERMITIAN_TOL * z.norm().max(1.0))
}

pub fn partial_trace(rho: &ComplexMatrix, dims: &DimSpec, keep: usize) -> Result<ComplexMatrix> {
    dims.check_square(rho)?;
    dims.check_part(keep)?;
    let n = dims.order();
    let dk = dims.get(keep);
    let mut out = DMatrix::zeros(dk, dk);
    let mut ri = vec![0usize; dims.len()];
    let mut ci = vec![0usize; dims.len()];
    for r in 0..n {
        dims.digits(r, &mut ri);
        for col in 0..n {
            dims.digits(col, &mut ci);
            let matched = (0..dims.len()).all(|k| k == keep || ri[k] == ci[k]);
            if matched {
                out[(ri[keep], ci[keep])] += rho[(r, col)];
            }
        }
    }
    Ok(out)
}

pub fn partial_transpose(rho: &ComplexMatrix, dims: &DimSpec, part: usize) -> Result<ComplexMatrix> {
    dims.check_square(rho)?;
    dims.check_part(part)?;
    let n = dims.order();
    let mut out = DMatrix::zeros(n, n);
    let mut ri = vec![0usize; dims.len()];
    let mut ci = vec![0usize; dims.len()];
    for r in 0..n {
        dims.digits(r, &mut ri);
        for col in 0..n {
            dims.digits(col, &mut ci);
            std::mem::swap(&mut ri[part], &mut ci[part]);
            out[(dims.index(&ri), dims.index(&ci))] = rho[(r, col)];
            std::mem::swap(&mut ri[part], &mut ci[part]);
        }
    }
    Ok(out)
}

/// Realigned matrix: row `i·d₁+j` is the row-major vec of block `(i, j)`.
pub fn realign(rho: &ComplexMatrix, dims: &DimSpec) -> Result<ComplexMatrix> {
    dims.check_square(rho)?;
    let (d1, d2) = dims.two()?;
    let mut out = DMatrix::zeros(d1 * d1, d2 * d2);
    for i in 0..d1 {
        for j in 0..d1 {
            for k in 0..d2 {
                for l in 0..d2 {
                    out[(i * d1 + j, k * d2 + l)] = rho[(i * d2 + k, j * d2 + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Row-major flattening.
pub fn vec_row_major(m: &ComplexMatrix) -> Vec<C64> {
    to_row_major(m)
}

pub fn svd_values(a: &ComplexMatrix, tol: RankTol) -> Result<SpectralSummary> {
    if a.is_empty() {
        return Ok(SpectralSummary::from_values(Vec::new(), tol));
    }
    let svd = SVD::try_new(a.clone(), false, false, f64::EPSILON, 100_000)
        .ok_or_else(|| EntError::Numerical("SVD did not converge".into()))?;
    let values: Vec<f64> = svd.singular_values.iter().copied().collect();
    Ok(SpectralSummary::from_values(values, tol))
}

fn sym_eigen(a: &ComplexMatrix) -> Result<SymmetricEigen<C64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(a.clone(), f64::EPSILON, 100_000)
        .ok_or_else(|| EntError::Numerical("Hermitian eigensolver did not converge".into()))
}

fn hermitian_input(a: &ComplexMatrix, symmetrize: bool) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(EntError::Dim(format!("{}x{} matrix is not square", a.nrows(), a.ncols())));
    }
    let defect = hermitian_defect(a);
    if defect > HERMITIAN_TOL * max_abs(a).max(1.0) && !symmetrize {
        return Err(EntError::NotHermitian(defect));
    }
    Ok(hermitian_part(a))
}

/// Real eigenvalues of a Hermitian matrix, descending.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<SpectralSummary> {
    eig_hermitian_with(a, false)
}

/// As [`eig_hermitian`]; with `symmetrize` the input is replaced by `(A+A†)/2` instead of rejected.
pub fn eig_hermitian_with(a: &ComplexMatrix, symmetrize: bool) -> Result<SpectralSummary> {
    let h = hermitian_input(a, symmetrize)?;
    let e = sym_eigen(&h)?;
    Ok(SpectralSummary::from_values(e.eigenvalues.iter().copied().collect(), RankTol::default()))
}

/// Eigenvalues (descending) with eigenvectors as matching columns.
pub fn eigh(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let h = hermitian_input(a, false)?;
    let e = sym_eigen(&h)?;
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        e.eigenvalues[j]
            .partial_cmp(&e.eigenvalues[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vals = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, k| e.eigenvectors[(r, order[k])]);
    Ok((vals, vecs))
}

pub fn lambda_min(a: &ComplexMatrix) -> Result<f64> {
    Ok(eig_hermitian(a)?.min())
}

/// Eigenvalues of a general square matrix from its complex Schur form.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    if !a.is_square() {
        return Err(EntError::Dim("eigenvalues of a non-square matrix".into()));
    }
    let s = Schur::try_new(a.clone(), f64::EPSILON, 100_000)
        .ok_or_else(|| EntError::Numerical("Schur decomposition did not converge".into()))?;
    let (_, t) = s.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    svd_values(a, RankTol::default()).map(|s| s.sum()).unwrap_or(f64::NAN)
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    svd_values(a, RankTol::default()).map(|s| s.max()).unwrap_or(f64::NAN)
}

pub fn rank(a: &ComplexMatrix, tol: RankTol) -> Result<usize> {
    Ok(svd_values(a, tol)?.rank_at_tolerance)
}

pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

/// `Tr[Aᵏ]` for `k = 1..=upto` by repeated multiplication.
pub fn power_traces(a: &ComplexMatrix, upto: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(upto);
    if upto == 0 {
        return out;
    }
    let mut p = a.clone();
    out.push(p.trace());
    for _ in 1..upto {
        p = &p * a;
        out.push(p.trace());
    }
    out
}

/// `P = Σ |ij⟩⟨ji|` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut p = DMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            p[(i * d + j, j * d + i)] = re(1.0);
        }
    }
    p
}

/// Generalized Gell-Mann matrices, unnormalized (`Tr[ΛᵢΛⱼ] = 2δᵢⱼ`): symmetric, antisymmetric, diagonal.
pub fn gell_mann_raw(d: usize) -> Result<Vec<ComplexMatrix>> {
    if !(2..=4).contains(&d) {
        return Err(EntError::Input(format!("Gell-Mann basis for d = {d} not supported")));
    }
    let mut sym = Vec::new();
    let mut anti = Vec::new();
    for j in 0..d {
        for k in j + 1..d {
            let mut s = DMatrix::zeros(d, d);
            s[(j, k)] = re(1.0);
            s[(k, j)] = re(1.0);
            sym.push(s);
            let mut a = DMatrix::zeros(d, d);
            a[(j, k)] = c(0.0, -1.0);
            a[(k, j)] = c(0.0, 1.0);
            anti.push(a);
        }
    }
    let mut diag = Vec::new();
    for l in 1..d {
        let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = DMatrix::zeros(d, d);
        for i in 0..l {
            m[(i, i)] = re(scale);
        }
        m[(l, l)] = re(-(l as f64) * scale);
        diag.push(m);
    }
    sym.extend(anti);
    sym.extend(diag);
    Ok(sym)
}

/// Orthonormal operator basis: `I/√d` followed by the normalized Gell-Mann matrices.
pub fn gell_mann_basis(d: usize) -> Result<Vec<ComplexMatrix>> {
    let raw = gell_mann_raw(d)?;
    let mut out = Vec::with_capacity(d * d);
    out.push(identity(d).scale(1.0 / (d as f64).sqrt()));
    out.extend(raw.into_iter().map(|m| m.scale(std::f64::consts::FRAC_1_SQRT_2)));
    Ok(out)
}

/// Coefficients `a₁..a_upto` of `det(xI − A) = xⁿ − a₁xⁿ⁻¹ + a₂xⁿ⁻² − …` from power traces.
pub fn char_coeffs(a: &ComplexMatrix, upto: usize) -> Vec<f64> {
    let m: Vec<f64> = power_traces(a, upto).iter().map(|z| z.re).collect();
    coeffs_from_moments(&m)
}

/// Newton recursion `a_k = (1/k) Σ (−1)^{i−1} a_{k−i} m_i`.
pub fn coeffs_from_moments(m: &[f64]) -> Vec<f64> {
    let mut a = vec![1.0];
    for k in 1..=m.len() {
        let mut s = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            s += sign * a[k - i] * m[i - 1];
        }
        a.push(s / k as f64);
    }
    a.remove(0);
    a
}

/// `det(I + A)` for Hermitian `A` as `Π(1 + λᵢ)`.
pub fn det_one_plus(a: &ComplexMatrix) -> Result<f64> {
    let s = eig_hermitian(a)?;
    Ok(s.values.iter().map(|l| 1.0 + l).product())
}
