//! Linear maps: `Φ_{α,β}`, Choi matrices, structural physical approximations of the
//! realignment and partial-transpose maps, and the three-qubit realignment.

use nalgebra::DMatrix;

use crate::error::{EntError, Result};
use crate::matkit::{
    eig_hermitian, eigenvalues, hermitian_defect, identity, kron, partial_transpose, realign,
    swap_operator, ComplexMatrix, DimSpec, HERMITIAN_TOL,
};
use crate::moments::{descartes_psd, lambda_min_lb};
use crate::statebank::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
}

impl MapParams {
    pub fn new(alpha: f64, beta: f64, p: f64) -> Result<Self> {
        if !(alpha >= 0.0 && beta >= 0.0) {
            return Err(EntError::Range(format!("alpha, beta must be nonnegative (got {alpha}, {beta})")));
        }
        check_p(p)?;
        Ok(MapParams { alpha, beta, p })
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(EntError::Range(format!("mixing probability p = {p} outside [0, 1]")));
    }
    Ok(())
}

/// `α ρ^{T_B} + β R(ρ)` on a `d⊗d` operator.
pub fn phi_matrix(a: &ComplexMatrix, d: usize, alpha: f64, beta: f64) -> Result<ComplexMatrix> {
    let dims = DimSpec::bipartite(d, d)?;
    Ok(partial_transpose(a, &dims, 1)?.scale(alpha) + realign(a, &dims)?.scale(beta))
}

pub fn phi_map(rho: &DensityMatrix, alpha: f64, beta: f64) -> Result<ComplexMatrix> {
    let d = rho.require_square()?;
    phi_matrix(&rho.matrix, d, alpha, beta)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(tag = "kind", content = "ratio", rename_all = "snake_case")]
pub enum RatioBound {
    /// Positive for every `α, β ≥ 0`.
    All,
    /// Positive when `α/β` is at least the ratio.
    AtLeast(f64),
    /// Positive when `α/β` is at most the ratio.
    AtMost(f64),
    /// No `α, β > 0` works.
    Never,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PositivityBound {
    pub case: u8,
    pub lambda_pt: f64,
    pub lambda_r: f64,
    pub bound: RatioBound,
}

/// Case split on the signs of `λ_min(ρ^{T_B})` and `λ_min(R(ρ))`.
pub fn phi_positivity_bound(rho: &DensityMatrix) -> Result<PositivityBound> {
    rho.require_square()?;
    let pt = partial_transpose(&rho.matrix, &rho.dims, 1)?;
    let r = realign(&rho.matrix, &rho.dims)?;
    let lambda_pt = eig_hermitian(&pt)?.min();
    let scale = r.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    if hermitian_defect(&r) > HERMITIAN_TOL * scale {
        return Ok(PositivityBound { case: 0, lambda_pt, lambda_r: f64::NAN, bound: RatioBound::NotApplicable });
    }
    let lambda_r = eig_hermitian(&r)?.min();
    let tol = 1e-12;
    let (case, bound) = match (lambda_pt >= -tol, lambda_r >= -tol) {
        (true, true) => (2, RatioBound::All),
        (true, false) if lambda_pt > tol => (1, RatioBound::AtLeast(-lambda_r / lambda_pt)),
        (true, false) => (1, RatioBound::Never),
        (false, true) => (3, RatioBound::AtMost(lambda_r / -lambda_pt)),
        (false, false) => (4, RatioBound::Never),
    };
    Ok(PositivityBound { case, lambda_pt, lambda_r, bound })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinearMap {
    /// `Φ_{α,β}` acting on `M_{d²}` for a `d⊗d` split.
    Phi { alpha: f64, beta: f64 },
    /// Full transpose on `M_d`.
    Transpose,
}

impl LinearMap {
    pub fn id(&self) -> String {
        match self {
            LinearMap::Phi { alpha, beta } => format!("phi(alpha={alpha},beta={beta})"),
            LinearMap::Transpose => "transpose".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    pub matrix: ComplexMatrix,
    pub source: String,
    pub input_dim: usize,
    pub hermitian: bool,
}

/// `C = Σ E_ij ⊗ Φ(E_ij)` over the matrix units of the input space.
pub fn choi_matrix(map: LinearMap, d: usize) -> Result<ChoiMatrix> {
    if d < 2 {
        return Err(EntError::Dim(format!("local dimension {d} < 2")));
    }
    let n = match map {
        LinearMap::Phi { .. } => d * d,
        LinearMap::Transpose => d,
    };
    let mut c = DMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let mut e = DMatrix::zeros(n, n);
            e[(i, j)] = crate::matkit::re(1.0);
            let image = match map {
                LinearMap::Phi { alpha, beta } => phi_matrix(&e, d, alpha, beta)?,
                LinearMap::Transpose => e.transpose(),
            };
            c += kron(&e, &image);
        }
    }
    let hermitian = hermitian_defect(&c) <= HERMITIAN_TOL;
    Ok(ChoiMatrix { matrix: c, source: map.id(), input_dim: n, hermitian })
}

/// True when every Choi eigenvalue is real and nonnegative. The realignment part makes
/// the Choi matrix non-Hermitian, so the general spectrum is used.
pub fn choi_spectrum_nonnegative(choi: &ChoiMatrix) -> Result<bool> {
    let ev = eigenvalues(&choi.matrix)?;
    Ok(ev.iter().all(|z| z.im.abs() <= 1e-9 && z.re >= -1e-9))
}

fn realign_trace(rho: &DensityMatrix) -> Result<(ComplexMatrix, f64)> {
    rho.require_square()?;
    let r = realign(&rho.matrix, &rho.dims)?;
    let tr = r.trace();
    if tr.re <= 0.0 || tr.im.abs() > 1e-12 {
        return Err(EntError::Domain(format!("Tr R(rho) = {tr} is not positive")));
    }
    Ok((r, tr.re))
}

/// `p/d² I + (1−p) R(ρ)/Tr[R(ρ)]`.
pub fn spa_realign(rho: &DensityMatrix, p: f64) -> Result<ComplexMatrix> {
    check_p(p)?;
    let (r, tr) = realign_trace(rho)?;
    let n = r.nrows();
    Ok(identity(n).scale(p / n as f64) + r.scale((1.0 - p) / tr))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaNormalization {
    /// `d²k/(Tr[R] + d²k)`.
    Trace,
    /// `d²k/(1 + d²k)`.
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerBoundSource {
    /// Moment lower bound, zero when the characteristic coefficients certify `R ≥ 0`.
    Moments,
    /// Exact minimum eigenvalue.
    Exact,
}

/// Smallest mixing probability guaranteed to make the SPA positive.
pub fn spa_lower_p(rho: &DensityMatrix) -> Result<f64> {
    spa_lower_p_with(rho, LowerBoundSource::Moments, SpaNormalization::Trace)
}

pub fn spa_lower_p_with(rho: &DensityMatrix, source: LowerBoundSource, norm: SpaNormalization) -> Result<f64> {
    let (r, tr) = realign_trace(rho)?;
    let n = r.nrows() as f64;
    let lb = match source {
        LowerBoundSource::Moments => {
            if descartes_psd(&r).psd {
                0.0
            } else {
                lambda_min_lb(&r)
            }
        }
        LowerBoundSource::Exact => {
            eigenvalues(&r)?.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
        }
    };
    let k = (-lb).max(0.0);
    if k == 0.0 {
        return Ok(0.0);
    }
    let base = match norm {
        SpaNormalization::Trace => tr,
        SpaNormalization::Unit => 1.0,
    };
    Ok(n * k / (base + n * k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qubit {
    A,
    B,
    C,
}

impl Qubit {
    pub fn index(&self) -> usize {
        match self {
            Qubit::A => 0,
            Qubit::B => 1,
            Qubit::C => 2,
        }
    }

    pub const ALL: [Qubit; 3] = [Qubit::A, Qubit::B, Qubit::C];
}

/// `I/10 + ρ^{T_X}/5` on three qubits.
pub fn spa_pt_qubit(rho: &DensityMatrix, part: Qubit) -> Result<ComplexMatrix> {
    rho.require_three_qubit()?;
    let pt = partial_transpose(&rho.matrix, &rho.dims, part.index())?;
    Ok(identity(8).scale(0.1) + pt.scale(0.2))
}

/// `(ρP)^{T_B} P`.
pub fn realign_via_swap(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let d = rho.require_square()?;
    let p = swap_operator(d);
    Ok(partial_transpose(&(&rho.matrix * &p), &rho.dims, 1)? * p)
}

/// Column-major vec of the 2×2 block at block coordinates `(i, j)`.
fn block_vec(rho: &ComplexMatrix, i: usize, j: usize) -> [crate::matkit::C64; 4] {
    let b = |r: usize, c: usize| rho[(2 * i + r, 2 * j + c)];
    [b(0, 0), b(1, 0), b(0, 1), b(1, 1)]
}

/// Row `2i+m` is `vec(X_{i,2m}) ‖ vec(X_{i,2m+1})` over the 2×2 blocks `X` of `ρ`.
pub fn realign_tripartite(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    rho.require_three_qubit()?;
    let mut out = DMatrix::zeros(8, 8);
    for i in 0..4 {
        for m in 0..2 {
            let row = 2 * i + m;
            let left = block_vec(&rho.matrix, i, 2 * m);
            let right = block_vec(&rho.matrix, i, 2 * m + 1);
            for c in 0..4 {
                out[(row, c)] = left[c];
                out[(row, c + 4)] = right[c];
            }
        }
    }
    Ok(out)
}

/// Permutation matrix with `Q[i, π(i)] = 1`, `π = (0,2,4,6,1,3,5,7)`.
pub fn tripartite_q() -> ComplexMatrix {
    let pi = [0usize, 2, 4, 6, 1, 3, 5, 7];
    let mut q = DMatrix::zeros(8, 8);
    for (i, &p) in pi.iter().enumerate() {
        q[(i, p)] = crate::matkit::re(1.0);
    }
    q
}

/// `(ρQ)^τ` with `τ` the transpose of every 2×2 block.
pub fn realign_tripartite_via_q(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    rho.require_three_qubit()?;
    let rq = &rho.matrix * tripartite_q();
    partial_transpose(&rq, &rho.dims, 2)
}
