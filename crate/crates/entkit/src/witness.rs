//! Witness operators and the concurrence lower bounds built from them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{EntError, Result};
use crate::matkit::{
    det_one_plus, eigh, frobenius_norm, hermitian_defect, hermitian_part, identity,
    kron, partial_trace, partial_transpose, rank, realign, spectral_norm, svd_values, trace_norm,
    trace_product, ComplexMatrix, DimSpec, RankTol, HERMITIAN_TOL,
};
use crate::moments::first_moment_via_swap;
use crate::qmaps::{choi_matrix, LinearMap};
use crate::statebank::{pauli, random, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessFamily {
    Choi,
    Det,
    Wo,
    Wn,
}

impl WitnessFamily {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "choi" => Ok(WitnessFamily::Choi),
            "det" => Ok(WitnessFamily::Det),
            "wo" => Ok(WitnessFamily::Wo),
            "wn" => Ok(WitnessFamily::Wn),
            other => Err(EntError::Input(format!("unknown witness family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessOperator {
    pub matrix: ComplexMatrix,
    pub dims: DimSpec,
    pub family: WitnessFamily,
    pub params: Vec<(String, f64)>,
    pub target_label: String,
    /// Anti-Hermitian residue removed by symmetrization (0 when none was needed).
    pub hermitian_residue: f64,
    pub notes: String,
}

/// Which subsystem the reduced determinant keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marginal {
    /// `Tr_A ρ`, a `d₂×d₂` matrix.
    KeepB,
    /// `Tr_B ρ`, a `d₁×d₁` matrix.
    KeepA,
}

impl Marginal {
    fn keep(&self) -> usize {
        match self {
            Marginal::KeepA => 0,
            Marginal::KeepB => 1,
        }
    }
}

fn finish(
    matrix: ComplexMatrix,
    target: &DensityMatrix,
    family: WitnessFamily,
    params: Vec<(String, f64)>,
    notes: impl Into<String>,
) -> WitnessOperator {
    let residue = hermitian_defect(&matrix);
    let scale = matrix.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let (matrix, hermitian_residue) =
        if residue > HERMITIAN_TOL * scale { (hermitian_part(&matrix), residue) } else { (matrix, 0.0) };
    WitnessOperator {
        matrix,
        dims: target.dims.clone(),
        family,
        params,
        target_label: target.label.clone(),
        hermitian_residue,
        notes: notes.into(),
    }
}

/// `W = CC† − γI` for `Φ_{α,β}` on `4⊗4`, with `γ` from the target's off-diagonal 8×8 block.
pub fn choi_witness(alpha: f64, beta: f64, target: &DensityMatrix) -> Result<WitnessOperator> {
    if target.dims.dims() != [4, 4] {
        return Err(EntError::Dim(format!("choi witness is defined on 4x4, got {}", target.dims)));
    }
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(EntError::Range(format!("alpha, beta must be positive (got {alpha}, {beta})")));
    }
    let c = choi_matrix(LinearMap::Phi { alpha, beta }, 2)?.matrix;
    let o = &c * c.adjoint();
    let a = o.view((0, 0), (8, 8));
    let b = o.view((0, 8), (8, 8)).into_owned();
    let y = target.matrix.view((0, 8), (8, 8)).into_owned();
    let gamma = 2.0 * (trace_product(&b, &y.adjoint()).re + a.trace().re * frobenius_norm(&y));
    let w = o - identity(16).scale(gamma);
    Ok(finish(
        w,
        target,
        WitnessFamily::Choi,
        vec![("alpha".into(), alpha), ("beta".into(), beta), ("gamma".into(), gamma)],
        "separable nonnegativity not certified numerically",
    ))
}

/// `det(I + ρ)/λ |ψ⟩⟨ψ| − det(I + Tr_A ρ) I`, `ψ` the top eigenvector.
pub fn det_witness(target: &DensityMatrix) -> Result<WitnessOperator> {
    det_witness_with(target, Marginal::KeepB)
}

pub fn det_witness_with(target: &DensityMatrix, marginal: Marginal) -> Result<WitnessOperator> {
    target.require_bipartite()?;
    let (vals, vecs) = eigh(&target.matrix)?;
    let lam = vals[0];
    if lam <= 0.0 {
        return Err(EntError::Domain("target has no positive eigenvalue".into()));
    }
    let psi = vecs.column(0).into_owned();
    let red = partial_trace(&target.matrix, &target.dims, marginal.keep())?;
    let n = target.order();
    let w = (&psi * psi.adjoint()).scale(det_one_plus(&target.matrix)? / lam)
        - identity(n).scale(det_one_plus(&red)?);
    Ok(finish(w, target, WitnessFamily::Det, vec![("lambda".into(), lam)], "eigenvector of the largest eigenvalue"))
}

struct RealignData {
    rtb: ComplexMatrix,
    sigma_max: f64,
    shift: f64,
}

/// `R^{T_B}`, `σ_max(ρ^{T_B})` and `(1 − ‖R‖₁)/(√rank ‖R‖₂)`.
fn realign_data(target: &DensityMatrix) -> Result<RealignData> {
    target.require_square()?;
    let r = realign(&target.matrix, &target.dims)?;
    let rtb = partial_transpose(&r, &target.dims, 1)?;
    let sigma_max = spectral_norm(&partial_transpose(&target.matrix, &target.dims, 1)?);
    let s = svd_values(&r, RankTol::default())?;
    let shift = (1.0 - s.sum()) / ((s.rank_at_tolerance as f64).sqrt() * frobenius_norm(&r));
    Ok(RealignData { rtb, sigma_max, shift })
}

/// `(1 + (1 − ‖R‖₁)/(√rank ‖R‖₂)) I − R^{T_B}/σ_max(ρ^{T_B})`.
pub fn wo_witness(target: &DensityMatrix) -> Result<WitnessOperator> {
    let d = realign_data(target)?;
    let n = target.order();
    let w = identity(n).scale(1.0 + d.shift) - d.rtb.scale(1.0 / d.sigma_max);
    Ok(finish(w, target, WitnessFamily::Wo, vec![("sigma_max".into(), d.sigma_max)], ""))
}

/// `det(I + ρ) − det(I + Tr_A ρ)`.
pub fn k_rho(rho: &DensityMatrix, marginal: Marginal) -> Result<f64> {
    rho.require_bipartite()?;
    let red = partial_trace(&rho.matrix, &rho.dims, marginal.keep())?;
    Ok(det_one_plus(&rho.matrix)? - det_one_plus(&red)?)
}

pub fn wn_witness(n: u32, target: &DensityMatrix) -> Result<WitnessOperator> {
    wn_witness_with(n, target, Marginal::KeepB)
}

/// `d₁/(d₁−1) [kⁿ (I − R^{T_B}/σ_max) + ((1 − ‖R‖₁)/(√rank ‖R‖₂)) I]`.
pub fn wn_witness_with(n: u32, target: &DensityMatrix, marginal: Marginal) -> Result<WitnessOperator> {
    if n == 0 {
        return Err(EntError::Input("n must be at least 1".into()));
    }
    let d = realign_data(target)?;
    let k = k_rho(target, marginal)?;
    let ord = target.order();
    let d1 = target.d1() as f64;
    let core = identity(ord) - d.rtb.scale(1.0 / d.sigma_max);
    let w = (core.scale(k.powi(n as i32)) + identity(ord).scale(d.shift)).scale(d1 / (d1 - 1.0));
    let note = match marginal {
        Marginal::KeepB => "",
        Marginal::KeepA => "k from the first-subsystem marginal",
    };
    Ok(finish(w, target, WitnessFamily::Wn, vec![("n".into(), n as f64), ("k_rho".into(), k)], note))
}

/// Builds a witness by family name.
pub fn build_witness(family: WitnessFamily, target: &DensityMatrix, alpha: f64, beta: f64, n: u32) -> Result<WitnessOperator> {
    match family {
        WitnessFamily::Choi => choi_witness(alpha, beta, target),
        WitnessFamily::Det => det_witness(target),
        WitnessFamily::Wo => wo_witness(target),
        WitnessFamily::Wn => wn_witness(n, target),
    }
}

/// `Tr[W ρ]`.
pub fn witness_expectation(w: &WitnessOperator, rho: &DensityMatrix) -> Result<f64> {
    if w.matrix.nrows() != rho.order() || w.dims != rho.dims {
        return Err(EntError::Dim(format!("witness dims {} vs state dims {}", w.dims, rho.dims)));
    }
    let v = trace_product(&w.matrix, &rho.matrix);
    if v.im.abs() > 1e-10 * v.re.abs().max(1.0) {
        return Err(EntError::Numerical(format!("expectation has imaginary part {:.3e}", v.im)));
    }
    Ok(v.re)
}

/// Smallest `Tr[Wσ]` over random separable `σ` of the witness's dims.
pub fn separable_sanity(w: &WitnessOperator, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..samples {
        let s = random::separable(w.dims.dims(), 4, &mut rng);
        worst = worst.min(witness_expectation(w, &s)?);
    }
    Ok(worst)
}

/// Smallest `Tr[W_σ σ]` where `W_σ` is built on each random separable `σ` itself.
pub fn self_consistency<F>(dims: &[usize], samples: usize, seed: u64, build: F) -> Result<f64>
where
    F: Fn(&DensityMatrix) -> Result<WitnessOperator>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for i in 0..samples {
        let s = random::separable(dims, 1 + (i % 4), &mut rng);
        worst = worst.min(witness_expectation(&build(&s)?, &s)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConcurrenceBounds {
    pub c_min: f64,
    pub phi_wn: Vec<(u32, f64)>,
    pub phi_limit: Option<f64>,
    pub swap_lb: Option<f64>,
    pub k_rho: f64,
}

/// `(max(‖ρ^{T_A}‖₁, ‖R‖₁) − 1)/(d₁ − 1)` with `d₁` the smaller local dimension.
pub fn c_min(rho: &DensityMatrix) -> Result<f64> {
    let (d1, d2) = rho.require_bipartite()?;
    let pta = trace_norm(&partial_transpose(&rho.matrix, &rho.dims, 0)?);
    let r = trace_norm(&realign(&rho.matrix, &rho.dims)?);
    let m = d1.min(d2) as f64;
    Ok((pta.max(r) - 1.0) / (m - 1.0))
}

/// `d₁/(d₁−1) (‖R‖₁ − 1)/(√rank ‖R‖₂)`.
pub fn phi_limit(rho: &DensityMatrix) -> Result<f64> {
    let d = realign_data(rho)?;
    let d1 = rho.d1() as f64;
    Ok(-d1 / (d1 - 1.0) * d.shift)
}

/// `√(2/(d(d−1))) (Tr[ρ P^{T_B}] − 1)`.
pub fn swap_lower_bound(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.require_square()? as f64;
    Ok((2.0 / (d * (d - 1.0))).sqrt() * (first_moment_via_swap(rho)? - 1.0))
}

pub fn concurrence_bounds(rho: &DensityMatrix, n_list: &[u32]) -> Result<ConcurrenceBounds> {
    concurrence_bounds_with(rho, n_list, Marginal::KeepB)
}

pub fn concurrence_bounds_with(rho: &DensityMatrix, n_list: &[u32], marginal: Marginal) -> Result<ConcurrenceBounds> {
    let c = c_min(rho)?;
    let k = k_rho(rho, marginal)?;
    let (phi_wn, phi_lim, swap) = if rho.require_square().is_ok() {
        let mut v = Vec::with_capacity(n_list.len());
        for &n in n_list {
            let w = wn_witness_with(n, rho, marginal)?;
            v.push((n, -witness_expectation(&w, rho)?));
        }
        (v, Some(phi_limit(rho)?), Some(swap_lower_bound(rho)?))
    } else {
        (Vec::new(), None, None)
    };
    Ok(ConcurrenceBounds { c_min: c, phi_wn, phi_limit: phi_lim, swap_lb: swap, k_rho: k })
}

/// `max(0, s₁ − s₂ − s₃ − s₄)` with `sᵢ` the singular values of `√ρ (σ_y⊗σ_y) √ρ*`,
/// i.e. the square roots of the spectrum of `ρ ρ̃`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims.dims() != [2, 2] {
        return Err(EntError::Dim(format!("concurrence needs a two-qubit state, got {}", rho.dims)));
    }
    let yy = kron(&pauli(2), &pauli(2));
    let sq = psd_sqrt(&rho.matrix)?;
    let m = &sq * yy * sq.conjugate();
    let s = svd_values(&m, RankTol::Absolute(0.0))?.values;
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (vals, vecs) = eigh(a)?;
    let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut out = ComplexMatrix::zeros(a.nrows(), a.ncols());
    for (i, v) in vals.iter().enumerate() {
        if *v <= 1e-14 * top {
            continue;
        }
        let col = vecs.column(i);
        out += (col * col.adjoint()).scale(v.sqrt());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub rank: usize,
}

/// Schmidt coefficients of a normalized bipartite vector.
pub fn schmidt_decompose(psi: &ComplexMatrix, dims: &DimSpec) -> Result<SchmidtDecomposition> {
    if dims.len() != 2 || psi.ncols() != 1 || psi.nrows() != dims.order() {
        return Err(EntError::Dim(format!("vector of length {} does not match dims {dims}", psi.nrows())));
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(EntError::Input(format!("vector is not normalized (norm {norm})")));
    }
    let (d1, d2) = (dims.get(0), dims.get(1));
    let amp = ComplexMatrix::from_fn(d1, d2, |i, j| psi[(i * d2 + j, 0)]);
    let s = svd_values(&amp, RankTol::default())?;
    let r = rank(&amp, RankTol::default())?;
    Ok(SchmidtDecomposition { coefficients: s.values, rank: r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::{basis_ket, ket};
    use crate::statebank::{make_state, Params};

    fn st(id: &str, p: Params) -> DensityMatrix {
        make_state(id, &p).unwrap()
    }

    #[test]
    fn choi_witness_closed_form() {
        let rho = st("bes4x4", Params::new());
        for (a, b) in [(1.0, 1.0), (0.3, 0.7), (2.0, 0.5)] {
            let w = choi_witness(a, b, &rho).unwrap();
            let v = witness_expectation(&w, &rho).unwrap();
            let e = -1.0710678 * (2.0 * a * a + a * b + 2.0 * b * b);
            assert!(((v - e) / e).abs() < 1e-6, "{v} vs {e}");
        }
    }

    #[test]
    fn det_witness_rho12() {
        let rho = st("rho12", Params::new());
        let v = witness_expectation(&det_witness(&rho).unwrap(), &rho).unwrap();
        assert!((v + 491.0 / 7500.0).abs() < 1e-12);
    }

    #[test]
    fn wo_varrho12() {
        let rho = st("varrho12", Params::new());
        let v = witness_expectation(&wo_witness(&rho).unwrap(), &rho).unwrap();
        assert!((v + 0.0585731).abs() < 1e-6);
    }

    #[test]
    fn upb_quantities() {
        let rho = st("upb_tiles", Params::new());
        assert!((k_rho(&rho, Marginal::KeepB).unwrap() - 71.0 / 768.0).abs() < 1e-12);
        let b = concurrence_bounds(&rho, &[1, 2, 3, 4, 5]).unwrap();
        let expect = [0.00305406, 0.0974430, 0.1061691, 0.1069758, 0.1070504];
        for ((_, v), e) in b.phi_wn.iter().zip(expect) {
            assert!((v - e).abs() < 1e-6, "{v} vs {e}");
        }
        assert!((b.phi_limit.unwrap() - 0.107058).abs() < 1e-6);
    }

    #[test]
    fn separable_sanity_gate() {
        assert!(self_consistency(&[3, 3], 200, 6, det_witness).unwrap() >= -1e-9);
        assert!(self_consistency(&[3, 3], 200, 7, wo_witness).unwrap() >= -1e-9);
        for n in [1, 2, 5] {
            assert!(self_consistency(&[3, 3], 100, 8, |s| wn_witness(n, s)).unwrap() >= -1e-9);
            assert!(self_consistency(&[2, 2], 100, 9, |s| wn_witness(n, s)).unwrap() >= -1e-9);
        }
        let h = st("horodecki_a", Params::new().with("a", 0.3));
        assert!(separable_sanity(&wo_witness(&h).unwrap(), 200, 5).unwrap() >= -1e-9);
    }

    #[test]
    fn det_witness_on_mixed_target() {
        let dims = DimSpec::bipartite(3, 3).unwrap();
        let mixed = DensityMatrix::new(identity(9).scale(1.0 / 9.0), dims, "mixed").unwrap();
        let w = det_witness(&mixed).unwrap();
        assert!(witness_expectation(&w, &mixed).unwrap() >= 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let s = random::separable(&[3, 3], 4, &mut rng);
            assert!(k_rho(&s, Marginal::KeepB).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn concurrence_examples() {
        assert!((wootters_concurrence(&st("bell", Params::new())).unwrap() - 1.0).abs() < 1e-12);
        let dims = DimSpec::bipartite(2, 2).unwrap();
        let prod = DensityMatrix::new_unchecked(crate::matkit::projector(&basis_ket(4, 2)), dims, "10");
        assert!(wootters_concurrence(&prod).unwrap() < 1e-12);
        for f in [0.3, 0.7, 0.9] {
            let c = wootters_concurrence(&st("iso2", Params::new().with("f", f))).unwrap();
            assert!((c - (2.0 * f - 1.0).max(0.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_limit_can_exceed_concurrence() {
        let rho = st("iso2", Params::new().with("f", 0.9));
        let c = wootters_concurrence(&rho).unwrap();
        assert!(c_min(&rho).unwrap() <= c + 1e-12);
        assert!(phi_limit(&rho).unwrap() > c + 0.08);
    }

    #[test]
    fn schmidt() {
        let dims = DimSpec::bipartite(2, 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = schmidt_decompose(&ket(4, &[(0, h), (3, h)]), &dims).unwrap();
        assert_eq!(s.rank, 2);
        assert!((s.coefficients[0] - h).abs() < 1e-15);
        let s = schmidt_decompose(&basis_ket(4, 0), &dims).unwrap();
        assert_eq!(s.rank, 1);
        assert!(schmidt_decompose(&ket(4, &[(0, 1.0), (3, 1.0)]), &dims).is_err());
    }
}
