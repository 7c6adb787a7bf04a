//! Separability criteria with a uniform verdict type.

use nalgebra::DMatrix;

use crate::error::{EntError, Result};
use crate::matkit::{
    eig_hermitian, frobenius_norm, gell_mann_basis, gell_mann_raw, kron, partial_trace,
    partial_transpose, realign, svd_values, trace_norm, trace_product, ComplexMatrix, RankTol,
};
use crate::moments::{
    dk_product, first_moment_via_swap, gram_moments, lambda_max_bounds, pt_moments, zhang_moments,
};
use crate::qmaps::{realign_tripartite, spa_lower_p, spa_pt_qubit, spa_realign, Qubit};
use crate::statebank::DensityMatrix;

pub const DEFAULT_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Verdict {
    Entangled,
    Inconclusive,
    NotApplicable,
    Error,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CriterionVerdict {
    pub criterion: String,
    pub statistic: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    pub notes: String,
}

impl CriterionVerdict {
    pub fn is_entangled(&self) -> bool {
        self.verdict == Verdict::Entangled
    }

    fn skipped(id: &str, verdict: Verdict, notes: impl Into<String>) -> Self {
        CriterionVerdict { criterion: id.into(), statistic: f64::NAN, threshold: f64::NAN, verdict, notes: notes.into() }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        if !note.is_empty() {
            if !self.notes.is_empty() {
                self.notes.push_str("; ");
            }
            self.notes.push_str(&note);
        }
        self
    }
}

/// Entangled iff `statistic > threshold + margin`.
fn above(id: &str, statistic: f64, threshold: f64, margin: f64) -> CriterionVerdict {
    let verdict = if !statistic.is_finite() {
        Verdict::Error
    } else if statistic > threshold + margin {
        Verdict::Entangled
    } else {
        Verdict::Inconclusive
    };
    CriterionVerdict { criterion: id.into(), statistic, threshold, verdict, notes: String::new() }
}

/// Entangled iff `statistic < threshold − margin`.
fn below(id: &str, statistic: f64, threshold: f64, margin: f64) -> CriterionVerdict {
    let verdict = if !statistic.is_finite() {
        Verdict::Error
    } else if statistic < threshold - margin {
        Verdict::Entangled
    } else {
        Verdict::Inconclusive
    };
    CriterionVerdict { criterion: id.into(), statistic, threshold, verdict, notes: String::new() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaConfig {
    pub margin: f64,
    pub rank_tol: RankTol,
    pub ct_grid: Vec<(f64, f64)>,
    /// SPA mixing probability; `None` uses the lower bound.
    pub spa_p: Option<f64>,
    /// Run criteria outside their stated dimension scope.
    pub unchecked: bool,
    /// Largest moment order for the Hankel test.
    pub hankel_order: usize,
}

impl Default for CriteriaConfig {
    fn default() -> Self {
        CriteriaConfig {
            margin: DEFAULT_MARGIN,
            rank_tol: RankTol::from_env(),
            ct_grid: default_ct_grid(),
            spa_p: None,
            unchecked: false,
            hankel_order: 5,
        }
    }
}

pub fn default_ct_grid() -> Vec<(f64, f64)> {
    let vals = [0.0, 1.0 / 32.0, 1.0 / 16.0, 1.0 / 8.0, 0.25, 0.5, 1.0, 2.0];
    let mut g: Vec<(f64, f64)> = vals.iter().flat_map(|&x| vals.iter().map(move |&y| (x, y))).collect();
    for k in 0..=64 {
        let x = k as f64 / 32.0;
        if !vals.contains(&x) {
            g.push((x, x));
        }
    }
    g
}

pub const CRITERIA: &[&str] = &[
    "ppt",
    "ccnr",
    "ct",
    "dv",
    "majorization",
    "p3ppt",
    "d3in",
    "p3oppt",
    "l4",
    "hankel",
    "r_moment",
    "r2",
    "spa_r",
    "spa_error",
    "first_moment",
    "moment_product",
    "tri_genuine",
];

/// Parses a comma list; `all` expands to every criterion.
pub fn parse_criteria(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if item == "all" {
            out.extend(CRITERIA.iter().map(|c| c.to_string()));
        } else if CRITERIA.contains(&item) {
            out.push(item.to_string());
        } else {
            return Err(EntError::Input(format!("unknown criterion '{item}'")));
        }
    }
    if out.is_empty() {
        return Err(EntError::Input("empty criteria list".into()));
    }
    Ok(out)
}

/// Runs one criterion; dimension mismatches become NotApplicable and numeric or domain
/// failures become Error verdicts.
pub fn evaluate(id: &str, rho: &DensityMatrix, cfg: &CriteriaConfig) -> CriterionVerdict {
    let m = cfg.margin;
    let r = match id {
        "ppt" => ppt(rho, m),
        "ccnr" => ccnr(rho, m),
        "ct" => ct_best(rho, &cfg.ct_grid, m),
        "dv" => de_vicente(rho, m),
        "majorization" => majorization(rho, m),
        "p3ppt" => pt_moment_suite(rho, m).map(|v| v[0].clone()),
        "d3in" => pt_moment_suite(rho, m).map(|v| v[1].clone()),
        "p3oppt" => pt_moment_suite(rho, m).map(|v| v[2].clone()),
        "l4" => zhang_suite(rho, cfg.hankel_order, m).map(|v| v[0].clone()),
        "hankel" => zhang_suite(rho, cfg.hankel_order, m).map(|v| v[1].clone()),
        "r_moment" => r_moment_with(rho, cfg.rank_tol, m, cfg.unchecked),
        "r2" => r2_two_qubit(rho, m),
        "spa_r" => spa_r(rho, cfg.spa_p, m),
        "spa_error" => match cfg.spa_p {
            Some(p) => spa_error_inequality(rho, p, m),
            None => spa_lower_p(rho).and_then(|p| spa_error_inequality(rho, p, m)),
        },
        "first_moment" => first_moment_criterion(rho, m),
        "moment_product" => moment_product(rho, cfg.rank_tol, m),
        "tri_genuine" => tri_genuine(rho, m).map(|t| t.summary()),
        other => Err(EntError::Input(format!("unknown criterion '{other}'"))),
    };
    match r {
        Ok(v) => v,
        Err(EntError::Dim(msg)) => CriterionVerdict::skipped(id, Verdict::NotApplicable, msg),
        Err(e) => CriterionVerdict::skipped(id, Verdict::Error, e.to_string()),
    }
}

pub fn evaluate_all(ids: &[String], rho: &DensityMatrix, cfg: &CriteriaConfig) -> Vec<CriterionVerdict> {
    ids.iter().map(|id| evaluate(id, rho, cfg)).collect()
}

pub fn ppt(rho: &DensityMatrix, margin: f64) -> Result<CriterionVerdict> {
    rho.require_bipartite()?;
    let pt = partial_transpose(&rho.matrix, &rho.dims, 1)?;
    Ok(below("ppt", eig_hermitian(&pt)?.min(), 0.0, margin))
}

pub fn ccnr(rho: &DensityMatrix, margin: f64) -> Result<CriterionVerdict> {
    rho.require_bipartite()?;
    let r = realign(&rho.matrix, &rho.dims)?;
    Ok(above("ccnr", trace_norm(&r), 1.0, margin))
}

fn basis_for(d: usize) -> Result<Vec<ComplexMatrix>> {
    gell_mann_basis(d).map_err(|e| EntError::Dim(e.to_string()))
}

/// `C_ab = Tr[ρ G_a ⊗ G_b]` in the normalized canonical basis.
pub fn correlation_matrix(rho: &DensityMatrix) -> Result<DMatrix<f64>> {
    let (da, db) = rho.require_bipartite()?;
    let ga = basis_for(da)?;
    let gb = basis_for(db)?;
    Ok(DMatrix::from_fn(ga.len(), gb.len(), |a, b| trace_product(&rho.matrix, &kron(&ga[a], &gb[b])).re))
}

fn real_trace_norm(m: &DMatrix<f64>) -> f64 {
    m.clone().singular_values().sum()
}

fn ct_norm(d: usize, x: f64) -> f64 {
    ((d as f64 - 1.0 + x * x) / d as f64).sqrt()
}

fn ct_statistic(c: &DMatrix<f64>, da: usize, db: usize, x: f64, y: f64) -> f64 {
    let mut m = c.clone();
    for j in 0..m.ncols() {
        m[(0, j)] *= x;
    }
    for i in 0..m.nrows() {
        m[(i, 0)] *= y;
    }
    real_trace_norm(&m) - ct_norm(da, x) * ct_norm(db, y)
}

/// `‖D_x C D_y‖₁ − 𝒩_A(x)𝒩_B(y)`.
pub fn correlation_tensor(rho: &DensityMatrix, x: f64, y: f64, margin: f64) -> Result<CriterionVerdict> {
    if !(x >= 0.0 && y >= 0.0) {
        return Err(EntError::Range(format!("x, y must be nonnegative (got {x}, {y})")));
    }
    let (da, db) = rho.require_bipartite()?;
    let c = correlation_matrix(rho)?;
    Ok(above("ct", ct_statistic(&c, da, db, x, y), 0.0, margin).with_note(format!("x={x}, y={y}")))
}

/// Best violator over a grid of `(x, y)`.
pub fn ct_best(rho: &DensityMatrix, grid: &[(f64, f64)], margin: f64) -> Result<CriterionVerdict> {
    let (da, db) = rho.require_bipartite()?;
    let c = correlation_matrix(rho)?;
    let (mut best, mut at) = (f64::NEG_INFINITY, (0.0, 0.0));
    for &(x, y) in grid {
        let s = ct_statistic(&c, da, db, x, y);
        if s > best {
            best = s;
            at = (x, y);
        }
    }
    Ok(above("ct", best, 0.0, margin).with_note(format!("x={}, y={}", at.0, at.1)))
}

/// `‖T‖₁ − √(d_A d_B (d_A−1)(d_B−1))/2` with `T_ij = (d_A d_B/4) Tr[ρ λ_i ⊗ λ_j]`.
pub fn de_vicente(rho: &DensityMatrix, margin: f64) -> Result<CriterionVerdict> {
    let (da, db) = rho.require_bipartite()?;
    let la = gell_mann_raw(da).map_err(|e| EntError::Dim(e.to_string()))?;
    let lb = gell_mann_raw(db).map_err(|e| EntError::Dim(e.to_string()))?;
    let s = (da * db) as f64 / 4.0;
    let t = DMatrix::from_fn(la.len(), lb.len(), |i, j| s * trace_product(&rho.matrix, &kron(&la[i], &lb[j])).re);
    let bound = ((da * db * (da - 1) * (db - 1)) as f64).sqrt() / 2.0;
    Ok(above("dv", real_trace_norm(&t) - bound, 0.0, margin))
}

fn prefix_excess(global: &[f64], local: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let (mut sg, mut sl) = (0.0, 0.0);
    for (i, g) in global.iter().enumerate() {
        sg += g;
        sl += local.get(i).copied().unwrap_or(0.0);
        best = best.max(sg - sl);
    }
    best
}

pub fn majorization(rho: &DensityMatrix, margin: f64) -> Result<CriterionVerdict> {
    rho.require_bipartite()?;
    let global = eig_hermitian(&rho.matrix)?.values;
    let mut stat = f64::NEG_INFINITY;
    for keep in 0..2 {
        let red = partial_trace(&rho.matrix, &rho.dims, keep)?;
        let local = eig_hermitian(&red)?.values;
        stat = stat.max(prefix_excess(&global, &local));
    }
    Ok(above("majorization", stat, 0.0, margin))
}

/// `L₁ = p₂² − p₃p₁`, `L₂ = (3/2)p₁p₂ − p₁³/2 − p₃`, `L₃ = μx³ + (1−μx)³ − p₃`.
pub fn pt_moment_values(p1: f64, p2: f64, p3: f64) -> (f64, f64, Option<f64>) {
    let l1 = p2 * p2 - p3 * p1;
    let l2 = 1.5 * p1 * p2 - 0.5 * p1.powi(3) - p3;
    let l3 = if p2 > 0.0 {
        let q = p2.min(1.0);
        let mu = (1.0 / q).floor();
        let rad = mu * (q * (mu + 1.0) - 1.0);
        let x = (mu + rad.max(0.0).sqrt()) / (mu * (mu + 1.0));
        Some(mu * x.powi(3) + (1.0 - mu * x).powi(3) - p3)
    } else {
        None
    };
    (l1, l2, l3)
}

pub fn pt_moment_suite(rho: &DensityMatrix, margin: f64) -> Result<Vec<CriterionVerdict>> {
    let m = pt_moments(rho, 3)?;
    let (l1, l2, l3) = pt_moment_values(m.get(1), m.get(2), m.get(3));
    let v3 = match l3 {
        Some(l3) => above("p3oppt", l3, 0.0, margin),
        None => CriterionVerdict::skipped("p3oppt", Verdict::Error, "p2 = 0"),
    };
    Ok(vec![above("p3ppt", l1, 0.0, margin), above("d3in", l2, 0.0, margin), v3])
}

/// Hankel matrices of `s = (1, r₂, r₃, …)`.
pub fn hankel_matrices(r: &[f64]) -> Vec<(String, DMatrix<f64>)> {
    let mut s = vec![1.0];
    s.extend_from_slice(&r[1..]);
    let mut out = Vec::new();
    for k in 1.. {
        if 2 * k >= s.len() {
            break;
        }
        out.push((format!("H{k}"), DMatrix::from_fn(k + 1, k + 1, |i, j| s[i + j])));
    }
    for l in 0.. {
        if 2 * l + 1 >= s.len() {
            break;
        }
        out.push((format!("B{l}"), DMatrix::from_fn(l + 1, l + 1, |i, j| s[i + j + 1])));
    }
    out
}

pub fn zhang_suite(rho: &DensityMatrix, order: usize, margin: f64) -> Result<Vec<CriterionVerdict>> {
    let r = zhang_moments(rho, order.max(3))?;
    let l4 = r.get(2).powi(2) - r.get(3);
    let mut worst = f64::INFINITY;
    let mut which = String::new();
    for (name, h) in hankel_matrices(&r.values) {
        let m = h.symmetric_eigenvalues().min();
        if m < worst {
            worst = m;
            which = name;
        }
    }
    Ok(vec![
        above("l4", l4, 0.0, margin),
        above("hankel", -worst, 0.0, margin).with_note(format!("most negative in {which}")),
    ])
}

/// `R₁ = k(k−1)D_k^{1/k} + T₁ − 1`.
pub fn r_moment(rho: &DensityMatrix, tol: RankTol, margin: f64) -> Result<CriterionVerdict> {
    r_moment_with(rho, tol, margin, false)
}

pub fn r_moment_with(rho: &DensityMatrix, tol: RankTol, margin: f64, unchecked: bool) -> Result<CriterionVerdict> {
    let (d1, d2) = rho.require_bipartite()?;
    let out_of_scope = d1 * d2 == 4;
    if out_of_scope && !unchecked {
        return Ok(CriterionVerdict::skipped("r_moment", Verdict::NotApplicable, "two-qubit input, use r2"));
    }
    let dk = dk_product(rho, tol)?;
    let t1 = gram_moments(rho, 1)?.get(1);
    let k = dk.k as f64;
    let stat = k * (k - 1.0) * dk.dk.powf(1.0 / k) + t1 - 1.0;
    let v = above("r_moment", stat, 0.0, margin).with_note(format!("k={}", dk.k));
    Ok(if out_of_scope { v.with_note("evaluated outside its two-qubit exclusion") } else { v })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R2Parts {
    pub t: [f64; 3],
    pub f: f64,
    pub g: f64,
    pub d2: f64,
    pub d3: f64,
    pub x: f64,
    pub y_radicand: f64,
    pub radicand: f64,
}

/// Relative size below which `D₂`, `D₃` are rounding noise.
const R2_NOISE: f64 = 1e-12;

pub fn r2_parts(rho: &DensityMatrix) -> Result<R2Parts> {
    if rho.dims.dims() != [2, 2] {
        return Err(EntError::Dim(format!("r2 needs a two-qubit state, got {}", rho.dims)));
    }
    let m = gram_moments(rho, 3)?;
    let (t1, t2, t3) = (m.get(1), m.get(2), m.get(3));
    let b = lambda_max_bounds(t1, t2, t3, 4)?;
    let (f, g) = (b.lambda_max_lb, b.lambda_max_ub);
    let floor = |v: f64, scale: f64| if v.abs() <= R2_NOISE * scale { 0.0 } else { v };
    let d2 = floor((t1 * t1 - t2) / 2.0, t1 * t1);
    let d3 = floor(-(t1.powi(3) - 3.0 * t1 * t2 + 2.0 * t3) / 6.0, t1.powi(3));
    let x = f * (2.0 * d2.max(0.0).sqrt() + t1).sqrt() + d3.abs().sqrt();
    let y_radicand = d2 - g * t1 + f * f;
    let y = t1 - g + y_radicand.max(0.0).sqrt();
    let radicand = 3.0 * x.powf(2.0 / 3.0) + 2.0 * y - 2.0 * t1;
    Ok(R2Parts { t: [t1, t2, t3], f, g, d2, d3, x, y_radicand, radicand })
}

/// `R₂ = √(3X^{2/3} + 2Y − 2T₁) − 1`.
pub fn r2_two_qubit(rho: &DensityMatrix, margin: f64) -> Result<CriterionVerdict> {
    let p = r2_parts(rho)?;
    if p.y_radicand < -1e-12 || p.radicand < 0.0 {
        return Ok(CriterionVerdict::skipped(
            "r2",
            Verdict::Error,
            format!("negative radicand (Y inner {:.3e}, outer {:.3e})", p.y_radicand, p.radicand),
        ));
    }
    Ok(above("r2", p.radicand.sqrt() - 1.0, 0.0, margin))
}

/// `‖R̃‖₁ − (p(Tr R − 1) + 1)/Tr R` at the given `p`.
pub fn spa_r_statistic(rho: &DensityMatrix, p: f64) -> Result<f64> {
    let rt = spa_realign(rho, p)?;
    let tr = realign(&rho.matrix, &rho.dims)?.trace().re;
    Ok(trace_norm(&rt) - (p * (tr - 1.0) + 1.0) / tr)
}

pub fn spa_r(rho: &DensityMatrix, p: Option<f64>, margin: f64) -> Result<CriterionVerdict> {
    let p = match p {
        Some(p) => p,
        None => spa_lower_p(rho)?,
    };
    Ok(above("spa_r", spa_r_statistic(rho, p)?, 0.0, margin).with_note(format!("p={p}")))
}

/// `‖R̃ − R‖₁ ≤ p + |1 − p − Tr R|/Tr R` for separable states.
pub fn spa_error_inequality(rho: &DensityMatrix, p: f64, margin: f64) -> Result<CriterionVerdict> {
    let r = realign(&rho.matrix, &rho.dims)?;
    let tr = r.trace().re;
    let rt = spa_realign(rho, p)?;
    let (sym, _) = schmidt_symmetric_check(rho, margin)?;
    if sym && trace_norm(&r) > 1.0 + margin {
        return Ok(CriterionVerdict::skipped("spa_error", Verdict::NotApplicable, "Schmidt-symmetric entangled state"));
    }
    let stat = trace_norm(&(rt - &r)) - (p + (1.0 - p - tr).abs() / tr);
    Ok(above("spa_error", stat, 0.0, margin).with_note(format!("p={p}")))
}

/// `t₁ = Tr[ρ P^{T_B}] ≤ 1`.
pub fn first_moment_criterion(rho: &DensityMatrix, margin: f64) -> Result<CriterionVerdict> {
    Ok(above("first_moment", first_moment_via_swap(rho)?, 1.0, margin))
}

/// `t₁²/k − 1 + k(k−1)D_k^{1/k}`.
pub fn moment_product_statistic(rho: &DensityMatrix, tol: RankTol) -> Result<(f64, usize)> {
    let t1 = first_moment_via_swap(rho)?;
    let dk = dk_product(rho, tol)?;
    let k = dk.k as f64;
    Ok((t1 * t1 / k - 1.0 + k * (k - 1.0) * dk.dk.powf(1.0 / k), dk.k))
}

pub fn moment_product(rho: &DensityMatrix, tol: RankTol, margin: f64) -> Result<CriterionVerdict> {
    let (s, k) = moment_product_statistic(rho, tol)?;
    Ok(above("moment_product", s, 0.0, margin).with_note(format!("k={k}")))
}

/// Returns `(‖R‖₁ ≈ Tr R, ‖R‖₁ − Tr R)`.
pub fn schmidt_symmetric_check(rho: &DensityMatrix, margin: f64) -> Result<(bool, f64)> {
    rho.require_square()?;
    let r = realign(&rho.matrix, &rho.dims)?;
    let tr = r.trace();
    let defect = trace_norm(&r) - tr.re;
    Ok((defect.abs() <= margin.max(1e-12) && tr.im.abs() <= 1e-12, defect))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriGenuine {
    pub per_cut: Vec<CriterionVerdict>,
    pub genuine: bool,
}

impl TriGenuine {
    pub fn statistics(&self) -> [f64; 3] {
        [self.per_cut[0].statistic, self.per_cut[1].statistic, self.per_cut[2].statistic]
    }

    fn summary(&self) -> CriterionVerdict {
        let worst = self.statistics().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        CriterionVerdict {
            criterion: "tri_genuine".into(),
            statistic: worst,
            threshold: 0.0,
            verdict: if self.genuine { Verdict::Entangled } else { Verdict::Inconclusive },
            notes: "largest of the three cut statistics".into(),
        }
    }
}

/// Per cut `X`: `λ_min(ℛ†ℛ + I/10 + ρ^{T_X}/5) − λ_min(ℛ†ℛ) − 1/10`.
pub fn tri_genuine(rho: &DensityMatrix, margin: f64) -> Result<TriGenuine> {
    let r = realign_tripartite(rho)?;
    let g = r.adjoint() * &r;
    let base = eig_hermitian(&g)?.min();
    let mut per_cut = Vec::with_capacity(3);
    for (q, name) in Qubit::ALL.iter().zip(["tri_cut_a", "tri_cut_b", "tri_cut_c"]) {
        let s = eig_hermitian(&(&g + spa_pt_qubit(rho, *q)?))?.min() - base - 0.1;
        per_cut.push(below(name, s, 0.0, margin));
    }
    let genuine = per_cut.iter().all(|v| v.is_entangled());
    Ok(TriGenuine { per_cut, genuine })
}

/// Singular-value summary of `R(ρ)` used by reports.
pub fn realign_summary(rho: &DensityMatrix, tol: RankTol) -> Result<(f64, f64, usize)> {
    let r = realign(&rho.matrix, &rho.dims)?;
    let s = svd_values(&r, tol)?;
    Ok((s.sum(), frobenius_norm(&r), s.rank_at_tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statebank::{make_state, Params, P0, Q0};

    fn st(id: &str, p: Params) -> DensityMatrix {
        make_state(id, &p).unwrap()
    }

    #[test]
    fn ppt_examples() {
        assert!(!ppt(&st("iso2", Params::new().with("f", 0.5)), DEFAULT_MARGIN).unwrap().is_entangled());
        assert!(ppt(&st("iso2", Params::new().with("f", 0.51)), DEFAULT_MARGIN).unwrap().is_entangled());
        assert!(!ppt(&st("horodecki_a", Params::new().with("a", 0.5)), DEFAULT_MARGIN).unwrap().is_entangled());
        assert!(!ppt(&st("bes4x4", Params::new()), DEFAULT_MARGIN).unwrap().is_entangled());
    }

    #[test]
    fn ccnr_examples() {
        let v = ccnr(&st("bes4x4", Params::new()), DEFAULT_MARGIN).unwrap();
        assert!((v.statistic - 1.085786).abs() < 1e-5 && v.is_entangled());
        for r in [0.2, 0.5, 0.9] {
            let v = ccnr(&st("kye", Params::new().with("r", r)), DEFAULT_MARGIN).unwrap();
            assert!((v.statistic - 2.0 / (2.0 + r)).abs() < 1e-12 && !v.is_entangled());
        }
        assert!(!ccnr(&st("iso3", Params::new().with("f", 1.0 / 3.0)), DEFAULT_MARGIN).unwrap().is_entangled());
        assert!(ccnr(&st("iso3", Params::new().with("f", 0.34)), DEFAULT_MARGIN).unwrap().is_entangled());
    }

    #[test]
    fn ct_closed_forms() {
        for r in [0.3, 0.8] {
            let rho = st("kye", Params::new().with("r", r));
            for (x, y) in [(0.0, 0.0), (1.0, 1.0), (0.5, 2.0)] {
                let v = correlation_tensor(&rho, x, y, DEFAULT_MARGIN).unwrap();
                let e = (-1.0 + 8.0 / (2.0 + r) + x * y - ((3.0 + x * x) * (3.0 + y * y)).sqrt()) / 4.0;
                assert!((v.statistic - e).abs() < 1e-12);
            }
            let dv = correlation_tensor(&rho, 0.0, 0.0, DEFAULT_MARGIN).unwrap();
            assert!((4.0 * dv.statistic + 4.0 * r / (2.0 + r)).abs() < 1e-12);
        }
        let s2 = 2f64.sqrt();
        for l in [0.8, 0.95] {
            let rho = st("bes4x4_noisy", Params::new().with("lambda", l));
            let v = correlation_tensor(&rho, 1.0, 1.0, DEFAULT_MARGIN).unwrap();
            assert!((v.statistic - ((9.0 - 4.0 * s2) * l - 3.0) / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dv_scaling() {
        for (id, p) in [("kye", Params::new().with("r", 0.4)), ("iso3", Params::new().with("f", 0.6)), ("two_param_2xn", Params::new())] {
            let rho = st(id, p);
            let (da, db) = rho.require_bipartite().unwrap();
            let dv = de_vicente(&rho, DEFAULT_MARGIN).unwrap().statistic;
            let ct = correlation_tensor(&rho, 0.0, 0.0, DEFAULT_MARGIN).unwrap().statistic;
            assert!((dv - (da * db) as f64 / 2.0 * ct).abs() < 1e-12, "{id}");
        }
    }

    #[test]
    fn majorization_examples() {
        assert!(majorization(&st("bell", Params::new()), DEFAULT_MARGIN).unwrap().is_entangled());
        assert!(majorization(&st("iso2", Params::new().with("f", 0.9)), DEFAULT_MARGIN).unwrap().is_entangled());
        let dims = crate::matkit::DimSpec::bipartite(2, 2).unwrap();
        let prod = DensityMatrix::new_unchecked(
            crate::matkit::projector(&crate::matkit::basis_ket(4, 1)),
            dims,
            "01",
        );
        assert!(!majorization(&prod, DEFAULT_MARGIN).unwrap().is_entangled());
    }

    #[test]
    fn r_moment_bes() {
        let v = r_moment(&st("bes4x4", Params::new()), RankTol::default(), DEFAULT_MARGIN).unwrap();
        assert!((v.statistic - 0.0208153).abs() < 1e-6 && v.is_entangled());
        let two = r_moment(&st("iso2", Params::new()), RankTol::default(), DEFAULT_MARGIN).unwrap();
        assert_eq!(two.verdict, Verdict::NotApplicable);
        let _ = (P0, Q0);
    }

    #[test]
    fn r2_iso2() {
        assert!(!r2_two_qubit(&st("iso2", Params::new().with("f", 0.4)), DEFAULT_MARGIN).unwrap().is_entangled());
        assert!(!r2_two_qubit(&st("iso2", Params::new().with("f", 0.6)), DEFAULT_MARGIN).unwrap().is_entangled());
        assert!(r2_two_qubit(&st("iso2", Params::new().with("f", 0.62)), DEFAULT_MARGIN).unwrap().is_entangled());
    }

    #[test]
    fn d3_iso2() {
        let a = pt_moment_suite(&st("iso2", Params::new().with("f", 0.62)), DEFAULT_MARGIN).unwrap();
        let b = pt_moment_suite(&st("iso2", Params::new().with("f", 0.63)), DEFAULT_MARGIN).unwrap();
        assert!(!a[1].is_entangled() && b[1].is_entangled());
    }

    #[test]
    fn spa_examples() {
        let ha = st("horodecki_a", Params::new().with("a", 0.3));
        assert!(spa_r(&ha, Some(0.0), DEFAULT_MARGIN).unwrap().is_entangled());
        assert!(spa_r(&ha, Some(0.0219), DEFAULT_MARGIN).unwrap().is_entangled());
        assert!(!spa_r(&ha, Some(0.0220), DEFAULT_MARGIN).unwrap().is_entangled());
        let bell = st("bell", Params::new());
        assert_eq!(spa_error_inequality(&bell, 0.5, DEFAULT_MARGIN).unwrap().verdict, Verdict::NotApplicable);
    }

    #[test]
    fn schmidt_symmetric() {
        assert!(schmidt_symmetric_check(&st("bell", Params::new()), DEFAULT_MARGIN).unwrap().0);
        assert!(schmidt_symmetric_check(&st("iso3", Params::new().with("f", 1.0 / 9.0)), DEFAULT_MARGIN).unwrap().0);
        assert!(!schmidt_symmetric_check(&st("rho_t", Params::new().with("t", -0.5)), DEFAULT_MARGIN).unwrap().0);
    }

    #[test]
    fn first_moment_and_moment_product() {
        let v = first_moment_criterion(&st("bell", Params::new()), DEFAULT_MARGIN).unwrap();
        assert!((v.statistic - 2.0).abs() < 1e-14 && v.is_entangled());
        let mm = st("iso3", Params::new().with("f", 1.0 / 9.0));
        let t = moment_product(&mm, RankTol::default(), DEFAULT_MARGIN).unwrap();
        assert!(t.statistic < -0.5);
    }

    #[test]
    fn hankel_layout() {
        let h = hankel_matrices(&[0.9, 0.5, 0.3, 0.2, 0.1]);
        let names: Vec<&str> = h.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["H1", "H2", "B0", "B1"]);
        assert_eq!(h[0].1[(0, 0)], 1.0);
        assert_eq!(h[0].1[(1, 1)], 0.3);
        let l4 = -(h[0].1[(0, 0)] * h[0].1[(1, 1)] - h[0].1[(0, 1)].powi(2));
        assert!((l4 - (0.25 - 0.3)).abs() < 1e-15);
    }

    #[test]
    fn tri_product() {
        let dims = crate::matkit::DimSpec::new(vec![2, 2, 2]).unwrap();
        let zero = DensityMatrix::new_unchecked(crate::matkit::projector(&crate::matkit::basis_ket(8, 0)), dims, "000");
        let t = tri_genuine(&zero, DEFAULT_MARGIN).unwrap();
        assert!(!t.genuine);
        assert!(t.statistics().iter().all(|s| *s >= -1e-12));
    }
}
