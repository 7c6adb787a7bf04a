//! Moment engines for `ρ^τ`, `R(ρ)` and `R†R`, eigenvalue bounds from moments, and the
//! measurement-side identities built on the swap operator.

use nalgebra::DMatrix;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{EntError, Result};
use crate::matkit::{
    self, char_coeffs, eigenvalues, eigh, partial_transpose, power_traces, realign, svd_values,
    swap_operator, trace_product, ComplexMatrix, RankTol, C64,
};
use crate::statebank::DensityMatrix;

/// Sign tolerance for characteristic coefficients.
pub const DESCARTES_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentKind {
    Pt,
    Realign,
    Gram,
    Zhang,
}

impl MomentKind {
    pub fn name(&self) -> &'static str {
        match self {
            MomentKind::Pt => "pt",
            MomentKind::Realign => "realign",
            MomentKind::Gram => "gram",
            MomentKind::Zhang => "zhang",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pt" => Ok(MomentKind::Pt),
            "realign" => Ok(MomentKind::Realign),
            "gram" => Ok(MomentKind::Gram),
            "zhang" => Ok(MomentKind::Zhang),
            other => Err(EntError::Input(format!("unknown moment kind '{other}'"))),
        }
    }

    pub const ALL: [MomentKind; 4] = [MomentKind::Pt, MomentKind::Realign, MomentKind::Gram, MomentKind::Zhang];
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    pub kind: MomentKind,
    pub values: Vec<f64>,
}

impl MomentVector {
    /// `k`-th moment, 1-based.
    pub fn get(&self, k: usize) -> f64 {
        self.values[k - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenBounds {
    pub lambda_min_lb: f64,
    pub lambda_max_lb: f64,
    pub lambda_max_ub: f64,
}

pub fn moments(rho: &DensityMatrix, kind: MomentKind, k: usize) -> Result<MomentVector> {
    match kind {
        MomentKind::Pt => pt_moments(rho, k),
        MomentKind::Realign => realign_moments(rho, k),
        MomentKind::Gram => gram_moments(rho, k),
        MomentKind::Zhang => zhang_moments(rho, k),
    }
}

fn real_parts(v: Vec<C64>) -> Vec<f64> {
    v.into_iter().map(|z| z.re).collect()
}

pub fn pt_moments(rho: &DensityMatrix, k: usize) -> Result<MomentVector> {
    rho.require_bipartite()?;
    let pt = partial_transpose(&rho.matrix, &rho.dims, 1)?;
    Ok(MomentVector { kind: MomentKind::Pt, values: real_parts(power_traces(&pt, k)) })
}

pub fn realign_moments(rho: &DensityMatrix, k: usize) -> Result<MomentVector> {
    rho.require_square()?;
    let r = realign(&rho.matrix, &rho.dims)?;
    Ok(MomentVector { kind: MomentKind::Realign, values: real_parts(power_traces(&r, k)) })
}

pub fn gram_moments(rho: &DensityMatrix, k: usize) -> Result<MomentVector> {
    rho.require_bipartite()?;
    let r = realign(&rho.matrix, &rho.dims)?;
    let g = r.adjoint() * &r;
    Ok(MomentVector { kind: MomentKind::Gram, values: real_parts(power_traces(&g, k)) })
}

pub fn zhang_moments(rho: &DensityMatrix, k: usize) -> Result<MomentVector> {
    rho.require_bipartite()?;
    let r = realign(&rho.matrix, &rho.dims)?;
    let s = svd_values(&r, RankTol::default())?;
    let values = (1..=k).map(|j| s.values.iter().map(|v| v.powi(j as i32)).sum()).collect();
    Ok(MomentVector { kind: MomentKind::Zhang, values })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescartesResult {
    pub psd: bool,
    pub coeffs: Vec<f64>,
}

/// PSD test by the signs of the characteristic coefficients (real spectrum assumed).
pub fn descartes_psd(a: &ComplexMatrix) -> DescartesResult {
    let coeffs = char_coeffs(a, a.nrows());
    let scale = coeffs.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let psd = coeffs.iter().all(|&x| x >= -DESCARTES_TOL * scale);
    DescartesResult { psd, coeffs }
}

/// `Tr[A]/n − √((n−1)(Tr[A²]/n − (Tr[A]/n)²))`.
pub fn lambda_min_lb(a: &ComplexMatrix) -> f64 {
    let n = a.nrows() as f64;
    let m = power_traces(a, 2);
    let mean = m[0].re / n;
    let var = (m[1].re / n - mean * mean).max(0.0);
    mean - ((n - 1.0) * var).sqrt()
}

/// Largest real root of `T₁x³ − 2T₂x² + T₃x + T₂² − T₁T₃` via companion eigenvalues.
pub fn cubic_largest_root(t1: f64, t2: f64, t3: f64) -> Result<f64> {
    let (a, b, cc, d) = (t1, -2.0 * t2, t3, t2 * t2 - t1 * t3);
    if a == 0.0 {
        return Err(EntError::Domain("cubic with zero leading coefficient".into()));
    }
    let comp = DMatrix::from_row_slice(
        3,
        3,
        &[
            C64::new(-b / a, 0.0),
            C64::new(-cc / a, 0.0),
            C64::new(-d / a, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ],
    );
    let roots = eigenvalues(&comp)?;
    let scale = roots.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    roots
        .iter()
        .filter(|z| z.im.abs() < 1e-6 * scale)
        .map(|z| z.re)
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))))
        .ok_or_else(|| EntError::Numerical("cubic has no real root".into()))
}

/// Closed-form radical expression for the same root; fragile near repeated roots.
pub fn cubic_closed_form(t1: f64, t2: f64, t3: f64) -> f64 {
    let p = -27.0 * t1 * t1 * t2 * t2 + 16.0 * t2.powi(3) + 27.0 * t1.powi(3) * t3 - 18.0 * t1 * t2 * t3;
    let r = 4.0 * t2 * t2 - 3.0 * t1 * t3;
    let q = p * p - 4.0 * r.powi(3);
    let ps = C64::new(p, 0.0) + C64::new(q, 0.0).sqrt();
    let cr = ps.powf(1.0 / 3.0);
    let g = (C64::new(4.0 * t2, 0.0) + 2.0 * 2f64.cbrt() * r / cr + 2f64.powf(2.0 / 3.0) * cr) / (6.0 * t1);
    g.re
}

pub fn lambda_max_bounds(t1: f64, t2: f64, t3: f64, n: usize) -> Result<EigenBounds> {
    let nf = n as f64;
    let a = t2 / nf - (t1 / nf).powi(2);
    let lambda_min_lb = t1 / nf - ((nf - 1.0) * a.max(0.0)).sqrt();
    if a <= 1e-14 * (t1 / nf).powi(2).max(f64::MIN_POSITIVE) {
        let l = t1 / nf;
        return Ok(EigenBounds { lambda_min_lb: l, lambda_max_lb: l, lambda_max_ub: l });
    }
    let b = (nf * nf * t3 - 3.0 * nf * t1 * t2 + 2.0 * t1.powi(3)) / nf.powi(3);
    let f = t1 / nf + (b + (b * b + 4.0 * a.powi(3)).sqrt()) / (2.0 * a);
    let g = cubic_largest_root(t1, t2, t3)?;
    Ok(EigenBounds { lambda_min_lb, lambda_max_lb: f, lambda_max_ub: g })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DkProduct {
    pub k: usize,
    pub dk: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub singular_values: Vec<f64>,
}

/// `k = rank R(ρ)`, `D_k = Π σᵢ²` over the nonzero singular values, and `D₁..D₃` from Gram moments.
pub fn dk_product(rho: &DensityMatrix, tol: RankTol) -> Result<DkProduct> {
    rho.require_bipartite()?;
    let r = realign(&rho.matrix, &rho.dims)?;
    let s = svd_values(&r, tol)?;
    let k = s.rank_at_tolerance;
    if k == 0 {
        return Err(EntError::Domain("realigned matrix is zero".into()));
    }
    let dk = s.values[..k].iter().map(|v| v * v).product();
    let t: Vec<f64> = (1..=3).map(|j| s.values.iter().map(|v| v.powi(2 * j)).sum()).collect();
    let (t1, t2, t3) = (t[0], t[1], t[2]);
    Ok(DkProduct {
        k,
        dk,
        d1: -t1,
        d2: (t1 * t1 - t2) / 2.0,
        d3: -(t1.powi(3) - 3.0 * t1 * t2 + 2.0 * t3) / 6.0,
        singular_values: s.values,
    })
}

/// `Tr[ρ P^{T_B}]`.
pub fn first_moment_via_swap(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.require_square()?;
    let p = swap_operator(d);
    let ptb = partial_transpose(&p, &rho.dims, 1)?;
    Ok(trace_product(&rho.matrix, &ptb).re)
}

/// Readings of the operator power in the k-copy moment expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopyShift {
    /// A single cyclic shift of the k copies.
    Cyclic,
    /// The normalized cyclic shift raised to the k-th power.
    NormalizedPower,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CopiesProbe {
    pub k: usize,
    pub value: f64,
    pub exact: f64,
    pub agrees: bool,
}

/// Permutation of `k` tensor factors of dimension `n` sending factor `c` to `c+shift`.
fn cyclic_permutation(n: usize, k: usize, shift: usize) -> Vec<usize> {
    let total = n.pow(k as u32);
    let mut out = vec![0; total];
    let mut digits = vec![0usize; k];
    for (x, slot) in out.iter_mut().enumerate() {
        let mut y = x;
        for c in (0..k).rev() {
            digits[c] = y % n;
            y /= n;
        }
        let mut idx = 0;
        for c in 0..k {
            idx = idx * n + digits[(c + shift) % k];
        }
        *slot = idx;
    }
    out
}

/// Brute-force evaluation of `Tr[(R⊗…⊗R) S]` for `k ≤ 3` copies, `d ∈ {2, 3}`.
pub fn moment_via_copies(rho: &DensityMatrix, k: usize, shift: CopyShift) -> Result<CopiesProbe> {
    let d = rho.require_square()?;
    if !(2..=3).contains(&d) || !(1..=3).contains(&k) {
        return Err(EntError::Input(format!("k-copy oracle limited to d <= 3, k <= 3 (got d = {d}, k = {k})")));
    }
    let r = realign(&rho.matrix, &rho.dims)?;
    let mut big = r.clone();
    for _ in 1..k {
        big = matkit::kron(&big, &r);
    }
    let n = d * d;
    let perm = cyclic_permutation(n, k, 1);
    let (perm, scale) = match shift {
        CopyShift::Cyclic => (perm, 1.0),
        CopyShift::NormalizedPower => {
            let mut p: Vec<usize> = (0..perm.len()).collect();
            for _ in 0..k {
                p = p.iter().map(|&i| perm[i]).collect();
            }
            (p, (n as f64).powi(-(k as i32)))
        }
    };
    let mut s = C64::new(0.0, 0.0);
    for (x, &y) in perm.iter().enumerate() {
        s += big[(x, y)];
    }
    let value = s.re * scale;
    let exact = power_traces(&r, k)[k - 1].re;
    Ok(CopiesProbe { k, value, exact, agrees: (value - exact).abs() <= 1e-10 * exact.abs().max(1.0) })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub shots: usize,
}

/// Simulated projective measurement of `P^{T_B}` on `ρ`.
pub fn estimate_first_moment(rho: &DensityMatrix, shots: usize, seed: u64) -> Result<Estimate> {
    if shots == 0 {
        return Err(EntError::Input("shots must be at least 1".into()));
    }
    let d = rho.require_square()?;
    let obs = partial_transpose(&swap_operator(d), &rho.dims, 1)?;
    let (vals, vecs) = eigh(&obs)?;
    let weights: Vec<f64> = (0..vals.len())
        .map(|i| {
            let v = vecs.column(i);
            (v.adjoint() * &rho.matrix * v)[(0, 0)].re.max(0.0)
        })
        .collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| EntError::Numerical(format!("Born weights: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..shots {
        let x = vals[dist.sample(&mut rng)];
        sum += x;
        sq += x * x;
    }
    let n = shots as f64;
    let mean = sum / n;
    let var = if shots > 1 { ((sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok(Estimate { mean, std_error: (var / n).sqrt(), shots })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn contains(&self, x: f64, rel: f64) -> bool {
        x >= self.lower * (1.0 - rel) && x <= self.upper * (1.0 + rel)
    }
}

/// `m₁²/k ≤ T₁ ≤ m₁²/j`.
pub fn t1_interval_from_m1(m1: f64, j: usize, k: usize) -> Result<Interval> {
    check_jk(j, k)?;
    Ok(Interval { lower: m1 * m1 / k as f64, upper: m1 * m1 / j as f64 })
}

/// `m₁⁴/(d²k²) ≤ T₂ ≤ m₁⁴/j²`.
pub fn t2_interval_from_m1(m1: f64, j: usize, k: usize, d: usize) -> Result<Interval> {
    check_jk(j, k)?;
    let m4 = m1.powi(4);
    Ok(Interval { lower: m4 / ((d * d * k * k) as f64), upper: m4 / ((j * j) as f64) })
}

fn check_jk(j: usize, k: usize) -> Result<()> {
    if j == 0 || j > k {
        return Err(EntError::Input(format!("need 1 <= j <= k, got j = {j}, k = {k}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct IntervalReport {
    pub interval: Interval,
    pub t1: f64,
    pub contained: bool,
}

/// Checks the `T₁` interval against the state's actual `T₁` with `k = rank R(ρ)`.
pub fn t1_interval_report(rho: &DensityMatrix, j: Option<usize>, tol: RankTol) -> Result<IntervalReport> {
    let m1 = realign_moments(rho, 1)?.get(1);
    let dk = dk_product(rho, tol)?;
    let t1 = gram_moments(rho, 1)?.get(1);
    let interval = t1_interval_from_m1(m1, j.unwrap_or(dk.k), dk.k)?;
    Ok(IntervalReport { interval, t1, contained: interval.contains(t1, 1e-9) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum S1Case {
    Case1,
    Case2,
    NoCase,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct S1Interval {
    pub case: S1Case,
    pub interval: Option<Interval>,
}

/// Interval for `m₁` from the measured `s₁`, with the branch functions evaluated as printed.
pub fn m1_interval_from_s1(s1: f64, l: f64, d: usize) -> Result<S1Interval> {
    if !(0.0..=1.0).contains(&l) {
        return Err(EntError::Range(format!("l = {l} outside [0, 1]")));
    }
    let d2 = (d * d) as f64;
    let d4 = d2 * d2;
    let x = 1.0 - d2 * s1;
    if x < 0.0 {
        return Err(EntError::Domain(format!("1 - d^2 s1 = {x} is negative")));
    }
    let sx = x.sqrt();
    let lo1 = 2.0 - d2 * s1 + 2.0 * sx;
    let hi2 = 2.0 - d2 * s1 - 2.0 * sx;
    let big = (d4 * d4 + 2.0 * d4 * d2 * s1 + 4.0 * d2 * s1 + d4 * s1 * s1 - 8.0 * (1.0 + sx)).sqrt();
    let dl = d4 * l;
    if lo1 <= dl && dl <= d4 {
        let lower = 0.5 * (-d2 + s1) - big / (2.0 * d2);
        let upper = -(x + sx) / d2 + big / (2.0 * d2);
        return Ok(S1Interval { case: S1Case::Case1, interval: Some(Interval { lower, upper }) });
    }
    if 0.0 <= dl && dl <= hi2 {
        let inner = (1.0 + x - 2.0 * sx).max(0.0).sqrt();
        let lower = (-x + sx - inner) / d2;
        let upper = s1 / 2.0 + inner / d2;
        return Ok(S1Interval { case: S1Case::Case2, interval: Some(Interval { lower, upper }) });
    }
    Ok(S1Interval { case: S1Case::NoCase, interval: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::{diag_real, eig_hermitian, identity};
    use crate::statebank::{make_state, random, Params};
    use rand::SeedableRng;

    fn bell() -> DensityMatrix {
        make_state("bell", &Params::new()).unwrap()
    }

    #[test]
    fn bell_pt_moments() {
        let m = pt_moments(&bell(), 3).unwrap();
        assert!((m.get(1) - 1.0).abs() < 1e-12);
        assert!((m.get(2) - 1.0).abs() < 1e-12);
        assert!((m.get(3) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn rho_t_first_moment() {
        for t in [-0.6, 0.0, 0.3] {
            let rho = make_state_t(t);
            assert!((realign_moments(&rho, 1).unwrap().get(1) - (t + 0.875)).abs() < 1e-14);
        }
    }

    fn make_state_t(t: f64) -> DensityMatrix {
        make_state("rho_t", &Params::new().with("t", t)).unwrap()
    }

    #[test]
    fn maximally_mixed_first_moment() {
        for d in [2, 3] {
            let mm = DensityMatrix::new_unchecked(
                identity(d * d).scale(1.0 / (d * d) as f64),
                matkit::DimSpec::bipartite(d, d).unwrap(),
                "mm",
            );
            assert!((realign_moments(&mm, 1).unwrap().get(1) - 1.0 / d as f64).abs() < 1e-14);
            assert!((first_moment_via_swap(&mm).unwrap() - 1.0 / d as f64).abs() < 1e-14);
        }
        assert!((first_moment_via_swap(&bell()).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gram_iso2() {
        for f in [0.2, 0.5, 0.9] {
            let rho = make_state("iso2", &Params::new().with("f", f)).unwrap();
            let t1 = gram_moments(&rho, 1).unwrap().get(1);
            assert!((t1 - (1.0 - 2.0 * f + 4.0 * f * f) / 3.0).abs() < 1e-13);
        }
        let rho = make_state("rudolph_st", &Params::new().with("s", 0.6).with("t", 0.3)).unwrap();
        let t1 = gram_moments(&rho, 1).unwrap().get(1);
        assert!((t1 - (21.0 - 12.0 + 16.0 * (0.36 + 0.09)) / 32.0).abs() < 1e-13);
    }

    #[test]
    fn zhang_and_gram_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random::state(&[2, 3], &mut rng);
        let z = zhang_moments(&rho, 4).unwrap();
        let g = gram_moments(&rho, 2).unwrap();
        assert!((z.get(2) - g.get(1)).abs() < 1e-12);
        assert!((z.get(4) - g.get(2)).abs() < 1e-12);
        let r = realign(&rho.matrix, &rho.dims).unwrap();
        assert!((z.get(1) - matkit::trace_norm(&r)).abs() < 1e-12);
    }

    #[test]
    fn descartes_on_rho_t() {
        for t in [0.1, 0.4, 0.7] {
            let r = realign(&make_state_t(t).matrix, &matkit::DimSpec::bipartite(2, 2).unwrap()).unwrap();
            assert!(descartes_psd(&r).psd, "t = {t}");
        }
        for t in [-0.1, -0.4, -0.7] {
            let r = realign(&make_state_t(t).matrix, &matkit::DimSpec::bipartite(2, 2).unwrap()).unwrap();
            assert!(!descartes_psd(&r).psd, "t = {t}");
        }
    }

    #[test]
    fn descartes_iso3_beta() {
        for b in [0.0, 0.3, 0.6, 1.0] {
            let rho = make_state("iso3_beta", &Params::new().with("beta", b)).unwrap();
            assert!(descartes_psd(&realign(&rho.matrix, &rho.dims).unwrap()).psd);
        }
    }

    #[test]
    fn lb_examples() {
        assert!((lambda_min_lb(&identity(4)) - 1.0).abs() < 1e-15);
        assert!(lambda_min_lb(&diag_real(&[1.0, 0.0])).abs() < 1e-15);
    }

    #[test]
    fn max_bounds_examples() {
        let e = lambda_max_bounds(3.0, 3.0, 3.0, 3).unwrap();
        assert_eq!((e.lambda_max_lb, e.lambda_max_ub), (1.0, 1.0));
        let d = diag_real(&[2.0, 1.0, 1.0, 0.0]);
        let m: Vec<f64> = power_traces(&d, 3).iter().map(|z| z.re).collect();
        let e = lambda_max_bounds(m[0], m[1], m[2], 4).unwrap();
        assert!(e.lambda_max_lb <= 2.0 + 1e-12 && 2.0 <= e.lambda_max_ub + 1e-12);
        assert!((cubic_closed_form(m[0], m[1], m[2]) - e.lambda_max_ub).abs() < 1e-6);
    }

    #[test]
    fn dk_bes4x4() {
        let rho = make_state("bes4x4", &Params::new()).unwrap();
        let dk = dk_product(&rho, RankTol::default()).unwrap();
        assert_eq!(dk.k, 8);
        let npt = make_state("npt3x3", &Params::new()).unwrap();
        assert_eq!(dk_product(&npt, RankTol::default()).unwrap().k, 5);
    }

    #[test]
    fn copies_probe() {
        let rho = bell();
        for k in 1..=3 {
            let p = moment_via_copies(&rho, k, CopyShift::Cyclic).unwrap();
            assert!(p.agrees, "k = {k}: {} vs {}", p.value, p.exact);
        }
        let lit = moment_via_copies(&rho, 2, CopyShift::NormalizedPower).unwrap();
        assert!((lit.value - 0.25).abs() < 1e-12);
        let one = moment_via_copies(&rho, 1, CopyShift::NormalizedPower).unwrap();
        assert!((one.value - 0.5).abs() < 1e-12);
        assert!(moment_via_copies(&rho, 4, CopyShift::Cyclic).is_err());
    }

    #[test]
    fn sampling() {
        let a = estimate_first_moment(&bell(), 1000, 7).unwrap();
        let b = estimate_first_moment(&bell(), 1000, 7).unwrap();
        assert_eq!(a, b);
        let mm = make_state("iso2", &Params::new().with("f", 0.25)).unwrap();
        let one = estimate_first_moment(&mm, 1, 1).unwrap();
        assert!(one.mean == 0.0 || (one.mean - 2.0).abs() < 1e-12);
    }

    #[test]
    fn intervals() {
        let i = t1_interval_from_m1(0.9, 3, 3).unwrap();
        assert_eq!(i.lower, i.upper);
        assert!(t1_interval_from_m1(0.9, 4, 3).is_err());
        let t2 = t2_interval_from_m1(1.0, 1, 2, 2).unwrap();
        assert!((t2.lower - 1.0 / 16.0).abs() < 1e-15 && t2.upper == 1.0);
        let s = m1_interval_from_s1(0.2, 0.01, 2).unwrap();
        assert_eq!(s.case, S1Case::Case2);
        let iv = s.interval.unwrap();
        assert!(iv.lower.is_finite() && iv.upper.is_finite());
        assert!(m1_interval_from_s1(0.5, 0.1, 2).is_err());
    }

    #[test]
    fn eig_sanity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = random::hermitian(5, &mut rng);
        let lb = lambda_min_lb(&h);
        assert!(lb <= eig_hermitian(&h).unwrap().min() + 1e-12);
    }
}
