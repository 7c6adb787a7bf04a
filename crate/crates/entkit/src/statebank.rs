//! Density matrices and the built-in catalog of state families.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use nalgebra::DMatrix;

use crate::error::{EntError, Result};
use crate::matkit::{
    self, basis_ket, c, diag_real, hermitian_defect, identity, ket, kron, projector,
    re, ComplexMatrix, DimSpec, C64, HERMITIAN_TOL,
};

pub const TRACE_TOL: f64 = 1e-9;
pub const PSD_TOL: f64 = 1e-9;

/// `q₀ = (√2 − 1)/2`, the PPT point of the 4⊗4 family.
pub const Q0: f64 = (SQRT_2 - 1.0) / 2.0;
/// `p₀ = (1 − 2q₀)/4`.
pub const P0: f64 = (SQRT_2 - 1.0) / (2.0 * SQRT_2);

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub matrix: ComplexMatrix,
    pub dims: DimSpec,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ValidationReport {
    pub label: String,
    pub dims_ok: bool,
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub hermitian: bool,
    pub unit_trace: bool,
    pub psd: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.dims_ok && self.hermitian && self.unit_trace && self.psd
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.dims_ok {
            out.push("dims");
        }
        if !self.hermitian {
            out.push("hermiticity");
        }
        if !self.unit_trace {
            out.push("trace");
        }
        if !self.psd {
            out.push("positivity");
        }
        out
    }
}

impl DensityMatrix {
    /// Validated constructor.
    pub fn new(matrix: ComplexMatrix, dims: DimSpec, label: impl Into<String>) -> Result<Self> {
        let rho = Self::new_unchecked(matrix, dims, label);
        let rep = validate(&rho);
        if !rep.passed() {
            return Err(EntError::Domain(format!(
                "{} is not a density matrix: failed {} (hermiticity {:.2e}, trace defect {:.2e}, min eigenvalue {:.3e})",
                rho.label,
                rep.failures().join(", "),
                rep.hermiticity_defect,
                rep.trace_defect,
                rep.min_eigenvalue
            )));
        }
        Ok(rho)
    }

    pub fn new_unchecked(matrix: ComplexMatrix, dims: DimSpec, label: impl Into<String>) -> Self {
        DensityMatrix { matrix, dims, label: label.into() }
    }

    pub fn order(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn d1(&self) -> usize {
        self.dims.get(0)
    }

    pub fn d2(&self) -> usize {
        self.dims.get(1)
    }

    pub fn is_bipartite(&self) -> bool {
        self.dims.len() == 2
    }

    pub fn require_bipartite(&self) -> Result<(usize, usize)> {
        if !self.is_bipartite() {
            return Err(EntError::Dim(format!("{} is not bipartite (dims {})", self.label, self.dims)));
        }
        Ok((self.d1(), self.d2()))
    }

    /// Local dimension `d` of a `d⊗d` state.
    pub fn require_square(&self) -> Result<usize> {
        let (d1, d2) = self.require_bipartite()?;
        if d1 != d2 {
            return Err(EntError::Dim(format!("{} is {d1}⊗{d2}, need equal local dimensions", self.label)));
        }
        Ok(d1)
    }

    pub fn require_three_qubit(&self) -> Result<()> {
        if self.dims.dims() != [2, 2, 2] {
            return Err(EntError::Dim(format!("{} has dims {}, need 2x2x2", self.label, self.dims)));
        }
        Ok(())
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

pub fn validate(rho: &DensityMatrix) -> ValidationReport {
    let m = &rho.matrix;
    let dims_ok = m.is_square() && m.nrows() == rho.dims.order();
    let scale = m.iter().fold(1.0f64, |a, z| a.max(z.norm()));
    let hermiticity_defect = hermitian_defect(m);
    let hermitian = hermiticity_defect <= HERMITIAN_TOL * scale;
    let trace_defect = if m.is_square() { (m.trace() - re(1.0)).norm() } else { f64::INFINITY };
    let min_eigenvalue = if m.is_square() {
        matkit::eig_hermitian_with(m, true).map(|s| s.min()).unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    ValidationReport {
        label: rho.label.clone(),
        dims_ok,
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        hermitian,
        unit_trace: trace_defect <= TRACE_TOL,
        psd: min_eigenvalue >= -PSD_TOL,
    }
}

/// Named real parameters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    pub fn new() -> Self {
        Params(BTreeMap::new())
    }

    pub fn with(mut self, name: &str, v: f64) -> Self {
        self.0.insert(name.to_string(), v);
        self
    }

    pub fn set(&mut self, name: &str, v: f64) {
        self.0.insert(name.to_string(), v);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &f64)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses `name=value,name=value`. Values accept `p0`, `q0`, `sqrt(x)` and `x/y`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut p = Params::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| EntError::Input(format!("expected name=value, got '{item}'")))?;
            p.set(k.trim(), parse_value(v.trim())?);
        }
        Ok(p)
    }
}

pub fn parse_value(v: &str) -> Result<f64> {
    let bad = || EntError::Input(format!("cannot parse number '{v}'"));
    let v = v.trim();
    let (neg, body) = match v.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, v),
    };
    let x = match body {
        "p0" => P0,
        "q0" => Q0,
        _ => {
            if let Some((a, b)) = body.split_once('/') {
                parse_value(a)? / parse_value(b)?
            } else if let Some(inner) = body.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
                parse_value(inner)?.sqrt()
            } else {
                body.parse::<f64>().map_err(|_| bad())?
            }
        }
    };
    if !x.is_finite() {
        return Err(bad());
    }
    Ok(if neg { -x } else { x })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
    pub default: f64,
    pub integer: bool,
}

impl ParamSpec {
    const fn closed(name: &'static str, lo: f64, hi: f64, default: f64) -> Self {
        ParamSpec { name, lo, hi, lo_open: false, hi_open: false, default, integer: false }
    }

    const fn open(name: &'static str, lo: f64, hi: f64, default: f64) -> Self {
        ParamSpec { name, lo, hi, lo_open: true, hi_open: true, default, integer: false }
    }

    const fn left_open(name: &'static str, lo: f64, hi: f64, default: f64) -> Self {
        ParamSpec { name, lo, hi, lo_open: true, hi_open: false, default, integer: false }
    }

    const fn int(name: &'static str, lo: f64, hi: f64, default: f64) -> Self {
        ParamSpec { name, lo, hi, lo_open: false, hi_open: false, default, integer: true }
    }

    pub fn contains(&self, x: f64) -> bool {
        let lo_ok = if self.lo_open { x > self.lo } else { x >= self.lo };
        let hi_ok = if self.hi_open { x < self.hi } else { x <= self.hi };
        lo_ok && hi_ok && (!self.integer || x.fract() == 0.0)
    }

    pub fn describe(&self) -> String {
        format!(
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo,
            self.hi,
            if self.hi_open { ')' } else { ']' }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateFamily {
    pub id: &'static str,
    pub dims: &'static [usize],
    pub params: Vec<ParamSpec>,
    pub summary: &'static str,
}

const NPT3_LO: f64 = 0.262_513_158_259_241_66;
const NPT3_HI: f64 = 0.368_743_420_870_379_17;
const RHO_T_MAX: f64 = 0.790_569_415_042_094_8;

/// The catalog, in a fixed order.
pub fn families() -> Vec<StateFamily> {
    use ParamSpec as P;
    vec![
        StateFamily { id: "bell", dims: &[2, 2], params: vec![P::int("which", 0.0, 3.0, 0.0)], summary: "Bell states phi+, phi-, psi+, psi- (which = 0..3)" },
        StateFamily { id: "iso2", dims: &[2, 2], params: vec![P::closed("f", 0.0, 1.0, 0.75)], summary: "two-qubit isotropic state" },
        StateFamily { id: "iso3", dims: &[3, 3], params: vec![P::closed("f", 0.0, 1.0, 0.5)], summary: "two-qutrit isotropic state with fidelity f" },
        StateFamily { id: "iso3_beta", dims: &[3, 3], params: vec![P::closed("beta", -0.125, 1.0, 0.5)], summary: "two-qutrit isotropic state, weight beta on the maximally entangled projector" },
        StateFamily { id: "horodecki_a", dims: &[3, 3], params: vec![P::closed("a", 0.0, 1.0, 0.5)], summary: "3x3 bound entangled family rho_a" },
        StateFamily { id: "horodecki_alpha", dims: &[3, 3], params: vec![P::closed("alpha", 2.0, 5.0, 3.5)], summary: "3x3 family 2/7 psi+ + alpha/7 sigma+ + (5-alpha)/7 sigma-" },
        StateFamily { id: "upb_tiles", dims: &[3, 3], params: vec![], summary: "bound entangled state from the tiles unextendible product basis" },
        StateFamily { id: "upb_mixture", dims: &[3, 3], params: vec![P::int("i", 1.0, 5.0, 1.0), P::closed("gamma", 0.0, 1.0, 0.05)], summary: "gamma |psi_i><psi_i| + (1-gamma) rho_upb" },
        StateFamily { id: "bes4x4", dims: &[4, 4], params: vec![P::closed("q", 0.0, 0.5, Q0)], summary: "4x4 family with 4p + 2q = 1 (p derived from q)" },
        StateFamily { id: "bes4x4_noisy", dims: &[4, 4], params: vec![P::closed("lambda", 0.0, 1.0, 1.0)], summary: "lambda rho(p0,q0) + (1-lambda) I/16" },
        StateFamily { id: "kye", dims: &[4, 4], params: vec![P::open("r", 0.0, 1.0, 0.5), P::closed("p", 1.0, 1.0, 1.0), P::closed("z", 1.0, 1.0, 1.0)], summary: "4x4 PPT family rho(z,p,r); only z = p = 1 is in range" },
        StateFamily { id: "npt3x3", dims: &[3, 3], params: vec![P::closed("a", NPT3_LO, NPT3_HI, 0.3)], summary: "3x3 NPT family with off-diagonal -11/50" },
        StateFamily { id: "two_param_2xn", dims: &[2, 0], params: vec![P::int("n", 3.0, 8.0, 3.0), P::closed("alpha", 0.0, 0.25, 0.05), P::closed("gamma", 0.0, 1.0, 0.6)], summary: "2xn family with beta = (1 - 2(n-2) alpha - gamma)/3" },
        StateFamily { id: "rudolph_st", dims: &[2, 2], params: vec![P::left_open("s", 0.25, 1.0, 0.5), P::closed("t", -RHO_T_MAX, RHO_T_MAX, 0.3)], summary: "two-qubit family rho(s,t), t != 0" },
        StateFamily { id: "rho_t", dims: &[2, 2], params: vec![P::closed("t", -RHO_T_MAX, RHO_T_MAX, 0.5)], summary: "two-qubit family rho_t" },
        StateFamily { id: "qutrit_mu", dims: &[3, 3], params: vec![P::closed("mu", FRAC_1_SQRT_2, 1.0, 0.85)], summary: "two-qutrit NPT family rho_mu" },
        StateFamily { id: "mixed_marginals", dims: &[2, 2], params: vec![P::closed("t1", -1.0, 1.0, 0.0), P::closed("t2", -1.0, 1.0, 0.0), P::closed("t3", -1.0, 1.0, 0.0)], summary: "1/4 [I + sum t_j sigma_j x sigma_j]" },
        StateFamily { id: "eps3x3", dims: &[3, 3], params: vec![P::open("eps", 0.0, f64::INFINITY, 0.7)], summary: "3x3 family rho_eps, eps != 1" },
        StateFamily { id: "bihalan_be", dims: &[3, 3], params: vec![], summary: "fixed 3x3 PPT entangled state" },
        StateFamily { id: "acin_abc", dims: &[2, 2, 2], params: vec![P::open("a", 0.0, f64::INFINITY, 1.0), P::open("b", 0.0, f64::INFINITY, 1.0), P::open("c", 0.0, f64::INFINITY, 1.0)], summary: "three-qubit bound entangled family rho(a,b,c)" },
        StateFamily { id: "mub3", dims: &[2, 2, 2], params: vec![P::closed("p1", 0.0, 1.0, 0.0), P::closed("p3", 0.0, 1.0 / 3.0, 0.3)], summary: "three-qubit family from mutually unbiased bases, p2 = 1 - p1 - 3 p3" },
        StateFamily { id: "rho12", dims: &[2, 2], params: vec![], summary: "fixed two-qubit state with corner 13/30" },
        StateFamily { id: "varrho12", dims: &[2, 2], params: vec![], summary: "fixed two-qubit state with corner 11/30" },
    ]
}

pub fn family(id: &str) -> Result<StateFamily> {
    families()
        .into_iter()
        .find(|f| f.id == id)
        .ok_or_else(|| EntError::Input(format!("unknown state family '{id}'")))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MakeOptions {
    /// Skip parameter-range and physicality checks.
    pub unchecked: bool,
}

pub fn make_state(family_id: &str, params: &Params) -> Result<DensityMatrix> {
    make_state_with(family_id, params, MakeOptions::default())
}

pub fn make_state_with(family_id: &str, params: &Params, opts: MakeOptions) -> Result<DensityMatrix> {
    let fam = family(family_id)?;
    for (k, _) in params.iter() {
        if !fam.params.iter().any(|p| p.name == k) {
            return Err(EntError::Input(format!("family '{}' has no parameter '{k}'", fam.id)));
        }
    }
    let mut vals = BTreeMap::new();
    for spec in &fam.params {
        let v = params.get(spec.name).unwrap_or(spec.default);
        if !v.is_finite() {
            return Err(EntError::Input(format!("parameter {} is not finite", spec.name)));
        }
        if !opts.unchecked && !spec.contains(v) {
            return Err(EntError::Range(format!(
                "{}: {} = {v} outside {}",
                fam.id,
                spec.name,
                spec.describe()
            )));
        }
        vals.insert(spec.name, v);
    }
    if !opts.unchecked {
        extra_constraints(fam.id, &vals)?;
    }
    let (matrix, dims) = build(fam.id, &vals)?;
    let label = state_label(fam.id, &fam.params, &vals);
    let dims = DimSpec::new(dims)?;
    if opts.unchecked {
        Ok(DensityMatrix::new_unchecked(matrix, dims, label))
    } else {
        DensityMatrix::new(matrix, dims, label)
    }
}

fn state_label(id: &str, specs: &[ParamSpec], vals: &BTreeMap<&str, f64>) -> String {
    if specs.is_empty() {
        return id.to_string();
    }
    let parts: Vec<String> = specs.iter().map(|s| format!("{}={}", s.name, vals[s.name])).collect();
    format!("{id}({})", parts.join(","))
}

fn extra_constraints(id: &str, v: &BTreeMap<&str, f64>) -> Result<()> {
    let fail = |m: String| Err(EntError::Range(format!("{id}: {m}")));
    match id {
        "two_param_2xn" => {
            let n = v["n"];
            let amax = 1.0 / (2.0 * (n - 1.0));
            if v["alpha"] > amax {
                return fail(format!("alpha = {} exceeds 1/(2(n-1)) = {amax}", v["alpha"]));
            }
            if two_param_beta(n, v["alpha"], v["gamma"]) < 0.0 {
                return fail("beta = (1 - 2(n-2) alpha - gamma)/3 is negative".into());
            }
        }
        "rudolph_st" if v["t"] == 0.0 => return fail("t must be nonzero".into()),
        "eps3x3" if v["eps"] == 1.0 => return fail("eps must differ from 1".into()),
        "mub3" => {
            let p2 = 1.0 - v["p1"] - 3.0 * v["p3"];
            if !(-1e-12..=1.0).contains(&p2) {
                return fail(format!("p2 = 1 - p1 - 3 p3 = {p2} outside [0, 1]"));
            }
        }
        "mixed_marginals" => {
            let (t1, t2, t3) = (v["t1"], v["t2"], v["t3"]);
            if (1.0 - t3).powi(2) < (t1 + t2).powi(2) || (1.0 + t3).powi(2) < (t1 - t2).powi(2) {
                return fail("eigenvalue conditions on (t1, t2, t3) violated".into());
            }
        }
        _ => {}
    }
    Ok(())
}

fn two_param_beta(n: f64, alpha: f64, gamma: f64) -> f64 {
    (1.0 - 2.0 * (n - 2.0) * alpha - gamma) / 3.0
}

fn normalized(m: ComplexMatrix) -> ComplexMatrix {
    let t = m.trace().re;
    m.scale(1.0 / t)
}

fn hermitize_upper(a: &mut ComplexMatrix) {
    let n = a.nrows();
    for i in 0..n {
        for j in i + 1..n {
            a[(j, i)] = a[(i, j)].conj();
        }
    }
}

/// `(|00⟩ + |11⟩ + …)/√d`.
pub fn max_entangled(d: usize) -> ComplexMatrix {
    let amp = 1.0 / (d as f64).sqrt();
    let amps: Vec<(usize, f64)> = (0..d).map(|i| (i * d + i, amp)).collect();
    ket(d * d, &amps)
}

/// Bell vectors `φ⁺, φ⁻, ψ⁺, ψ⁻`.
pub fn bell_vector(which: usize) -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    match which {
        0 => ket(4, &[(0, h), (3, h)]),
        1 => ket(4, &[(0, h), (3, -h)]),
        2 => ket(4, &[(1, h), (2, h)]),
        _ => ket(4, &[(1, h), (2, -h)]),
    }
}

/// Vectors of the tiles unextendible product basis.
pub fn upb_vectors() -> Vec<ComplexMatrix> {
    let k = |i| basis_ket(3, i);
    let h = FRAC_1_SQRT_2;
    let sum = ket(3, &[(0, 1.0), (1, 1.0), (2, 1.0)]).scale(1.0 / 3f64.sqrt());
    vec![
        kron(&k(0), &(k(0) - k(1))).scale(h),
        kron(&(k(0) - k(1)), &k(2)).scale(h),
        kron(&k(2), &(k(1) - k(2))).scale(h),
        kron(&(k(1) - k(2)), &k(0)).scale(h),
        kron(&sum, &sum),
    ]
}

pub fn upb_state() -> ComplexMatrix {
    let mut m = identity(9);
    for v in upb_vectors() {
        m -= projector(&v);
    }
    m.scale(0.25)
}

fn bes4x4(p: f64, q: f64) -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    let ws = [
        ket(16, &[(1, h), (11, h)]),
        ket(16, &[(4, h), (14, h)]),
        ket(16, &[(5, h), (10, h)]),
        ket(16, &[(0, h), (15, -h)]),
    ];
    let vs = [ket(16, &[(3, 0.5), (6, 0.5), (9, h)]), ket(16, &[(3, -0.5), (6, 0.5), (12, h)])];
    let mut m = DMatrix::zeros(16, 16);
    for w in &ws {
        m += projector(w).scale(p);
    }
    for v in &vs {
        m += projector(v).scale(q);
    }
    m
}

fn kye(r: f64, p: f64, z: f64) -> ComplexMatrix {
    let mut a: ComplexMatrix = DMatrix::zeros(16, 16);
    let zc = re(z);
    let diag = [
        [2.0, 1.0 / p, p, r / p + r],
        [p, 2.0, r / p + r, 1.0 / p],
        [1.0 / p, r * p + r, 2.0, p],
        [r * p + r, p, 1.0 / p, 2.0],
    ];
    for (b, row) in diag.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            a[(4 * b + i, 4 * b + i)] = re(v);
        }
    }
    let mut put = |bi: usize, bj: usize, i: usize, j: usize, v: C64| a[(4 * bi + i, 4 * bj + j)] += v;
    put(0, 1, 0, 1, -zc);
    put(0, 1, 2, 3, re(-r));
    put(0, 2, 0, 2, -zc);
    put(0, 2, 1, 3, -zc * r);
    put(1, 3, 0, 2, -zc * r);
    put(1, 3, 1, 3, -zc);
    put(2, 3, 0, 1, re(-r));
    put(2, 3, 2, 3, -zc);
    hermitize_upper(&mut a);
    normalized(a)
}

fn horodecki_a(a: f64) -> ComplexMatrix {
    let mut m = diag_real(&[a; 9]);
    for &i in &[0, 4, 8] {
        for &j in &[0, 4, 8] {
            m[(i, j)] = re(a);
        }
    }
    let s = (1.0 - a * a).sqrt() / 2.0;
    m[(6, 6)] = re((1.0 + a) / 2.0);
    m[(8, 8)] = re((1.0 + a) / 2.0);
    m[(6, 8)] = re(s);
    m[(8, 6)] = re(s);
    m.scale(1.0 / (8.0 * a + 1.0))
}

fn horodecki_alpha(alpha: f64) -> ComplexMatrix {
    let sigma = |idx: [usize; 3]| {
        let mut d = [0.0; 9];
        for i in idx {
            d[i] = 1.0 / 3.0;
        }
        diag_real(&d)
    };
    projector(&max_entangled(3)).scale(2.0 / 7.0)
        + sigma([1, 5, 6]).scale(alpha / 7.0)
        + sigma([3, 7, 2]).scale((5.0 - alpha) / 7.0)
}

fn npt3x3(a: f64) -> ComplexMatrix {
    let mut m = diag_real(&[(1.0 - a) / 2.0, 0.0, 0.0, 0.0, 0.5 - a, a, 0.0, 0.0, a / 2.0]);
    let o = re(-11.0 / 50.0);
    m[(0, 8)] = o;
    m[(8, 0)] = o;
    m[(4, 5)] = o;
    m[(5, 4)] = o;
    m
}

fn two_param(n: usize, alpha: f64, gamma: f64) -> ComplexMatrix {
    let dim = 2 * n;
    let beta = two_param_beta(n as f64, alpha, gamma);
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..2 {
        for j in 2..n {
            m[(i * n + j, i * n + j)] = re(alpha);
        }
    }
    let h = FRAC_1_SQRT_2;
    let (e00, e01, e10, e11) = (0, 1, n, n + 1);
    let phi_p = ket(dim, &[(e00, h), (e11, h)]);
    let phi_m = ket(dim, &[(e00, h), (e11, -h)]);
    let psi_p = ket(dim, &[(e01, h), (e10, h)]);
    let psi_m = ket(dim, &[(e01, h), (e10, -h)]);
    m += (projector(&phi_p) + projector(&phi_m) + projector(&psi_p)).scale(beta);
    m += projector(&psi_m).scale(gamma);
    m
}

fn rudolph(s: f64, t: f64) -> ComplexMatrix {
    let mut m = diag_real(&[5.0 / 8.0, 0.0, (s - 0.25) / 2.0, (1.0 - s) / 2.0]);
    m[(0, 3)] = re(t / 2.0);
    m[(3, 0)] = re(t / 2.0);
    m
}

fn qutrit_mu(mu: f64) -> ComplexMatrix {
    let psis = [
        ket(9, &[(1, 1.0), (3, -mu)]),
        ket(9, &[(2, 1.0), (6, -mu)]),
        ket(9, &[(0, 1.0), (4, 1.0), (8, 1.0)]),
    ];
    let mut m = DMatrix::zeros(9, 9);
    for p in &psis {
        m += projector(p);
    }
    m.scale(1.0 / (5.0 + 2.0 * mu * mu))
}

pub fn pauli(k: usize) -> ComplexMatrix {
    let z = re(0.0);
    let o = re(1.0);
    let entries = match k {
        0 => [o, z, z, o],
        1 => [z, o, o, z],
        2 => [z, c(0.0, -1.0), c(0.0, 1.0), z],
        _ => [o, z, z, -o],
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

fn mixed_marginals(t: [f64; 3]) -> ComplexMatrix {
    let mut m = identity(4);
    for (j, tj) in t.iter().enumerate() {
        m += kron(&pauli(j + 1), &pauli(j + 1)).scale(*tj);
    }
    m.scale(0.25)
}

fn eps3x3(e: f64) -> ComplexMatrix {
    let e2 = e * e;
    let mut m = diag_real(&[1.0, 1.0 / e2, e2, e2, 1.0, 1.0 / e2, 1.0 / e2, e2, 1.0]);
    for (i, j) in [(0, 4), (0, 8), (4, 8), (1, 3), (2, 6), (5, 7)] {
        m[(i, j)] = re(1.0);
        m[(j, i)] = re(1.0);
    }
    normalized(m)
}

fn bihalan() -> ComplexMatrix {
    let s5 = 5f64.sqrt();
    let den = 3.0 + 9.0 * s5;
    let (a, b, cc) = ((1.0 + s5) / den, -2.0 / den, (-1.0 + s5) / den);
    let mut m = diag_real(&[a, cc, a, a, a, cc, cc, a, a]);
    for (i, j) in [(0, 4), (0, 8), (5, 7)] {
        m[(i, j)] = re(b);
        m[(j, i)] = re(b);
    }
    m
}

fn acin(a: f64, b: f64, cc: f64) -> ComplexMatrix {
    let mut m = diag_real(&[1.0, a, b, cc, 1.0 / cc, 1.0 / b, 1.0 / a, 1.0]);
    m[(0, 7)] = re(1.0);
    m[(7, 0)] = re(1.0);
    normalized(m)
}

fn kron3(a: &ComplexMatrix, b: &ComplexMatrix, cc: &ComplexMatrix) -> ComplexMatrix {
    kron(&kron(a, b), cc)
}

fn mub3(p1: f64, p3: f64) -> ComplexMatrix {
    let p2 = 1.0 - p1 - 3.0 * p3;
    let r1 = p1 + p2 - p3;
    let r4 = p1 - p2 + 3.0 * p3;
    let r5 = -p1 + p2 + p3;
    let (i, x, y, z) = (pauli(0), pauli(1), pauli(2), pauli(3));
    let mut m = kron3(&i, &i, &i);
    m += (kron3(&z, &z, &i) + kron3(&z, &i, &z) + kron3(&i, &z, &z)).scale(r1);
    m += kron3(&x, &x, &x).scale(r4);
    m += (kron3(&x, &y, &y) + kron3(&y, &x, &y) + kron3(&y, &y, &x)).scale(r5);
    m.scale(0.125)
}

fn x_state(diag: f64, corner: f64, mid: f64) -> ComplexMatrix {
    let mut m = diag_real(&[diag, mid, mid, diag]);
    m[(0, 3)] = re(corner);
    m[(3, 0)] = re(corner);
    m
}

fn build(id: &str, v: &BTreeMap<&str, f64>) -> Result<(ComplexMatrix, Vec<usize>)> {
    let two = vec![2, 2];
    let three = vec![3, 3];
    Ok(match id {
        "bell" => (projector(&bell_vector(v["which"] as usize)), two),
        "iso2" => {
            let f = v["f"];
            (identity(4).scale((1.0 - f) / 3.0) + projector(&bell_vector(0)).scale((4.0 * f - 1.0) / 3.0), two)
        }
        "iso3" => {
            let f = v["f"];
            (identity(9).scale((1.0 - f) / 8.0) + projector(&max_entangled(3)).scale((9.0 * f - 1.0) / 8.0), three)
        }
        "iso3_beta" => {
            let b = v["beta"];
            (projector(&max_entangled(3)).scale(b) + identity(9).scale((1.0 - b) / 9.0), three)
        }
        "horodecki_a" => (horodecki_a(v["a"]), three),
        "horodecki_alpha" => (horodecki_alpha(v["alpha"]), three),
        "upb_tiles" => (upb_state(), three),
        "upb_mixture" => {
            let g = v["gamma"];
            let psi = &upb_vectors()[(v["i"] as usize).clamp(1, 5) - 1];
            (projector(psi).scale(g) + upb_state().scale(1.0 - g), three)
        }
        "bes4x4" => {
            let q = v["q"];
            (bes4x4((1.0 - 2.0 * q) / 4.0, q), vec![4, 4])
        }
        "bes4x4_noisy" => {
            let l = v["lambda"];
            (bes4x4(P0, Q0).scale(l) + identity(16).scale((1.0 - l) / 16.0), vec![4, 4])
        }
        "kye" => (kye(v["r"], v["p"], v["z"]), vec![4, 4]),
        "npt3x3" => (npt3x3(v["a"]), three),
        "two_param_2xn" => {
            let n = v["n"] as usize;
            (two_param(n, v["alpha"], v["gamma"]), vec![2, n])
        }
        "rudolph_st" => (rudolph(v["s"], v["t"]), two),
        "rho_t" => (rudolph(0.5, v["t"]), two),
        "qutrit_mu" => (qutrit_mu(v["mu"]), three),
        "mixed_marginals" => (mixed_marginals([v["t1"], v["t2"], v["t3"]]), two),
        "eps3x3" => (eps3x3(v["eps"]), three),
        "bihalan_be" => (bihalan(), three),
        "acin_abc" => (acin(v["a"], v["b"], v["c"]), vec![2, 2, 2]),
        "mub3" => (mub3(v["p1"], v["p3"]), vec![2, 2, 2]),
        "rho12" => (x_state(13.0 / 30.0, 11.0 / 30.0, 1.0 / 15.0), two),
        "varrho12" => (x_state(11.0 / 30.0, 7.0 / 30.0, 2.0 / 15.0), two),
        other => return Err(EntError::Input(format!("unknown state family '{other}'"))),
    })
}

/// Random states for property tests.
pub mod random {
    use nalgebra::DMatrix;
    use rand::Rng;
    use rand_distr::StandardNormal;

    use super::DensityMatrix;
    use crate::matkit::{c, kron, projector, ComplexMatrix, DimSpec};

    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
        rng.sample(StandardNormal)
    }

    pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
        DMatrix::from_fn(rows, cols, |_, _| c(gaussian(rng), gaussian(rng)))
    }

    /// Haar-random unit column vector.
    pub fn haar_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
        let v = ginibre(d, 1, rng);
        let n = v.norm();
        v.unscale(n)
    }

    /// `GG†/Tr` with `G` of shape `n × rank`.
    pub fn density<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
        let g = ginibre(n, rank.max(1), rng);
        let m = &g * g.adjoint();
        let t = m.trace().re;
        m.scale(1.0 / t)
    }

    pub fn hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
        let g = ginibre(n, n, rng);
        (&g + g.adjoint()).scale(0.5)
    }

    pub fn state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> DensityMatrix {
        let n: usize = dims.iter().product();
        let rank = rng.random_range(1..=n);
        DensityMatrix::new_unchecked(density(n, rank, rng), DimSpec::new(dims.to_vec()).unwrap(), "random")
    }

    pub fn pure_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> DensityMatrix {
        let n: usize = dims.iter().product();
        DensityMatrix::new_unchecked(projector(&haar_pure(n, rng)), DimSpec::new(dims.to_vec()).unwrap(), "random-pure")
    }

    pub fn product_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> ComplexMatrix {
        let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
        for &d in dims {
            let local = if rng.random_bool(0.5) {
                projector(&haar_pure(d, rng))
            } else {
                density(d, rng.random_range(1..=d), rng)
            };
            m = kron(&m, &local);
        }
        m
    }

    /// Convex mixture of `terms` random product states.
    pub fn separable<R: Rng + ?Sized>(dims: &[usize], terms: usize, rng: &mut R) -> DensityMatrix {
        let n: usize = dims.iter().product();
        let mut m = DMatrix::zeros(n, n);
        let mut total = 0.0;
        for _ in 0..terms.max(1) {
            let w: f64 = -rng.random::<f64>().max(1e-300).ln();
            total += w;
            m += product_state(dims, rng).scale(w);
        }
        DensityMatrix::new_unchecked(m.scale(1.0 / total), DimSpec::new(dims.to_vec()).unwrap(), "random-separable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::{eig_hermitian, partial_transpose, realign};

    fn min_pt(rho: &DensityMatrix) -> f64 {
        eig_hermitian(&partial_transpose(&rho.matrix, &rho.dims, 1).unwrap()).unwrap().min()
    }

    #[test]
    fn catalog_defaults_are_valid() {
        for f in families() {
            let rho = make_state(f.id, &Params::new()).unwrap_or_else(|e| panic!("{}: {e}", f.id));
            assert!(validate(&rho).passed(), "{}", f.id);
            assert_eq!(rho.dims.order(), rho.order());
        }
    }

    #[test]
    fn bes4x4_ppt_point() {
        let rho = make_state("bes4x4", &Params::new()).unwrap();
        assert!(min_pt(&rho) >= -1e-9);
        for q in [0.0, 0.1, 0.25, 0.5] {
            let r = make_state("bes4x4", &Params::new().with("q", q)).unwrap();
            assert!((r.matrix.trace().re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn iso3_ninth_is_maximally_mixed() {
        let rho = make_state("iso3", &Params::new().with("f", 1.0 / 9.0)).unwrap();
        assert!((rho.matrix - identity(9).scale(1.0 / 9.0)).norm() < 1e-15);
    }

    #[test]
    fn horodecki_a_is_ppt() {
        for k in 1..10 {
            let rho = make_state("horodecki_a", &Params::new().with("a", k as f64 / 10.0)).unwrap();
            assert!(min_pt(&rho) >= -1e-9);
        }
    }

    #[test]
    fn iso2_pt_spectrum() {
        for f in [0.3, 0.4, 0.5, 0.8, 1.0] {
            let rho = make_state("iso2", &Params::new().with("f", f)).unwrap();
            assert!((min_pt(&rho) - (1.0 - 2.0 * f) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rho_t_matches_rudolph_slice() {
        let a = make_state("rho_t", &Params::new().with("t", 0.3)).unwrap();
        let b = make_state("rudolph_st", &Params::new().with("s", 0.5).with("t", 0.3)).unwrap();
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn realigned_trace_of_rho_t() {
        for t in [-0.5, 0.1, 0.6] {
            let rho = make_state("rho_t", &Params::new().with("t", t)).unwrap();
            let r = realign(&rho.matrix, &rho.dims).unwrap();
            assert!((r.trace().re - (t + 7.0 / 8.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn range_checks() {
        assert!(matches!(make_state("iso2", &Params::new().with("f", 1.5)), Err(EntError::Range(_))));
        assert!(make_state_with("iso2", &Params::new().with("f", 1.5), MakeOptions { unchecked: true }).is_ok());
        assert!(matches!(make_state("kye", &Params::new().with("p", 2.0)), Err(EntError::Range(_))));
        assert!(make_state_with("kye", &Params::new().with("p", 2.0), MakeOptions { unchecked: true }).is_ok());
        assert!(make_state("eps3x3", &Params::new().with("eps", 1.0)).is_err());
        assert!(make_state("rudolph_st", &Params::new().with("t", 0.0)).is_err());
        assert!(make_state("mub3", &Params::new().with("p1", 0.9).with("p3", 0.3)).is_err());
        assert!(make_state("nope", &Params::new()).is_err());
        assert!(make_state("iso2", &Params::new().with("g", 0.1)).is_err());
        let t = RHO_T_MAX;
        assert!(make_state("rho_t", &Params::new().with("t", -t)).is_ok());
        assert!(make_state("npt3x3", &Params::new().with("a", NPT3_LO)).is_ok());
        assert!(make_state("npt3x3", &Params::new().with("a", NPT3_HI)).is_ok());
    }

    #[test]
    fn constants() {
        assert!((NPT3_LO - (25.0 - 141f64.sqrt()) / 50.0).abs() < 1e-15);
        assert!((NPT3_HI - (25.0 + 141f64.sqrt()) / 100.0).abs() < 1e-15);
        assert!((RHO_T_MAX - 5f64.sqrt() / (2.0 * SQRT_2)).abs() < 1e-15);
        assert!((P0 - (1.0 - 2.0 * Q0) / 4.0).abs() < 1e-16);
    }

    #[test]
    fn validation_detects_trace_defect() {
        let ok = DensityMatrix::new_unchecked(identity(4).scale(0.25), DimSpec::bipartite(2, 2).unwrap(), "mm");
        assert!(validate(&ok).passed());
        let bad = DensityMatrix::new_unchecked(identity(4).scale(0.225), DimSpec::bipartite(2, 2).unwrap(), "short");
        let rep = validate(&bad);
        assert!(!rep.unit_trace && rep.hermitian && rep.psd);
    }

    #[test]
    fn param_parsing() {
        let p = Params::parse("q=q0, t=-0.5, mu=1/sqrt(2)").unwrap();
        assert_eq!(p.get("q"), Some(Q0));
        assert_eq!(p.get("t"), Some(-0.5));
        assert!((p.get("mu").unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(Params::parse("x").is_err());
    }
}
