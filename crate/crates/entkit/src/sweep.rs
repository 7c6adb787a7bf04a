//! Parameter sweeps over catalog families and sign-change boundary search.

use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{evaluate, CriteriaConfig, CriterionVerdict, Verdict, CRITERIA};
use crate::error::{EntError, Result};
use crate::io::fmt_f64;
use crate::statebank::{family, make_state_with, parse_value, DensityMatrix, MakeOptions, Params};
use crate::witness::{build_witness, witness_expectation, WitnessFamily};

pub const BISECT_TOL: f64 = 1e-6;
pub const BISECT_MAX_ITER: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// `steps` equal intervals from `start` to `stop`, both ends included.
    Range { start: f64, stop: f64, steps: usize },
    List(Vec<f64>),
}

impl Grid {
    /// `start:stop:steps` or a comma-separated list.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(EntError::Input(format!("grid '{s}' is not start:stop:steps")));
            }
            let start = parse_value(parts[0])?;
            let stop = parse_value(parts[1])?;
            let steps: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| EntError::Input(format!("grid steps '{}' is not a count", parts[2])))?;
            if steps == 0 {
                return Err(EntError::Input("grid steps must be at least 1".into()));
            }
            Ok(Grid::Range { start, stop, steps })
        } else {
            let v = s.split(',').filter(|t| !t.trim().is_empty()).map(parse_value).collect::<Result<Vec<_>>>()?;
            if v.is_empty() {
                return Err(EntError::Input("empty grid".into()));
            }
            Ok(Grid::List(v))
        }
    }

    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::Range { start, stop, steps } => {
                (0..=*steps).map(|i| start + (stop - start) * i as f64 / *steps as f64).collect()
            }
            Grid::List(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Probe {
    Criterion(String),
    /// Witness built on each swept state and evaluated on it.
    Witness { family: WitnessFamily, n: u32, alpha: f64, beta: f64 },
}

impl Probe {
    /// A criterion id, or `det`, `wo`, `wn:N`, `choi` / `choi:ALPHA:BETA`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        match head {
            "det" | "wo" if rest.is_empty() => Ok(Probe::Witness { family: WitnessFamily::parse(head)?, n: 1, alpha: 1.0, beta: 1.0 }),
            "wn" => {
                let n = match rest.as_slice() {
                    [] => 1,
                    [n] => n.parse().map_err(|_| EntError::Input(format!("bad witness order in '{s}'")))?,
                    _ => return Err(EntError::Input(format!("bad probe '{s}'"))),
                };
                Ok(Probe::Witness { family: WitnessFamily::Wn, n, alpha: 1.0, beta: 1.0 })
            }
            "choi" => {
                let (alpha, beta) = match rest.as_slice() {
                    [] => (1.0, 1.0),
                    [a, b] => (parse_value(a)?, parse_value(b)?),
                    _ => return Err(EntError::Input(format!("bad probe '{s}'"))),
                };
                Ok(Probe::Witness { family: WitnessFamily::Choi, n: 1, alpha, beta })
            }
            id if rest.is_empty() && CRITERIA.contains(&id) => Ok(Probe::Criterion(id.to_string())),
            _ => Err(EntError::Input(format!("unknown probe '{s}'"))),
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        if s.trim() == "all" {
            return Ok(CRITERIA.iter().map(|c| Probe::Criterion(c.to_string())).collect());
        }
        let v = s.split(',').filter(|t| !t.trim().is_empty()).map(Probe::parse).collect::<Result<Vec<_>>>()?;
        if v.is_empty() {
            return Err(EntError::Input("empty probe list".into()));
        }
        Ok(v)
    }

    pub fn id(&self) -> String {
        match self {
            Probe::Criterion(c) => c.clone(),
            Probe::Witness { family: WitnessFamily::Wn, n, .. } => format!("wn:{n}"),
            Probe::Witness { family: WitnessFamily::Choi, alpha, beta, .. } => format!("choi:{alpha}:{beta}"),
            Probe::Witness { family: WitnessFamily::Det, .. } => "det".into(),
            Probe::Witness { family: WitnessFamily::Wo, .. } => "wo".into(),
        }
    }

    pub fn evaluate(&self, rho: &DensityMatrix, cfg: &CriteriaConfig) -> CriterionVerdict {
        match self {
            Probe::Criterion(id) => evaluate(id, rho, cfg),
            Probe::Witness { family, n, alpha, beta } => {
                let r = build_witness(*family, rho, *alpha, *beta, *n).and_then(|w| witness_expectation(&w, rho));
                let (statistic, verdict, notes) = match r {
                    Ok(v) if v < -cfg.margin => (v, Verdict::Entangled, String::new()),
                    Ok(v) => (v, Verdict::Inconclusive, String::new()),
                    Err(EntError::Dim(m)) => (f64::NAN, Verdict::NotApplicable, m),
                    Err(e) => (f64::NAN, Verdict::Error, e.to_string()),
                };
                CriterionVerdict { criterion: self.id(), statistic, threshold: 0.0, verdict, notes }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: String,
    /// One axis gives a line sweep with boundaries; more give a product grid.
    pub axes: Vec<(String, Grid)>,
    pub base: Params,
    pub probes: Vec<Probe>,
    pub config: CriteriaConfig,
    pub unchecked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub point: Vec<f64>,
    pub verdicts: Vec<CriterionVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Boundary {
    pub probe: String,
    /// `onset` when detection starts as the parameter increases, `offset` when it stops.
    pub kind: &'static str,
    pub lower: f64,
    pub upper: f64,
    pub location: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub family: String,
    pub axes: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub skipped: usize,
    pub boundaries: Vec<Boundary>,
}

fn point_params(base: &Params, axes: &[(String, Grid)], point: &[f64]) -> Params {
    let mut p = base.clone();
    for ((name, _), v) in axes.iter().zip(point) {
        p.set(name, *v);
    }
    p
}

fn product(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for ax in axes {
        out = out.into_iter().flat_map(|pre| ax.iter().map(move |&x| [pre.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Bisection of a flag that differs at `lo` and `hi`; returns the final bracket.
pub fn bisect<F: Fn(f64) -> bool>(f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> (f64, f64) {
    let flo = f(lo);
    for _ in 0..max_iter {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) == flo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Zero of a continuous `f` on `[lo, hi]` given opposite signs at the ends.
pub fn bisect_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(EntError::Numerical(format!("no sign change on [{lo}, {hi}]")));
    }
    let (a, b) = bisect(|x| f(x) > 0.0, lo, hi, tol, max_iter);
    Ok(0.5 * (a + b))
}

/// Sign changes of `flag` between consecutive grid points, refined by bisection.
pub fn flag_boundaries<F>(probe: &str, grid: &[f64], flags: &[bool], flag: F, tol: f64) -> Vec<Boundary>
where
    F: Fn(f64) -> bool + Sync,
{
    let pairs: Vec<usize> = (1..grid.len()).filter(|&i| flags[i] != flags[i - 1]).collect();
    pairs
        .par_iter()
        .map(|&i| {
            let (a, b) = bisect(&flag, grid[i - 1], grid[i], tol, BISECT_MAX_ITER);
            Boundary {
                probe: probe.to_string(),
                kind: if flags[i] { "onset" } else { "offset" },
                lower: a.min(b),
                upper: a.max(b),
                location: 0.5 * (a + b),
            }
        })
        .collect()
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let fam = family(&spec.family)?;
    if spec.axes.is_empty() {
        return Err(EntError::Input("sweep needs at least one grid axis".into()));
    }
    for (name, _) in &spec.axes {
        if !fam.params.iter().any(|p| p.name == name) {
            return Err(EntError::Input(format!("family '{}' has no parameter '{name}'", fam.id)));
        }
    }
    let opts = MakeOptions { unchecked: spec.unchecked };
    let axes_pts: Vec<Vec<f64>> = spec.axes.iter().map(|(_, g)| g.points()).collect();
    let points = product(&axes_pts);
    let line = spec.axes.len() == 1;

    let built: Vec<Option<DensityMatrix>> = points
        .par_iter()
        .map(|pt| match make_state_with(&spec.family, &point_params(&spec.base, &spec.axes, pt), opts) {
            Ok(s) => Ok(Some(s)),
            Err(EntError::Range(_)) if !line => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    let skipped = built.iter().filter(|s| s.is_none()).count();

    let rows: Vec<SweepRow> = points
        .par_iter()
        .zip(built.par_iter())
        .filter_map(|(pt, st)| st.as_ref().map(|s| (pt, s)))
        .map(|(pt, s)| SweepRow { point: pt.clone(), verdicts: spec.probes.iter().map(|p| p.evaluate(s, &spec.config)).collect() })
        .collect();

    let mut boundaries = Vec::new();
    if line {
        let grid: Vec<f64> = rows.iter().map(|r| r.point[0]).collect();
        for (k, probe) in spec.probes.iter().enumerate() {
            let flags: Vec<bool> = rows.iter().map(|r| r.verdicts[k].is_entangled()).collect();
            let flag = |x: f64| {
                make_state_with(&spec.family, &point_params(&spec.base, &spec.axes, &[x]), opts)
                    .map(|s| probe.evaluate(&s, &spec.config).is_entangled())
                    .unwrap_or(false)
            };
            boundaries.extend(flag_boundaries(&probe.id(), &grid, &flags, flag, BISECT_TOL));
        }
    }
    Ok(SweepResult {
        family: spec.family.clone(),
        axes: spec.axes.iter().map(|(n, _)| n.clone()).collect(),
        rows,
        skipped,
        boundaries,
    })
}

impl SweepResult {
    /// One row per grid point: axis values, then statistic and verdict per probe.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = self.axes.clone();
        if let Some(r) = self.rows.first() {
            for v in &r.verdicts {
                header.push(format!("{}_statistic", v.criterion));
                header.push(format!("{}_verdict", v.criterion));
            }
        }
        w.write_record(&header).map_err(csv_err)?;
        for r in &self.rows {
            let mut rec: Vec<String> = r.point.iter().map(|x| fmt_f64(*x)).collect();
            for v in &r.verdicts {
                rec.push(fmt_f64(v.statistic));
                rec.push(format!("{:?}", v.verdict));
            }
            w.write_record(&rec).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| EntError::Input(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| EntError::Input(e.to_string()))
    }

    pub fn boundaries_to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["probe", "kind", "lower", "upper", "location"]).map_err(csv_err)?;
        for b in &self.boundaries {
            w.write_record([b.probe.clone(), b.kind.to_string(), fmt_f64(b.lower), fmt_f64(b.upper), fmt_f64(b.location)])
                .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| EntError::Input(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| EntError::Input(e.to_string()))
    }

    /// Axis values followed by one statistic column per probe.
    pub fn plot_data(&self) -> String {
        let mut s = String::from("#");
        for a in &self.axes {
            s.push(' ');
            s.push_str(a);
        }
        if let Some(r) = self.rows.first() {
            for v in &r.verdicts {
                s.push(' ');
                s.push_str(&v.criterion);
            }
        }
        s.push('\n');
        for r in &self.rows {
            let cols: Vec<String> =
                r.point.iter().map(|x| fmt_f64(*x)).chain(r.verdicts.iter().map(|v| fmt_f64(v.statistic))).collect();
            s.push_str(&cols.join(" "));
            s.push('\n');
        }
        s
    }
}

fn csv_err(e: csv::Error) -> EntError {
    EntError::Input(format!("csv: {e}"))
}
