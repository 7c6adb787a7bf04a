//! Regeneration of the reference tables and comparison against embedded fixtures.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{ccnr, ct_best, de_vicente, default_ct_grid, spa_r_statistic, DEFAULT_MARGIN};
use crate::error::{EntError, Result};
use crate::statebank::{make_state, DensityMatrix, Params};
use crate::sweep::{bisect, BISECT_MAX_ITER};
use crate::witness::{choi_witness, concurrence_bounds, wn_witness_with, witness_expectation, Marginal};

pub const TABLE_IDS: &[&str] =
    &["rtable", "tab-4by4", "table_iso", "table3.1", "alphatable", "atable", "Bennet_table", "4by4_table"];

const FIXTURES: &str = include_str!("../fixtures/tables.json");
const EDGE_TOL: f64 = 1e-8;
const SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct FixtureEntry {
    pub row: String,
    pub column: String,
    pub value: Option<f64>,
    pub anchor: String,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct FixtureTable {
    pub tolerance: f64,
    pub note: String,
    pub entries: Vec<FixtureEntry>,
}

pub fn fixtures() -> Result<BTreeMap<String, FixtureTable>> {
    serde_json::from_str(FIXTURES).map_err(|e| EntError::Input(format!("embedded fixtures: {e}")))
}

pub fn fixture(id: &str) -> Result<FixtureTable> {
    fixtures()?.remove(id).ok_or_else(|| EntError::Input(format!("unknown table id '{id}'")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub key: String,
    pub params: Vec<(String, f64)>,
    pub values: Vec<Option<f64>>,
    pub verdicts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableArtifact {
    pub id: String,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
}

impl TableArtifact {
    pub fn value(&self, row: &str, column: &str) -> Option<Option<f64>> {
        let c = self.columns.iter().position(|x| x == column)?;
        self.rows.iter().find(|r| r.key == row).map(|r| r.values[c])
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["row".to_string()];
        header.extend(self.columns.iter().cloned());
        header.push("verdict".into());
        w.write_record(&header).map_err(|e| EntError::Input(e.to_string()))?;
        for r in &self.rows {
            let mut rec = vec![r.key.clone()];
            rec.extend(r.values.iter().map(|v| v.map(crate::io::fmt_f64).unwrap_or_else(|| "none".into())));
            rec.push(r.verdicts.join("; "));
            w.write_record(&rec).map_err(|e| EntError::Input(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| EntError::Input(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| EntError::Input(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffEntry {
    pub anchor: String,
    pub row: String,
    pub column: String,
    pub expected: Option<f64>,
    pub computed: Option<f64>,
    pub tolerance: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableDiff {
    pub id: String,
    pub entries: Vec<DiffEntry>,
}

impl TableDiff {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }

    pub fn mismatches(&self) -> Vec<&DiffEntry> {
        self.entries.iter().filter(|e| !e.ok).collect()
    }
}

pub fn diff(art: &TableArtifact, fix: &FixtureTable) -> TableDiff {
    let entries = fix
        .entries
        .iter()
        .map(|f| {
            let tol = f.tolerance.unwrap_or(fix.tolerance);
            let computed = art.value(&f.row, &f.column).flatten();
            let ok = match (f.value, computed) {
                (None, None) => art.value(&f.row, &f.column).is_some(),
                (Some(a), Some(b)) => (a - b).abs() <= tol,
                _ => false,
            };
            DiffEntry {
                anchor: f.anchor.clone(),
                row: f.row.clone(),
                column: f.column.clone(),
                expected: f.value,
                computed,
                tolerance: tol,
                ok,
            }
        })
        .collect();
    TableDiff { id: art.id.clone(), entries }
}

/// Regenerates a table and diffs it against its fixture.
pub fn check(id: &str) -> Result<(TableArtifact, TableDiff)> {
    let art = generate(id)?;
    let d = diff(&art, &fixture(id)?);
    Ok((art, d))
}

/// Maximal detected intervals of `f` on `[lo, hi]`, edges refined by bisection.
pub fn detection_intervals<F>(f: F, lo: f64, hi: f64, samples: usize) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> bool + Sync,
{
    let xs: Vec<f64> = (0..=samples).map(|i| lo + (hi - lo) * i as f64 / samples as f64).collect();
    let flags: Vec<bool> = xs.par_iter().map(|&x| f(x)).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        if !flags[i] {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < xs.len() && flags[j + 1] {
            j += 1;
        }
        let a = if i == 0 {
            lo
        } else {
            let (p, q) = bisect(&f, xs[i - 1], xs[i], EDGE_TOL, BISECT_MAX_ITER);
            0.5 * (p + q)
        };
        let b = if j == xs.len() - 1 {
            hi
        } else {
            let (p, q) = bisect(&f, xs[j], xs[j + 1], EDGE_TOL, BISECT_MAX_ITER);
            0.5 * (p + q)
        };
        out.push((a, b));
        i = j + 1;
    }
    out
}

fn state(id: &str, name: &str, v: f64) -> Option<DensityMatrix> {
    make_state(id, &Params::new().with(name, v)).ok()
}

fn detects<F>(id: &'static str, name: &'static str, test: F) -> impl Fn(f64) -> bool + Sync
where
    F: Fn(&DensityMatrix) -> bool + Sync,
{
    move |x| state(id, name, x).map(|s| test(&s)).unwrap_or(false)
}

fn range_row(key: &str, iv: &[(f64, f64)]) -> TableRow {
    let (lower, upper) = match iv {
        [] => (None, None),
        _ => (Some(iv[0].0), Some(iv[iv.len() - 1].1)),
    };
    let verdict = match iv.len() {
        0 => "not detected".to_string(),
        1 => "detected".to_string(),
        k => format!("detected on {k} intervals"),
    };
    TableRow { key: key.into(), params: vec![], values: vec![lower, upper], verdicts: vec![verdict] }
}

fn entangled(r: Result<crate::criteria::CriterionVerdict>) -> bool {
    r.map(|v| v.is_entangled()).unwrap_or(false)
}

fn choi_detects(s: &DensityMatrix) -> bool {
    choi_witness(1.0, 1.0, s).and_then(|w| witness_expectation(&w, s)).map(|v| v < -DEFAULT_MARGIN).unwrap_or(false)
}

fn wn_detects(n: u32, marginal: Marginal) -> impl Fn(&DensityMatrix) -> bool + Sync {
    move |s| wn_witness_with(n, s, marginal).and_then(|w| witness_expectation(&w, s)).map(|v| v < -DEFAULT_MARGIN).unwrap_or(false)
}

fn comparison_table(id: &str, family: &'static str, name: &'static str, lo: f64, hi: f64) -> TableArtifact {
    let grid = default_ct_grid();
    let rows = vec![
        range_row("dv", &detection_intervals(detects(family, name, |s| entangled(de_vicente(s, DEFAULT_MARGIN))), lo, hi, SAMPLES)),
        range_row("ccnr", &detection_intervals(detects(family, name, |s| entangled(ccnr(s, DEFAULT_MARGIN))), lo, hi, SAMPLES)),
        range_row("ct", &detection_intervals(detects(family, name, |s| entangled(ct_best(s, &grid, DEFAULT_MARGIN))), lo, hi, SAMPLES)),
        range_row("witness", &detection_intervals(detects(family, name, choi_detects), lo, hi, SAMPLES)),
    ];
    TableArtifact { id: id.into(), columns: vec!["lower".into(), "upper".into()], rows }
}

fn wn_range_table(id: &str, family: &'static str, name: &'static str, lo: f64, hi: f64, ns: &[u32], marginal: Marginal) -> TableArtifact {
    let rows = ns
        .iter()
        .map(|&n| {
            let mut r = range_row(&format!("n={n}"), &detection_intervals(detects(family, name, wn_detects(n, marginal)), lo, hi, SAMPLES));
            r.params = vec![("n".into(), n as f64)];
            r
        })
        .collect();
    TableArtifact { id: id.into(), columns: vec!["lower".into(), "upper".into()], rows }
}

fn bounds_table(id: &str, rho: &DensityMatrix) -> Result<TableArtifact> {
    let ns = [1, 2, 3, 4, 5];
    let b = concurrence_bounds(rho, &ns)?;
    let rows = b
        .phi_wn
        .iter()
        .map(|&(n, phi)| TableRow {
            key: format!("n={n}"),
            params: vec![("n".into(), n as f64)],
            values: vec![Some(phi), Some(b.c_min)],
            verdicts: vec![if phi > b.c_min { "phi above c_min" } else { "phi below c_min" }.into()],
        })
        .collect();
    Ok(TableArtifact { id: id.into(), columns: vec!["phi".into(), "c_min".into()], rows })
}

fn spa_table(id: &str) -> Result<TableArtifact> {
    let rows = (1..=9)
        .map(|i| {
            let a = i as f64 / 10.0;
            let rho = make_state("horodecki_a", &Params::new().with("a", a))?;
            let iv = detection_intervals(|p| spa_r_statistic(&rho, p).map(|s| s > DEFAULT_MARGIN).unwrap_or(false), 0.0, 0.5, SAMPLES);
            let upper = iv.first().filter(|(lo, _)| *lo == 0.0).map(|(_, hi)| *hi);
            Ok(TableRow {
                key: format!("a={a}"),
                params: vec![("a".into(), a)],
                values: vec![upper],
                verdicts: vec![if upper.is_some() { "violated" } else { "not violated" }.into()],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TableArtifact { id: id.into(), columns: vec!["p_upper".into()], rows })
}

pub fn generate(id: &str) -> Result<TableArtifact> {
    match id {
        "rtable" => Ok(comparison_table(id, "kye", "r", 1e-9, 1.0 - 1e-9)),
        "tab-4by4" => Ok(comparison_table(id, "bes4x4_noisy", "lambda", 0.0, 1.0)),
        "table_iso" => Ok(wn_range_table(id, "iso3", "f", 0.0, 1.0, &[1, 2, 3, 4, 5], Marginal::KeepB)),
        "table3.1" => spa_table(id),
        "alphatable" => Ok(wn_range_table(id, "horodecki_alpha", "alpha", 3.0, 4.0, &[1, 2, 3, 4, 5], Marginal::KeepB)),
        "atable" => Ok(wn_range_table(id, "horodecki_a", "a", 1e-9, 1.0, &[1, 2, 3, 4, 5, 6, 7, 8], Marginal::KeepA)),
        "Bennet_table" => bounds_table(id, &make_state("upb_tiles", &Params::new())?),
        "4by4_table" => bounds_table(id, &make_state("bes4x4", &Params::new())?),
        other => Err(EntError::Input(format!("unknown table id '{other}'"))),
    }
}
