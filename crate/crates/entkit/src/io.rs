//! JSON and CSV serialization of states, witnesses, verdicts and moments.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::criteria::CriterionVerdict;
use crate::error::{EntError, Result};
use crate::matkit::{c, ComplexMatrix, DimSpec};
use crate::moments::MomentVector;
use crate::statebank::DensityMatrix;
use crate::witness::WitnessOperator;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub label: String,
    pub dims: Vec<usize>,
    pub entries: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessMetadata {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub target_label: String,
    pub hermitian_residue: f64,
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub label: String,
    pub dims: Vec<usize>,
    pub entries: Vec<[f64; 2]>,
    pub metadata: WitnessMetadata,
}

fn entries(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push([z.re, z.im]);
        }
    }
    out
}

fn matrix_from(dims: &[usize], entries: &[[f64; 2]]) -> Result<(ComplexMatrix, DimSpec)> {
    let spec = DimSpec::new(dims.to_vec())?;
    let n = spec.order();
    if entries.len() != n * n {
        return Err(EntError::Input(format!("expected {} entries for dims {spec}, got {}", n * n, entries.len())));
    }
    Ok((ComplexMatrix::from_fn(n, n, |i, j| c(entries[i * n + j][0], entries[i * n + j][1])), spec))
}

pub fn state_to_json_value(rho: &DensityMatrix) -> StateJson {
    StateJson { label: rho.label.clone(), dims: rho.dims.dims().to_vec(), entries: entries(&rho.matrix) }
}

pub fn state_to_json(rho: &DensityMatrix) -> Result<String> {
    to_pretty(&state_to_json_value(rho))
}

pub fn state_from_json(s: &str) -> Result<DensityMatrix> {
    state_from_json_with(s, false)
}

/// Parses the state schema; `unchecked` skips physicality validation.
pub fn state_from_json_with(s: &str, unchecked: bool) -> Result<DensityMatrix> {
    let js: StateJson = serde_json::from_str(s).map_err(|e| EntError::Input(format!("state JSON: {e}")))?;
    let (m, dims) = matrix_from(&js.dims, &js.entries)?;
    if unchecked {
        Ok(DensityMatrix::new_unchecked(m, dims, js.label))
    } else {
        DensityMatrix::new(m, dims, js.label)
    }
}

pub fn witness_to_json(w: &WitnessOperator) -> Result<String> {
    let family = serde_json::to_value(w.family).map_err(|e| EntError::Input(e.to_string()))?;
    let js = WitnessJson {
        label: format!("{}[{}]", family.as_str().unwrap_or("witness"), w.target_label),
        dims: w.dims.dims().to_vec(),
        entries: entries(&w.matrix),
        metadata: WitnessMetadata {
            family: family.as_str().unwrap_or_default().to_string(),
            params: w.params.iter().cloned().collect(),
            target_label: w.target_label.clone(),
            hermitian_residue: w.hermitian_residue,
            notes: w.notes.clone(),
        },
    };
    to_pretty(&js)
}

/// Matrix and metadata of an exported witness.
pub fn witness_from_json(s: &str) -> Result<(ComplexMatrix, DimSpec, WitnessMetadata)> {
    let js: WitnessJson = serde_json::from_str(s).map_err(|e| EntError::Input(format!("witness JSON: {e}")))?;
    let (m, dims) = matrix_from(&js.dims, &js.entries)?;
    Ok((m, dims, js.metadata))
}

pub fn verdict_to_json(v: &CriterionVerdict) -> Result<String> {
    to_pretty(v)
}

pub fn verdicts_to_json(vs: &[CriterionVerdict]) -> Result<String> {
    to_pretty(&vs)
}

pub fn to_pretty<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| EntError::Input(format!("serialization: {e}")))
}

fn csv_string<F>(header: &[&str], fill: F) -> Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> std::result::Result<(), csv::Error>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    fill(&mut w).map_err(csv_err)?;
    let bytes = w.into_inner().map_err(|e| EntError::Input(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| EntError::Input(e.to_string()))
}

fn csv_err(e: csv::Error) -> EntError {
    EntError::Input(format!("csv: {e}"))
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x}")
    }
}

/// Rows of `kind,k,value`.
pub fn moments_to_csv(vs: &[MomentVector]) -> Result<String> {
    csv_string(&["kind", "k", "value"], |w| {
        for v in vs {
            for (i, x) in v.values.iter().enumerate() {
                w.write_record([v.kind.name().to_string(), (i + 1).to_string(), fmt_f64(*x)])?;
            }
        }
        Ok(())
    })
}

/// One row per verdict, prefixed by the state label.
pub fn verdicts_to_csv(label: &str, vs: &[CriterionVerdict]) -> Result<String> {
    csv_string(&["state", "criterion", "statistic", "threshold", "verdict", "notes"], |w| {
        for v in vs {
            w.write_record([
                label.to_string(),
                v.criterion.clone(),
                fmt_f64(v.statistic),
                fmt_f64(v.threshold),
                format!("{:?}", v.verdict),
                v.notes.clone(),
            ])?;
        }
        Ok(())
    })
}

/// Whitespace-separated `x y` columns with a header line.
pub fn plot_data(x_name: &str, y_name: &str, points: &[(f64, f64)]) -> String {
    let mut s = format!("# {x_name} {y_name}\n");
    for (x, y) in points {
        s.push_str(&format!("{} {}\n", fmt_f64(*x), fmt_f64(*y)));
    }
    s
}

pub fn write_or_print(path: Option<&std::path::Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| EntError::Input(format!("{}: {e}", p.display()))),
        None => {
            if content.ends_with('\n') {
                emit(content)
            } else {
                emit(&format!("{content}\n"))
            }
        }
    }
}

/// Writes to stdout; a closed pipe is not an error.
pub fn emit(content: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(content.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(EntError::Input(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{ccnr, DEFAULT_MARGIN};
    use crate::moments::{moments, MomentKind};
    use crate::statebank::{make_state, random, Params};
    use rand::SeedableRng;

    #[test]
    fn state_round_trip_is_bit_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for dims in [[2usize, 2], [3, 3], [2, 4]] {
            let rho = random::state(&dims, &mut rng);
            let back = state_from_json(&state_to_json(&rho).unwrap()).unwrap();
            for (a, b) in rho.matrix.iter().zip(back.matrix.iter()) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
            assert_eq!(back.dims, rho.dims);
        }
    }

    #[test]
    fn state_json_rejects_bad_input() {
        assert!(state_from_json("{\"label\":\"x\",\"dims\":[2,2],\"entries\":[[1,0]]}").is_err());
        let bad = "{\"label\":\"x\",\"dims\":[2],\"entries\":[[2,0],[0,0],[0,0],[0,0]]}";
        assert!(state_from_json(bad).is_err());
        assert!(state_from_json_with(bad, true).is_ok());
    }

    #[test]
    fn verdict_json_fields() {
        let rho = make_state("bes4x4", &Params::new()).unwrap();
        let s = verdict_to_json(&ccnr(&rho, DEFAULT_MARGIN).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        for key in ["criterion", "statistic", "threshold", "verdict", "notes"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["verdict"], "Entangled");
    }

    #[test]
    fn moments_csv_layout() {
        let rho = make_state("iso2", &Params::new().with("f", 0.7)).unwrap();
        let csv = moments_to_csv(&[moments(&rho, MomentKind::Pt, 3).unwrap()]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "kind,k,value");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("pt,1,"));
    }

    #[test]
    fn csv_quotes_fields() {
        let v = CriterionVerdict {
            criterion: "x".into(),
            statistic: 1.0,
            threshold: 0.0,
            verdict: crate::criteria::Verdict::Entangled,
            notes: "a, \"b\"".into(),
        };
        let s = verdicts_to_csv("s(a=1,b=2)", &[v]).unwrap();
        assert!(s.contains("\"s(a=1,b=2)\""));
        assert!(s.contains("\"a, \"\"b\"\"\""));
    }
}
