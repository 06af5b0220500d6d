//! File formats: state JSON, dataset JSON, fit and calibration reports.
//!
//! State JSON: `{"n": int, "re": [[…]], "im": [[…]]}`, row-major.
//!
//! Dataset JSON:
//! `{"n": int, "m": int, "counts": [{"setting": "xzyx", "outcome": "+--+", "count": int}, …]}`.
//! Entries are written in enumeration order with zero cells omitted.
//! Readers reject duplicate `(setting, outcome)` keys and per-setting sums
//! different from `m`, and report the offending key path.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::calibration::PenaltyChoice;
use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::measurement::Dataset;
use crate::pauli::{Outcome, QubitCount, Setting};
use crate::rank::RankPenalizedFit;

#[derive(Serialize)]
struct StateJson {
    n: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// Serializes a 2ⁿ×2ⁿ Hermitian matrix.
pub fn state_to_json(h: &HermitianMatrix) -> Result<String> {
    let n = h.qubits()?;
    let d = h.dim();
    let row = |f: fn(Complex64) -> f64, i: usize| (0..d).map(|j| f(h.get(i, j))).collect();
    let doc = StateJson {
        n,
        re: (0..d).map(|i| row(|z| z.re, i)).collect(),
        im: (0..d).map(|i| row(|z| z.im, i)).collect(),
    };
    Ok(serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n")
}

pub fn state_from_json(text: &str) -> Result<HermitianMatrix> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("$: {e}")))?;
    let n = get_uint(&v, "n", "$")? as usize;
    let q = QubitCount::new(n).map_err(|e| Error::Parse(format!("$.n: {e}")))?;
    let d = q.dim();
    let re = get_matrix(&v, "re", d)?;
    let im = get_matrix(&v, "im", d)?;
    let m = DMatrix::from_fn(d, d, |i, j| Complex64::new(re[i][j], im[i][j]));
    HermitianMatrix::new(m)
}

pub fn write_state(path: &Path, h: &HermitianMatrix) -> Result<()> {
    fs::write(path, state_to_json(h)?)?;
    Ok(())
}

pub fn read_state(path: &Path) -> Result<HermitianMatrix> {
    state_from_json(&fs::read_to_string(path)?)
}

#[derive(Serialize)]
struct CountJson {
    setting: String,
    outcome: String,
    count: u64,
}

#[derive(Serialize)]
struct DatasetJson {
    n: usize,
    m: u64,
    counts: Vec<CountJson>,
}

pub fn dataset_to_json(d: &Dataset) -> String {
    let doc = DatasetJson {
        n: d.qubits().get(),
        m: d.repetitions(),
        counts: d
            .nonzero()
            .map(|(a, r, k)| CountJson {
                setting: a.to_string(),
                outcome: r.to_string(),
                count: k,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n"
}

pub fn dataset_from_json(text: &str) -> Result<Dataset> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("$: {e}")))?;
    let n = get_uint(&v, "n", "$")? as usize;
    let q = QubitCount::new(n).map_err(|e| Error::Parse(format!("$.n: {e}")))?;
    let m = get_uint(&v, "m", "$")?;
    if m == 0 {
        return Err(Error::Dataset("$.m: must be at least 1".into()));
    }
    let entries = v
        .get("counts")
        .ok_or_else(|| Error::Parse("$.counts: missing".into()))?
        .as_array()
        .ok_or_else(|| Error::Parse("$.counts: expected an array".into()))?;
    let mut parsed = Vec::with_capacity(entries.len());
    let mut seen = std::collections::HashSet::new();
    for (i, e) in entries.iter().enumerate() {
        let path = format!("$.counts[{i}]");
        let a: Setting = get_str(e, "setting", &path)?
            .parse()
            .map_err(|err| Error::Parse(format!("{path}.setting: {err}")))?;
        let r: Outcome = get_str(e, "outcome", &path)?
            .parse()
            .map_err(|err| Error::Parse(format!("{path}.outcome: {err}")))?;
        if a.len() != n {
            return Err(Error::Parse(format!(
                "{path}.setting: expected {n} qubits, got {}",
                a.len()
            )));
        }
        if r.len() != n {
            return Err(Error::Parse(format!(
                "{path}.outcome: expected {n} qubits, got {}",
                r.len()
            )));
        }
        let k = get_uint(e, "count", &path)?;
        if !seen.insert((a.index(), r.index())) {
            return Err(Error::Dataset(format!(
                "{path}: duplicate entry ({a}, {r})"
            )));
        }
        parsed.push((a, r, k));
    }
    Dataset::from_entries(q, m, parsed)
}

pub fn write_dataset(path: &Path, d: &Dataset) -> Result<()> {
    fs::write(path, dataset_to_json(d))?;
    Ok(())
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    dataset_from_json(&fs::read_to_string(path)?)
}

/// Summary of a rank-penalized fit.
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub nu: f64,
    pub k_hat: usize,
    pub singular_values: Vec<f64>,
    pub objective: Vec<f64>,
    pub threshold: f64,
    pub rank_floor_applied: bool,
    pub penalty: PenaltyChoice,
}

impl FitReport {
    pub fn new(fit: &RankPenalizedFit, penalty: PenaltyChoice) -> Self {
        Self {
            nu: fit.nu,
            k_hat: fit.k_hat,
            singular_values: fit.singular_values.clone(),
            objective: fit.objective.clone(),
            threshold: fit.nu.sqrt(),
            rank_floor_applied: fit.rank_floor_applied,
            penalty,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes") + "\n"
    }
}

/// `{"mode": …, "value": …, "details": […]}` plus mode parameters.
pub fn calibration_to_json(c: &PenaltyChoice) -> String {
    serde_json::to_string_pretty(c).expect("plain data serializes") + "\n"
}

fn get_field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Parse(format!("{path}.{key}: missing")))
}

fn get_uint(v: &Value, key: &str, path: &str) -> Result<u64> {
    get_field(v, key, path)?
        .as_u64()
        .ok_or_else(|| Error::Parse(format!("{path}.{key}: expected a non-negative integer")))
}

fn get_str<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a str> {
    get_field(v, key, path)?
        .as_str()
        .ok_or_else(|| Error::Parse(format!("{path}.{key}: expected a string")))
}

fn get_matrix(v: &Value, key: &str, d: usize) -> Result<Vec<Vec<f64>>> {
    let rows = get_field(v, key, "$")?
        .as_array()
        .ok_or_else(|| Error::Parse(format!("$.{key}: expected an array")))?;
    if rows.len() != d {
        return Err(Error::Parse(format!(
            "$.{key}: expected {d} rows, got {}",
            rows.len()
        )));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse(format!("$.{key}[{i}]: expected an array")))?;
            if row.len() != d {
                return Err(Error::Parse(format!(
                    "$.{key}[{i}]: expected {d} columns, got {}",
                    row.len()
                )));
            }
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    x.as_f64().ok_or_else(|| {
                        Error::Parse(format!("$.{key}[{i}][{j}]: expected a number"))
                    })
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::simulate_dataset;
    use crate::states::ghz;

    #[test]
    fn dataset_json_layout() {
        let n = QubitCount::new(1).unwrap();
        let d = Dataset::new(n, 2, vec![1, 1, 0, 2, 2, 0]).unwrap();
        let text = dataset_to_json(&d);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["n"], 1);
        assert_eq!(v["m"], 2);
        let counts = v["counts"].as_array().unwrap();
        assert_eq!(counts.len(), 4);
        assert_eq!(counts[0]["setting"], "x");
        assert_eq!(counts[0]["outcome"], "-");
        assert_eq!(counts[2]["setting"], "y");
        assert_eq!(counts[2]["outcome"], "+");
        assert_eq!(counts[3]["count"], 2);
        // key order is part of the format
        assert!(text.find("\"n\"").unwrap() < text.find("\"m\"").unwrap());
        assert!(text.find("\"m\"").unwrap() < text.find("\"counts\"").unwrap());
    }

    #[test]
    fn dataset_round_trip() {
        let rho = ghz(QubitCount::new(3).unwrap()).unwrap();
        let d = simulate_dataset(&rho, 40, 9).unwrap();
        let back = dataset_from_json(&dataset_to_json(&d)).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn dataset_errors_carry_paths() {
        let bad = r#"{"n": 1, "m": 1, "counts": [{"setting": "q", "outcome": "+", "count": 1}]}"#;
        let e = dataset_from_json(bad).unwrap_err().to_string();
        assert!(e.contains("$.counts[0].setting"), "{e}");

        let dup = r#"{"n": 1, "m": 1, "counts": [
            {"setting": "x", "outcome": "+", "count": 1},
            {"setting": "x", "outcome": "+", "count": 1}]}"#;
        let e = dataset_from_json(dup).unwrap_err();
        assert!(matches!(e, Error::Dataset(_)));
        assert!(e.to_string().contains("$.counts[1]"));

        let short = r#"{"n": 1, "m": 2, "counts": [{"setting": "x", "outcome": "+", "count": 2}]}"#;
        assert!(matches!(dataset_from_json(short), Err(Error::Dataset(_))));

        let missing = r#"{"n": 1, "counts": []}"#;
        assert!(dataset_from_json(missing)
            .unwrap_err()
            .to_string()
            .contains("$.m"));

        let neg = r#"{"n": 1, "m": 1, "counts": [{"setting": "x", "outcome": "+", "count": -1}]}"#;
        assert!(dataset_from_json(neg)
            .unwrap_err()
            .to_string()
            .contains("$.counts[0].count"));
    }

    #[test]
    fn state_round_trip() {
        let rho = ghz(QubitCount::new(2).unwrap()).unwrap();
        let back = state_from_json(&state_to_json(rho.matrix()).unwrap()).unwrap();
        assert_eq!(&back, rho.matrix());
        assert!(state_from_json(r#"{"n": 1, "re": [[1, 0]], "im": [[0, 0]]}"#).is_err());
    }
}
