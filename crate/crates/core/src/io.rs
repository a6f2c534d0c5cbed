//! State files and Pauli-expectation tables.
//!
//! A state file is JSON with `dims` and `matrix`, the latter as rows of
//! `[re, im]` pairs. [`save_state`] writes a canonical layout so that loading
//! and saving again reproduces the file byte for byte.
//!
//! A Pauli table is CSV with header `label,value`, one row per measured
//! Pauli string such as `XZ`. Labels that are not listed are absent, not
//! zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::bloch::{reconstruct_state, BlochDecomposition};
use crate::complex::ComplexMatrix;
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::tensor::RealTensor;

/// Slack allowed beyond `[-1, 1]` for measured expectations.
pub const EXPECTATION_SLACK: f64 = 1e-9;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dims: Vec<usize>,
    matrix: Vec<Vec<[f64; 2]>>,
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let side = file.matrix.len();
    if file.matrix.iter().any(|row| row.len() != side) {
        return Err(Error::Parse("matrix rows must all have as many entries as there are rows".into()));
    }
    let data = file.matrix.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
    let m = ComplexMatrix::new(side, side, data)?;
    DensityMatrix::new(file.dims, m)
}

pub fn load_state(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    parse_state(&std::fs::read_to_string(path)?)
}

fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("finite")
}

/// Canonical JSON: one matrix row per line.
pub fn format_state(rho: &DensityMatrix) -> String {
    let m = rho.matrix();
    let dims: Vec<String> = rho.party_dims().iter().map(usize::to_string).collect();
    let mut out = format!("{{\n  \"dims\": [{}],\n  \"matrix\": [\n", dims.join(", "));
    for r in 0..m.rows() {
        let entries: Vec<String> = (0..m.cols())
            .map(|c| {
                let z = m.get(r, c);
                format!("[{}, {}]", num(z.re), num(z.im))
            })
            .collect();
        let sep = if r + 1 < m.rows() { "," } else { "" };
        let _ = writeln!(out, "    [{}]{sep}", entries.join(", "));
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn save_state(rho: &DensityMatrix, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_state(rho))?;
    Ok(())
}

/// Pauli expectations keyed by upper-case labels over `{I, X, Y, Z}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTable {
    n: usize,
    entries: BTreeMap<String, f64>,
}

impl PauliTable {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::InvalidArgument(format!("{n} qubits not supported")));
        }
        Ok(Self { n, entries: BTreeMap::new() })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &BTreeMap<String, f64> {
        &self.entries
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.entries.get(&label.to_ascii_uppercase()).copied()
    }

    /// Adds one expectation, checking the label and the value range.
    pub fn insert(&mut self, label: &str, value: f64) -> Result<()> {
        let label = label.trim().to_ascii_uppercase();
        if label.len() != self.n || !label.chars().all(|c| "IXYZ".contains(c)) {
            return Err(Error::Parse(format!("label {label:?} is not a {}-letter string over IXYZ", self.n)));
        }
        if !value.is_finite() || value.abs() > 1.0 + EXPECTATION_SLACK {
            return Err(Error::ExpectationOutOfRange { label, value });
        }
        if label.bytes().all(|b| b == b'I') && (value - 1.0).abs() > EXPECTATION_SLACK {
            return Err(Error::ExpectationOutOfRange { label, value });
        }
        if self.entries.insert(label.clone(), value).is_some() {
            return Err(Error::Parse(format!("label {label} listed twice")));
        }
        Ok(())
    }

    /// Reads `label,value` CSV. The qubit count is taken from the first label.
    pub fn from_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?;
        let names: Vec<String> = headers.iter().map(str::to_ascii_lowercase).collect();
        if names != ["label", "value"] {
            return Err(Error::Parse(format!("expected header label,value, got {}", names.join(","))));
        }
        let mut table: Option<Self> = None;
        for record in rdr.records() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            let label = &record[0];
            let value: f64 = record[1]
                .parse()
                .map_err(|_| Error::Parse(format!("value {:?} for {label} is not a number", &record[1])))?;
            if table.is_none() {
                table = Some(Self::new(label.len())?);
            }
            table.as_mut().expect("just set").insert(label, value)?;
        }
        table.ok_or_else(|| Error::Parse("Pauli table has no rows".into()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv(std::fs::File::open(path)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,value\n");
        for (l, v) in &self.entries {
            let _ = writeln!(out, "{l},{}", num(*v));
        }
        out
    }
}

const PAULI_LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];

/// Label of a flat index into the `[4; n]` expectation tensor.
fn label_of(mut idx: usize, n: usize) -> String {
    let mut chars = vec!['I'; n];
    for c in chars.iter_mut().rev() {
        *c = PAULI_LETTERS[idx % 4];
        idx /= 4;
    }
    chars.into_iter().collect()
}

/// Decomposition plus any warnings raised while admitting the data.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub decomposition: BlochDecomposition,
    pub warnings: Vec<String>,
}

/// Builds the Bloch data from a complete table. With `strict`, the
/// linear-inversion state must be positive semidefinite; otherwise a
/// non-physical state only produces a warning.
pub fn ingest_pauli_table(table: &PauliTable, strict: bool) -> Result<Ingested> {
    let n = table.n;
    let total = 1usize << (2 * n);
    let missing: Vec<String> = (1..total).map(|i| label_of(i, n)).filter(|l| !table.entries.contains_key(l)).collect();
    if !missing.is_empty() {
        return Err(Error::MissingLabels(missing));
    }
    let data: Vec<f64> = (0..total)
        .map(|i| if i == 0 { 1.0 } else { table.entries[&label_of(i, n)] })
        .collect();
    let decomposition = BlochDecomposition::from_expectation_tensor(&RealTensor::new(vec![4; n], data)?)?;
    let mut warnings = Vec::new();
    if let Err(failure) = reconstruct_state(&decomposition)?.validate() {
        if strict {
            return Err(Error::Validation(failure));
        }
        warnings.push(format!("expectations do not describe a physical state: {failure}"));
    }
    Ok(Ingested { decomposition, warnings })
}

/// Every label of the decomposition, including the all-identity one.
pub fn decomposition_to_table(dec: &BlochDecomposition) -> PauliTable {
    let n = dec.num_qubits();
    let full = dec.expectation_tensor();
    let entries = full.data().iter().enumerate().map(|(i, &v)| (label_of(i, n), v)).collect();
    PauliTable { n, entries }
}
