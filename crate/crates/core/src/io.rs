//! JSON file formats for POVMs, measuring processes, states and overall
//! observables. Matrices are row-major nested arrays of `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instruments::MeasuringProcess;
use crate::linalg::{ComplexMatrix, HermitianOperator};
use crate::quantum::{DensityMatrix, Povm};
use crate::successive::OverallObservable;

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PovmFile {
    pub dim: usize,
    pub elements: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessFile {
    pub dim_sys: usize,
    pub dim_probe: usize,
    pub probe_state: Vec<[f64; 2]>,
    pub unitary: MatrixJson,
    pub probe_pvm: PovmFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub matrix: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverallFile {
    #[serde(flatten)]
    pub povm: PovmFile,
    pub n_first: usize,
    pub n_second: usize,
}

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    m.rows()
        .iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson, dim: usize) -> Result<ComplexMatrix> {
    if rows.len() != dim {
        return Err(Error::Shape(format!("expected {dim} rows, found {}", rows.len())));
    }
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

fn vector_from_json(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

impl PovmFile {
    pub fn from_povm(povm: &Povm) -> Self {
        PovmFile {
            dim: povm.dim(),
            elements: povm
                .elements()
                .iter()
                .map(|e| matrix_to_json(e.matrix()))
                .collect(),
            labels: Some(povm.labels().to_vec()),
        }
    }

    pub fn to_povm(&self) -> Result<Povm> {
        let elements = self
            .elements
            .iter()
            .map(|m| HermitianOperator::new(matrix_from_json(m, self.dim)?))
            .collect::<Result<Vec<_>>>()?;
        match &self.labels {
            Some(labels) => Povm::with_labels(elements, labels.clone()),
            None => Povm::new(elements),
        }
    }
}

impl ProcessFile {
    pub fn from_process(mp: &MeasuringProcess) -> Self {
        ProcessFile {
            dim_sys: mp.dim_sys(),
            dim_probe: mp.dim_probe(),
            probe_state: mp.probe_state().iter().map(|z| [z.re, z.im]).collect(),
            unitary: matrix_to_json(mp.unitary()),
            probe_pvm: PovmFile::from_povm(mp.probe_pvm()),
        }
    }

    pub fn to_process(&self) -> Result<MeasuringProcess> {
        let unitary = matrix_from_json(&self.unitary, self.dim_sys * self.dim_probe)?;
        MeasuringProcess::new(
            self.dim_sys,
            self.dim_probe,
            vector_from_json(&self.probe_state),
            unitary,
            self.probe_pvm.to_povm()?,
        )
    }
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        StateFile {
            dim: rho.dim(),
            matrix: matrix_to_json(rho.matrix()),
        }
    }

    pub fn to_state(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(HermitianOperator::new(matrix_from_json(&self.matrix, self.dim)?)?)
    }
}

impl OverallFile {
    pub fn from_overall(c: &OverallObservable) -> Self {
        OverallFile {
            povm: PovmFile::from_povm(c.povm()),
            n_first: c.n_first(),
            n_second: c.n_second(),
        }
    }

    pub fn to_overall(&self) -> Result<OverallObservable> {
        OverallObservable::from_povm(self.povm.to_povm()?, self.n_first, self.n_second)
    }
}

pub fn parse_povm(text: &str) -> Result<Povm> {
    serde_json::from_str::<PovmFile>(text)?.to_povm()
}

pub fn parse_process(text: &str) -> Result<MeasuringProcess> {
    serde_json::from_str::<ProcessFile>(text)?.to_process()
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    serde_json::from_str::<StateFile>(text)?.to_state()
}

pub fn povm_to_json(povm: &Povm) -> String {
    serde_json::to_string_pretty(&PovmFile::from_povm(povm)).expect("POVM serializes")
}

pub fn process_to_json(mp: &MeasuringProcess) -> String {
    serde_json::to_string_pretty(&ProcessFile::from_process(mp)).expect("process serializes")
}
