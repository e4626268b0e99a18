//! Successive measurements: merging an instrument for A followed by a
//! measurement of B into the overall observable C, and splitting C back into
//! its marginals A and B′.

use crate::error::{Error, Result};
use crate::instruments::Instrument;
use crate::linalg::{ComplexMatrix, HermitianOperator};
use crate::quantum::{DensityMatrix, Povm, ProbabilityDistribution};

/// C_ij = I_i^*(B_j), stored flat at index `i * n_second + j`.
#[derive(Clone, Debug)]
pub struct OverallObservable {
    povm: Povm,
    n_first: usize,
    n_second: usize,
}

impl OverallObservable {
    /// Wraps an existing POVM laid out in row-major (first, second) order.
    pub fn from_povm(povm: Povm, n_first: usize, n_second: usize) -> Result<Self> {
        if n_first * n_second != povm.len() {
            return Err(Error::InvalidPovm(vec![format!(
                "{} elements cannot be arranged as {n_first}x{n_second}",
                povm.len()
            )]));
        }
        Ok(OverallObservable {
            povm,
            n_first,
            n_second,
        })
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn n_first(&self) -> usize {
        self.n_first
    }

    pub fn n_second(&self) -> usize {
        self.n_second
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_second + j
    }

    pub fn element(&self, i: usize, j: usize) -> &HermitianOperator {
        self.povm.element(self.index(i, j))
    }
}

/// The two marginal observables of a joint observable.
#[derive(Clone, Debug)]
pub struct MarginalPair {
    pub first: Povm,
    pub second: Povm,
}

pub fn overall_observable(ins_a: &Instrument, b: &Povm) -> Result<OverallObservable> {
    if ins_a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: ins_a.dim(),
            found: b.dim(),
        });
    }
    let (n_first, n_second) = (ins_a.outcomes(), b.len());
    let mut elements = Vec::with_capacity(n_first * n_second);
    let mut labels = Vec::with_capacity(n_first * n_second);
    let first_labels: Vec<String> = (0..n_first).map(|i| i.to_string()).collect();
    for (i, li) in first_labels.iter().enumerate() {
        for (j, bj) in b.elements().iter().enumerate() {
            elements.push(ins_a.adjoint_apply(i, bj)?);
            labels.push(format!("{li},{}", b.labels()[j]));
        }
    }
    let povm = Povm::with_labels(elements, labels)?;
    OverallObservable::from_povm(povm, n_first, n_second)
}

pub fn marginals(c: &OverallObservable) -> Result<MarginalPair> {
    let dim = c.povm.dim();
    let rows = (0..c.n_first)
        .map(|i| {
            let sum = (0..c.n_second).fold(ComplexMatrix::zeros(dim), |acc, j| {
                &acc + c.element(i, j).matrix()
            });
            HermitianOperator::symmetrized(sum)
        })
        .collect();
    let cols = (0..c.n_second)
        .map(|j| {
            let sum = (0..c.n_first).fold(ComplexMatrix::zeros(dim), |acc, i| {
                &acc + c.element(i, j).matrix()
            });
            HermitianOperator::symmetrized(sum)
        })
        .collect();
    Ok(MarginalPair {
        first: Povm::new(rows)?,
        second: Povm::new(cols)?,
    })
}

/// p(i, j) = tr[C_ij ρ], flat in the same order as the overall observable.
pub fn joint_distribution(c: &OverallObservable, rho: &DensityMatrix) -> Result<ProbabilityDistribution> {
    crate::quantum::outcome_distribution(&c.povm, rho)
}
