//! States, POVMs and outcome statistics.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eig, ComplexMatrix, HermitianOperator, TOL};

/// A positive semidefinite operator of unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let trace = op.trace();
        if (trace - 1.0).abs() > TOL {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let min = hermitian_eig(&op).min_eigenvalue();
        if min < -TOL {
            return Err(Error::NotPositive {
                eigenvalue: min,
                what: "density matrix".into(),
            });
        }
        Ok(DensityMatrix { op })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            op: HermitianOperator::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// |ψ⟩⟨ψ| for a vector normalized on the fly.
    pub fn pure(psi: &[Complex64]) -> Self {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        DensityMatrix {
            op: HermitianOperator::projector(&v),
        }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }
}

/// An ordered list of positive operators summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    dim: usize,
    elements: Vec<HermitianOperator>,
    labels: Vec<String>,
}

impl Povm {
    /// Validates positivity, boundedness by the identity and completeness.
    pub fn new(elements: Vec<HermitianOperator>) -> Result<Self> {
        let labels = (0..elements.len()).map(|i| i.to_string()).collect();
        Self::with_labels(elements, labels)
    }

    pub fn with_labels(elements: Vec<HermitianOperator>, labels: Vec<String>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidPovm(vec!["no elements".into()]));
        }
        if labels.len() != elements.len() {
            return Err(Error::InvalidPovm(vec![format!(
                "{} labels for {} elements",
                labels.len(),
                elements.len()
            )]));
        }
        let dim = elements[0].dim();
        for e in &elements {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
        }

        let mut problems = Vec::new();
        for (i, e) in elements.iter().enumerate() {
            let spec = hermitian_eig(e);
            let (lo, hi) = (spec.min_eigenvalue(), spec.max_eigenvalue());
            if lo < -TOL {
                problems.push(format!("element {i} has negative eigenvalue {lo:e}"));
            }
            if hi > 1.0 + TOL {
                problems.push(format!("element {i} has eigenvalue {hi} above 1"));
            }
        }
        let residual = completeness_residual(dim, &elements);
        if residual > TOL {
            problems.push(format!("completeness residual ‖ΣA_i − I‖_max = {residual:e}"));
        }
        if !problems.is_empty() {
            return Err(Error::InvalidPovm(problems));
        }
        Ok(Povm {
            dim,
            elements,
            labels,
        })
    }

    /// The rank-one PVM {|v_k⟩⟨v_k|} of an orthonormal basis.
    pub fn from_basis(basis: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(basis.iter().map(|v| HermitianOperator::projector(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &HermitianOperator {
        &self.elements[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn completeness_residual(&self) -> f64 {
        completeness_residual(self.dim, &self.elements)
    }

    /// Largest entrywise deviation between corresponding elements.
    pub fn max_element_diff(&self, other: &Povm) -> f64 {
        assert_eq!(self.len(), other.len(), "POVMs differ in outcome count");
        self.elements
            .iter()
            .zip(&other.elements)
            .map(|(a, b)| a.matrix().max_abs_diff(b.matrix()))
            .fold(0.0, f64::max)
    }
}

fn completeness_residual(dim: usize, elements: &[HermitianOperator]) -> f64 {
    let sum = elements
        .iter()
        .fold(ComplexMatrix::zeros(dim), |acc, e| &acc + e.matrix());
    sum.max_abs_diff(&ComplexMatrix::identity(dim))
}

/// Validates a raw list of operators as a POVM.
pub fn validate_povm(raw: Vec<HermitianOperator>) -> Result<Povm> {
    Povm::new(raw)
}

/// True iff every eigenvalue of every element is within 1e-9 of 0 or 1.
pub fn is_sharp(povm: &Povm) -> bool {
    povm.elements().iter().all(|e| {
        hermitian_eig(e)
            .eigenvalues
            .iter()
            .all(|&l| l.abs() <= TOL || (l - 1.0).abs() <= TOL)
    })
}

/// Outcome probabilities with their labels.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityDistribution {
    pub probs: Vec<f64>,
    pub labels: Vec<String>,
}

impl ProbabilityDistribution {
    /// Clamps tiny negative entries to zero and renormalizes. Fails if the
    /// total is further than 1e-9 from one.
    pub fn new(probs: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        let probs: Vec<f64> = probs.into_iter().map(|p| p.max(0.0)).collect();
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > TOL {
            return Err(Error::InvalidState(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(ProbabilityDistribution {
            probs: probs.iter().map(|p| p / total).collect(),
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// p_i = tr[A_i ρ].
pub fn outcome_distribution(povm: &Povm, rho: &DensityMatrix) -> Result<ProbabilityDistribution> {
    if povm.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.dim(),
            found: rho.dim(),
        });
    }
    let probs = povm.elements().iter().map(|e| e.expectation(rho.op())).collect();
    ProbabilityDistribution::new(probs, povm.labels().to_vec())
}

/// Seeded generator used by every random constructor in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect()
}

fn normalized(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

/// Haar-random unit vector.
pub fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    normalized(gaussian_vector(dim, rng))
}

pub fn random_pure_state_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    DensityMatrix {
        op: HermitianOperator::projector(&random_vector(dim, rng)),
    }
}

/// Haar-random pure state, deterministic per seed.
pub fn random_pure_state(dim: usize, seed: u64) -> DensityMatrix {
    random_pure_state_with(dim, &mut rng_from_seed(seed))
}

/// Hilbert–Schmidt random mixed state: a Haar-random pure state on
/// `dim ⊗ dim` with the ancilla traced out.
pub fn random_mixed_state_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let psi = random_vector(dim * dim, rng);
    let reduced = linalg::partial_trace_probe(&ComplexMatrix::outer(&psi), dim, dim)
        .expect("dimensions agree by construction");
    DensityMatrix {
        op: HermitianOperator::symmetrized(reduced),
    }
}

pub fn random_mixed_state(dim: usize, seed: u64) -> DensityMatrix {
    random_mixed_state_with(dim, &mut rng_from_seed(seed))
}

/// Haar-random orthonormal basis via Gram–Schmidt on Gaussian vectors.
pub fn random_basis<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v = gaussian_vector(dim, rng);
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for b in &basis {
                let overlap: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= overlap * bi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(normalized(v));
        }
    }
    basis
}

/// Random POVM with `outcomes` elements: A_i = S^{-1/2} G_i S^{-1/2}, where
/// G_i = X_i† X_i for complex Gaussian X_i and S = Σ G_i.
pub fn random_povm<R: Rng + ?Sized>(dim: usize, outcomes: usize, rng: &mut R) -> Povm {
    let gs: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let x = ComplexMatrix::from_vec(dim, gaussian_vector(dim * dim, rng)).unwrap();
            &x.adjoint() * &x
        })
        .collect();
    let sum = gs.iter().fold(ComplexMatrix::zeros(dim), |acc, g| &acc + g);
    let inv_sqrt = hermitian_eig(&HermitianOperator::symmetrized(sum))
        .map_eigenvalues(|l| 1.0 / l.sqrt())
        .into_matrix();
    let elements = gs
        .iter()
        .map(|g| HermitianOperator::symmetrized(&(&inv_sqrt * g) * &inv_sqrt))
        .collect();
    Povm::new(elements).expect("normalized construction yields a valid POVM")
}
