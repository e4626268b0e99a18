//! Instruments in Kraus form, the Lüders instrument, and instruments induced
//! by a measuring process (probe dilation).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    self, hermitian_eig, partial_trace_probe, positive_sqrt, tensor, ComplexMatrix, HermitianOperator, TOL,
};
use crate::quantum::{self, is_sharp, DensityMatrix, Povm};

/// Kraus operators below this max-entry magnitude are dropped.
const KRAUS_DROP: f64 = 1e-12;

/// Per-outcome completely positive maps, ρ ↦ Σ_m K_{i,m} ρ K_{i,m}†.
#[derive(Clone, Debug)]
pub struct Instrument {
    dim: usize,
    kraus: Vec<Vec<ComplexMatrix>>,
}

impl Instrument {
    /// Validates dimensions and the normalization Σ K†K = I.
    pub fn new(dim: usize, kraus: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidInstrument("no outcomes".into()));
        }
        for k in kraus.iter().flatten() {
            if k.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: k.dim(),
                });
            }
        }
        let kraus: Vec<Vec<ComplexMatrix>> = kraus
            .into_iter()
            .map(|ops| ops.into_iter().filter(|k| k.max_abs() > KRAUS_DROP).collect())
            .collect();
        let ins = Instrument { dim, kraus };
        let residual = ins.normalization_residual();
        if residual > TOL {
            return Err(Error::InvalidInstrument(format!(
                "‖Σ K†K − I‖_max = {residual:e}"
            )));
        }
        Ok(ins)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus(&self, outcome: usize) -> &[ComplexMatrix] {
        &self.kraus[outcome]
    }

    pub fn normalization_residual(&self) -> f64 {
        let total = self
            .kraus
            .iter()
            .flatten()
            .fold(ComplexMatrix::zeros(self.dim), |acc, k| {
                &acc + &(&k.adjoint() * k)
            });
        total.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    fn check_outcome(&self, outcome: usize) -> Result<()> {
        if outcome >= self.outcomes() {
            return Err(Error::OutcomeOutOfRange {
                outcome,
                count: self.outcomes(),
            });
        }
        Ok(())
    }

    /// The subnormalized post-measurement state Σ_m K ρ K†; its trace is
    /// the outcome probability.
    pub fn apply(&self, rho: &DensityMatrix, outcome: usize) -> Result<HermitianOperator> {
        self.check_outcome(outcome)?;
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim(),
            });
        }
        let out = self.kraus[outcome]
            .iter()
            .fold(ComplexMatrix::zeros(self.dim), |acc, k| {
                &acc + &(&(k * rho.matrix()) * &k.adjoint())
            });
        Ok(HermitianOperator::symmetrized(out))
    }

    /// Heisenberg-picture map Σ_m K† E K.
    pub fn adjoint_apply(&self, outcome: usize, effect: &HermitianOperator) -> Result<HermitianOperator> {
        self.check_outcome(outcome)?;
        if effect.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: effect.dim(),
            });
        }
        let out = self.kraus[outcome]
            .iter()
            .fold(ComplexMatrix::zeros(self.dim), |acc, k| {
                &acc + &(&(&k.adjoint() * effect.matrix()) * k)
            });
        Ok(HermitianOperator::symmetrized(out))
    }

    /// True when every outcome acts as ρ ↦ √A_i ρ √A_i, i.e. carries a single
    /// Kraus operator equal to the square root of its effect up to a global phase.
    pub fn is_luders(&self) -> bool {
        let povm = induced_povm(self);
        self.kraus.iter().zip(povm.elements()).all(|(ops, effect)| {
            let Ok(root) = positive_sqrt(effect) else {
                return false;
            };
            match ops.as_slice() {
                [] => root.matrix().max_abs() <= TOL,
                [k] => {
                    let r = root.matrix();
                    let (idx, _) = r
                        .as_slice()
                        .iter()
                        .enumerate()
                        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                        .unwrap();
                    let ratio = k.as_slice()[idx] / r.as_slice()[idx];
                    if (ratio.norm() - 1.0).abs() > 1e-6 {
                        return false;
                    }
                    let phase = ratio / ratio.norm();
                    k.as_slice()
                        .iter()
                        .zip(r.as_slice())
                        .all(|(a, b)| (a - phase * b).norm() <= 1e-8)
                }
                _ => false,
            }
        })
    }
}

/// The Lüders instrument of a POVM: one Kraus operator √A_i per outcome.
pub fn luders(povm: &Povm) -> Result<Instrument> {
    let kraus = povm
        .elements()
        .iter()
        .map(|e| positive_sqrt(e).map(|r| vec![r.into_matrix()]))
        .collect::<Result<Vec<_>>>()?;
    Instrument::new(povm.dim(), kraus)
}

/// The POVM {Σ_m K_{i,m}† K_{i,m}} an instrument is compatible with.
pub fn induced_povm(ins: &Instrument) -> Povm {
    let id = HermitianOperator::identity(ins.dim());
    let elements = (0..ins.outcomes())
        .map(|i| ins.adjoint_apply(i, &id).expect("outcome in range"))
        .collect();
    Povm::new(elements).expect("normalized instrument induces a valid POVM")
}

/// Max over sampled states and outcomes of |tr[I_i(ρ)] − tr[A_i ρ]|. The
/// computational basis states are always included, followed by
/// `n_samples` random pure states.
pub fn verify_compatibility(ins: &Instrument, povm: &Povm, n_samples: usize, seed: u64) -> Result<f64> {
    if ins.dim() != povm.dim() {
        return Err(Error::DimensionMismatch {
            expected: ins.dim(),
            found: povm.dim(),
        });
    }
    if ins.outcomes() != povm.len() {
        return Err(Error::InvalidInstrument(format!(
            "instrument has {} outcomes, POVM has {}",
            ins.outcomes(),
            povm.len()
        )));
    }
    let dim = ins.dim();
    let mut rng = quantum::rng_from_seed(seed);
    let states = (0..dim)
        .map(|k| DensityMatrix::pure(&linalg::pauli::basis(dim, k)))
        .chain((0..n_samples).map(|_| quantum::random_pure_state_with(dim, &mut rng)));

    let mut worst = 0.0f64;
    for rho in states {
        for i in 0..povm.len() {
            let p_ins = ins.apply(&rho, i)?.trace();
            let p_povm = povm.element(i).expectation(rho.op());
            worst = worst.max((p_ins - p_povm).abs());
        }
    }
    Ok(worst)
}

/// A probe dilation (K, |ξ⟩, U, F) of an instrument, ordered system ⊗ probe.
#[derive(Clone, Debug)]
pub struct MeasuringProcess {
    dim_sys: usize,
    dim_probe: usize,
    probe_state: Vec<Complex64>,
    unitary: ComplexMatrix,
    probe_pvm: Povm,
}

impl MeasuringProcess {
    pub fn new(
        dim_sys: usize,
        dim_probe: usize,
        probe_state: Vec<Complex64>,
        unitary: ComplexMatrix,
        probe_pvm: Povm,
    ) -> Result<Self> {
        if probe_state.len() != dim_probe {
            return Err(Error::DimensionMismatch {
                expected: dim_probe,
                found: probe_state.len(),
            });
        }
        if unitary.dim() != dim_sys * dim_probe {
            return Err(Error::DimensionMismatch {
                expected: dim_sys * dim_probe,
                found: unitary.dim(),
            });
        }
        if probe_pvm.dim() != dim_probe {
            return Err(Error::DimensionMismatch {
                expected: dim_probe,
                found: probe_pvm.dim(),
            });
        }
        let norm = probe_state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > TOL {
            return Err(Error::InvalidProcess(format!("probe state has norm {norm}")));
        }
        let defect = (&unitary.adjoint() * &unitary).max_abs_diff(&ComplexMatrix::identity(unitary.dim()));
        if defect > TOL {
            return Err(Error::InvalidProcess(format!("‖U†U − I‖_max = {defect:e}")));
        }
        if !is_sharp(&probe_pvm) {
            return Err(Error::InvalidProcess("probe observable is not sharp".into()));
        }
        Ok(MeasuringProcess {
            dim_sys,
            dim_probe,
            probe_state,
            unitary,
            probe_pvm,
        })
    }

    pub fn dim_sys(&self) -> usize {
        self.dim_sys
    }

    pub fn dim_probe(&self) -> usize {
        self.dim_probe
    }

    pub fn probe_state(&self) -> &[Complex64] {
        &self.probe_state
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn probe_pvm(&self) -> &Povm {
        &self.probe_pvm
    }

    /// tr_K[U(ρ ⊗ |ξ⟩⟨ξ|)U†(I ⊗ F_i)], evaluated directly on the joint space.
    pub fn dilation_apply(&self, rho: &DensityMatrix, outcome: usize) -> Result<ComplexMatrix> {
        if rho.dim() != self.dim_sys {
            return Err(Error::DimensionMismatch {
                expected: self.dim_sys,
                found: rho.dim(),
            });
        }
        if outcome >= self.probe_pvm.len() {
            return Err(Error::OutcomeOutOfRange {
                outcome,
                count: self.probe_pvm.len(),
            });
        }
        let xi = ComplexMatrix::outer(&self.probe_state);
        let joint = &(&self.unitary * &tensor(rho.matrix(), &xi)) * &self.unitary.adjoint();
        let filter = tensor(
            &ComplexMatrix::identity(self.dim_sys),
            self.probe_pvm.element(outcome).matrix(),
        );
        partial_trace_probe(&(&joint * &filter), self.dim_sys, self.dim_probe)
    }
}

/// Kraus operators K_{i,m} = (I ⊗ ⟨f_{i,m}|) U (I ⊗ |ξ⟩), with {f_{i,m}} an
/// orthonormal basis of the range of the probe projector F_i.
pub fn from_measuring_process(mp: &MeasuringProcess) -> Result<Instrument> {
    let (ds, dp) = (mp.dim_sys, mp.dim_probe);
    let mut kraus = Vec::with_capacity(mp.probe_pvm.len());
    for f in mp.probe_pvm.elements() {
        let spec = hermitian_eig(f);
        let range: Vec<&Vec<Complex64>> = spec
            .eigenvalues
            .iter()
            .zip(&spec.eigenvectors)
            .filter(|(l, _)| (**l - 1.0).abs() <= TOL)
            .map(|(_, v)| v)
            .collect();
        let ops = range
            .into_iter()
            .map(|fv| {
                let mut k = ComplexMatrix::zeros(ds);
                for a in 0..ds {
                    for b in 0..ds {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (kk, fk) in fv.iter().enumerate() {
                            for (l, xl) in mp.probe_state.iter().enumerate() {
                                acc += fk.conj() * mp.unitary[(a * dp + kk, b * dp + l)] * xl;
                            }
                        }
                        k[(a, b)] = acc;
                    }
                }
                k
            })
            .collect();
        kraus.push(ops);
    }
    Instrument::new(ds, kraus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::*;
    use crate::quantum::{random_mixed_state, random_pure_state};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn z(s: f64) -> Povm {
        Povm::new(vec![
            HermitianOperator::diag(&[(1.0 + s) / 2.0, (1.0 - s) / 2.0]),
            HermitianOperator::diag(&[(1.0 - s) / 2.0, (1.0 + s) / 2.0]),
        ])
        .unwrap()
    }

    fn x_sharp() -> Povm {
        let id = HermitianOperator::identity(2);
        Povm::new(vec![(&id + &sigma_x()).scale(0.5), (&id - &sigma_x()).scale(0.5)]).unwrap()
    }

    fn cnot() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap()
    }

    fn cnot_process(s: f64) -> MeasuringProcess {
        let phi = vec![
            Complex64::new(((1.0 + s) / 2.0).sqrt(), 0.0),
            Complex64::new(((1.0 - s) / 2.0).sqrt(), 0.0),
        ];
        MeasuringProcess::new(2, 2, phi, cnot(), z(1.0)).unwrap()
    }

    #[test]
    fn luders_kraus() {
        let ins = luders(&z(1.0)).unwrap();
        assert!(ins.kraus(0)[0].max_abs_diff(&ComplexMatrix::diag(&[1.0, 0.0])) < 1e-15);
        assert!(ins.kraus(1)[0].max_abs_diff(&ComplexMatrix::diag(&[0.0, 1.0])) < 1e-15);

        let s = 0.6;
        let ins = luders(&z(s)).unwrap();
        let kp = ComplexMatrix::diag(&[((1.0 + s) / 2.0f64).sqrt(), ((1.0 - s) / 2.0f64).sqrt()]);
        assert!(ins.kraus(0)[0].max_abs_diff(&kp) < 1e-15);

        let ins = luders(&z(0.0)).unwrap();
        let k = ComplexMatrix::identity(2).scale(FRAC_1_SQRT_2);
        assert!(ins.kraus(0)[0].max_abs_diff(&k) < 1e-15);
        assert!(ins.kraus(1)[0].max_abs_diff(&k) < 1e-15);
    }

    #[test]
    fn trivial_probe() {
        let mp = MeasuringProcess::new(
            2,
            1,
            vec![Complex64::new(1.0, 0.0)],
            ComplexMatrix::identity(2),
            Povm::new(vec![HermitianOperator::identity(1)]).unwrap(),
        )
        .unwrap();
        let ins = from_measuring_process(&mp).unwrap();
        assert_eq!(ins.outcomes(), 1);
        assert!(ins.kraus(0)[0].max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        let povm = induced_povm(&ins);
        assert!(povm.element(0).matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn cnot_process_sharp() {
        let ins = from_measuring_process(&cnot_process(1.0)).unwrap();
        assert_eq!(ins.kraus(0).len(), 1);
        assert!(ins.kraus(0)[0].max_abs_diff(&ComplexMatrix::diag(&[1.0, 0.0])) < 1e-15);
        assert!(ins.kraus(1)[0].max_abs_diff(&ComplexMatrix::diag(&[0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn cnot_process_matches_luders() {
        let s = FRAC_1_SQRT_2;
        let mp = cnot_process(s);
        let ins = from_measuring_process(&mp).unwrap();
        let lud = luders(&z(s)).unwrap();
        assert!(ins.is_luders());
        for seed in 0..100 {
            let rho = random_mixed_state(2, seed);
            for i in 0..2 {
                let a = ins.apply(&rho, i).unwrap();
                let b = lud.apply(&rho, i).unwrap();
                let d = mp.dilation_apply(&rho, i).unwrap();
                assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-9);
                assert!(a.matrix().max_abs_diff(&d) < 1e-9);
            }
        }
        assert!(induced_povm(&ins).max_element_diff(&z(s)) < 1e-9);
    }

    #[test]
    fn apply_examples() {
        let e0 = DensityMatrix::pure(&basis(2, 0));
        let ins = luders(&z(1.0)).unwrap();
        let plus = ins.apply(&e0, 0).unwrap();
        assert!(plus.matrix().max_abs_diff(e0.matrix()) < 1e-15);
        assert!((plus.trace() - 1.0).abs() < 1e-15);
        assert!(ins.apply(&e0, 1).unwrap().matrix().max_abs() < 1e-15);

        let ins = luders(&z(FRAC_1_SQRT_2)).unwrap();
        let out = ins.apply(&DensityMatrix::maximally_mixed(2), 0).unwrap();
        let expected = ComplexMatrix::diag(&[0.853_553_390_593_274 / 2.0, 0.146_446_609_406_726 / 2.0]);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-14);
        assert!((out.trace() - 0.5).abs() < 1e-14);

        assert!(matches!(
            ins.apply(&e0, 2),
            Err(Error::OutcomeOutOfRange { outcome: 2, count: 2 })
        ));
    }

    #[test]
    fn adjoint_examples() {
        let a = z(0.4);
        let ins = luders(&a).unwrap();
        let id = HermitianOperator::identity(2);
        for i in 0..2 {
            let e = ins.adjoint_apply(i, &id).unwrap();
            assert!(e.matrix().max_abs_diff(a.element(i).matrix()) < 1e-14);
        }

        let xs = x_sharp();
        let root = positive_sqrt(a.element(0)).unwrap();
        let expected = &(root.matrix() * xs.element(1).matrix()) * root.matrix();
        let got = ins.adjoint_apply(0, xs.element(1)).unwrap();
        assert!(got.matrix().max_abs_diff(&expected) < 1e-14);

        // single-Kraus unitary: U = e^{-iσ_y π/8}
        let (c, s) = (
            (std::f64::consts::PI / 8.0).cos(),
            (std::f64::consts::PI / 8.0).sin(),
        );
        let u = ComplexMatrix::from_real_rows(&[&[c, -s], &[s, c]]).unwrap();
        let unitary = Instrument::new(2, vec![vec![u.clone()]]).unwrap();
        let got = unitary.adjoint_apply(0, &sigma_z()).unwrap();
        let expected = &(&u.adjoint() * sigma_z().matrix()) * &u;
        assert!(got.matrix().max_abs_diff(&expected) < 1e-14);
        assert!(unitary.adjoint_apply(3, &sigma_z()).is_err());
    }

    #[test]
    fn duality_on_random_inputs() {
        let mut rng = quantum::rng_from_seed(77);
        for seed in 0..100u64 {
            let dim = 2 + (seed % 3) as usize;
            let a = quantum::random_povm(dim, 3, &mut rng);
            let ins = luders(&a).unwrap();
            let rho = random_mixed_state(dim, seed);
            let e = quantum::random_povm(dim, 2, &mut rng).element(0).clone();
            for i in 0..3 {
                let lhs = ins.adjoint_apply(i, &e).unwrap().expectation(rho.op());
                let rhs = ins.apply(&rho, i).unwrap().expectation(&e);
                assert!((lhs - rhs).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn induced_povm_examples() {
        let a = z(0.3);
        assert!(induced_povm(&luders(&a).unwrap()).max_element_diff(&a) < 1e-15);
        for k in 0..=10 {
            let s = k as f64 / 10.0;
            let ins = from_measuring_process(&cnot_process(s)).unwrap();
            assert!(induced_povm(&ins).max_element_diff(&z(s)) < 1e-9);
        }
    }

    #[test]
    fn compatibility_checks() {
        let a = z(0.55);
        assert!(verify_compatibility(&luders(&a).unwrap(), &a, 50, 1).unwrap() <= 1e-10);

        let ins = from_measuring_process(&cnot_process(0.3)).unwrap();
        assert!(verify_compatibility(&ins, &z(0.3), 50, 2).unwrap() <= 1e-9);

        let dev = verify_compatibility(&luders(&z(1.0)).unwrap(), &x_sharp(), 0, 3).unwrap();
        assert!((dev - 0.5).abs() < 1e-12);
        let dev = verify_compatibility(&luders(&z(1.0)).unwrap(), &x_sharp(), 50, 3).unwrap();
        assert!(dev >= 0.5);
    }

    #[test]
    fn dilation_probabilities_match_induced_povm() {
        let mut rng = quantum::rng_from_seed(8);
        let basis3 = quantum::random_basis(6, &mut rng);
        // random unitary on 2 ⊗ 3 from a random orthonormal basis
        let mut u = ComplexMatrix::zeros(6);
        for (col, v) in basis3.iter().enumerate() {
            for (row, z) in v.iter().enumerate() {
                u[(row, col)] = *z;
            }
        }
        let probe_pvm = Povm::new(vec![
            HermitianOperator::diag(&[1.0, 1.0, 0.0]),
            HermitianOperator::diag(&[0.0, 0.0, 1.0]),
        ])
        .unwrap();
        let xi = quantum::random_vector(3, &mut rng);
        let mp = MeasuringProcess::new(2, 3, xi, u, probe_pvm).unwrap();
        let ins = from_measuring_process(&mp).unwrap();
        assert!(ins.normalization_residual() < 1e-12);
        assert_eq!(ins.kraus(0).len(), 2);
        let povm = induced_povm(&ins);
        for seed in 0..30 {
            let rho = random_pure_state(2, seed);
            for i in 0..2 {
                let p = mp.dilation_apply(&rho, i).unwrap().trace().re;
                assert!((p - povm.element(i).expectation(rho.op())).abs() < 1e-9);
                let d = mp.dilation_apply(&rho, i).unwrap();
                assert!(ins.apply(&rho, i).unwrap().matrix().max_abs_diff(&d) < 1e-9);
            }
        }
    }

    #[test]
    fn process_validation() {
        let phi = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(
            MeasuringProcess::new(2, 2, phi, cnot(), z(1.0)),
            Err(Error::InvalidProcess(_))
        ));
        let e0 = basis(2, 0);
        assert!(matches!(
            MeasuringProcess::new(2, 2, e0.clone(), cnot().scale(2.0), z(1.0)),
            Err(Error::InvalidProcess(_))
        ));
        assert!(matches!(
            MeasuringProcess::new(2, 2, e0.clone(), cnot(), z(0.5)),
            Err(Error::InvalidProcess(_))
        ));
        assert!(MeasuringProcess::new(2, 3, e0, cnot(), z(1.0))
            .unwrap_err()
            .is_dimension_mismatch());
    }

    #[test]
    fn non_luders_detection() {
        // K_i = U √A_i with a non-trivial unitary is compatible but not Lüders
        let a = z(0.5);
        let lud = luders(&a).unwrap();
        let kraus = (0..2)
            .map(|i| vec![sigma_x().matrix() * &lud.kraus(i)[0]])
            .collect();
        let ins = Instrument::new(2, kraus).unwrap();
        assert!(!ins.is_luders());
        assert!(lud.is_luders());
        assert!(induced_povm(&ins).max_element_diff(&a) < 1e-14);
    }
}
