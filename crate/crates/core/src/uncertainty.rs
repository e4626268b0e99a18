//! Entropies, device uncertainty and state-independent lower bounds.
//!
//! All logarithms are base 2, so every quantity here is in bits. The bounds
//! that minimize over states (`min_device_uncertainty`, `bound_d1`,
//! `bound_d2`) are exact: device uncertainty is linear in ρ, so its minimum
//! is the lowest eigenvalue of the corresponding unsharpness operator.

use std::fmt;
use std::ops::Add;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instruments::{induced_povm, Instrument};
use crate::linalg::{
    hermitian_eig, operator_norm, positive_sqrt, ComplexMatrix, HermitianOperator, SpectralDecomposition, TOL,
};
use crate::quantum::{outcome_distribution, DensityMatrix, Povm, ProbabilityDistribution};
use crate::successive::{joint_distribution, marginals, overall_observable};

/// Slack allowed when checking inequality chains.
pub const INEQUALITY_SLACK: f64 = 1e-9;

/// A nonnegative amount of information in bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Bits(f64);

impl Bits {
    pub const ZERO: Bits = Bits(0.0);

    /// Clamps values in [-1e-12, 0] to (positive) zero; larger negative values are kept
    /// so that genuine sign errors stay visible.
    pub fn new(value: f64) -> Self {
        if (-1e-12..=0.0).contains(&value) {
            Bits(0.0)
        } else {
            Bits(value)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Add for Bits {
    type Output = Bits;

    fn add(self, rhs: Bits) -> Bits {
        Bits(self.0 + rhs.0)
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// −x log₂ x on an eigenvalue already clamped to [0, 1].
fn h_unchecked(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 || x == 1.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// h(x) = −x log₂ x with h(0) = 0.
pub fn h(x: f64) -> Result<Bits> {
    if !(-TOL..=1.0 + TOL).contains(&x) || x.is_nan() {
        return Err(Error::ProbabilityRange(x));
    }
    Ok(Bits(h_unchecked(x)))
}

pub fn shannon_entropy(p: &ProbabilityDistribution) -> Bits {
    Bits(p.probs.iter().map(|&x| h_unchecked(x)).sum())
}

/// H_bin(q) = h(q) + h(1 − q).
pub fn binary_entropy(q: f64) -> Result<Bits> {
    Ok(h(q)? + h(1.0 - q)?)
}

/// Mean of h over the eigenvalues of a numerically degenerate group. Equal to
/// h(λ) for an exactly degenerate eigenspace, and keeps the trace Σ_k h(λ_k)
/// when a tiny eigenvalue is grouped with zero.
fn group_entropy(spec: &SpectralDecomposition, group: usize) -> f64 {
    let idx = &spec.eigenspaces[group];
    idx.iter().map(|&k| h_unchecked(spec.eigenvalues[k])).sum::<f64>() / idx.len() as f64
}

/// Σ_i Σ_λ h(λ) Π_λ^{(i)}, summed over the distinct eigenvalues of each element.
pub fn unsharpness_operator(povm: &Povm) -> HermitianOperator {
    let mut acc = HermitianOperator::zeros(povm.dim());
    for e in povm.elements() {
        let spec = hermitian_eig(e);
        for g in 0..spec.eigenspaces.len() {
            let weight = group_entropy(&spec, g);
            if weight != 0.0 {
                acc = &acc + &spec.eigenspace_projector(g).scale(weight);
            }
        }
    }
    acc
}

/// D_ρ(A) = Σ_i Σ_k ⟨a_i^k|ρ|a_i^k⟩ h(a_i^k), evaluated per eigenspace so the
/// result does not depend on the basis chosen inside degenerate eigenspaces.
pub fn device_uncertainty(povm: &Povm, rho: &DensityMatrix) -> Result<Bits> {
    if povm.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.dim(),
            found: rho.dim(),
        });
    }
    let mut total = 0.0;
    for e in povm.elements() {
        let spec = hermitian_eig(e);
        for g in 0..spec.eigenspaces.len() {
            let weight = group_entropy(&spec, g);
            if weight != 0.0 {
                total += weight * spec.eigenspace_projector(g).expectation(rho.op());
            }
        }
    }
    Ok(Bits::new(total))
}

fn lowest_eigenvalue(op: &HermitianOperator) -> Bits {
    Bits(hermitian_eig(op).min_eigenvalue().max(0.0))
}

/// min_ρ D_ρ(A): the lowest eigenvalue of the unsharpness operator.
pub fn min_device_uncertainty(povm: &Povm) -> Bits {
    lowest_eigenvalue(&unsharpness_operator(povm))
}

/// −log₂ max_i ‖A_i‖, the weakest bound in the device-uncertainty chain.
pub fn max_norm_bound(povm: &Povm) -> Bits {
    let max = povm
        .elements()
        .iter()
        .map(|e| hermitian_eig(e).max_eigenvalue())
        .fold(0.0, f64::max);
    Bits::new(-max.log2())
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// max_{i,j} ‖√A_i √B_j‖².
pub fn max_overlap(a: &Povm, b: &Povm) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let ra = a
        .elements()
        .iter()
        .map(positive_sqrt)
        .collect::<Result<Vec<_>>>()?;
    let rb = b
        .elements()
        .iter()
        .map(positive_sqrt)
        .collect::<Result<Vec<_>>>()?;
    let mut max = 0.0f64;
    for x in &ra {
        for y in &rb {
            let n = operator_norm(&(x.matrix() * y.matrix()));
            max = max.max(n * n);
        }
    }
    Ok(max)
}

/// c = −log₂ max_{i,j} ‖√A_i √B_j‖².
pub fn incompatibility_mu(a: &Povm, b: &Povm) -> Result<Bits> {
    Ok(Bits::new(-max_overlap(a, b)?.log2()))
}

/// 𝒟₁: minimal device uncertainty of the overall observable.
pub fn bound_d1(ins_a: &Instrument, b: &Povm) -> Result<Bits> {
    Ok(min_device_uncertainty(overall_observable(ins_a, b)?.povm()))
}

/// 𝒟₂: lowest eigenvalue of the summed unsharpness operators of the two
/// marginals A and B′.
pub fn bound_d2(ins_a: &Instrument, b: &Povm) -> Result<Bits> {
    let m = marginals(&overall_observable(ins_a, b)?)?;
    Ok(lowest_eigenvalue(
        &(&unsharpness_operator(&m.first) + &unsharpness_operator(&m.second)),
    ))
}

fn check_orthonormal(basis: &[Vec<Complex64>], which: &str) -> Result<()> {
    let d = basis.len();
    for (i, u) in basis.iter().enumerate() {
        if u.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: u.len(),
            });
        }
        for (j, v) in basis.iter().enumerate() {
            let ip: Complex64 = u.iter().zip(v).map(|(x, y)| x.conj() * y).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            if (ip - Complex64::new(target, 0.0)).norm() > TOL {
                return Err(Error::Shape(format!(
                    "{which} basis is not orthonormal: ⟨v{i}|v{j}⟩ = {ip}"
                )));
            }
        }
    }
    Ok(())
}

/// min_i Σ_j h(|⟨a_i|b_j⟩|²) for two orthonormal bases. Ties resolve to the
/// smallest index.
pub fn srinivas_bound(basis_a: &[Vec<Complex64>], basis_b: &[Vec<Complex64>]) -> Result<Bits> {
    check_orthonormal(basis_a, "first")?;
    check_orthonormal(basis_b, "second")?;
    check_dims(basis_a.len(), basis_b.len())?;
    let mut best = f64::INFINITY;
    for a in basis_a {
        let row: f64 = basis_b
            .iter()
            .map(|b| {
                let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                h_unchecked(ip.norm_sqr())
            })
            .sum();
        if row < best {
            best = row;
        }
    }
    Ok(Bits::new(best))
}

/// Extracts the basis of a rank-one PVM (one unit eigenvector per element),
/// or `None` when the POVM is not of that form.
pub fn rank_one_basis(povm: &Povm) -> Option<Vec<Vec<Complex64>>> {
    if povm.len() != povm.dim() {
        return None;
    }
    povm.elements()
        .iter()
        .map(|e| {
            let spec = hermitian_eig(e);
            let rest_zero = spec.eigenvalues[1..].iter().all(|l| l.abs() <= TOL);
            ((spec.max_eigenvalue() - 1.0).abs() <= TOL && rest_zero).then(|| spec.eigenvectors[0].clone())
        })
        .collect()
}

/// The disturbed-observable bound −log₂ max_j ‖Σ_i √A_i B_j √A_i‖ together
/// with the overlap constant it is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LudersJointBound {
    pub bound: Bits,
    /// max_j ‖Σ_i √A_i B_j √A_i‖
    pub max_disturbed_norm: f64,
    /// max_{i,j} ‖√A_i √B_j‖²
    pub max_overlap: f64,
}

pub fn luders_joint_bound(a: &Povm, b: &Povm) -> Result<LudersJointBound> {
    check_dims(a.dim(), b.dim())?;
    let roots = a
        .elements()
        .iter()
        .map(positive_sqrt)
        .collect::<Result<Vec<_>>>()?;
    let mut max_disturbed = 0.0f64;
    for bj in b.elements() {
        let sum = roots.iter().fold(ComplexMatrix::zeros(a.dim()), |acc, r| {
            &acc + &(&(r.matrix() * bj.matrix()) * r.matrix())
        });
        max_disturbed =
            max_disturbed.max(hermitian_eig(&HermitianOperator::symmetrized(sum)).max_eigenvalue());
    }
    Ok(LudersJointBound {
        bound: Bits::new(-max_disturbed.log2()),
        max_disturbed_norm: max_disturbed,
        max_overlap: max_overlap(a, b)?,
    })
}

/// One link of an inequality chain, `lhs ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(name: &'static str, lhs: Bits, rhs: Bits) -> Self {
        let slack = lhs.value() - rhs.value();
        InequalityCheck {
            name,
            lhs: lhs.value(),
            rhs: rhs.value(),
            slack,
            holds: slack >= -INEQUALITY_SLACK,
        }
    }
}

/// Names of every inequality `full_report` may check, in report order.
pub const CHECK_NAMES: [&str; 10] = [
    "H(A) >= D(A)",
    "D(A) >= min D(A)",
    "min D(A) >= -log max|A_i|",
    "H(A,B) >= D(C)",
    "D(C) >= D1",
    "D1 >= c",
    "H(A)+H(B') >= D(A)+D(B')",
    "D(A)+D(B') >= D2",
    "D2 >= joint bound",
    "c >= joint bound",
];

/// The fixed set of reported quantities, serialized under these exact keys.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct BoundValues {
    pub H_first: Bits,
    pub H_second: Bits,
    pub H_joint: Bits,
    pub D_rho: Bits,
    pub D1: Bits,
    pub D2: Bits,
    pub c_maassen_uffink: Bits,
    /// Only defined when both observables are rank-one PVMs.
    pub srinivas_bound: Option<Bits>,
    pub luders_joint_bound: Bits,
}

/// Intermediate quantities that feed the inequality chains.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct AuxiliaryValues {
    pub D_rho_first: Bits,
    pub D_rho_second: Bits,
    pub min_D_first: Bits,
    pub max_norm_bound_first: Bits,
    pub max_overlap: f64,
    pub max_disturbed_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub dim: usize,
    pub n_first: usize,
    pub n_second: usize,
    pub luders_instrument: bool,
    pub state: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub bounds: BoundValues,
    pub auxiliary: AuxiliaryValues,
    pub checks: Vec<InequalityCheck>,
    pub violations: Vec<String>,
    pub metadata: ReportMetadata,
}

impl BoundReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates every entropy and bound for an instrument of A followed by a
/// measurement of B on one state, and checks the inequality chains they
/// obey. The comparisons against `c` and the disturbed-observable bound are
/// only theorems for Lüders instruments and are skipped otherwise.
pub fn full_report(ins_a: &Instrument, b: &Povm, rho: &DensityMatrix) -> Result<BoundReport> {
    full_report_labeled(ins_a, b, rho, "unspecified")
}

pub fn full_report_labeled(
    ins_a: &Instrument,
    b: &Povm,
    rho: &DensityMatrix,
    state_label: &str,
) -> Result<BoundReport> {
    check_dims(ins_a.dim(), b.dim())?;
    check_dims(ins_a.dim(), rho.dim())?;

    let a = induced_povm(ins_a);
    let c_obs = overall_observable(ins_a, b)?;
    let m = marginals(&c_obs)?;
    let is_luders = ins_a.is_luders();

    let h_first = shannon_entropy(&outcome_distribution(&m.first, rho)?);
    let h_second = shannon_entropy(&outcome_distribution(&m.second, rho)?);
    let h_joint = shannon_entropy(&joint_distribution(&c_obs, rho)?);
    let d_rho_c = device_uncertainty(c_obs.povm(), rho)?;
    let d_rho_first = device_uncertainty(&m.first, rho)?;
    let d_rho_second = device_uncertainty(&m.second, rho)?;
    let d1 = min_device_uncertainty(c_obs.povm());
    let d2 = lowest_eigenvalue(&(&unsharpness_operator(&m.first) + &unsharpness_operator(&m.second)));
    let min_d_first = min_device_uncertainty(&m.first);
    let max_norm_first = max_norm_bound(&m.first);
    let c = incompatibility_mu(&a, b)?;
    let joint = luders_joint_bound(&a, b)?;
    let srinivas = match (rank_one_basis(&a), rank_one_basis(b)) {
        (Some(ba), Some(bb)) => Some(srinivas_bound(&ba, &bb)?),
        _ => None,
    };

    let mut checks = vec![
        InequalityCheck::new(CHECK_NAMES[0], h_first, d_rho_first),
        InequalityCheck::new(CHECK_NAMES[1], d_rho_first, min_d_first),
        InequalityCheck::new(CHECK_NAMES[2], min_d_first, max_norm_first),
        InequalityCheck::new(CHECK_NAMES[3], h_joint, d_rho_c),
        InequalityCheck::new(CHECK_NAMES[4], d_rho_c, d1),
    ];
    if is_luders {
        checks.push(InequalityCheck::new(CHECK_NAMES[5], d1, c));
    }
    checks.push(InequalityCheck::new(
        CHECK_NAMES[6],
        h_first + h_second,
        d_rho_first + d_rho_second,
    ));
    checks.push(InequalityCheck::new(
        CHECK_NAMES[7],
        d_rho_first + d_rho_second,
        d2,
    ));
    if is_luders {
        checks.push(InequalityCheck::new(CHECK_NAMES[8], d2, joint.bound));
        checks.push(InequalityCheck::new(CHECK_NAMES[9], c, joint.bound));
    }
    let violations = checks
        .iter()
        .filter(|c| !c.holds)
        .map(|c| format!("{} violated: {} < {} (slack {:e})", c.name, c.lhs, c.rhs, c.slack))
        .collect();

    Ok(BoundReport {
        bounds: BoundValues {
            H_first: h_first,
            H_second: h_second,
            H_joint: h_joint,
            D_rho: d_rho_c,
            D1: d1,
            D2: d2,
            c_maassen_uffink: c,
            srinivas_bound: srinivas,
            luders_joint_bound: joint.bound,
        },
        auxiliary: AuxiliaryValues {
            D_rho_first: d_rho_first,
            D_rho_second: d_rho_second,
            min_D_first: min_d_first,
            max_norm_bound_first: max_norm_first,
            max_overlap: joint.max_overlap,
            max_disturbed_norm: joint.max_disturbed_norm,
        },
        checks,
        violations,
        metadata: ReportMetadata {
            dim: ins_a.dim(),
            n_first: c_obs.n_first(),
            n_second: c_obs.n_second(),
            luders_instrument: is_luders,
            state: state_label.to_string(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instruments::luders;
    use crate::linalg::pauli::*;
    use crate::quantum::{random_mixed_state, random_povm, rng_from_seed};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8};

    // Values frozen from an independent numpy evaluation (np.linalg.eigh + log2).
    const HBIN_COS2_PI8: f64 = 0.600_876_036_692_856_2;
    const NEG_LOG_COS2_PI8: f64 = 0.228_446_696_836_388_07;

    fn z(s: f64) -> Povm {
        Povm::new(vec![
            HermitianOperator::diag(&[(1.0 + s) / 2.0, (1.0 - s) / 2.0]),
            HermitianOperator::diag(&[(1.0 - s) / 2.0, (1.0 + s) / 2.0]),
        ])
        .unwrap()
    }

    fn x(theta: f64, t: f64) -> Povm {
        let id = HermitianOperator::identity(2);
        let n = &sigma_x().scale(theta.sin() * t) + &sigma_z().scale(theta.cos() * t);
        Povm::new(vec![(&id + &n).scale(0.5), (&id - &n).scale(0.5)]).unwrap()
    }

    fn close(a: Bits, b: f64, tol: f64) -> bool {
        (a.value() - b).abs() <= tol
    }

    #[test]
    fn h_values() {
        assert_eq!(h(0.0).unwrap(), Bits::ZERO);
        assert_eq!(h(1.0).unwrap(), Bits::ZERO);
        assert!(close(h(0.5).unwrap(), 0.5, 1e-15));
        assert!(close(
            h(0.853_553_390_593_274).unwrap(),
            0.194_991_452_654_532_74,
            1e-12
        ));
        assert!(h(1.5).is_err());
        assert!(h(-0.1).is_err());
        assert_eq!(h(-5e-10).unwrap(), Bits::ZERO);
    }

    #[test]
    fn entropy_values() {
        let p = |v: Vec<f64>| ProbabilityDistribution::new(v.clone(), vec![String::new(); v.len()]).unwrap();
        assert_eq!(shannon_entropy(&p(vec![1.0, 0.0])), Bits::ZERO);
        assert!(close(shannon_entropy(&p(vec![0.5, 0.5])), 1.0, 1e-15));
        assert!(close(shannon_entropy(&p(vec![0.25; 4])), 2.0, 1e-15));

        assert!(close(binary_entropy(0.5).unwrap(), 1.0, 1e-15));
        assert_eq!(binary_entropy(0.0).unwrap(), Bits::ZERO);
        assert_eq!(binary_entropy(1.0).unwrap(), Bits::ZERO);
        assert!(close(
            binary_entropy((1.0 + FRAC_1_SQRT_2) / 2.0).unwrap(),
            HBIN_COS2_PI8,
            1e-12
        ));
        assert!(binary_entropy(2.0).is_err());
    }

    #[test]
    fn device_uncertainty_examples() {
        let rho = random_mixed_state(2, 4);
        assert!(close(device_uncertainty(&z(1.0), &rho).unwrap(), 0.0, 1e-15));

        // A_i = λ_i I
        let lambdas = [0.2, 0.3, 0.5];
        let trivial = Povm::new(
            lambdas
                .iter()
                .map(|&l| HermitianOperator::identity(3).scale(l))
                .collect(),
        )
        .unwrap();
        let rho3 = random_mixed_state(3, 1);
        let d = device_uncertainty(&trivial, &rho3).unwrap();
        let hp: f64 = lambdas.iter().map(|&l| -l * f64::log2(l)).sum();
        assert!(close(d, hp, 1e-12));
        let p = outcome_distribution(&trivial, &rho3).unwrap();
        assert!(close(shannon_entropy(&p), d.value(), 1e-12));

        for seed in 0..5 {
            let d = device_uncertainty(&z(FRAC_1_SQRT_2), &random_mixed_state(2, seed)).unwrap();
            assert!(close(d, HBIN_COS2_PI8, 1e-12));
        }
        assert!(device_uncertainty(&z(1.0), &rho3)
            .unwrap_err()
            .is_dimension_mismatch());
    }

    #[test]
    fn unsharpness_operator_examples() {
        assert!(unsharpness_operator(&z(1.0)).matrix().max_abs() < 1e-15);
        let s = 0.35;
        let hb = binary_entropy((1.0 + s) / 2.0).unwrap().value();
        let op = unsharpness_operator(&z(s));
        assert!(op.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale(hb)) < 1e-14);
        let half = HermitianOperator::identity(2).scale(0.5);
        let op = unsharpness_operator(&Povm::new(vec![half.clone(), half]).unwrap());
        assert!(op.matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn min_device_uncertainty_examples() {
        assert_eq!(min_device_uncertainty(&z(1.0)), Bits::ZERO);
        assert!(close(
            min_device_uncertainty(&z(FRAC_1_SQRT_2)),
            HBIN_COS2_PI8,
            1e-12
        ));
        let c = overall_observable(&luders(&z(1.0)).unwrap(), &x(FRAC_PI_4, 1.0)).unwrap();
        assert!(close(min_device_uncertainty(c.povm()), HBIN_COS2_PI8, 1e-12));
    }

    #[test]
    fn incompatibility_examples() {
        assert!(close(incompatibility_mu(&z(1.0), &z(1.0)).unwrap(), 0.0, 1e-15));
        assert!(close(
            incompatibility_mu(&z(1.0), &x(std::f64::consts::FRAC_PI_2, 1.0)).unwrap(),
            1.0,
            1e-12
        ));
        assert!(close(
            incompatibility_mu(&z(1.0), &x(FRAC_PI_4, 1.0)).unwrap(),
            NEG_LOG_COS2_PI8,
            1e-12
        ));
    }

    #[test]
    fn d1_examples() {
        let lz = luders(&z(1.0)).unwrap();
        assert!(close(bound_d1(&lz, &x(0.0, 1.0)).unwrap(), 0.0, 1e-12));
        assert!(close(
            bound_d1(&lz, &x(std::f64::consts::FRAC_PI_2, 1.0)).unwrap(),
            1.0,
            1e-12
        ));
        let d1 = bound_d1(&lz, &x(FRAC_PI_4, 1.0)).unwrap();
        assert!(close(d1, HBIN_COS2_PI8, 1e-12));
        assert!(d1.value() > NEG_LOG_COS2_PI8);
    }

    #[test]
    fn d2_examples() {
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert!(close(
            bound_d2(&luders(&z(1.0)).unwrap(), &x(0.0, 1.0)).unwrap(),
            0.0,
            1e-12
        ));
        let d2 = bound_d2(&luders(&z(FRAC_1_SQRT_2)).unwrap(), &x(half_pi, 1.0)).unwrap();
        assert!(close(d2, 2.0 * HBIN_COS2_PI8, 1e-12));
        assert!(close(
            bound_d2(&luders(&z(1.0)).unwrap(), &x(half_pi, 1.0)).unwrap(),
            1.0,
            1e-12
        ));
    }

    #[test]
    fn srinivas_examples() {
        let e = |k| basis(2, k);
        assert!(close(
            srinivas_bound(&[e(0), e(1)], &[e(0), e(1)]).unwrap(),
            0.0,
            1e-15
        ));
        let r = FRAC_1_SQRT_2;
        let plus = vec![Complex64::new(r, 0.0), Complex64::new(r, 0.0)];
        let minus = vec![Complex64::new(r, 0.0), Complex64::new(-r, 0.0)];
        assert!(close(
            srinivas_bound(&[e(0), e(1)], &[plus, minus]).unwrap(),
            1.0,
            1e-14
        ));
        let (c, s) = (FRAC_PI_8.cos(), FRAC_PI_8.sin());
        let b = vec![
            vec![Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
            vec![Complex64::new(-s, 0.0), Complex64::new(c, 0.0)],
        ];
        assert!(close(
            srinivas_bound(&[e(0), e(1)], &b).unwrap(),
            HBIN_COS2_PI8,
            1e-12
        ));
        let bad = vec![e(0), e(0)];
        assert!(srinivas_bound(&bad, &b).is_err());
    }

    #[test]
    fn luders_joint_examples() {
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert!(close(
            luders_joint_bound(&z(1.0), &z(1.0)).unwrap().bound,
            0.0,
            1e-15
        ));
        let j = luders_joint_bound(&z(1.0), &x(half_pi, 1.0)).unwrap();
        assert!(close(j.bound, 1.0, 1e-12));
        assert!((j.max_disturbed_norm - 0.5).abs() < 1e-12);
        let j = luders_joint_bound(&z(FRAC_1_SQRT_2), &x(half_pi, 1.0)).unwrap();
        assert!(close(j.bound, NEG_LOG_COS2_PI8, 1e-12));
        assert!((j.max_disturbed_norm - (1.0 + FRAC_1_SQRT_2) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn report_mub_mixed() {
        let r = full_report(
            &luders(&z(1.0)).unwrap(),
            &x(std::f64::consts::FRAC_PI_2, 1.0),
            &DensityMatrix::maximally_mixed(2),
        )
        .unwrap();
        assert!(r.is_consistent(), "{:?}", r.violations);
        assert!(close(r.bounds.H_joint, 2.0, 1e-12));
        assert!(close(r.bounds.D_rho, 1.0, 1e-12));
        assert!(close(r.bounds.D1, 1.0, 1e-12));
        assert!(close(r.bounds.c_maassen_uffink, 1.0, 1e-12));
        assert!(close(r.bounds.D2, 1.0, 1e-12));
        assert!(close(r.bounds.srinivas_bound.unwrap(), 1.0, 1e-12));
        assert!(r.metadata.luders_instrument);
        assert_eq!(r.checks.len(), CHECK_NAMES.len());
    }

    #[test]
    fn report_commuting_sharp() {
        let r = full_report(
            &luders(&z(1.0)).unwrap(),
            &x(0.0, 1.0),
            &random_mixed_state(2, 12),
        )
        .unwrap();
        assert!(r.is_consistent());
        for v in [r.bounds.D1, r.bounds.D2, r.bounds.c_maassen_uffink] {
            assert!(close(v, 0.0, 1e-12));
        }
    }

    #[test]
    fn report_unsharp_first() {
        let r = full_report(
            &luders(&z(FRAC_1_SQRT_2)).unwrap(),
            &x(std::f64::consts::FRAC_PI_2, 1.0),
            &DensityMatrix::maximally_mixed(2),
        )
        .unwrap();
        assert!(r.is_consistent());
        assert!(close(r.bounds.H_first + r.bounds.H_second, 2.0, 1e-12));
        assert!(close(
            r.auxiliary.D_rho_first + r.auxiliary.D_rho_second,
            2.0 * HBIN_COS2_PI8,
            1e-12
        ));
        assert!(close(r.bounds.D2, 2.0 * HBIN_COS2_PI8, 1e-12));
        assert!(close(r.bounds.luders_joint_bound, NEG_LOG_COS2_PI8, 1e-12));
        assert!(r.bounds.srinivas_bound.is_none());
        let json = serde_json::to_value(&r).unwrap();
        for key in [
            "H_first",
            "H_second",
            "H_joint",
            "D_rho",
            "D1",
            "D2",
            "c_maassen_uffink",
            "srinivas_bound",
            "luders_joint_bound",
        ] {
            assert!(json["bounds"].get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn non_luders_skips_c_comparison() {
        let lud = luders(&z(0.5)).unwrap();
        let kraus = (0..2)
            .map(|i| vec![sigma_x().matrix() * &lud.kraus(i)[0]])
            .collect();
        let ins = Instrument::new(2, kraus).unwrap();
        let r = full_report(&ins, &x(0.7, 0.9), &random_mixed_state(2, 3)).unwrap();
        assert!(!r.metadata.luders_instrument);
        assert!(r.checks.iter().all(|c| c.name != "D1 >= c"));
        assert!(r.is_consistent());
    }

    #[test]
    fn unsharpness_operator_linearity() {
        let mut rng = rng_from_seed(19);
        for seed in 0..50 {
            let dim = 2 + (seed % 3) as usize;
            let a = random_povm(dim, 3, &mut rng);
            let rho = random_mixed_state(dim, seed);
            let lhs = unsharpness_operator(&a).expectation(rho.op());
            let rhs = device_uncertainty(&a, &rho).unwrap().value();
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }
}
