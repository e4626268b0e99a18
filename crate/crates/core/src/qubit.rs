//! Closed forms for the spin-½ family: an unsharp σ_z measurement Z(s)
//! followed by an unsharp spin measurement X(θ, t) along
//! sinθ·x̂ + cosθ·ẑ.
//!
//! The scalar formulas here deliberately avoid the generic eigen-solver
//! pipeline so they can serve as an independent cross-check of it.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::instruments::MeasuringProcess;
use crate::linalg::{pauli, ComplexMatrix, HermitianOperator};
use crate::quantum::Povm;
use crate::successive::OverallObservable;
use crate::uncertainty::Bits;

/// Unsharpness of Z, unsharpness of X, and the angle between the two spin axes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitParams {
    pub s: f64,
    pub t: f64,
    pub theta: f64,
}

impl QubitParams {
    pub fn new(s: f64, t: f64, theta: f64) -> Result<Self> {
        check_unit("s", s)?;
        check_unit("t", t)?;
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::ParameterRange {
                name: "theta",
                value: theta,
                range: "[0, π]",
            });
        }
        Ok(QubitParams { s, t, theta })
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::ParameterRange {
            name,
            value,
            range: "[0, 1]",
        });
    }
    Ok(())
}

/// (I + a·x σ_x + a·z σ_z)/c style combinations: `id·I + x·σ_x + z·σ_z`.
fn pauli_combo(id: f64, x: f64, z: f64) -> HermitianOperator {
    let m = ComplexMatrix::from_real_rows(&[&[id + z, x], &[x, id - z]]).unwrap();
    HermitianOperator::symmetrized(m)
}

/// Z_± = (I ± s σ_z)/2.
pub fn z_povm(s: f64) -> Result<Povm> {
    check_unit("s", s)?;
    Povm::with_labels(
        vec![pauli_combo(0.5, 0.0, s / 2.0), pauli_combo(0.5, 0.0, -s / 2.0)],
        vec!["+".into(), "-".into()],
    )
}

/// X_±(θ) = (I ± t(sinθ σ_x + cosθ σ_z))/2.
pub fn x_povm(theta: f64, t: f64) -> Result<Povm> {
    QubitParams::new(1.0, t, theta)?;
    let (sx, sz) = (t * theta.sin() / 2.0, t * theta.cos() / 2.0);
    Povm::with_labels(
        vec![pauli_combo(0.5, sx, sz), pauli_combo(0.5, -sx, -sz)],
        vec!["+".into(), "-".into()],
    )
}

/// The four elements S_{++}, S_{+−}, S_{−+}, S_{−−} of the overall
/// observable for Lüders Z(s) followed by X(θ, t), written out explicitly.
pub fn overall_s(s: f64, t: f64, theta: f64) -> Result<OverallObservable> {
    let p = QubitParams::new(s, t, theta)?;
    let (sin, cos) = p.theta.sin_cos();
    let off = (1.0 - p.s * p.s).sqrt() * p.t * sin;
    let same = 1.0 + p.s * p.t * cos;
    let diff = 1.0 - p.s * p.t * cos;
    let elements = vec![
        pauli_combo(same / 4.0, off / 4.0, (p.s + p.t * cos) / 4.0),
        pauli_combo(diff / 4.0, -off / 4.0, (p.s - p.t * cos) / 4.0),
        pauli_combo(diff / 4.0, off / 4.0, -(p.s - p.t * cos) / 4.0),
        pauli_combo(same / 4.0, -off / 4.0, -(p.s + p.t * cos) / 4.0),
    ];
    let labels = ["+,+", "+,-", "-,+", "-,-"]
        .iter()
        .map(|l| l.to_string())
        .collect();
    OverallObservable::from_povm(Povm::with_labels(elements, labels)?, 2, 2)
}

fn h(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

fn h_bin(q: f64) -> f64 {
    h(q) + h(1.0 - q)
}

/// 𝒟₁ = Σ_{μ,ν=±1} h(¼(1 + μ st cosθ + ν √(s² + t² + 2μ st cosθ + s²t²(cos²θ − 1)))).
pub fn d1_closed(s: f64, t: f64, theta: f64) -> Result<Bits> {
    let p = QubitParams::new(s, t, theta)?;
    let cos = p.theta.cos();
    let st = p.s * p.t;
    let mut total = 0.0;
    for mu in [1.0, -1.0] {
        let radicand = p.s * p.s + p.t * p.t + 2.0 * mu * st * cos + st * st * (cos * cos - 1.0);
        let root = radicand.max(0.0).sqrt();
        for nu in [1.0, -1.0] {
            total += h(0.25 * (1.0 + mu * st * cos + nu * root));
        }
    }
    Ok(Bits::new(total))
}

/// c = −log₂(¼(1 + st|cosθ| + √(s² + t² + 2st|cosθ| + s²t²(cos²θ − 1)))).
pub fn c_closed(s: f64, t: f64, theta: f64) -> Result<Bits> {
    let p = QubitParams::new(s, t, theta)?;
    let cos = p.theta.cos();
    let st = p.s * p.t;
    let radicand = p.s * p.s + p.t * p.t + 2.0 * st * cos.abs() + st * st * (cos * cos - 1.0);
    let largest = 0.25 * (1.0 + st * cos.abs() + radicand.max(0.0).sqrt());
    Ok(Bits::new(-largest.log2()))
}

/// (ℂ², |φ⟩, CNOT, σ_z) with |φ⟩ = √((1+s)/2)|0⟩ + √((1−s)/2)|1⟩: the probe
/// dilation of the Lüders instrument of Z(s).
pub fn cnot_measuring_process(s: f64) -> Result<MeasuringProcess> {
    check_unit("s", s)?;
    let phi = vec![
        Complex64::new(((1.0 + s) / 2.0).sqrt(), 0.0),
        Complex64::new(((1.0 - s) / 2.0).sqrt(), 0.0),
    ];
    let cnot = ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
    ])?;
    let sigma_z_pvm = Povm::new(vec![
        HermitianOperator::projector(&pauli::basis(2, 0)),
        HermitianOperator::projector(&pauli::basis(2, 1)),
    ])?;
    MeasuringProcess::new(2, 2, phi, cnot, sigma_z_pvm)
}

/// X′_± = (I ± √(1−s²) σ_x)/2, the sharp σ_x measurement as disturbed by a
/// preceding Lüders Z(s).
pub fn x_prime(s: f64) -> Result<Povm> {
    check_unit("s", s)?;
    x_povm(FRAC_PI_2, (1.0 - s * s).sqrt())
}

/// Joint measurability of two unbiased orthogonal qubit observables: s² + t² ≤ 1.
pub fn jointly_measurable_unbiased(s: f64, t: f64) -> bool {
    s * s + t * t <= 1.0 + 1e-12
}

/// Device uncertainties of Z(s) and X′(s), both state-independent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tradeoff {
    pub d_z: Bits,
    pub d_xprime: Bits,
    pub total: Bits,
}

pub fn tradeoff(s: f64) -> Result<Tradeoff> {
    check_unit("s", s)?;
    let d_z = h_bin((1.0 + s) / 2.0);
    let d_xprime = h_bin((1.0 + (1.0 - s * s).sqrt()) / 2.0);
    Ok(Tradeoff {
        d_z: Bits::new(d_z),
        d_xprime: Bits::new(d_xprime),
        total: Bits::new(d_z + d_xprime),
    })
}
