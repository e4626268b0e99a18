//! Dense complex matrix kernel for small operators.
//!
//! Everything here works on square row-major matrices of dimension up to a
//! few dozen. Tensor products are always ordered system ⊗ probe.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used for Hermiticity, degeneracy grouping and clamping.
pub const TOL: f64 = 1e-9;

const C0: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const C1: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// A square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![C0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C1;
        }
        m
    }

    /// Builds a matrix from a flat row-major vector of `dim²` entries.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Shape(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(ComplexMatrix { dim, data })
    }

    /// Builds a matrix from nested rows. Every row must have as many entries as there are rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Shape(format!(
                    "row {r} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// The rank-one operator |v⟩⟨v|.
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference magnitude between two matrices of equal dimension.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in max_abs_diff");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude of `M − M†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn mat_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch in mat_vec");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// tr[self · other] without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in trace_product");
        let n = self.dim;
        let mut acc = C0;
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for row in self.data.chunks(self.dim.max(1)) {
            let cells: Vec<String> = row.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix sum");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix difference");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// A matrix that equals its adjoint up to `1e-9 · max(1, ‖M‖_max)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    /// Validates Hermiticity and stores the exactly symmetrized matrix `(M + M†)/2`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        let scale = matrix.max_abs().max(1.0);
        if defect > TOL * scale {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self::symmetrized(matrix))
    }

    /// Takes the Hermitian part of `matrix` without validation. Meant for
    /// matrices that are Hermitian by construction (e.g. `K† E K`).
    pub fn symmetrized(matrix: ComplexMatrix) -> Self {
        let adj = matrix.adjoint();
        HermitianOperator {
            matrix: (&matrix + &adj).scale(0.5),
        }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::zeros(dim),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::diag(values),
        }
    }

    pub fn projector(v: &[Complex64]) -> Self {
        Self::symmetrized(ComplexMatrix::outer(v))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn scale(&self, factor: f64) -> Self {
        HermitianOperator {
            matrix: self.matrix.scale(factor),
        }
    }

    /// Real part of tr[self · other]; exact for two Hermitian operators.
    pub fn expectation(&self, other: &HermitianOperator) -> f64 {
        self.matrix.trace_product(&other.matrix).re
    }
}

impl<'a> Add<&'a HermitianOperator> for &'a HermitianOperator {
    type Output = HermitianOperator;

    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl<'a> Sub<&'a HermitianOperator> for &'a HermitianOperator {
    type Output = HermitianOperator;

    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

/// Eigenvalues (descending), matching orthonormal eigenvectors, and the
/// grouping of indices into numerically degenerate eigenspaces.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<Complex64>>,
    pub eigenspaces: Vec<Vec<usize>>,
}

impl SpectralDecomposition {
    /// Orthogonal projector onto the eigenspace with the given group index.
    pub fn eigenspace_projector(&self, group: usize) -> HermitianOperator {
        let dim = self.eigenvectors.first().map_or(0, Vec::len);
        let mut acc = ComplexMatrix::zeros(dim);
        for &k in &self.eigenspaces[group] {
            acc = &acc + &ComplexMatrix::outer(&self.eigenvectors[k]);
        }
        HermitianOperator::symmetrized(acc)
    }

    /// Mean eigenvalue of an eigenspace group.
    pub fn eigenspace_value(&self, group: usize) -> f64 {
        let idx = &self.eigenspaces[group];
        idx.iter().map(|&k| self.eigenvalues[k]).sum::<f64>() / idx.len() as f64
    }

    /// Σ_k f(λ_k) |v_k⟩⟨v_k|.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let dim = self.eigenvectors.first().map_or(0, Vec::len);
        let mut acc = ComplexMatrix::zeros(dim);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let w = f(*lambda);
            if w != 0.0 {
                acc = &acc + &ComplexMatrix::outer(v).scale(w);
            }
        }
        HermitianOperator::symmetrized(acc)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

const MAX_SWEEPS: usize = 100;

/// Diagonalizes a Hermitian operator with cyclic complex Jacobi rotations.
pub fn hermitian_eig(op: &HermitianOperator) -> SpectralDecomposition {
    let n = op.dim();
    let mut a = op.matrix().clone();
    let mut v = ComplexMatrix::identity(n);

    let frob: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let floor = 1e-3 * f64::EPSILON * frob;

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off.sqrt() <= floor {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&k| (0..n).map(|r| v[(r, k)]).collect())
        .collect();

    let mut eigenspaces: Vec<Vec<usize>> = Vec::new();
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        match eigenspaces.last_mut() {
            Some(group) if (eigenvalues[*group.last().unwrap()] - lambda).abs() <= TOL => group.push(k),
            _ => eigenspaces.push(vec![k]),
        }
    }

    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        eigenspaces,
    }
}

/// One Jacobi rotation zeroing entry (p, q): A ← G† A G, V ← V G with
/// G = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase = apq / g;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = -phase.conj() * s;
    let gqq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = C0;
    a[(q, p)] = C0;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

/// Largest singular value, via the largest eigenvalue of M†M.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    let gram = HermitianOperator::symmetrized(&m.adjoint() * m);
    hermitian_eig(&gram).max_eigenvalue().max(0.0).sqrt()
}

/// Relative eigenvalue level below which `positive_sqrt` treats an eigenvalue as zero.
pub const SQRT_NOISE_FLOOR: f64 = 1e-14;

/// Σ_k √max(λ_k, 0) |v_k⟩⟨v_k| for a positive semidefinite operator.
pub fn positive_sqrt(op: &HermitianOperator) -> Result<HermitianOperator> {
    let spec = hermitian_eig(op);
    let min = spec.min_eigenvalue();
    if min < -TOL {
        return Err(Error::NotPositive {
            eigenvalue: min,
            what: "operator passed to positive_sqrt".into(),
        });
    }
    // Eigenvalues at rounding level are zeroed: √ would lift 1e-17 noise to 3e-9.
    let floor = SQRT_NOISE_FLOOR * spec.max_eigenvalue().abs().max(1.0);
    Ok(spec.map_eigenvalues(|l| if l <= floor { 0.0 } else { l.sqrt() }))
}

/// Kronecker product `m ⊗ n`, first factor indexing the outer blocks.
pub fn tensor(m: &ComplexMatrix, n: &ComplexMatrix) -> ComplexMatrix {
    let (dm, dn) = (m.dim(), n.dim());
    let d = dm * dn;
    let mut out = ComplexMatrix::zeros(d);
    for i in 0..dm {
        for j in 0..dm {
            let a = m[(i, j)];
            if a == C0 {
                continue;
            }
            for k in 0..dn {
                for l in 0..dn {
                    out[(i * dn + k, j * dn + l)] = a * n[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two vectors, first factor outer.
pub fn tensor_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Traces out the probe (second) factor of a system ⊗ probe operator.
pub fn partial_trace_probe(m: &ComplexMatrix, dim_sys: usize, dim_probe: usize) -> Result<ComplexMatrix> {
    if m.dim() != dim_sys * dim_probe {
        return Err(Error::DimensionMismatch {
            expected: dim_sys * dim_probe,
            found: m.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(dim_sys);
    for i in 0..dim_sys {
        for j in 0..dim_sys {
            out[(i, j)] = (0..dim_probe)
                .map(|k| m[(i * dim_probe + k, j * dim_probe + k)])
                .sum();
        }
    }
    Ok(out)
}

/// Pauli matrices and the qubit basis, used throughout tests and the qubit models.
pub mod pauli {
    use super::{ComplexMatrix, HermitianOperator};
    use num_complex::Complex64;

    pub fn sigma_x() -> HermitianOperator {
        HermitianOperator::symmetrized(ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap())
    }

    pub fn sigma_y() -> HermitianOperator {
        let i = Complex64::new(0.0, 1.0);
        let zero = Complex64::new(0.0, 0.0);
        HermitianOperator::symmetrized(ComplexMatrix::from_rows(&[vec![zero, -i], vec![i, zero]]).unwrap())
    }

    pub fn sigma_z() -> HermitianOperator {
        HermitianOperator::diag(&[1.0, -1.0])
    }

    /// Computational basis vector e_k in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[k] = Complex64::new(1.0, 0.0);
        v
    }
}
