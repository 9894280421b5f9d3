//! Dense complex kernels: local operators, statevectors over an explicit
//! vertex ordering, Hermitian eigendecomposition and matrix exponentials.
//!
//! Basis convention: for a vertex ordering `(v_0, …, v_k)` the amplitude of
//! the basis state `|i_0 … i_k⟩` sits at the mixed-radix index with `v_0` as
//! the most significant digit. Operator matrices use the same convention over
//! their support.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypergraph::MultiHypergraph;

pub type Matrix = DMatrix<Complex64>;

pub const ADMISSION_TOL: f64 = 1e-12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A dense square matrix acting on the tensor product of its support.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperator {
    support: Vec<usize>,
    matrix: Matrix,
}

impl LocalOperator {
    /// Checks that the matrix is square with side equal to the product of
    /// the support's local dimensions in `g`.
    pub fn new(g: &MultiHypergraph, support: Vec<usize>, matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::validation(format!(
                "operator matrix is {}x{}, not square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let mut dim = 1usize;
        for &v in &support {
            if v >= g.order() {
                return Err(Error::validation(format!("operator support index {v} out of range")));
            }
            dim *= g.dim(v);
        }
        if matrix.nrows() != dim {
            let names: Vec<&str> = support.iter().map(|&v| g.vertices()[v].id.as_str()).collect();
            return Err(Error::validation(format!(
                "operator on {names:?} has dimension {} but the support needs {dim}",
                matrix.nrows()
            )));
        }
        Ok(LocalOperator { support, matrix })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `M - I` on the same support.
    pub fn minus_identity(&self) -> LocalOperator {
        LocalOperator {
            support: self.support.clone(),
            matrix: &self.matrix - Matrix::identity(self.dim(), self.dim()),
        }
    }

    pub fn spectral_norm(&self) -> f64 {
        norm_of(&self.matrix)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let d = self.dim();
        max_abs(&(self.matrix.adjoint() * &self.matrix - Matrix::identity(d, d))) <= tol
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        max_abs(&(&self.matrix - self.matrix.adjoint())) <= tol
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.is_self_adjoint(tol)
            && hermitian_eigen(&self.matrix)
                .map(|e| e.values.iter().all(|&l| l >= -tol))
                .unwrap_or(false)
    }

    /// Trace divided by dimension.
    pub fn normalized_trace(&self) -> Complex64 {
        self.matrix.trace() / self.dim() as f64
    }
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn norm_of(m: &Matrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Largest singular value.
pub fn spectral_norm(m: &Matrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::validation(format!(
            "spectral norm of a {}x{} matrix: operator must be square",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(norm_of(m))
}

pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, matching `values`.
    pub vectors: Matrix,
}

/// Eigendecomposition of the Hermitian part `(H + H†)/2`.
pub fn hermitian_eigen(h: &Matrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::validation("eigendecomposition of a non-square matrix"));
    }
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if values.iter().any(|l| !l.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    Ok(HermitianEigen {
        values,
        vectors: eig.eigenvectors,
    })
}

/// Eigenvalues of the Hermitian part `(H + H†)/2`, without eigenvectors.
pub fn hermitian_eigenvalues(h: &Matrix) -> Result<Vec<f64>> {
    if !h.is_square() {
        return Err(Error::validation("eigendecomposition of a non-square matrix"));
    }
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    if values.iter().any(|l| !l.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    Ok(values)
}

/// `exp(scale * H)` for Hermitian `H`, via eigendecomposition; `scale` may be
/// complex.
pub fn exp_hermitian(h: &Matrix, scale: Complex64) -> Result<Matrix> {
    let eig = hermitian_eigen(h)?;
    let n = h.nrows();
    let mut scaled = eig.vectors.clone();
    for (j, &l) in eig.values.iter().enumerate() {
        let f = (scale * l).exp();
        for i in 0..n {
            scaled[(i, j)] *= f;
        }
    }
    Ok(scaled * eig.vectors.adjoint())
}

/// Single-site Pauli matrix for `I`, `X`, `Y` or `Z`.
pub fn pauli(c: char) -> Result<Matrix> {
    let m = match c {
        'I' => [ONE, ZERO, ZERO, ONE],
        'X' => [ZERO, ONE, ONE, ZERO],
        'Y' => [ZERO, -I, I, ZERO],
        'Z' => [ONE, ZERO, ZERO, -ONE],
        other => {
            return Err(Error::validation(format!(
                "unknown Pauli `{other}` (expected I, X, Y or Z)"
            )))
        }
    };
    Ok(Matrix::from_row_slice(2, 2, &m))
}

/// Tensor product of single-site Paulis, first character most significant.
pub fn pauli_string(s: &str) -> Result<Matrix> {
    if s.is_empty() {
        return Err(Error::validation("empty Pauli string"));
    }
    let mut acc = Matrix::identity(1, 1);
    for c in s.chars() {
        acc = acc.kronecker(&pauli(c)?);
    }
    Ok(acc)
}

/// `exp(-i·angle·P)` for a Pauli string `P`; exact because `P² = I`.
pub fn pauli_rotation(angle: f64, s: &str) -> Result<Matrix> {
    let p = pauli_string(s)?;
    let d = p.nrows();
    Ok(Matrix::identity(d, d) * Complex64::new(angle.cos(), 0.0) - p * Complex64::new(0.0, angle.sin()))
}

/// `I + c·P` for a Pauli string `P`.
pub fn identity_plus(c: Complex64, s: &str) -> Result<Matrix> {
    let p = pauli_string(s)?;
    let d = p.nrows();
    Ok(Matrix::identity(d, d) + p * c)
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

/// Amplitudes over an explicit ordered list of vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    order: Vec<usize>,
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` over `order`; `dims[k]` is the local dimension of `order[k]`.
    pub fn zero(order: Vec<usize>, dims: Vec<usize>) -> Self {
        assert_eq!(order.len(), dims.len());
        let n: usize = dims.iter().product();
        let mut amps = vec![ZERO; n];
        amps[0] = ONE;
        StateVector { order, dims, amps }
    }

    /// `|0…0⟩` over `order` with dimensions read from `g`.
    pub fn zero_on(g: &MultiHypergraph, order: Vec<usize>) -> Self {
        let dims = order.iter().map(|&v| g.dim(v)).collect();
        StateVector::zero(order, dims)
    }

    pub fn basis(order: Vec<usize>, dims: Vec<usize>, index: usize) -> Self {
        let mut s = StateVector::zero(order, dims);
        s.amps[0] = ZERO;
        s.amps[index] = ONE;
        s
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply(&mut self, op: &LocalOperator) -> Result<()> {
        self.apply_matrix(op.support(), op.matrix())
    }

    /// `ψ ← (M - I)ψ` for the operator's matrix `M`.
    pub fn apply_minus_identity(&mut self, op: &LocalOperator) -> Result<()> {
        let before = self.amps.clone();
        self.apply(op)?;
        for (a, b) in self.amps.iter_mut().zip(before) {
            *a -= b;
        }
        Ok(())
    }

    /// Applies `m` to the tensor factors listed in `support`, leaving all
    /// other factors untouched.
    pub fn apply_matrix(&mut self, support: &[usize], m: &Matrix) -> Result<()> {
        let n = self.order.len();
        let mut strides = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        let mut pos = Vec::with_capacity(support.len());
        for &v in support {
            let p = self
                .order
                .iter()
                .position(|&u| u == v)
                .ok_or_else(|| Error::validation(format!("operator acts on vertex {v} outside the state")))?;
            pos.push(p);
        }
        let local_dims: Vec<usize> = pos.iter().map(|&p| self.dims[p]).collect();
        let d: usize = local_dims.iter().product();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::validation(format!(
                "operator dimension {} does not match support dimension {d}",
                m.nrows()
            )));
        }

        // Offset of each local basis index relative to a base index.
        let mut offsets = vec![0usize; d];
        for (l, off) in offsets.iter_mut().enumerate() {
            let mut rem = l;
            for k in (0..pos.len()).rev() {
                let digit = rem % local_dims[k];
                rem /= local_dims[k];
                *off += digit * strides[pos[k]];
            }
        }

        let mut gathered = vec![ZERO; d];
        let mut out = vec![ZERO; d];
        for base in 0..self.amps.len() {
            if pos.iter().any(|&p| !(base / strides[p]).is_multiple_of(self.dims[p])) {
                continue;
            }
            for (g, &off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amps[base + off];
            }
            for (r, o) in out.iter_mut().enumerate() {
                let mut acc = ZERO;
                for (c, g) in gathered.iter().enumerate() {
                    acc += m[(r, c)] * g;
                }
                *o = acc;
            }
            for (o, &off) in out.iter().zip(&offsets) {
                self.amps[base + off] = *o;
            }
        }
        Ok(())
    }
}

/// Matrix of `m` (acting on `support`) on the full space over `order`.
pub fn embed(support: &[usize], m: &Matrix, order: &[usize], dims: &[usize]) -> Result<Matrix> {
    let n: usize = dims.iter().product();
    let mut out = Matrix::zeros(n, n);
    for col in 0..n {
        let mut s = StateVector::basis(order.to_vec(), dims.to_vec(), col);
        s.apply_matrix(support, m)?;
        for (row, a) in s.amps.iter().enumerate() {
            out[(row, col)] = *a;
        }
    }
    Ok(out)
}
