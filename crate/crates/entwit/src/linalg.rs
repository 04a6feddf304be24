//! Dense complex matrix arithmetic and spectral primitives.
//!
//! Everything operates on [`CMatrix`] (dynamically sized, `Complex<f64>`
//! entries). Eigen- and singular-value decompositions are delegated to
//! nalgebra; Hermitian inputs are symmetrised as `(M + M†)/2` before
//! eigensolving to suppress roundoff drift, and results are deterministic
//! for a fixed input.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex<f64>;

/// Dense complex matrix, the universal carrier type.
pub type CMatrix = DMatrix<C64>;

/// Real dense matrix (used for real-entried operators such as Choi matrices).
pub type RMatrix = DMatrix<f64>;

/// Complex zero.
pub const C_ZERO: C64 = C64 { re: 0.0, im: 0.0 };
/// Complex one.
pub const C_ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Conjugate transpose.
pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// Kronecker product with the block convention
/// `(A ⊗ B)[(i·rB + k), (j·cB + l)] = A[i,j] · B[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Maximum entrywise deviation from Hermiticity, `max |M - M†|`.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Checks that every entry is finite.
pub fn check_finite(m: &CMatrix) -> Result<()> {
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            let z = m[(row, col)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row, col });
            }
        }
    }
    Ok(())
}

fn require_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

fn require_hermitian(m: &CMatrix, tol: f64) -> Result<()> {
    require_square(m)?;
    let dev = hermiticity_deviation(m);
    if dev > tol {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol,
        });
    }
    Ok(())
}

/// `(M + M†)/2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    let adj = m.adjoint();
    (m + adj).map(|z| z * 0.5)
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The input must be Hermitian within `tol` (max entrywise deviation);
/// it is symmetrised before the eigensolve.
pub fn hermitian_eigenvalues(m: &CMatrix, tol: f64) -> Result<Vec<f64>> {
    require_hermitian(m, tol)?;
    let sym = hermitian_part(m);
    let mut eigs: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| a.total_cmp(b));
    Ok(eigs)
}

/// Minimum eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix, tol: f64) -> Result<f64> {
    Ok(hermitian_eigenvalues(m, tol)?[0])
}

/// Maximum eigenvalue of a Hermitian matrix.
pub fn max_eigenvalue(m: &CMatrix, tol: f64) -> Result<f64> {
    let eigs = hermitian_eigenvalues(m, tol)?;
    Ok(eigs[eigs.len() - 1])
}

/// Singular values, descending; `min(rows, cols)` of them.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut svs: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    svs.sort_by(|a, b| b.total_cmp(a));
    svs
}

/// Trace norm `‖M‖₁ = Tr √(M M†)`, the sum of singular values.
pub fn trace_norm(m: &CMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// Frobenius norm `‖M‖₂ = √Tr[M M†]`.
pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// True iff `M` is Hermitian within `tol` and `λ_min(M) ≥ -tol`.
pub fn is_psd(m: &CMatrix, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(m, tol)? >= -tol)
}

/// Full (possibly complex) spectrum of a real-entried square matrix.
///
/// The matrix may be non-normal; eigenvalues are returned sorted by real
/// part, then imaginary part. Entries must have imaginary part within
/// `entry_tol` of zero — the only non-Hermitian spectra needed here are
/// those of Choi matrices, which are real-entried by construction.
pub fn general_spectrum(m: &CMatrix, entry_tol: f64) -> Result<Vec<C64>> {
    require_square(m)?;
    let max_im = m.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if max_im > entry_tol {
        return Err(Error::DimensionMismatch {
            context: format!(
                "general spectrum supported for real-entried matrices only (max |Im| = {max_im:.3e})"
            ),
        });
    }
    let real = RMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re);
    let mut eigs: Vec<C64> = real.complex_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(eigs)
}

/// Identity matrix of order `n`.
pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Matrix unit `e_ij` of order `n` (1 at `(i,j)`, 0 elsewhere).
pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = C_ONE;
    m
}

/// `Re Tr[A B]`.
pub fn re_trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    (a * b).trace().re
}

/// Builds a complex matrix from a row-major slice of `(re, im)` pairs.
pub fn from_row_major(rows: usize, cols: usize, entries: &[(f64, f64)]) -> Result<CMatrix> {
    if entries.len() != rows * cols {
        return Err(Error::DimensionMismatch {
            context: format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            ),
        });
    }
    let m = CMatrix::from_fn(rows, cols, |i, j| {
        let (re, im) = entries[i * cols + j];
        C64::new(re, im)
    });
    check_finite(&m)?;
    Ok(m)
}

/// Row-major `(re, im)` pairs of a matrix, the inverse of [`from_row_major`].
pub fn to_row_major(m: &CMatrix) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push((z.re, z.im));
        }
    }
    out
}

/// Convenience constructor from real entries, row-major.
pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count mismatch");
    CMatrix::from_fn(rows, cols, |i, j| C64::new(entries[i * cols + j], 0.0))
}
