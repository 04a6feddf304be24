//! Bipartite density matrices and the two structural rearrangements
//! (partial transpose on B, realignment), plus canonical operator bases and
//! correlation matrices.
//!
//! The composite index convention is fixed as `r = i·dB + k` for
//! `i ∈ A, k ∈ B` (A-major). Every rearrangement below is stated in this
//! convention and the tests pin it.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::DEFAULT_TOL;

/// A density matrix tagged with its subsystem dimensions.
///
/// The checked constructor validates Hermiticity and unit trace strictly and
/// positivity down to `-tol`; [`BipartiteState::new_unchecked`] skips
/// validation for intermediate objects produced by maps, which need not be
/// states.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    rho: CMatrix,
}

impl BipartiteState {
    /// Validating constructor.
    pub fn new(dim_a: usize, dim_b: usize, rho: CMatrix, tol: f64) -> Result<Self> {
        let n = dim_a * dim_b;
        if dim_a == 0 || dim_b == 0 || rho.nrows() != n || rho.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "state matrix is {}x{}, expected {n}x{n} for dims {dim_a}x{dim_b}",
                    rho.nrows(),
                    rho.ncols()
                ),
            });
        }
        linalg::check_finite(&rho)?;
        let dev = linalg::hermiticity_deviation(&rho);
        if dev > tol {
            return Err(Error::NotAState {
                reason: format!("not Hermitian (deviation {dev:.3e})"),
            });
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > DEFAULT_TOL.max(tol) || tr.im.abs() > DEFAULT_TOL.max(tol) {
            return Err(Error::NotAState {
                reason: format!("trace is {tr}, expected 1"),
            });
        }
        let min_eig = linalg::min_eigenvalue(&rho, tol)?;
        if min_eig < -tol.max(DEFAULT_TOL) {
            return Err(Error::NotAState {
                reason: format!("not positive semi-definite (min eigenvalue {min_eig:.3e})"),
            });
        }
        Ok(Self { dim_a, dim_b, rho })
    }

    /// Constructor without validation. The matrix must still have composite
    /// dimension `dim_a · dim_b`.
    pub fn new_unchecked(dim_a: usize, dim_b: usize, rho: CMatrix) -> Self {
        assert_eq!(rho.nrows(), dim_a * dim_b, "row count mismatch");
        assert_eq!(rho.ncols(), dim_a * dim_b, "col count mismatch");
        Self { dim_a, dim_b, rho }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// Composite dimension `dA · dB`.
    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    /// Partial transpose on subsystem B.
    pub fn partial_transpose_b(&self) -> CMatrix {
        partial_transpose_b(&self.rho, self.dim_a, self.dim_b)
            .expect("state dims are consistent by construction")
    }

    /// Realigned matrix, shape `dA² × dB²`.
    pub fn realigned(&self) -> CMatrix {
        realign(&self.rho, self.dim_a, self.dim_b)
            .expect("state dims are consistent by construction")
    }
}

/// Partial transpose on the B index pair:
/// `out[(i,l),(j,k)] = m[(i,k),(j,l)]`. Hermitian if the input is.
pub fn partial_transpose_b(m: &CMatrix, dim_a: usize, dim_b: usize) -> Result<CMatrix> {
    let n = dim_a * dim_b;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            context: format!(
                "partial transpose: matrix is {}x{}, dims give {n}",
                m.nrows(),
                m.ncols()
            ),
        });
    }
    let mut out = CMatrix::zeros(n, n);
    for i in 0..dim_a {
        for j in 0..dim_a {
            for k in 0..dim_b {
                for l in 0..dim_b {
                    out[(i * dim_b + l, j * dim_b + k)] = m[(i * dim_b + k, j * dim_b + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Realignment: `out[(k·dA + l), (m·dB + n)] = in[(k,m),(l,n)]` with
/// `k,l` A-indices and `m,n` B-indices; output shape `dA² × dB²`.
///
/// Accepts any square matrix of composite dimension (matrix units included),
/// not only states. For product operators, `realign(X ⊗ Y)` is the rank-1
/// outer product of the row vectorisations of `X` and `Y`.
pub fn realign(m: &CMatrix, dim_a: usize, dim_b: usize) -> Result<CMatrix> {
    let n = dim_a * dim_b;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            context: format!(
                "realign: matrix is {}x{}, dims give {n}",
                m.nrows(),
                m.ncols()
            ),
        });
    }
    let mut out = CMatrix::zeros(dim_a * dim_a, dim_b * dim_b);
    for k in 0..dim_a {
        for l in 0..dim_a {
            for mm in 0..dim_b {
                for nn in 0..dim_b {
                    out[(k * dim_a + l, mm * dim_b + nn)] = m[(k * dim_b + mm, l * dim_b + nn)];
                }
            }
        }
    }
    Ok(out)
}

/// A Hilbert–Schmidt orthonormal operator basis with `G₀ = I/√d` and the
/// remaining elements traceless.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    elements: Vec<CMatrix>,
}

impl OperatorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Generalised Gell-Mann basis of `M_d`, canonically ordered: identity
/// component first, then the `d−1` diagonal elements
/// `D_l = (Σ_{j≤l} e_jj − l·e_{l+1,l+1})/√(l(l+1))`, then the symmetric pairs
/// `(e_jk + e_kj)/√2` for `j<k` lexicographic, then the antisymmetric pairs
/// `(−i·e_jk + i·e_kj)/√2`.
///
/// The elements carry the Hilbert–Schmidt normalisation `Tr[G_a† G_b] = δ_ab`.
pub fn gell_mann_basis(d: usize) -> OperatorBasis {
    assert!(d >= 2, "basis dimension must be at least 2");
    let mut elements = Vec::with_capacity(d * d);
    let scale = 1.0 / (d as f64).sqrt();
    elements.push(linalg::identity(d).map(|z| z * scale));
    for l in 1..d {
        let mut m = CMatrix::zeros(d, d);
        for j in 0..l {
            m[(j, j)] = linalg::C_ONE;
        }
        m[(l, l)] = C64::new(-(l as f64), 0.0);
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        elements.push(m.map(|z| z * norm));
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = CMatrix::zeros(d, d);
            m[(j, k)] = C64::new(inv_sqrt2, 0.0);
            m[(k, j)] = C64::new(inv_sqrt2, 0.0);
            elements.push(m);
        }
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = CMatrix::zeros(d, d);
            m[(j, k)] = C64::new(0.0, -inv_sqrt2);
            m[(k, j)] = C64::new(0.0, inv_sqrt2);
            elements.push(m);
        }
    }
    OperatorBasis { dim: d, elements }
}

/// Correlation matrix `C[a,b] = Tr[ρ · (G_a ⊗ G_b)]`, shape `dA² × dB²`.
///
/// Entries are real within tolerance for Hermitian states and Hermitian
/// bases; the complex carrier is kept for uniformity. The trace is taken by
/// contracting the B factor first, which avoids building the `dA·dB`-sized
/// Kronecker products.
pub fn correlation_matrix(
    state: &BipartiteState,
    basis_a: &OperatorBasis,
    basis_b: &OperatorBasis,
) -> Result<CMatrix> {
    let (da, db) = (state.dim_a(), state.dim_b());
    if basis_a.dim() != da || basis_b.dim() != db {
        return Err(Error::DimensionMismatch {
            context: format!(
                "correlation matrix: basis dims {}x{} vs state dims {}x{}",
                basis_a.dim(),
                basis_b.dim(),
                da,
                db
            ),
        });
    }
    let rho = state.rho();
    let mut c = CMatrix::zeros(basis_a.len(), basis_b.len());
    // Tr[rho (Ga (x) Gb)] = sum_{i,j} Ga[j,i] * T_b[i,j] with
    // T_b[i,j] = sum_{k,l} rho[(i,k),(j,l)] Gb[l,k]
    for (b, gb) in basis_b.elements().iter().enumerate() {
        let mut partial = CMatrix::zeros(da, da);
        for i in 0..da {
            for j in 0..da {
                let mut acc = linalg::C_ZERO;
                for k in 0..db {
                    for l in 0..db {
                        acc += rho[(i * db + k, j * db + l)] * gb[(l, k)];
                    }
                }
                partial[(i, j)] = acc;
            }
        }
        for (a, ga) in basis_a.elements().iter().enumerate() {
            let mut acc = linalg::C_ZERO;
            for i in 0..da {
                for j in 0..da {
                    acc += ga[(j, i)] * partial[(i, j)];
                }
            }
            c[(a, b)] = acc;
        }
    }
    Ok(c)
}

/// Correlation matrix in the canonical Gell-Mann bases of both subsystems.
pub fn canonical_correlation_matrix(state: &BipartiteState) -> CMatrix {
    let ba = gell_mann_basis(state.dim_a());
    let bb = gell_mann_basis(state.dim_b());
    correlation_matrix(state, &ba, &bb).expect("canonical bases match state dims")
}
