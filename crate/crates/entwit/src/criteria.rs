//! Four comparison separability criteria — PPT, CCNR/realignment, dV, CT —
//! each returning a scalar diagnostic, its threshold and the detection
//! verdict.
//!
//! The dV diagnostic follows the correlation-tensor normalisation of the
//! criterion itself: the traceless sector of the canonical correlation
//! matrix is rescaled by `dA·dB/2`, which is the convention under which the
//! bound `√(dA·dB·(dA−1)(dB−1))/2` applies (equivalently, correlations taken
//! in the Gell-Mann basis with `Tr[λ²] = 2` and the Fano prefactor).

use crate::bipartite::{self, BipartiteState};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::witness;

/// Outcome of a single criterion evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    /// Criterion identifier: `ppt`, `ccnr`, `dv` or `ct`.
    pub name: &'static str,
    /// Scalar diagnostic; criterion-specific.
    pub value: f64,
    /// Detection threshold on the diagnostic.
    pub threshold: f64,
    /// Entanglement certified. For norm-based criteria this is
    /// `value > threshold + tol`; for PPT it is `value < −tol`.
    pub detected: bool,
    /// CT parameters `(x, y)` when applicable.
    pub params: Option<(f64, f64)>,
}

impl CriterionResult {
    /// Distance of the diagnostic above its threshold (negative when the
    /// criterion does not flag the state).
    pub fn margin(&self) -> f64 {
        if self.name == "ppt" {
            -self.value
        } else {
            self.value - self.threshold
        }
    }
}

/// PPT criterion: diagnostic is `λ_min(ρ^{T_B})`, detection when it is
/// negative beyond tolerance.
pub fn ppt(state: &BipartiteState, tol: f64) -> Result<CriterionResult> {
    let value = linalg::min_eigenvalue(&state.partial_transpose_b(), tol)?;
    Ok(CriterionResult {
        name: "ppt",
        value,
        threshold: 0.0,
        detected: value < -tol,
        params: None,
    })
}

/// CCNR/realignment criterion: diagnostic is `‖ρ^R‖₁`, threshold 1.
pub fn ccnr(state: &BipartiteState, tol: f64) -> Result<CriterionResult> {
    let value = linalg::trace_norm(&state.realigned());
    Ok(CriterionResult {
        name: "ccnr",
        value,
        threshold: 1.0,
        detected: value > 1.0 + tol,
        params: None,
    })
}

/// dV criterion: diagnostic is the trace norm of the traceless-sector
/// correlation tensor in the dV normalisation (`dA·dB/2` times the canonical
/// traceless block); threshold `√(dA·dB·(dA−1)(dB−1))/2`.
pub fn dv(state: &BipartiteState, tol: f64) -> Result<CriterionResult> {
    let c = bipartite::canonical_correlation_matrix(state);
    let (da, db) = (state.dim_a(), state.dim_b());
    let traceless = CMatrix::from_fn(da * da - 1, db * db - 1, |i, j| c[(i + 1, j + 1)]);
    let scale = (da * db) as f64 / 2.0;
    let value = scale * linalg::trace_norm(&traceless);
    let threshold = ((da * db * (da - 1) * (db - 1)) as f64).sqrt() / 2.0;
    Ok(CriterionResult {
        name: "dv",
        value,
        threshold,
        detected: value > threshold + tol,
        params: None,
    })
}

fn ct_from_correlation(
    corr: &CMatrix,
    da: f64,
    db: f64,
    x: f64,
    y: f64,
    tol: f64,
) -> Result<CriterionResult> {
    if x < 0.0 || y < 0.0 || !x.is_finite() || !y.is_finite() {
        return Err(Error::BadParameter {
            violations: vec![format!("CT parameters must be non-negative, got ({x}, {y})")],
        });
    }
    let mut c = corr.clone();
    for j in 0..c.ncols() {
        c[(0, j)] *= x;
    }
    for i in 0..c.nrows() {
        c[(i, 0)] *= y;
    }
    let value = linalg::trace_norm(&c);
    let threshold = ((da - 1.0 + x * x) / da).sqrt() * ((db - 1.0 + y * y) / db).sqrt();
    Ok(CriterionResult {
        name: "ct",
        value,
        threshold,
        detected: value > threshold + tol,
        params: Some((x, y)),
    })
}

/// CT criterion at filter parameters `(x, y)`: diagnostic is
/// `‖D_x C^{can} D_y‖₁` with `D_x = diag(x, 1, …, 1)` on the A-basis index
/// and `D_y` likewise on B; threshold `N_A(x)·N_B(y)` with
/// `N(x) = √((d−1+x²)/d)`.
pub fn ct_value(state: &BipartiteState, x: f64, y: f64, tol: f64) -> Result<CriterionResult> {
    let corr = bipartite::canonical_correlation_matrix(state);
    ct_from_correlation(
        &corr,
        state.dim_a() as f64,
        state.dim_b() as f64,
        x,
        y,
        tol,
    )
}

/// Default CT scan grid: the cross product of `{0, 0.5, 1, 2, 5, 10}` with
/// itself.
pub fn default_ct_grid() -> Vec<(f64, f64)> {
    let pts = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0];
    let mut grid = Vec::with_capacity(pts.len() * pts.len());
    for &x in &pts {
        for &y in &pts {
            grid.push((x, y));
        }
    }
    grid
}

/// Evaluates [`ct_value`] over a grid (computing the correlation matrix
/// once) and returns the result with the largest margin `value − threshold`.
pub fn ct_scan(state: &BipartiteState, grid: &[(f64, f64)], tol: f64) -> Result<CriterionResult> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let corr = bipartite::canonical_correlation_matrix(state);
    let (da, db) = (state.dim_a() as f64, state.dim_b() as f64);
    let mut best: Option<CriterionResult> = None;
    for &(x, y) in grid {
        let r = ct_from_correlation(&corr, da, db, x, y, tol)?;
        let replace = match &best {
            None => true,
            Some(b) => r.margin() > b.margin(),
        };
        if replace {
            best = Some(r);
        }
    }
    Ok(best.expect("grid non-empty"))
}

/// Sufficient separability condition on the half/half block split:
/// true iff `‖Y‖₂² ≤ λ_min(X)·λ_min(Z)`.
pub fn block_separability_sufficient(state: &BipartiteState) -> Result<bool> {
    Ok(witness::separability_floor_check(state)?.holds)
}
