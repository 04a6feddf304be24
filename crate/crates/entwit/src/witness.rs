//! The Hermitian operator `O_{α,β} = C·C†` built from the map's Choi matrix,
//! the shifted operator `W_{α,β} = O − γI`, the γ rule
//! `γ = 2(Re Tr[B Y†] + Tr[A]·‖Y‖₂)`, and witness evaluation.
//!
//! Block conventions: a matrix of even dimension splits into half-dimension
//! blocks `[[X, Y], [Y†, Z]]`; the same split applied to `O` is written
//! `[[A, B], [B†, D]]`. For states in the fixed index convention this is the
//! cut along the first qubit of subsystem A.

use crate::bipartite::BipartiteState;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::posmap::{self, MapParams};
use crate::DEFAULT_TOL;

/// Half-dimension block decomposition of a square matrix of even dimension.
#[derive(Debug, Clone)]
pub struct HalfBlocks {
    /// Top-left block (`X` for states, `A` for `O`).
    pub top_left: CMatrix,
    /// Top-right block (`Y` for states, `B` for `O`).
    pub top_right: CMatrix,
    /// Bottom-left block (`Y†` / `B†`).
    pub bottom_left: CMatrix,
    /// Bottom-right block (`Z` / `D`).
    pub bottom_right: CMatrix,
}

impl HalfBlocks {
    /// Splits a square matrix of even dimension into its four half blocks.
    pub fn split(m: &CMatrix) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if !n.is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                context: format!("half/half block split needs even dimension, got {n}"),
            });
        }
        let h = n / 2;
        let sub = |r0: usize, c0: usize| CMatrix::from_fn(h, h, |i, j| m[(r0 + i, c0 + j)]);
        Ok(Self {
            top_left: sub(0, 0),
            top_right: sub(0, h),
            bottom_left: sub(h, 0),
            bottom_right: sub(h, h),
        })
    }

    /// Reassembles the four blocks into the source matrix.
    pub fn reassemble(&self) -> CMatrix {
        let h = self.top_left.nrows();
        CMatrix::from_fn(2 * h, 2 * h, |i, j| match (i < h, j < h) {
            (true, true) => self.top_left[(i, j)],
            (true, false) => self.top_right[(i, j - h)],
            (false, true) => self.bottom_left[(i - h, j)],
            (false, false) => self.bottom_right[(i - h, j - h)],
        })
    }
}

/// `O_{α,β} = C·C†` for the map with domain `d ⊗ d`; Hermitian and PSD by
/// construction, of order `d⁴`.
pub fn build_o(params: &MapParams, d: usize) -> CMatrix {
    let choi = posmap::choi_matrix(params, d, d).expect("square map domain");
    &choi * linalg::dagger(&choi)
}

/// The witness operator `W = O − γI` with its construction parameters.
#[derive(Debug, Clone)]
pub struct WitnessOperator {
    alpha: f64,
    beta: f64,
    gamma: f64,
    matrix: CMatrix,
}

impl WitnessOperator {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Order of the witness matrix (`d⁴` for a `d ⊗ d` map domain).
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `W = O − γ·I` over the `d ⊗ d` map domain.
pub fn build_witness(params: &MapParams, gamma: f64, d: usize) -> WitnessOperator {
    let mut matrix = build_o(params, d);
    let n = matrix.nrows();
    for i in 0..n {
        matrix[(i, i)] -= linalg::C64::new(gamma, 0.0);
    }
    WitnessOperator {
        alpha: params.alpha(),
        beta: params.beta(),
        gamma,
        matrix,
    }
}

fn map_domain_for_state(state: &BipartiteState) -> Result<usize> {
    let n = state.dim();
    let d = (n as f64).sqrt().sqrt().round() as usize;
    if d * d * d * d != n || !n.is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            context: format!("state dimension {n} is not the Choi-space dimension d^4 of a map"),
        });
    }
    Ok(d)
}

/// The γ rule: `γ = 2·(Re Tr[B Y†] + Tr[A]·‖Y‖₂)` with `A, B` the upper
/// blocks of `O` and `Y` the upper-right block of the state.
///
/// `Tr[B Y†]` can carry an imaginary part for general `Y`; the real part is
/// used so that γ is real and `W` stays Hermitian. The state's dimension must
/// equal the map's Choi-space dimension (16 for the `2 ⊗ 2` map).
pub fn gamma_for_state(state: &BipartiteState, params: &MapParams) -> Result<f64> {
    let d = map_domain_for_state(state)?;
    let o = build_o(params, d);
    let ob = HalfBlocks::split(&o)?;
    let sb = HalfBlocks::split(state.rho())?;
    let tr_a = ob.top_left.trace().re;
    let tr_by = linalg::re_trace_product(&ob.top_right, &linalg::dagger(&sb.top_right));
    let y_norm = linalg::frobenius_norm(&sb.top_right);
    Ok(2.0 * (tr_by + tr_a * y_norm))
}

/// `Re Tr[W ρ]`; a value below `−tol` certifies entanglement of the state
/// the witness was tailored to.
pub fn witness_value(state: &BipartiteState, witness: &WitnessOperator) -> Result<f64> {
    if state.dim() != witness.dim() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "witness order {} vs state dimension {}",
                witness.dim(),
                state.dim()
            ),
        });
    }
    Ok(linalg::re_trace_product(witness.matrix(), state.rho()))
}

/// Detection verdict at the fixed `1e-9` boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionVerdict {
    /// `value < −1e-9`: entanglement certified.
    Entangled,
    /// `|value| ≤ 1e-9`: boundary, inconclusive.
    Inconclusive,
    /// `value > 1e-9`: not detected.
    Undetected,
}

impl DetectionVerdict {
    pub fn from_value(value: f64) -> Self {
        Self::from_value_with_tol(value, DEFAULT_TOL)
    }

    pub fn from_value_with_tol(value: f64, tol: f64) -> Self {
        if value < -tol {
            DetectionVerdict::Entangled
        } else if value <= tol {
            DetectionVerdict::Inconclusive
        } else {
            DetectionVerdict::Undetected
        }
    }
}

/// Both sides of the block-separability sufficient condition
/// `‖Y‖₂² ≤ λ_min(X)·λ_min(Z)` on the half/half split of a state.
#[derive(Debug, Clone, Copy)]
pub struct FloorCheck {
    /// `‖Y‖₂²`.
    pub lhs: f64,
    /// `λ_min(X)·λ_min(Z)`.
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluates the block-separability sufficient condition on a state.
pub fn separability_floor_check(state: &BipartiteState) -> Result<FloorCheck> {
    let blocks = HalfBlocks::split(state.rho())?;
    let lhs = linalg::frobenius_norm(&blocks.top_right).powi(2);
    let lam_x = linalg::min_eigenvalue(&blocks.top_left, DEFAULT_TOL)?;
    let lam_z = linalg::min_eigenvalue(&blocks.bottom_right, DEFAULT_TOL)?;
    let rhs = lam_x * lam_z;
    Ok(FloorCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + DEFAULT_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, min_eigenvalue, C64};
    use crate::statezoo::{bes_4x4, bes_p1, bes_q1, noisy_bes};

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn o_block_a11_closed_form() {
        let (al, be) = (1.7, 0.4);
        let o = build_o(&MapParams::new(al, be).unwrap(), 2);
        let want = [
            al * al + be * be + (al + be) * (al + be),
            2.0 * al * al + 2.0 * be * be,
            0.0,
            0.0,
        ];
        for (i, w) in want.iter().enumerate() {
            assert!((o[(i, i)].re - w).abs() < 1e-12, "A11[{i},{i}]");
        }
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(o[(i, j)].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn o_zero_map_is_zero() {
        let o = build_o(&MapParams::zero_map(), 2);
        assert!(o.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn o_is_psd_and_trace_balanced() {
        for (al, be) in [(0.1, 0.1), (1.0, 2.0), (3.5, 0.7), (9.0, 9.0)] {
            let o = build_o(&MapParams::new(al, be).unwrap(), 2);
            assert!(min_eigenvalue(&o, 1e-9).unwrap() >= -1e-9);
            let blocks = HalfBlocks::split(&o).unwrap();
            let tr_a = blocks.top_left.trace().re;
            let tr_d = blocks.bottom_right.trace().re;
            assert!((tr_a - tr_d).abs() < 1e-9, "TrA {tr_a} vs TrD {tr_d}");
            // closed form for the 2x2-domain map
            let expect = 8.0 * al * al + 8.0 * be * be + 4.0 * al * be;
            assert!((tr_a - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn blocks_reassemble() {
        let m = CMatrix::from_fn(6, 6, |i, j| C64::new(i as f64, 2.0 * j as f64));
        let blocks = HalfBlocks::split(&m).unwrap();
        assert_eq!(blocks.reassemble(), m);
        let odd = CMatrix::zeros(5, 5);
        assert!(HalfBlocks::split(&odd).is_err());
    }

    #[test]
    fn zero_gamma_witness_is_o() {
        let params = MapParams::new(0.8, 1.1).unwrap();
        let w = build_witness(&params, 0.0, 2);
        assert!(min_eigenvalue(w.matrix(), 1e-9).unwrap() >= -1e-9);
        assert_eq!(w.gamma(), 0.0);
    }

    #[test]
    fn gamma_at_min_eigenvalue_zeroes_spectrum() {
        let params = MapParams::new(1.0, 0.5).unwrap();
        let o = build_o(&params, 2);
        let lam = min_eigenvalue(&o, 1e-9).unwrap();
        let w = build_witness(&params, lam, 2);
        let shifted_min = min_eigenvalue(w.matrix(), 1e-9).unwrap();
        assert!(shifted_min.abs() < 1e-9);
    }

    #[test]
    fn gamma_vanishes_for_block_diagonal_state() {
        let s = noisy_bes(0.0).unwrap(); // I/16 has zero off-diagonal block
        let g = gamma_for_state(&s, &MapParams::new(1.0, 1.0).unwrap()).unwrap();
        assert_eq!(g, 0.0);
    }

    #[test]
    fn gamma_matches_surd_closed_form_on_bes() {
        // gamma = (7sqrt2 - 6)(a^2 + b^2) + 4(sqrt2 - 1)ab at (p1, q1)
        let s = bes_4x4(bes_p1(), bes_q1()).unwrap();
        for (al, be) in [(0.5, 0.5), (1.0, 1.0), (2.0, 0.5), (1.0, 2.0)] {
            let g = gamma_for_state(&s, &MapParams::new(al, be).unwrap()).unwrap();
            let want = (7.0 * SQRT2 - 6.0) * (al * al + be * be) + 4.0 * (SQRT2 - 1.0) * al * be;
            assert!((g - want).abs() < 1e-9, "({al},{be}): {g} vs {want}");
        }
    }

    #[test]
    fn example_gamma_value_at_unit_params() {
        // (-6 + 7sqrt2)*2 + 4(sqrt2 - 1) = 18 sqrt2 - 16, approx 9.456
        let s = bes_4x4(bes_p1(), bes_q1()).unwrap();
        let g = gamma_for_state(&s, &MapParams::new(1.0, 1.0).unwrap()).unwrap();
        assert!((g - (18.0 * SQRT2 - 16.0)).abs() < 1e-9);
        assert!((g - 9.456).abs() < 1e-3);
    }

    #[test]
    fn witness_detects_bes() {
        let s = bes_4x4(bes_p1(), bes_q1()).unwrap();
        for (al, be) in [(1.0, 1.0), (0.5, 2.0), (2.0, 0.0)] {
            let params = MapParams::new(al, be).unwrap();
            let gamma = gamma_for_state(&s, &params).unwrap();
            let w = build_witness(&params, gamma, 2);
            let value = witness_value(&s, &w).unwrap();
            let want = (6.0 - 5.0 * SQRT2) * (2.0 * al * al + al * be + 2.0 * be * be);
            assert!((value - want).abs() < 1e-9, "({al},{be}): {value}");
            assert_eq!(
                DetectionVerdict::from_value(value),
                DetectionVerdict::Entangled
            );
        }
    }

    #[test]
    fn witness_value_dimension_check() {
        let s = crate::statezoo::bell_diagonal(0.0, 0.0, 0.0).unwrap();
        let w = build_witness(&MapParams::new(1.0, 1.0).unwrap(), 0.0, 2);
        assert!(matches!(
            witness_value(&s, &w),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn floor_check_examples() {
        // |00><00| in 4x4: Y = 0 and both minima vanish
        let mut rho = CMatrix::zeros(16, 16);
        rho[(0, 0)] = C64::new(1.0, 0.0);
        let s = BipartiteState::new(4, 4, rho, 1e-9).unwrap();
        let fc = separability_floor_check(&s).unwrap();
        assert!(fc.holds);
        assert!(fc.lhs.abs() < 1e-15 && fc.rhs.abs() < 1e-15);

        // maximally entangled state fails the floor
        let mut psi = CMatrix::zeros(16, 1);
        for i in 0..4 {
            psi[(i * 4 + i, 0)] = C64::new(0.5, 0.0);
        }
        let me = &psi * linalg::dagger(&psi);
        let s = BipartiteState::new(4, 4, me, 1e-9).unwrap();
        let fc = separability_floor_check(&s).unwrap();
        assert!(!fc.holds);

        // maximally mixed passes with Y = 0 and positive minima
        let mm = identity(16).map(|z| z * (1.0 / 16.0));
        let s = BipartiteState::new(4, 4, mm, 1e-9).unwrap();
        let fc = separability_floor_check(&s).unwrap();
        assert!(fc.holds);
        assert!((fc.rhs - 1.0 / 256.0).abs() < 1e-12);
    }

    #[test]
    fn witness_scaling_law() {
        let s = noisy_bes(0.6).unwrap();
        let base = MapParams::new(1.2, 0.8).unwrap();
        let g1 = gamma_for_state(&s, &base).unwrap();
        let v1 = witness_value(&s, &build_witness(&base, g1, 2)).unwrap();
        for c in [0.5, 2.0, 3.7] {
            let scaled = MapParams::new(1.2 * c, 0.8 * c).unwrap();
            let g = gamma_for_state(&s, &scaled).unwrap();
            let v = witness_value(&s, &build_witness(&scaled, g, 2)).unwrap();
            assert!((v - c * c * v1).abs() < 1e-8, "c={c}: {v} vs {}", c * c * v1);
        }
    }
}
