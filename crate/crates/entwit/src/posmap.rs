//! The map `Φ_{α,β}(A) = α·A^{T_B} + β·A^R`, its per-state positivity
//! analysis, the associated Choi matrix and the complete-positivity verdict.
//!
//! Positivity is analysed state by state over the domain of states whose
//! realigned matrix is Hermitian; no claim is made over all of `M_n`.
//! [`domain_scan`] aggregates per-state verdicts over a sampled set.

use crate::bipartite::{self, BipartiteState};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::DEFAULT_TOL;

/// Denominator eigenvalues below this magnitude are treated as degenerate
/// when forming ratio bounds, to avoid division blowup on boundary states.
pub const DEGENERATE_RATIO_TOL: f64 = 1e-12;

/// The pair `(α, β) ≥ 0` parametrising the map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams {
    alpha: f64,
    beta: f64,
}

impl MapParams {
    /// Both parameters must be non-negative and finite, and not both zero
    /// (use [`MapParams::zero_map`] for the zero map explicitly).
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() || alpha < 0.0 || beta < 0.0 {
            return Err(Error::BadMapParams {
                context: format!("alpha = {alpha}, beta = {beta} (must be finite and >= 0)"),
            });
        }
        if alpha == 0.0 && beta == 0.0 {
            return Err(Error::BadMapParams {
                context: "alpha = beta = 0; use MapParams::zero_map() if intended".into(),
            });
        }
        Ok(Self { alpha, beta })
    }

    /// The zero map, allowed only through this explicit constructor.
    pub fn zero_map() -> Self {
        Self {
            alpha: 0.0,
            beta: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// `Φ_{α,β}(M) = α·M^{T_B} + β·M^R`.
///
/// The sum is well-formed only for `dA = dB` (otherwise the realigned shape
/// differs from the partial transpose).
pub fn apply_map(m: &CMatrix, params: &MapParams, dim_a: usize, dim_b: usize) -> Result<CMatrix> {
    if dim_a != dim_b {
        return Err(Error::DimensionMismatch {
            context: format!("map requires dA = dB, got {dim_a}x{dim_b}"),
        });
    }
    let pt = bipartite::partial_transpose_b(m, dim_a, dim_b)?;
    let re = bipartite::realign(m, dim_a, dim_b)?;
    Ok(pt.map(|z| z * self_scale(params.alpha)) + re.map(|z| z * self_scale(params.beta)))
}

fn self_scale(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Outcome of the per-state positivity case split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositivityKind {
    /// `λ_pt ≥ 0` and `λ_r ≥ 0`: positive for all `α, β ≥ 0`.
    AlwaysPositive,
    /// `λ_pt ≥ 0`, `λ_r < 0`: positive when `α/β ≥ bound`.
    RatioLowerBound,
    /// `λ_pt < 0`, `λ_r ≥ 0`: the case split reports `α/β ≤ bound`.
    RatioUpperBound,
    /// Both minimum eigenvalues negative: no `α, β > 0` makes the
    /// Weyl lower bound non-negative.
    NeverPositive,
}

/// Per-state positivity verdict with the two minimum eigenvalues it is
/// built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityVerdict {
    pub kind: PositivityKind,
    /// Threshold on `α/β`; present iff `kind` is one of the ratio cases.
    pub ratio_bound: Option<f64>,
    /// `λ_min(ρ^{T_B})`.
    pub lam_pt: f64,
    /// `λ_min(ρ^R)`.
    pub lam_r: f64,
}

/// Four-way case split on the signs of `λ_min(ρ^{T_B})` and `λ_min(ρ^R)`.
///
/// The state's realigned matrix must be Hermitian within `tol` (the domain
/// restriction of the analysis). The ratio bound is stored as
/// `|λ_r|/λ_pt` (resp. `λ_r/|λ_pt|`) so that `RatioLowerBound` means
/// `α/β ≥ bound` guarantees `λ_min(Φ(ρ)) ≥ 0` through the Weyl bound.
/// Denominators below [`DEGENERATE_RATIO_TOL`] degenerate to
/// `AlwaysPositive` or `NeverPositive` according to the numerator's sign.
pub fn positivity_verdict(state: &BipartiteState, tol: f64) -> Result<PositivityVerdict> {
    let realigned = state.realigned();
    let dev = linalg::hermiticity_deviation(&realigned);
    if dev > tol {
        return Err(Error::RealignmentNotHermitian {
            deviation: dev,
            tol,
        });
    }
    let lam_pt = linalg::min_eigenvalue(&state.partial_transpose_b(), tol)?;
    let lam_r = linalg::min_eigenvalue(&realigned, tol)?;
    let pt_nonneg = lam_pt >= -tol;
    let r_nonneg = lam_r >= -tol;
    let (kind, ratio_bound) = match (pt_nonneg, r_nonneg) {
        (true, true) => (PositivityKind::AlwaysPositive, None),
        (true, false) => {
            if lam_pt.abs() < DEGENERATE_RATIO_TOL {
                // numerator negative, denominator vanishes: no finite ratio helps
                (PositivityKind::NeverPositive, None)
            } else {
                (PositivityKind::RatioLowerBound, Some(lam_r.abs() / lam_pt))
            }
        }
        (false, true) => {
            if lam_pt.abs() < DEGENERATE_RATIO_TOL {
                (PositivityKind::AlwaysPositive, None)
            } else {
                (PositivityKind::RatioUpperBound, Some(lam_r / lam_pt.abs()))
            }
        }
        (false, false) => (PositivityKind::NeverPositive, None),
    };
    Ok(PositivityVerdict {
        kind,
        ratio_bound,
        lam_pt,
        lam_r,
    })
}

/// Aggregate of [`positivity_verdict`] over a sampled set of states.
#[derive(Debug, Clone, Default)]
pub struct DomainScanReport {
    pub always_positive: usize,
    pub ratio_lower: usize,
    pub ratio_upper: usize,
    pub never_positive: usize,
    pub rejected: usize,
    /// Supremum of the `RatioLowerBound` thresholds seen, if any: the
    /// binding constraint on `α/β` over the sampled domain.
    pub sup_ratio_lower_bound: Option<f64>,
}

/// Runs [`positivity_verdict`] on `n` sampled states and aggregates the
/// outcome counts and the supremum ratio bound. States whose realignment is
/// not Hermitian are counted as rejected.
pub fn domain_scan<F>(mut sampler: F, n: usize, tol: f64) -> DomainScanReport
where
    F: FnMut(usize) -> BipartiteState,
{
    let mut report = DomainScanReport::default();
    for i in 0..n {
        let state = sampler(i);
        match positivity_verdict(&state, tol) {
            Ok(v) => {
                match v.kind {
                    PositivityKind::AlwaysPositive => report.always_positive += 1,
                    PositivityKind::RatioLowerBound => {
                        report.ratio_lower += 1;
                        let b = v.ratio_bound.unwrap_or(f64::INFINITY);
                        report.sup_ratio_lower_bound =
                            Some(report.sup_ratio_lower_bound.map_or(b, |s| s.max(b)));
                    }
                    PositivityKind::RatioUpperBound => report.ratio_upper += 1,
                    PositivityKind::NeverPositive => report.never_positive += 1,
                }
            }
            Err(_) => report.rejected += 1,
        }
    }
    report
}

/// Choi matrix `C = Σ_{i,j} e_ij ⊗ Φ_{α,β}(e_ij)` over the matrix units of
/// the `(dA·dB)`-dimensional algebra; bilinear in `(α, β)`.
pub fn choi_matrix(params: &MapParams, dim_a: usize, dim_b: usize) -> Result<CMatrix> {
    if dim_a != dim_b {
        return Err(Error::DimensionMismatch {
            context: format!("Choi matrix requires dA = dB, got {dim_a}x{dim_b}"),
        });
    }
    let n = dim_a * dim_b;
    let mut choi = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let unit = linalg::matrix_unit(n, i, j);
            let phi = apply_map(&unit, params, dim_a, dim_b)?;
            for r in 0..n {
                for c in 0..n {
                    choi[(i * n + r, j * n + c)] = phi[(r, c)];
                }
            }
        }
    }
    Ok(choi)
}

/// Full spectrum of the `16×16` Choi matrix of the `2⊗2`-domain map.
///
/// The Choi matrix is non-Hermitian in general, so this is a general
/// (possibly complex) spectrum, sorted by real then imaginary part.
/// Eigenvalues with imaginary part below `1e-9` are reported as exactly
/// real; larger imaginary parts are returned verbatim.
pub fn choi_spectrum(params: &MapParams) -> Vec<C64> {
    let choi = choi_matrix(params, 2, 2).expect("2x2 map dims are valid");
    let mut eigs = linalg::general_spectrum(&choi, DEFAULT_TOL)
        .expect("Choi matrix of the map is real-entried");
    for z in &mut eigs {
        if z.im.abs() < DEFAULT_TOL {
            z.im = 0.0;
        }
    }
    eigs
}

/// Eigenvalues of the symmetrised Choi matrix `(C + C†)/2`, ascending.
pub fn choi_spectrum_symmetrized(params: &MapParams) -> Vec<f64> {
    let choi = choi_matrix(params, 2, 2).expect("2x2 map dims are valid");
    let sym = linalg::hermitian_part(&choi);
    linalg::hermitian_eigenvalues(&sym, DEFAULT_TOL).expect("symmetrised matrix is Hermitian")
}

/// Complete-positivity verdict through the sign of the Choi spectrum: true
/// iff every eigenvalue is real and non-negative within tolerance.
///
/// The zero eigenvalues of the Choi matrix become defective at `α = 0`, where
/// a backward-stable eigensolver scatters them by roughly `√ε · ‖C‖`; the
/// effective floor below accounts for that, so the verdict stays correct both
/// at `α = 0` and for any `α > 1e-6`.
pub fn is_completely_positive(
    params: &MapParams,
    dim_a: usize,
    dim_b: usize,
    tol: f64,
) -> Result<bool> {
    let choi = choi_matrix(params, dim_a, dim_b)?;
    let eigs = linalg::general_spectrum(&choi, DEFAULT_TOL)?;
    let scale = params.alpha() + params.beta();
    let floor = tol.max(4.0 * f64::EPSILON.sqrt() * scale);
    Ok(eigs.iter().all(|z| z.im.abs() <= floor && z.re >= -floor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real_rows, identity, kron, matrix_unit};
    use crate::statezoo::bell_diagonal;

    #[test]
    fn pure_partial_transpose_and_pure_realign() {
        let m = CMatrix::from_fn(4, 4, |i, j| C64::new(i as f64, j as f64 * 0.3));
        let pt_only = apply_map(&m, &MapParams::new(1.0, 0.0).unwrap(), 2, 2).unwrap();
        assert_eq!(pt_only, bipartite::partial_transpose_b(&m, 2, 2).unwrap());
        let r_only = apply_map(&m, &MapParams::new(0.0, 1.0).unwrap(), 2, 2).unwrap();
        assert_eq!(r_only, bipartite::realign(&m, 2, 2).unwrap());
    }

    #[test]
    fn map_rejects_unequal_dims() {
        let m = CMatrix::zeros(6, 6);
        assert!(matches!(
            apply_map(&m, &MapParams::new(1.0, 1.0).unwrap(), 2, 3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn map_params_validation() {
        assert!(MapParams::new(-1.0, 0.5).is_err());
        assert!(MapParams::new(0.0, 0.0).is_err());
        assert!(MapParams::new(f64::NAN, 1.0).is_err());
        let z = MapParams::zero_map();
        assert_eq!((z.alpha(), z.beta()), (0.0, 0.0));
    }

    #[test]
    fn boundary_ratio_keeps_map_output_positive() {
        // family with t1 = t2 = 0, t3 = -t: on the boundary alpha/beta = 2t/(1-t)
        // the Weyl lower bound vanishes, so the map output stays PSD
        for t in [0.2, 0.5, 0.8] {
            let state = bell_diagonal(0.0, 0.0, -t).unwrap();
            let ratio = 2.0 * t / (1.0 - t);
            let params = MapParams::new(ratio, 1.0).unwrap();
            let out = apply_map(state.rho(), &params, 2, 2).unwrap();
            let min = linalg::min_eigenvalue(&out, 1e-9).unwrap();
            assert!(min >= -1e-9, "t={t}: min = {min}");
        }
    }

    #[test]
    fn verdict_ratio_lower_bound_family() {
        for t in [0.1, 0.4, 0.7, 0.9] {
            let state = bell_diagonal(0.0, 0.0, -t).unwrap();
            let v = positivity_verdict(&state, 1e-9).unwrap();
            assert_eq!(v.kind, PositivityKind::RatioLowerBound);
            let bound = v.ratio_bound.unwrap();
            assert!((bound - 2.0 * t / (1.0 - t)).abs() < 1e-9, "t={t}: {bound}");
            assert!((v.lam_pt - (1.0 - t) / 4.0).abs() < 1e-12);
            assert!((v.lam_r + t / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn verdict_always_positive_family() {
        for t3 in [0.0, 0.3, 0.6, 1.0] {
            let state = bell_diagonal(0.0, 0.0, t3).unwrap();
            let v = positivity_verdict(&state, 1e-9).unwrap();
            assert_eq!(v.kind, PositivityKind::AlwaysPositive, "t3={t3}");
            assert!(v.ratio_bound.is_none());
        }
    }

    #[test]
    fn verdict_singlet_both_negative() {
        // t1 = t2 = t3 = -1: lam_pt = -1/2 and lam_r = -1/2, so no positive
        // parameters help; the case split lands on NeverPositive
        let state = bell_diagonal(-1.0, -1.0, -1.0).unwrap();
        let v = positivity_verdict(&state, 1e-9).unwrap();
        assert!((v.lam_pt + 0.5).abs() < 1e-12, "lam_pt = {}", v.lam_pt);
        assert!((v.lam_r + 0.5).abs() < 1e-12, "lam_r = {}", v.lam_r);
        assert_eq!(v.kind, PositivityKind::NeverPositive);
    }

    #[test]
    fn choi_matches_displayed_blocks() {
        let (al, be) = (1.3, 0.7);
        let choi = choi_matrix(&MapParams::new(al, be).unwrap(), 2, 2).unwrap();
        // the four 8x8 blocks, entry positions frozen from the worked 2x2 case
        let mut expect = CMatrix::zeros(16, 16);
        let entries: [(usize, usize, f64); 28] = [
            // top-left
            (0, 0, al + be),
            (0, 5, be),
            (1, 4, al),
            (4, 1, al),
            (4, 2, be),
            (4, 7, be),
            (5, 5, al),
            // top-right
            (0, 10, al),
            (1, 8, be),
            (1, 13, be),
            (1, 14, al),
            (4, 11, al),
            (5, 10, be),
            (5, 15, al + be),
            // bottom-left
            (10, 0, al + be),
            (10, 5, be),
            (11, 4, al),
            (14, 1, al),
            (14, 2, be),
            (14, 7, be),
            (15, 5, al),
            // bottom-right
            (10, 10, al),
            (11, 8, be),
            (11, 13, be),
            (11, 14, al),
            (14, 11, al),
            (15, 10, be),
            (15, 15, al + be),
        ];
        for (r, c, v) in entries {
            expect[(r, c)] = C64::new(v, 0.0);
        }
        assert!(
            (choi.clone() - expect).iter().all(|z| z.norm() < 1e-12),
            "Choi matrix deviates from the displayed block structure"
        );
    }

    #[test]
    fn choi_zero_map_and_bilinearity() {
        let zero = choi_matrix(&MapParams::zero_map(), 2, 2).unwrap();
        assert!(zero.iter().all(|z| z.norm() == 0.0));
        let c_a1 = choi_matrix(&MapParams::new(1.2, 0.8).unwrap(), 2, 2).unwrap();
        let c_a2 = choi_matrix(&MapParams::new(0.5, 0.0).unwrap(), 2, 2).unwrap();
        let c_sum = choi_matrix(&MapParams::new(1.7, 0.8).unwrap(), 2, 2).unwrap();
        assert!((c_a1 + c_a2 - c_sum).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn choi_blocks_reconstruct_map() {
        let params = MapParams::new(0.9, 1.4).unwrap();
        let choi = choi_matrix(&params, 2, 2).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let phi = apply_map(&matrix_unit(4, i, j), &params, 2, 2).unwrap();
                for r in 0..4 {
                    for c in 0..4 {
                        assert_eq!(choi[(i * 4 + r, j * 4 + c)], phi[(r, c)]);
                    }
                }
            }
        }
    }

    #[test]
    fn choi_spectrum_closed_form() {
        // nonzero eigenvalues {-2a, 2a, 2a, 2(a+b)}, twelve exact zeros
        let (al, be) = (1.0, 1.0);
        let eigs = choi_spectrum(&MapParams::new(al, be).unwrap());
        assert_eq!(eigs.len(), 16);
        let mut got: Vec<f64> = eigs.iter().map(|z| z.re).collect();
        got.sort_by(|a, b| a.total_cmp(b));
        let mut want = vec![0.0; 12];
        want.extend_from_slice(&[-2.0 * al, 2.0 * al, 2.0 * al, 2.0 * (al + be)]);
        want.sort_by(|a, b| a.total_cmp(b));
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-8, "{g} vs {w}");
        }
        assert!(eigs.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn choi_spectrum_beta_only_nonnegative() {
        let eigs = choi_spectrum(&MapParams::new(0.0, 1.0).unwrap());
        for z in eigs {
            assert!(z.re > -1e-7 && z.im.abs() < 1e-7, "eig {z}");
        }
    }

    #[test]
    fn cp_iff_alpha_zero() {
        for be in [0.3, 1.0, 4.0, 10.0] {
            let p = MapParams::new(0.0, be).unwrap();
            assert!(is_completely_positive(&p, 2, 2, 1e-9).unwrap(), "beta={be}");
        }
        for (al, be) in [(2e-6, 1.0), (1e-4, 10.0), (1.0, 1.0), (1.0, 0.0), (7.0, 3.0)] {
            let p = MapParams::new(al, be).unwrap();
            assert!(
                !is_completely_positive(&p, 2, 2, 1e-9).unwrap(),
                "alpha={al} beta={be}"
            );
        }
    }

    #[test]
    fn choi_is_not_hermitian_for_positive_beta() {
        let choi = choi_matrix(&MapParams::new(1.0, 1.0).unwrap(), 2, 2).unwrap();
        assert!(linalg::hermiticity_deviation(&choi) > 0.5);
        let choi_r = choi_matrix(&MapParams::new(0.0, 1.0).unwrap(), 2, 2).unwrap();
        assert!(linalg::hermiticity_deviation(&choi_r) > 0.5);
    }

    #[test]
    fn domain_scan_counts() {
        // alternate between an always-positive and a ratio-bounded family member
        let report = domain_scan(
            |i| {
                let t = 0.1 + 0.2 * (i % 4) as f64;
                if i % 2 == 0 {
                    bell_diagonal(0.0, 0.0, t).unwrap()
                } else {
                    bell_diagonal(0.0, 0.0, -t).unwrap()
                }
            },
            8,
            1e-9,
        );
        assert_eq!(report.always_positive, 4);
        assert_eq!(report.ratio_lower, 4);
        assert_eq!(report.never_positive, 0);
        // largest t in the scan is 0.7 -> sup bound 2*0.7/0.3
        let sup = report.sup_ratio_lower_bound.unwrap();
        assert!((sup - 2.0 * 0.7 / 0.3).abs() < 1e-9);
    }

    #[test]
    fn weyl_lower_bound_on_map_output() {
        // deterministic mix of Bell-diagonal states (realignment Hermitian)
        for (i, t) in [(1, 0.6), (2, -0.8), (3, 0.2)] {
            let t1 = t;
            let t2 = -t * 0.5;
            let t3 = 0.1 * i as f64;
            if bell_diagonal(t1, t2, t3).is_err() {
                continue;
            }
            let state = bell_diagonal(t1, t2, t3).unwrap();
            let params = MapParams::new(0.7, 1.9).unwrap();
            let out = apply_map(state.rho(), &params, 2, 2).unwrap();
            let lhs = linalg::min_eigenvalue(&out, 1e-9).unwrap();
            let bound = params.alpha()
                * linalg::min_eigenvalue(&state.partial_transpose_b(), 1e-9).unwrap()
                + params.beta() * linalg::min_eigenvalue(&state.realigned(), 1e-9).unwrap();
            assert!(lhs >= bound - 1e-9);
        }
    }

    #[test]
    fn symmetrized_spectrum_exposed() {
        let eigs = choi_spectrum_symmetrized(&MapParams::new(1.0, 1.0).unwrap());
        assert_eq!(eigs.len(), 16);
        // symmetrised spectrum differs from the general one; just pin the trace
        let sum: f64 = eigs.iter().sum();
        assert!((sum - 6.0).abs() < 1e-9); // Tr C = 4a + 2b
    }

    #[test]
    fn zero_map_needs_explicit_constructor() {
        let m = identity(4);
        let out = apply_map(&m, &MapParams::zero_map(), 2, 2).unwrap();
        assert!(out.iter().all(|z| z.norm() == 0.0));
        // sanity: kron/identity helpers agree on the trivial case
        assert_eq!(kron(&identity(2), &identity(2)), identity(4));
        let _ = from_real_rows(1, 1, &[1.0]);
    }
}
