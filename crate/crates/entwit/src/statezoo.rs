//! Constructors for the state families the detection pipeline is exercised
//! on: two-qubit states with maximally mixed marginals, a 4⊗4 bound entangled
//! state built from six orthonormal vectors, a 4⊗4 PPT entangled family with
//! a complex parameter, and the bound entangled state mixed with white noise.
//!
//! Kets use the fixed A-major index convention: `|ik⟩` sits at position
//! `i·dB + k`.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::bipartite::BipartiteState;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::DEFAULT_TOL;

/// `q₁ = (√2 − 1)/2`, the weight at which the 4⊗4 family below becomes
/// invariant under partial transposition.
pub fn bes_q1() -> f64 {
    (std::f64::consts::SQRT_2 - 1.0) / 2.0
}

/// `p₁ = (2 − √2)/4 = (1 − 2q₁)/4`.
pub fn bes_p1() -> f64 {
    (2.0 - std::f64::consts::SQRT_2) / 4.0
}

/// Two-qubit state with maximally mixed marginals,
/// `ϱ = ¼(I⊗I + Σ t_j σ_j⊗σ_j)`.
///
/// Positivity requires `(1−t₃)² ≥ (t₁+t₂)²` and `(1+t₃)² ≥ (t₁−t₂)²`.
pub fn bell_diagonal(t1: f64, t2: f64, t3: f64) -> Result<BipartiteState> {
    for (name, t) in [("t1", t1), ("t2", t2), ("t3", t3)] {
        if !(-1.0..=1.0).contains(&t) || !t.is_finite() {
            return Err(Error::NotAState {
                reason: format!("{name} = {t} outside [-1, 1]"),
            });
        }
    }
    let slack = 1e-12;
    if (1.0 - t3).powi(2) < (t1 + t2).powi(2) - slack {
        return Err(Error::NotAState {
            reason: format!("(1 - t3)^2 < (t1 + t2)^2 for (t1,t2,t3) = ({t1},{t2},{t3})"),
        });
    }
    if (1.0 + t3).powi(2) < (t1 - t2).powi(2) - slack {
        return Err(Error::NotAState {
            reason: format!("(1 + t3)^2 < (t1 - t2)^2 for (t1,t2,t3) = ({t1},{t2},{t3})"),
        });
    }
    let rho = linalg::from_row_major(
        4,
        4,
        &[
            (1.0 + t3, 0.0),
            (0.0, 0.0),
            (0.0, 0.0),
            (t1 - t2, 0.0),
            (0.0, 0.0),
            (1.0 - t3, 0.0),
            (t1 + t2, 0.0),
            (0.0, 0.0),
            (0.0, 0.0),
            (t1 + t2, 0.0),
            (1.0 - t3, 0.0),
            (0.0, 0.0),
            (t1 - t2, 0.0),
            (0.0, 0.0),
            (0.0, 0.0),
            (1.0 + t3, 0.0),
        ],
    )?
    .map(|z| z * 0.25);
    BipartiteState::new(2, 2, rho, DEFAULT_TOL)
}

/// The six orthonormal vectors of the 4⊗4 bound entangled family, as
/// `(composite index, coefficient)` pairs.
fn omega_vectors() -> [Vec<(usize, f64)>; 6] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        vec![(1, s), (11, s)],             // (|01> + |23>)/sqrt2
        vec![(4, s), (14, s)],             // (|10> + |32>)/sqrt2
        vec![(5, s), (10, s)],             // (|11> + |22>)/sqrt2
        vec![(0, s), (15, -s)],            // (|00> - |33>)/sqrt2
        vec![(3, 0.5), (6, 0.5), (9, s)],  // (|03> + |12>)/2 + |21>/sqrt2
        vec![(3, -0.5), (6, 0.5), (12, s)], // (-|03> + |12>)/2 + |30>/sqrt2
    ]
}

/// 4⊗4 state `ρ = p Σ_{i=1..4} |ω_i⟩⟨ω_i| + q Σ_{i=5,6} |ω_i⟩⟨ω_i|` with
/// non-negative weights constrained by `4p + 2q = 1`.
pub fn bes_4x4(p: f64, q: f64) -> Result<BipartiteState> {
    if !p.is_finite() || !q.is_finite() || p < 0.0 || q < 0.0 {
        return Err(Error::BadParameter {
            violations: vec![format!("weights must be non-negative, got p = {p}, q = {q}")],
        });
    }
    let norm = 4.0 * p + 2.0 * q;
    if (norm - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::BadNormalization {
            context: format!("4p + 2q = {norm}, expected 1"),
        });
    }
    let mut rho = CMatrix::zeros(16, 16);
    for (i, ket) in omega_vectors().iter().enumerate() {
        let weight = if i < 4 { p } else { q };
        for &(a, ca) in ket {
            for &(b, cb) in ket {
                rho[(a, b)] += C64::new(weight * ca * cb, 0.0);
            }
        }
    }
    BipartiteState::new(4, 4, rho, DEFAULT_TOL)
}

/// 4⊗4 PPT entangled family with a phase parameter `z` (`|z| = 1`,
/// `−π/4 < Arg z < π/4`), `p > 0` and `r ∈ (0, 1)`, assembled from its
/// sixteen 4×4 blocks and normalised by its trace.
///
/// All parameter violations are collected and reported together.
pub fn kye_state(z: C64, p: f64, r: f64) -> Result<BipartiteState> {
    let mut violations = Vec::new();
    if (z.norm() - 1.0).abs() > DEFAULT_TOL {
        violations.push(format!("|z| = {} must equal 1", z.norm()));
    }
    let arg = z.arg();
    let quarter_pi = std::f64::consts::FRAC_PI_4;
    if !(arg > -quarter_pi && arg < quarter_pi) {
        violations.push(format!("Arg(z) = {arg} must lie in (-pi/4, pi/4)"));
    }
    if !(p > 0.0 && p.is_finite()) {
        violations.push(format!("p = {p} must be positive"));
    }
    if !(r > 0.0 && r < 1.0) {
        violations.push(format!("r = {r} must lie in (0, 1)"));
    }
    if !violations.is_empty() {
        return Err(Error::BadParameter { violations });
    }

    let zb = z.conj();
    let re2 = z + zb; // z + conj(z), real
    let zero = CMatrix::zeros(4, 4);
    let diag = |d: [C64; 4]| {
        let mut m = CMatrix::zeros(4, 4);
        for (i, v) in d.into_iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    };
    let c = |x: f64| C64::new(x, 0.0);
    let a11 = diag([re2, c(1.0 / p), c(p), c(r / p + r)]);
    let a22 = diag([c(p), re2, c(r / p + r), c(1.0 / p)]);
    let a33 = diag([c(1.0 / p), c(r * p + r), re2, c(p)]);
    let a44 = diag([c(r * p + r), c(p), c(1.0 / p), re2]);
    let mut a12 = zero.clone();
    a12[(0, 1)] = -z;
    a12[(2, 3)] = c(-r);
    let mut a13 = zero.clone();
    a13[(0, 2)] = -zb;
    a13[(1, 3)] = -z * r;
    let a14 = zero.clone();
    let a23 = zero.clone();
    let mut a24 = zero.clone();
    a24[(0, 2)] = -z * r;
    a24[(1, 3)] = z;
    let mut a34 = zero.clone();
    a34[(0, 1)] = c(-r);
    a34[(2, 3)] = -zb;

    let blocks = [
        [a11.clone(), a12.clone(), a13.clone(), a14.clone()],
        [linalg::dagger(&a12), a22.clone(), a23.clone(), a24.clone()],
        [
            linalg::dagger(&a13),
            linalg::dagger(&a23),
            a33.clone(),
            a34.clone(),
        ],
        [
            linalg::dagger(&a14),
            linalg::dagger(&a24),
            linalg::dagger(&a34),
            a44.clone(),
        ],
    ];
    let mut m = CMatrix::zeros(16, 16);
    for (bi, row) in blocks.iter().enumerate() {
        for (bj, blk) in row.iter().enumerate() {
            for i in 0..4 {
                for j in 0..4 {
                    m[(bi * 4 + i, bj * 4 + j)] = blk[(i, j)];
                }
            }
        }
    }
    let trace = m.trace().re;
    let rho = m.map(|v| v / trace);
    BipartiteState::new(4, 4, rho, DEFAULT_TOL)
}

/// Mixture of the bound entangled state at `(p₁, q₁)` with white noise:
/// `λ·ρ^{(p₁,q₁)} + (1−λ)/16 · I₁₆` for `λ ∈ [0, 1]`.
pub fn noisy_bes(lambda: f64) -> Result<BipartiteState> {
    if !(0.0..=1.0).contains(&lambda) || !lambda.is_finite() {
        return Err(Error::BadParameter {
            violations: vec![format!("lambda = {lambda} must lie in [0, 1]")],
        });
    }
    let bes = bes_4x4(bes_p1(), bes_q1())?;
    let noise = linalg::identity(16).map(|z| z * (1.0 / 16.0));
    let rho = bes.rho().map(|z| z * lambda) + noise.map(|z| z * (1.0 - lambda));
    BipartiteState::new(4, 4, rho, DEFAULT_TOL)
}

/// Named parametric state family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    BellDiagonal,
    Bes4x4,
    Kye,
    NoisyBes,
}

impl Family {
    /// Parameter names, in the order they are reported.
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Family::BellDiagonal => &["t1", "t2", "t3"],
            Family::Bes4x4 => &["p", "q"],
            Family::Kye => &["z_re", "z_im", "p", "r"],
            Family::NoisyBes => &["lambda"],
        }
    }

    /// Default parameter values.
    pub fn defaults(&self) -> BTreeMap<String, f64> {
        let pairs: &[(&str, f64)] = match self {
            Family::BellDiagonal => &[("t1", 0.0), ("t2", 0.0), ("t3", 0.0)],
            Family::Bes4x4 => return default_bes_params(),
            Family::Kye => &[("z_re", 1.0), ("z_im", 0.0), ("p", 1.0), ("r", 0.5)],
            Family::NoisyBes => &[("lambda", 1.0)],
        };
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::BellDiagonal => "bell_diagonal",
            Family::Bes4x4 => "bes_4x4",
            Family::Kye => "kye",
            Family::NoisyBes => "noisy_bes",
        }
    }
}

fn default_bes_params() -> BTreeMap<String, f64> {
    [("p".to_string(), bes_p1()), ("q".to_string(), bes_q1())]
        .into_iter()
        .collect()
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bell_diagonal" => Ok(Family::BellDiagonal),
            "bes_4x4" => Ok(Family::Bes4x4),
            "kye" => Ok(Family::Kye),
            "noisy_bes" => Ok(Family::NoisyBes),
            other => Err(Error::UnknownFamily {
                name: other.to_string(),
            }),
        }
    }
}

/// A family together with a concrete parameter assignment.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub family: Family,
    pub params: BTreeMap<String, f64>,
}

impl FamilySpec {
    /// Starts from the family defaults and overrides the given parameters.
    ///
    /// For the constrained pair of `bes_4x4`, overriding only one weight
    /// derives the other from `4p + 2q = 1`.
    pub fn new(family: Family, overrides: &BTreeMap<String, f64>) -> Result<Self> {
        let mut params = family.defaults();
        for (k, v) in overrides {
            if !family.param_names().contains(&k.as_str()) {
                return Err(Error::BadParameter {
                    violations: vec![format!(
                        "unknown parameter '{k}' for family {}",
                        family.name()
                    )],
                });
            }
            params.insert(k.clone(), *v);
        }
        if family == Family::Bes4x4 {
            match (overrides.contains_key("p"), overrides.contains_key("q")) {
                (true, false) => {
                    let p = params["p"];
                    params.insert("q".into(), (1.0 - 4.0 * p) / 2.0);
                }
                (false, true) => {
                    let q = params["q"];
                    params.insert("p".into(), (1.0 - 2.0 * q) / 4.0);
                }
                _ => {}
            }
        }
        Ok(Self { family, params })
    }

    fn get(&self, key: &str) -> f64 {
        *self.params.get(key).expect("parameter populated from defaults")
    }

    /// Builds the state at this parameter point.
    pub fn build(&self) -> Result<BipartiteState> {
        match self.family {
            Family::BellDiagonal => {
                bell_diagonal(self.get("t1"), self.get("t2"), self.get("t3"))
            }
            Family::Bes4x4 => bes_4x4(self.get("p"), self.get("q")),
            Family::Kye => kye_state(
                C64::new(self.get("z_re"), self.get("z_im")),
                self.get("p"),
                self.get("r"),
            ),
            Family::NoisyBes => noisy_bes(self.get("lambda")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dagger, hermiticity_deviation, identity, min_eigenvalue, trace_norm};

    #[test]
    fn bell_diagonal_zero_is_maximally_mixed() {
        let s = bell_diagonal(0.0, 0.0, 0.0).unwrap();
        let expect = identity(4).map(|z| z * 0.25);
        assert_eq!(*s.rho(), expect);
    }

    #[test]
    fn bell_diagonal_case_i_eigenvalues() {
        for t in [0.2, 0.6, 0.95] {
            let s = bell_diagonal(0.0, 0.0, -t).unwrap();
            // full PT spectrum: (1+t)/4 twice and (1-t)/4 twice
            let eigs =
                crate::linalg::hermitian_eigenvalues(&s.partial_transpose_b(), 1e-9).unwrap();
            let want = [(1.0 - t) / 4.0, (1.0 - t) / 4.0, (1.0 + t) / 4.0, (1.0 + t) / 4.0];
            for (e, w) in eigs.iter().zip(want) {
                assert!((e - w).abs() < 1e-12, "t={t}: {eigs:?}");
            }
            let lr = min_eigenvalue(&s.realigned(), 1e-9).unwrap();
            assert!((lr + t / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bell_diagonal_case_iii_eigenvalues() {
        // t1 = 1, t2 = t, t3 = -t: both minima equal -t/2 for t in (0, 1]
        for t in [0.3, 0.7, 1.0] {
            let s = bell_diagonal(1.0, t, -t).unwrap();
            let lpt = min_eigenvalue(&s.partial_transpose_b(), 1e-9).unwrap();
            let lr = min_eigenvalue(&s.realigned(), 1e-9).unwrap();
            assert!((lpt + t / 2.0).abs() < 1e-12, "t={t}: lpt={lpt}");
            assert!((lr + t / 2.0).abs() < 1e-12, "t={t}: lr={lr}");
        }
    }

    #[test]
    fn bell_diagonal_rejects_nonpositive() {
        assert!(matches!(
            bell_diagonal(1.0, 1.0, 1.0),
            Err(Error::NotAState { .. })
        ));
        assert!(matches!(
            bell_diagonal(0.0, 0.0, 1.5),
            Err(Error::NotAState { .. })
        ));
    }

    #[test]
    fn bes_weights_constants() {
        assert!((4.0 * bes_p1() + 2.0 * bes_q1() - 1.0).abs() < 1e-15);
        assert!((bes_p1() - bes_q1() / std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn bes_omegas_orthonormal() {
        let omegas = omega_vectors();
        for (i, a) in omegas.iter().enumerate() {
            for (j, b) in omegas.iter().enumerate() {
                let mut dot = 0.0;
                for &(ia, ca) in a {
                    for &(ib, cb) in b {
                        if ia == ib {
                            dot += ca * cb;
                        }
                    }
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-15, "<w{i}|w{j}> = {dot}");
            }
        }
    }

    #[test]
    fn bes_is_ppt_at_p1_q1() {
        let s = bes_4x4(bes_p1(), bes_q1()).unwrap();
        let pt = s.partial_transpose_b();
        // invariant under partial transposition at p = q/sqrt2
        assert!((pt - s.rho()).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn bes_realignment_value() {
        let s = bes_4x4(bes_p1(), bes_q1()).unwrap();
        let value = trace_norm(&s.realigned());
        assert!((value - 1.08579).abs() < 5e-5, "got {value}");
        // exact surd: (5 - 2*sqrt2)/2
        let surd = (5.0 - 2.0 * std::f64::consts::SQRT_2) / 2.0;
        assert!((value - surd).abs() < 1e-9);
    }

    #[test]
    fn bes_rejects_bad_normalisation() {
        assert!(matches!(
            bes_4x4(0.25, 0.25),
            Err(Error::BadNormalization { .. })
        ));
        assert!(matches!(bes_4x4(-0.1, 0.7), Err(Error::BadParameter { .. })));
    }

    #[test]
    fn kye_real_symmetric_at_unit_params() {
        let s = kye_state(C64::new(1.0, 0.0), 1.0, 0.5).unwrap();
        assert!(hermiticity_deviation(s.rho()) < 1e-15);
        assert!(s.rho().iter().all(|z| z.im == 0.0));
        assert!((s.rho().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kye_is_ppt_across_r() {
        for r in [0.1, 0.5, 0.9] {
            let s = kye_state(C64::new(1.0, 0.0), 1.0, r).unwrap();
            let lpt = min_eigenvalue(&s.partial_transpose_b(), 1e-9).unwrap();
            assert!(lpt > -1e-9, "r={r}: {lpt}");
        }
    }

    #[test]
    fn kye_reports_all_violations() {
        let err = kye_state(C64::new(2.0, 0.0), -1.0, 1.5).unwrap_err();
        match err {
            Error::BadParameter { violations } => {
                assert_eq!(violations.len(), 3, "{violations:?}")
            }
            other => panic!("expected BadParameter, got {other:?}"),
        }
    }

    #[test]
    fn kye_complex_phase_small_arg_is_a_state() {
        let z = C64::from_polar(1.0, 0.2);
        let s = kye_state(z, 1.0, 0.5).unwrap();
        assert!(hermiticity_deviation(s.rho()) < 1e-12);
        let _ = dagger(s.rho());
    }

    #[test]
    fn kye_complex_phase_can_lose_positivity() {
        // the displayed blocks stop being PSD well inside the nominal
        // (-pi/4, pi/4) phase window; the validator reports it
        let z = C64::from_polar(1.0, 0.4);
        assert!(matches!(
            kye_state(z, 1.3, 0.4),
            Err(Error::NotAState { .. })
        ));
    }

    #[test]
    fn noisy_endpoints() {
        let at_zero = noisy_bes(0.0).unwrap();
        let expect = identity(16).map(|z| z * (1.0 / 16.0));
        assert!((at_zero.rho() - expect).iter().all(|z| z.norm() < 1e-15));
        let at_one = noisy_bes(1.0).unwrap();
        let bes = bes_4x4(bes_p1(), bes_q1()).unwrap();
        assert!((at_one.rho() - bes.rho()).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn noisy_is_affine_and_ppt() {
        let lam = 0.37;
        let mix = noisy_bes(lam).unwrap();
        let lo = noisy_bes(0.0).unwrap();
        let hi = noisy_bes(1.0).unwrap();
        let combo = hi.rho().map(|z| z * lam) + lo.rho().map(|z| z * (1.0 - lam));
        assert!((mix.rho() - combo).iter().all(|z| z.norm() < 1e-15));
        for l in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let s = noisy_bes(l).unwrap();
            let pt = s.partial_transpose_b();
            assert!((pt - s.rho()).iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn noisy_rejects_out_of_range() {
        assert!(matches!(noisy_bes(-0.1), Err(Error::BadParameter { .. })));
        assert!(matches!(noisy_bes(1.1), Err(Error::BadParameter { .. })));
    }

    #[test]
    fn family_spec_roundtrip() {
        let spec = FamilySpec::new(
            Family::NoisyBes,
            &[("lambda".to_string(), 0.4)].into_iter().collect(),
        )
        .unwrap();
        let s = spec.build().unwrap();
        assert_eq!(s.dim(), 16);
        assert!("nope".parse::<Family>().is_err());
        assert_eq!("kye".parse::<Family>().unwrap(), Family::Kye);
        let bad = FamilySpec::new(
            Family::Kye,
            &[("t1".to_string(), 0.0)].into_iter().collect(),
        );
        assert!(bad.is_err());
    }
}
