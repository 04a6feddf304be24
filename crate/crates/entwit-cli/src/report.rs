//! Per-state evaluation: the four criteria, the witness, and rendering.

use serde::Serialize;

use entwit::criteria::{self, CriterionResult};
use entwit::witness::{self, DetectionVerdict};
use entwit::{BipartiteState, MapParams};

use crate::CliError;

/// `%g`-style formatting with a fixed number of significant digits.
pub fn fmt_sig(v: f64, sig: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if exp >= sig as i32 || exp < -4 {
        format!("{:.*e}", sig - 1, v)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", decimals, v)
    }
}

#[derive(Debug, Serialize)]
pub struct WitnessReport {
    pub value: f64,
    pub gamma: f64,
    /// `tailored` when γ came from the state, `fixed` when supplied.
    pub gamma_rule: &'static str,
    pub verdict: &'static str,
}

#[derive(Debug, Serialize)]
struct CriterionJson {
    name: &'static str,
    value: f64,
    threshold: f64,
    detected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<(f64, f64)>,
}

impl From<&CriterionResult> for CriterionJson {
    fn from(r: &CriterionResult) -> Self {
        Self {
            name: r.name,
            value: r.value,
            threshold: r.threshold,
            detected: r.detected,
            params: r.params,
        }
    }
}

#[derive(Debug)]
pub struct StateReport {
    pub dim_a: usize,
    pub dim_b: usize,
    pub alpha: f64,
    pub beta: f64,
    pub tol: f64,
    pub ppt: CriterionResult,
    pub ccnr: CriterionResult,
    pub dv: CriterionResult,
    pub ct: CriterionResult,
    /// Absent when the state dimension is not a map Choi dimension.
    pub witness: Option<WitnessReport>,
}

impl StateReport {
    /// Overall verdict: any detecting criterion or a negative witness value.
    pub fn verdict(&self) -> &'static str {
        let by_criteria = self.ppt.detected
            || self.ccnr.detected
            || self.dv.detected
            || self.ct.detected;
        let by_witness = self
            .witness
            .as_ref()
            .is_some_and(|w| w.verdict == "entangled");
        if by_criteria || by_witness {
            "entangled"
        } else {
            "undetected"
        }
    }

    pub fn render_table(&self, source: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "state: {}x{} (dim {}), source: {source}\n",
            self.dim_a,
            self.dim_b,
            self.dim_a * self.dim_b
        ));
        out.push_str(&format!(
            "map: alpha = {}, beta = {}, tol = {:e}\n\n",
            fmt_sig(self.alpha, 6),
            fmt_sig(self.beta, 6),
            self.tol
        ));
        out.push_str(&format!(
            "{:<10} {:>14} {:>14}  {}\n",
            "criterion", "value", "threshold", "result"
        ));
        for c in [&self.ppt, &self.ccnr, &self.dv, &self.ct] {
            let mut result = if c.detected { "detected" } else { "undetected" }.to_string();
            if let Some((x, y)) = c.params {
                result.push_str(&format!(" (x = {}, y = {})", fmt_sig(x, 6), fmt_sig(y, 6)));
            }
            out.push_str(&format!(
                "{:<10} {:>14} {:>14}  {}\n",
                c.name,
                fmt_sig(c.value, 6),
                fmt_sig(c.threshold, 6),
                result
            ));
        }
        match &self.witness {
            Some(w) => {
                out.push_str(&format!(
                    "{:<10} {:>14} {:>14}  {} (gamma = {}, rule: {})\n",
                    "witness",
                    fmt_sig(w.value, 6),
                    fmt_sig(0.0, 6),
                    w.verdict,
                    fmt_sig(w.gamma, 6),
                    w.gamma_rule
                ));
            }
            None => out.push_str(&format!(
                "{:<10} not applicable (state dimension {} is not a map Choi dimension)\n",
                "witness",
                self.dim_a * self.dim_b
            )),
        }
        out.push_str(&format!("\nverdict: {}\n", self.verdict()));
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            dims: [usize; 2],
            alpha: f64,
            beta: f64,
            tol: f64,
            criteria: Vec<CriterionJson>,
            witness: &'a Option<WitnessReport>,
            verdict: &'static str,
        }
        let doc = Doc {
            dims: [self.dim_a, self.dim_b],
            alpha: self.alpha,
            beta: self.beta,
            tol: self.tol,
            criteria: [&self.ppt, &self.ccnr, &self.dv, &self.ct]
                .into_iter()
                .map(CriterionJson::from)
                .collect(),
            witness: &self.witness,
            verdict: self.verdict(),
        };
        serde_json::to_string_pretty(&doc).expect("report serialises")
    }
}

fn verdict_name(v: DetectionVerdict) -> &'static str {
    match v {
        DetectionVerdict::Entangled => "entangled",
        DetectionVerdict::Inconclusive => "inconclusive",
        DetectionVerdict::Undetected => "undetected",
    }
}

/// Runs all criteria plus the witness on one state.
pub fn evaluate(
    state: &BipartiteState,
    alpha: f64,
    beta: f64,
    fixed_gamma: Option<f64>,
    tol: f64,
    ct_grid: &[(f64, f64)],
) -> Result<StateReport, CliError> {
    let params = MapParams::new(alpha, beta).map_err(CliError::from)?;
    let ppt = criteria::ppt(state, tol).map_err(CliError::from)?;
    let ccnr = criteria::ccnr(state, tol).map_err(CliError::from)?;
    let dv = criteria::dv(state, tol).map_err(CliError::from)?;
    let ct = criteria::ct_scan(state, ct_grid, tol).map_err(CliError::from)?;
    let witness = witness_report(state, &params, fixed_gamma, tol);
    Ok(StateReport {
        dim_a: state.dim_a(),
        dim_b: state.dim_b(),
        alpha,
        beta,
        tol,
        ppt,
        ccnr,
        dv,
        ct,
        witness,
    })
}

/// Witness evaluation; `None` when the state dimension does not match a map
/// Choi space (the witness lives on d^4-dimensional states).
pub fn witness_report(
    state: &BipartiteState,
    params: &MapParams,
    fixed_gamma: Option<f64>,
    tol: f64,
) -> Option<WitnessReport> {
    let (gamma, gamma_rule) = match fixed_gamma {
        Some(g) => (g, "fixed"),
        None => match witness::gamma_for_state(state, params) {
            Ok(g) => (g, "tailored (gamma_for_state)"),
            Err(_) => return None,
        },
    };
    let d = (state.dim() as f64).sqrt().sqrt().round() as usize;
    if d * d * d * d != state.dim() {
        return None;
    }
    let w = witness::build_witness(params, gamma, d);
    let value = witness::witness_value(state, &w).ok()?;
    Some(WitnessReport {
        value,
        gamma,
        gamma_rule,
        verdict: verdict_name(DetectionVerdict::from_value_with_tol(value, tol)),
    })
}
