//! Family parameter scans: range parsing, grid assembly and row rendering.

use std::collections::BTreeMap;

use serde::Serialize;

use entwit::criteria;
use entwit::posmap::{self, PositivityKind};
use entwit::statezoo::{Family, FamilySpec};
use entwit::MapParams;

use crate::report::{self, fmt_sig};
use crate::{CliError, FamilyParamArgs};

/// Fixed CSV column set; bell_diagonal scans append `pos_ratio`.
const CSV_COLUMNS: [&str; 8] = [
    "param",
    "ppt_min_eig",
    "ccnr_value",
    "dv_value",
    "ct_best_margin",
    "witness_value",
    "gamma",
    "verdict",
];

/// A parameter axis: one fixed value or the points of an inclusive range.
struct Axis {
    values: Vec<f64>,
    ranged: bool,
}

impl Axis {
    fn fixed(v: f64) -> Self {
        Self {
            values: vec![v],
            ranged: false,
        }
    }
}

/// Parses `value` or `start:stop:step`. Range endpoints are inclusive when
/// the step divides the span (to 1e-12-relative precision).
fn parse_axis(name: &str, text: &str) -> Result<Axis, CliError> {
    if !text.contains(':') {
        return text
            .parse::<f64>()
            .map(Axis::fixed)
            .map_err(|e| CliError::parse(format!("parameter {name}={text}: {e}")));
    }
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::bad_range(format!(
            "range {name}={text} must be start:stop:step"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|e| CliError::bad_range(format!("range {name}={text}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step <= 0.0 || step.is_nan() || !step.is_finite() {
        return Err(CliError::bad_range(format!(
            "range {name}={text}: step must be positive"
        )));
    }
    if stop < start - 1e-12 {
        return Err(CliError::bad_range(format!(
            "range {name}={text}: stop below start"
        )));
    }
    let exact = (stop - start) / step;
    let n = if (exact - exact.round()).abs() <= 1e-12 * exact.abs().max(1.0) {
        exact.round() as usize
    } else {
        exact.floor() as usize
    };
    let mut values = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let v = start + i as f64 * step;
        // snap accumulated float drift so grid labels stay clean
        values.push((v * 1e10).round() / 1e10);
    }
    Ok(Axis {
        values,
        ranged: true,
    })
}

#[derive(Debug, Serialize)]
pub struct ScanRow {
    pub param: String,
    pub ppt_min_eig: Option<f64>,
    pub ccnr_value: Option<f64>,
    pub dv_value: Option<f64>,
    pub ct_best_margin: Option<f64>,
    pub witness_value: Option<f64>,
    pub gamma: Option<f64>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pos_ratio: Option<f64>,
}

pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    pub with_pos_ratio: bool,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_sig(v: Option<f64>) -> String {
    v.map(|x| fmt_sig(x, 6)).unwrap_or_else(|| "-".into())
}

impl ScanTable {
    pub fn render_csv(&self) -> String {
        let mut out = CSV_COLUMNS.join(",");
        if self.with_pos_ratio {
            out.push_str(",pos_ratio");
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}",
                r.param,
                opt(r.ppt_min_eig),
                opt(r.ccnr_value),
                opt(r.dv_value),
                opt(r.ct_best_margin),
                opt(r.witness_value),
                opt(r.gamma),
                r.verdict
            ));
            if self.with_pos_ratio {
                out.push(',');
                out.push_str(&opt(r.pos_ratio));
            }
            out.push('\n');
        }
        out
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<24} {:>12} {:>12} {:>12} {:>14} {:>13} {:>12} {:>11}",
            "param",
            "ppt_min_eig",
            "ccnr_value",
            "dv_value",
            "ct_best_margin",
            "witness_value",
            "gamma",
            "verdict"
        ));
        if self.with_pos_ratio {
            out.push_str(&format!(" {:>10}", "pos_ratio"));
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{:<24} {:>12} {:>12} {:>12} {:>14} {:>13} {:>12} {:>11}",
                r.param,
                opt_sig(r.ppt_min_eig),
                opt_sig(r.ccnr_value),
                opt_sig(r.dv_value),
                opt_sig(r.ct_best_margin),
                opt_sig(r.witness_value),
                opt_sig(r.gamma),
                r.verdict
            ));
            if self.with_pos_ratio {
                out.push_str(&format!(" {:>10}", opt_sig(r.pos_ratio)));
            }
            out.push('\n');
        }
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialise")
    }
}

pub fn run_scan(
    family: Family,
    params: &FamilyParamArgs,
    alpha: f64,
    beta: f64,
    tol: f64,
    ct_grid: &[(f64, f64)],
) -> Result<ScanTable, CliError> {
    let map_params = MapParams::new(alpha, beta).map_err(CliError::from)?;
    // axes only for parameters the user provided; FamilySpec applies
    // defaults and the constrained-weight derivation for the rest
    let mut axes: Vec<(&'static str, Axis)> = Vec::new();
    for (name, text) in params.given() {
        if !family.param_names().contains(&name) {
            return Err(CliError::from(entwit::Error::BadParameter {
                violations: vec![format!(
                    "parameter {name} does not belong to family {}",
                    family.name()
                )],
            }));
        }
        axes.push((name, parse_axis(name, text)?));
    }
    let label_axes: Vec<usize> = {
        let ranged: Vec<usize> = (0..axes.len()).filter(|&i| axes[i].1.ranged).collect();
        if ranged.is_empty() {
            (0..axes.len()).collect()
        } else {
            ranged
        }
    };

    let mut rows = Vec::new();
    let mut index = vec![0usize; axes.len()];
    let with_pos_ratio = family == Family::BellDiagonal;
    loop {
        let mut assignment = BTreeMap::new();
        for (slot, (name, axis)) in axes.iter().enumerate() {
            assignment.insert(name.to_string(), axis.values[index[slot]]);
        }
        let label = if axes.is_empty() {
            family
                .defaults()
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";")
        } else {
            label_axes
                .iter()
                .map(|&i| format!("{}={}", axes[i].0, axes[i].1.values[index[i]]))
                .collect::<Vec<_>>()
                .join(";")
        };
        rows.push(evaluate_row(
            family,
            &assignment,
            label,
            &map_params,
            tol,
            ct_grid,
            with_pos_ratio,
        )?);

        // advance the mixed-radix counter; last axis fastest
        if axes.is_empty() {
            return Ok(ScanTable {
                rows,
                with_pos_ratio,
            });
        }
        let mut slot = axes.len();
        loop {
            if slot == 0 {
                return Ok(ScanTable {
                    rows,
                    with_pos_ratio,
                });
            }
            slot -= 1;
            index[slot] += 1;
            if index[slot] < axes[slot].1.values.len() {
                break;
            }
            index[slot] = 0;
        }
    }
}

fn evaluate_row(
    family: Family,
    assignment: &BTreeMap<String, f64>,
    label: String,
    map_params: &MapParams,
    tol: f64,
    ct_grid: &[(f64, f64)],
    with_pos_ratio: bool,
) -> Result<ScanRow, CliError> {
    let spec = FamilySpec::new(family, assignment).map_err(CliError::from)?;
    let state = match spec.build() {
        Ok(s) => s,
        Err(err) => {
            // out-of-range grid points are reported, not fatal
            return Ok(ScanRow {
                param: label,
                ppt_min_eig: None,
                ccnr_value: None,
                dv_value: None,
                ct_best_margin: None,
                witness_value: None,
                gamma: None,
                verdict: format!("invalid ({err})"),
                pos_ratio: None,
            });
        }
    };
    let ppt = criteria::ppt(&state, tol).map_err(CliError::from)?;
    let ccnr = criteria::ccnr(&state, tol).map_err(CliError::from)?;
    let dv = criteria::dv(&state, tol).map_err(CliError::from)?;
    let ct = criteria::ct_scan(&state, ct_grid, tol).map_err(CliError::from)?;
    let wit = report::witness_report(&state, map_params, None, tol);
    let detected = ppt.detected
        || ccnr.detected
        || dv.detected
        || ct.detected
        || wit.as_ref().is_some_and(|w| w.verdict == "entangled");
    let pos_ratio = if with_pos_ratio {
        match posmap::positivity_verdict(&state, tol) {
            Ok(v) if v.kind == PositivityKind::RatioLowerBound => v.ratio_bound,
            _ => None,
        }
    } else {
        None
    };
    Ok(ScanRow {
        param: label,
        ppt_min_eig: Some(ppt.value),
        ccnr_value: Some(ccnr.value),
        dv_value: Some(dv.value),
        ct_best_margin: Some(ct.margin()),
        witness_value: wit.as_ref().map(|w| w.value),
        gamma: wit.as_ref().map(|w| w.gamma),
        verdict: if detected { "entangled" } else { "undetected" }.into(),
        pos_ratio,
    })
}
