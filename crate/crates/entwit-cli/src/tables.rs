//! Detection-range summaries regenerated by root-bracketing each criterion's
//! margin, and the Choi-spectrum printout against its closed form.

use entwit::criteria;
use entwit::posmap::{self, MapParams};
use entwit::statezoo::{kye_state, noisy_bes};
use entwit::witness;
use entwit::{BipartiteState, C64};

use crate::report::fmt_sig;
use crate::CliError;

const BISECT_TOL: f64 = 1e-6;
const GRID_POINTS: usize = 197;

/// Margins of the four comparison criteria and the witness at a state: a
/// positive margin means detection.
#[derive(Clone, Copy)]
struct Margins {
    dv: f64,
    ccnr: f64,
    ct: f64,
    witness: f64,
}

fn margins_at(state: &BipartiteState, params: &MapParams, tol: f64) -> Result<Margins, CliError> {
    let dv = criteria::dv(state, tol).map_err(CliError::from)?;
    let ccnr = criteria::ccnr(state, tol).map_err(CliError::from)?;
    let ct = criteria::ct_scan(state, &criteria::default_ct_grid(), tol).map_err(CliError::from)?;
    let gamma = witness::gamma_for_state(state, params).map_err(CliError::from)?;
    let w = witness::build_witness(params, gamma, 2);
    let witness = -witness::witness_value(state, &w).map_err(CliError::from)?;
    Ok(Margins {
        dv: dv.margin(),
        ccnr: ccnr.margin(),
        ct: ct.margin(),
        witness,
    })
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Intervals of the parameter where the cached margins are positive,
/// with crossing points sharpened by bisection of `f` to 1e-6.
fn detection_intervals<F: Fn(f64) -> f64>(
    points: &[f64],
    cached: &[f64],
    f: F,
) -> Vec<(f64, f64)> {
    let mut intervals = Vec::new();
    let mut open: Option<f64> = None;
    if cached[0] > 0.0 {
        open = Some(points[0]);
    }
    for i in 0..points.len() - 1 {
        let (fa, fb) = (cached[i], cached[i + 1]);
        if fa <= 0.0 && fb > 0.0 {
            open = Some(bisect(&f, points[i], points[i + 1]));
        } else if fa > 0.0 && fb <= 0.0 {
            if let Some(start) = open.take() {
                intervals.push((start, bisect(&f, points[i], points[i + 1])));
            }
        }
    }
    if let Some(start) = open {
        intervals.push((start, *points.last().expect("non-empty grid")));
    }
    intervals
}

fn range_text(intervals: &[(f64, f64)], hi: f64, param: &str, closed_hi: bool) -> String {
    if intervals.is_empty() {
        return "does not detect".into();
    }
    intervals
        .iter()
        .map(|&(a, b)| {
            let left = format!("{} < {param}", fmt_sig(a, 6));
            if (b - hi).abs() < 2.0 * BISECT_TOL {
                let cmp = if closed_hi { "<=" } else { "<" };
                format!("{left} {cmp} {}", fmt_sig(hi, 6))
            } else {
                format!("{left} < {}", fmt_sig(b, 6))
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

struct FamilyScan {
    points: Vec<f64>,
    margins: Vec<Margins>,
}

fn scan_family<S>(lo: f64, hi: f64, params: &MapParams, tol: f64, state_at: S) -> FamilyScan
where
    S: Fn(f64) -> BipartiteState,
{
    let points: Vec<f64> = (0..=GRID_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / GRID_POINTS as f64)
        .collect();
    let margins: Vec<Margins> = points
        .iter()
        .map(|&p| margins_at(&state_at(p), params, tol).expect("margins evaluate on the family"))
        .collect();
    FamilyScan { points, margins }
}

fn criterion_rows<S>(
    scan: &FamilyScan,
    params: &MapParams,
    tol: f64,
    state_at: S,
) -> [(&'static str, Vec<(f64, f64)>); 4]
where
    S: Fn(f64) -> BipartiteState + Copy,
{
    let single = |pick: fn(&Margins) -> f64| {
        move |p: f64| pick(&margins_at(&state_at(p), params, tol).expect("margin evaluates"))
    };
    let cached = |pick: fn(&Margins) -> f64| -> Vec<f64> {
        scan.margins.iter().map(pick).collect()
    };
    [
        (
            "dV",
            detection_intervals(&scan.points, &cached(|m| m.dv), single(|m| m.dv)),
        ),
        (
            "CCNR",
            detection_intervals(&scan.points, &cached(|m| m.ccnr), single(|m| m.ccnr)),
        ),
        (
            "CT",
            detection_intervals(&scan.points, &cached(|m| m.ct), single(|m| m.ct)),
        ),
        (
            "witness",
            detection_intervals(&scan.points, &cached(|m| m.witness), single(|m| m.witness)),
        ),
    ]
}

pub fn reproduce_table1(alpha: f64, beta: f64, tol: f64) -> Result<String, CliError> {
    let params = MapParams::new(alpha, beta).map_err(CliError::from)?;
    let state_at = |r: f64| kye_state(C64::new(1.0, 0.0), 1.0, r).expect("r in (0,1) builds");
    // scan strictly inside the open parameter interval
    let (lo, hi) = (0.015, 0.985);
    let scan = scan_family(lo, hi, &params, tol, state_at);
    let rows = criterion_rows(&scan, &params, tol, state_at);
    let mut out = String::new();
    out.push_str(&format!(
        "PPT-entangled r family (z = p = 1), 0 < r < 1; alpha = {}, beta = {}\n\n",
        fmt_sig(alpha, 6),
        fmt_sig(beta, 6)
    ));
    out.push_str(&format!("{:<10} detection range\n", "criterion"));
    for (name, intervals) in rows {
        // detection touching both scan edges spans the whole open interval
        let text = if intervals.len() == 1
            && (intervals[0].0 - lo).abs() < 2.0 * BISECT_TOL
            && (intervals[0].1 - hi).abs() < 2.0 * BISECT_TOL
        {
            "0 < r < 1".into()
        } else {
            range_text(&intervals, hi, "r", false)
        };
        out.push_str(&format!("{name:<10} {text}\n"));
    }
    Ok(out)
}

pub fn reproduce_table2(alpha: f64, beta: f64, tol: f64) -> Result<String, CliError> {
    let params = MapParams::new(alpha, beta).map_err(CliError::from)?;
    let state_at = |lam: f64| noisy_bes(lam).expect("lambda in range");
    let (lo, hi) = (0.0, 1.0);
    let scan = scan_family(lo, hi, &params, tol, state_at);
    let rows = criterion_rows(&scan, &params, tol, state_at);
    let mut out = String::new();
    out.push_str(&format!(
        "noisy mixture of the 4x4 bound entangled state, 0 <= lambda <= 1; alpha = {}, beta = {}\n\n",
        fmt_sig(alpha, 6),
        fmt_sig(beta, 6)
    ));
    out.push_str(&format!(
        "{:<10} {:<34} threshold\n",
        "criterion", "detection range"
    ));
    for (name, intervals) in rows {
        let text = range_text(&intervals, hi, "lambda", true);
        let threshold = intervals
            .first()
            .map(|&(a, _)| fmt_sig(a, 6))
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!("{name:<10} {text:<34} {threshold}\n"));
    }
    Ok(out)
}

pub fn reproduce_choi_spectrum(alpha: f64, beta: f64) -> Result<String, CliError> {
    let params = MapParams::new(alpha, beta).map_err(CliError::from)?;
    let mut eigs = posmap::choi_spectrum(&params);
    eigs.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    let mut closed = vec![
        2.0 * (alpha + beta),
        2.0 * alpha,
        2.0 * alpha,
        -2.0 * alpha,
    ];
    closed.extend(std::iter::repeat_n(0.0, 12));
    closed.sort_by(|a, b| b.total_cmp(a));
    let worst = eigs
        .iter()
        .zip(&closed)
        .map(|(z, w)| (z.re - w).abs().max(z.im.abs()))
        .fold(0.0f64, f64::max);
    let fmt_list = |vals: &[f64]| {
        vals.iter()
            .map(|v| fmt_sig(*v, 6))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let computed: Vec<f64> = eigs.iter().map(|z| z.re).collect();
    let mut out = String::new();
    out.push_str(&format!(
        "Choi spectrum at alpha = {}, beta = {}\n",
        fmt_sig(alpha, 6),
        fmt_sig(beta, 6)
    ));
    out.push_str(&format!("computed:    {}\n", fmt_list(&computed)));
    out.push_str(&format!(
        "closed form: 2(alpha+beta), 2 alpha, 2 alpha, 0 (x12), -2 alpha = {}\n",
        fmt_list(&closed)
    ));
    out.push_str(&format!("max |computed - closed form| = {worst:.2e}\n"));
    Ok(out)
}
