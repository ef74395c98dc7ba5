//! Rendering of diagnostics: one CSV row per Betti table combining the
//! Gaussian-fit statistics, the variance-formula residual and the exact
//! log-concavity verdicts, plus the decimal formatting helpers shared by
//! the report surfaces.

use num::integer::Integer;
use num::traits::{Signed, Zero};
use serde::Serialize;

use crate::asymptotics::{qp_moments, table_variance_formula, Family};
use crate::error::Result;
use crate::logconcavity::{central_window_ulc, is_log_concave};
use crate::moduli::{BettiTable, Space};
use crate::statistics::{
    ks_distance_with, local_limit_error_with, middle_betti_rel_error, BettiDistribution, PlotRow,
};
use crate::upoly::Rat;

/// Fixed-point decimal rendering of an exact rational, rounding half away
/// from zero. This is how exact variances reach the reports without passing
/// through floats.
pub fn rat_to_decimal(r: &Rat, places: usize) -> String {
    let negative = r.is_negative();
    let abs = r.abs();
    let scale = num::bigint::BigInt::from(10u32).pow(places as u32);
    let (mut q, rem) = (abs.numer() * &scale).div_rem(abs.denom());
    if &rem + &rem >= *abs.denom() {
        q += 1;
    }
    let digits = q.to_string();
    let body = if places == 0 {
        digits
    } else {
        let padded = format!("{digits:0>width$}", width = places + 1);
        let split = padded.len() - places;
        format!("{}.{}", &padded[..split], &padded[split..])
    };
    if negative && !q.is_zero() {
        format!("-{body}")
    } else {
        body
    }
}

pub fn fmt_float(x: f64, precision: Option<usize>) -> String {
    match precision {
        Some(p) => format!("{x:.p$}"),
        None => format!("{x}"),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DiagnoseOptions {
    /// Half-width of the local-limit window in units of sigma.
    pub lle_window: f64,
    /// ULC order checked across the central window.
    pub ulc_r: u32,
    /// Central window radius factor c (window |k - d/2| <= c sqrt(n)).
    pub window_c: f64,
    /// Use the closed-form moments instead of the exact ones for the
    /// Gaussian comparisons (only meaningful for the two solver families).
    pub formula_moments: bool,
}

impl Default for DiagnoseOptions {
    fn default() -> Self {
        DiagnoseOptions {
            lle_window: 2.0,
            ulc_r: 3,
            window_c: 1.0,
            formula_moments: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsReport {
    pub space: Space,
    pub n: u32,
    pub mean: f64,
    pub variance: f64,
    pub ks: f64,
    pub lle: f64,
    /// Gaussian estimate error at the middle Betti number (M0n only).
    pub mid_rel_err: Option<f64>,
    /// n * |exact variance - formula variance| (solver families only).
    pub n_var_resid: Option<f64>,
    pub log_concave: bool,
    pub ulc_r: Option<u32>,
    pub ulc_holds: Option<bool>,
    pub first_violation: Option<usize>,
}

pub const DIAGNOSTICS_CSV_HEADER: &str =
    "n,space,mean,variance,ks,lle,mid_rel_err,n_var_resid,log_concave,ulc_holds,first_violation";

fn opt_float(v: Option<f64>, precision: Option<usize>) -> String {
    v.map(|x| fmt_float(x, precision)).unwrap_or_default()
}

impl DiagnosticsReport {
    pub fn csv_row(&self, precision: Option<usize>) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.space,
            fmt_float(self.mean, precision),
            fmt_float(self.variance, precision),
            fmt_float(self.ks, precision),
            fmt_float(self.lle, precision),
            opt_float(self.mid_rel_err, precision),
            opt_float(self.n_var_resid, precision),
            self.log_concave,
            self.ulc_holds.map(|b| b.to_string()).unwrap_or_default(),
            self.first_violation
                .map(|k| k.to_string())
                .unwrap_or_default(),
        )
    }
}

/// Run the full statistics battery on one table. Degenerate (zero-variance)
/// tables surface as a ZeroVariance error; sweep drivers skip those n.
pub fn diagnose_table(table: &BettiTable, opts: &DiagnoseOptions) -> Result<DiagnosticsReport> {
    let dist = BettiDistribution::new(table.clone());
    let family = match table.space() {
        Space::M0n => Some(Family::M0n),
        Space::Fm => Some(Family::Fm),
        _ => None,
    };

    let exact_mean = dist.mean();
    let exact_var = dist.variance();
    let (mean, sd) = match (opts.formula_moments, family) {
        (true, Some(f)) => {
            let m = qp_moments(table.n() as f64, f);
            (m.mean, table_variance_formula(table.n(), f).sqrt())
        }
        _ => (exact_mean, exact_var.sqrt()),
    };

    let ks = ks_distance_with(&dist, mean, sd)?;
    let lle = local_limit_error_with(&dist, mean, sd, opts.lle_window)?;
    let mid_rel_err = if table.space() == Space::M0n && table.n() >= 4 {
        Some(middle_betti_rel_error(table)?)
    } else {
        None
    };
    let n_var_resid = family.map(|f| {
        let formula = table_variance_formula(table.n(), f);
        table.n() as f64 * (exact_var - formula).abs()
    });

    let lc = is_log_concave(table.betti());
    let (ulc_r, ulc_holds, first_violation) = if family.is_some() {
        let v = central_window_ulc(table, opts.ulc_r, opts.window_c);
        (Some(v.r), Some(v.holds), v.first_violation)
    } else {
        (None, None, lc.first_violation)
    };

    Ok(DiagnosticsReport {
        space: table.space(),
        n: table.n(),
        mean: exact_mean,
        variance: exact_var,
        ks,
        lle,
        mid_rel_err,
        n_var_resid,
        log_concave: lc.holds,
        ulc_r,
        ulc_holds,
        first_violation,
    })
}

pub fn render_diagnostics_csv(rows: &[DiagnosticsReport], precision: Option<usize>) -> String {
    let mut out = String::from(DIAGNOSTICS_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_row(precision));
        out.push('\n');
    }
    out
}

pub const PLOT_CSV_HEADER: &str = "k,normalized_betti,gaussian_density";

pub fn render_plot_csv(rows: &[PlotRow], precision: Option<usize>) -> String {
    let mut out = String::from(PLOT_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            row.k,
            fmt_float(row.normalized_betti, precision),
            fmt_float(row.gaussian_density, precision)
        ));
    }
    out
}
