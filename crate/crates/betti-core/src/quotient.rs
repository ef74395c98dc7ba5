//! Ingestion and analysis of symmetric-quotient Betti data.
//!
//! The S_n-quotient tables (M-bar_{0,n}/S_n, M-bar_{0,n+1}/S_n, P^1[n]/S_n)
//! are not computed here; they arrive from external JSON files and are
//! validated on the way in. What this module does compute is the exact
//! consequence the generating-function identity forces on them: with
//! phibar(z) = sum_h q_h z^h (q_h the M-bar_{0,h+1}/S_h polynomial, q_1 = 1),
//! the quotient FM polynomial must be
//!
//! ```text
//! [z^n] (1 + phibar)(u^2 phibar - u(u-1) z + 1)
//!   = (1+u^2) q_n + u(1+u) q_{n-1} + u^2 sum_{h=2}^{n-2} q_h q_{n-h},
//! ```
//!
//! evaluated both as a series product and in the unrolled closed form, which
//! must agree exactly.

use num::bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::moduli::{BettiTable, Space};
use crate::report::{diagnose_table, rat_to_decimal, DiagnoseOptions, DiagnosticsReport};
use crate::statistics::{ks_distance, BettiDistribution};
use crate::upoly::{rat_to_f64, Rat, UPoly};
use crate::zseries::{Scaling, ZSeries};

/// All ingested tables of one quotient family, keyed by n.
#[derive(Debug, Clone)]
pub struct QuotientDataset {
    pub family: Space,
    pub tables: BTreeMap<u32, BettiTable>,
    pub provenance: String,
}

#[derive(Debug, Clone)]
pub struct IngestReport {
    pub datasets: Vec<QuotientDataset>,
    pub warnings: Vec<String>,
}

impl IngestReport {
    pub fn dataset(&self, family: Space) -> Option<&QuotientDataset> {
        self.datasets.iter().find(|d| d.family == family)
    }

    pub fn table_count(&self) -> usize {
        self.datasets.iter().map(|d| d.tables.len()).sum()
    }

    /// Canonical serialization: one flat array sorted by (family, n).
    pub fn to_canonical_json(&self) -> String {
        let tables: Vec<&BettiTable> = self
            .datasets
            .iter()
            .flat_map(|d| d.tables.values())
            .collect();
        serde_json::to_string_pretty(&tables).expect("tables serialize")
    }
}

#[derive(Deserialize)]
struct RawRecord {
    space: String,
    n: u32,
    betti: Vec<String>,
}

/// Parse and validate a quotient data file: a JSON array of
/// {"space", "n", "betti"} records. Structural problems (bad numbers,
/// negative entries, duplicate n, non-quotient space) reject the record
/// with its index; soft problems (broken palindromicity, implausible
/// length) are collected as warnings.
pub fn ingest_json(text: &str, provenance: &str) -> Result<IngestReport> {
    let raw: Vec<serde_json::Value> = serde_json::from_str(text)?;
    let mut datasets: BTreeMap<Space, QuotientDataset> = BTreeMap::new();
    let mut warnings = Vec::new();

    for (idx, value) in raw.into_iter().enumerate() {
        let fail = |reason: String| Error::Ingest {
            record: idx,
            reason,
        };
        let rec: RawRecord =
            serde_json::from_value(value).map_err(|e| fail(format!("bad record shape: {e}")))?;
        let space = Space::parse(&rec.space).map_err(|e| fail(e.to_string()))?;
        if !space.is_quotient() {
            return Err(fail(format!(
                "space {space} is computed by the solver, not ingested"
            )));
        }
        let betti = rec
            .betti
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| fail(format!("bad Betti number \"{s}\"")))
            })
            .collect::<Result<Vec<_>>>()?;
        let table = BettiTable::new(space, rec.n, betti).map_err(|e| fail(e.to_string()))?;
        warnings.extend(
            table
                .validation_warnings()
                .into_iter()
                .map(|w| format!("record {idx}: {w}")),
        );
        let entry = datasets.entry(space).or_insert_with(|| QuotientDataset {
            family: space,
            tables: BTreeMap::new(),
            provenance: provenance.to_string(),
        });
        if entry.tables.insert(rec.n, table).is_some() {
            return Err(fail(format!("duplicate n = {} for {space}", rec.n)));
        }
    }

    Ok(IngestReport {
        datasets: datasets.into_values().collect(),
        warnings,
    })
}

pub fn ingest_file(path: &Path) -> Result<IngestReport> {
    let text = std::fs::read_to_string(path)?;
    ingest_json(&text, &path.display().to_string())
}

/// The q_h polynomial for the series substitution; q_1 = 1 by convention,
/// everything else must be present in the dataset.
fn q_poly(dataset: &QuotientDataset, h: u32) -> Result<UPoly> {
    if h == 1 {
        return Ok(UPoly::one());
    }
    dataset
        .tables
        .get(&h)
        .map(|t| t.poincare_poly())
        .ok_or(Error::MissingTable(h))
}

/// Predict the P^1[n]/S_n Betti table from M-bar_{0,h+1}/S_h data via the
/// quotient FM identity, computing it along both paths (series product and
/// unrolled convolution) and insisting on exact agreement.
pub fn predict_fm_quotient(dataset: &QuotientDataset, n: u32) -> Result<BettiTable> {
    if dataset.family != Space::M0n1Quot {
        return Err(Error::Domain(format!(
            "prediction consumes M0n1Quot data, got {}",
            dataset.family
        )));
    }
    if n < 2 {
        return Err(Error::Domain("prediction is stated for n >= 2".into()));
    }

    // path 1: series product
    let order = n as usize;
    let mut phibar = vec![UPoly::zero(); order + 1];
    for h in 1..=n {
        phibar[h as usize] = q_poly(dataset, h)?;
    }
    let phibar = ZSeries::from_coeffs(Scaling::Ogf, phibar);
    let one = ZSeries::one(Scaling::Ogf, order);
    let z = ZSeries::z(Scaling::Ogf, order);
    let rhs = phibar
        .scale_poly(&UPoly::from_i64s(&[0, 0, 1]))
        .sub(&z.scale_poly(&UPoly::from_i64s(&[0, -1, 1])))?
        .add(&one)?;
    let by_series = one.add(&phibar)?.mul(&rhs)?.coeff(order).clone();

    // path 2: unrolled convolution
    let mut by_sum = UPoly::zero();
    by_sum.add_mul_scaled(&UPoly::from_i64s(&[1, 0, 1]), &q_poly(dataset, n)?, None);
    by_sum.add_mul_scaled(&UPoly::from_i64s(&[0, 1, 1]), &q_poly(dataset, n - 1)?, None);
    let u2 = UPoly::from_i64s(&[0, 0, 1]);
    for h in 2..=n.saturating_sub(2) {
        let prod = q_poly(dataset, h)?.mul(&q_poly(dataset, n - h)?);
        by_sum.add_mul_scaled(&u2, &prod, None);
    }

    if by_series != by_sum {
        return Err(Error::PathDisagreement {
            n: order,
            lhs: by_series.to_string(),
            rhs: by_sum.to_string(),
        });
    }

    let betti = by_series.to_nonneg_integers(&format!("predicted FMQuot n={n}"))?;
    BettiTable::new(Space::FmQuot, n, betti)
}

/// One row of the normalized-variance table: sigma^2/n per family, rendered
/// to 10 decimal places from the exact rationals.
#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub n: u32,
    pub m0n_quot: Option<String>,
    pub m0n1_quot: Option<String>,
    pub fm_quot: Option<String>,
}

pub const TABLE1_CSV_HEADER: &str = "n,M0nQuot_var_over_n,M0n1Quot_var_over_n,FMQuot_var_over_n";

fn normalized_variance_cell(report: &IngestReport, family: Space, n: u32) -> Option<String> {
    let table = report.dataset(family)?.tables.get(&n)?;
    let (_, var) = crate::statistics::moments(table);
    let normalized = var / Rat::from_integer(BigInt::from(n));
    Some(rat_to_decimal(&normalized, 10))
}

/// Normalized variances sigma^2/n for every requested n (or every n present
/// anywhere in the data when `rows` is None).
pub fn table1_report(report: &IngestReport, rows: Option<&[u32]>) -> Vec<Table1Row> {
    let ns: Vec<u32> = match rows {
        Some(ns) => ns.to_vec(),
        None => {
            let mut all: Vec<u32> = report
                .datasets
                .iter()
                .flat_map(|d| d.tables.keys().copied())
                .collect();
            all.sort_unstable();
            all.dedup();
            all
        }
    };
    ns.into_iter()
        .map(|n| Table1Row {
            n,
            m0n_quot: normalized_variance_cell(report, Space::M0nQuot, n),
            m0n1_quot: normalized_variance_cell(report, Space::M0n1Quot, n),
            fm_quot: normalized_variance_cell(report, Space::FmQuot, n),
        })
        .collect()
}

pub fn render_table1_csv(rows: &[Table1Row]) -> String {
    let mut out = String::from(TABLE1_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.n,
            r.m0n_quot.clone().unwrap_or_default(),
            r.m0n1_quot.clone().unwrap_or_default(),
            r.fm_quot.clone().unwrap_or_default(),
        ));
    }
    out
}

/// Least-squares slope fit of the variance growth of one family.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyTrend {
    pub family: Space,
    pub points: usize,
    pub var_slope: f64,
    pub var_intercept: f64,
    pub ks_first: f64,
    pub ks_last: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub rows: Vec<DiagnosticsReport>,
    pub trends: Vec<FamilyTrend>,
    /// Relative spread (max - min)/mean of the fitted slopes across
    /// families; the shared-slope conjecture predicts this stays small.
    pub slope_rel_spread: Option<f64>,
}

/// Variance-slope and KS-trend diagnostics across the ingested families,
/// quantifying how the quotient data tracks the conjectured common linear
/// variance growth.
pub fn conjecture_diagnostics(report: &IngestReport) -> Result<ConjectureReport> {
    let opts = DiagnoseOptions::default();
    let mut rows = Vec::new();
    let mut trends = Vec::new();

    for dataset in &report.datasets {
        let mut pts: Vec<(f64, f64, f64)> = Vec::new(); // (n, variance, ks)
        for (&n, table) in &dataset.tables {
            let dist = BettiDistribution::new(table.clone());
            if dist.variance_exact() == &Rat::from_integer(BigInt::from(0)) {
                continue;
            }
            rows.push(diagnose_table(table, &opts)?);
            pts.push((
                n as f64,
                rat_to_f64(dist.variance_exact()),
                ks_distance(&dist)?,
            ));
        }
        if pts.len() < 3 {
            return Err(Error::Domain(format!(
                "variance trend for {} needs at least 3 usable tables, got {}",
                dataset.family,
                pts.len()
            )));
        }
        let count = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
        trends.push(FamilyTrend {
            family: dataset.family,
            points: pts.len(),
            var_slope: slope,
            var_intercept: (sy - slope * sx) / count,
            ks_first: pts.first().unwrap().2,
            ks_last: pts.last().unwrap().2,
        });
    }

    let slope_rel_spread = if trends.len() >= 2 {
        let min = trends.iter().map(|t| t.var_slope).fold(f64::INFINITY, f64::min);
        let max = trends
            .iter()
            .map(|t| t.var_slope)
            .fold(f64::NEG_INFINITY, f64::max);
        let mean = trends.iter().map(|t| t.var_slope).sum::<f64>() / trends.len() as f64;
        Some((max - min) / mean.abs())
    } else {
        None
    };

    Ok(ConjectureReport {
        rows,
        trends,
        slope_rel_spread,
    })
}
