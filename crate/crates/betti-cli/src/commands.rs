//! Subcommand implementations. Everything here is plumbing: the mathematics
//! lives in `betti-core`, and this module only decides what to compute, where
//! cache files live, and how results are rendered.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use betti_core::asymptotics::{
    b_moments_derived, gamma, lambda, rho_derivs_at_1, rho_modulus_scan, variance_offset,
    variance_slope, Family,
};
use betti_core::gallery::{flag_betti, git_betti, hilb_series, SurfaceBetti, A2, P1XP1, P2};
use betti_core::moduli::{betti_fm, betti_m0n, solve_phi, solve_psi};
use betti_core::quotient::{
    conjecture_diagnostics, ingest_json, predict_fm_quotient, render_table1_csv, table1_report,
    IngestReport,
};
use betti_core::report::{
    diagnose_table, fmt_float, render_diagnostics_csv, render_plot_csv, DiagnoseOptions,
    DiagnosticsReport,
};
use betti_core::statistics::{plot_data, BettiDistribution};
use betti_core::verify::{run_identity_suite, validate_cached_table};
use betti_core::zseries::ZSeries;
use betti_core::{BettiTable, Error, Result, Space};
use serde_json::json;

use crate::cache;
use crate::{Cli, Cmd, Format, TextFormat};

pub fn run(cli: Cli) -> Result<ExitCode> {
    let cache_dir = cache::resolve_dir(cli.cache_dir.clone());
    let precision = cli.precision;
    match cli.cmd {
        Cmd::Compute {
            spaces,
            max_n,
            surface,
            force,
        } => {
            let selectors = parse_selectors(&spaces, surface.as_deref())?;
            cmd_compute(&cache_dir, &selectors, max_n, force)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Diagnose {
            spaces,
            max_n,
            n,
            format,
            ulc_r,
            window_c,
            lle_window,
            formula_moments,
        } => {
            let selectors = parse_selectors(&spaces, None)?;
            let opts = DiagnoseOptions {
                lle_window,
                ulc_r,
                window_c,
                formula_moments,
            };
            cmd_diagnose(&cache_dir, &selectors, max_n, n, &opts, format, precision)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            max_n,
            oracle_depth,
            format,
        } => cmd_verify(&cache_dir, max_n, oracle_depth, format),
        Cmd::PlotData { space, n, format } => {
            cmd_plot_data(&cache_dir, &space, n, format, precision)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Gallery {
            max_n,
            git_max,
            format,
        } => {
            cmd_gallery(max_n, git_max, format, precision)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::IngestQuotient {
            input,
            provenance,
            format,
        } => cmd_ingest_quotient(&input, provenance, format),
        Cmd::Table1 {
            input,
            rows,
            format,
        } => {
            cmd_table1(&input, rows.as_deref(), format)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Asymptotics {
            grid_points,
            exclusion_radius,
            format,
        } => {
            cmd_asymptotics(grid_points, exclusion_radius, format, precision)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

// ---------------------------------------------------------------- selectors

#[derive(Clone, Copy)]
struct Selector {
    space: Space,
    surface: Option<SurfaceBetti>,
}

impl Selector {
    fn label(&self) -> String {
        match (self.space, self.surface) {
            (Space::Hilb, Some(s)) => format!("Hilb-{}", s.name()),
            _ => self.space.as_str().to_string(),
        }
    }

    fn file_name(&self, n: u32) -> String {
        cache::table_file_name(self.space, self.surface.as_ref(), n)
    }
}

/// Accepts the core space names (any case) plus `Hilb-<surface>` compounds;
/// a bare `Hilb` takes the surface from `--surface`, defaulting to P2.
fn parse_selector(raw: &str, surface_flag: Option<&str>) -> Result<Selector> {
    let lower = raw.to_ascii_lowercase();
    if let Some(rest) = lower.strip_prefix("hilb-") {
        return Ok(Selector {
            space: Space::Hilb,
            surface: Some(SurfaceBetti::parse(rest)?),
        });
    }
    let space = match lower.as_str() {
        "m0n" => Space::M0n,
        "fm" => Space::Fm,
        "git" => Space::Git,
        "flag" => Space::Flag,
        "hilb" => Space::Hilb,
        "m0nquot" => Space::M0nQuot,
        "m0n1quot" => Space::M0n1Quot,
        "fmquot" => Space::FmQuot,
        _ => {
            return Err(Error::Domain(format!(
                "unknown space selector \"{raw}\" (expected M0n, FM, GIT, Flag, \
                 Hilb[-P2|-P1xP1|-A2], M0nQuot, M0n1Quot or FMQuot)"
            )))
        }
    };
    let surface = if space == Space::Hilb {
        Some(match surface_flag {
            Some(name) => SurfaceBetti::parse(name)?,
            None => P2,
        })
    } else {
        None
    };
    Ok(Selector { space, surface })
}

fn parse_selectors(raw: &[String], surface_flag: Option<&str>) -> Result<Vec<Selector>> {
    raw.iter().map(|s| parse_selector(s, surface_flag)).collect()
}

/// The n sweep for one family through max_n. GIT skips even n (strictly
/// semistable points); the other families are contiguous from their minimum.
fn sweep(space: Space, max_n: u32) -> Result<Vec<u32>> {
    let min = space.min_n();
    if max_n < min {
        return Err(Error::Domain(format!(
            "--max-n {max_n} is below the smallest {space} index {min}"
        )));
    }
    let ns = (min..=max_n)
        .filter(|n| space != Space::Git || n % 2 == 1)
        .collect();
    Ok(ns)
}

fn reject_quotient(sel: &Selector, what: &str) -> Result<()> {
    if sel.space.is_quotient() {
        return Err(Error::Domain(format!(
            "{} tables are external data, not solver output; {what}",
            sel.space
        )));
    }
    Ok(())
}

// ------------------------------------------------------------------ compute

struct ComputePlan {
    sel: Selector,
    ns: Vec<u32>,
    missing: BTreeSet<u32>,
}

fn cmd_compute(cache_dir: &Path, selectors: &[Selector], max_n: u32, force: bool) -> Result<()> {
    let mut plans = Vec::new();
    for sel in selectors {
        reject_quotient(sel, "ingest them with `betti ingest-quotient`")?;
        let ns = sweep(sel.space, max_n)?;
        let missing: BTreeSet<u32> = ns
            .iter()
            .copied()
            .filter(|&n| force || !cache_dir.join(sel.file_name(n)).exists())
            .collect();
        plans.push(ComputePlan {
            sel: *sel,
            ns,
            missing,
        });
    }

    // Solve each generating function once, at the largest order any plan needs.
    let mut phi_order = None;
    let mut psi_order = None;
    for p in &plans {
        let top = match p.missing.iter().next_back() {
            Some(&n) => n as usize,
            None => continue,
        };
        match p.sel.space {
            Space::M0n => phi_order = Some(phi_order.unwrap_or(0).max(top - 1)),
            Space::Fm => {
                phi_order = Some(phi_order.unwrap_or(0).max(top));
                psi_order = Some(psi_order.unwrap_or(0).max(top));
            }
            _ => {}
        }
    }
    let phi = match phi_order {
        Some(order) => Some(solve_phi(order)?),
        None => None,
    };
    let psi = match psi_order {
        Some(order) => Some(solve_psi(order, phi.as_ref().expect("phi covers psi"))?),
        None => None,
    };

    let (mut written, mut reused) = (0u32, 0u32);
    for p in &plans {
        let hilb = match (p.sel.space, p.missing.iter().next_back()) {
            (Space::Hilb, Some(&top)) => Some(hilb_series(
                p.sel.surface.expect("Hilb selector carries a surface"),
                top,
            )?),
            _ => None,
        };
        for &n in &p.ns {
            let path = cache_dir.join(p.sel.file_name(n));
            if !p.missing.contains(&n) {
                println!("cached {}", path.display());
                reused += 1;
                continue;
            }
            let table = match p.sel.space {
                Space::M0n => betti_m0n(n, phi.as_ref().expect("phi solved"))?,
                Space::Fm => betti_fm(n, psi.as_ref().expect("psi solved"))?,
                Space::Git => git_betti(n)?,
                Space::Flag => flag_betti(n)?,
                Space::Hilb => hilb.as_ref().expect("series computed")[n as usize].clone(),
                _ => unreachable!("quotient selectors rejected above"),
            };
            cache::write_atomic(&path, &cache::render_table_json(&table))?;
            println!("wrote {}", path.display());
            written += 1;
        }
    }
    println!("{written} written, {reused} cached");
    Ok(())
}

// ----------------------------------------------------------------- diagnose

fn read_cached(cache_dir: &Path, sel: &Selector, n: u32) -> Result<BettiTable> {
    let path = cache_dir.join(sel.file_name(n));
    if !path.exists() {
        return Err(Error::Domain(format!(
            "no cached table at {}; run `betti compute --space {} --max-n {}` (or higher) first",
            path.display(),
            sel.label(),
            n
        )));
    }
    let table = validate_cached_table(&path)?;
    if table.space() != sel.space || table.n() != n {
        return Err(Error::InvalidTable {
            context: path.display().to_string(),
            reason: format!(
                "file name says {} n={n}, contents say {} n={}",
                sel.space,
                table.space(),
                table.n()
            ),
        });
    }
    Ok(table)
}

fn cmd_diagnose(
    cache_dir: &Path,
    selectors: &[Selector],
    max_n: Option<u32>,
    single_n: Option<u32>,
    opts: &DiagnoseOptions,
    format: Format,
    precision: Option<usize>,
) -> Result<()> {
    let mut rows: Vec<DiagnosticsReport> = Vec::new();
    for sel in selectors {
        reject_quotient(sel, "diagnose them with `betti ingest-quotient`")?;
        let ns = match (single_n, max_n) {
            (Some(n), _) => vec![n],
            (None, Some(max)) => sweep(sel.space, max)?,
            (None, None) => {
                return Err(Error::Domain(
                    "pass --max-n for a sweep or --n for a single table".into(),
                ))
            }
        };
        for n in ns {
            let table = read_cached(cache_dir, sel, n)?;
            match diagnose_table(&table, opts) {
                Ok(row) => rows.push(row),
                // one-point tables at the low end of a sweep carry no
                // distribution; skip them unless explicitly requested
                Err(Error::ZeroVariance) if single_n.is_none() => continue,
                Err(e) => return Err(e),
            }
        }
    }
    match format {
        Format::Csv => print!("{}", render_diagnostics_csv(&rows, precision)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
    }
    Ok(())
}

// ------------------------------------------------------------------- verify

struct CacheCheck {
    file: String,
    passed: bool,
    detail: String,
}

fn verify_cache_file(
    cache_dir: &Path,
    name: &str,
    max_n: u32,
    phi: &mut Option<ZSeries>,
    psi: &mut Option<ZSeries>,
) -> Result<String> {
    let path = cache_dir.join(name);
    let (space, surface, n) = cache::parse_file_name(name)?;
    let table = validate_cached_table(&path)?;
    if table.space() != space || table.n() != n {
        return Err(Error::InvalidTable {
            context: path.display().to_string(),
            reason: format!(
                "file name says {space} n={n}, contents say {} n={}",
                table.space(),
                table.n()
            ),
        });
    }
    let recomputed = match space {
        Space::M0n if n <= max_n + 1 => {
            if phi.is_none() {
                *phi = Some(solve_phi(max_n as usize)?);
            }
            Some(betti_m0n(n, phi.as_ref().expect("just solved"))?)
        }
        Space::Fm if n <= max_n => {
            if phi.is_none() {
                *phi = Some(solve_phi(max_n as usize)?);
            }
            if psi.is_none() {
                *psi = Some(solve_psi(max_n as usize, phi.as_ref().expect("just solved"))?);
            }
            Some(betti_fm(n, psi.as_ref().expect("just solved"))?)
        }
        Space::Git => Some(git_betti(n)?),
        Space::Flag => Some(flag_betti(n)?),
        Space::Hilb if n <= max_n => {
            let s = surface.expect("Hilb file names carry a surface");
            Some(
                hilb_series(s, n)?
                    .pop()
                    .expect("series covers n = 0 through n"),
            )
        }
        _ => None,
    };
    match recomputed {
        Some(fresh) if fresh != table => Err(Error::InvalidTable {
            context: path.display().to_string(),
            reason: "cached values differ from recomputation".into(),
        }),
        Some(_) => Ok("matches recomputation".into()),
        None => Ok("structural checks passed (n above the recomputation bound)".into()),
    }
}

fn cmd_verify(
    cache_dir: &Path,
    max_n: u32,
    oracle_depth: u32,
    format: TextFormat,
) -> Result<ExitCode> {
    let suite = run_identity_suite(max_n as usize, oracle_depth as usize);

    let mut cache_checks: Vec<CacheCheck> = Vec::new();
    if cache_dir.is_dir() {
        let mut names: Vec<String> = fs::read_dir(cache_dir)?
            .filter_map(|entry| entry.ok()?.file_name().into_string().ok())
            .filter(|name| name.ends_with(".json"))
            .collect();
        names.sort();
        let (mut phi, mut psi) = (None, None);
        for name in names {
            let outcome = verify_cache_file(cache_dir, &name, max_n, &mut phi, &mut psi);
            cache_checks.push(match outcome {
                Ok(detail) => CacheCheck {
                    file: name,
                    passed: true,
                    detail,
                },
                Err(e) => CacheCheck {
                    file: name,
                    passed: false,
                    detail: e.to_string(),
                },
            });
        }
    }

    let all_passed = suite.all_passed() && cache_checks.iter().all(|c| c.passed);
    match format {
        TextFormat::Text => {
            print!("{}", suite.render_text());
            for c in &cache_checks {
                println!(
                    "[{}] cache {}: {}",
                    if c.passed { "ok" } else { "FAIL" },
                    c.file,
                    c.detail
                );
            }
            println!("VERIFY: {}", if all_passed { "PASS" } else { "FAIL" });
        }
        TextFormat::Json => {
            let body = json!({
                "identity_checks": suite.checks,
                "cache_checks": cache_checks
                    .iter()
                    .map(|c| json!({"file": c.file, "passed": c.passed, "detail": c.detail}))
                    .collect::<Vec<_>>(),
                "all_passed": all_passed,
            });
            println!("{}", serde_json::to_string_pretty(&body)?);
        }
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

// ---------------------------------------------------------------- plot-data

fn single_table(cache_dir: &Path, sel: &Selector, n: u32) -> Result<BettiTable> {
    reject_quotient(sel, "plot them from the ingested dataset")?;
    if sel.space == Space::Git && n % 2 == 0 {
        return Err(Error::Domain(format!(
            "GIT tables exist for odd n only (n = {n} has strictly semistable points)"
        )));
    }
    if n < sel.space.min_n() {
        return Err(Error::Domain(format!(
            "{} starts at n = {}, got n = {n}",
            sel.label(),
            sel.space.min_n()
        )));
    }
    let path = cache_dir.join(sel.file_name(n));
    if path.exists() {
        return read_cached(cache_dir, sel, n);
    }
    match sel.space {
        Space::M0n => betti_m0n(n, &solve_phi(n as usize - 1)?),
        Space::Fm => {
            let phi = solve_phi(n as usize)?;
            betti_fm(n, &solve_psi(n as usize, &phi)?)
        }
        Space::Git => git_betti(n),
        Space::Flag => flag_betti(n),
        Space::Hilb => Ok(hilb_series(sel.surface.expect("surface set"), n)?
            .pop()
            .expect("series covers n = 0 through n")),
        _ => unreachable!("quotient selectors rejected above"),
    }
}

fn cmd_plot_data(
    cache_dir: &Path,
    space: &str,
    n: u32,
    format: Format,
    precision: Option<usize>,
) -> Result<()> {
    let sel = parse_selector(space, None)?;
    let table = single_table(cache_dir, &sel, n)?;
    let rows = plot_data(&BettiDistribution::new(table))?;
    match format {
        Format::Csv => print!("{}", render_plot_csv(&rows, precision)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
    }
    Ok(())
}

// ------------------------------------------------------------------ gallery

struct KsTrend {
    family: String,
    points: Vec<(u32, f64)>,
}

impl KsTrend {
    fn summary(&self, precision: Option<usize>) -> String {
        let (n0, k0) = self.points[0];
        let (n1, k1) = *self.points.last().expect("non-empty by construction");
        let min = self.points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let max = self.points.iter().map(|p| p.1).fold(0.0, f64::max);
        format!(
            "ks-trend {}: ks({}) = {}, ks({}) = {}, min = {}, max = {}",
            self.family,
            n0,
            fmt_float(k0, precision),
            n1,
            fmt_float(k1, precision),
            fmt_float(min, precision),
            fmt_float(max, precision),
        )
    }
}

fn cmd_gallery(
    max_n: u32,
    git_max: u32,
    format: Format,
    precision: Option<usize>,
) -> Result<()> {
    let opts = DiagnoseOptions::default();
    let mut rows: Vec<DiagnosticsReport> = Vec::new();
    let mut trends: Vec<KsTrend> = Vec::new();

    let mut push_family =
        |family: String, tables: Vec<BettiTable>, rows: &mut Vec<DiagnosticsReport>| -> Result<()> {
            let mut points = Vec::new();
            for table in tables {
                match diagnose_table(&table, &opts) {
                    Ok(row) => {
                        points.push((row.n, row.ks));
                        rows.push(row);
                    }
                    Err(Error::ZeroVariance) => continue,
                    Err(e) => return Err(e),
                }
            }
            if !points.is_empty() {
                trends.push(KsTrend { family, points });
            }
            Ok(())
        };

    for surface in [P2, P1XP1, A2] {
        push_family(
            format!("Hilb-{}", surface.name()),
            hilb_series(surface, max_n)?,
            &mut rows,
        )?;
    }
    let git_tables = sweep(Space::Git, git_max)?
        .into_iter()
        .map(git_betti)
        .collect::<Result<Vec<_>>>()?;
    push_family("GIT".into(), git_tables, &mut rows)?;
    let flag_tables = sweep(Space::Flag, max_n)?
        .into_iter()
        .map(flag_betti)
        .collect::<Result<Vec<_>>>()?;
    push_family("Flag".into(), flag_tables, &mut rows)?;

    match format {
        Format::Csv => {
            print!("{}", render_diagnostics_csv(&rows, precision));
            for t in &trends {
                println!("# {}", t.summary(precision));
            }
        }
        Format::Json => {
            let body = json!({
                "rows": rows,
                "trends": trends
                    .iter()
                    .map(|t| {
                        json!({
                            "family": t.family,
                            "n_first": t.points[0].0,
                            "ks_first": t.points[0].1,
                            "n_last": t.points.last().expect("non-empty").0,
                            "ks_last": t.points.last().expect("non-empty").1,
                            "ks_min": t.points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
                            "ks_max": t.points.iter().map(|p| p.1).fold(0.0, f64::max),
                        })
                    })
                    .collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&body)?);
        }
    }
    Ok(())
}

// ----------------------------------------------------------------- quotient

/// Read a file with the path spliced into any I/O error.
fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

fn ingest_input(input: &Path, provenance: Option<String>) -> Result<IngestReport> {
    let text = read_file(input)?;
    let provenance = provenance.unwrap_or_else(|| {
        input
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| input.display().to_string())
    });
    ingest_json(&text, &provenance)
}

fn cmd_ingest_quotient(
    input: &Path,
    provenance: Option<String>,
    format: TextFormat,
) -> Result<ExitCode> {
    let report = ingest_input(input, provenance)?;

    // Predicted FM-quotient tables vs the independently ingested ones, for
    // every n where both sides are available.
    let mut cross: Vec<(u32, &'static str)> = Vec::new();
    let mut mismatches = 0u32;
    if let (Some(m0n1), Some(fmq)) = (
        report.dataset(Space::M0n1Quot),
        report.dataset(Space::FmQuot),
    ) {
        for (&n, ingested) in &fmq.tables {
            if n < 2 {
                continue;
            }
            match predict_fm_quotient(m0n1, n) {
                Ok(predicted) if predicted == *ingested => cross.push((n, "ok")),
                Ok(_) => {
                    mismatches += 1;
                    cross.push((n, "MISMATCH"));
                }
                Err(Error::MissingTable(_)) => cross.push((n, "skipped (missing inputs)")),
                Err(e) => return Err(e),
            }
        }
    }

    let conjecture = conjecture_diagnostics(&report);

    match format {
        TextFormat::Text => {
            for family in [Space::M0nQuot, Space::M0n1Quot, Space::FmQuot] {
                if let Some(ds) = report.dataset(family) {
                    let lo = ds.tables.keys().next().expect("non-empty dataset");
                    let hi = ds.tables.keys().next_back().expect("non-empty dataset");
                    println!("{family}: {} tables, n = {lo}..{hi}", ds.tables.len());
                }
            }
            for w in &report.warnings {
                println!("warning: {w}");
            }
            for (n, status) in &cross {
                println!("fm-prediction n={n}: {status}");
            }
            match &conjecture {
                Ok(c) => {
                    for t in &c.trends {
                        println!(
                            "variance-fit {}: slope = {}, intercept = {}, ks {} -> {}",
                            t.family,
                            fmt_float(t.var_slope, None),
                            fmt_float(t.var_intercept, None),
                            fmt_float(t.ks_first, None),
                            fmt_float(t.ks_last, None),
                        );
                    }
                    if let Some(spread) = c.slope_rel_spread {
                        println!(
                            "variance slopes agree to a relative spread of {}",
                            fmt_float(spread, None)
                        );
                    }
                }
                Err(e) => println!("trend fit skipped: {e}"),
            }
            println!(
                "INGEST: {} ({} tables)",
                if mismatches == 0 { "OK" } else { "FAIL" },
                report.table_count()
            );
        }
        TextFormat::Json => {
            let tables: serde_json::Value = serde_json::from_str(&report.to_canonical_json())?;
            let body = json!({
                "tables": tables,
                "warnings": report.warnings,
                "fm_cross_validation": cross
                    .iter()
                    .map(|(n, status)| json!({"n": n, "status": status}))
                    .collect::<Vec<_>>(),
                "conjecture": conjecture.ok(),
                "ok": mismatches == 0,
            });
            println!("{}", serde_json::to_string_pretty(&body)?);
        }
    }
    Ok(if mismatches == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_table1(input: &Path, rows: Option<&str>, format: Format) -> Result<()> {
    let report = ingest_input(input, None)?;
    let ns: Option<Vec<u32>> = match rows {
        Some(list) => Some(
            list.split(',')
                .map(|part| {
                    part.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Domain(format!("bad n \"{part}\" in --rows")))
                })
                .collect::<Result<Vec<u32>>>()?,
        ),
        None => None,
    };
    let table = table1_report(&report, ns.as_deref());
    match format {
        Format::Csv => print!("{}", render_table1_csv(&table)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&table)?),
    }
    Ok(())
}

// -------------------------------------------------------------- asymptotics

fn cmd_asymptotics(
    grid_points: usize,
    exclusion_radius: f64,
    format: TextFormat,
    precision: Option<usize>,
) -> Result<()> {
    let scan = rho_modulus_scan(grid_points, exclusion_radius)?;
    let [rho1, drho1, ddrho1] = rho_derivs_at_1();
    let (mean_b, var_b) = b_moments_derived();
    let slope = variance_slope();
    let offsets = [
        ("M0n", variance_offset(Family::M0n)),
        ("FM", variance_offset(Family::Fm)),
    ];
    let p = precision;

    match format {
        TextFormat::Text => {
            println!("rho(1)   = {} = {}", rho1, fmt_float(rho1.eval_f64(), p));
            println!("rho'(1)  = {} = {}", drho1, fmt_float(drho1.eval_f64(), p));
            println!(
                "rho''(1) = {} = {}",
                ddrho1,
                fmt_float(ddrho1.eval_f64(), p)
            );
            println!("lambda(1) = {}", fmt_float(lambda(1.0)?, p));
            println!("gamma(1)  = {}", fmt_float(gamma(1.0)?, p));
            println!(
                "per-step mean m(B) = {} = {}",
                mean_b,
                fmt_float(mean_b.eval_f64(), p)
            );
            println!(
                "per-step variance v(B) = {} = {}",
                var_b,
                fmt_float(var_b.eval_f64(), p)
            );
            println!(
                "variance slope (both families) = {} = {}",
                slope,
                fmt_float(slope.eval_f64(), p)
            );
            for (family, offset) in &offsets {
                println!(
                    "variance offset {} (series index) = {} = {}",
                    family,
                    offset,
                    fmt_float(offset.eval_f64(), p)
                );
            }
            println!("mean formulas: M0n at n -> (n-3)/2, FM at n -> n/2");
            println!(
                "modulus scan ({} points): min |rho| = {} at theta = {}",
                scan.grid_points,
                fmt_float(scan.min_modulus, p),
                fmt_float(scan.min_theta, p)
            );
            match (scan.outside_min_modulus, scan.growth_ratio) {
                (Some(outside), Some(ratio)) => println!(
                    "outside |u-1| >= {}: min |rho| = {}, growth ratio K = {}",
                    fmt_float(scan.exclusion_radius, p),
                    fmt_float(outside, p),
                    fmt_float(ratio, p)
                ),
                _ => println!("no exclusion disc requested; K not computed"),
            }
        }
        TextFormat::Json => {
            let exact = |e: &betti_core::symbolic::EExpr| {
                json!({"exact": e.to_string(), "value": e.eval_f64()})
            };
            let body = json!({
                "rho_at_1": exact(&rho1),
                "rho_prime_at_1": exact(&drho1),
                "rho_second_at_1": exact(&ddrho1),
                "lambda_at_1": lambda(1.0)?,
                "gamma_at_1": gamma(1.0)?,
                "per_step_mean": exact(&mean_b),
                "per_step_variance": exact(&var_b),
                "variance_slope": exact(&slope),
                "variance_offset_m0n_series_index": exact(&offsets[0].1),
                "variance_offset_fm": exact(&offsets[1].1),
                "scan": scan,
            });
            println!("{}", serde_json::to_string_pretty(&body)?);
        }
    }
    Ok(())
}
