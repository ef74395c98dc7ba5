//! `betti`: compute, cache, diagnose, verify, and export Betti-table data
//! for the moduli families handled by `betti-core`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
//! 3 I/O error. All output is deterministic: the same inputs and flags
//! produce byte-identical bytes on stdout and in cache files.

mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "betti",
    version,
    about = "Exact Betti tables of moduli-space families and their distribution statistics",
    long_about = "Computes Poincare polynomials of the stable-curve spaces M0n, the \
Fulton-MacPherson spaces P^1[n], Hilbert schemes of surface points, GIT quotients \
(P^1)^n // SL_2 and flag varieties, caches them as JSON, and reports how close the \
normalized tables are to their Gaussian limit."
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,

    /// Decimal places for float columns (default: shortest exact rendering).
    #[arg(long, global = true)]
    pub precision: Option<usize>,

    /// Cache directory [default: $BETTI_CACHE_DIR, else ./betti-cache].
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Solve the generating functions and cache one table file per (space, n).
    ///
    /// Files are named <space>_<n>.json (Hilb_<surface>_<n>.json for Hilbert
    /// schemes) and written atomically. Existing files are reused unless
    /// --force is given.
    Compute {
        /// Space selector, repeatable: M0n, FM, GIT, Flag, Hilb[-P2|-P1xP1|-A2].
        #[arg(long = "space", required = true, value_name = "SPACE")]
        spaces: Vec<String>,

        /// Largest n to compute (GIT takes odd n only; sweeps skip even n).
        #[arg(long, value_name = "N")]
        max_n: u32,

        /// Surface preset for plain "Hilb" selectors [default: P2].
        #[arg(long, value_name = "SURFACE")]
        surface: Option<String>,

        /// Rewrite cached files even when they already exist.
        #[arg(long)]
        force: bool,
    },

    /// Statistics per cached table: moments, KS and local-limit distance to
    /// the Gaussian, log-concavity verdicts, and variance-formula residuals.
    Diagnose {
        /// Space selector, repeatable: M0n, FM, GIT, Flag, Hilb[-P2|-P1xP1|-A2].
        #[arg(long = "space", required = true, value_name = "SPACE")]
        spaces: Vec<String>,

        /// Sweep n from the family minimum through N (degenerate one-entry
        /// tables are skipped).
        #[arg(long, value_name = "N", conflicts_with = "n")]
        max_n: Option<u32>,

        /// Diagnose a single n instead of a sweep.
        #[arg(long)]
        n: Option<u32>,

        #[arg(long, value_enum, default_value = "csv")]
        format: Format,

        /// Ultra-log-concavity order r checked on the central window.
        #[arg(long, default_value_t = 3)]
        ulc_r: u32,

        /// Central-window radius factor c (window |k - d/2| <= c*sqrt(n)).
        #[arg(long, default_value_t = 1.0)]
        window_c: f64,

        /// Local-limit window half-width, in standard deviations.
        #[arg(long, default_value_t = 2.0)]
        lle_window: f64,

        /// Standardize with the closed-form moments instead of exact ones.
        #[arg(long)]
        formula_moments: bool,
    },

    /// Run the exact identity suite, then validate every cached table.
    ///
    /// Cached solver-family tables with n small enough to recompute under
    /// --max-n are compared value-for-value; closed-form families (GIT,
    /// Flag, Hilb) are always recomputed. Any failure exits with status 1
    /// and names the offending check or file.
    Verify {
        /// Order bound for the identity suite and for cache recomputation.
        #[arg(long, value_name = "N", default_value_t = 30)]
        max_n: u32,

        /// Order through which the independent reversion oracle is compared.
        #[arg(long, default_value_t = 10)]
        oracle_depth: u32,

        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },

    /// Three-column data (k, normalized_betti, gaussian_density) for one table.
    ///
    /// Reads the cache when possible and otherwise computes the single table
    /// on the fly (solver families included; nothing is written back).
    PlotData {
        /// Space selector: M0n, FM, GIT, Flag, Hilb[-P2|-P1xP1|-A2].
        #[arg(long, value_name = "SPACE")]
        space: String,

        #[arg(long)]
        n: u32,

        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },

    /// Diagnostics sweep over the reference families (Hilbert schemes on all
    /// three surface presets, GIT quotients, flag varieties) with a KS-trend
    /// summary per family.
    Gallery {
        /// Largest n for the Hilbert-scheme and flag families.
        #[arg(long, value_name = "N", default_value_t = 30)]
        max_n: u32,

        /// Largest n for the GIT family (odd n only; defaults past the
        /// flag/Hilb range because GIT tables stay cheap).
        #[arg(long, value_name = "N", default_value_t = 99)]
        git_max: u32,

        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },

    /// Validate an external quotient-table file (M0nQuot, M0n1Quot, FMQuot
    /// records), cross-check predicted FM-quotient tables against ingested
    /// ones, and report variance-growth trends.
    IngestQuotient {
        /// JSON file: array of {"space", "n", "betti"} records.
        #[arg(long, value_name = "FILE")]
        input: PathBuf,

        /// Free-text source note stored with the dataset [default: file name].
        #[arg(long)]
        provenance: Option<String>,

        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },

    /// Normalized-variance table (sigma^2/n per quotient family, 10 decimal
    /// places) from an ingested data file.
    Table1 {
        /// JSON file: array of {"space", "n", "betti"} records.
        #[arg(long, value_name = "FILE")]
        input: PathBuf,

        /// Comma-separated n values [default: every n present in the data].
        #[arg(long, value_name = "N,N,...")]
        rows: Option<String>,

        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },

    /// Closed-form singularity constants, per-step moment formulas, and the
    /// unit-circle modulus scan certifying the growth-rate gap.
    Asymptotics {
        /// Grid points for the unit-circle scan.
        #[arg(long, default_value_t = 4096)]
        grid_points: usize,

        /// Radius of the disc around u=1 excluded from the boundary minimum.
        #[arg(long, default_value_t = 0.1)]
        exclusion_radius: f64,

        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`betti ... | head`) instead of
    // panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                betti_core::Error::Io(_) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
