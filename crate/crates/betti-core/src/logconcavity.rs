//! Exact log-concavity and ultra-log-concavity checks on Betti tables.
//!
//! ULC of order r at position k asks that the sequence divided by the r-th
//! power of the binomial row C(ambient_n, k) is still log-concave there:
//!
//! ```text
//! a_k^2 / C(n,k)^(2r) >= a_{k-1} a_{k+1} / (C(n,k-1) C(n,k+1))^r.
//! ```
//!
//! Everything is decided by exact big-integer cross-multiplication; no
//! float ever enters a verdict. The central window |k - d/2| <= c sqrt(n)
//! is where the Gaussian shape makes the strongest r hold.

use num::bigint::BigInt;
use num::traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moduli::BettiTable;

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num::integer::binomial(BigInt::from(n), BigInt::from(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LogConcavity {
    pub holds: bool,
    /// Smallest interior k with a_k^2 < a_{k-1} a_{k+1}, if any.
    pub first_violation: Option<usize>,
}

/// Plain log-concavity a_k^2 >= a_{k-1} a_{k+1} at every interior index.
pub fn is_log_concave(seq: &[BigInt]) -> LogConcavity {
    for k in 1..seq.len().saturating_sub(1) {
        if &seq[k] * &seq[k] < &seq[k - 1] * &seq[k + 1] {
            return LogConcavity {
                holds: false,
                first_violation: Some(k),
            };
        }
    }
    LogConcavity {
        holds: true,
        first_violation: None,
    }
}

/// r-fold ultra-log-concavity at interior index k relative to the binomial
/// row of `ambient_n`, decided by exact cross-multiplication.
pub fn ulc_at(seq: &[BigInt], r: u32, k: usize, ambient_n: usize) -> Result<bool> {
    if k == 0 || k + 1 >= seq.len() {
        return Err(Error::Domain(format!(
            "ulc needs an interior index, got k={k} for length {}",
            seq.len()
        )));
    }
    if k + 1 > ambient_n {
        return Err(Error::Domain(format!(
            "ambient row C({ambient_n}, .) too short for k={k}"
        )));
    }
    let side = binom(ambient_n, k - 1) * binom(ambient_n, k + 1);
    let center = binom(ambient_n, k);
    let lhs = &seq[k] * &seq[k] * side.pow(r);
    let rhs = &seq[k - 1] * &seq[k + 1] * (&center * &center).pow(r);
    Ok(lhs >= rhs)
}

#[derive(Debug, Clone, Serialize)]
pub struct UlcVerdict {
    pub r: u32,
    pub c: f64,
    pub ambient_n: usize,
    /// Interior indices that were actually checked.
    pub window: Vec<usize>,
    pub holds: bool,
    pub first_violation: Option<usize>,
}

/// Check r-ULC across the central window |k - d/2| <= c * sqrt(n) of a
/// table, with d its top degree (also used as the ambient binomial row).
/// An empty window holds vacuously.
pub fn central_window_ulc(table: &BettiTable, r: u32, c: f64) -> UlcVerdict {
    let d = table.top_degree();
    let half = d as f64 / 2.0;
    let radius = c * (table.n() as f64).sqrt();
    let window: Vec<usize> = (1..d.max(1))
        .filter(|&k| (k as f64 - half).abs() <= radius)
        .collect();
    let mut holds = true;
    let mut first_violation = None;
    for &k in &window {
        // interior by construction, so ulc_at cannot fail
        if !ulc_at(table.betti(), r, k, d).expect("interior index") {
            holds = false;
            first_violation = Some(k);
            break;
        }
    }
    UlcVerdict {
        r,
        c,
        ambient_n: d,
        window,
        holds,
        first_violation,
    }
}

/// Largest r <= cap for which r-ULC holds at position k (monotonicity in r
/// is not assumed; all candidates are tested). None if even r = 0 fails.
pub fn max_ulc_r(table: &BettiTable, k: usize, cap: u32) -> Result<Option<u32>> {
    let d = table.top_degree();
    let mut best = None;
    for r in 0..=cap {
        if ulc_at(table.betti(), r, k, d)? {
            best = Some(r);
        }
    }
    Ok(best)
}
