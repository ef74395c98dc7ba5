//! Self-verification suite: every identity the engine relies on, checked
//! end to end on freshly computed series. Each check runs in isolation and
//! reports pass/fail with a human-readable detail line, so a single broken
//! invariant never hides the others.

use serde::Serialize;

use crate::error::Result;
use crate::moduli::{
    self, betti_fm, betti_m0n, functional_equation_residual, phi_by_reversion, solve_phi,
    solve_phi_reference, solve_psi, verify_fm_identity,
};
use crate::upoly::UPoly;
use crate::zseries::{BinomialExponent, Scaling, ZSeries};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &str, detail: String) -> Self {
        CheckResult {
            name: name.to_string(),
            passed: true,
            detail,
        }
    }

    fn fail(name: &str, detail: String) -> Self {
        CheckResult {
            name: name.to_string(),
            passed: false,
            detail,
        }
    }

    fn from_result(name: &str, r: Result<String>) -> Self {
        match r {
            Ok(detail) => CheckResult::pass(name, detail),
            Err(e) => CheckResult::fail(name, e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {}: {}\n",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        out.push_str(&format!(
            "{}/{} checks passed\n",
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len()
        ));
        out
    }
}

fn check_reversion_oracle(oracle_depth: usize) -> Result<String> {
    let solved = solve_phi(oracle_depth)?;
    let reverted = phi_by_reversion(oracle_depth)?;
    for n in 0..=oracle_depth {
        if solved.coeff(n) != reverted.coeff(n) {
            return Err(crate::error::Error::PathDisagreement {
                n,
                lhs: solved.coeff(n).to_string(),
                rhs: reverted.coeff(n).to_string(),
            });
        }
    }
    Ok(format!(
        "recursive solution matches compositional reversion through order {oracle_depth}"
    ))
}

fn check_reference_solver(oracle_depth: usize) -> Result<String> {
    let fast = solve_phi(oracle_depth)?;
    let reference = solve_phi_reference(oracle_depth)?;
    for n in 0..=oracle_depth {
        if fast.coeff(n) != reference.coeff(n) {
            return Err(crate::error::Error::PathDisagreement {
                n,
                lhs: fast.coeff(n).to_string(),
                rhs: reference.coeff(n).to_string(),
            });
        }
    }
    Ok(format!(
        "production solver matches the substitution reference through order {oracle_depth}"
    ))
}

fn check_power_sum_reference(oracle_depth: usize) -> Result<String> {
    // Pin the log-derivative power recursion to the defining binomial sum
    // on the actual solved series, for both exponents the engine uses.
    let phi = solve_phi(oracle_depth)?;
    for exponent in [BinomialExponent::U, BinomialExponent::UPlusOne] {
        let fast = ZSeries::binomial_power(&phi, exponent)?;
        let slow = ZSeries::binomial_power_reference(&phi, exponent)?;
        for n in 0..=oracle_depth {
            if fast.coeff(n) != slow.coeff(n) {
                return Err(crate::error::Error::PathDisagreement {
                    n,
                    lhs: fast.coeff(n).to_string(),
                    rhs: slow.coeff(n).to_string(),
                });
            }
        }
    }
    Ok(format!(
        "power recursion matches the defining sum through order {oracle_depth}"
    ))
}

fn check_reversion_round_trip(oracle_depth: usize) -> Result<String> {
    // Rebuild the forward map z(w) and confirm z(w(z)) = z, a property of
    // the reversion itself rather than of the solver.
    let u2_minus_u = UPoly::from_i64s(&[0, -1, 1]);
    let mut g = vec![UPoly::zero(), UPoly::one()];
    for k in 2..=oracle_depth {
        g.push(UPoly::binomial_u(k).exact_div(&u2_minus_u)?.neg());
    }
    let g = ZSeries::from_coeffs(Scaling::Ogf, g);
    let w = ZSeries::revert_normalized(&g)?;
    let composed = ZSeries::compose(&g, &w)?;
    let identity = ZSeries::z(Scaling::Ogf, oracle_depth);
    if composed != identity {
        return Err(crate::error::Error::Domain(
            "z(w(z)) differs from z".into(),
        ));
    }
    Ok(format!(
        "compositional round-trip is exact through order {oracle_depth}"
    ))
}

fn check_functional_equation(phi: &ZSeries) -> Result<String> {
    let residual = functional_equation_residual(phi)?;
    if !residual.is_zero() {
        return Err(crate::error::Error::Domain(format!(
            "nonzero residual {residual:?}"
        )));
    }
    Ok(format!(
        "defining equation residual vanishes through order {}",
        phi.order()
    ))
}

fn check_psi_paths(max_n: usize, phi: &ZSeries) -> Result<(ZSeries, String)> {
    // solve_psi already enforces binomial-power vs product-form agreement.
    let psi = solve_psi(max_n, phi)?;
    for n in 2..=max_n {
        let check = verify_fm_identity(phi, &psi, n)?;
        if !check.holds {
            return Err(crate::error::Error::PathDisagreement {
                n,
                lhs: check.lhs.to_string(),
                rhs: check.rhs.to_string(),
            });
        }
    }
    Ok((
        psi,
        format!("binomial power, product form, and term recurrence agree for n <= {max_n}"),
    ))
}

fn check_betti_extraction(max_n: usize, phi: &ZSeries, psi: &ZSeries) -> Result<String> {
    let mut count = 0usize;
    for n in 3..=(max_n as u32 + 1) {
        let t = betti_m0n(n, phi)?;
        if !t.is_palindromic() {
            return Err(crate::error::Error::InvalidTable {
                context: format!("M0n n={n}"),
                reason: "not palindromic".into(),
            });
        }
        count += 1;
    }
    for n in 0..=(max_n as u32) {
        let t = betti_fm(n, psi)?;
        if !t.is_palindromic() {
            return Err(crate::error::Error::InvalidTable {
                context: format!("FM n={n}"),
                reason: "not palindromic".into(),
            });
        }
        count += 1;
    }
    Ok(format!(
        "{count} tables extracted with nonnegative integer palindromic entries"
    ))
}

/// Run the full identity suite. `max_n` bounds the series order for the
/// main checks; `oracle_depth` bounds the (more expensive) reversion
/// cross-checks.
pub fn run_identity_suite(max_n: usize, oracle_depth: usize) -> VerifyReport {
    let mut checks = Vec::new();

    checks.push(CheckResult::from_result(
        "series-vs-reversion",
        check_reversion_oracle(oracle_depth),
    ));
    checks.push(CheckResult::from_result(
        "series-vs-reference",
        check_reference_solver(oracle_depth),
    ));
    checks.push(CheckResult::from_result(
        "power-sum-reference",
        check_power_sum_reference(oracle_depth),
    ));
    checks.push(CheckResult::from_result(
        "reversion-round-trip",
        check_reversion_round_trip(oracle_depth),
    ));

    // One phi solve, order max_n + 1 so that M0n extraction can reach
    // n = max_n + 1 (entry n - 1).
    let phi = match solve_phi(max_n + 1) {
        Ok(phi) => phi,
        Err(e) => {
            checks.push(CheckResult::fail("series-solve", e.to_string()));
            return VerifyReport { checks };
        }
    };
    checks.push(CheckResult::from_result(
        "defining-equation",
        check_functional_equation(&phi),
    ));

    match check_psi_paths(max_n, &phi) {
        Ok((psi, detail)) => {
            checks.push(CheckResult::pass("power-series-paths", detail));
            checks.push(CheckResult::from_result(
                "table-extraction",
                check_betti_extraction(max_n, &phi, &psi),
            ));
        }
        Err(e) => checks.push(CheckResult::fail("power-series-paths", e.to_string())),
    }

    VerifyReport { checks }
}

/// Validate one cached table file: parse it and re-run the table invariants.
/// Returns the passing table or a descriptive error naming the file.
pub fn validate_cached_table(path: &std::path::Path) -> Result<moduli::BettiTable> {
    let text = std::fs::read_to_string(path)?;
    let table: moduli::BettiTable = serde_json::from_str(&text).map_err(|e| {
        crate::error::Error::InvalidTable {
            context: path.display().to_string(),
            reason: e.to_string(),
        }
    })?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_at_small_order() {
        let report = run_identity_suite(8, 8);
        assert!(report.all_passed(), "{}", report.render_text());
        assert_eq!(report.checks.len(), 7);
    }

    #[test]
    fn text_rendering_mentions_every_check() {
        let report = run_identity_suite(5, 5);
        let text = report.render_text();
        for c in &report.checks {
            assert!(text.contains(&c.name));
        }
        assert!(text.contains("7/7 checks passed"));
    }
}
