//! The two main generating functions and the Betti tables extracted from
//! them.
//!
//! phi(z, u) collects the Poincare polynomials of the moduli spaces of
//! stable rational curves: (n-1)! * [z^(n-1)] phi is the Poincare polynomial
//! of M-bar_{0,n} in the half-degree variable u. It is pinned down by the
//! functional equation
//!
//! ```text
//! (1 + phi)^u = u^2 phi - u(u-1) z + 1,
//! ```
//!
//! together with phi = z + O(z^2) (the other branch, with [z^1] phi = 0, is
//! discarded). psi(z, u) = (1 + phi)^(u+1) plays the same role for the
//! Fulton-MacPherson configuration spaces P^1[n], with n! * [z^n] psi the
//! Poincare polynomial of P^1[n].
//!
//! The production solver advances one binomial convolution per order (the
//! derivative form of the equation); the reference solver expands
//! (1 + phi)^u = sum_k C(u,k) phi^k directly, isolates the z^n entry and
//! divides by u^2 - u exactly, the division having no remainder at every
//! order being a built-in consistency check on all previous orders. The two
//! must agree identically, and both are checked against a compositional
//! reversion oracle.

use num::bigint::BigInt;
use num::traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::upoly::{pascal_rows, rat_i64, Rat, UPoly};
use crate::zseries::{BinomialExponent, Scaling, ZSeries};

/// Families whose Betti tables the crate produces or ingests. The *Quot
/// variants are quotients by the symmetric group S_n; their tables come from
/// external data files, never from the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Space {
    /// M-bar_{0,n}
    M0n,
    /// P^1[n], the Fulton-MacPherson compactification
    Fm,
    /// Hilb^n(S) for a surface S
    Hilb,
    /// (P^1)^n // SL_2, odd n
    Git,
    /// Full flag variety of C^n (Mahonian reference family)
    Flag,
    /// M-bar_{0,n} / S_n
    M0nQuot,
    /// M-bar_{0,n+1} / S_n
    M0n1Quot,
    /// P^1[n] / S_n
    FmQuot,
}

impl Space {
    pub fn as_str(&self) -> &'static str {
        match self {
            Space::M0n => "M0n",
            Space::Fm => "FM",
            Space::Hilb => "Hilb",
            Space::Git => "GIT",
            Space::Flag => "Flag",
            Space::M0nQuot => "M0nQuot",
            Space::M0n1Quot => "M0n1Quot",
            Space::FmQuot => "FMQuot",
        }
    }

    pub fn parse(s: &str) -> Result<Space> {
        match s {
            "M0n" => Ok(Space::M0n),
            "FM" => Ok(Space::Fm),
            "Hilb" => Ok(Space::Hilb),
            "GIT" => Ok(Space::Git),
            "Flag" => Ok(Space::Flag),
            "M0nQuot" => Ok(Space::M0nQuot),
            "M0n1Quot" => Ok(Space::M0n1Quot),
            "FMQuot" => Ok(Space::FmQuot),
            other => Err(Error::Domain(format!("unknown space \"{other}\""))),
        }
    }

    pub fn is_quotient(&self) -> bool {
        matches!(self, Space::M0nQuot | Space::M0n1Quot | Space::FmQuot)
    }

    pub fn min_n(&self) -> u32 {
        match self {
            Space::M0n | Space::M0nQuot => 3,
            Space::Fm | Space::Hilb => 0,
            Space::Git => 5,
            Space::Flag => 1,
            Space::M0n1Quot => 2,
            Space::FmQuot => 1,
        }
    }

    /// Table length forced by the geometry, where there is one. Quotient and
    /// Hilbert tables are validated more loosely (see `validation_warnings`).
    pub fn expected_len(&self, n: u32) -> Option<usize> {
        let n = n as usize;
        match self {
            Space::M0n | Space::Git => Some(n - 2),
            Space::Fm => Some(n + 1),
            Space::Flag => Some(n * (n - 1) / 2 + 1),
            _ => None,
        }
    }

    /// Smooth proper spaces have palindromic tables by Poincare duality.
    pub fn poincare_dual(&self) -> bool {
        matches!(self, Space::M0n | Space::Fm | Space::Git | Space::Flag)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Space {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(self.as_str())
    }
}

/// Betti numbers b_0, b_2, b_4, ... of one space (odd cohomology vanishes
/// for every family in scope, so index k means degree 2k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    space: Space,
    n: u32,
    betti: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    space: String,
    n: u32,
    betti: Vec<String>,
}

impl BettiTable {
    pub fn new(space: Space, n: u32, betti: Vec<BigInt>) -> Result<Self> {
        let fail = |reason: String| Error::InvalidTable {
            context: format!("{space} n={n}"),
            reason,
        };
        if betti.is_empty() {
            return Err(fail("empty table".into()));
        }
        if n < space.min_n() {
            return Err(fail(format!("n below minimum {}", space.min_n())));
        }
        if space == Space::Git && n % 2 == 0 {
            return Err(fail("GIT quotient requires odd n".into()));
        }
        if !betti[0].is_one() {
            return Err(fail(format!("b_0 = {}, expected 1", betti[0])));
        }
        if let Some((k, b)) = betti.iter().enumerate().find(|(_, b)| **b <= BigInt::zero()) {
            return Err(fail(format!("b_{k} = {b} is not positive")));
        }
        if let Some(len) = space.expected_len(n) {
            if betti.len() != len {
                return Err(fail(format!("length {}, expected {len}", betti.len())));
            }
        }
        let table = BettiTable { space, n, betti };
        if space.poincare_dual() && !table.is_palindromic() {
            return Err(Error::InvalidTable {
                context: format!("{space} n={n}"),
                reason: "table is not palindromic".into(),
            });
        }
        Ok(table)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn betti(&self) -> &[BigInt] {
        &self.betti
    }

    /// Top nonzero cohomological half-degree.
    pub fn top_degree(&self) -> usize {
        self.betti.len() - 1
    }

    pub fn is_palindromic(&self) -> bool {
        let b = &self.betti;
        (0..b.len() / 2).all(|k| b[k] == b[b.len() - 1 - k])
    }

    pub fn euler_char(&self) -> BigInt {
        self.betti.iter().sum()
    }

    /// The Poincare polynomial sum_k b_k u^k.
    pub fn poincare_poly(&self) -> UPoly {
        UPoly::new(
            self.betti
                .iter()
                .map(|b| Rat::from_integer(b.clone()))
                .collect(),
        )
    }

    /// Soft checks applied to externally supplied (quotient) tables; the
    /// computed families enforce these as hard invariants instead.
    pub fn validation_warnings(&self) -> Vec<String> {
        let mut warns = Vec::new();
        if !self.is_palindromic() {
            warns.push(format!(
                "{} n={}: table is not palindromic",
                self.space, self.n
            ));
        }
        let max_len = match self.space {
            Space::M0nQuot => Some(self.n as usize - 2),
            Space::M0n1Quot => Some(self.n as usize - 1),
            Space::FmQuot => Some(self.n as usize + 1),
            _ => None,
        };
        if let Some(max) = max_len {
            if self.betti.len() > max {
                warns.push(format!(
                    "{} n={}: table length {} exceeds ambient dimension bound {}",
                    self.space,
                    self.n,
                    self.betti.len(),
                    max
                ));
            }
        }
        warns
    }
}

impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        RawTable {
            space: self.space.as_str().to_string(),
            n: self.n,
            betti: self.betti.iter().map(|b| b.to_string()).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let raw = RawTable::deserialize(de)?;
        let space = Space::parse(&raw.space).map_err(D::Error::custom)?;
        let betti = raw
            .betti
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| D::Error::custom(format!("bad Betti number \"{s}\"")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        BettiTable::new(space, raw.n, betti).map_err(D::Error::custom)
    }
}

/// Solve the defining equation for phi through z^order (Egf scaling, so
/// entry n is n! * [z^n] phi, an integer polynomial).
///
/// Differentiating (1+phi)^u = u^2 phi - u(u-1) z + 1 in z and eliminating
/// the power via (1+phi)^(u-1) = (u^2 phi - u(u-1) z + 1)/(1+phi) leaves a
/// relation with plain products only,
///
/// ```text
/// (u^2 phi - u(u-1) z + 1) phi' = (1 + phi)(u phi' - (u-1)),
/// ```
///
/// whose z^(n-1) entry isolates Phi_n from one binomial convolution:
///
/// ```text
/// Phi_n = (1 - (n-1)u) Phi_{n-1} + u sum_{j=1}^{n-1} C(n-1,j) Phi_j Phi_{n-j}.
/// ```
///
/// One convolution per order replaces the full power table of the direct
/// substitution (`solve_phi_reference`), which this solver is checked
/// against, along with the reversion oracle and the equation residual.
pub fn solve_phi(order: usize) -> Result<ZSeries> {
    if order < 1 {
        return Err(Error::Domain("truncation order must be at least 1".into()));
    }
    let pascal = pascal_rows(order.saturating_sub(1));
    let u = UPoly::from_i64s(&[0, 1]);

    let mut phi: Vec<UPoly> = Vec::with_capacity(order + 1);
    phi.push(UPoly::zero());
    phi.push(UPoly::one());

    for n in 2..=order {
        let mut conv = UPoly::zero();
        for j in 1..=(n - 1) {
            let w = Rat::from_integer(pascal[n - 1][j].clone());
            conv.add_mul_scaled(&phi[j], &phi[n - j], Some(&w));
        }
        let mut next = conv.mul(&u);
        next.add_mul_scaled(
            &UPoly::new(vec![Rat::one(), rat_i64(-(n as i64 - 1))]),
            &phi[n - 1],
            None,
        );
        phi.push(next);
    }

    Ok(ZSeries::from_coeffs(Scaling::Egf, phi))
}

/// Reference solver: direct order-by-order substitution into the defining
/// equation. Order n isolates (u^2 - u) Phi_n = n! [z^n] sum_{k>=2} C(u,k)
/// phi^k, where the right side only involves Phi_1..Phi_{n-1}. The power
/// table P_k = n! [z^n] phi^k is maintained incrementally via the binomial
/// convolution P_k[n] = sum_j C(n,j) P_{k-1}[j] Phi[n-j]. The exact
/// division by u^2 - u doubles as a consistency check at every order; the
/// cost is a factor order^2 over `solve_phi`, so this path serves as the
/// verification oracle rather than the production solver.
pub fn solve_phi_reference(order: usize) -> Result<ZSeries> {
    if order < 1 {
        return Err(Error::Domain("truncation order must be at least 1".into()));
    }
    let u2_minus_u = UPoly::from_i64s(&[0, -1, 1]);
    let pascal = pascal_rows(order);

    let mut phi: Vec<UPoly> = Vec::with_capacity(order + 1);
    phi.push(UPoly::zero());
    phi.push(UPoly::one());

    // powers[k-2][n] = n! [z^n] phi^k; zero until n >= k.
    let mut powers: Vec<Vec<UPoly>> = Vec::new();
    // weights[k-2] = C(u, k), extended as k grows.
    let mut weights: Vec<UPoly> = Vec::new();
    let mut binom = UPoly::binomial_u(1);

    for n in 2..=order {
        powers.push(vec![UPoly::zero(); order + 1]);
        binom = binom
            .mul(&UPoly::from_i64s(&[-(n as i64 - 1), 1]))
            .scale(&Rat::new(BigInt::one(), BigInt::from(n)));
        weights.push(binom.clone());

        for k in 2..=n {
            let mut acc = UPoly::zero();
            for j in (k - 1)..n {
                let prev = if k == 2 { &phi[j] } else { &powers[k - 3][j] };
                if prev.is_zero() {
                    continue;
                }
                let w = Rat::from_integer(pascal[n][j].clone());
                acc.add_mul_scaled(prev, &phi[n - j], Some(&w));
            }
            powers[k - 2][n] = acc;
        }

        let mut rhs = UPoly::zero();
        for k in 2..=n {
            rhs.add_mul_scaled(&weights[k - 2], &powers[k - 2][n], None);
        }
        phi.push(rhs.exact_div(&u2_minus_u)?);
    }

    Ok(ZSeries::from_coeffs(Scaling::Egf, phi))
}

/// Independent oracle for `solve_phi`: invert the relation
///
/// ```text
/// z(w) = w - sum_{k>=2} [C(u,k) / (u^2 - u)] w^k
/// ```
///
/// by compositional reversion. The divisions are exact because u(u-1)
/// divides every C(u,k) for k >= 2; the reversion itself never sees the
/// functional equation, so agreement with the solver is a genuine
/// cross-check.
pub fn phi_by_reversion(order: usize) -> Result<ZSeries> {
    if order < 1 {
        return Err(Error::Domain("truncation order must be at least 1".into()));
    }
    let u2_minus_u = UPoly::from_i64s(&[0, -1, 1]);
    let mut g = vec![UPoly::zero(), UPoly::one()];
    for k in 2..=order {
        g.push(UPoly::binomial_u(k).exact_div(&u2_minus_u)?.neg());
    }
    let w = ZSeries::revert_normalized(&ZSeries::from_coeffs(Scaling::Ogf, g))?;
    Ok(w.to_scaling(Scaling::Egf))
}

/// psi = (1 + phi)^(u+1), computed two independent ways which must agree
/// exactly: the generalized binomial power, and the product form
/// (1 + phi) (u^2 phi - u(u-1) z + 1) obtained by substituting the
/// functional equation for (1 + phi)^u.
pub fn solve_psi(order: usize, phi: &ZSeries) -> Result<ZSeries> {
    let phi = phi.truncated(order)?;
    let a = ZSeries::binomial_power(&phi, BinomialExponent::UPlusOne)?;
    let b = psi_product_form(&phi)?;
    for n in 0..=order {
        if a.coeff(n) != b.coeff(n) {
            return Err(Error::PathDisagreement {
                n,
                lhs: a.coeff(n).to_string(),
                rhs: b.coeff(n).to_string(),
            });
        }
    }
    Ok(a)
}

fn psi_product_form(phi: &ZSeries) -> Result<ZSeries> {
    let order = phi.order();
    let one = ZSeries::one(Scaling::Egf, order);
    let z = ZSeries::z(Scaling::Egf, order);
    let rhs = phi
        .scale_poly(&UPoly::from_i64s(&[0, 0, 1]))
        .sub(&z.scale_poly(&UPoly::from_i64s(&[0, -1, 1])))?
        .add(&one)?;
    one.add(phi)?.mul(&rhs)
}

/// Residual of the functional equation, (1+phi)^u - u^2 phi + u(u-1) z - 1.
/// Identically zero for a correct solution.
pub fn functional_equation_residual(phi: &ZSeries) -> Result<ZSeries> {
    let order = phi.order();
    let lhs = ZSeries::binomial_power(phi, BinomialExponent::U)?;
    let one = ZSeries::one(Scaling::Egf, order);
    let z = ZSeries::z(Scaling::Egf, order);
    lhs.sub(&phi.scale_poly(&UPoly::from_i64s(&[0, 0, 1])))?
        .add(&z.scale_poly(&UPoly::from_i64s(&[0, -1, 1])))?
        .sub(&one)
}

pub struct FmIdentityCheck {
    pub n: usize,
    pub holds: bool,
    pub lhs: UPoly,
    pub rhs: UPoly,
}

/// Closed-form cross-check relating consecutive phi entries to psi:
///
/// ```text
/// n! [z^n] psi = (1+u)^2 Phi_n + (n-2) u (1+u) Phi_{n-1},  n >= 2,
/// ```
///
/// a third computation path for psi, independent of the binomial power.
pub fn verify_fm_identity(phi: &ZSeries, psi: &ZSeries, n: usize) -> Result<FmIdentityCheck> {
    if n < 2 {
        return Err(Error::Domain("identity stated for n >= 2".into()));
    }
    if phi.order() < n {
        return Err(Error::InsufficientOrder {
            have: phi.order(),
            need: n,
        });
    }
    if psi.order() < n {
        return Err(Error::InsufficientOrder {
            have: psi.order(),
            need: n,
        });
    }
    let lhs = psi.coeff(n).clone();
    let mut rhs = UPoly::zero();
    rhs.add_mul_scaled(&UPoly::from_i64s(&[1, 2, 1]), phi.coeff(n), None);
    rhs.add_mul_scaled(
        &UPoly::from_i64s(&[0, 1, 1]),
        phi.coeff(n - 1),
        Some(&Rat::from_integer(BigInt::from(n as i64 - 2))),
    );
    Ok(FmIdentityCheck {
        n,
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

/// Betti table of M-bar_{0,n}, read off from the solved series.
pub fn betti_m0n(n: u32, phi: &ZSeries) -> Result<BettiTable> {
    if n < 3 {
        return Err(Error::Domain(format!("M0n needs n >= 3, got {n}")));
    }
    let idx = n as usize - 1;
    if phi.order() < idx {
        return Err(Error::InsufficientOrder {
            have: phi.order(),
            need: idx,
        });
    }
    let betti = phi
        .coeff(idx)
        .to_nonneg_integers(&format!("M0n n={n} series entry"))?;
    BettiTable::new(Space::M0n, n, betti)
}

/// Betti table of P^1[n].
pub fn betti_fm(n: u32, psi: &ZSeries) -> Result<BettiTable> {
    let idx = n as usize;
    if psi.order() < idx {
        return Err(Error::InsufficientOrder {
            have: psi.order(),
            need: idx,
        });
    }
    let betti = psi
        .coeff(idx)
        .to_nonneg_integers(&format!("FM n={n} series entry"))?;
    BettiTable::new(Space::Fm, n, betti)
}
