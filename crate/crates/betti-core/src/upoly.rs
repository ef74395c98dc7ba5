//! Dense polynomials in the cohomology variable `u` over exact rationals.
//!
//! These are the coefficients of every power series in the crate: the
//! coefficient of z^n in the main generating functions is a polynomial in u
//! whose u^k coefficient is (up to an n! scale) a Betti number. All
//! arithmetic is exact; nothing here touches floating point except the
//! explicit `eval_f64` / `rat_to_f64` conversions.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Exact rational scalar used for every coefficient in the crate.
pub type Rat = BigRational;

pub fn rat_i64(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn factorial(n: usize) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= k;
    }
    f
}

/// Rows 0..=n of Pascal's triangle, used for the binomial convolutions of
/// exponential-scale series.
pub fn pascal_rows(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    rows.push(vec![BigInt::one()]);
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = Vec::with_capacity(i + 1);
        row.push(BigInt::one());
        for j in 1..i {
            row.push(&prev[j - 1] + &prev[j]);
        }
        row.push(BigInt::one());
        rows.push(row);
    }
    rows
}

/// Convert an exact rational to `f64` without overflowing to `inf/inf` when
/// numerator and denominator are both huge (variances of large tables have
/// denominators around chi^2, far beyond f64 range). Excess bits are shifted
/// off both parts first; the relative error stays at f64 roundoff.
pub fn rat_to_f64(r: &Rat) -> f64 {
    const KEEP_BITS: u64 = 1000;
    let nb = r.numer().bits();
    let db = r.denom().bits();
    let excess = nb.max(db).saturating_sub(KEEP_BITS);
    let (n, d) = if excess > 0 {
        (r.numer() >> excess, r.denom() >> excess)
    } else {
        (r.numer().clone(), r.denom().clone())
    };
    let nf = n.to_f64().unwrap_or(f64::NAN);
    let df = d.to_f64().unwrap_or(f64::NAN);
    if df == 0.0 {
        // Denominator was vastly smaller than the numerator; the true value
        // overflows f64 anyway.
        match nf.partial_cmp(&0.0) {
            Some(std::cmp::Ordering::Greater) => f64::INFINITY,
            Some(std::cmp::Ordering::Less) => f64::NEG_INFINITY,
            _ => 0.0,
        }
    } else {
        nf / df
    }
}

/// Polynomial in `u` with rational coefficients, dense ascending storage.
/// Invariant: no trailing zero coefficient (the zero polynomial is an empty
/// vector, with degree None standing in for "degree minus infinity").
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        UPoly::new(vec![c])
    }

    pub fn monomial(c: Rat, degree: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); degree + 1];
        coeffs[degree] = c;
        UPoly::new(coeffs)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| rat_i64(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let mut out = self.clone();
        out.add_in_place(other);
        out
    }

    pub fn add_in_place(&mut self, other: &UPoly) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Rat::zero());
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            self.coeffs[i] += c;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> UPoly {
        if s.is_zero() {
            return UPoly::zero();
        }
        UPoly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        let mut out = UPoly::zero();
        out.add_mul_scaled(self, other, None);
        out
    }

    /// self += a * b * s, fused to avoid temporaries in the solver's inner
    /// loop (s = None means scale factor 1).
    pub fn add_mul_scaled(&mut self, a: &UPoly, b: &UPoly, s: Option<&Rat>) {
        if a.is_zero() || b.is_zero() || s.is_some_and(|s| s.is_zero()) {
            return;
        }
        let need = a.coeffs.len() + b.coeffs.len() - 1;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, Rat::zero());
        }
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ca = match s {
                Some(s) => ca * s,
                None => ca.clone(),
            };
            for (j, cb) in b.coeffs.iter().enumerate() {
                if !cb.is_zero() {
                    self.coeffs[i + j] += &ca * cb;
                }
            }
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn pow(&self, e: usize) -> UPoly {
        let mut out = UPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Drop all terms of degree > maxdeg (truncation for Taylor work).
    pub fn truncated_deg(&self, maxdeg: usize) -> UPoly {
        if self.coeffs.len() <= maxdeg + 1 {
            return self.clone();
        }
        UPoly::new(self.coeffs[..=maxdeg].to_vec())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rat_to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        if self.coeffs.len() <= 1 {
            return UPoly::zero();
        }
        UPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat_i64(i as i64 + 1))
                .collect(),
        )
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn div_rem(&self, divisor: &UPoly) -> Result<(UPoly, UPoly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            if rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
                continue;
            }
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / lead;
            for (j, c) in divisor.coeffs.iter().enumerate() {
                let t = &factor * c;
                rem[shift + j] -= t;
            }
            quot[shift] = factor;
            // The leading term cancels by construction.
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
        }
        Ok((UPoly::new(quot), UPoly::new(rem)))
    }

    /// Division that must be exact; a nonzero remainder is reported as an
    /// internal inconsistency rather than swallowed.
    pub fn exact_div(&self, divisor: &UPoly) -> Result<UPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision {
                dividend: self.to_string(),
                divisor: divisor.to_string(),
                remainder: r.to_string(),
            });
        }
        Ok(q)
    }

    /// Monic gcd via the Euclidean algorithm over the rationals.
    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        match a.leading() {
            Some(lead) if !lead.is_one() => {
                let inv = lead.recip();
                a.scale(&inv)
            }
            _ => a,
        }
    }

    /// The binomial polynomial C(u, k) = u(u-1)...(u-k+1) / k!.
    pub fn binomial_u(k: usize) -> UPoly {
        UPoly::binomial_u_shift(k, 0)
    }

    /// C(u + shift, k), the same falling factorial translated in u.
    pub fn binomial_u_shift(k: usize, shift: i64) -> UPoly {
        let mut p = UPoly::one();
        for i in 0..k {
            p = p.mul(&UPoly::new(vec![rat_i64(shift - i as i64), Rat::one()]));
        }
        p.scale(&Rat::new(BigInt::one(), factorial(k)))
    }

    /// C(e, k) for a fixed integer exponent, valid for negative e as well.
    pub fn binomial_int(e: i64, k: usize) -> Rat {
        let mut num = Rat::one();
        for i in 0..k {
            num *= rat_i64(e - i as i64);
        }
        num / Rat::from_integer(factorial(k))
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Extract coefficients as nonnegative integers (how Betti numbers leave
    /// the series layer). Fails on any negative or fractional coefficient.
    pub fn to_nonneg_integers(&self, context: &str) -> Result<Vec<BigInt>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if c.is_integer() && !c.is_negative() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::NonIntegerCoefficient {
                        context: context.to_string(),
                        power: k,
                        value: c.to_string(),
                    })
                }
            })
            .collect()
    }

    pub fn fmt_with_var(&self, var: char) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match k {
                0 => mag.to_string(),
                _ => {
                    let var_pow = if k == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{k}")
                    };
                    if mag.is_one() {
                        var_pow
                    } else {
                        format!("{mag}*{var_pow}")
                    }
                }
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() {
                    format!("-{body}")
                } else {
                    body
                });
            } else {
                parts.push(format!("{} {body}", if c.is_negative() { "-" } else { "+" }));
            }
        }
        parts.join(" ")
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with_var('u'))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({})", self.fmt_with_var('u'))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_trim_trailing_zeros() {
        let p = UPoly::new(vec![rat_i64(1), rat_i64(0), rat_i64(0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(UPoly::from_i64s(&[0, 0]).is_zero());
        assert_eq!(UPoly::zero().degree(), None);
    }

    #[test]
    fn ring_ops() {
        let a = UPoly::from_i64s(&[1, 2]); // 1 + 2u
        let b = UPoly::from_i64s(&[3, 0, 1]); // 3 + u^2
        let prod = a.mul(&b);
        assert_eq!(prod, UPoly::from_i64s(&[3, 6, 1, 2]));
        assert_eq!(a.add(&b), UPoly::from_i64s(&[4, 2, 1]));
        assert_eq!(a.sub(&a), UPoly::zero());
        assert_eq!(prod.eval(&rat_i64(2)), rat_i64(3 + 12 + 4 + 16));
    }

    #[test]
    fn division_exact_and_with_remainder() {
        // (u^2 - u)(u + 1) = u^3 - u
        let num = UPoly::from_i64s(&[0, -1, 0, 1]);
        let den = UPoly::from_i64s(&[0, -1, 1]);
        assert_eq!(num.exact_div(&den).unwrap(), UPoly::from_i64s(&[1, 1]));

        let (q, r) = UPoly::from_i64s(&[1, 0, 1]).div_rem(&UPoly::from_i64s(&[1, 1])).unwrap();
        // u^2 + 1 = (u+1)(u-1) + 2
        assert_eq!(q, UPoly::from_i64s(&[-1, 1]));
        assert_eq!(r, UPoly::from_i64s(&[2]));

        let err = UPoly::from_i64s(&[1, 0, 1])
            .exact_div(&UPoly::from_i64s(&[1, 1]))
            .unwrap_err();
        assert!(matches!(err, Error::InexactDivision { .. }));
    }

    #[test]
    fn binomial_polys() {
        // C(u,2) = (u^2 - u)/2
        assert_eq!(
            UPoly::binomial_u(2),
            UPoly::new(vec![Rat::zero(), rat(-1, 2), rat(1, 2)])
        );
        // C(u,3) at u = 5 is 10
        assert_eq!(UPoly::binomial_u(3).eval(&rat_i64(5)), rat_i64(10));
        // C(u+1,2) at u = 4 is C(5,2) = 10
        assert_eq!(UPoly::binomial_u_shift(2, 1).eval(&rat_i64(4)), rat_i64(10));
        // integer exponents, including negative: C(-1,k) = (-1)^k
        assert_eq!(UPoly::binomial_int(-1, 3), rat_i64(-1));
        assert_eq!(UPoly::binomial_int(4, 2), rat_i64(6));
        assert_eq!(UPoly::binomial_int(2, 3), Rat::zero());
    }

    #[test]
    fn gcd_is_monic() {
        let a = UPoly::from_i64s(&[0, -2, 2]); // 2u(u-1)
        let b = UPoly::from_i64s(&[0, 0, -3, 3]); // 3u^2(u-1)
        let g = UPoly::gcd(&a, &b);
        assert_eq!(g, UPoly::from_i64s(&[0, -1, 1]));
    }

    #[test]
    fn derivative_and_eval() {
        let p = UPoly::from_i64s(&[1, 5, 1]); // 1 + 5u + u^2
        assert_eq!(p.derivative(), UPoly::from_i64s(&[5, 2]));
        assert_eq!(p.eval(&Rat::one()), rat_i64(7));
    }

    #[test]
    fn big_rationals_to_f64() {
        let huge = BigInt::from(10).pow(400u32);
        let r = Rat::new(huge.clone() * 3, huge);
        assert!((rat_to_f64(&r) - 3.0).abs() < 1e-12);
        let tiny = Rat::new(BigInt::one(), BigInt::from(10).pow(400u32));
        assert!(rat_to_f64(&tiny) >= 0.0 && rat_to_f64(&tiny) < 1e-300);
        assert_eq!(rat_to_f64(&rat(-7, 2)), -3.5);
    }

    #[test]
    fn pascal_and_factorial() {
        let rows = pascal_rows(5);
        assert_eq!(rows[5][2], BigInt::from(10));
        assert_eq!(factorial(6), BigInt::from(720));
    }

    #[test]
    fn display_reads_ascending() {
        let p = UPoly::new(vec![rat_i64(1), rat(-1, 2), rat_i64(2)]);
        assert_eq!(p.to_string(), "1 - 1/2*u + 2*u^2");
    }
}
