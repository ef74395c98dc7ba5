//! Exact arithmetic in the field Q(e).
//!
//! The singularity moments of the generating functions are rational
//! expressions in Euler's number (e is transcendental, so Q(e) is an honest
//! rational function field and no reduction rule ever mixes degrees). Values
//! are kept as reduced fractions of polynomials in e and only turned into
//! floats at the reporting boundary.

use num::traits::One;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::upoly::{rat_i64, Rat, UPoly};

/// Reduced fraction num/den of polynomials in e, denominator monic.
#[derive(Clone, PartialEq, Eq)]
pub struct EExpr {
    num: UPoly,
    den: UPoly,
}

impl EExpr {
    pub fn new(num: UPoly, den: UPoly) -> EExpr {
        assert!(!den.is_zero(), "zero denominator in Q(e)");
        let g = UPoly::gcd(&num, &den);
        let mut num = num.exact_div(&g).expect("gcd divides");
        let mut den = den.exact_div(&g).expect("gcd divides");
        let lead = den.leading().expect("nonzero").clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        EExpr { num, den }
    }

    pub fn from_poly(p: UPoly) -> EExpr {
        EExpr {
            num: p,
            den: UPoly::one(),
        }
    }

    pub fn from_rat(r: Rat) -> EExpr {
        EExpr::from_poly(UPoly::constant(r))
    }

    pub fn from_i64(v: i64) -> EExpr {
        EExpr::from_rat(rat_i64(v))
    }

    /// The transcendental generator itself.
    pub fn e() -> EExpr {
        EExpr::from_poly(UPoly::from_i64s(&[0, 1]))
    }

    pub fn zero() -> EExpr {
        EExpr::from_poly(UPoly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    /// Exact equality with a plain rational (true only when the reduced form
    /// has no e left in it).
    pub fn eq_rat(&self, r: &Rat) -> bool {
        self.den == UPoly::one() && self.num == UPoly::constant(r.clone())
    }

    pub fn recip(&self) -> EExpr {
        assert!(!self.is_zero(), "division by zero in Q(e)");
        EExpr::new(self.den.clone(), self.num.clone())
    }

    pub fn eval_f64(&self) -> f64 {
        let e = std::f64::consts::E;
        self.num.eval_f64(e) / self.den.eval_f64(e)
    }
}

impl Add for &EExpr {
    type Output = EExpr;
    fn add(self, rhs: &EExpr) -> EExpr {
        EExpr::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for &EExpr {
    type Output = EExpr;
    fn sub(self, rhs: &EExpr) -> EExpr {
        self + &(-rhs)
    }
}

impl Mul for &EExpr {
    type Output = EExpr;
    fn mul(self, rhs: &EExpr) -> EExpr {
        EExpr::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Div for &EExpr {
    type Output = EExpr;
    fn div(self, rhs: &EExpr) -> EExpr {
        self * &rhs.recip()
    }
}

impl Neg for &EExpr {
    type Output = EExpr;
    fn neg(self) -> EExpr {
        EExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for EExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == UPoly::one() {
            write!(f, "{}", self.num.fmt_with_var('e'))
        } else {
            write!(
                f,
                "({}) / ({})",
                self.num.fmt_with_var('e'),
                self.den.fmt_with_var('e')
            )
        }
    }
}

impl fmt::Debug for EExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EExpr[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::upoly::rat;

    #[test]
    fn reduction_is_canonical() {
        // (e^2 - 4) / (2e - 4) reduces to (e + 2)/2
        let a = EExpr::new(UPoly::from_i64s(&[-4, 0, 1]), UPoly::from_i64s(&[-4, 2]));
        assert_eq!(a.den(), &UPoly::one());
        assert_eq!(a.num(), &UPoly::new(vec![rat_i64(1), rat(1, 2)]));
    }

    #[test]
    fn field_ops() {
        let e = EExpr::e();
        let two = EExpr::from_i64(2);
        let em2 = &e - &two;
        let x = &EExpr::from_i64(1) / &em2;
        let back = &x * &em2;
        assert!(back.eq_rat(&rat_i64(1)));
        assert!(!(&em2 + &two).eq_rat(&rat(0, 1)));
        assert!((em2.eval_f64() - 0.718281828459045).abs() < 1e-12);
    }

    #[test]
    fn display_uses_e() {
        let v = EExpr::new(UPoly::from_i64s(&[3, -1]), UPoly::from_i64s(&[-12, 6]));
        assert_eq!(v.to_string(), "(1/2 - 1/6*e) / (-2 + e)");
    }
}
