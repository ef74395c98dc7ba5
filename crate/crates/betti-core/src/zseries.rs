//! Truncated power series in the node-counting variable `z`, with `UPoly`
//! coefficients.
//!
//! A series carries its truncation order N and a scaling tag. Under `Ogf`
//! the stored entry n is the plain coefficient of z^n; under `Egf` it is
//! n! * [z^n], which keeps every entry of the main generating functions an
//! integer polynomial. Exponential-scale products therefore use the binomial
//! convolution (a*b)_n = sum_h C(n,h) a_h b_{n-h}.

use num::rational::BigRational;
use num::traits::One;

use crate::error::{Error, Result};
use crate::upoly::{factorial, pascal_rows, rat, rat_i64, Rat, UPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    /// Entry n stores n! * [z^n].
    Egf,
    /// Entry n stores [z^n].
    Ogf,
}

/// Exponent for a generalized binomial power (1 + f)^e, expanded as
/// sum_k C(e, k) f^k with polynomial weights when e involves u.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinomialExponent {
    U,
    UPlusOne,
    Int(i64),
}

impl BinomialExponent {
    pub fn weight(&self, k: usize) -> UPoly {
        match self {
            BinomialExponent::U => UPoly::binomial_u(k),
            BinomialExponent::UPlusOne => UPoly::binomial_u_shift(k, 1),
            BinomialExponent::Int(e) => UPoly::constant(UPoly::binomial_int(*e, k)),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct ZSeries {
    scaling: Scaling,
    /// coeffs[n] is the order-n entry; len = order + 1.
    coeffs: Vec<UPoly>,
}

impl ZSeries {
    pub fn from_coeffs(scaling: Scaling, coeffs: Vec<UPoly>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the z^0 entry");
        ZSeries { scaling, coeffs }
    }

    pub fn zero(scaling: Scaling, order: usize) -> Self {
        ZSeries {
            scaling,
            coeffs: vec![UPoly::zero(); order + 1],
        }
    }

    pub fn one(scaling: Scaling, order: usize) -> Self {
        let mut s = ZSeries::zero(scaling, order);
        s.coeffs[0] = UPoly::one();
        s
    }

    /// The series z itself (entry 1 is 1 under either scaling, since 1! = 1).
    pub fn z(scaling: Scaling, order: usize) -> Self {
        let mut s = ZSeries::zero(scaling, order);
        if order >= 1 {
            s.coeffs[1] = UPoly::one();
        }
        s
    }

    pub fn scaling(&self) -> Scaling {
        self.scaling
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Entry n; panics beyond the truncation order.
    pub fn coeff(&self, n: usize) -> &UPoly {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[UPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Prefix of the series up to a lower order.
    pub fn truncated(&self, order: usize) -> Result<ZSeries> {
        if order > self.order() {
            return Err(Error::InsufficientOrder {
                have: self.order(),
                need: order,
            });
        }
        Ok(ZSeries {
            scaling: self.scaling,
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    fn check_compatible(&self, other: &ZSeries) -> Result<()> {
        if self.scaling != other.scaling {
            return Err(Error::ScalingMismatch(self.scaling, other.scaling));
        }
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ZSeries) -> Result<ZSeries> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_in_place(b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ZSeries) -> Result<ZSeries> {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, s: &Rat) -> ZSeries {
        ZSeries {
            scaling: self.scaling,
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
        }
    }

    /// Multiply every entry by a fixed polynomial in u (z-degree untouched).
    pub fn scale_poly(&self, p: &UPoly) -> ZSeries {
        ZSeries {
            scaling: self.scaling,
            coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect(),
        }
    }

    /// Product truncated at the common order. Ordinary Cauchy product under
    /// Ogf, binomial convolution under Egf.
    pub fn mul(&self, other: &ZSeries) -> Result<ZSeries> {
        self.check_compatible(other)?;
        let order = self.order();
        let pascal = match self.scaling {
            Scaling::Egf => Some(pascal_rows(order)),
            Scaling::Ogf => None,
        };
        let mut out = ZSeries::zero(self.scaling, order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let w = pascal
                    .as_ref()
                    .map(|rows| Rat::from_integer(rows[i + j][i].clone()));
                out.coeffs[i + j].add_mul_scaled(a, b, w.as_ref());
            }
        }
        Ok(out)
    }

    /// Convert between the two scalings by multiplying or dividing entry n
    /// by n!.
    pub fn to_scaling(&self, target: Scaling) -> ZSeries {
        if self.scaling == target {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let f = BigRational::from_integer(factorial(n));
                match target {
                    Scaling::Egf => c.scale(&f),
                    Scaling::Ogf => c.scale(&f.recip()),
                }
            })
            .collect();
        ZSeries {
            scaling: target,
            coeffs,
        }
    }

    /// (1 + f)^e for a series with zero constant term, defined by the
    /// binomial sum sum_{k >= 0} C(e, k) f^k. Computed by the logarithmic
    /// derivative recursion: g = (1+f)^e satisfies (1+f) g' = e f' g, which
    /// determines each coefficient from one convolution instead of a full
    /// power table. `binomial_power_reference` evaluates the defining sum
    /// directly and the two are pinned to each other in tests.
    pub fn binomial_power(f: &ZSeries, exponent: BinomialExponent) -> Result<ZSeries> {
        if !f.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = f.order();
        let e = match exponent {
            BinomialExponent::U => UPoly::from_i64s(&[0, 1]),
            BinomialExponent::UPlusOne => UPoly::from_i64s(&[1, 1]),
            BinomialExponent::Int(i) => UPoly::constant(rat_i64(i)),
        };
        let mut g = vec![UPoly::one()];
        match f.scaling {
            Scaling::Egf => {
                // entry m of the relation: G_{m+1} + sum_{j>=1} C(m,j) F_j G_{m+1-j}
                //                        = e * sum_{j>=0} C(m,j) F_{j+1} G_{m-j}
                let pascal = pascal_rows(order);
                for m in 0..order {
                    let mut rhs = UPoly::zero();
                    for j in 0..=m {
                        let c = Rat::from_integer(pascal[m][j].clone());
                        rhs.add_mul_scaled(&f.coeffs[j + 1], &g[m - j], Some(&c));
                    }
                    let mut next = rhs.mul(&e);
                    for j in 1..=m {
                        let c = -Rat::from_integer(pascal[m][j].clone());
                        next.add_mul_scaled(&f.coeffs[j], &g[m + 1 - j], Some(&c));
                    }
                    g.push(next);
                }
            }
            Scaling::Ogf => {
                // entry m: (m+1) g_{m+1} + sum_{j>=1} (m+1-j) f_j g_{m+1-j}
                //        = e * sum_{j>=0} (j+1) f_{j+1} g_{m-j}
                for m in 0..order {
                    let mut rhs = UPoly::zero();
                    for j in 0..=m {
                        let c = rat_i64(j as i64 + 1);
                        rhs.add_mul_scaled(&f.coeffs[j + 1], &g[m - j], Some(&c));
                    }
                    let mut next = rhs.mul(&e);
                    for j in 1..=m {
                        let c = rat_i64(-((m + 1 - j) as i64));
                        next.add_mul_scaled(&f.coeffs[j], &g[m + 1 - j], Some(&c));
                    }
                    g.push(next.scale(&rat(1, m as i64 + 1)));
                }
            }
        }
        Ok(ZSeries {
            scaling: f.scaling,
            coeffs: g,
        })
    }

    /// The defining binomial sum evaluated term by term with an incremental
    /// power table. Quadratically slower than `binomial_power`; kept as the
    /// independent oracle for it.
    pub fn binomial_power_reference(f: &ZSeries, exponent: BinomialExponent) -> Result<ZSeries> {
        if !f.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = f.order();
        let mut acc = ZSeries::one(f.scaling, order);
        let mut fpow = ZSeries::one(f.scaling, order);
        for k in 1..=order {
            fpow = fpow.mul(f)?;
            let w = exponent.weight(k);
            if w.is_zero() {
                continue;
            }
            acc = acc.add(&fpow.scale_poly(&w))?;
        }
        Ok(acc)
    }

    /// Compositional inverse of g(w) = w + (higher order), i.e. the series
    /// w(z) with g(w(z)) = z modulo z^(N+1). Requires Ogf scaling, zero
    /// constant term and leading coefficient exactly 1. Fixed-point
    /// iteration w <- z - sum_{k>=2} g_k w^k gains one correct order per
    /// pass.
    pub fn revert_normalized(g: &ZSeries) -> Result<ZSeries> {
        if g.scaling != Scaling::Ogf {
            return Err(Error::ScalingMismatch(Scaling::Ogf, g.scaling));
        }
        if !g.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = g.order();
        if order < 1 || g.coeffs[1] != UPoly::one() {
            return Err(Error::Domain(
                "reversion requires a series of the form w + O(w^2)".into(),
            ));
        }
        let z = ZSeries::z(Scaling::Ogf, order);
        let mut w = z.clone();
        for _ in 1..order {
            let mut s = z.clone();
            let mut wpow = w.mul(&w)?;
            for k in 2..=order {
                if !g.coeffs[k].is_zero() {
                    s = s.sub(&wpow.scale_poly(&g.coeffs[k]))?;
                }
                if k < order {
                    wpow = wpow.mul(&w)?;
                }
            }
            if s == w {
                break;
            }
            w = s;
        }
        Ok(w)
    }

    /// Apply g (a series in one variable) to w, i.e. sum_k g_k w^k, for w
    /// with zero constant term. Used to check reversion round-trips.
    pub fn compose(g: &ZSeries, w: &ZSeries) -> Result<ZSeries> {
        g.check_compatible(w)?;
        if !w.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = g.order();
        let mut acc = ZSeries::zero(g.scaling, order);
        acc.coeffs[0] = g.coeffs[0].clone();
        let mut wpow = ZSeries::one(g.scaling, order);
        for k in 1..=order {
            wpow = wpow.mul(w)?;
            if !g.coeffs[k].is_zero() {
                acc = acc.add(&wpow.scale_poly(&g.coeffs[k]))?;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::upoly::{rat, rat_i64};

    fn ogf(coeffs: &[&[i64]]) -> ZSeries {
        ZSeries::from_coeffs(
            Scaling::Ogf,
            coeffs.iter().map(|c| UPoly::from_i64s(c)).collect(),
        )
    }

    #[test]
    fn ogf_mul_is_cauchy() {
        // (1 + z)(1 - z) = 1 - z^2
        let a = ogf(&[&[1], &[1], &[]]);
        let b = ogf(&[&[1], &[-1], &[]]);
        assert_eq!(a.mul(&b).unwrap(), ogf(&[&[1], &[], &[-1]]));
    }

    #[test]
    fn egf_mul_is_binomial_convolution() {
        // exp(z) * exp(z) = exp(2z): all-ones entries square to 2^n
        let e = ZSeries::from_coeffs(Scaling::Egf, vec![UPoly::one(); 4]);
        let sq = e.mul(&e).unwrap();
        assert_eq!(sq.coeff(2), &UPoly::from_i64s(&[4]));
        assert_eq!(sq.coeff(3), &UPoly::from_i64s(&[8]));
    }

    #[test]
    fn scaling_mismatch_is_rejected() {
        let a = ZSeries::one(Scaling::Egf, 3);
        let b = ZSeries::one(Scaling::Ogf, 3);
        assert!(matches!(
            a.mul(&b),
            Err(Error::ScalingMismatch(Scaling::Egf, Scaling::Ogf))
        ));
        let c = ZSeries::one(Scaling::Egf, 4);
        assert!(matches!(a.add(&c), Err(Error::OrderMismatch(3, 4))));
    }

    #[test]
    fn egf_ogf_round_trip() {
        let s = ZSeries::from_coeffs(
            Scaling::Egf,
            (0..5).map(|n| UPoly::from_i64s(&[n as i64 + 1, 2])).collect(),
        );
        let back = s.to_scaling(Scaling::Ogf).to_scaling(Scaling::Egf);
        assert_eq!(s, back);
        // products agree across scalings after rescaling
        let t = ZSeries::from_coeffs(
            Scaling::Egf,
            (0..5).map(|n| UPoly::from_i64s(&[1, n as i64])).collect(),
        );
        let egf_prod = s.mul(&t).unwrap();
        let ogf_prod = s
            .to_scaling(Scaling::Ogf)
            .mul(&t.to_scaling(Scaling::Ogf))
            .unwrap();
        assert_eq!(egf_prod, ogf_prod.to_scaling(Scaling::Egf));
    }

    #[test]
    fn binomial_power_z3_entry_matches_hand_expansion() {
        // For f = f1 z + f2 z^2 + f3 z^3 (Ogf), expanding the definition by
        // hand gives [z^3] (1+f)^u = C(u,1) f3 + C(u,2) 2 f1 f2 + C(u,3) f1^3.
        // Take f1 = 1, f2 = 3, f3 = 5.
        let f = ogf(&[&[], &[1], &[3], &[5]]);
        let p = ZSeries::binomial_power(&f, BinomialExponent::U).unwrap();
        let u = UPoly::from_i64s(&[0, 1]);
        let expected = u
            .scale(&rat_i64(5))
            .add(&UPoly::from_i64s(&[0, -1, 1]).scale(&rat_i64(3)))
            .add(&UPoly::binomial_u(3));
        assert_eq!(p.coeff(3), &expected);
        assert_eq!(p.coeff(0), &UPoly::one());
        assert_eq!(p.coeff(1), &u);
    }

    #[test]
    fn binomial_power_integer_exponent_matches_repeated_product() {
        let f = ogf(&[&[], &[2], &[0, 1], &[-1]]);
        let p = ZSeries::binomial_power(&f, BinomialExponent::Int(3)).unwrap();
        let one = ZSeries::one(Scaling::Ogf, 3);
        let base = one.add(&f).unwrap();
        let direct = base.mul(&base).unwrap().mul(&base).unwrap();
        assert_eq!(p, direct);
    }

    #[test]
    fn binomial_power_recursion_matches_defining_sum() {
        let ogf_f = ogf(&[&[], &[1, 2], &[3], &[0, -1], &[5], &[1, 1]]);
        let egf_f = ogf_f.to_scaling(Scaling::Egf);
        for exponent in [
            BinomialExponent::U,
            BinomialExponent::UPlusOne,
            BinomialExponent::Int(4),
            BinomialExponent::Int(-2),
        ] {
            for f in [&ogf_f, &egf_f] {
                let fast = ZSeries::binomial_power(f, exponent).unwrap();
                let slow = ZSeries::binomial_power_reference(f, exponent).unwrap();
                assert_eq!(fast, slow, "exponent {exponent:?}");
            }
        }
    }

    #[test]
    fn binomial_power_needs_zero_constant_term() {
        let f = ogf(&[&[1], &[1]]);
        assert!(matches!(
            ZSeries::binomial_power(&f, BinomialExponent::U),
            Err(Error::NonzeroConstantTerm)
        ));
    }

    #[test]
    fn reversion_round_trip() {
        // g = w - 2w^2 + w^3 with polynomial perturbations in u
        let g = ZSeries::from_coeffs(
            Scaling::Ogf,
            vec![
                UPoly::zero(),
                UPoly::one(),
                UPoly::from_i64s(&[-2, 1]),
                UPoly::new(vec![rat(1, 3)]),
                UPoly::from_i64s(&[0, 0, 5]),
            ],
        );
        let w = ZSeries::revert_normalized(&g).unwrap();
        let round = ZSeries::compose(&g, &w).unwrap();
        assert_eq!(round, ZSeries::z(Scaling::Ogf, 4));
    }
}
