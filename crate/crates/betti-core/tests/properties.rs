//! Randomized algebraic properties of the polynomial/series kernel and of
//! the statistics layer. Sizes are kept small: these guard identities, not
//! performance.

use betti_core::logconcavity::{is_log_concave, ulc_at};
use betti_core::moduli::{BettiTable, Space};
use betti_core::statistics::{ks_distance, BettiDistribution};
use betti_core::upoly::{rat, Rat, UPoly};
use betti_core::zseries::{BinomialExponent, Scaling, ZSeries};
use num::BigInt;
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn upoly(max_len: usize) -> impl Strategy<Value = UPoly> {
    prop::collection::vec(small_rat(), 0..=max_len).prop_map(UPoly::new)
}

/// A series with zero constant term (the shape every solver series has).
fn normalized_series(scaling: Scaling, order: usize) -> impl Strategy<Value = ZSeries> {
    prop::collection::vec(upoly(3), order)
        .prop_map(move |mut tail| {
            let mut coeffs = vec![UPoly::zero()];
            coeffs.append(&mut tail);
            ZSeries::from_coeffs(scaling, coeffs)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_laws(a in upoly(5), b in upoly(5), c in upoly(5)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn exact_division_inverts_multiplication(a in upoly(5), b in upoly(5)) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(a.mul(&b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn division_with_remainder_reconstructs(a in upoly(6), b in upoly(4)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(q.mul(&b).add(&r), a);
        prop_assert!(r.degree().unwrap_or(0) < b.degree().unwrap_or(1) || r.is_zero());
    }

    #[test]
    fn scaling_conversion_commutes_with_multiplication(
        f in normalized_series(Scaling::Ogf, 5),
        g in normalized_series(Scaling::Ogf, 5),
    ) {
        // multiply as OGFs, or convert to EGF, multiply there, convert back
        let direct = f.mul(&g).unwrap();
        let through_egf = f
            .to_scaling(Scaling::Egf)
            .mul(&g.to_scaling(Scaling::Egf))
            .unwrap()
            .to_scaling(Scaling::Ogf);
        prop_assert_eq!(direct, through_egf);
    }

    #[test]
    fn binomial_power_recursion_matches_reference(
        f in normalized_series(Scaling::Egf, 5),
        which in 0usize..4,
        k in -3i64..=4,
    ) {
        let exponent = match which {
            0 => BinomialExponent::U,
            1 => BinomialExponent::UPlusOne,
            2 => BinomialExponent::Int(k),
            _ => BinomialExponent::Int(2),
        };
        let fast = ZSeries::binomial_power(&f, exponent).unwrap();
        let reference = ZSeries::binomial_power_reference(&f, exponent).unwrap();
        prop_assert_eq!(fast, reference);
    }

    #[test]
    fn integer_binomial_power_is_repeated_multiplication(
        f in normalized_series(Scaling::Ogf, 5),
        k in 0i64..=4,
    ) {
        let power = ZSeries::binomial_power(&f, BinomialExponent::Int(k)).unwrap();
        let one_plus_f = ZSeries::one(Scaling::Ogf, f.order()).add(&f).unwrap();
        let mut direct = ZSeries::one(Scaling::Ogf, f.order());
        for _ in 0..k {
            direct = direct.mul(&one_plus_f).unwrap();
        }
        prop_assert_eq!(power, direct);
    }

    #[test]
    fn series_reversion_round_trips(tail in prop::collection::vec(upoly(2), 4)) {
        // g = z + (random higher-order terms)
        let mut coeffs = vec![UPoly::zero(), UPoly::one()];
        coeffs.extend(tail);
        let g = ZSeries::from_coeffs(Scaling::Ogf, coeffs);
        let w = ZSeries::revert_normalized(&g).unwrap();
        let z = ZSeries::z(Scaling::Ogf, g.order());
        prop_assert_eq!(ZSeries::compose(&g, &w).unwrap(), z.clone());
        prop_assert_eq!(ZSeries::compose(&w, &g).unwrap(), z);
    }

    #[test]
    fn ks_distance_is_reversal_invariant(middle in prop::collection::vec(1u64..200, 1..12)) {
        // Betti tables with 1 at both ends reverse to valid tables; the
        // standardized distribution of d - X mirrors that of X around zero,
        // so the sup-distance to the (symmetric) normal is unchanged.
        let mut betti: Vec<BigInt> = vec![BigInt::from(1u8)];
        betti.extend(middle.iter().map(|&v| BigInt::from(v)));
        betti.push(BigInt::from(1u8));
        let n = betti.len() as u32;
        let forward = BettiTable::new(Space::Hilb, n, betti.clone()).unwrap();
        betti.reverse();
        let backward = BettiTable::new(Space::Hilb, n, betti).unwrap();
        let d1 = ks_distance(&BettiDistribution::new(forward)).unwrap();
        let d2 = ks_distance(&BettiDistribution::new(backward)).unwrap();
        prop_assert!((d1 - d2).abs() < 1e-12, "{} vs {}", d1, d2);
    }

    #[test]
    fn order_zero_ulc_is_plain_log_concavity(values in prop::collection::vec(1u64..50, 3..10)) {
        let seq: Vec<BigInt> = values.iter().map(|&v| BigInt::from(v)).collect();
        let plain = is_log_concave(&seq);
        let via_ulc = (1..seq.len() - 1)
            .all(|k| ulc_at(&seq, 0, k, seq.len() - 1).unwrap());
        prop_assert_eq!(plain.holds, via_ulc);
    }
}
