//! Reference families beyond the two main ones: Hilbert schemes of points
//! on surfaces (product formula over the surface's Betti numbers), the GIT
//! quotients (P^1)^n // SL_2 (partial sums of binomials), and full flag
//! varieties (Mahonian inversion counts). The gallery exists to exercise
//! the statistics layer on families with different limit behavior.

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::moduli::{BettiTable, Space};
use crate::upoly::{Rat, UPoly};
use crate::zseries::{Scaling, ZSeries};

/// Even Betti numbers (b_0, b_1, b_2) = (b^0, b^2, b^4) of the base surface;
/// odd cohomology must vanish, which covers every case in scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceBetti {
    pub b0: u32,
    pub b1: u32,
    pub b2: u32,
}

pub const P2: SurfaceBetti = SurfaceBetti { b0: 1, b1: 1, b2: 1 };
pub const P1XP1: SurfaceBetti = SurfaceBetti { b0: 1, b1: 2, b2: 1 };
/// The affine plane: Hilb^n(C^2), whose table is the partition count by
/// largest-part statistics.
pub const A2: SurfaceBetti = SurfaceBetti { b0: 1, b1: 0, b2: 0 };

impl SurfaceBetti {
    pub fn parse(name: &str) -> Result<SurfaceBetti> {
        match name.to_ascii_lowercase().as_str() {
            "p2" => Ok(P2),
            "p1xp1" => Ok(P1XP1),
            "a2" | "c2" => Ok(A2),
            other => Err(Error::Domain(format!(
                "unknown surface \"{other}\" (expected P2, P1xP1 or A2)"
            ))),
        }
    }

    pub fn name(&self) -> String {
        match (self.b0, self.b1, self.b2) {
            (1, 1, 1) => "P2".into(),
            (1, 2, 1) => "P1xP1".into(),
            (1, 0, 0) => "A2".into(),
            (a, b, c) => format!("S{a}-{b}-{c}"),
        }
    }
}

/// Betti tables of Hilb^n(S) for n = 0..=max_n, from the product
///
///   sum_n P(Hilb^n) z^n = prod_{m>=1} (1-u^(m-1) z^m)^(-b0)
///                                     (1-u^m z^m)^(-b1)
///                                     (1-u^(m+1) z^m)^(-b2),
///
/// truncated at m <= max_n (higher factors only touch z^(max_n+1) on).
pub fn hilb_series(surface: SurfaceBetti, max_n: u32) -> Result<Vec<BettiTable>> {
    let order = max_n as usize;
    let mut acc = ZSeries::one(Scaling::Ogf, order);
    for m in 1..=order {
        for (shift, count) in [
            (m - 1, surface.b0),
            (m, surface.b1),
            (m + 1, surface.b2),
        ] {
            if count == 0 {
                continue;
            }
            acc = acc.mul(&geometric_factor(order, m, shift, count))?;
        }
    }
    (0..=max_n)
        .map(|n| {
            let betti = acc
                .coeff(n as usize)
                .to_nonneg_integers(&format!("Hilb^{n}({}) entry", surface.name()))?;
            BettiTable::new(Space::Hilb, n, betti)
        })
        .collect()
}

/// (1 - u^shift z^m)^(-count) = sum_j C(count-1+j, j) u^(shift*j) z^(m*j).
fn geometric_factor(order: usize, m: usize, shift: usize, count: u32) -> ZSeries {
    let mut coeffs = vec![UPoly::zero(); order + 1];
    let mut c = BigInt::one();
    let mut j = 0usize;
    while m * j <= order {
        coeffs[m * j] = UPoly::monomial(Rat::from_integer(c.clone()), shift * j);
        j += 1;
        // C(count-1+j, j) built incrementally
        c = c * BigInt::from(count as usize - 1 + j) / BigInt::from(j);
    }
    ZSeries::from_coeffs(Scaling::Ogf, coeffs)
}

/// Betti table of (P^1)^n // SL_2 for odd n:
/// b_k = sum_{j <= min(k, n-3-k)} C(n-1, j), k = 0..n-3.
pub fn git_betti(n: u32) -> Result<BettiTable> {
    if n % 2 == 0 {
        return Err(Error::Domain(format!(
            "GIT quotient of (P^1)^n needs odd n, got {n}"
        )));
    }
    if n < 5 {
        return Err(Error::Domain(format!("GIT table needs n >= 5, got {n}")));
    }
    let top = n as usize - 3;
    let rows = crate::upoly::pascal_rows(n as usize - 1);
    let row = &rows[n as usize - 1];
    let mut betti = Vec::with_capacity(top + 1);
    let mut prefix = BigInt::zero();
    for k in 0..=top {
        let j_max = k.min(top - k);
        if k <= top - k {
            // prefix sums grow one binomial at a time up to the middle
            prefix += &row[j_max];
            betti.push(prefix.clone());
        } else {
            betti.push(betti[top - k].clone());
        }
    }
    BettiTable::new(Space::Git, n, betti)
}

/// Betti table of the full flag variety of C^n: the Poincare polynomial is
/// the Mahonian product prod_{k=1}^{n} (1 + u + ... + u^(k-1)), counting
/// permutations by inversions.
pub fn flag_betti(n: u32) -> Result<BettiTable> {
    if n < 1 {
        return Err(Error::Domain("flag variety needs n >= 1".into()));
    }
    let mut coeffs = vec![BigInt::one()];
    for k in 2..=n as usize {
        let mut next = vec![BigInt::zero(); coeffs.len() + k - 1];
        for (i, c) in coeffs.iter().enumerate() {
            for j in 0..k {
                next[i + j] += c;
            }
        }
        coeffs = next;
    }
    BettiTable::new(Space::Flag, n, coeffs)
}

/// Which gallery family to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GalleryFamily {
    Hilb(SurfaceBetti),
    Git,
    Flag,
}

impl GalleryFamily {
    pub fn space(&self) -> Space {
        match self {
            GalleryFamily::Hilb(_) => Space::Hilb,
            GalleryFamily::Git => Space::Git,
            GalleryFamily::Flag => Space::Flag,
        }
    }
}

/// All tables of a family with min_n <= n <= max_n (GIT: odd n only).
pub fn gallery_tables(family: GalleryFamily, min_n: u32, max_n: u32) -> Result<Vec<BettiTable>> {
    if min_n > max_n {
        return Err(Error::Domain(format!("empty range {min_n}..{max_n}")));
    }
    match family {
        GalleryFamily::Hilb(s) => Ok(hilb_series(s, max_n)?
            .into_iter()
            .filter(|t| t.n() >= min_n)
            .collect()),
        GalleryFamily::Git => (min_n.max(5)..=max_n)
            .filter(|n| n % 2 == 1)
            .map(git_betti)
            .collect(),
        GalleryFamily::Flag => (min_n.max(1)..=max_n).map(flag_betti).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hilb_one_point_is_the_surface() {
        let t = hilb_series(P2, 1).unwrap();
        assert_eq!(t[1].betti(), &ints(&[1, 1, 1])[..]);
        assert_eq!(t[0].betti(), &ints(&[1])[..]);
        let t = hilb_series(P1XP1, 1).unwrap();
        assert_eq!(t[1].betti(), &ints(&[1, 2, 1])[..]);
    }

    #[test]
    fn hilb_two_points_on_p2() {
        let t = hilb_series(P2, 2).unwrap();
        assert_eq!(t[2].betti(), &ints(&[1, 2, 3, 2, 1])[..]);
    }

    #[test]
    fn hilb_affine_plane_counts_partitions() {
        let t = hilb_series(A2, 6).unwrap();
        assert_eq!(t[2].betti(), &ints(&[1, 1])[..]);
        // chi(Hilb^n(C^2)) = p(n)
        let partitions = [1i64, 1, 2, 3, 5, 7, 11];
        for (n, &p) in partitions.iter().enumerate() {
            assert_eq!(t[n].euler_char(), BigInt::from(p), "n={n}");
        }
    }

    #[test]
    fn hilb_compact_tables_are_palindromic() {
        for surface in [P2, P1XP1] {
            for t in hilb_series(surface, 8).unwrap().iter().skip(1) {
                assert!(t.is_palindromic(), "{} n={}", surface.name(), t.n());
                assert_eq!(t.top_degree(), 2 * t.n() as usize, "dim Hilb^n = 2n");
            }
        }
    }

    #[test]
    fn git_small_tables() {
        assert_eq!(git_betti(5).unwrap().betti(), &ints(&[1, 5, 1])[..]);
        assert_eq!(
            git_betti(7).unwrap().betti(),
            &ints(&[1, 7, 22, 7, 1])[..]
        );
        assert!(git_betti(6).is_err());
        assert!(git_betti(50).is_err());
        for n in [9, 11, 21] {
            assert!(git_betti(n).unwrap().is_palindromic());
        }
    }

    #[test]
    fn flag_tables() {
        assert_eq!(flag_betti(1).unwrap().betti(), &ints(&[1])[..]);
        assert_eq!(flag_betti(3).unwrap().betti(), &ints(&[1, 2, 2, 1])[..]);
        let f4 = flag_betti(4).unwrap();
        assert_eq!(f4.euler_char(), BigInt::from(24));
        assert_eq!(f4.top_degree(), 6);
        assert!(flag_betti(8).unwrap().is_palindromic());
    }

    #[test]
    fn gallery_ranges() {
        let git = gallery_tables(GalleryFamily::Git, 5, 13).unwrap();
        assert_eq!(git.len(), 5); // 5, 7, 9, 11, 13
        let flag = gallery_tables(GalleryFamily::Flag, 2, 6).unwrap();
        assert_eq!(flag.len(), 5);
        let hilb = gallery_tables(GalleryFamily::Hilb(P2), 1, 4).unwrap();
        assert_eq!(hilb.len(), 4);
    }
}
