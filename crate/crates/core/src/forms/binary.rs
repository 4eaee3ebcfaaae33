//! Anisotropic binary quadratics a·x² + b·xy + c·y² over a completion of ℚ.
//!
//! Anisotropy over F_v ⟺ the discriminant b² − 4ac is not a square in F_v
//! (for a ≠ 0, d ≠ 0). Over ℝ that is a sign test; over ℚ_p a valuation
//! parity plus unit-residue test — all exact for rational coefficients.

use crate::exact::{rat_int, rat_to_string, Rational};
use crate::places::{padic_valuation, Place};
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryQuadratic {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl BinaryQuadratic {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        BinaryQuadratic { a, b, c }
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
        Self::new(rat_int(a), rat_int(b), rat_int(c))
    }

    pub fn disc(&self) -> Rational {
        &self.b * &self.b - rat_int(4) * &self.a * &self.c
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }
}

impl std::fmt::Display for BinaryQuadratic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}*x^2 + {}*x*y + {}*y^2",
            rat_to_string(&self.a),
            rat_to_string(&self.b),
            rat_to_string(&self.c)
        )
    }
}

/// Default certified-anisotropic form at a place: x² + y² at the archimedean
/// place, x² − u·y² with u the least positive non-residue at odd p, and
/// x² − 5y² at p = 2.
pub fn anisotropic_binary(v: Place) -> BinaryQuadratic {
    match v {
        Place::Archimedean => BinaryQuadratic::from_ints(1, 0, 1),
        Place::Prime(2) => BinaryQuadratic::from_ints(1, 0, -5),
        Place::Prime(p) => {
            let u = least_nonresidue(p);
            BinaryQuadratic::new(rat_int(1), rat_int(0), -rat_int(u as i64))
        }
    }
}

fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&u| legendre(u, p) == -1).expect("odd prime has a non-residue")
}

/// Legendre symbol (u/p) for odd prime p, u ≢ 0.
fn legendre(u: u64, p: u64) -> i8 {
    let mut acc = 1u64;
    let mut base = u % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// True iff q represents zero over F_v only trivially. Exact for rational
/// coefficients; the certificate is the square-class analysis of disc(q).
pub fn is_anisotropic(q: &BinaryQuadratic, v: Place) -> Result<bool> {
    let d = q.disc();
    if q.a.is_zero() || d.is_zero() {
        // a = 0: q(1,0) = 0.  d = 0: q = a(x + (b/2a)y)² vanishes at (−b, 2a).
        return Ok(false);
    }
    match v {
        Place::Archimedean => Ok(d.is_negative()),
        Place::Prime(p) => {
            let val = padic_valuation(&d, p).expect("nonzero");
            if val.rem_euclid(2) == 1 {
                return Ok(true); // odd valuation: never a square
            }
            // unit part u = d / p^val
            let unit = unit_part(&d, p);
            if p == 2 {
                // squares of ℚ₂* have unit part ≡ 1 (mod 8)
                Ok(unit.mod_floor(&BigInt::from(8)) != BigInt::one())
            } else {
                let um = unit.mod_floor(&BigInt::from(p)).to_u64().unwrap();
                Ok(legendre(um, p) == -1)
            }
        }
    }
}

fn unit_part(d: &Rational, p: u64) -> BigInt {
    // d = p^val · (a/b) with a, b coprime to p; unit residue = a·b^{-1} is
    // computed here as an integer representative a · b^{φ(m)−1} mod m for a
    // modulus m large enough for the residue tests (p or 8).
    let bp = BigInt::from(p);
    let strip = |mut v: BigInt| {
        while v.is_multiple_of(&bp) {
            v /= &bp;
        }
        v
    };
    let num = strip(d.numer().clone());
    let den = strip(d.denom().clone());
    let m = if p == 2 { BigInt::from(8) } else { bp };
    let inv = crate::places::padic::mod_inverse(&den.mod_floor(&m), &m).expect("unit");
    (num.mod_floor(&m) * inv).mod_floor(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_certified() {
        for v in [Place::Archimedean, Place::Prime(2), Place::Prime(3), Place::Prime(7), Place::Prime(13)] {
            let q = anisotropic_binary(v);
            assert!(is_anisotropic(&q, v).unwrap(), "place {v}");
        }
        // spot-check the published defaults
        assert_eq!(anisotropic_binary(Place::Prime(3)), BinaryQuadratic::from_ints(1, 0, -2));
        assert_eq!(anisotropic_binary(Place::Prime(2)), BinaryQuadratic::from_ints(1, 0, -5));
        assert_eq!(anisotropic_binary(Place::Archimedean), BinaryQuadratic::from_ints(1, 0, 1));
    }

    #[test]
    fn isotropic_forms_detected() {
        let hyp = BinaryQuadratic::from_ints(1, 0, -1); // (1,1) is a zero
        for v in [Place::Archimedean, Place::Prime(2), Place::Prime(7)] {
            assert!(!is_anisotropic(&hyp, v).unwrap());
        }
        // x² − 2y² splits at 7 (2 ≡ 3² mod 7) but not at 5, and is indefinite over ℝ
        let q = BinaryQuadratic::from_ints(1, 0, -2);
        assert!(!is_anisotropic(&q, Place::Prime(7)).unwrap());
        assert!(is_anisotropic(&q, Place::Prime(5)).unwrap());
        assert!(!is_anisotropic(&q, Place::Archimedean).unwrap());
    }

    #[test]
    fn degenerate_and_odd_valuation_cases() {
        // d = 0
        let sq = BinaryQuadratic::from_ints(1, 2, 1);
        assert!(!is_anisotropic(&sq, Place::Prime(5)).unwrap());
        // x² − p y²: disc 4p has odd p-valuation
        let q = BinaryQuadratic::from_ints(1, 0, -5);
        assert!(is_anisotropic(&q, Place::Prime(5)).unwrap());
        // a = 0
        let degen = BinaryQuadratic::from_ints(0, 1, 1);
        assert!(!is_anisotropic(&degen, Place::Archimedean).unwrap());
    }

    #[test]
    fn anisotropy_matches_zero_search() {
        // brute-force oracle over small rationals: q(x, y) = 0 with (x, y) ≠ 0?
        let check = |q: &BinaryQuadratic| {
            for x in -20i64..=20 {
                for y in -20i64..=20 {
                    if (x, y) == (0, 0) {
                        continue;
                    }
                    if q.eval(&rat_int(x), &rat_int(y)).is_zero() {
                        return false;
                    }
                }
            }
            true
        };
        // rational zeros exist exactly for isotropic-over-ℚ forms; anisotropic
        // at any single place implies no rational zero
        for (q, v) in [
            (BinaryQuadratic::from_ints(1, 0, 1), Place::Archimedean),
            (BinaryQuadratic::from_ints(1, 0, -2), Place::Prime(5)),
            (BinaryQuadratic::from_ints(1, 1, 1), Place::Archimedean),
        ] {
            assert!(is_anisotropic(&q, v).unwrap());
            assert!(check(&q), "{q} should have no small rational zero");
        }
        assert!(!check(&BinaryQuadratic::from_ints(1, 0, -4)));
    }
}
