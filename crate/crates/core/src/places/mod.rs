//! Places of ℚ: the archimedean valuation and the p-adic valuations,
//! normalized so that the product formula ∏_v |ξ|_v = 1 holds on S-units.

pub mod dyadic;
pub mod embeddings;
pub mod hensel;
pub mod interval;
pub mod padic;

pub use dyadic::Dyadic;
pub use embeddings::{EmbeddingRow, Embeddings};
pub use hensel::LocalFactor;
pub use interval::{exp_rational, ComplexInterval, RealInterval};
pub use padic::PAdic;

use crate::exact::{modp, Rational};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// One valuation of ℚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Archimedean,
    Prime(u64),
}

impl Place {
    pub fn prime(p: u64) -> Result<Place> {
        if modp::is_prime_u64(p) {
            Ok(Place::Prime(p))
        } else {
            Err(Error::Invalid(format!("{p} is not prime")))
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Archimedean)
    }

    pub fn parse(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "oo" | "∞" => Ok(Place::Archimedean),
            t => {
                let p: u64 = t
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad place {t:?}")))?;
                Place::prime(p)
            }
        }
    }
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Archimedean => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// p-adic valuation of a nonzero rational; None for zero.
pub fn padic_valuation(q: &Rational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let bp = BigInt::from(p);
    let count = |mut v: BigInt| {
        let mut c = 0i64;
        while v.is_multiple_of(&bp) {
            v /= &bp;
            c += 1;
        }
        c
    };
    Some(count(q.numer().clone()) - count(q.denom().clone()))
}

/// Normalized absolute value of a rational at a place, as an exact rational.
///
/// Archimedean: |q|. Finite p: p^{−v_p(q)}.
pub fn rational_abs(q: &Rational, v: Place) -> Rational {
    match v {
        Place::Archimedean => q.abs(),
        Place::Prime(p) => match padic_valuation(q, p) {
            None => Rational::zero(),
            Some(val) if val >= 0 => {
                Rational::new(BigInt::one(), BigInt::from(p).pow(val as u32))
            }
            Some(val) => Rational::from_integer(BigInt::from(p).pow((-val) as u32)),
        },
    }
}

/// A certified value sitting over one completion of ℚ.
pub enum LocalValue<'a> {
    Real(&'a RealInterval),
    Complex(&'a ComplexInterval),
    Padic(&'a PAdic),
    Rational(&'a Rational),
}

/// Normalized absolute value at a place as a real interval. Complex values
/// contribute the *squared* modulus; p-adic values give exactly p^{−v}.
pub fn normalized_abs(x: LocalValue<'_>, v: Place, prec: u64) -> Result<RealInterval> {
    match (x, v) {
        (LocalValue::Real(r), Place::Archimedean) => Ok(r.abs()),
        (LocalValue::Complex(z), Place::Archimedean) => Ok(z.modulus_sq()),
        (LocalValue::Rational(q), place) => {
            Ok(RealInterval::from_rational(&rational_abs(q, place), prec))
        }
        (LocalValue::Padic(x), Place::Prime(p)) => {
            if x.p != p {
                return Err(Error::Invalid("p-adic value at wrong place".into()));
            }
            Ok(RealInterval::from_rational(&x.normalized_abs()?, prec))
        }
        _ => Err(Error::Invalid("value type does not match place".into())),
    }
}
