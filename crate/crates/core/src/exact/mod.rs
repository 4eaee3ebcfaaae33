//! Exact rational and number-field arithmetic.

pub mod field;
pub mod linalg;
pub mod modp;
pub mod poly;
pub mod sturm;

pub use field::{FieldElement, NumberField};
pub use poly::RatPolynomial;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Exact rational scalar. Reduced with positive denominator by construction.
pub type Rational = BigRational;

/// Renders a rational as `num` or `num/den` (den > 1), the wire format used
/// throughout serialization.
pub fn rat_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `num` or `num/den` decimal strings.
pub fn rat_from_str(s: &str) -> crate::Result<Rational> {
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| crate::Error::Invalid(format!("bad integer {t:?}")))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den == BigInt::from(0) {
                return Err(crate::Error::Invalid("zero denominator".into()));
            }
            Ok(Rational::new(parse_int(n)?, den))
        }
    }
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings_round_trip() {
        for s in ["0", "-17", "3/4", "-22/7"] {
            let q = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&q), s);
        }
        // non-reduced input normalizes
        assert_eq!(rat_to_string(&rat_from_str("6/4").unwrap()), "3/2");
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("abc").is_err());
    }
}
