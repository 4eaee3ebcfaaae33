//! Exact dyadic numbers m·2^e with arbitrary-precision mantissa.
//!
//! Addition and multiplication are exact; only rounding to a requested bit
//! count is directed. These are the endpoints/midpoints of certified
//! intervals.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// Exact decomposition of a finite f64.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        Some(Dyadic::new(BigInt::from(sign) * BigInt::from(mant), exp))
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i8 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -self.mant.clone(), exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }

    /// Exact halving.
    pub fn half(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp - 1 }
    }

    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn cmp_dyadic(&self, rhs: &Self) -> Ordering {
        match (self.signum(), rhs.signum()) {
            (a, b) if a != b => a.cmp(&b),
            (0, 0) => Ordering::Equal,
            _ => {
                let e = self.exp.min(rhs.exp);
                let a = &self.mant << (self.exp - e) as u64;
                let b = &rhs.mant << (rhs.exp - e) as u64;
                a.cmp(&b)
            }
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        // lossy; for diagnostics and seeds only
        fn ldexp(x: f64, mut n: i64) -> f64 {
            let mut x = x;
            while n > 511 {
                x *= 2f64.powi(511);
                n -= 511;
            }
            while n < -511 {
                x *= 2f64.powi(-511);
                n += 511;
            }
            x * 2f64.powi(n as i32)
        }
        let bits = self.mant.bits() as i64;
        if bits <= 52 {
            return ldexp(self.mant.to_f64().unwrap_or(0.0), self.exp);
        }
        let shift = bits - 53;
        let top = (&self.mant >> shift as u64).to_f64().unwrap_or(0.0);
        ldexp(top, self.exp + shift)
    }

    /// Number of significant bits of the mantissa.
    pub fn mant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Directed rounding to at most `prec` mantissa bits. `up` rounds toward
    /// +∞, otherwise toward −∞.
    pub fn round_to(&self, prec: u64, up: bool) -> Self {
        let bits = self.mant.bits();
        if bits <= prec {
            return self.clone();
        }
        let drop = (bits - prec) as i64;
        let floor_mant = &self.mant >> drop as u64;
        let exactly = (&floor_mant << drop as u64) == self.mant;
        let mant = if exactly || !up { floor_mant } else { floor_mant + 1 };
        Dyadic::new(mant, self.exp + drop)
    }

    /// Directed dyadic approximation of a rational, accurate to a relative
    /// error of about 2^{−prec}.
    pub fn from_rational(q: &BigRational, prec: u64, up: bool) -> Self {
        if q.denom().is_one() {
            return Dyadic::from_bigint(q.numer().clone());
        }
        // scale so the quotient carries ~prec significant bits
        let num_bits = q.numer().bits() as i64;
        let den_bits = q.denom().bits() as i64;
        let shift = (prec as i64 + den_bits - num_bits).max(1) as u64;
        let (fl, rem) = (q.numer() << shift).div_mod_floor(q.denom());
        let mant = if up && !rem.is_zero() { fl + 1 } else { fl };
        Dyadic::new(mant, -(shift as i64))
    }

    /// Floor of sqrt at `prec` extra bits: result ≤ √self (self ≥ 0).
    pub fn sqrt_lower(&self, prec: u64) -> Self {
        assert!(self.signum() >= 0);
        if self.is_zero() {
            return Dyadic::zero();
        }
        let (m, e) = self.scaled_for_root(2, prec);
        Dyadic::new(m.sqrt(), e)
    }

    /// Ceiling-style sqrt upper bound: result ≥ √self.
    pub fn sqrt_upper(&self, prec: u64) -> Self {
        assert!(self.signum() >= 0);
        if self.is_zero() {
            return Dyadic::zero();
        }
        let (m, e) = self.scaled_for_root(2, prec);
        let r = m.sqrt();
        let exact = &r * &r == m;
        Dyadic::new(if exact { r } else { r + 1 }, e)
    }

    /// k-th root bounds, self ≥ 0.
    pub fn nth_root_lower(&self, k: u32, prec: u64) -> Self {
        assert!(self.signum() >= 0);
        if self.is_zero() {
            return Dyadic::zero();
        }
        let (m, e) = self.scaled_for_root(k as i64, prec);
        Dyadic::new(m.nth_root(k), e)
    }

    pub fn nth_root_upper(&self, k: u32, prec: u64) -> Self {
        assert!(self.signum() >= 0);
        if self.is_zero() {
            return Dyadic::zero();
        }
        let (m, e) = self.scaled_for_root(k as i64, prec);
        let r = m.nth_root(k);
        let exact = r.pow(k) == m;
        Dyadic::new(if exact { r } else { r + 1 }, e)
    }

    /// Shift mantissa so that exp is divisible by k and the mantissa carries
    /// at least k·prec bits; returns (scaled mantissa, exp/k).
    fn scaled_for_root(&self, k: i64, prec: u64) -> (BigInt, i64) {
        let mut extra = (k as u64 * prec).saturating_sub(self.mant.bits()) as i64;
        let rem = (self.exp - extra).rem_euclid(k);
        extra += rem;
        let m = &self.mant << extra as u64;
        (m, (self.exp - extra) / k)
    }

    /// Exact decimal string (dyadics have finite decimal expansions).
    pub fn to_decimal_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        if self.exp >= 0 {
            return (&self.mant << self.exp as u64).to_string();
        }
        let f = (-self.exp) as u64;
        // m / 2^f = m·5^f / 10^f
        let scaled = &self.mant * BigInt::from(5u32).pow(f as u32);
        let neg = scaled.is_negative();
        let digits = scaled.abs().to_string();
        let s = if digits.len() as u64 > f {
            let split = digits.len() - f as usize;
            format!("{}.{}", &digits[..split], &digits[split..])
        } else {
            format!("0.{}{}", "0".repeat(f as usize - digits.len()), digits)
        };
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if neg {
            format!("-{s}")
        } else {
            s
        }
    }

    /// Parses a plain decimal string (optional sign, optional fraction part
    /// whose denominator must be a power of 10 → exact dyadic only when the
    /// caller rounds; here we return the exact rational instead).
    pub fn rational_from_decimal(s: &str) -> Option<BigRational> {
        let s = s.trim();
        let (int_part, frac_part) = match s.split_once('.') {
            None => (s, ""),
            Some((a, b)) => (a, b),
        };
        let digits: String = format!("{int_part}{frac_part}");
        let num: BigInt = digits.parse().ok()?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        Some(BigRational::new(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let a = Dyadic::new(BigInt::from(3), -2); // 0.75
        let b = Dyadic::new(BigInt::from(5), -1); // 2.5
        assert_eq!(a.add(&b).to_rational(), BigRational::new(13.into(), 4.into()));
        assert_eq!(a.mul(&b).to_rational(), BigRational::new(15.into(), 8.into()));
        assert_eq!(a.sub(&b).signum(), -1);
    }

    #[test]
    fn rounding_is_directed() {
        let q = BigRational::new(1.into(), 3.into());
        let lo = Dyadic::from_rational(&q, 64, false);
        let hi = Dyadic::from_rational(&q, 64, true);
        assert!(lo.to_rational() <= q && q <= hi.to_rational());
        assert!(hi.sub(&lo).to_rational() < BigRational::new(1.into(), BigInt::one() << 60));
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt_lower(80);
        let hi = two.sqrt_upper(80);
        assert!(lo.cmp_dyadic(&hi) != Ordering::Greater);
        let lo2 = lo.mul(&lo).to_rational();
        let hi2 = hi.mul(&hi).to_rational();
        assert!(lo2 <= BigRational::from_integer(2.into()));
        assert!(hi2 >= BigRational::from_integer(2.into()));
        assert!(&hi2 - &lo2 < BigRational::new(1.into(), BigInt::one() << 70));
    }

    #[test]
    fn nth_root_bounds_bracket() {
        let x = Dyadic::from_int(7);
        let lo = x.nth_root_lower(3, 64);
        let hi = x.nth_root_upper(3, 64);
        let cube = |d: &Dyadic| d.mul(d).mul(d).to_rational();
        assert!(cube(&lo) <= BigRational::from_integer(7.into()));
        assert!(cube(&hi) >= BigRational::from_integer(7.into()));
    }

    #[test]
    fn f64_round_trips_exactly() {
        for v in [0.0, 1.5, -3.25, 0.1, 1e-300, -2.5e17] {
            let d = Dyadic::from_f64(v).unwrap();
            assert_eq!(d.to_f64(), v);
        }
    }

    #[test]
    fn decimal_strings_are_exact() {
        let d = Dyadic::new(BigInt::from(-13), -3); // -1.625
        assert_eq!(d.to_decimal_string(), "-1.625");
        let q = Dyadic::rational_from_decimal("-1.625").unwrap();
        assert_eq!(q, d.to_rational());
        assert_eq!(Dyadic::from_int(40).to_decimal_string(), "40");
    }
}
