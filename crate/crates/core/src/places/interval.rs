//! Certified real and complex interval arithmetic over dyadics.
//!
//! Sums and products are exact (the dyadics are closed under them), so every
//! enclosure is sound by construction; division, roots, and exp round
//! outward at an explicit precision.

use super::dyadic::Dyadic;
use crate::exact::Rational;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Closed interval [mid − rad, mid + rad], rad ≥ 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealInterval {
    pub mid: Dyadic,
    pub rad: Dyadic,
}

impl RealInterval {
    pub fn new(mid: Dyadic, rad: Dyadic) -> Self {
        debug_assert!(rad.signum() >= 0);
        RealInterval { mid, rad }
    }

    pub fn exact(d: Dyadic) -> Self {
        RealInterval { mid: d, rad: Dyadic::zero() }
    }

    pub fn zero() -> Self {
        Self::exact(Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::exact(Dyadic::one())
    }

    pub fn from_int(v: i64) -> Self {
        Self::exact(Dyadic::from_int(v))
    }

    pub fn from_endpoints(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo.cmp_dyadic(&hi) != Ordering::Greater);
        let mid = lo.add(&hi).half();
        let rad = hi.sub(&lo).half();
        RealInterval { mid, rad }
    }

    /// Tight dyadic enclosure of a rational at `prec` bits.
    pub fn from_rational(q: &Rational, prec: u64) -> Self {
        if q.denom().is_one() {
            return Self::exact(Dyadic::from_bigint(q.numer().clone()));
        }
        let lo = Dyadic::from_rational(q, prec, false);
        let hi = Dyadic::from_rational(q, prec, true);
        Self::from_endpoints(lo, hi)
    }

    /// Enclosure of a rational interval [lo, hi].
    pub fn from_rational_bounds(lo: &Rational, hi: &Rational, prec: u64) -> Self {
        Self::from_endpoints(
            Dyadic::from_rational(lo, prec, false),
            Dyadic::from_rational(hi, prec, true),
        )
    }

    pub fn lo(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn hi(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }

    pub fn neg(&self) -> Self {
        RealInterval { mid: self.mid.neg(), rad: self.rad.clone() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        RealInterval { mid: self.mid.add(&rhs.mid), rad: self.rad.add(&rhs.rad) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mid = self.mid.mul(&rhs.mid);
        let rad = self
            .mid
            .abs()
            .mul(&rhs.rad)
            .add(&rhs.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&rhs.rad));
        RealInterval { mid, rad }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn scale_dyadic(&self, d: &Dyadic) -> Self {
        RealInterval { mid: self.mid.mul(d), rad: self.rad.mul(&d.abs()) }
    }

    /// |x| as an interval.
    pub fn abs(&self) -> Self {
        if self.contains_zero() {
            let hi = self.lo().abs().cmp_dyadic(&self.hi().abs());
            let top = if hi == Ordering::Greater { self.lo().abs() } else { self.hi().abs() };
            Self::from_endpoints(Dyadic::zero(), top)
        } else if self.mid.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo().signum() <= 0 && self.hi().signum() >= 0
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.lo().to_rational() <= *q && *q <= self.hi().to_rational()
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.lo().cmp_dyadic(&other.lo()) != Ordering::Greater
            && other.hi().cmp_dyadic(&self.hi()) != Ordering::Greater
    }

    /// Certified sign: +1, −1, or None when the interval straddles zero.
    pub fn certified_sign(&self) -> Option<i8> {
        if self.lo().signum() > 0 {
            Some(1)
        } else if self.hi().signum() < 0 {
            Some(-1)
        } else if self.is_exact_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn certainly_lt(&self, rhs: &Self) -> bool {
        self.hi().cmp_dyadic(&rhs.lo()) == Ordering::Less
    }

    pub fn recip(&self, prec: u64) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::PrecisionLoss { context: "reciprocal of interval containing 0".into() });
        }
        let lo_r = self.lo().to_rational();
        let hi_r = self.hi().to_rational();
        let (a, b) = (hi_r.recip(), lo_r.recip());
        Ok(Self::from_endpoints(
            Dyadic::from_rational(&a, prec, false),
            Dyadic::from_rational(&b, prec, true),
        ))
    }

    pub fn div(&self, rhs: &Self, prec: u64) -> Result<Self> {
        Ok(self.mul(&rhs.recip(prec)?))
    }

    /// √x with outward rounding; requires lo ≥ 0.
    pub fn sqrt(&self, prec: u64) -> Result<Self> {
        let lo = self.lo();
        if lo.signum() < 0 {
            return Err(Error::PrecisionLoss { context: "sqrt of interval with negative part".into() });
        }
        Ok(Self::from_endpoints(lo.sqrt_lower(prec), self.hi().sqrt_upper(prec)))
    }

    /// x^{1/k} with outward rounding; requires lo ≥ 0.
    pub fn nth_root(&self, k: u32, prec: u64) -> Result<Self> {
        let lo = self.lo();
        if lo.signum() < 0 {
            return Err(Error::PrecisionLoss { context: "root of interval with negative part".into() });
        }
        Ok(Self::from_endpoints(
            lo.nth_root_lower(k, prec),
            self.hi().nth_root_upper(k, prec),
        ))
    }

    pub fn pow_int(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Round the representation to ~prec mantissa bits, keeping the enclosure.
    pub fn tighten(&self, prec: u64) -> Self {
        if self.mid.mant_bits() <= prec && self.rad.mant_bits() <= prec {
            return self.clone();
        }
        Self::from_endpoints(
            self.lo().round_to(prec, false),
            self.hi().round_to(prec, true),
        )
    }

    pub fn width(&self) -> Dyadic {
        self.rad.shl(1)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// "mid ± rad" decimal rendering after tightening to roughly `digits`
    /// significant decimal digits.
    pub fn to_display_string(&self, digits: u32) -> String {
        let prec = (digits as u64) * 4 + 8;
        let t = self.tighten(prec);
        format!("{} ± {}", t.mid.to_decimal_string(), t.rad.to_decimal_string())
    }
}

/// Rectangle re + i·im with certified real/imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl ComplexInterval {
    pub fn new(re: RealInterval, im: RealInterval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn real(re: RealInterval) -> Self {
        ComplexInterval { re, im: RealInterval::zero() }
    }

    pub fn zero() -> Self {
        Self::real(RealInterval::zero())
    }

    pub fn one() -> Self {
        Self::real(RealInterval::one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_exact_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexInterval { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn neg(&self) -> Self {
        ComplexInterval { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        ComplexInterval { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        ComplexInterval { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        ComplexInterval {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    /// |z|² — the normalized archimedean valuation of a complex value.
    pub fn modulus_sq(&self) -> RealInterval {
        self.re.square().add(&self.im.square())
    }

    pub fn modulus(&self, prec: u64) -> Result<RealInterval> {
        self.modulus_sq().sqrt(prec)
    }

    pub fn div(&self, rhs: &Self, prec: u64) -> Result<Self> {
        let den = rhs.modulus_sq();
        let inv = den.recip(prec)?;
        let num = self.mul(&rhs.conj());
        Ok(ComplexInterval { re: num.re.mul(&inv), im: num.im.mul(&inv) })
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.re.contains(&other.re) && self.im.contains(&other.im)
    }

    pub fn tighten(&self, prec: u64) -> Self {
        ComplexInterval { re: self.re.tighten(prec), im: self.im.tighten(prec) }
    }
}

/// Certified enclosure of e^q for rational q, from the exact Taylor series
/// with an explicit tail bound.
pub fn exp_rational(q: &Rational, prec: u64) -> RealInterval {
    // e^q = e^n · e^r with n = floor(q), r ∈ [0, 1)
    let n = q.numer().div_floor(q.denom());
    let r = q - Rational::from_integer(n.clone());
    debug_assert!(!r.is_negative() && r < Rational::one());

    let (sum, tail) = exp_series_01(&r, prec + 16);
    let base_lo = Dyadic::from_rational(&sum, prec + 8, false);
    let base_hi = Dyadic::from_rational(&(&sum + &tail), prec + 8, true);
    let er = RealInterval::from_endpoints(base_lo, base_hi);

    if n.is_zero() {
        return er;
    }
    let (e_sum, e_tail) = exp_series_01(&Rational::one(), prec + 16);
    // e^1 from the series at 1 (tail bound covers r = 1)
    let e1 = RealInterval::from_endpoints(
        Dyadic::from_rational(&e_sum, prec + 8, false),
        Dyadic::from_rational(&(&e_sum + &e_tail), prec + 8, true),
    );
    let mag = n.magnitude().clone();
    let mut pow = RealInterval::one();
    let mut base = e1;
    let mut k = mag;
    let zero: num_bigint::BigUint = Zero::zero();
    while k > zero {
        if (&k & num_bigint::BigUint::one()) == num_bigint::BigUint::one() {
            pow = pow.mul(&base).tighten(prec + 32);
        }
        base = base.mul(&base).tighten(prec + 32);
        k >>= 1;
    }
    let result = if n.is_negative() {
        er.mul(&pow.recip(prec + 8).expect("e^k is positive"))
    } else {
        er.mul(&pow)
    };
    result.tighten(prec)
}

/// Exact partial sum and tail bound of Σ r^k/k! for r ∈ [0, 1].
fn exp_series_01(r: &Rational, prec: u64) -> (Rational, Rational) {
    let mut sum = Rational::one();
    let mut term = Rational::one();
    let mut k = BigInt::one();
    let threshold = Rational::new(BigInt::one(), BigInt::one() << prec);
    loop {
        term = term * r / Rational::from_integer(k.clone());
        sum += &term;
        k += 1;
        // tail after the k-term ≤ 2·next term for r ≤ 1 since 1/(1 - r/(k+1)) ≤ 2 once k ≥ 1
        let next = &term * r / Rational::from_integer(k.clone());
        let tail = &next + &next;
        if tail < threshold || term.is_zero() {
            return (sum, tail);
        }
    }
}
