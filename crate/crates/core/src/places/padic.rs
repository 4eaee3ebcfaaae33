//! Capped-relative-precision p-adic numbers.
//!
//! A nonzero value is p^val · u with the unit u known modulo p^prec
//! (leading digit nonzero). Cancellation in sums produces either a shorter
//! unit or an "approximate zero" O(p^k) whose valuation is only bounded
//! below; comparisons against approximate zeros raise PRECISION_LOSS.

use crate::exact::Rational;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub const DEFAULT_DIGITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PAdicKind {
    ExactZero,
    /// Known only to be ≡ 0 mod p^min_val.
    ApproxZero { min_val: i64 },
    /// p^val · unit with unit ∈ [0, p^prec), unit ≢ 0 (mod p).
    Unit { val: i64, unit: BigInt, prec: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdic {
    pub p: u64,
    pub kind: PAdicKind,
}

fn pow_p(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

impl PAdic {
    pub fn exact_zero(p: u64) -> Self {
        PAdic { p, kind: PAdicKind::ExactZero }
    }

    pub fn from_bigint(p: u64, v: &BigInt, prec: u32) -> Self {
        if v.is_zero() {
            return Self::exact_zero(p);
        }
        let bp = BigInt::from(p);
        let mut val = 0i64;
        let mut rest = v.clone();
        while rest.is_multiple_of(&bp) {
            rest /= &bp;
            val += 1;
        }
        let unit = rest.mod_floor(&pow_p(p, prec));
        PAdic { p, kind: PAdicKind::Unit { val, unit, prec } }
    }

    pub fn from_int(p: u64, v: i64, prec: u32) -> Self {
        Self::from_bigint(p, &BigInt::from(v), prec)
    }

    /// Exact rational → p-adic at working precision.
    pub fn from_rational(p: u64, q: &Rational, prec: u32) -> Self {
        if q.is_zero() {
            return Self::exact_zero(p);
        }
        let num = Self::from_bigint(p, q.numer(), prec + 1);
        let den = Self::from_bigint(p, q.denom(), prec + 1);
        num.div(&den).expect("nonzero denominator")
            .with_prec_at_most(prec)
    }

    fn with_prec_at_most(&self, cap: u32) -> Self {
        match &self.kind {
            PAdicKind::Unit { val, unit, prec } if *prec > cap => PAdic {
                p: self.p,
                kind: PAdicKind::Unit {
                    val: *val,
                    unit: unit.mod_floor(&pow_p(self.p, cap)),
                    prec: cap,
                },
            },
            _ => self.clone(),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.kind, PAdicKind::ExactZero)
    }

    /// Certified valuation; errors on approximate zeros.
    pub fn valuation(&self) -> Result<Option<i64>> {
        match &self.kind {
            PAdicKind::ExactZero => Ok(None),
            PAdicKind::ApproxZero { min_val } => Err(Error::PrecisionLoss {
                context: format!("valuation known only to be ≥ {min_val}"),
            }),
            PAdicKind::Unit { val, .. } => Ok(Some(*val)),
        }
    }

    /// Normalized absolute value |x|_p = p^{−v(x)} as an exact rational.
    pub fn normalized_abs(&self) -> Result<Rational> {
        match self.valuation()? {
            None => Ok(Rational::zero()),
            Some(v) if v >= 0 => Ok(Rational::new(
                BigInt::one(),
                BigInt::from(self.p).pow(v as u32),
            )),
            Some(v) => Ok(Rational::from_integer(BigInt::from(self.p).pow((-v) as u32))),
        }
    }

    pub fn neg(&self) -> Self {
        match &self.kind {
            PAdicKind::Unit { val, unit, prec } => {
                let m = pow_p(self.p, *prec);
                PAdic {
                    p: self.p,
                    kind: PAdicKind::Unit {
                        val: *val,
                        unit: (&m - unit).mod_floor(&m),
                        prec: *prec,
                    },
                }
            }
            _ => self.clone(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p, "mixed primes");
        let p = self.p;
        match (&self.kind, &rhs.kind) {
            (PAdicKind::ExactZero, _) => rhs.clone(),
            (_, PAdicKind::ExactZero) => self.clone(),
            (PAdicKind::ApproxZero { min_val: a }, PAdicKind::ApproxZero { min_val: b }) => {
                PAdic { p, kind: PAdicKind::ApproxZero { min_val: *a.min(b) } }
            }
            (PAdicKind::ApproxZero { min_val }, PAdicKind::Unit { val, unit, prec })
            | (PAdicKind::Unit { val, unit, prec }, PAdicKind::ApproxZero { min_val }) => {
                if *val < *min_val {
                    // known digits below the uncertainty survive
                    let keep = ((*min_val - *val) as u32).min(*prec);
                    PAdic {
                        p,
                        kind: PAdicKind::Unit {
                            val: *val,
                            unit: unit.mod_floor(&pow_p(p, keep)),
                            prec: keep,
                        },
                    }
                } else {
                    PAdic { p, kind: PAdicKind::ApproxZero { min_val: *min_val } }
                }
            }
            (
                PAdicKind::Unit { val: va, unit: ua, prec: pa },
                PAdicKind::Unit { val: vb, unit: ub, prec: pb },
            ) => {
                // absolute precision of each operand, take the weaker
                let abs_prec = (*va + *pa as i64).min(*vb + *pb as i64);
                let v0 = (*va).min(*vb);
                let digits = (abs_prec - v0) as u32;
                if digits == 0 {
                    return PAdic { p, kind: PAdicKind::ApproxZero { min_val: abs_prec } };
                }
                let m = pow_p(p, digits);
                let bp = BigInt::from(p);
                let a = (ua * bp.pow((*va - v0) as u32)).mod_floor(&m);
                let b = (ub * bp.pow((*vb - v0) as u32)).mod_floor(&m);
                let sum = (a + b).mod_floor(&m);
                if sum.is_zero() {
                    return PAdic { p, kind: PAdicKind::ApproxZero { min_val: abs_prec } };
                }
                // peel off carried powers of p
                let mut shift = 0u32;
                let mut rest = sum;
                while rest.is_multiple_of(&bp) {
                    rest /= &bp;
                    shift += 1;
                }
                let new_prec = digits - shift;
                PAdic {
                    p,
                    kind: PAdicKind::Unit {
                        val: v0 + shift as i64,
                        unit: rest.mod_floor(&pow_p(p, new_prec)),
                        prec: new_prec,
                    },
                }
            }
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p, "mixed primes");
        let p = self.p;
        match (&self.kind, &rhs.kind) {
            (PAdicKind::ExactZero, _) | (_, PAdicKind::ExactZero) => Self::exact_zero(p),
            (PAdicKind::ApproxZero { min_val }, PAdicKind::Unit { val, .. })
            | (PAdicKind::Unit { val, .. }, PAdicKind::ApproxZero { min_val }) => {
                PAdic { p, kind: PAdicKind::ApproxZero { min_val: min_val + val } }
            }
            (PAdicKind::ApproxZero { min_val: a }, PAdicKind::ApproxZero { min_val: b }) => {
                PAdic { p, kind: PAdicKind::ApproxZero { min_val: a + b } }
            }
            (
                PAdicKind::Unit { val: va, unit: ua, prec: pa },
                PAdicKind::Unit { val: vb, unit: ub, prec: pb },
            ) => {
                let prec = (*pa).min(*pb);
                let unit = (ua * ub).mod_floor(&pow_p(p, prec));
                PAdic { p, kind: PAdicKind::Unit { val: va + vb, unit, prec } }
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        match &self.kind {
            PAdicKind::ExactZero => Err(Error::Invalid("inverse of zero".into())),
            PAdicKind::ApproxZero { .. } => Err(Error::PrecisionLoss {
                context: "inverse of approximate zero".into(),
            }),
            PAdicKind::Unit { val, unit, prec } => {
                let m = pow_p(self.p, *prec);
                let inv = mod_inverse(unit, &m)
                    .ok_or_else(|| Error::Invalid("unit not invertible".into()))?;
                Ok(PAdic {
                    p: self.p,
                    kind: PAdicKind::Unit { val: -val, unit: inv, prec: *prec },
                })
            }
        }
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inverse()?))
    }

    /// Base-p digits of the unit part, length = prec.
    pub fn digits(&self) -> Vec<u64> {
        match &self.kind {
            PAdicKind::Unit { unit, prec, .. } => {
                let bp = BigInt::from(self.p);
                let mut rest = unit.clone();
                let mut out = Vec::with_capacity(*prec as usize);
                for _ in 0..*prec {
                    let (q, r) = rest.div_mod_floor(&bp);
                    out.push(r.to_u64().unwrap());
                    rest = q;
                }
                out
            }
            _ => vec![],
        }
    }

    /// Residue of a p-adic integer mod p^k (val ≥ 0 and enough precision).
    pub fn residue(&self, k: u32) -> Result<BigInt> {
        match &self.kind {
            PAdicKind::ExactZero => Ok(BigInt::zero()),
            PAdicKind::ApproxZero { min_val } if *min_val >= k as i64 => Ok(BigInt::zero()),
            PAdicKind::ApproxZero { .. } => Err(Error::PrecisionLoss {
                context: "residue of approximate zero".into(),
            }),
            PAdicKind::Unit { val, unit, prec } => {
                if *val < 0 {
                    return Err(Error::Invalid("residue of non-integral p-adic".into()));
                }
                if *val as u32 >= k {
                    return Ok(BigInt::zero());
                }
                if *val + (*prec as i64) < (k as i64) {
                    return Err(Error::PrecisionLoss {
                        context: format!("residue mod p^{k} exceeds known precision"),
                    });
                }
                Ok((unit * pow_p(self.p, *val as u32)).mod_floor(&pow_p(self.p, k)))
            }
        }
    }

    /// Certified equality to at least `digits` relative digits.
    pub fn agrees_with(&self, rhs: &Self, digits: u32) -> Result<bool> {
        let d = self.sub(rhs);
        match &d.kind {
            PAdicKind::ExactZero => Ok(true),
            PAdicKind::ApproxZero { min_val } => {
                let sv = match (&self.kind, &rhs.kind) {
                    (PAdicKind::Unit { val, .. }, _) | (_, PAdicKind::Unit { val, .. }) => *val,
                    _ => 0,
                };
                Ok(*min_val - sv >= digits as i64)
            }
            PAdicKind::Unit { val, .. } => {
                let sv = match (&self.kind, &rhs.kind) {
                    (PAdicKind::Unit { val: v, .. }, _) => *v,
                    (_, PAdicKind::Unit { val: v, .. }) => *v,
                    _ => 0,
                };
                Ok(*val - sv >= digits as i64)
            }
        }
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

impl std::fmt::Display for PAdic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            PAdicKind::ExactZero => write!(f, "0"),
            PAdicKind::ApproxZero { min_val } => write!(f, "O({}^{})", self.p, min_val),
            PAdicKind::Unit { val, unit, prec } => {
                write!(f, "{}^{}·({} mod {}^{})", self.p, val, unit, self.p, prec)
            }
        }
    }
}
