//! Factorization of a number field over ℚ_p for unramified p: factor the
//! minimal polynomial mod p, then Hensel-lift the coprime factorization to
//! p^N. Each lifted factor is one completion K_{p,i}/ℚ_p with its local
//! degree and local norm.

use super::padic::{PAdic, PAdicKind};
use crate::exact::field::NumberField;
use crate::exact::{linalg, modp, Rational};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// One ℚ_p-irreducible factor of the minimal polynomial, lifted to p^N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFactor {
    pub p: u64,
    /// working precision N in p-adic digits
    pub digits: u32,
    /// monic, ascending coefficients, residues in [0, p^N)
    pub poly: Vec<BigInt>,
}

impl LocalFactor {
    pub fn local_degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn coeff_padic(&self, i: usize) -> PAdic {
        padic_from_residue(self.p, &self.poly[i], self.digits)
    }
}

/// A p-adic number from a residue mod p^N: the valuation is read off the
/// residue; a zero residue is only known to be O(p^N).
pub fn padic_from_residue(p: u64, residue: &BigInt, digits: u32) -> PAdic {
    let modulus = BigInt::from(p).pow(digits);
    let r = residue.mod_floor(&modulus);
    if r.is_zero() {
        return PAdic { p, kind: PAdicKind::ApproxZero { min_val: digits as i64 } };
    }
    let bp = BigInt::from(p);
    let mut val = 0u32;
    let mut rest = r;
    while rest.is_multiple_of(&bp) {
        rest /= &bp;
        val += 1;
    }
    let prec = digits - val;
    PAdic {
        p,
        kind: PAdicKind::Unit {
            val: val as i64,
            unit: rest.mod_floor(&BigInt::from(p).pow(prec)),
            prec,
        },
    }
}

/// Factor K over ℚ_p at working precision N digits.
///
/// Requires p unramified: p ∤ disc(μ). The product of the returned factor
/// polynomials is ≡ μ (mod p^N) and the local degrees sum to [K:ℚ].
pub fn padic_factor(field: &NumberField, p: u64, digits: u32) -> Result<Vec<LocalFactor>> {
    if !modp::is_prime_u64(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    if (field.disc() % BigInt::from(p)).is_zero() {
        return Err(Error::RamifiedPrime { p });
    }
    assert!(digits >= 1);
    let modulus = BigInt::from(p).pow(digits);
    let mu: Vec<BigInt> = field
        .min_poly()
        .coeffs()
        .iter()
        .map(|c| c.numer().mod_floor(&modulus))
        .collect();

    let fp = modp::ModPoly::from_ratpoly(field.min_poly(), p);
    debug_assert!(fp.is_squarefree(), "p coprime to disc implies squarefree mod p");
    let factors_mod_p = modp::factor_squarefree(&fp);
    let lifted = if factors_mod_p.len() == 1 {
        vec![mu.clone()]
    } else {
        lift_split(&mu, &factors_mod_p, p, digits)
    };

    // Hensel consistency: the lifted product reproduces μ mod p^N.
    let mut prod = vec![BigInt::one()];
    for f in &lifted {
        prod = zp_mul(&prod, f, &modulus);
    }
    debug_assert_eq!(prod, mu);

    let mut out: Vec<LocalFactor> = lifted
        .into_iter()
        .map(|poly| LocalFactor { p, digits, poly })
        .collect();
    out.sort_by(|a, b| (a.local_degree(), &a.poly).cmp(&(b.local_degree(), &b.poly)));
    let n: usize = out.iter().map(|f| f.local_degree()).sum();
    debug_assert_eq!(n, field.degree());
    Ok(out)
}

/// Degrees d_{p,i} of the local factors (r_p entries summing to n).
pub fn padic_factor_degrees(field: &NumberField, p: u64, digits: u32) -> Result<Vec<usize>> {
    Ok(padic_factor(field, p, digits)?
        .iter()
        .map(|f| f.local_degree())
        .collect())
}

// --- arithmetic on Vec<BigInt> polynomials mod m ------------------------------

fn zp_trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zp_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (&out[i + j] + x * y).mod_floor(m);
        }
    }
    zp_trim(out)
}

fn zp_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        out.push((x + y).mod_floor(m));
    }
    zp_trim(out)
}

fn zp_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        out.push((x - y).mod_floor(m));
    }
    zp_trim(out)
}

/// Division with remainder by a *monic* divisor, coefficients mod m.
fn zp_divmod_monic(a: &[BigInt], g: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let d = g.len() - 1;
    debug_assert!(g.last().unwrap().is_one());
    let mut rem: Vec<BigInt> = a.to_vec();
    let mut quo = vec![BigInt::zero(); a.len().saturating_sub(d)];
    while rem.len() >= d + 1 {
        let k = rem.len() - 1 - d;
        let factor = rem.last().unwrap().clone();
        if !factor.is_zero() {
            for (i, gc) in g.iter().enumerate() {
                rem[k + i] = (&rem[k + i] - &factor * gc).mod_floor(m);
            }
            quo[k] = factor;
        }
        rem.pop();
        rem = zp_trim(rem);
    }
    (zp_trim(quo), zp_trim(rem))
}

fn modpoly_to_bigint(f: &modp::ModPoly) -> Vec<BigInt> {
    f.coeffs.iter().map(|&c| BigInt::from(c)).collect()
}

/// Bezout s·g + t·h ≡ 1 (mod p) for coprime g, h over F_p, with
/// deg s < deg h and deg t < deg g.
fn bezout_mod_p(g: &modp::ModPoly, h: &modp::ModPoly) -> (Vec<BigInt>, Vec<BigInt>) {
    let p = g.p;
    let (mut r0, mut r1) = (g.clone(), h.clone());
    let (mut s0, mut s1) = (modp::ModPoly::one(p), modp::ModPoly::zero(p));
    let (mut t0, mut t1) = (modp::ModPoly::zero(p), modp::ModPoly::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.divmod(&r1);
        let ns = s0.sub(&q.mul(&s1));
        let nt = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    // r0 = gcd = constant c: scale both cofactors by c^{-1} (Fermat inverse)
    debug_assert_eq!(r0.degree(), Some(0));
    let c = r0.coeffs[0];
    let mut inv = 1u64;
    let mut base = c % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            inv = ((inv as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        e >>= 1;
    }
    let s = s0.scale(inv);
    let t = t0.scale(inv);
    (modpoly_to_bigint(&s), modpoly_to_bigint(&t))
}

/// Quadratic Hensel lifting of f ≡ g·h (mod p) to mod p^N, g and h monic coprime.
fn hensel_pair(
    f: &[BigInt],
    g0: &modp::ModPoly,
    h0: &modp::ModPoly,
    p: u64,
    digits: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let (mut s, mut t) = bezout_mod_p(g0, h0);
    let mut g = modpoly_to_bigint(&g0.monic());
    let mut h = modpoly_to_bigint(&h0.monic());
    let mut k = 1u32;
    while k < digits {
        let k2 = (2 * k).min(digits);
        let m = BigInt::from(p).pow(k2);
        let fk: Vec<BigInt> = f.iter().map(|c| c.mod_floor(&m)).collect();
        // e = f − g·h
        let e = zp_sub(&fk, &zp_mul(&g, &h, &m), &m);
        // (q, r) = divmod(s·e, h);  g += t·e + q·g;  h += r
        let se = zp_mul(&s, &e, &m);
        let (q, r) = zp_divmod_monic(&se, &h, &m);
        let te = zp_mul(&t, &e, &m);
        let qg = zp_mul(&q, &g, &m);
        g = zp_add(&g, &zp_add(&te, &qg, &m), &m);
        h = zp_add(&h, &r, &m);
        // lift the Bezout pair: b = s·g + t·h − 1
        let b = zp_sub(
            &zp_add(&zp_mul(&s, &g, &m), &zp_mul(&t, &h, &m), &m),
            &[BigInt::one()],
            &m,
        );
        let sb = zp_mul(&s, &b, &m);
        let (c, d) = zp_divmod_monic(&sb, &h, &m);
        s = zp_sub(&s, &d, &m);
        let tb = zp_mul(&t, &b, &m);
        let cg = zp_mul(&c, &g, &m);
        t = zp_sub(&t, &zp_add(&tb, &cg, &m), &m);
        k = k2;
    }
    let mfinal = BigInt::from(p).pow(digits);
    (
        g.iter().map(|c| c.mod_floor(&mfinal)).collect(),
        h.iter().map(|c| c.mod_floor(&mfinal)).collect(),
    )
}

/// Lift a coprime mod-p factorization to mod p^N by binary splitting.
fn lift_split(
    f: &[BigInt],
    factors: &[modp::ModPoly],
    p: u64,
    digits: u32,
) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        let m = BigInt::from(p).pow(digits);
        return vec![f.iter().map(|c| c.mod_floor(&m)).collect()];
    }
    let half = factors.len() / 2;
    let (left, right) = factors.split_at(half);
    let g0 = left.iter().fold(modp::ModPoly::one(p), |acc, x| acc.mul(x));
    let h0 = right.iter().fold(modp::ModPoly::one(p), |acc, x| acc.mul(x));
    let (g, h) = hensel_pair(f, &g0, &h0, p, digits);
    let mut out = lift_split(&g, left, p, digits);
    out.extend(lift_split(&h, right, p, digits));
    out
}

// --- local elements and norms --------------------------------------------------

/// Image of a global field element (coordinates in the power basis, with
/// denominators coprime to p) inside the completion ℚ_p[t]/(g): coordinates
/// of a(t) mod g(t), as p-adics at working precision.
pub fn image_in_factor(fac: &LocalFactor, coords: &[Rational]) -> Result<Vec<PAdic>> {
    let m = BigInt::from(fac.p).pow(fac.digits);
    let mut poly: Vec<BigInt> = Vec::with_capacity(coords.len());
    for c in coords {
        poly.push(rational_residue(c, fac.p, &m)?);
    }
    let poly = zp_trim(poly);
    let (_, rem) = if poly.len() >= fac.poly.len() {
        zp_divmod_monic(&poly, &fac.poly, &m)
    } else {
        (vec![], poly)
    };
    let d = fac.local_degree();
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let r = rem.get(i).cloned().unwrap_or_else(BigInt::zero);
        out.push(padic_from_residue(fac.p, &r, fac.digits));
    }
    Ok(out)
}

fn rational_residue(q: &Rational, p: u64, m: &BigInt) -> Result<BigInt> {
    let den = q.denom();
    if den.is_multiple_of(&BigInt::from(p)) {
        return Err(Error::Invalid(format!(
            "denominator {den} not invertible mod {p}^N"
        )));
    }
    let inv = super::padic::mod_inverse(&den.mod_floor(m), m)
        .ok_or_else(|| Error::Invalid("denominator not invertible".into()))?;
    Ok((q.numer().mod_floor(m) * inv).mod_floor(m))
}

/// ℕ_{K_{p,i}/ℚ_p} evaluated at local power-basis coordinates: determinant of
/// the local multiplication matrix, multiplicative at working precision.
pub fn local_norm_eval(fac: &LocalFactor, coords: &[PAdic]) -> Result<PAdic> {
    let d = fac.local_degree();
    assert_eq!(coords.len(), d, "coordinate length must equal local degree");
    if coords.iter().all(|c| c.is_exact_zero()) {
        return Ok(PAdic::exact_zero(fac.p));
    }
    // scale out negative valuations so all entries are p-adic integers
    let mut min_val = 0i64;
    for c in coords {
        if let PAdicKind::Unit { val, .. } = &c.kind {
            min_val = min_val.min(*val);
        }
    }
    let shift = PAdic::from_rational(
        fac.p,
        &Rational::from_integer(BigInt::from(fac.p).pow((-min_val) as u32)),
        fac.digits,
    );
    let m = BigInt::from(fac.p).pow(fac.digits);
    let mut residues = Vec::with_capacity(d);
    for c in coords {
        let scaled = if min_val < 0 { c.mul(&shift) } else { c.clone() };
        residues.push(scaled.residue(fac.digits).map_err(|_| Error::PrecisionLoss {
            context: "coordinate precision too low for norm".into(),
        })?);
    }
    // multiplication matrix of Σ residues_j t^j in ℤ/p^N [t]/(g)
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(d);
    let mut cur = zp_trim(residues.clone());
    let pad = |v: &[BigInt]| {
        let mut out = v.to_vec();
        out.resize(d, BigInt::zero());
        out
    };
    cols.push(pad(&cur));
    for _ in 1..d {
        // multiply by t and reduce
        let mut shifted = vec![BigInt::zero()];
        shifted.extend(cur.iter().cloned());
        let shifted = zp_trim(shifted);
        let (_, rem) = if shifted.len() >= fac.poly.len() {
            zp_divmod_monic(&shifted, &fac.poly, &m)
        } else {
            (vec![], shifted)
        };
        cols.push(pad(&rem));
        cur = rem;
    }
    // exact integer determinant of residue representatives ≡ det mod p^N
    let mat: linalg::Matrix = (0..d)
        .map(|r| (0..d).map(|c| Rational::from_integer(cols[c][r].clone())).collect())
        .collect();
    let det = linalg::det(&mat);
    debug_assert!(det.denom().is_one());
    let norm_scaled = padic_from_residue(fac.p, &det.numer().mod_floor(&m), fac.digits);
    if min_val < 0 {
        // ℕ(p^k x) = p^{kd} ℕ(x): undo the scaling
        let unscale = Rational::new(
            BigInt::one(),
            BigInt::from(fac.p).pow(((-min_val) as usize * d) as u32),
        );
        Ok(norm_scaled.mul(&PAdic::from_rational(fac.p, &unscale, fac.digits)))
    } else {
        Ok(norm_scaled)
    }
}
