//! Dense univariate polynomial arithmetic over F_p, p an odd or even prime
//! fitting in u64. Used for factor-degree patterns and as the base step of
//! Hensel lifting.

use super::poly::RatPolynomial;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod_int(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod_int(a, p - 2, p)
}

pub fn bigint_mod_u64(v: &BigInt, p: u64) -> u64 {
    let m = v.mod_floor(&BigInt::from(p));
    m.to_u64().expect("mod_floor of positive modulus fits u64")
}

/// Polynomial over F_p, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in &mut coeffs {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        ModPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        ModPoly::new(p, vec![0, 1])
    }

    /// Reduce an integral rational polynomial mod p; p must not divide any
    /// coefficient denominator.
    pub fn from_ratpoly(f: &RatPolynomial, p: u64) -> Self {
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| {
                let num = bigint_mod_u64(c.numer(), p);
                let den = bigint_mod_u64(c.denom(), p);
                assert!(den != 0, "denominator divisible by p");
                mulmod(num, invmod(den, p), p)
            })
            .collect();
        ModPoly::new(p, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn lc(&self) -> u64 {
        *self.coeffs.last().expect("lc of zero polynomial")
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = rhs.coeffs.get(i).copied().unwrap_or(0);
            *o = (a + b) % p;
        }
        ModPoly::new(p, out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = rhs.coeffs.get(i).copied().unwrap_or(0);
            *o = (a + p - b) % p;
        }
        ModPoly::new(p, out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return ModPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, p)) % p;
            }
        }
        ModPoly::new(p, out)
    }

    pub fn scale(&self, c: u64) -> Self {
        ModPoly::new(self.p, self.coeffs.iter().map(|&a| mulmod(a, c, self.p)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invmod(self.lc(), self.p))
    }

    pub fn divmod(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero());
        let p = self.p;
        let d = rhs.degree().unwrap();
        let lc_inv = invmod(rhs.lc(), p);
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; self.coeffs.len().saturating_sub(d)];
        while rem.len() >= d + 1 {
            let k = rem.len() - 1 - d;
            let factor = mulmod(*rem.last().unwrap(), lc_inv, p);
            if factor != 0 {
                for (i, &b) in rhs.coeffs.iter().enumerate() {
                    let sub = mulmod(factor, b, p);
                    rem[k + i] = (rem[k + i] + p - sub) % p;
                }
                quo[k] = factor;
            }
            rem.pop();
        }
        (ModPoly::new(p, quo), ModPoly::new(p, rem))
    }

    pub fn rem(&self, rhs: &Self) -> Self {
        self.divmod(rhs).1
    }

    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return ModPoly::zero(self.p);
        }
        let p = self.p;
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, (i as u64) % p, p))
            .collect();
        ModPoly::new(p, out)
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// self^e mod m.
    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut acc = ModPoly::one(self.p);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

}

/// Degrees (d, count of irreducible factors of degree d) of a squarefree
/// monic polynomial mod p — distinct-degree factorization without the
/// equal-degree step.
pub fn distinct_degree_pattern(f: &ModPoly) -> Vec<(usize, usize)> {
    let mut f = f.monic();
    let p = f.p;
    let mut pattern = vec![];
    let mut h = ModPoly::x(p);
    let mut d = 0usize;
    while f.degree().unwrap_or(0) >= 1 {
        d += 1;
        if 2 * d > f.degree().unwrap() {
            // whatever remains is a single irreducible factor
            let deg = f.degree().unwrap();
            pattern.push((deg, 1));
            break;
        }
        h = h.powmod(p, &f);
        let diff = h.sub(&ModPoly::x(p));
        let g = f.gcd(&diff);
        if let Some(gd) = g.degree() {
            if gd > 0 {
                pattern.push((d, gd / d));
                f = f.divmod(&g).0;
                h = h.rem(&f);
            }
        }
    }
    pattern
}

/// Full factorization of a squarefree monic polynomial mod p into monic
/// irreducibles, deterministic via a seeded splitting RNG.
pub fn factor_squarefree(f: &ModPoly) -> Vec<ModPoly> {
    let f = f.monic();
    let p = f.p;
    let mut out = vec![];
    // distinct-degree stage
    let mut rest = f.clone();
    let mut h = ModPoly::x(p);
    let mut d = 0usize;
    let mut stages: Vec<(usize, ModPoly)> = vec![];
    while rest.degree().unwrap_or(0) >= 1 {
        d += 1;
        if 2 * d > rest.degree().unwrap() {
            stages.push((rest.degree().unwrap(), rest.clone()));
            break;
        }
        h = h.powmod(p, &rest);
        let g = rest.gcd(&h.sub(&ModPoly::x(p)));
        if g.degree().unwrap_or(0) > 0 {
            stages.push((d, g.clone()));
            rest = rest.divmod(&g).0;
            h = h.rem(&rest);
        }
    }
    // equal-degree stage (Cantor–Zassenhaus; trace map for p = 2)
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_caf3 ^ p);
    for (deg, prod) in stages {
        split_equal_degree(&prod, deg, &mut rng, &mut out);
    }
    out.sort_by(|a, b| (a.degree(), &a.coeffs).cmp(&(b.degree(), &b.coeffs)));
    out
}

fn split_equal_degree(f: &ModPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<ModPoly>) {
    let n = f.degree().unwrap();
    if n == d {
        out.push(f.monic());
        return;
    }
    let p = f.p;
    loop {
        let mut coeffs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        coeffs.push(1);
        let r = ModPoly::new(p, coeffs);
        let g = if p == 2 {
            // trace map T(r) = r + r^2 + ... + r^(2^(d-1))
            let mut t = ModPoly::zero(p);
            let mut cur = r.rem(f);
            for _ in 0..d {
                t = t.add(&cur);
                cur = cur.mul(&cur).rem(f);
            }
            f.gcd(&t)
        } else {
            let e = (powmod_u128(p, d) - 1) / 2;
            let s = powmod_bige(&r, e, f);
            f.gcd(&s.sub(&ModPoly::one(p)))
        };
        if let Some(gd) = g.degree() {
            if gd > 0 && gd < n {
                split_equal_degree(&g, d, rng, out);
                split_equal_degree(&f.divmod(&g).0, d, rng, out);
                return;
            }
        }
    }
}

fn powmod_u128(p: u64, d: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..d {
        acc *= p as u128;
    }
    acc
}

fn powmod_bige(base: &ModPoly, mut e: u128, m: &ModPoly) -> ModPoly {
    let mut acc = ModPoly::one(base.p);
    let mut b = base.rem(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b).rem(m);
        }
        b = b.mul(&b).rem(m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_int(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Ascending primes, unbounded iterator.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime_u64(n))
}

pub use self::ModPoly as Poly;
