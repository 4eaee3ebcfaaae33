//! Number fields ℚ[t]/(μ) with the power basis 1, t, …, t^{n−1}.

use super::linalg::{self, Matrix};
use super::modp::{self, ModPoly};
use super::poly::RatPolynomial;
use super::{rat_int, Rational};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A number field K = ℚ[t]/(μ) for a monic irreducible μ ∈ ℤ[t].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    min_poly: RatPolynomial,
    degree: usize,
    disc: BigInt,
}

/// Element of a number field in power-basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElement {
    pub coords: Vec<Rational>,
}

impl FieldElement {
    pub fn from_ints(coords: &[i64]) -> Self {
        FieldElement { coords: coords.iter().map(|&c| rat_int(c)).collect() }
    }
}

/// Builds a number field from ascending integer coefficients of a monic
/// polynomial, certifying irreducibility.
pub fn make_field(coeffs: &[i64]) -> Result<NumberField> {
    let poly = RatPolynomial::from_int_coeffs(coeffs);
    NumberField::new(poly)
}

impl NumberField {
    pub fn new(min_poly: RatPolynomial) -> Result<Self> {
        if !min_poly.is_monic() || !min_poly.has_integer_coeffs() {
            return Err(Error::NotMonic);
        }
        let degree = min_poly.degree().unwrap();
        if degree < 1 {
            return Err(Error::NotMonic);
        }
        let disc_rat = min_poly.discriminant();
        debug_assert!(disc_rat.denom().is_one());
        let disc = disc_rat.numer().clone();
        if disc.is_zero() {
            // repeated factor: gcd(μ, μ') is a proper divisor
            let g = min_poly.gcd(&min_poly.derivative());
            return Err(Error::Reducible { factor: g.to_string() });
        }
        if degree > 1 {
            certify_irreducible(&min_poly, &disc)?;
        }
        Ok(NumberField { min_poly, degree, disc })
    }

    pub fn min_poly(&self) -> &RatPolynomial {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    /// Ascending integer coefficients of μ, the serialization format.
    pub fn coeff_list(&self) -> Vec<BigInt> {
        self.min_poly.coeffs().iter().map(|c| c.numer().clone()).collect()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coords: vec![Rational::zero(); self.degree] }
    }

    pub fn one(&self) -> FieldElement {
        let mut coords = vec![Rational::zero(); self.degree];
        coords[0] = Rational::one();
        FieldElement { coords }
    }

    /// The class of t.
    pub fn generator(&self) -> FieldElement {
        let mut coords = vec![Rational::zero(); self.degree];
        if self.degree == 1 {
            // t ≡ -μ(0) in a degree-1 field
            coords[0] = -self.min_poly.coeff(0);
        } else {
            coords[1] = Rational::one();
        }
        FieldElement { coords }
    }

    pub fn element(&self, coords: Vec<Rational>) -> FieldElement {
        assert_eq!(coords.len(), self.degree, "coordinate length mismatch");
        FieldElement { coords }
    }

    fn as_poly(&self, a: &FieldElement) -> RatPolynomial {
        RatPolynomial::from_coeffs(a.coords.clone())
    }

    fn reduce(&self, p: &RatPolynomial) -> FieldElement {
        let r = p.rem(&self.min_poly);
        let mut coords = r.coeffs().to_vec();
        coords.resize(self.degree, Rational::zero());
        FieldElement { coords }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.reduce(&self.as_poly(a).mul(&self.as_poly(b)))
    }

    /// Matrix of multiplication by `a` in the power basis: column j holds the
    /// coordinates of a·t^j reduced mod μ.
    pub fn mul_matrix(&self, a: &FieldElement) -> Matrix {
        let n = self.degree;
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(n);
        let mut cur = self.as_poly(a);
        cols.push(self.reduce(&cur).coords);
        for _ in 1..n {
            cur = cur.mul(&RatPolynomial::x());
            let reduced = self.reduce(&cur);
            cur = RatPolynomial::from_coeffs(reduced.coords.clone());
            cols.push(reduced.coords);
        }
        (0..n)
            .map(|row| (0..n).map(|col| cols[col][row].clone()).collect())
            .collect()
    }

    /// ℕ_{K/ℚ}(a) = det of the multiplication matrix.
    pub fn norm(&self, a: &FieldElement) -> Rational {
        linalg::det(&self.mul_matrix(a))
    }
}

/// Irreducibility certificate: factor-degree patterns modulo several good
/// primes, falling back to a complete Kronecker factor search.
fn certify_irreducible(poly: &RatPolynomial, disc: &BigInt) -> Result<()> {
    let n = poly.degree().unwrap();
    // possible proper-factor degrees, as a bitmask; bit d set = degree d compatible
    let mut possible: u64 = (1 << (n + 1)) - 1;
    let mut tried = 0usize;
    for p in modp::primes() {
        if tried >= 12 {
            break;
        }
        if (disc % BigInt::from(p)).is_zero() {
            continue;
        }
        tried += 1;
        let fp = ModPoly::from_ratpoly(poly, p);
        let pattern = modp::distinct_degree_pattern(&fp);
        if pattern == vec![(n, 1)] {
            return Ok(()); // irreducible mod p
        }
        possible &= subset_sums(&pattern, n);
        let proper_mask = ((1u64 << n) - 1) & !1;
        if possible & proper_mask == 0 {
            return Ok(()); // degree patterns rule out every nontrivial split
        }
    }
    // complete search over integer factors (Kronecker interpolation)
    match kronecker_factor(poly, possible) {
        Some(g) => Err(Error::Reducible { factor: g.to_string() }),
        None => Ok(()),
    }
}

/// Bitmask of degrees expressible as subset sums of the factor-degree multiset.
fn subset_sums(pattern: &[(usize, usize)], n: usize) -> u64 {
    let mut mask: u64 = 1; // degree 0 always
    for &(d, count) in pattern {
        for _ in 0..count {
            mask |= mask << d;
        }
    }
    mask & ((1u64 << (n + 1)) - 1)
}

/// Searches for a monic integer factor of degree 1..n/2 whose degree is
/// allowed by `possible`. Complete: every integer factor g satisfies
/// g(x) | f(x) at integer points, so interpolating through divisor tuples
/// enumerates all candidates.
fn kronecker_factor(poly: &RatPolynomial, possible: u64) -> Option<RatPolynomial> {
    let n = poly.degree().unwrap();
    for d in 1..=n / 2 {
        if possible & (1 << d) == 0 {
            continue;
        }
        // evaluation points 0, 1, -1, 2, -2, ...
        let mut points: Vec<Rational> = vec![];
        let mut values: Vec<BigInt> = vec![];
        let mut k = 0i64;
        while points.len() < d + 1 {
            let candidates = if k == 0 { vec![0] } else { vec![k, -k] };
            for c in candidates {
                if points.len() == d + 1 {
                    break;
                }
                let x = rat_int(c);
                let v = poly.eval(&x);
                if v.is_zero() {
                    // exact linear factor t - c
                    return Some(RatPolynomial::from_int_coeffs(&[-c, 1]));
                }
                points.push(x);
                values.push(v.numer().clone());
            }
            k += 1;
        }
        let divisor_lists: Vec<Vec<BigInt>> =
            values.iter().map(|v| signed_divisors(v)).collect();
        let mut idx = vec![0usize; d + 1];
        loop {
            // fix the first value positive: g and -g give the same factor
            if divisor_lists[0][idx[0]].is_positive() {
                let ys: Vec<Rational> = idx
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| Rational::from_integer(divisor_lists[i][j].clone()))
                    .collect();
                if let Some(g) = interpolate_integer(&points, &ys, d) {
                    if poly.rem(&g).is_zero() {
                        return Some(g);
                    }
                }
            }
            // advance the multi-index
            let mut pos = 0;
            loop {
                idx[pos] += 1;
                if idx[pos] < divisor_lists[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
                if pos == d + 1 {
                    break;
                }
            }
            if pos == d + 1 {
                break;
            }
        }
    }
    None
}

/// All divisors of |v| with both signs, ascending by absolute value.
fn signed_divisors(v: &BigInt) -> Vec<BigInt> {
    let a = v.abs();
    let mut divs: Vec<BigInt> = vec![];
    let mut d = BigInt::one();
    while &d * &d <= a {
        if a.is_multiple_of(&d) {
            divs.push(d.clone());
            let q = &a / &d;
            if q != d {
                divs.push(q);
            }
        }
        d += 1;
    }
    divs.sort();
    let mut out = Vec::with_capacity(divs.len() * 2);
    for d in divs {
        out.push(d.clone());
        out.push(-d);
    }
    out
}

/// Lagrange interpolation; Some(g) only when g is monic of degree exactly d
/// with integer coefficients.
fn interpolate_integer(xs: &[Rational], ys: &[Rational], d: usize) -> Option<RatPolynomial> {
    let mut acc = RatPolynomial::zero();
    for (i, yi) in ys.iter().enumerate() {
        let mut num = RatPolynomial::constant(yi.clone());
        let mut den = Rational::one();
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            num = num.mul(&RatPolynomial::from_coeffs(vec![-xj.clone(), Rational::one()]));
            den *= &xs[i] - xj;
        }
        acc = acc.add(&num.scale(&(Rational::one() / den)));
    }
    if acc.degree() != Some(d) || !acc.has_integer_coeffs() {
        return None;
    }
    let lead = acc.leading().unwrap();
    if lead.is_one() {
        Some(acc)
    } else if (-lead.clone()).is_one() {
        Some(acc.neg())
    } else {
        None
    }
}

/// True when p divides the field discriminant (the rejected ramified case).
pub fn divides_disc(field: &NumberField, p: u64) -> bool {
    (field.disc() % BigInt::from(p)).is_zero()
}

/// Convenience: i64 view of small discriminants for tests and display.
pub fn disc_i64(field: &NumberField) -> Option<i64> {
    field.disc().to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sqrt2_field_basics() {
        let k = make_field(&[-2, 0, 1]).unwrap();
        assert_eq!(k.degree(), 2);
        assert_eq!(disc_i64(&k), Some(8));
        let sqrt2 = k.generator();
        let m = k.mul_matrix(&sqrt2);
        // columns: sqrt2*1 = sqrt2, sqrt2*sqrt2 = 2
        assert_eq!(m[0][0], rat_int(0));
        assert_eq!(m[0][1], rat_int(2));
        assert_eq!(m[1][0], rat_int(1));
        assert_eq!(m[1][1], rat_int(0));
        assert_eq!(k.norm(&sqrt2), rat_int(-2));
        // 1 + sqrt2 is a fundamental unit of norm -1
        assert_eq!(k.norm(&FieldElement::from_ints(&[1, 1])), rat_int(-1));
    }

    #[test]
    fn identity_mul_matrix() {
        let k = make_field(&[-2, 0, 0, 1]).unwrap();
        assert_eq!(k.mul_matrix(&k.one()), linalg::identity(3));
    }

    #[test]
    fn cbrt2_field() {
        let k = make_field(&[-2, 0, 0, 1]).unwrap();
        assert_eq!(disc_i64(&k), Some(-108));
        let t = k.generator();
        let m = k.mul_matrix(&t);
        // cyclic with 2 in the corner: t*t^2 = 2
        assert_eq!(m[0][2], rat_int(2));
        assert_eq!(m[1][0], rat_int(1));
        assert_eq!(m[2][1], rat_int(1));
        assert_eq!(m[0][0], rat_int(0));
        // norm(1 + cbrt2): 3x3 determinant oracle below
        let a = FieldElement::from_ints(&[1, 1, 0]);
        assert_eq!(k.norm(&a), rat_int(3));
        // independent oracle: cofactor expansion of [[1,0,2],[1,1,0],[0,1,1]]
        let oracle = 1 * (1 * 1 - 0 * 1) - 0 * (1 * 1 - 0 * 0) + 2 * (1 * 1 - 1 * 0);
        assert_eq!(oracle, 3);
    }

    #[test]
    fn reducible_and_nonmonic_rejected() {
        assert!(matches!(make_field(&[-1, 0, 1]), Err(Error::Reducible { .. })));
        assert!(matches!(make_field(&[1, 2, 1]), Err(Error::Reducible { .. })));
        assert_eq!(make_field(&[1, 0, 2]).unwrap_err(), Error::NotMonic);
        // degree-4 reducible with no rational root: (t^2+1)(t^2-2)
        assert!(matches!(
            make_field(&[-2, 0, -1, 0, 1]),
            Err(Error::Reducible { .. })
        ));
    }

    #[test]
    fn known_irreducibles_accepted() {
        for coeffs in [
            &[-2i64, 0, 1][..],
            &[1, 0, 1],
            &[-2, 0, 0, 1],
            &[-1, -1, 1][..],          // t^2 - t - 1 (golden ratio)
            &[-1, -1, 0, 0, 1],        // t^4 - t - 1
            &[9, 0, -10, 0, 1][..],    // t^4 - 10t^2 + 9 is reducible: (t^2-1)(t^2-9)
        ] {
            let r = make_field(coeffs);
            if coeffs == [9, 0, -10, 0, 1] {
                assert!(matches!(r, Err(Error::Reducible { .. })));
            } else {
                assert!(r.is_ok(), "coeffs {coeffs:?}");
            }
        }
    }

    #[test]
    fn degree_one_field_is_rational() {
        let k = make_field(&[0, 1]).unwrap();
        assert_eq!(k.degree(), 1);
        let a = FieldElement::from_ints(&[7]);
        assert_eq!(k.norm(&a), rat_int(7));
    }

    fn small_element(k: &NumberField, seed: &[i64]) -> FieldElement {
        FieldElement::from_ints(&seed[..k.degree()])
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(coords_a in proptest::collection::vec(-10i64..=10, 3),
                                  coords_b in proptest::collection::vec(-10i64..=10, 3)) {
            let k = make_field(&[-2, 0, 0, 1]).unwrap();
            let a = small_element(&k, &coords_a);
            let b = small_element(&k, &coords_b);
            let ab = k.mul(&a, &b);
            prop_assert_eq!(k.norm(&ab), k.norm(&a) * k.norm(&b));
        }

        #[test]
        fn mul_matrix_is_ring_homomorphism(coords_a in proptest::collection::vec(-6i64..=6, 2),
                                           coords_b in proptest::collection::vec(-6i64..=6, 2)) {
            let k = make_field(&[-2, 0, 1]).unwrap();
            let a = small_element(&k, &coords_a);
            let b = small_element(&k, &coords_b);
            let sum = k.add(&a, &b);
            let prod = k.mul(&a, &b);
            prop_assert_eq!(
                k.mul_matrix(&sum),
                linalg::mat_add(&k.mul_matrix(&a), &k.mul_matrix(&b))
            );
            prop_assert_eq!(
                k.mul_matrix(&prod),
                linalg::mat_mul(&k.mul_matrix(&a), &k.mul_matrix(&b))
            );
        }

        #[test]
        fn norm_matches_resultant(coords in proptest::collection::vec(-8i64..=8, 2)) {
            // norm(a) = (-1)^(n·deg a) Res(μ, a-as-poly) for a ≠ 0 ... sign folded:
            // Res(μ, g) = lc(μ)^{deg g} ∏ g(θ_i) = ∏ g(θ_i) = ℕ(g(θ)) for monic μ.
            let k = make_field(&[-2, 0, 1]).unwrap();
            let a = small_element(&k, &coords);
            let g = RatPolynomial::from_coeffs(a.coords.clone());
            prop_assume!(!g.is_zero());
            let res = k.min_poly().resultant(&g);
            prop_assert_eq!(k.norm(&a), res);
        }
    }
}
