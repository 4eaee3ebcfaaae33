//! Univariate polynomials over ℚ with exact coefficients.

use super::{rat_int, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Polynomial in one indeterminate, coefficients ascending by degree.
///
/// The zero polynomial is the empty coefficient list; otherwise the leading
/// coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPolynomial {
    coeffs: Vec<Rational>,
}

impl RatPolynomial {
    pub fn zero() -> Self {
        RatPolynomial { coeffs: vec![] }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPolynomial { coeffs }
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn from_bigint_coeffs(coeffs: &[BigInt]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial t.
    pub fn x() -> Self {
        Self::from_coeffs(vec![rat_int(0), rat_int(1)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of t^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat_int(i as i64))
            .collect();
        Self::from_coeffs(out)
    }

    /// Euclidean division; panics on division by zero.
    pub fn divmod(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let d = rhs.degree().unwrap();
        let lead = rhs.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Rational::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() >= d + 1 {
            let k = rem.len() - 1 - d;
            let factor = rem.last().unwrap() / &lead;
            if !factor.is_zero() {
                for (i, b) in rhs.coeffs.iter().enumerate() {
                    let idx = k + i;
                    let v = &rem[idx] - &factor * b;
                    rem[idx] = v;
                }
                quo[k] = factor;
            }
            rem.pop();
        }
        (Self::from_coeffs(quo), Self::from_coeffs(rem))
    }

    pub fn rem(&self, rhs: &Self) -> Self {
        self.divmod(rhs).1
    }

    /// Exact quotient; panics if the division has a remainder.
    pub fn div_exact(&self, rhs: &Self) -> Self {
        let (q, r) = self.divmod(rhs);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd via the Euclidean algorithm; gcd(0, 0) = 0.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        match a.leading() {
            Some(l) if !l.is_one() => {
                let inv = Rational::one() / l.clone();
                a.scale(&inv)
            }
            _ => a,
        }
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.degree() == Some(0) {
            return true;
        }
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Resultant of self and rhs, computed from the Sylvester matrix with
    /// exact rational elimination. Res(f, g) = 0 iff f, g share a root.
    pub fn resultant(&self, rhs: &Self) -> Rational {
        let (m, n) = match (self.degree(), rhs.degree()) {
            (Some(m), Some(n)) => (m, n),
            // Convention: Res(f, 0) = 0 unless both are constants.
            _ => return Rational::zero(),
        };
        if m == 0 && n == 0 {
            return Rational::one();
        }
        if m == 0 {
            return self.coeff(0).pow(n as i32);
        }
        if n == 0 {
            return rhs.coeff(0).pow(m as i32);
        }
        let size = m + n;
        let mut mat = vec![vec![Rational::zero(); size]; size];
        for row in 0..n {
            for (i, _) in self.coeffs.iter().enumerate() {
                mat[row][row + m - i] = self.coeff(i);
            }
        }
        for row in 0..m {
            for (i, _) in rhs.coeffs.iter().enumerate() {
                mat[n + row][row + n - i] = rhs.coeff(i);
            }
        }
        super::linalg::det(&mat)
    }

    /// Discriminant (−1)^{n(n−1)/2}·Res(f, f′)/lc(f).
    pub fn discriminant(&self) -> Rational {
        let n = self.degree().expect("discriminant of zero polynomial");
        if n == 0 {
            return Rational::one();
        }
        let res = self.resultant(&self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
        rat_int(sign) * res / self.leading().unwrap().clone()
    }

    /// Smallest B > 0 with all real roots in (−B, B): Cauchy bound 1 + max |a_i/a_n|.
    pub fn root_bound(&self) -> Rational {
        let lead = self.leading().expect("root bound of zero polynomial");
        let mut max = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let v = (c / lead).abs();
            if v > max {
                max = v;
            }
        }
        max + Rational::one()
    }
}

impl std::fmt::Display for RatPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{}", super::rat_to_string(&a))?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", super::rat_to_string(&a))?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> RatPolynomial {
        RatPolynomial::from_int_coeffs(coeffs)
    }

    #[test]
    fn divmod_round_trips() {
        let f = p(&[2, 0, -3, 1, 4]);
        let g = p(&[1, 2, 1]);
        let (q, r) = f.divmod(&g);
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.degree().unwrap() < g.degree().unwrap());
    }

    #[test]
    fn gcd_of_common_factor() {
        let common = p(&[-1, 1]); // t - 1
        let f = common.mul(&p(&[3, 1]));
        let g = common.mul(&p(&[5, 0, 1]));
        assert_eq!(f.gcd(&g), common);
    }

    #[test]
    fn squarefree_detection() {
        assert!(p(&[-2, 0, 1]).is_squarefree());
        assert!(!p(&[1, 2, 1]).is_squarefree()); // (t+1)^2
    }

    #[test]
    fn discriminants_match_closed_forms() {
        // disc(t^2 + c) = -4c
        assert_eq!(p(&[-2, 0, 1]).discriminant(), rat_int(8));
        assert_eq!(p(&[1, 0, 1]).discriminant(), rat_int(-4));
        // disc(t^3 + pt + q) = -4p^3 - 27q^2
        assert_eq!(p(&[-2, 0, 0, 1]).discriminant(), rat_int(-108));
        assert_eq!(p(&[-1, -1, 0, 0, 1]).discriminant(), rat_int(-283));
    }

    #[test]
    fn resultant_detects_shared_roots() {
        let f = p(&[-1, 0, 1]); // (t-1)(t+1)
        let g = p(&[-1, 1]); // t - 1
        assert!(f.resultant(&g).is_zero());
        let h = p(&[-3, 1]);
        assert!(!f.resultant(&h).is_zero());
    }
}
