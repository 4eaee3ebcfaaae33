//! Homogeneous multivariate forms with exchangeable coefficient rings.

use crate::exact::{rat_to_string, Rational};
use crate::places::{PAdic, RealInterval};
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Interval coefficients get rational constants embedded at this precision.
pub const RAT_EMBED_PREC: u64 = 256;

/// Coefficient ring operations a form needs.
pub trait Coeff: Clone + std::fmt::Debug {
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Provably zero (exact zero), used only to prune stored terms.
    fn is_provably_zero(&self) -> bool;
    /// Multiply by an exact rational constant.
    fn mul_rat(&self, q: &Rational) -> Self;
}

impl Coeff for Rational {
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn is_provably_zero(&self) -> bool {
        self.is_zero()
    }
    fn mul_rat(&self, q: &Rational) -> Self {
        self * q
    }
}

impl Coeff for RealInterval {
    fn add(&self, rhs: &Self) -> Self {
        RealInterval::add(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        RealInterval::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        RealInterval::neg(self)
    }
    fn is_provably_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn mul_rat(&self, q: &Rational) -> Self {
        self.mul(&RealInterval::from_rational(q, RAT_EMBED_PREC))
    }
}

impl Coeff for PAdic {
    fn add(&self, rhs: &Self) -> Self {
        PAdic::add(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        PAdic::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        PAdic::neg(self)
    }
    fn is_provably_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn mul_rat(&self, q: &Rational) -> Self {
        let digits = match &self.kind {
            crate::places::padic::PAdicKind::Unit { prec, .. } => *prec,
            _ => crate::places::padic::DEFAULT_DIGITS,
        };
        self.mul(&PAdic::from_rational(self.p, q, digits))
    }
}

/// Homogeneous polynomial of fixed degree in `nvars` variables; keys are
/// exponent vectors of length nvars summing to the degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Form<C> {
    nvars: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<u32>, C>,
}

impl<C: Coeff> Form<C> {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        Form { nvars, degree, coeffs: BTreeMap::new() }
    }

    pub fn monomial(nvars: usize, exps: &[u32], c: C) -> Self {
        assert_eq!(exps.len(), nvars);
        let degree = exps.iter().sum::<u32>() as usize;
        let mut coeffs = BTreeMap::new();
        if !c.is_provably_zero() {
            coeffs.insert(exps.to_vec(), c);
        }
        Form { nvars, degree, coeffs }
    }

    /// Linear form Σ coeff_j x_j.
    pub fn linear(nvars: usize, coeffs: Vec<C>) -> Self {
        assert_eq!(coeffs.len(), nvars);
        let mut f = Form::zero(nvars, 1);
        for (j, c) in coeffs.into_iter().enumerate() {
            if c.is_provably_zero() {
                continue;
            }
            let mut e = vec![0u32; nvars];
            e[j] = 1;
            f.coeffs.insert(e, c);
        }
        f
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&C> {
        self.coeffs.get(exps)
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn insert_term(&mut self, exps: Vec<u32>, c: C) {
        assert_eq!(exps.len(), self.nvars);
        assert_eq!(exps.iter().sum::<u32>() as usize, self.degree);
        self.accumulate(exps, c);
    }

    fn accumulate(&mut self, exps: Vec<u32>, c: C) {
        match self.coeffs.remove(&exps) {
            None => {
                if !c.is_provably_zero() {
                    self.coeffs.insert(exps, c);
                }
            }
            Some(old) => {
                let sum = old.add(&c);
                if !sum.is_provably_zero() {
                    self.coeffs.insert(exps, sum);
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        assert_eq!(self.degree, rhs.degree);
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.accumulate(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Form::zero(self.nvars, self.degree + rhs.degree);
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.accumulate(e, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn scale_rat(&self, q: &Rational) -> Self {
        self.map(|x| x.mul_rat(q))
    }

    pub fn map<F: Fn(&C) -> C>(&self, f: F) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(e, c)| (e.clone(), f(c)))
            .filter(|(_, c)| !c.is_provably_zero())
            .collect();
        Form { nvars: self.nvars, degree: self.degree, coeffs }
    }

    /// Convert coefficients into another ring.
    pub fn convert<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> Form<D> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(e, c)| (e.clone(), f(c)))
            .filter(|(_, c): &(Vec<u32>, D)| !c.is_provably_zero())
            .collect();
        Form { nvars: self.nvars, degree: self.degree, coeffs }
    }

    /// Re-index variables into a larger variable set: variable j becomes
    /// variable `var_map[j]`.
    pub fn embed_vars(&self, nvars: usize, var_map: &[usize]) -> Self {
        assert_eq!(var_map.len(), self.nvars);
        let mut out = Form::zero(nvars, self.degree);
        for (e, c) in &self.coeffs {
            let mut ne = vec![0u32; nvars];
            for (j, &cnt) in e.iter().enumerate() {
                ne[var_map[j]] += cnt;
            }
            out.accumulate(ne, c.clone());
        }
        out
    }

    /// Evaluate at a point whose entries are exact rationals: each monomial
    /// value is computed exactly in ℚ and then folded into the coefficient
    /// ring by one `mul_rat`. None for the structurally zero form.
    pub fn evaluate_rat(&self, point: &[Rational]) -> Option<C> {
        assert_eq!(point.len(), self.nvars);
        let mut acc: Option<C> = None;
        for (e, c) in &self.coeffs {
            let mut m = Rational::one();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    m *= x;
                }
            }
            let term = c.mul_rat(&m);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        acc
    }
}

impl Form<Rational> {
    pub fn evaluate_exact(&self, point: &[Rational]) -> Rational {
        self.evaluate_rat(point).unwrap_or_else(Rational::zero)
    }

    /// Exact rendering "c1·x^e1 + …" in the BTreeMap key order.
    pub fn to_display_string(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = vec![];
        for (e, c) in &self.coeffs {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        format!("x{}", j + 1)
                    } else {
                        format!("x{}^{}", j + 1, k)
                    }
                })
                .collect();
            let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
            parts.push(format!("{}*{}", rat_to_string(c), mono));
        }
        parts.join(" + ")
    }

    /// Integer fast path when all coefficients fit i64.
    pub fn compile_int(&self) -> Option<IntForm> {
        let mut terms = vec![];
        for (e, c) in &self.coeffs {
            if !c.denom().is_one() {
                return None;
            }
            let v = c.numer().to_i64()?;
            terms.push((e.iter().map(|&k| k as u8).collect(), v as i128));
        }
        Some(IntForm { nvars: self.nvars, terms })
    }
}

/// Compiled integer form for scan-speed evaluation with overflow checking.
#[derive(Debug, Clone)]
pub struct IntForm {
    pub nvars: usize,
    pub terms: Vec<(Vec<u8>, i128)>,
}

impl IntForm {
    /// Checked evaluation; None on (unlikely, desk-scale) overflow.
    pub fn eval_checked(&self, point: &[i64]) -> Option<i128> {
        let mut acc: i128 = 0;
        for (e, c) in &self.terms {
            let mut m: i128 = *c;
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    m = m.checked_mul(*x as i128)?;
                }
            }
            acc = acc.checked_add(m)?;
        }
        Some(acc)
    }
}

/// Determinant of a matrix of forms (entries homogeneous of equal degree),
/// by Laplace expansion memoized on column subsets.
pub fn det_of_form_matrix<C: Coeff>(mat: &[Vec<Form<C>>]) -> Form<C> {
    let n = mat.len();
    assert!(n > 0);
    let nvars = mat[0][0].nvars();
    let entry_deg = mat[0][0].degree();
    let mut memo: std::collections::HashMap<u32, Form<C>> = std::collections::HashMap::new();
    // base: empty column set at row n (deg 0 forms are not representable here,
    // so treat size-1 subsets as the base case instead)
    fn rec<C: Coeff>(
        mat: &[Vec<Form<C>>],
        row: usize,
        colmask: u32,
        nvars: usize,
        entry_deg: usize,
        memo: &mut std::collections::HashMap<u32, Form<C>>,
    ) -> Form<C> {
        let n = mat.len();
        let size = colmask.count_ones() as usize;
        debug_assert_eq!(n - row, size);
        if size == 1 {
            let col = colmask.trailing_zeros() as usize;
            return mat[row][col].clone();
        }
        if let Some(f) = memo.get(&colmask) {
            return f.clone();
        }
        let mut acc = Form::zero(nvars, entry_deg * size);
        let mut sign_pos = true;
        for col in 0..n {
            if colmask & (1 << col) == 0 {
                continue;
            }
            let minor = rec(mat, row + 1, colmask & !(1 << col), nvars, entry_deg, memo);
            let term = mat[row][col].mul(&minor);
            acc = if sign_pos { acc.add(&term) } else { acc.sub(&term) };
            sign_pos = !sign_pos;
        }
        memo.insert(colmask, acc.clone());
        acc
    }
    rec(mat, 0, (1u32 << n) - 1, nvars, entry_deg, &mut memo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;

    fn rform(terms: &[(&[u32], i64)]) -> Form<Rational> {
        let nvars = terms[0].0.len();
        let degree = terms[0].0.iter().sum::<u32>() as usize;
        let mut f = Form::zero(nvars, degree);
        for (e, c) in terms {
            f.insert_term(e.to_vec(), rat_int(*c));
        }
        f
    }

    #[test]
    fn multiplication_expands_products() {
        // (x - y)(x + y) = x² - y²
        let a = rform(&[(&[1, 0], 1), (&[0, 1], -1)]);
        let b = rform(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let p = a.mul(&b);
        assert_eq!(p, rform(&[(&[2, 0], 1), (&[0, 2], -1)]));
    }

    #[test]
    fn evaluation_matches_hand_computation() {
        let f = rform(&[(&[3, 0, 0], 1), (&[0, 3, 0], 2), (&[0, 0, 3], 4), (&[1, 1, 1], -6)]);
        let at = |a: i64, b: i64, c: i64| {
            f.evaluate_exact(&[rat_int(a), rat_int(b), rat_int(c)])
        };
        assert_eq!(at(1, 1, 1), rat_int(1));
        assert_eq!(at(1, 0, 0), rat_int(1));
        assert_eq!(at(2, -1, 0), rat_int(6));
    }

    #[test]
    fn int_compilation_agrees() {
        let f = rform(&[(&[2, 0], 1), (&[0, 2], -2)]);
        let c = f.compile_int().unwrap();
        for (x, y) in [(3i64, 1i64), (-5, 2), (0, 0), (10000, -9999)] {
            assert_eq!(
                c.eval_checked(&[x, y]).unwrap(),
                f.evaluate_exact(&[rat_int(x), rat_int(y)])
                    .numer()
                    .to_i128()
                    .unwrap()
            );
        }
    }

    #[test]
    fn det_of_linear_matrix() {
        // det [[x, 2y], [y, x]] = x² - 2y²
        let x = Form::linear(2, vec![rat_int(1), rat_int(0)]);
        let y = Form::linear(2, vec![rat_int(0), rat_int(1)]);
        let two_y = y.scale_rat(&rat_int(2));
        let det = det_of_form_matrix(&[vec![x.clone(), two_y], vec![y, x]]);
        assert_eq!(det, rform(&[(&[2, 0], 1), (&[0, 2], -2)]));
    }

    #[test]
    fn var_embedding_shifts_exponents() {
        let f = rform(&[(&[2], 3)]); // 3x²
        let g = f.embed_vars(3, &[2]);
        assert_eq!(g, rform(&[(&[0, 0, 2], 3)]));
    }
}
