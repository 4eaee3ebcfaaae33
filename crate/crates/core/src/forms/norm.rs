//! Norm forms: the field norm ℕ_{K/ℚ} written as an exact homogeneous
//! polynomial, its linear-factor split over ℝ/ℂ, and the local norm forms
//! over ℚ_p.

use super::form::{det_of_form_matrix, Form};
use crate::exact::field::{FieldElement, NumberField};
use crate::exact::{linalg, Rational};
use crate::places::embeddings::{real_embeddings, Embeddings};
use crate::places::hensel::{padic_from_residue, LocalFactor};
use crate::places::{PAdic, RealInterval};
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// ℕ_{K/ℚ}(x₁·1 + x₂·t + … + x_n·t^{n−1}) as an exact rational form:
/// the determinant of Σ_j x_j · M_{t^{j−1}}.
pub fn norm_form(field: &NumberField) -> Form<Rational> {
    let basis: Vec<FieldElement> = (0..field.degree())
        .map(|j| {
            let mut coords = vec![Rational::zero(); field.degree()];
            coords[j] = num_traits::One::one();
            field.element(coords)
        })
        .collect();
    norm_form_in_basis(field, &basis)
}

/// Norm form of K in an arbitrary ℚ-basis (β_1, …, β_n):
/// det(Σ_j x_j · M_{β_j}).
pub fn norm_form_in_basis(field: &NumberField, basis: &[FieldElement]) -> Form<Rational> {
    let n = field.degree();
    assert_eq!(basis.len(), n, "basis size must equal the degree");
    let mats: Vec<linalg::Matrix> = basis.iter().map(|b| field.mul_matrix(b)).collect();
    let mut entries: Vec<Vec<Form<Rational>>> = vec![vec![Form::zero(n, 1); n]; n];
    for (r, row) in entries.iter_mut().enumerate() {
        for (c, e) in row.iter_mut().enumerate() {
            let coeffs: Vec<Rational> = mats.iter().map(|m| m[r][c].clone()).collect();
            *e = Form::linear(n, coeffs);
        }
    }
    det_of_form_matrix(&entries)
}

/// The split of the norm form into conjugate linear factors
/// l_i(x) = Σ_j θ_i(t^{j−1}) x_j, one row per embedding block.
#[derive(Debug, Clone)]
pub struct SplitStructure {
    pub field: NumberField,
    pub emb: Embeddings,
    pub prec: u64,
}

impl SplitStructure {
    /// Block dimensions n_i (1 for real embeddings, 2 for conjugate pairs).
    pub fn block_dims(&self) -> Vec<usize> {
        self.emb.rows.iter().map(|r| r.block_dim()).collect()
    }
}

pub fn linear_factors(field: &NumberField, prec: u64) -> Result<SplitStructure> {
    let emb = real_embeddings(field, prec)?;
    Ok(SplitStructure { field: field.clone(), emb, prec })
}

/// ℕ_{K_{p,i}/ℚ_p} as a form in `nvars` variables (the images of the global
/// power basis in the completion): det(Σ_j x_j · M_{t^j mod g}).
pub fn local_norm_form(fac: &LocalFactor, nvars: usize) -> Form<PAdic> {
    let d = fac.local_degree();
    let m = BigInt::from(fac.p).pow(fac.digits);
    // columns of multiplication-by-(t^j mod g) matrices
    // basis images: b_j = t^j mod g as residue vectors of length d
    let mut basis_images: Vec<Vec<BigInt>> = Vec::with_capacity(nvars);
    let mut cur = vec![BigInt::from(1)];
    for _ in 0..nvars {
        basis_images.push({
            let mut v = cur.clone();
            v.resize(d, BigInt::zero());
            v
        });
        // multiply by t, reduce mod g
        let mut shifted = vec![BigInt::zero()];
        shifted.extend(cur.iter().cloned());
        cur = reduce_mod_monic(&shifted, &fac.poly, &m);
    }
    // mul matrix of b_j: columns are b_j · t^c mod g
    let mut mats: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(nvars);
    for img in &basis_images {
        let mut cols = Vec::with_capacity(d);
        let mut acc = img.clone();
        cols.push(acc.clone());
        for _ in 1..d {
            let mut shifted = vec![BigInt::zero()];
            shifted.extend(acc.iter().cloned());
            acc = reduce_mod_monic(&shifted, &fac.poly, &m);
            cols.push(acc.clone());
        }
        mats.push(cols);
    }
    let mut entries: Vec<Vec<Form<PAdic>>> = vec![vec![Form::zero(nvars, 1); d]; d];
    for (r, row) in entries.iter_mut().enumerate() {
        for (c, e) in row.iter_mut().enumerate() {
            let coeffs: Vec<PAdic> = (0..nvars)
                .map(|j| padic_from_residue(fac.p, &mats[j][c][r], fac.digits))
                .collect();
            *e = Form::linear(nvars, coeffs);
        }
    }
    det_of_form_matrix(&entries)
}

fn reduce_mod_monic(poly: &[BigInt], g: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let d = g.len() - 1;
    let mut rem: Vec<BigInt> = poly.iter().map(|c| c.mod_floor(m)).collect();
    while rem.last().is_some_and(|c| c.is_zero()) {
        rem.pop();
    }
    while rem.len() >= d + 1 {
        let k = rem.len() - 1 - d;
        let factor = rem.last().unwrap().clone();
        if !factor.is_zero() {
            for (i, gc) in g.iter().enumerate() {
                rem[k + i] = (&rem[k + i] - &factor * gc).mod_floor(m);
            }
        }
        rem.pop();
        while rem.last().is_some_and(|c| c.is_zero()) {
            rem.pop();
        }
    }
    let mut out = rem;
    out.resize(d, BigInt::zero());
    out
}

/// Interval evaluation of the product of the conjugate linear factors at a
/// rational point (each pair contributes |l_i(z)|²).
pub fn eval_factor_product(st: &SplitStructure, point: &[Rational]) -> RealInterval {
    let prec = st.prec;
    let mut acc = RealInterval::one();
    for row in &st.emb.rows {
        let v = row.eval_linear(point, prec);
        if row.conjugate_pair {
            acc = acc.mul(&v.modulus_sq());
        } else {
            acc = acc.mul(&v.re);
        }
        acc = acc.tighten(prec + 48);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::make_field;
    use crate::exact::rat_int;
    use crate::places::hensel::padic_factor;

    #[test]
    fn sqrt2_norm_form() {
        let k = make_field(&[-2, 0, 1]).unwrap();
        let f = norm_form(&k);
        assert_eq!(f.coeff(&[2, 0]), Some(&rat_int(1)));
        assert_eq!(f.coeff(&[0, 2]), Some(&rat_int(-2)));
        assert_eq!(f.coeff(&[1, 1]), None);
    }

    #[test]
    fn gaussian_norm_form() {
        let k = make_field(&[1, 0, 1]).unwrap();
        let f = norm_form(&k);
        assert_eq!(f.coeff(&[2, 0]), Some(&rat_int(1)));
        assert_eq!(f.coeff(&[0, 2]), Some(&rat_int(1)));
    }

    #[test]
    fn cbrt2_norm_form_matches_symbolic_oracle() {
        // oracle: expand det(x₁I + x₂M_t + x₃M_{t²}) by hand:
        // x₁³ + 2x₂³ + 4x₃³ − 6x₁x₂x₃
        let k = make_field(&[-2, 0, 0, 1]).unwrap();
        let f = norm_form(&k);
        assert_eq!(f.coeff(&[3, 0, 0]), Some(&rat_int(1)));
        assert_eq!(f.coeff(&[0, 3, 0]), Some(&rat_int(2)));
        assert_eq!(f.coeff(&[0, 0, 3]), Some(&rat_int(4)));
        assert_eq!(f.coeff(&[1, 1, 1]), Some(&rat_int(-6)));
        assert_eq!(f.num_terms(), 4);
    }

    #[test]
    fn norm_form_agrees_with_element_norm() {
        let k = make_field(&[-1, -1, 0, 0, 1]).unwrap();
        let f = norm_form(&k);
        for coords in [[1i64, 2, 0, -1], [3, 0, 0, 1], [0, 1, 1, 1]] {
            let pt: Vec<Rational> = coords.iter().map(|&c| rat_int(c)).collect();
            let a = FieldElement::from_ints(&coords);
            assert_eq!(f.evaluate_exact(&pt), k.norm(&a));
        }
    }

    #[test]
    fn value_at_first_unit_vector_is_one() {
        for coeffs in [&[-2i64, 0, 1][..], &[1, 0, 1], &[-2, 0, 0, 1]] {
            let k = make_field(coeffs).unwrap();
            let f = norm_form(&k);
            let mut e1 = vec![rat_int(0); k.degree()];
            e1[0] = rat_int(1);
            assert_eq!(f.evaluate_exact(&e1), rat_int(1));
        }
    }

    #[test]
    fn factor_product_encloses_norm_values() {
        for coeffs in [&[-2i64, 0, 1][..], &[-2, 0, 0, 1]] {
            let k = make_field(coeffs).unwrap();
            let f = norm_form(&k);
            let st = linear_factors(&k, 96).unwrap();
            let pts: Vec<Vec<i64>> = match k.degree() {
                2 => vec![vec![3, 1], vec![-2, 5], vec![1, 0]],
                _ => vec![vec![1, 1, 1], vec![2, 0, -1], vec![5, -3, 2]],
            };
            for pt in pts {
                let ptr: Vec<Rational> = pt.iter().map(|&c| rat_int(c)).collect();
                let exact = f.evaluate_exact(&ptr);
                let enc = eval_factor_product(&st, &ptr);
                assert!(enc.contains_rational(&exact), "{coeffs:?} at {pt:?}");
            }
        }
    }

    #[test]
    fn local_norm_forms_multiply_to_global() {
        // ∏_i ℕ_{K_{p,i}}(x) ≡ ℕ_{K/ℚ}(x) mod p^{N−2} coefficientwise
        let k = make_field(&[-2, 0, 1]).unwrap();
        let digits = 16;
        for p in [5u64, 7] {
            let factors = padic_factor(&k, p, digits).unwrap();
            let mut prod: Option<Form<PAdic>> = None;
            for fac in &factors {
                let nf = local_norm_form(fac, 2);
                prod = Some(match prod {
                    None => nf,
                    Some(acc) => acc.mul(&nf),
                });
            }
            let prod = prod.unwrap();
            let global = norm_form(&k);
            for (e, c) in global.terms() {
                let local = prod.coeff(e).expect("term present");
                let expect = PAdic::from_rational(p, c, digits);
                assert!(local.agrees_with(&expect, digits - 2).unwrap(), "p={p} e={e:?}");
            }
        }
    }

    #[test]
    fn split_structure_block_dims() {
        let k = make_field(&[-2, 0, 0, 1]).unwrap();
        let st = linear_factors(&k, 64).unwrap();
        assert_eq!(st.block_dims(), vec![1, 2]);
    }
}
