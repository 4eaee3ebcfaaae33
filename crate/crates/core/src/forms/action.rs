//! The GL_n(ℚ) action on forms: (g·f)(x) = f(g⁻¹x), a left action that
//! preserves value sets on ℤ^n for unimodular integer g.

use super::form::{Coeff, Form};
use super::{Component, SForm};
use crate::exact::{linalg, Rational};
use crate::{Error, Result};
use num_traits::Zero;

/// Apply g to one form; errors on singular g.
pub fn apply_gl_form<C: Coeff>(g: &linalg::Matrix, f: &Form<C>) -> Result<Form<C>> {
    let n = f.nvars();
    if g.len() != n || g.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("matrix size must match nvars".into()));
    }
    let h = linalg::inverse(g).ok_or(Error::SingularMatrix)?;
    substitute(f, &h)
}

/// Substitute x_i ← Σ_j m[i][j] x_j.
fn substitute<C: Coeff>(f: &Form<C>, m: &linalg::Matrix) -> Result<Form<C>> {
    let n = f.nvars();
    let lin: Vec<Form<Rational>> = (0..n).map(|i| Form::linear(n, m[i].clone())).collect();
    let mut out = Form::<C>::zero(n, f.degree());
    for (e, c) in f.terms() {
        // start from the degree-0 multiplicative identity
        let mut expansion = Form::<Rational>::zero(n, 0);
        expansion.insert_term(vec![0; n], num_traits::One::one());
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                expansion = expansion.mul(&lin[i]);
            }
        }
        let converted: Form<C> = expansion.convert(|r| c.mul_rat(r));
        out = out.add(&converted);
    }
    Ok(out)
}

/// Apply g componentwise to an S-form.
pub fn apply_gl_sform(g: &linalg::Matrix, f: &SForm) -> Result<SForm> {
    let mut components = Vec::with_capacity(f.components.len());
    for comp in &f.components {
        components.push(match comp {
            Component::Rational(x) => Component::Rational(apply_gl_form(g, x)?),
            Component::Real(x) => Component::Real(apply_gl_form(g, x)?),
            Component::Padic(x) => Component::Padic(apply_gl_form(g, x)?),
        });
    }
    SForm::new(f.places.clone(), components, f.meta.clone())
}
