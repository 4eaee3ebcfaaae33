//! Quasi-norm forms: per place, a product over the local factors of an
//! anisotropic binary quadratic evaluated at the pair of local norms
//!
//!   f_v(x) = ∏_i q_{v,i}( ℕ_{K_{v,i}/ℚ_v}(x⃗₁), ℕ_{K_{v,i}/ℚ_v}(x⃗₂) ),
//!
//! for K totally real of degree s and x split as x⃗₁ = (x₁..x_s),
//! x⃗₂ = (x_{s+1}..x_{2s}).

use super::binary::{anisotropic_binary, is_anisotropic, BinaryQuadratic};
use super::form::{Coeff, Form};
use super::norm::local_norm_form;
use super::{Component, FormKind, SForm, SFormMeta};
use crate::exact::field::NumberField;
use crate::places::embeddings::real_embeddings;
use crate::places::hensel::padic_factor;
use crate::places::{PAdic, Place, RealInterval};
use crate::{Error, Result};

/// Per-place, per-factor overrides of the default anisotropic quadratics.
pub type QChoices = std::collections::BTreeMap<(Place, usize), BinaryQuadratic>;

/// Build the quasi-norm S-form of a totally real field over the places of S.
pub fn quasi_norm_form(
    field: &NumberField,
    places: &[Place],
    overrides: &QChoices,
    prec: u64,
    digits: u32,
) -> Result<SForm> {
    if places.is_empty() {
        return Err(Error::Invalid("S must be nonempty".into()));
    }
    if !places.contains(&Place::Archimedean) {
        return Err(Error::Invalid("S must contain the archimedean place".into()));
    }
    let s = field.degree();
    let n = 2 * s;
    let emb = real_embeddings(field, prec)?;
    if !emb.is_totally_real() {
        return Err(Error::NotTotallyReal);
    }

    let pick_q = |place: Place, i: usize| -> Result<BinaryQuadratic> {
        let q = overrides
            .get(&(place, i))
            .cloned()
            .unwrap_or_else(|| anisotropic_binary(place));
        if !is_anisotropic(&q, place)? {
            return Err(Error::AnisotropyFailure { place: place.to_string() });
        }
        Ok(q)
    };

    let mut components = Vec::with_capacity(places.len());
    for &place in places {
        match place {
            Place::Archimedean => {
                // r_∞ = s factors, each of local degree 1 with norm = l_i
                let mut acc: Option<Form<RealInterval>> = None;
                for (i, row) in emb.rows.iter().enumerate() {
                    let coeffs: Vec<RealInterval> =
                        row.powers.iter().map(|z| z.re.clone()).collect();
                    let l1 = embed_linear(&coeffs, n, 0);
                    let l2 = embed_linear(&coeffs, n, s);
                    let q = pick_q(place, i)?;
                    let factor = compose_binary(&q, &l1, &l2);
                    acc = Some(match acc {
                        None => factor,
                        Some(a) => a.mul(&factor).map(|c| c.tighten(prec + 64)),
                    });
                }
                components.push(Component::Real(acc.expect("s ≥ 1")));
            }
            Place::Prime(p) => {
                let factors = padic_factor(field, p, digits)?;
                let mut acc: Option<Form<PAdic>> = None;
                for (i, fac) in factors.iter().enumerate() {
                    let nf = local_norm_form(fac, s);
                    let n1 = nf.embed_vars(n, &(0..s).collect::<Vec<_>>());
                    let n2 = nf.embed_vars(n, &(s..n).collect::<Vec<_>>());
                    let q = pick_q(place, i)?;
                    let factor = compose_binary(&q, &n1, &n2);
                    acc = Some(match acc {
                        None => factor,
                        Some(a) => a.mul(&factor),
                    });
                }
                components.push(Component::Padic(acc.expect("r_p ≥ 1")));
            }
        }
    }

    SForm::new(
        places.to_vec(),
        components,
        SFormMeta {
            kind: FormKind::Quasi,
            field_coeffs: Some(field.coeff_list()),
            padic_digits: digits,
            precision_bits: prec,
        },
    )
}

/// q(u, w) = a·u² + b·u·w + c·w² on form arguments.
fn compose_binary<C: Coeff>(q: &BinaryQuadratic, u: &Form<C>, w: &Form<C>) -> Form<C> {
    let uu = u.mul(u).scale_rat(&q.a);
    let uw = u.mul(w).scale_rat(&q.b);
    let ww = w.mul(w).scale_rat(&q.c);
    uu.add(&uw).add(&ww)
}

/// Linear form with the given coefficients on an s-variable window starting
/// at `offset` inside an n-variable form.
fn embed_linear(coeffs: &[RealInterval], nvars: usize, offset: usize) -> Form<RealInterval> {
    let s = coeffs.len();
    let small = Form::linear(s, coeffs.to_vec());
    let map: Vec<usize> = (0..s).map(|j| j + offset).collect();
    small.embed_vars(nvars, &map)
}
