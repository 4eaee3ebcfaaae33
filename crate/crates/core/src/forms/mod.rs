//! S-forms: norm forms, quasi-norm forms, anisotropic binary quadratics, the
//! GL_n(ℚ) action, and evaluation at rational points.

pub mod action;
pub mod binary;
pub mod form;
pub mod norm;
pub mod quasi;
pub mod serial;

pub use action::{apply_gl_form, apply_gl_sform};
pub use binary::{anisotropic_binary, is_anisotropic, BinaryQuadratic};
pub use form::{det_of_form_matrix, Coeff, Form, IntForm};
pub use norm::{linear_factors, local_norm_form, norm_form, norm_form_in_basis, SplitStructure};
pub use quasi::{quasi_norm_form, QChoices};

use crate::exact::Rational;
use crate::places::{PAdic, Place, RealInterval};
use crate::{Error, Result};
use num_bigint::BigInt;

/// One per-place component of an S-form.
#[derive(Debug, Clone)]
pub enum Component {
    /// Exact rational coefficients (diagonally embedded at its place).
    Rational(Form<Rational>),
    /// Certified interval coefficients (archimedean place).
    Real(Form<RealInterval>),
    /// p-adic coefficients at working precision.
    Padic(Form<PAdic>),
}

impl Component {
    pub fn nvars(&self) -> usize {
        match self {
            Component::Rational(f) => f.nvars(),
            Component::Real(f) => f.nvars(),
            Component::Padic(f) => f.nvars(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Component::Rational(f) => f.degree(),
            Component::Real(f) => f.degree(),
            Component::Padic(f) => f.degree(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Norm,
    Quasi,
    Custom,
}

impl FormKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FormKind::Norm => "norm",
            FormKind::Quasi => "quasi",
            FormKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "norm" => Ok(FormKind::Norm),
            "quasi" => Ok(FormKind::Quasi),
            "custom" => Ok(FormKind::Custom),
            _ => Err(Error::Invalid(format!("unknown form kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SFormMeta {
    pub kind: FormKind,
    /// ascending integer coefficients of the defining field, when one exists
    pub field_coeffs: Option<Vec<BigInt>>,
    pub padic_digits: u32,
    pub precision_bits: u64,
}

/// An S-form: one component per place of S, all sharing nvars and degree.
#[derive(Debug, Clone)]
pub struct SForm {
    pub places: Vec<Place>,
    pub components: Vec<Component>,
    pub nvars: usize,
    pub degree: usize,
    pub meta: SFormMeta,
}

/// A per-place value of an S-form at a point.
#[derive(Debug, Clone)]
pub enum PlaceValue {
    Rational(Rational),
    Real(RealInterval),
    Padic(PAdic),
}

impl SForm {
    pub fn new(places: Vec<Place>, components: Vec<Component>, meta: SFormMeta) -> Result<Self> {
        if places.is_empty() || places.len() != components.len() {
            return Err(Error::Invalid("places/components mismatch".into()));
        }
        let mut sorted = places.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != places.len() {
            return Err(Error::Invalid("duplicate places".into()));
        }
        let nvars = components[0].nvars();
        let degree = components[0].degree();
        for c in &components {
            if c.nvars() != nvars || c.degree() != degree {
                return Err(Error::Invalid("components disagree on nvars/degree".into()));
            }
        }
        Ok(SForm { places, components, nvars, degree, meta })
    }

    /// Diagonal S-form from one exact rational form: the same polynomial read
    /// at every place of S.
    pub fn from_rational_form(
        f: Form<Rational>,
        places: Vec<Place>,
        meta: SFormMeta,
    ) -> Result<Self> {
        let components = places.iter().map(|_| Component::Rational(f.clone())).collect();
        SForm::new(places, components, meta)
    }

    /// Evaluate at a global rational point; exact components produce exact
    /// rational values.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Vec<PlaceValue>> {
        if point.len() != self.nvars {
            return Err(Error::Invalid(format!(
                "point has {} coordinates, form needs {}",
                point.len(),
                self.nvars
            )));
        }
        let mut out = Vec::with_capacity(self.components.len());
        for (comp, place) in self.components.iter().zip(&self.places) {
            out.push(match comp {
                Component::Rational(f) => PlaceValue::Rational(f.evaluate_exact(point)),
                Component::Real(f) => {
                    PlaceValue::Real(f.evaluate_rat(point).unwrap_or_else(RealInterval::zero))
                }
                Component::Padic(f) => {
                    let p = match place {
                        Place::Prime(p) => *p,
                        Place::Archimedean => {
                            return Err(Error::Invalid(
                                "p-adic component at the archimedean place".into(),
                            ))
                        }
                    };
                    PlaceValue::Padic(
                        f.evaluate_rat(point).unwrap_or_else(|| PAdic::exact_zero(p)),
                    )
                }
            });
        }
        Ok(out)
    }

    /// The exact rational form when the components are exact (diagonal).
    pub fn as_rational(&self) -> Option<&Form<Rational>> {
        match &self.components[0] {
            Component::Rational(f) => Some(f),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::make_field;
    use crate::exact::rat_int;

    #[test]
    fn sform_evaluation_per_place() {
        let k = make_field(&[-2, 0, 1]).unwrap();
        let f = norm_form(&k);
        let meta = SFormMeta {
            kind: FormKind::Norm,
            field_coeffs: Some(k.coeff_list()),
            padic_digits: 16,
            precision_bits: 64,
        };
        let sf =
            SForm::from_rational_form(f, vec![Place::Archimedean, Place::Prime(7)], meta).unwrap();
        let vals = sf.evaluate(&[rat_int(3), rat_int(1)]).unwrap();
        assert_eq!(vals.len(), 2);
        for v in vals {
            match v {
                PlaceValue::Rational(q) => assert_eq!(q, rat_int(7)),
                _ => panic!("expected exact values"),
            }
        }
        assert!(sf.evaluate(&[rat_int(1)]).is_err());
    }
}
