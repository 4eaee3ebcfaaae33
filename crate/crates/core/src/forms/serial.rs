//! JSON wire format for forms and S-forms.
//!
//! Coefficients: rationals as "num/den" strings, intervals as exact decimal
//! {mid, rad} strings, p-adics as {p, valuation, digits[], N}. Exponent keys
//! are comma-joined tuples. Key order is deterministic (BTreeMap order).

use super::form::{Coeff, Form};
use super::{Component, FormKind, SForm, SFormMeta};
use crate::exact::{rat_from_str, rat_to_string, Rational};
use crate::places::padic::{PAdic, PAdicKind};
use crate::places::{Dyadic, Place, RealInterval};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

/// Display precision for interval endpoints in files (bits).
const FILE_INTERVAL_BITS: u64 = 192;

fn exps_key(e: &[u32]) -> String {
    e.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}

fn exps_from_key(s: &str, nvars: usize) -> Result<Vec<u32>> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != nvars {
        return Err(Error::Invalid(format!("exponent key {s:?} has wrong arity")));
    }
    parts
        .iter()
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Invalid(format!("bad exponent {t:?}")))
        })
        .collect()
}

fn interval_to_json(iv: &RealInterval) -> Value {
    let t = iv.tighten(FILE_INTERVAL_BITS);
    json!({
        "mid": t.mid.to_decimal_string(),
        "rad": t.rad.to_decimal_string(),
    })
}

fn interval_from_json(v: &Value) -> Result<RealInterval> {
    let mid = v
        .get("mid")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Invalid("interval missing mid".into()))?;
    let rad = v
        .get("rad")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Invalid("interval missing rad".into()))?;
    let midq = Dyadic::rational_from_decimal(mid)
        .ok_or_else(|| Error::Invalid(format!("bad decimal {mid:?}")))?;
    let radq = Dyadic::rational_from_decimal(rad)
        .ok_or_else(|| Error::Invalid(format!("bad decimal {rad:?}")))?;
    // outward enclosure of [mid − rad, mid + rad]
    Ok(RealInterval::from_rational_bounds(
        &(&midq - &radq),
        &(&midq + &radq),
        FILE_INTERVAL_BITS + 16,
    ))
}

fn padic_to_json(x: &PAdic) -> Value {
    match &x.kind {
        PAdicKind::ExactZero => json!({"p": x.p, "zero": true}),
        PAdicKind::ApproxZero { min_val } => json!({"p": x.p, "min_val": min_val}),
        PAdicKind::Unit { val, prec, .. } => json!({
            "p": x.p,
            "valuation": val,
            "digits": x.digits(),
            "N": prec,
        }),
    }
}

fn padic_from_json(v: &Value) -> Result<PAdic> {
    let p = v
        .get("p")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Invalid("p-adic missing p".into()))?;
    if v.get("zero").and_then(Value::as_bool) == Some(true) {
        return Ok(PAdic::exact_zero(p));
    }
    if let Some(mv) = v.get("min_val").and_then(Value::as_i64) {
        return Ok(PAdic { p, kind: PAdicKind::ApproxZero { min_val: mv } });
    }
    let val = v
        .get("valuation")
        .and_then(Value::as_i64)
        .ok_or_else(|| Error::Invalid("p-adic missing valuation".into()))?;
    let prec = v
        .get("N")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Invalid("p-adic missing N".into()))? as u32;
    let digits = v
        .get("digits")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Invalid("p-adic missing digits".into()))?;
    let mut unit = BigInt::zero();
    let bp = BigInt::from(p);
    for d in digits.iter().rev() {
        let d = d
            .as_u64()
            .ok_or_else(|| Error::Invalid("bad digit".into()))?;
        if d >= p {
            return Err(Error::Invalid(format!("digit {d} out of range for p={p}")));
        }
        unit = unit * &bp + BigInt::from(d);
    }
    if unit.is_zero() {
        return Err(Error::Invalid("unit part must be nonzero".into()));
    }
    Ok(PAdic { p, kind: PAdicKind::Unit { val, unit, prec } })
}

fn coeffs_to_json<C: Coeff, F: Fn(&C) -> Value>(f: &Form<C>, enc: F) -> Value {
    let mut map = Map::new();
    for (e, c) in f.terms() {
        map.insert(exps_key(e), enc(c));
    }
    Value::Object(map)
}

fn component_to_json(comp: &Component, place: Place) -> Value {
    let (scalars, coeffs) = match comp {
        Component::Rational(f) => (
            "rational",
            coeffs_to_json(f, |c| Value::String(rat_to_string(c))),
        ),
        Component::Real(f) => ("interval", coeffs_to_json(f, interval_to_json)),
        Component::Padic(f) => ("padic", coeffs_to_json(f, padic_to_json)),
    };
    json!({
        "place": place.to_string(),
        "scalars": scalars,
        "coeffs": coeffs,
    })
}

/// Serialize an S-form; `extra` entries (config hash, caps) are merged into
/// the top-level object.
pub fn sform_to_json(f: &SForm, extra: &Map<String, Value>) -> Value {
    let mut obj = Map::new();
    obj.insert("schema".into(), json!("normlab-form-v1"));
    obj.insert("kind".into(), json!(f.meta.kind.as_str()));
    obj.insert(
        "field".into(),
        match &f.meta.field_coeffs {
            Some(cs) => Value::Array(
                cs.iter()
                    .map(|c| {
                        c.to_i64()
                            .map(|v| json!(v))
                            .unwrap_or_else(|| json!(c.to_string()))
                    })
                    .collect(),
            ),
            None => Value::Null,
        },
    );
    obj.insert("nvars".into(), json!(f.nvars));
    obj.insert("degree".into(), json!(f.degree));
    obj.insert(
        "places".into(),
        Value::Array(f.places.iter().map(|p| json!(p.to_string())).collect()),
    );
    obj.insert("padic_digits".into(), json!(f.meta.padic_digits));
    obj.insert("precision_bits".into(), json!(f.meta.precision_bits));
    obj.insert(
        "components".into(),
        Value::Array(
            f.components
                .iter()
                .zip(&f.places)
                .map(|(c, &p)| component_to_json(c, p))
                .collect(),
        ),
    );
    for (k, v) in extra {
        obj.insert(k.clone(), v.clone());
    }
    Value::Object(obj)
}

pub fn sform_from_json(v: &Value) -> Result<SForm> {
    let get = |k: &str| {
        v.get(k)
            .ok_or_else(|| Error::Invalid(format!("form file missing {k:?}")))
    };
    let schema = get("schema")?.as_str().unwrap_or("");
    if schema != "normlab-form-v1" {
        return Err(Error::Invalid(format!("unknown schema {schema:?}")));
    }
    let kind = FormKind::parse(get("kind")?.as_str().unwrap_or(""))?;
    let nvars = get("nvars")?
        .as_u64()
        .ok_or_else(|| Error::Invalid("bad nvars".into()))? as usize;
    let field_coeffs = match get("field")? {
        Value::Null => None,
        Value::Array(arr) => Some(
            arr.iter()
                .map(|x| match x {
                    Value::Number(n) => n
                        .as_i64()
                        .map(BigInt::from)
                        .ok_or_else(|| Error::Invalid("bad field coeff".into())),
                    Value::String(s) => s
                        .parse::<BigInt>()
                        .map_err(|_| Error::Invalid("bad field coeff".into())),
                    _ => Err(Error::Invalid("bad field coeff".into())),
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        _ => return Err(Error::Invalid("bad field entry".into())),
    };
    let padic_digits = get("padic_digits")?.as_u64().unwrap_or(32) as u32;
    let precision_bits = get("precision_bits")?.as_u64().unwrap_or(128);
    let places: Vec<Place> = get("places")?
        .as_array()
        .ok_or_else(|| Error::Invalid("places must be an array".into()))?
        .iter()
        .map(|p| Place::parse(p.as_str().unwrap_or("")))
        .collect::<Result<Vec<_>>>()?;
    let comps_json = get("components")?
        .as_array()
        .ok_or_else(|| Error::Invalid("components must be an array".into()))?;
    let mut components = Vec::with_capacity(comps_json.len());
    for (cj, &place) in comps_json.iter().zip(&places) {
        let scalars = cj.get("scalars").and_then(Value::as_str).unwrap_or("");
        let coeffs = cj
            .get("coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Invalid("component missing coeffs".into()))?;
        components.push(match scalars {
            "rational" => {
                let mut f: Option<Form<Rational>> = None;
                for (k, val) in coeffs {
                    let e = exps_from_key(k, nvars)?;
                    let c = rat_from_str(
                        val.as_str()
                            .ok_or_else(|| Error::Invalid("rational must be a string".into()))?,
                    )?;
                    let deg = e.iter().sum::<u32>() as usize;
                    let f = f.get_or_insert_with(|| Form::zero(nvars, deg));
                    f.insert_term(e, c);
                }
                Component::Rational(f.ok_or_else(|| Error::Invalid("empty component".into()))?)
            }
            "interval" => {
                let mut f: Option<Form<RealInterval>> = None;
                for (k, val) in coeffs {
                    let e = exps_from_key(k, nvars)?;
                    let c = interval_from_json(val)?;
                    let deg = e.iter().sum::<u32>() as usize;
                    let f = f.get_or_insert_with(|| Form::zero(nvars, deg));
                    f.insert_term(e, c);
                }
                Component::Real(f.ok_or_else(|| Error::Invalid("empty component".into()))?)
            }
            "padic" => {
                let _ = place;
                let mut f: Option<Form<PAdic>> = None;
                for (k, val) in coeffs {
                    let e = exps_from_key(k, nvars)?;
                    let c = padic_from_json(val)?;
                    let deg = e.iter().sum::<u32>() as usize;
                    let f = f.get_or_insert_with(|| Form::zero(nvars, deg));
                    f.insert_term(e, c);
                }
                Component::Padic(f.ok_or_else(|| Error::Invalid("empty component".into()))?)
            }
            other => return Err(Error::Invalid(format!("unknown scalars {other:?}"))),
        });
    }
    SForm::new(
        places,
        components,
        SFormMeta { kind, field_coeffs, padic_digits, precision_bits },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::make_field;
    use crate::exact::rat_int;
    use crate::forms::quasi::QChoices;
    use crate::forms::{norm_form, quasi_norm_form, PlaceValue};

    #[test]
    fn rational_form_round_trips() {
        let k = make_field(&[-2, 0, 0, 1]).unwrap();
        let f = norm_form(&k);
        let sf = SForm::from_rational_form(
            f.clone(),
            vec![Place::Archimedean, Place::Prime(5)],
            SFormMeta {
                kind: FormKind::Norm,
                field_coeffs: Some(k.coeff_list()),
                padic_digits: 16,
                precision_bits: 64,
            },
        )
        .unwrap();
        let j = sform_to_json(&sf, &Map::new());
        let back = sform_from_json(&j).unwrap();
        assert_eq!(back.as_rational().unwrap(), &f);
        assert_eq!(back.places, sf.places);
        assert_eq!(back.meta.kind, FormKind::Norm);
    }

    #[test]
    fn quasi_form_round_trips_with_enclosures() {
        let k = make_field(&[-2, 0, 1]).unwrap();
        let sf = quasi_norm_form(
            &k,
            &[Place::Archimedean, Place::Prime(5)],
            &QChoices::new(),
            96,
            12,
        )
        .unwrap();
        let j = sform_to_json(&sf, &Map::new());
        let back = sform_from_json(&j).unwrap();
        // evaluation through the round trip still encloses the true value:
        // at (1,0,0,1) the archimedean value is exactly 9
        let pt = [rat_int(1), rat_int(0), rat_int(0), rat_int(1)];
        match &back.evaluate(&pt).unwrap()[0] {
            PlaceValue::Real(v) => assert!(v.contains_rational(&rat_int(9))),
            _ => panic!(),
        }
        // and the 5-adic value matches the direct evaluation to most digits
        let (a, b) = match (
            &sf.evaluate(&pt).unwrap()[1],
            &back.evaluate(&pt).unwrap()[1],
        ) {
            (PlaceValue::Padic(a), PlaceValue::Padic(b)) => (a.clone(), b.clone()),
            _ => panic!(),
        };
        assert!(a.agrees_with(&b, 8).unwrap());
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(sform_from_json(&json!({"schema": "bogus"})).is_err());
        let j = json!({
            "schema": "normlab-form-v1",
            "kind": "norm",
            "field": null,
            "nvars": 2,
            "degree": 2,
            "places": ["inf"],
            "padic_digits": 16,
            "precision_bits": 64,
            "components": [{"place": "inf", "scalars": "rational",
                            "coeffs": {"1,0,0": "1"}}],
        });
        assert!(sform_from_json(&j).is_err());
    }
}
