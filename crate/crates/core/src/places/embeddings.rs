//! Certified enclosures of the embeddings θ_i : K → ℂ.
//!
//! Real embeddings come from Sturm isolation with exact bisection. Complex
//! pairs are seeded by a floating Durand–Kerner sweep and then certified and
//! refined with complex interval Newton, whose residuals are computed with
//! exact dyadic arithmetic.

use super::dyadic::Dyadic;
use super::interval::{ComplexInterval, RealInterval};
use crate::exact::field::NumberField;
use crate::exact::sturm;
use crate::exact::Rational;
use crate::{Error, Result};
use num_complex::Complex64;
use num_traits::ToPrimitive;

/// One embedding (or conjugate pair) with the powers θ^0 … θ^{n−1} that form
/// the corresponding row block of the eigenbasis matrix.
#[derive(Debug, Clone)]
pub struct EmbeddingRow {
    pub powers: Vec<ComplexInterval>,
    /// true: stands for the pair (θ, θ̄) with Im θ > 0 certified
    pub conjugate_pair: bool,
}

impl EmbeddingRow {
    pub fn theta(&self) -> &ComplexInterval {
        &self.powers[1.min(self.powers.len() - 1)]
    }

    /// Block dimension: 1 for a real embedding, 2 for a pair.
    pub fn block_dim(&self) -> usize {
        if self.conjugate_pair {
            2
        } else {
            1
        }
    }

    /// l_i(x) = Σ_j θ^j x_j for a rational point.
    pub fn eval_linear(&self, point: &[Rational], prec: u64) -> ComplexInterval {
        let mut acc = ComplexInterval::zero();
        for (j, x) in point.iter().enumerate() {
            let xi = RealInterval::from_rational(x, prec);
            let term = ComplexInterval {
                re: self.powers[j].re.mul(&xi),
                im: self.powers[j].im.mul(&xi),
            };
            acc = acc.add(&term);
        }
        acc.tighten(prec + 32)
    }

    /// Same linear form on an interval point.
    pub fn eval_linear_interval(&self, point: &[RealInterval], prec: u64) -> ComplexInterval {
        let mut acc = ComplexInterval::zero();
        for (j, x) in point.iter().enumerate() {
            let term = ComplexInterval {
                re: self.powers[j].re.mul(x),
                im: self.powers[j].im.mul(x),
            };
            acc = acc.add(&term);
        }
        acc.tighten(prec + 32)
    }
}

/// All embeddings of K, reals first (ascending), then pairs by real part.
#[derive(Debug, Clone)]
pub struct Embeddings {
    pub rows: Vec<EmbeddingRow>,
    pub prec: u64,
    degree: usize,
}

impl Embeddings {
    pub fn real_count(&self) -> usize {
        self.rows.iter().filter(|r| !r.conjugate_pair).count()
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().filter(|r| r.conjugate_pair).count()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_totally_real(&self) -> bool {
        self.pair_count() == 0
    }

    /// Real n×n realization: a real row contributes (θ^j)_j, a pair
    /// contributes the two rows √2·Re(θ^j) and √2·Im(θ^j); its determinant
    /// has absolute value |disc|^{1/2}.
    pub fn real_matrix(&self, prec: u64) -> Vec<Vec<RealInterval>> {
        let sqrt2 = RealInterval::from_int(2)
            .sqrt(prec + 16)
            .expect("sqrt of 2");
        let mut out = vec![];
        for row in &self.rows {
            if row.conjugate_pair {
                out.push(
                    row.powers
                        .iter()
                        .map(|z| z.re.mul(&sqrt2).tighten(prec + 16))
                        .collect(),
                );
                out.push(
                    row.powers
                        .iter()
                        .map(|z| z.im.mul(&sqrt2).tighten(prec + 16))
                        .collect(),
                );
            } else {
                out.push(row.powers.iter().map(|z| z.re.clone()).collect());
            }
        }
        out
    }
}

/// Compute all embeddings of K with each enclosure refined to radius
/// ≤ 2^{−prec}. Requires prec ≥ 16.
pub fn real_embeddings(field: &NumberField, prec: u64) -> Result<Embeddings> {
    assert!(prec >= 16, "precision below 16 bits is never useful here");
    let n = field.degree();
    let mu = field.min_poly();
    let width = Rational::new(1.into(), num_bigint::BigInt::from(1) << (prec + 4));
    let roots = sturm::real_roots(mu)?;
    let mut rows: Vec<EmbeddingRow> = vec![];
    for iv in &roots.intervals {
        let fine = sturm::refine(mu, iv, &width);
        let enc = RealInterval::from_rational_bounds(&fine.lo, &fine.hi, prec + 16);
        rows.push(make_row(enc_to_complex(enc), n, false, prec));
    }
    let pairs = (n - roots.count) / 2;
    if pairs > 0 {
        let complex = certified_complex_pairs(field, pairs, prec)?;
        for z in complex {
            rows.push(make_row(z, n, true, prec));
        }
    }
    // canonical order: reals ascending, then pairs by (re, im)
    rows.sort_by(|a, b| {
        let key = |r: &EmbeddingRow| {
            (
                r.conjugate_pair,
                r.theta().re.mid.to_rational(),
                r.theta().im.mid.to_rational(),
            )
        };
        key(a).cmp(&key(b))
    });
    Ok(Embeddings { rows, prec, degree: n })
}

fn enc_to_complex(re: RealInterval) -> ComplexInterval {
    ComplexInterval::real(re)
}

fn make_row(theta: ComplexInterval, n: usize, pair: bool, prec: u64) -> EmbeddingRow {
    let mut powers = Vec::with_capacity(n);
    let mut cur = ComplexInterval::one();
    for _ in 0..n {
        powers.push(cur.clone());
        cur = cur.mul(&theta).tighten(prec + 48);
    }
    EmbeddingRow { powers, conjugate_pair: pair }
}

/// Durand–Kerner seeds followed by certified interval Newton.
fn certified_complex_pairs(
    field: &NumberField,
    pairs: usize,
    prec: u64,
) -> Result<Vec<ComplexInterval>> {
    let coeffs_f64: Vec<f64> = field
        .min_poly()
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect();
    let seeds = durand_kerner(&coeffs_f64);
    let mut upper: Vec<Complex64> = seeds.into_iter().filter(|z| z.im > 1e-9).collect();
    upper.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    if upper.len() != pairs {
        return Err(Error::PrecisionLoss {
            context: format!(
                "expected {pairs} complex pairs, floating sweep found {}",
                upper.len()
            ),
        });
    }
    let mut out = vec![];
    for z in upper {
        out.push(certify_and_refine(field, z, prec)?);
    }
    Ok(out)
}

fn poly_eval_f64(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let bound = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / coeffs[n]).abs())
            .fold(0.0f64, f64::max);
    let offset = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| offset.powu(k as u32 + 1) * bound)
        .collect();
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(coeffs[n], 0.0);
            for j in 0..n {
                if j != i {
                    den *= roots[i] - roots[j];
                }
            }
            if den.norm_sqr() == 0.0 {
                continue;
            }
            let step = poly_eval_f64(coeffs, roots[i]) / den;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * bound {
            break;
        }
    }
    roots
}

/// Exact evaluation of μ at a dyadic complex point.
fn eval_exact(field: &NumberField, z: &ComplexInterval) -> ComplexInterval {
    let mut acc = ComplexInterval::zero();
    for c in field.min_poly().coeffs().iter().rev() {
        let ci = ComplexInterval::real(RealInterval::exact(Dyadic::from_bigint(
            c.numer().clone(),
        )));
        acc = acc.mul(z).add(&ci);
    }
    acc
}

fn eval_derivative(field: &NumberField, z: &ComplexInterval, prec: u64) -> ComplexInterval {
    let der = field.min_poly().derivative();
    let mut acc = ComplexInterval::zero();
    for c in der.coeffs().iter().rev() {
        let ci = ComplexInterval::real(RealInterval::exact(Dyadic::from_bigint(
            c.numer().clone(),
        )));
        acc = acc.mul(z).add(&ci).tighten(prec + 64);
    }
    acc
}

fn box_around(z: Complex64, r: f64) -> ComplexInterval {
    let mk = |c: f64| {
        RealInterval::new(
            Dyadic::from_f64(c).expect("finite"),
            Dyadic::from_f64(r).expect("finite"),
        )
    };
    ComplexInterval::new(mk(z.re), mk(z.im))
}

/// One Newton image K(Z) = mid(Z) − μ(mid)/μ′(Z).
fn newton_image(field: &NumberField, boxz: &ComplexInterval, prec: u64) -> Result<ComplexInterval> {
    let mid = ComplexInterval::new(
        RealInterval::exact(boxz.re.mid.clone()),
        RealInterval::exact(boxz.im.mid.clone()),
    );
    let fmid = eval_exact(field, &mid);
    let fprime = eval_derivative(field, boxz, prec);
    let quot = fmid.div(&fprime, prec + 64)?;
    Ok(mid.sub(&quot).tighten(prec + 64))
}

fn certify_and_refine(
    field: &NumberField,
    seed: Complex64,
    prec: u64,
) -> Result<ComplexInterval> {
    let scale = seed.norm().max(1.0);
    let mut certified: Option<ComplexInterval> = None;
    for &r in &[1e-7, 1e-9, 1e-5, 1e-11, 1e-3] {
        let z = box_around(seed, r * scale);
        if z.im.lo().signum() <= 0 {
            continue; // must stay strictly in the upper half plane
        }
        if let Ok(img) = newton_image(field, &z, prec) {
            if z.contains(&img) {
                certified = Some(img);
                break;
            }
        }
    }
    let mut cur = certified.ok_or_else(|| Error::PrecisionLoss {
        context: format!("could not certify complex root near {seed}"),
    })?;
    // quadratic refinement; each certified image still contains the root
    let target = Dyadic::new(1.into(), -(prec as i64));
    for _ in 0..64 {
        let wide_enough = cur.re.rad.cmp_dyadic(&target) == std::cmp::Ordering::Greater
            || cur.im.rad.cmp_dyadic(&target) == std::cmp::Ordering::Greater;
        if !wide_enough {
            return Ok(cur);
        }
        let img = newton_image(field, &cur, prec)?;
        // Keep the enclosure sound: the true root lies in cur ∩ img; when the
        // image fails to shrink, fall back to intersection by re-centering.
        cur = if cur.contains(&img) { img } else { intersect(&cur, &img)? };
    }
    Err(Error::PrecisionLoss { context: "complex refinement stalled".into() })
}

fn intersect(a: &ComplexInterval, b: &ComplexInterval) -> Result<ComplexInterval> {
    let part = |x: &RealInterval, y: &RealInterval| -> Result<RealInterval> {
        let lo = if x.lo().cmp_dyadic(&y.lo()) == std::cmp::Ordering::Greater {
            x.lo()
        } else {
            y.lo()
        };
        let hi = if x.hi().cmp_dyadic(&y.hi()) == std::cmp::Ordering::Less {
            x.hi()
        } else {
            y.hi()
        };
        if lo.cmp_dyadic(&hi) == std::cmp::Ordering::Greater {
            return Err(Error::PrecisionLoss { context: "empty intersection".into() });
        }
        Ok(RealInterval::from_endpoints(lo, hi))
    };
    Ok(ComplexInterval::new(part(&a.re, &b.re)?, part(&a.im, &b.im)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::make_field;
    use crate::exact::rat_int;

    #[test]
    fn sqrt2_embeddings() {
        let k = make_field(&[-2, 0, 1]).unwrap();
        let emb = real_embeddings(&k, 64).unwrap();
        assert_eq!(emb.real_count(), 2);
        assert_eq!(emb.pair_count(), 0);
        let lo = Rational::new(141421356i64.into(), 100000000i64.into());
        let hi = Rational::new(141421357i64.into(), 100000000i64.into());
        // rows sorted ascending: -√2 then √2
        assert!(emb.rows[0].theta().re.hi().signum() < 0);
        let t = &emb.rows[1].theta().re;
        assert!(t.lo().to_rational() <= hi && t.hi().to_rational() >= lo);
    }

    #[test]
    fn cbrt2_has_one_real_and_a_pair() {
        let k = make_field(&[-2, 0, 0, 1]).unwrap();
        let emb = real_embeddings(&k, 96).unwrap();
        assert_eq!(emb.real_count(), 1);
        assert_eq!(emb.pair_count(), 1);
        // real root ≈ 1.25992105
        use num_traits::Signed;
        let real = &emb.rows[0].theta().re;
        let approx = Rational::new(125992105i64.into(), 100000000i64.into());
        assert!((real.mid.to_rational() - approx).abs() < Rational::new(1.into(), 10000000.into()));
        // the complex pair: θθ̄ = |θ|² = 2^{2/3} / ... product of all roots = 2:
        // real · |θ|² = 2
        let pair = emb.rows.iter().find(|r| r.conjugate_pair).unwrap();
        let prod = pair.theta().modulus_sq().mul(real);
        assert!(prod.contains_rational(&rat_int(2)));
        assert!(pair.theta().im.lo().signum() > 0);
    }

    #[test]
    fn gaussian_field_is_totally_imaginary() {
        let k = make_field(&[1, 0, 1]).unwrap();
        let emb = real_embeddings(&k, 64).unwrap();
        assert_eq!(emb.real_count(), 0);
        assert_eq!(emb.pair_count(), 1);
        let t = emb.rows[0].theta();
        assert!(t.re.contains_rational(&rat_int(0)));
        assert!(t.im.contains_rational(&rat_int(1)));
    }

    #[test]
    fn enclosures_meet_requested_radius() {
        let k = make_field(&[-1, -1, 0, 0, 1]).unwrap(); // t^4 - t - 1
        let prec = 128;
        let emb = real_embeddings(&k, prec).unwrap();
        assert_eq!(emb.real_count(), 2);
        assert_eq!(emb.pair_count(), 1);
        let bound = Dyadic::new(1.into(), -(prec as i64));
        for row in &emb.rows {
            let t = row.theta();
            assert!(t.re.rad.cmp_dyadic(&bound) != std::cmp::Ordering::Greater);
            assert!(t.im.rad.cmp_dyadic(&bound) != std::cmp::Ordering::Greater);
        }
    }

    #[test]
    fn eigenbasis_det_squared_is_disc() {
        // |det V|² = |disc| for the power-basis Vandermonde
        for coeffs in [&[-2i64, 0, 1][..], &[-2, 0, 0, 1], &[1, 0, 1]] {
            let k = make_field(coeffs).unwrap();
            let emb = real_embeddings(&k, 96).unwrap();
            let n = k.degree();
            // expand pairs into explicit conjugate rows
            let mut rows: Vec<Vec<ComplexInterval>> = vec![];
            for r in &emb.rows {
                rows.push(r.powers.clone());
                if r.conjugate_pair {
                    rows.push(r.powers.iter().map(|z| z.conj()).collect());
                }
            }
            assert_eq!(rows.len(), n);
            let det = complex_det(&rows);
            let disc = Rational::from_integer(k.disc().clone());
            use num_traits::Signed;
            assert!(
                det.modulus_sq().contains_rational(&disc.abs()),
                "field {coeffs:?}"
            );
        }
    }

    fn complex_det(rows: &[Vec<ComplexInterval>]) -> ComplexInterval {
        let n = rows.len();
        if n == 1 {
            return rows[0][0].clone();
        }
        let mut acc = ComplexInterval::zero();
        for j in 0..n {
            let minor: Vec<Vec<ComplexInterval>> = rows[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = rows[0][j].mul(&complex_det(&minor));
            acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }
}
