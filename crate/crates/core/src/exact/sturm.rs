//! Sturm sequences: exact real-root counting and isolation.

use super::{poly::RatPolynomial, rat_int, Rational};
use crate::{Error, Result};
use num_traits::{Signed, Zero};

/// One isolating interval. `lo == hi` marks an exact rational root; otherwise
/// the single root lies strictly inside and the endpoints are non-roots.
#[derive(Debug, Clone, PartialEq)]
pub struct Isolating {
    pub lo: Rational,
    pub hi: Rational,
}

impl Isolating {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rat_int(2)
    }
}

#[derive(Debug, Clone)]
pub struct RealRoots {
    pub count: usize,
    pub intervals: Vec<Isolating>,
}

/// Sturm chain p, p′, then negated remainders.
fn sturm_chain(p: &RatPolynomial) -> Vec<RatPolynomial> {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain.last().unwrap().is_zero() {
        let k = chain.len();
        let r = chain[k - 2].rem(&chain[k - 1]).neg();
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    if chain.last().unwrap().is_zero() {
        chain.pop();
    }
    chain
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

fn sign_of(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

fn variations_at(chain: &[RatPolynomial], x: &Rational) -> usize {
    sign_changes(chain.iter().map(|p| sign_of(&p.eval(x))))
}

fn variations_at_neg_inf(chain: &[RatPolynomial]) -> usize {
    sign_changes(chain.iter().map(|p| match p.degree() {
        None => 0,
        Some(d) => {
            let s = sign_of(p.leading().unwrap());
            if d % 2 == 0 {
                s
            } else {
                -s
            }
        }
    }))
}

fn variations_at_pos_inf(chain: &[RatPolynomial]) -> usize {
    sign_changes(chain.iter().map(|p| match p.degree() {
        None => 0,
        Some(_) => sign_of(p.leading().unwrap()),
    }))
}

/// Count and isolate all real roots of a squarefree polynomial.
pub fn real_roots(p: &RatPolynomial) -> Result<RealRoots> {
    if p.is_zero() || !p.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    if p.degree() == Some(0) {
        return Ok(RealRoots { count: 0, intervals: vec![] });
    }
    let chain = sturm_chain(p);
    let total = variations_at_neg_inf(&chain) - variations_at_pos_inf(&chain);
    let bound = p.root_bound();
    let mut intervals: Vec<Isolating> = Vec::with_capacity(total);
    // (lo, hi, root count in the open interval); endpoints are never roots.
    let mut stack = vec![(-bound.clone(), bound, total)];
    while let Some((lo, hi, count)) = stack.pop() {
        match count {
            0 => {}
            1 => intervals.push(Isolating { lo, hi }),
            _ => {
                let mid = (&lo + &hi) / rat_int(2);
                if p.eval(&mid).is_zero() {
                    intervals.push(Isolating { lo: mid.clone(), hi: mid.clone() });
                    // Nudge inward until (mid−eps, mid+eps) holds only mid.
                    let mut eps = (&hi - &lo) / rat_int(4);
                    let (a, b) = loop {
                        let a = &mid - &eps;
                        let b = &mid + &eps;
                        if !p.eval(&a).is_zero()
                            && !p.eval(&b).is_zero()
                            && variations_at(&chain, &a) - variations_at(&chain, &b) == 1
                        {
                            break (a, b);
                        }
                        eps /= rat_int(2);
                    };
                    let left = variations_at(&chain, &lo) - variations_at(&chain, &a);
                    let right = variations_at(&chain, &b) - variations_at(&chain, &hi);
                    stack.push((lo, a, left));
                    stack.push((b, hi, right));
                } else {
                    let left = variations_at(&chain, &lo) - variations_at(&chain, &mid);
                    stack.push((lo, mid.clone(), left));
                    stack.push((mid, hi, count - left));
                }
            }
        }
    }
    intervals.sort_by(|a, b| a.lo.cmp(&b.lo));
    debug_assert_eq!(intervals.len(), total);
    Ok(RealRoots { count: total, intervals })
}

/// Bisect an isolating interval until its width is at most `width`.
///
/// An exact rational root hit by a midpoint comes back as a point interval.
pub fn refine(p: &RatPolynomial, iv: &Isolating, width: &Rational) -> Isolating {
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    if lo == hi {
        return iv.clone();
    }
    let s_lo = sign_of(&p.eval(&lo));
    debug_assert!(s_lo != 0, "endpoint must not be a root");
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / rat_int(2);
        match sign_of(&p.eval(&mid)) {
            0 => return Isolating { lo: mid.clone(), hi: mid },
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Isolating { lo, hi }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RatPolynomial {
        RatPolynomial::from_int_coeffs(c)
    }

    #[test]
    fn counts_match_known_polynomials() {
        assert_eq!(real_roots(&p(&[-2, 0, 1])).unwrap().count, 2);
        assert_eq!(real_roots(&p(&[-2, 0, 0, 1])).unwrap().count, 1);
        assert_eq!(real_roots(&p(&[1, 0, 1])).unwrap().count, 0);
        // t^4 - t - 1: two sign changes survive the chain at ±∞.
        assert_eq!(real_roots(&p(&[-1, -1, 0, 0, 1])).unwrap().count, 2);
    }

    #[test]
    fn rejects_non_squarefree() {
        assert_eq!(real_roots(&p(&[1, 2, 1])).unwrap_err(), Error::NotSquarefree);
    }

    #[test]
    fn isolating_intervals_are_disjoint_and_refine() {
        let f = p(&[-2, 0, 1]);
        let roots = real_roots(&f).unwrap();
        assert_eq!(roots.intervals.len(), 2);
        let width = Rational::new(1.into(), 1024.into());
        let fine: Vec<_> = roots.intervals.iter().map(|iv| refine(&f, iv, &width)).collect();
        for iv in &fine {
            assert!(iv.width() <= width);
        }
        assert!(fine[0].hi < fine[1].lo);
        // sqrt(2) = 1.41421356... lands in the second interval
        let sqrt2_lo = Rational::new(141421.into(), 100000.into());
        let sqrt2_hi = Rational::new(141422.into(), 100000.into());
        assert!(fine[1].lo <= sqrt2_hi && fine[1].hi >= sqrt2_lo);
    }

    #[test]
    fn rational_roots_may_pin_to_points() {
        let f = p(&[-1, 0, 1]);
        let roots = real_roots(&f).unwrap();
        assert_eq!(roots.count, 2);
        let tight = Rational::new(1.into(), 1_000_000.into());
        for iv in &roots.intervals {
            let fine = refine(&f, iv, &tight);
            assert!(fine.width() <= tight);
            // ±1 are enclosed
            assert!(fine.lo <= fine.hi);
        }
    }

    #[test]
    fn root_count_parity_matches_degree() {
        for coeffs in [&[-2i64, 0, 1][..], &[-2, 0, 0, 1], &[1, 0, 1], &[-1, -1, 0, 0, 1]] {
            let f = p(coeffs);
            let n = f.degree().unwrap();
            let r = real_roots(&f).unwrap().count;
            assert_eq!((n - r) % 2, 0, "complex roots pair up");
        }
    }

    #[test]
    fn clustered_roots_still_isolate() {
        // (t - 1/128)(t + 1/128)(t - 2) cleared to integer coefficients
        let f = RatPolynomial::from_int_coeffs(&[2, -1, -32768, 16384])
            .scale(&Rational::new(1.into(), 16384.into()));
        let roots = real_roots(&f).unwrap();
        assert_eq!(roots.count, 3);
    }
}
