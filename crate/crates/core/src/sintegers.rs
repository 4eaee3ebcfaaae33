//! S-integers of ℚ: point enumeration, content and S-norm, unit balancing,
//! and exhaustive value scans of forms over height/denominator boxes.

use crate::exact::{rat_to_string, Rational};
use crate::forms::{Form, IntForm, PlaceValue, SForm};
use crate::places::{rational_abs, Place, RealInterval};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// O_S = ℤ[1/p₁ … 1/p_k]; the set of places is {∞} ∪ {p_i}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SRing {
    primes: Vec<u64>,
}

impl SRing {
    pub fn new(primes: &[u64]) -> Result<Self> {
        let mut ps = primes.to_vec();
        ps.sort_unstable();
        ps.dedup();
        if ps.len() != primes.len() {
            return Err(Error::Invalid("duplicate primes in S".into()));
        }
        for &p in &ps {
            if !crate::exact::modp::is_prime_u64(p) {
                return Err(Error::Invalid(format!("{p} is not prime")));
            }
        }
        Ok(SRing { primes: ps })
    }

    /// S = {∞}: the ordinary integers.
    pub fn integers() -> Self {
        SRing { primes: vec![] }
    }

    pub fn from_places(places: &[Place]) -> Result<Self> {
        if !places.contains(&Place::Archimedean) {
            return Err(Error::Invalid("S must contain the archimedean place".into()));
        }
        let primes: Vec<u64> = places
            .iter()
            .filter_map(|p| match p {
                Place::Prime(q) => Some(*q),
                Place::Archimedean => None,
            })
            .collect();
        SRing::new(&primes)
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// All places of S, archimedean first.
    pub fn places(&self) -> Vec<Place> {
        let mut out = vec![Place::Archimedean];
        out.extend(self.primes.iter().map(|&p| Place::Prime(p)));
        out
    }

    pub fn num_places(&self) -> usize {
        1 + self.primes.len()
    }
}

/// An S-unit ξ = sign · ∏ p_i^{e_i}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SUnit {
    pub sign: i8,
    pub exponents: Vec<i64>,
}

impl SUnit {
    pub fn one(ring: &SRing) -> Self {
        SUnit { sign: 1, exponents: vec![0; ring.primes.len()] }
    }

    pub fn value(&self, ring: &SRing) -> Rational {
        let mut num = BigInt::from(self.sign);
        let mut den = BigInt::one();
        for (&p, &e) in ring.primes.iter().zip(&self.exponents) {
            if e >= 0 {
                num *= BigInt::from(p).pow(e as u32);
            } else {
                den *= BigInt::from(p).pow((-e) as u32);
            }
        }
        Rational::new(num, den)
    }
}

/// A vector of F_S^n with exact rational entries per place. Built from a
/// global point all components agree; the adelic constructor admits
/// independent per-place data (rationals are dense in every ℚ_p).
#[derive(Debug, Clone, PartialEq)]
pub struct SVector {
    pub ring: SRing,
    pub arch: Vec<Rational>,
    pub finite: BTreeMap<u64, Vec<Rational>>,
}

impl SVector {
    pub fn global(ring: &SRing, coords: &[Rational]) -> Self {
        let finite = ring.primes.iter().map(|&p| (p, coords.to_vec())).collect();
        SVector { ring: ring.clone(), arch: coords.to_vec(), finite }
    }

    pub fn adelic(
        ring: &SRing,
        arch: Vec<Rational>,
        finite: BTreeMap<u64, Vec<Rational>>,
    ) -> Result<Self> {
        if finite.len() != ring.primes.len()
            || !ring.primes.iter().all(|p| finite.contains_key(p))
        {
            return Err(Error::Invalid("finite components must match S".into()));
        }
        let n = arch.len();
        if finite.values().any(|v| v.len() != n) {
            return Err(Error::Invalid("component dimensions differ".into()));
        }
        Ok(SVector { ring: ring.clone(), arch, finite })
    }

    pub fn dim(&self) -> usize {
        self.arch.len()
    }

    /// ‖w_v‖_v = max_j |w_{v,j}|_v, exact.
    pub fn place_norm(&self, v: Place) -> Rational {
        let comp: &[Rational] = match v {
            Place::Archimedean => &self.arch,
            Place::Prime(p) => &self.finite[&p],
        };
        comp.iter()
            .map(|x| rational_abs(x, v))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// ‖w‖_S = max_v ‖w_v‖_v.
    pub fn snorm(&self) -> Rational {
        self.ring
            .places()
            .into_iter()
            .map(|v| self.place_norm(v))
            .max()
            .unwrap()
    }

    /// cont(w) = ∏_v ‖w_v‖_v.
    pub fn content(&self) -> Rational {
        self.ring
            .places()
            .into_iter()
            .map(|v| self.place_norm(v))
            .product()
    }

    /// Diagonal scaling by a global rational (e.g. an S-unit value).
    pub fn scale(&self, c: &Rational) -> Self {
        let scale_vec = |v: &[Rational]| v.iter().map(|x| x * c).collect::<Vec<_>>();
        SVector {
            ring: self.ring.clone(),
            arch: scale_vec(&self.arch),
            finite: self.finite.iter().map(|(&p, v)| (p, scale_vec(v))).collect(),
        }
    }
}

// --- point enumeration ---------------------------------------------------------

/// One enumerated S-integer point z/d with integer numerators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SPoint {
    pub numer: Vec<i64>,
    /// exponents of the denominator d = ∏ p_i^{a_i}
    pub denom_exps: Vec<u32>,
    pub denom: BigInt,
}

impl SPoint {
    pub fn to_rationals(&self) -> Vec<Rational> {
        self.numer
            .iter()
            .map(|&z| Rational::new(BigInt::from(z), self.denom.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.numer.iter().all(|&z| z == 0)
    }

    pub fn display(&self) -> String {
        let coords: Vec<String> = self
            .numer
            .iter()
            .map(|z| {
                if self.denom.is_one() {
                    z.to_string()
                } else {
                    format!("{z}/{}", self.denom)
                }
            })
            .collect();
        format!("({})", coords.join(";"))
    }
}

/// Enumerate all x ∈ O_S^n whose numerators over the common denominator
/// d = ∏ p_i^{a_i} (a_i ≤ D, written in lowest terms) are bounded by H in
/// absolute value. The origin appears once, at d = 1. Deterministic order:
/// denominator exponents lexicographically, then numerators.
pub fn enumerate_points(
    ring: &SRing,
    n: usize,
    height: i64,
    denom_cap: u32,
) -> impl Iterator<Item = SPoint> + '_ {
    assert!(height >= 1);
    assert!(n >= 1);
    let k = ring.primes.len();
    let mut denom_choices: Vec<Vec<u32>> = vec![vec![0u32; k]];
    if k > 0 {
        let mut cur = vec![0u32; k];
        'outer: loop {
            let mut pos = k;
            while pos > 0 {
                pos -= 1;
                if cur[pos] < denom_cap {
                    cur[pos] += 1;
                    for c in cur.iter_mut().skip(pos + 1) {
                        *c = 0;
                    }
                    denom_choices.push(cur.clone());
                    continue 'outer;
                }
            }
            break;
        }
    }
    let primes = ring.primes.clone();
    denom_choices.into_iter().flat_map(move |exps| {
        let mut denom = BigInt::one();
        for (&p, &a) in primes.iter().zip(&exps) {
            denom *= BigInt::from(p).pow(a);
        }
        let active: Vec<u64> = primes
            .iter()
            .zip(&exps)
            .filter(|(_, &a)| a > 0)
            .map(|(&p, _)| p)
            .collect();
        NumeratorIter::new(n, height, exps, denom, active)
    })
}

struct NumeratorIter {
    height: i64,
    exps: Vec<u32>,
    denom: BigInt,
    active: Vec<u64>,
    cur: Option<Vec<i64>>,
}

impl NumeratorIter {
    fn new(n: usize, height: i64, exps: Vec<u32>, denom: BigInt, active: Vec<u64>) -> Self {
        NumeratorIter { height, exps, denom, active, cur: Some(vec![-height; n]) }
    }

    fn advance(v: &mut [i64], height: i64) -> bool {
        let mut pos = v.len();
        while pos > 0 {
            pos -= 1;
            if v[pos] < height {
                v[pos] += 1;
                for x in v.iter_mut().skip(pos + 1) {
                    *x = -height;
                }
                return true;
            }
        }
        false
    }

    /// lowest-terms test: for every active p some numerator is a non-multiple
    fn in_lowest_terms(&self, v: &[i64]) -> bool {
        self.active
            .iter()
            .all(|&p| v.iter().any(|&z| z.rem_euclid(p as i64) != 0))
    }
}

impl Iterator for NumeratorIter {
    type Item = SPoint;

    fn next(&mut self) -> Option<SPoint> {
        loop {
            let v = self.cur.as_mut()?;
            let candidate = v.clone();
            if !Self::advance(v, self.height) {
                self.cur = None;
            }
            if self.active.is_empty() || self.in_lowest_terms(&candidate) {
                return Some(SPoint {
                    numer: candidate,
                    denom_exps: self.exps.clone(),
                    denom: self.denom.clone(),
                });
            }
        }
    }
}

// --- unit balancing --------------------------------------------------------------

/// Result of minimizing ‖ξ^s w‖_S over the unit lattice.
#[derive(Debug, Clone)]
pub struct BalanceResult {
    pub unit: SUnit,
    /// exact minimum of ‖ξ^s w‖_S over the searched candidates
    pub achieved: Rational,
    pub content: Rational,
    /// achieved / cont(w)^{1/|S|}, as a certified enclosure
    pub ratio: RealInterval,
    /// κ̂² = ∏_{p∈S} p^s, the square of the covering constant
    pub kappa_hat_sq: Rational,
    /// exact check: cont ≤ achieved^{|S|} and achieved^{2|S|} ≤ κ̂^{2|S|}·cont²
    pub certified: bool,
}

/// κ̂ = ∏_{p ∈ S} p^{s/2}: rounding each finite-place exponent to the nearest
/// integer costs at most p^{s/2} per place and the archimedean coordinate
/// absorbs the trace-zero correction.
pub fn kappa_hat_squared(ring: &SRing, s: u32) -> Rational {
    let mut acc = BigInt::one();
    for &p in ring.primes() {
        acc *= BigInt::from(p).pow(s);
    }
    Rational::from_integer(acc)
}

/// Find ξ ∈ O_S^* minimizing ‖ξ^s w‖_S over the exponent box |e_i| ≤ box_e,
/// with greedy rounding candidates always included so the covering bound κ̂
/// holds regardless of the box size. Ties break to the lexicographically
/// smallest exponent vector.
pub fn unit_balance(w: &SVector, s: u32, box_e: i64) -> Result<BalanceResult> {
    assert!(s >= 1);
    let ring = &w.ring;
    let content = w.content();
    if content.is_zero() {
        return Err(Error::ZeroContent);
    }
    let k = ring.primes().len();
    let norms: Vec<Rational> = ring.places().iter().map(|&v| w.place_norm(v)).collect();

    let objective = |e: &[i64]| -> Rational {
        let mut xi_pow = Rational::one();
        for (j, &p) in ring.primes().iter().enumerate() {
            xi_pow *= pow_rat(p, s as i64 * e[j]);
        }
        let mut best = &norms[0] * xi_pow.abs();
        for (j, &p) in ring.primes().iter().enumerate() {
            let local = &norms[1 + j] * pow_rat(p, -(s as i64) * e[j]);
            if local > best {
                best = local;
            }
        }
        best
    };

    let mut candidates: Vec<Vec<i64>> = vec![];
    if k == 0 {
        candidates.push(vec![]);
    } else {
        let mut e = vec![-box_e; k];
        loop {
            candidates.push(e.clone());
            let mut advanced = false;
            let mut pos = k;
            while pos > 0 {
                pos -= 1;
                if e[pos] < box_e {
                    e[pos] += 1;
                    for x in e.iter_mut().skip(pos + 1) {
                        *x = -box_e;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        // greedy rounding candidates with ±1 slack in every coordinate
        let mean = {
            let c = content.to_f64().unwrap_or(1.0).abs().max(f64::MIN_POSITIVE);
            c.ln() / ring.num_places() as f64
        };
        let base: Vec<i64> = ring
            .primes()
            .iter()
            .enumerate()
            .map(|(j, &p)| {
                let nj = norms[1 + j].to_f64().unwrap_or(1.0).max(f64::MIN_POSITIVE).ln();
                ((nj - mean) / (s as f64 * (p as f64).ln())).round() as i64
            })
            .collect();
        let mut stack = vec![(0usize, base)];
        while let Some((idx, mut cand)) = stack.pop() {
            if idx == k {
                candidates.push(cand);
                continue;
            }
            for delta in [-1i64, 0, 1] {
                cand[idx] += delta;
                stack.push((idx + 1, cand.clone()));
                cand[idx] -= delta;
            }
        }
    }

    let mut best_e: Option<Vec<i64>> = None;
    let mut best_val: Option<Rational> = None;
    for cand in candidates {
        let val = objective(&cand);
        let better = match (&best_val, &best_e) {
            (None, _) => true,
            (Some(bv), Some(be)) => val < *bv || (val == *bv && cand < *be),
            _ => unreachable!(),
        };
        if better {
            best_val = Some(val);
            best_e = Some(cand);
        }
    }
    let exponents = best_e.unwrap();
    let achieved = best_val.unwrap();
    let places = ring.num_places() as u32;

    let kappa_hat_sq = kappa_hat_squared(ring, s);
    let lower_ok = achieved.pow(places as i32) >= content;
    let upper_ok =
        achieved.pow(2 * places as i32) <= kappa_hat_sq.pow(places as i32) * &content * &content;
    let prec = 96;
    let cont_iv = RealInterval::from_rational(&content, prec + 16);
    let root = cont_iv.nth_root(places, prec)?;
    let ratio = RealInterval::from_rational(&achieved, prec + 16).div(&root, prec)?;

    Ok(BalanceResult {
        unit: SUnit { sign: 1, exponents },
        achieved,
        content,
        ratio,
        kappa_hat_sq,
        certified: lower_ok && upper_ok,
    })
}

fn pow_rat(p: u64, e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::from(p).pow(e as u32))
    } else {
        Rational::new(BigInt::one(), BigInt::from(p).pow((-e) as u32))
    }
}

// --- value scans ------------------------------------------------------------------

/// Bounds on a scanned quantity; exact rationals collapse the range.
#[derive(Debug, Clone, PartialEq)]
pub struct RatRange {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatRange {
    fn exact(q: Rational) -> Self {
        RatRange { lo: q.clone(), hi: q }
    }

    fn from_interval(iv: &RealInterval) -> Self {
        RatRange { lo: iv.lo().to_rational(), hi: iv.hi().to_rational() }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub points_scanned: usize,
    pub height: i64,
    pub denom_cap: u32,
    /// nontrivial zeros found (certified zero value at a nonzero point)
    pub zeros: Vec<SPoint>,
    /// points whose value could not be certified nonzero (enclosure straddles 0)
    pub flagged: usize,
    /// min over nonzero values of cont(f(z)), with a witness point
    pub min_content: Option<(RatRange, SPoint)>,
    /// certified lower bound of min over distinct value pairs of max_v |Δ|_v
    pub gap_lower: Option<Rational>,
    /// min over nonzero values of the archimedean |f(z)|, with a witness
    pub min_abs_arch: Option<(RatRange, SPoint)>,
}

/// Exhaustive deterministic value scan of an S-form over the height box.
pub fn value_scan(f: &SForm, ring: &SRing, height: i64, denom_cap: u32) -> Result<ScanResult> {
    let sr = SRing::from_places(&f.places)?;
    if &sr != ring {
        return Err(Error::Invalid("form places differ from scan ring".into()));
    }
    let n = f.nvars;
    let mut zeros = vec![];
    let mut flagged = 0usize;
    let mut points_scanned = 0usize;
    let mut min_content: Option<(RatRange, SPoint)> = None;
    let mut min_abs: Option<(RatRange, SPoint)> = None;
    let mut exact_values: Vec<Rational> = vec![];
    // integer-valued S = {∞} scans stay in i128 end to end
    let mut int_values: Vec<i128> = vec![];
    let mut arch_values: Vec<RatRange> = vec![];
    let exact_path = f.as_rational().is_some();
    let int_form: Option<IntForm> = f.as_rational().and_then(|g| g.compile_int());
    let int_only = int_form.is_some() && ring.primes().is_empty() && denom_cap == 0;
    let deg = f.degree as u32;

    for pt in enumerate_points(ring, n, height, denom_cap) {
        if pt.is_zero() {
            continue;
        }
        points_scanned += 1;
        if int_only {
            match int_form.as_ref().unwrap().eval_checked(&pt.numer) {
                Some(0) => {
                    if zeros.len() < 64 {
                        zeros.push(pt.clone());
                    }
                }
                Some(v) => {
                    let q = Rational::from_integer(v.into());
                    update_min(&mut min_content, RatRange::exact(q.abs()), &pt);
                    update_min(&mut min_abs, RatRange::exact(q.abs()), &pt);
                    int_values.push(v);
                }
                None => {
                    // overflow: fall back to the exact evaluator for this point
                    let value = f.as_rational().unwrap().evaluate_exact(&pt.to_rationals());
                    if value.is_zero() {
                        if zeros.len() < 64 {
                            zeros.push(pt.clone());
                        }
                        continue;
                    }
                    update_min(&mut min_content, RatRange::exact(value.abs()), &pt);
                    update_min(&mut min_abs, RatRange::exact(value.abs()), &pt);
                    exact_values.push(value);
                }
            }
            continue;
        }
        if exact_path {
            let value = eval_exact_at(f.as_rational().unwrap(), int_form.as_ref(), &pt, deg);
            if value.is_zero() {
                if zeros.len() < 64 {
                    zeros.push(pt.clone());
                }
                continue;
            }
            let cont = content_of_rational(&value, ring);
            update_min(&mut min_content, RatRange::exact(cont), &pt);
            update_min(&mut min_abs, RatRange::exact(value.abs()), &pt);
            exact_values.push(value);
        } else {
            let values = f.evaluate(&pt.to_rationals())?;
            let mut cont_lo = Rational::one();
            let mut cont_hi = Rational::one();
            let mut arch: Option<RatRange> = None;
            let mut indeterminate = false;
            let mut certified_zero = true;
            for (pv, &place) in values.iter().zip(&f.places) {
                let (lo, hi, exact_zero) = match pv {
                    PlaceValue::Rational(q) => {
                        let a = rational_abs(q, place);
                        (a.clone(), a, q.is_zero())
                    }
                    PlaceValue::Real(iv) => {
                        let a = iv.abs();
                        let r = RatRange::from_interval(&a);
                        if place == Place::Archimedean {
                            arch = Some(r.clone());
                        }
                        (r.lo, r.hi, iv.is_exact_zero())
                    }
                    PlaceValue::Padic(x) => match x.normalized_abs() {
                        Ok(a) => (a.clone(), a, x.is_exact_zero()),
                        Err(_) => {
                            indeterminate = true;
                            (Rational::zero(), Rational::one(), false)
                        }
                    },
                };
                if !exact_zero {
                    certified_zero = false;
                }
                cont_lo *= lo;
                cont_hi *= hi;
            }
            if certified_zero {
                if zeros.len() < 64 {
                    zeros.push(pt.clone());
                }
                continue;
            }
            if indeterminate || cont_lo.is_zero() {
                flagged += 1;
                continue;
            }
            let range = RatRange { lo: cont_lo, hi: cont_hi };
            update_min(&mut min_content, range, &pt);
            if let Some(a) = arch {
                if a.lo.is_zero() {
                    flagged += 1;
                } else {
                    update_min(&mut min_abs, a.clone(), &pt);
                    arch_values.push(a);
                }
            }
        }
    }

    let gap_lower = if int_only && exact_values.is_empty() {
        int_gap(&mut int_values)
    } else if exact_path {
        for &v in &int_values {
            exact_values.push(Rational::from_integer(v.into()));
        }
        exact_gap(&mut exact_values, ring)
    } else {
        enclosure_gap(&mut arch_values)
    };

    Ok(ScanResult {
        points_scanned,
        height,
        denom_cap,
        zeros,
        flagged,
        min_content,
        gap_lower,
        min_abs_arch: min_abs,
    })
}

fn eval_exact_at(
    f: &Form<Rational>,
    int_form: Option<&IntForm>,
    pt: &SPoint,
    deg: u32,
) -> Rational {
    if let Some(cf) = int_form {
        if let Some(v) = cf.eval_checked(&pt.numer) {
            return Rational::new(BigInt::from(v), pt.denom.pow(deg));
        }
    }
    f.evaluate_exact(&pt.to_rationals())
}

/// cont(a) for a global rational value: ∏_{v∈S} |a|_v.
pub fn content_of_rational(a: &Rational, ring: &SRing) -> Rational {
    ring.places()
        .into_iter()
        .map(|v| rational_abs(a, v))
        .product()
}

fn update_min(slot: &mut Option<(RatRange, SPoint)>, cand: RatRange, pt: &SPoint) {
    let better = match slot {
        None => true,
        Some((cur, _)) => cand.lo < cur.lo,
    };
    if better {
        *slot = Some((cand, pt.clone()));
    }
}

/// Min over distinct exact values of max_v |Δ|_v, pruned by the sorted
/// archimedean distances.
fn exact_gap(values: &mut Vec<Rational>, ring: &SRing) -> Option<Rational> {
    values.sort();
    values.dedup();
    if values.len() < 2 {
        return None;
    }
    // initialize with the best adjacent pair to make the pruning tight
    let mut best: Option<Rational> = None;
    let full_dist = |a: &Rational, b: &Rational| -> Rational {
        let delta = b - a;
        let mut m = delta.abs();
        for &p in ring.primes() {
            let loc = rational_abs(&delta, Place::Prime(p));
            if loc > m {
                m = loc;
            }
        }
        m
    };
    for w in values.windows(2) {
        let m = full_dist(&w[0], &w[1]);
        if best.as_ref().is_none_or(|b| &m < b) {
            best = Some(m);
        }
    }
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let arch = &values[j] - &values[i];
            if let Some(b) = &best {
                if &arch >= b {
                    break;
                }
            }
            let m = full_dist(&values[i], &values[j]);
            if best.as_ref().is_none_or(|b| &m < b) {
                best = Some(m);
            }
        }
    }
    best
}

/// Certified lower bound on the pairwise distance of enclosed archimedean
/// values. With several places this still lower-bounds the max_v distance.
fn enclosure_gap(values: &mut [RatRange]) -> Option<Rational> {
    if values.len() < 2 {
        return None;
    }
    values.sort_by(|a, b| (&a.lo, &a.hi).cmp(&(&b.lo, &b.hi)));
    let max_width = values
        .iter()
        .map(|r| &r.hi - &r.lo)
        .max()
        .unwrap_or_else(Rational::zero);
    let mut best: Option<Rational> = None;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if let Some(b) = &best {
                if &(&(&values[j].lo - &values[i].lo) - &max_width) >= b {
                    break;
                }
            }
            let lo_gap = &values[j].lo - &values[i].hi;
            let gap = if lo_gap.is_positive() { lo_gap } else { Rational::zero() };
            if best.as_ref().is_none_or(|b| &gap < b) {
                best = Some(gap);
            }
            if best.as_ref().is_some_and(|b| b.is_zero()) {
                return best;
            }
        }
    }
    best
}

// --- rational zero search ------------------------------------------------------

/// Search for a nontrivial rational zero over primitive integer vectors of
/// height ≤ H, walking lexicographically down from (H, …, H). A None result
/// is NONE_FOUND(H), not a proof of anisotropy.
pub fn rational_zero_search(f: &Form<Rational>, height: i64) -> Option<Vec<i64>> {
    let n = f.nvars();
    let int_form = f.compile_int();
    let mut v = vec![height; n];
    loop {
        if gcd_of(&v) == 1 {
            let zero = match &int_form {
                Some(cf) => match cf.eval_checked(&v) {
                    Some(x) => x == 0,
                    None => f.evaluate_exact(&to_rats(&v)).is_zero(),
                },
                None => f.evaluate_exact(&to_rats(&v)).is_zero(),
            };
            if zero {
                return Some(v);
            }
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            if v[pos] > -height {
                v[pos] -= 1;
                for x in v.iter_mut().skip(pos + 1) {
                    *x = height;
                }
                break;
            }
        }
    }
}

fn gcd_of(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x.abs()))
}

fn to_rats(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

/// CSV-ready spectrum rows (point, per-place values, content, flags),
/// rendered deterministically.
pub fn scan_rows(f: &SForm, ring: &SRing, height: i64, denom_cap: u32) -> Result<Vec<String>> {
    let n = f.nvars;
    let mut rows = vec![];
    for pt in enumerate_points(ring, n, height, denom_cap) {
        if pt.is_zero() {
            continue;
        }
        let values = f.evaluate(&pt.to_rationals())?;
        let mut cols = vec![pt.display()];
        let mut flags = vec![];
        let mut cont_lo = Rational::one();
        let mut cont_hi = Rational::one();
        for (pv, &place) in values.iter().zip(&f.places) {
            match pv {
                PlaceValue::Rational(q) => {
                    cols.push(rat_to_string(q));
                    let a = rational_abs(q, place);
                    cont_lo *= &a;
                    cont_hi *= &a;
                }
                PlaceValue::Real(iv) => {
                    cols.push(iv.to_display_string(24));
                    let a = iv.abs();
                    cont_lo *= a.lo().to_rational();
                    cont_hi *= a.hi().to_rational();
                }
                PlaceValue::Padic(x) => {
                    cols.push(x.to_string());
                    match x.normalized_abs() {
                        Ok(a) => {
                            cont_lo *= &a;
                            cont_hi *= a;
                        }
                        Err(_) => flags.push("PRECISION_LOSS"),
                    }
                }
            }
        }
        if cont_lo == cont_hi {
            cols.push(rat_to_string(&cont_lo));
        } else {
            cols.push(format!(
                "[{};{}]",
                rat_to_string(&cont_lo),
                rat_to_string(&cont_hi)
            ));
        }
        cols.push(flags.join("|"));
        rows.push(cols.join(","));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::make_field;
    use crate::exact::rat_int;
    use crate::forms::{norm_form, FormKind, SFormMeta};
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn meta(k: &crate::exact::field::NumberField) -> SFormMeta {
        SFormMeta {
            kind: FormKind::Norm,
            field_coeffs: Some(k.coeff_list()),
            padic_digits: 16,
            precision_bits: 64,
        }
    }

    #[test]
    fn enumeration_counts_and_members() {
        // S = {∞}, n = 2, H = 1: grid {−1,0,1}² (8 nonzero points + origin)
        let ring = SRing::integers();
        let pts: Vec<SPoint> = enumerate_points(&ring, 2, 1, 0).collect();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts.iter().filter(|p| !p.is_zero()).count(), 8);
        // S = {∞}, n = 2, H = 10 → 441 = 21² grid points
        assert_eq!(enumerate_points(&ring, 2, 10, 0).count(), 441);
        // S = {∞,2}, n = 1, H = 1, D = 1 → {0, ±1, ±1/2}
        let ring2 = SRing::new(&[2]).unwrap();
        let mut flat: Vec<Rational> = enumerate_points(&ring2, 1, 1, 1)
            .map(|p| p.to_rationals().remove(0))
            .collect();
        flat.sort();
        let mut expect = vec![q(-1, 1), q(-1, 2), q(0, 1), q(1, 2), q(1, 1)];
        expect.sort();
        assert_eq!(flat, expect);
    }

    #[test]
    fn no_duplicate_points() {
        let ring = SRing::new(&[2, 3]).unwrap();
        let pts: Vec<Vec<Rational>> = enumerate_points(&ring, 2, 3, 1)
            .map(|p| p.to_rationals())
            .collect();
        let mut sorted = pts.clone();
        sorted.sort();
        let before = sorted.len();
        sorted.dedup();
        assert_eq!(before, sorted.len(), "duplicate S-points enumerated");
    }

    #[test]
    fn snorm_and_content_examples() {
        let ring = SRing::new(&[2]).unwrap();
        let w = SVector::global(&ring, &[rat_int(3)]);
        assert_eq!(w.snorm(), rat_int(3));
        assert_eq!(w.content(), rat_int(3));
        let w = SVector::global(&ring, &[q(1, 2)]);
        assert_eq!(w.snorm(), rat_int(2));
        assert_eq!(w.content(), rat_int(1));
        let w2 = w.scale(&rat_int(2));
        assert_eq!(w2.content(), rat_int(1));
    }

    #[test]
    fn content_unit_invariance_random() {
        let ring = SRing::new(&[2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let coords: Vec<Rational> = (0..3)
                .map(|_| q(rng.gen_range(-50i64..=50), [1, 2, 3, 4, 6, 9][rng.gen_range(0..6)]))
                .collect();
            let w = SVector::global(&ring, &coords);
            if w.content().is_zero() {
                continue;
            }
            let xi = SUnit {
                sign: if rng.gen_bool(0.5) { 1 } else { -1 },
                exponents: vec![rng.gen_range(-3..=3), rng.gen_range(-3..=3)],
            };
            let scaled = w.scale(&xi.value(&ring));
            assert_eq!(scaled.content(), w.content());
        }
    }

    #[test]
    fn product_formula_on_sintegers_exhaustive() {
        // every nonzero a ∈ O_S in the box has content ≥ 1, = 1 iff S-unit
        let ring = SRing::new(&[2, 3]).unwrap();
        for pt in enumerate_points(&ring, 1, 50, 3) {
            if pt.is_zero() {
                continue;
            }
            let a = &pt.to_rationals()[0];
            let c = content_of_rational(a, &ring);
            assert!(c >= rat_int(1), "content({a}) = {c} < 1");
            let is_unit = {
                let mut num = a.numer().abs();
                for &p in ring.primes() {
                    let bp = BigInt::from(p);
                    while (&num % &bp).is_zero() {
                        num /= &bp;
                    }
                }
                num.is_one()
            };
            assert_eq!(c.is_one(), is_unit, "a = {a}");
        }
    }

    #[test]
    fn unit_balance_examples() {
        // S = {∞}: only ±1 available
        let ring = SRing::integers();
        let w = SVector::global(&ring, &[rat_int(5), rat_int(-3)]);
        let r = unit_balance(&w, 1, 8).unwrap();
        assert_eq!(r.unit, SUnit::one(&ring));
        assert_eq!(r.achieved, rat_int(5));
        assert!(r.certified);

        // S = {∞,2}, w = global 32: cont = 1 by the product formula; the
        // oracle enumerates e ∈ [−10,10] and finds ‖2^e·32‖_S minimal = 1 at e = −5
        let ring = SRing::new(&[2]).unwrap();
        let w = SVector::global(&ring, &[rat_int(32)]);
        assert_eq!(w.content(), rat_int(1));
        let oracle = (-10..=10)
            .map(|e| {
                let x = rat_int(32) * pow_rat(2, e);
                std::cmp::max(x.abs(), rational_abs(&x, Place::Prime(2)))
            })
            .min()
            .unwrap();
        assert_eq!(oracle, rat_int(1));
        let r = unit_balance(&w, 1, 10).unwrap();
        assert_eq!(r.achieved, oracle);
        assert_eq!(r.unit.exponents, vec![-5]);
        assert!(r.certified);

        // already balanced: ξ = 1 optimal
        let w = SVector::global(&ring, &[rat_int(1)]);
        let r = unit_balance(&w, 1, 6).unwrap();
        assert_eq!(r.unit.exponents, vec![0]);
        assert_eq!(r.achieved, rat_int(1));
    }

    #[test]
    fn unit_balance_zero_content_rejected() {
        let ring = SRing::new(&[2]).unwrap();
        let w = SVector::global(&ring, &[rat_int(0)]);
        assert_eq!(unit_balance(&w, 1, 4).unwrap_err(), Error::ZeroContent);
    }

    #[test]
    fn unit_balance_random_vectors_certified() {
        let ring = SRing::new(&[2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let rand_comp = |rng: &mut ChaCha8Rng| -> Vec<Rational> {
                (0..2)
                    .map(|_| {
                        q(
                            rng.gen_range(-1000i64..=1000),
                            [1, 2, 4, 3, 9, 8, 27][rng.gen_range(0..7)],
                        )
                    })
                    .collect()
            };
            let arch = rand_comp(&mut rng);
            let mut finite = BTreeMap::new();
            finite.insert(2, rand_comp(&mut rng));
            finite.insert(3, rand_comp(&mut rng));
            let w = match SVector::adelic(&ring, arch, finite) {
                Ok(w) => w,
                Err(_) => continue,
            };
            if w.content().is_zero() {
                continue;
            }
            let r = unit_balance(&w, 1, 24).unwrap();
            assert!(r.certified, "κ̂ certificate failed");
        }
    }

    #[test]
    fn scan_finds_gap_and_zeros() {
        let k = make_field(&[-2, 0, 1]).unwrap();
        let f = norm_form(&k);
        let ring = SRing::integers();
        let sf =
            SForm::from_rational_form(f, vec![Place::Archimedean], meta(&k)).unwrap();
        let scan = value_scan(&sf, &ring, 20, 0).unwrap();
        assert!(scan.zeros.is_empty());
        assert!(scan.gap_lower.unwrap() >= rat_int(1));
        let (mc, _) = scan.min_content.unwrap();
        assert_eq!(mc.lo, rat_int(1));

        // hyperbolic form: zero at (1,1) reported
        let mut hyp = Form::zero(2, 2);
        hyp.insert_term(vec![2, 0], rat_int(1));
        hyp.insert_term(vec![0, 2], rat_int(-1));
        let sf = SForm::from_rational_form(hyp, vec![Place::Archimedean], meta(&k)).unwrap();
        let scan = value_scan(&sf, &ring, 5, 0).unwrap();
        assert!(!scan.zeros.is_empty());
        assert!(scan.zeros.iter().any(|z| z.numer.iter().all(|c| c.abs() == 1)));
    }

    #[test]
    fn cubic_scan_min_value_one() {
        let k = make_field(&[-2, 0, 0, 1]).unwrap();
        let f = norm_form(&k);
        let ring = SRing::integers();
        let sf = SForm::from_rational_form(f, vec![Place::Archimedean], meta(&k)).unwrap();
        let scan = value_scan(&sf, &ring, 20, 0).unwrap();
        assert!(scan.zeros.is_empty());
        let (ma, _) = scan.min_abs_arch.unwrap();
        assert_eq!(ma.lo, rat_int(1));
        assert!(scan.gap_lower.unwrap() >= rat_int(1));
    }

    #[test]
    fn sadic_scan_content_at_least_one() {
        // S = {∞,7}, K = ℚ(√2): content(f(z)) ≥ 1 on nonzero S-points
        let k = make_field(&[-2, 0, 1]).unwrap();
        let f = norm_form(&k);
        let ring = SRing::new(&[7]).unwrap();
        let sf = SForm::from_rational_form(
            f,
            vec![Place::Archimedean, Place::Prime(7)],
            meta(&k),
        )
        .unwrap();
        let scan = value_scan(&sf, &ring, 8, 1).unwrap();
        assert!(scan.zeros.is_empty());
        let (mc, _) = scan.min_content.unwrap();
        assert!(mc.lo >= rat_int(1));
    }

    #[test]
    fn zero_search_examples() {
        let k = make_field(&[1, 0, 1]).unwrap();
        assert_eq!(rational_zero_search(&norm_form(&k), 30), None);
        let k = make_field(&[-2, 0, 1]).unwrap();
        assert_eq!(rational_zero_search(&norm_form(&k), 100), None);
        // degenerate x₁x₂ → (1, 0) in the documented order
        let mut f = Form::zero(2, 2);
        f.insert_term(vec![1, 1], rat_int(1));
        assert_eq!(rational_zero_search(&f, 5), Some(vec![1, 0]));
    }

    #[test]
    fn scan_rows_deterministic() {
        let k = make_field(&[-2, 0, 1]).unwrap();
        let f = norm_form(&k);
        let ring = SRing::new(&[7]).unwrap();
        let sf = SForm::from_rational_form(
            f,
            vec![Place::Archimedean, Place::Prime(7)],
            meta(&k),
        )
        .unwrap();
        let a = scan_rows(&sf, &ring, 5, 1).unwrap();
        let b = scan_rows(&sf, &ring, 5, 1).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_empty());
    }
}
