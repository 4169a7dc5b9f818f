//! Real roots of exact univariate polynomials: every rational root is
//! identified exactly, every irrational real root is isolated by a Sturm
//! sequence and narrowed to the requested precision by bisection with
//! guarded Newton acceleration.

use std::fmt;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::algebra::bigfloat::BigFloat;
use crate::algebra::ratpoly::RatPoly;
use crate::algebra::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootError {
    ZeroPolynomial,
}

impl fmt::Display for RootError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootError::ZeroPolynomial => write!(f, "every value is a root of the zero polynomial"),
        }
    }
}

impl std::error::Error for RootError {}

/// One distinct real root. `exact` is set when the root was identified as
/// a rational number, in which case `low == high == value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootInterval {
    pub low: Rational,
    pub high: Rational,
    pub exact: Option<Rational>,
}

impl RootInterval {
    /// Midpoint at the given precision; exact roots convert directly.
    pub fn to_float(&self, precision: u32) -> BigFloat {
        match &self.exact {
            Some(r) => BigFloat::from_rational(r, precision),
            None => {
                let two = Rational::from_integer(2.into());
                let mid = (&self.low + &self.high) / two;
                BigFloat::from_rational(&mid, precision)
            }
        }
    }

    /// Upper bound on the distance from the reported value to the root.
    pub fn error_bound(&self) -> Rational {
        &self.high - &self.low
    }
}

/// All real roots of a polynomial, each exactly once, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSet {
    /// Exactly identified rational roots with their multiplicities in the
    /// input polynomial.
    pub rational_roots: Vec<(Rational, u32)>,
    /// Every distinct real root, rational ones included; intervals are
    /// pairwise disjoint and each contains exactly one root.
    pub real_roots: Vec<RootInterval>,
}

impl RootSet {
    pub fn distinct_count(&self) -> usize {
        self.real_roots.len()
    }

    /// Total root count with multiplicity is not tracked for irrational
    /// roots; rational multiplicity alone is exposed here.
    pub fn rational_multiplicity_sum(&self) -> u32 {
        self.rational_roots.iter().map(|(_, m)| m).sum()
    }
}

/// `den^d * poly(num/den)` for an integer polynomial, `den > 0`. The
/// scaling keeps everything in integers and preserves the sign.
fn scaled_value_at(poly: &[BigInt], num: &BigInt, den: &BigInt) -> BigInt {
    let d = poly.len() - 1;
    let mut acc = poly[d].clone();
    let mut den_pow = BigInt::one();
    for i in (0..d).rev() {
        den_pow *= den;
        acc = acc * num + &poly[i] * &den_pow;
    }
    acc
}

fn sign_at(poly: &[BigInt], num: &BigInt, den: &BigInt) -> i8 {
    match scaled_value_at(poly, num, den).sign() {
        num::bigint::Sign::Minus => -1,
        num::bigint::Sign::NoSign => 0,
        num::bigint::Sign::Plus => 1,
    }
}

fn sign_at_rational(poly: &[BigInt], at: &Rational) -> i8 {
    sign_at(poly, at.numer(), at.denom())
}

/// Sturm chain of a squarefree primitive integer polynomial. Remainders
/// are taken over the rationals and rescaled by positive factors only, so
/// the sign sequence at any point matches the classical chain.
struct SturmChain {
    elems: Vec<Vec<BigInt>>,
}

impl SturmChain {
    fn build(sf: &[BigInt]) -> SturmChain {
        let to_rat = |p: &[BigInt]| {
            RatPoly::new(p.iter().cloned().map(Rational::from_integer).collect())
        };
        let mut elems: Vec<Vec<BigInt>> = Vec::new();
        elems.push(sf.to_vec());
        let first = to_rat(sf);
        let deriv = first.derivative();
        if deriv.is_zero() {
            return SturmChain { elems };
        }
        elems.push(deriv.primitive_integer().unwrap());
        loop {
            let a = to_rat(&elems[elems.len() - 2]);
            let b = to_rat(&elems[elems.len() - 1]);
            let (_, r) = a.divrem(&b);
            if r.is_zero() {
                break;
            }
            elems.push(r.neg().primitive_integer().unwrap());
        }
        SturmChain { elems }
    }

    /// Number of sign changes in the chain evaluated at `at`.
    fn variations_at(&self, at: &Rational) -> usize {
        let mut prev = 0i8;
        let mut count = 0;
        for e in &self.elems {
            let s = sign_at_rational(e, at);
            if s == 0 {
                continue;
            }
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
        count
    }

    /// Distinct roots in the open interval (a, b); neither endpoint may be
    /// a root of the first chain element.
    fn count_between(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }
}

/// Strict upper bound on the magnitude of every root.
fn root_bound(poly: &[BigInt]) -> Rational {
    let lead = poly.last().unwrap().magnitude().clone();
    let mut max = BigInt::zero();
    for c in &poly[..poly.len() - 1] {
        let a = c.abs();
        if a > max {
            max = a;
        }
    }
    Rational::from_integer(2.into())
        + Rational::new(max, BigInt::from_biguint(num::bigint::Sign::Plus, lead))
}

/// Simplest rational strictly inside the open interval (lo, hi): the one
/// with the smallest denominator, ties by smallest numerator. A rational
/// root trapped in a shrinking interval is eventually the simplest value
/// inside it, which is how roots get identified exactly.
fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi);
    if lo.is_negative() && hi.is_positive() {
        return Rational::zero();
    }
    if !lo.is_negative() {
        simplest_positive(lo, hi)
    } else {
        -simplest_positive(&-hi.clone(), &-lo.clone())
    }
}

/// Same, for 0 <= lo < hi.
fn simplest_positive(lo: &Rational, hi: &Rational) -> Rational {
    let next_int = lo.floor() + Rational::one();
    if next_int < *hi {
        return next_int;
    }
    // no integer inside: recurse on the fractional parts via reciprocals
    let fl = lo.floor();
    let a = lo - &fl;
    let b = hi - &fl;
    if a.is_zero() {
        // x in (0, b): 1/x > 1/b, take the smallest admissible integer t
        let t = (Rational::one() / &b).floor() + Rational::one();
        return fl + t.recip();
    }
    let inner = simplest_positive(&(Rational::one() / &b), &(Rational::one() / &a));
    fl + inner.recip()
}

enum IsolateOutcome {
    Done(Vec<(Rational, Rational)>),
    HitRational(Rational),
}

fn isolate(sf: &[BigInt], chain: &SturmChain, bound: &Rational) -> IsolateOutcome {
    let lo = -bound.clone();
    let hi = bound.clone();
    let total = chain.count_between(&lo, &hi);
    let mut intervals = Vec::with_capacity(total);
    let mut stack = vec![(lo, hi, total)];
    let two = Rational::from_integer(2.into());
    while let Some((lo, hi, count)) = stack.pop() {
        match count {
            0 => {}
            1 => intervals.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / &two;
                if sign_at_rational(sf, &mid) == 0 {
                    return IsolateOutcome::HitRational(mid);
                }
                let left = chain.count_between(&lo, &mid);
                stack.push((lo, mid.clone(), left));
                stack.push((mid, hi, count - left));
            }
        }
    }
    intervals.sort_by(|a, b| a.0.cmp(&b.0));
    IsolateOutcome::Done(intervals)
}

enum Refined {
    Exact(Rational),
    Interval(Rational, Rational),
}

enum NewtonStep {
    Exact(Rational),
    Shrunk(Rational, Rational),
    Fail,
}

/// One guarded Newton contraction. Proposes a dyadic enclosure of
/// half-width about `2^guard * width^2` around the Newton iterate from
/// the midpoint and accepts it only when exact sign evaluation confirms
/// the root is inside, so the enclosure invariant cannot be corrupted.
fn newton_contract(
    sf: &[BigInt],
    deriv: &[BigInt],
    lo: &Rational,
    hi: &Rational,
    sign_lo: i8,
    guard: u32,
) -> NewtonStep {
    let two = Rational::from_integer(2.into());
    let w = hi - lo;
    let h = &w * &w * Rational::from_integer(BigInt::one() << guard);
    if h >= &w / &two {
        // not enough contraction to beat plain bisection
        return NewtonStep::Fail;
    }
    let m = (lo + hi) / &two;
    let a = scaled_value_at(sf, m.numer(), m.denom());
    if a.is_zero() {
        return NewtonStep::Exact(m);
    }
    let b = scaled_value_at(deriv, m.numer(), m.denom());
    if b.is_zero() {
        return NewtonStep::Fail;
    }
    // iterate m - f(m)/f'(m) = (num*b - a) / (den*b), rounded onto the
    // dyadic grid 2^-k with 2^-k <= h/4
    let xnum = m.numer() * &b - &a;
    let xden = m.denom() * &b;
    let ratio = (h.denom() * BigInt::from(4u32)).div_floor(h.numer());
    let k = (ratio.bits() + 1) as usize;
    let scale = BigInt::one() << k;
    let t = (&xnum * &scale).div_floor(&xden);
    let clo = Rational::new(&t - BigInt::one(), scale.clone());
    let chi = Rational::new(&t + BigInt::from(2u32), scale);
    if !(&clo > lo && &chi < hi) {
        return NewtonStep::Fail;
    }
    let s_lo = sign_at_rational(sf, &clo);
    if s_lo == 0 {
        return NewtonStep::Exact(clo);
    }
    if s_lo != sign_lo {
        return NewtonStep::Fail;
    }
    let s_hi = sign_at_rational(sf, &chi);
    if s_hi == 0 {
        return NewtonStep::Exact(chi);
    }
    if s_hi == sign_lo {
        return NewtonStep::Fail;
    }
    NewtonStep::Shrunk(clo, chi)
}

/// Shrinks an isolating interval below `target` width, testing the
/// simplest rational inside at every step so rational roots come out
/// exact. Each round first attempts a verified Newton contraction, which
/// roughly doubles the number of correct digits; a rejected contraction
/// costs two sign evaluations and falls back to one bisection step.
fn refine(sf: &[BigInt], mut lo: Rational, mut hi: Rational, target: &Rational) -> Refined {
    let sign_lo = sign_at_rational(sf, &lo);
    debug_assert!(sign_lo != 0 && sign_at_rational(sf, &hi) != 0);
    let deriv: Vec<BigInt> = (1..sf.len()).map(|i| &sf[i] * BigInt::from(i)).collect();
    let two = Rational::from_integer(2.into());
    let mut last_probe: Option<Rational> = None;
    let mut guard: u32 = 6;
    while &hi - &lo > *target {
        let probe = simplest_between(&lo, &hi);
        if last_probe.as_ref() != Some(&probe) {
            if sign_at_rational(sf, &probe) == 0 {
                return Refined::Exact(probe);
            }
            last_probe = Some(probe);
        }
        match newton_contract(sf, &deriv, &lo, &hi, sign_lo, guard) {
            NewtonStep::Exact(r) => return Refined::Exact(r),
            NewtonStep::Shrunk(a, b) => {
                lo = a;
                hi = b;
                continue;
            }
            // widen the acceptance window; curvature exceeded the guard
            NewtonStep::Fail => guard = (guard + 6).min(40),
        }
        let mid = (&lo + &hi) / &two;
        match sign_at_rational(sf, &mid) {
            0 => return Refined::Exact(mid),
            s if s == sign_lo => lo = mid,
            _ => hi = mid,
        }
    }
    // Newton can jump many width scales at once, so give the final tight
    // interval one probe: a rational root with a modest denominator is
    // the simplest rational in any small enough enclosure of itself.
    let probe = simplest_between(&lo, &hi);
    if sign_at_rational(sf, &probe) == 0 {
        return Refined::Exact(probe);
    }
    Refined::Interval(lo, hi)
}

/// Multiplicity of a known root in `q`.
fn multiplicity(q: &RatPoly, root: &Rational) -> u32 {
    let factor = RatPoly::linear_root(root);
    let mut count = 0;
    let mut rest = q.clone();
    while let Some(quot) = rest.div_exact(&factor) {
        count += 1;
        rest = quot;
    }
    count
}

/// Is the rational a perfect square; if so return its square root.
fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(Rational::new(ns, ds))
    } else {
        None
    }
}

/// All real roots of `q` at the given decimal precision.
///
/// Rational roots are reported exactly with multiplicities; the remaining
/// real roots come back as disjoint isolating intervals of width at most
/// `10^-(precision+10)`, each holding exactly one root.
pub fn real_roots(q: &RatPoly, precision: u32) -> Result<RootSet, RootError> {
    if q.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let mut exact: Vec<Rational> = Vec::new();
    let mut numeric: Vec<(Rational, Rational)> = Vec::new();

    // deflate roots at the origin
    let coeffs = q.coeffs();
    let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    if lead_zeros > 0 {
        exact.push(Rational::zero());
    }
    let reduced = RatPoly::new(coeffs[lead_zeros..].to_vec());

    if reduced.degree().unwrap_or(0) >= 1 {
        match reduced.degree().unwrap() {
            1 => {
                exact.push(-reduced.coeff(0) / reduced.coeff(1));
            }
            2 => {
                let (a, b, c) = (reduced.coeff(2), reduced.coeff(1), reduced.coeff(0));
                let disc = &b * &b - Rational::from_integer(4.into()) * &a * &c;
                if disc.is_zero() {
                    exact.push(-&b / (Rational::from_integer(2.into()) * &a));
                } else if disc.is_positive() {
                    match rational_sqrt(&disc) {
                        Some(s) => {
                            let twice_a = Rational::from_integer(2.into()) * &a;
                            exact.push((-&b - &s) / &twice_a);
                            exact.push((-&b + &s) / &twice_a);
                        }
                        None => {
                            isolate_general(&reduced, precision, &mut exact, &mut numeric);
                        }
                    }
                }
            }
            _ => isolate_general(&reduced, precision, &mut exact, &mut numeric),
        }
    }

    exact.sort();
    exact.dedup();
    let rational_roots: Vec<(Rational, u32)> = exact
        .iter()
        .map(|r| (r.clone(), multiplicity(q, r)))
        .collect();
    let mut real_roots: Vec<RootInterval> = rational_roots
        .iter()
        .map(|(r, _)| RootInterval {
            low: r.clone(),
            high: r.clone(),
            exact: Some(r.clone()),
        })
        .collect();
    real_roots.extend(numeric.into_iter().map(|(low, high)| RootInterval {
        low,
        high,
        exact: None,
    }));
    real_roots.sort_by(|a, b| a.low.cmp(&b.low));
    Ok(RootSet {
        rational_roots,
        real_roots,
    })
}

/// Sturm isolation plus refinement for degree >= 2. Appends exact roots
/// and isolating intervals for every real root of `poly`.
fn isolate_general(
    poly: &RatPoly,
    precision: u32,
    exact: &mut Vec<Rational>,
    numeric: &mut Vec<(Rational, Rational)>,
) {
    let target = Rational::new(BigInt::one(), BigInt::from(10u32).pow(precision + 10));
    // squarefree part: same distinct roots, all simple
    let mut sf = poly
        .square_free_part()
        .primitive_integer()
        .expect("nonzero by construction");
    loop {
        if sf.len() <= 1 {
            return;
        }
        if sf.len() == 2 {
            exact.push(Rational::new(-sf[0].clone(), sf[1].clone()));
            return;
        }
        let chain = SturmChain::build(&sf);
        let bound = root_bound(&sf);
        match isolate(&sf, &chain, &bound) {
            IsolateOutcome::HitRational(r) => {
                // divide the root out and restart on the smaller problem
                exact.push(r.clone());
                let rat = RatPoly::new(sf.iter().cloned().map(Rational::from_integer).collect());
                sf = rat
                    .div_exact(&RatPoly::linear_root(&r))
                    .expect("r is a root")
                    .primitive_integer()
                    .unwrap();
            }
            IsolateOutcome::Done(intervals) => {
                for (lo, hi) in intervals {
                    match refine(&sf, lo, hi, &target) {
                        Refined::Exact(r) => exact.push(r),
                        Refined::Interval(lo, hi) => numeric.push((lo, hi)),
                    }
                }
                return;
            }
        }
    }
}
