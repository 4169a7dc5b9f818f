//! Scalar and polynomial arithmetic used everywhere else: exact rationals,
//! multivariate parameter scalars, polynomials in `x`, and tracked-precision
//! floats.

pub mod bigfloat;
pub mod floatpoly;
pub mod param;
pub mod ratpoly;
pub mod xpoly;

use num::bigint::BigInt;
use num::{One, Zero};

/// Exact rational scalar. Construction never produces a zero denominator;
/// values are kept in lowest terms by the underlying representation.
pub type Rational = num::BigRational;

/// Falling factorial `(a)_k = a (a-1) ... (a-k+1)`, with `(a)_0 = 1`.
///
/// For `0 <= a < k` some factor is zero, so the product vanishes; callers
/// rely on that to truncate matrix-entry sums.
pub fn ff(a: i64, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for step in 0..k as i64 {
        let factor = a - step;
        if factor == 0 {
            return BigInt::zero();
        }
        acc *= factor;
    }
    acc
}

/// Convenience constructor for rational constants.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `a` or `a/b` with optional sign into a rational. Rejects zero
/// denominators and anything else the integer parser would reject.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    let (num_text, den_text) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let num: BigInt = num_text
        .parse()
        .map_err(|_| format!("invalid integer `{num_text}`"))?;
    let den: BigInt = match den_text {
        Some(d) => d.parse().map_err(|_| format!("invalid integer `{d}`"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(num, den))
}
