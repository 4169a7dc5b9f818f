//! Arbitrary-precision decimal floats with an explicit precision tag.
//!
//! Every value records the number of significant decimal digits it is good
//! for; arithmetic rounds results back to the operands' precision (plus
//! guard digits internally), so rounding error stays within one unit in the
//! last tracked place per operation.

use std::cmp::Ordering;
use std::fmt;
use std::num::NonZeroU64;
use std::str::FromStr;

use bigdecimal::num_bigint as bd_bigint;
use bigdecimal::{BigDecimal, Context, RoundingMode};
use num::bigint::BigInt;
use num::{ToPrimitive, Zero};

use super::Rational;

const GUARD_DIGITS: u32 = 10;

/// Decimal float carrying its significant-digit budget.
#[derive(Clone, Debug)]
pub struct BigFloat {
    value: BigDecimal,
    precision: u32,
}

fn to_bd_int(v: &BigInt) -> bd_bigint::BigInt {
    bd_bigint::BigInt::from_signed_bytes_le(&v.to_signed_bytes_le())
}

fn round_to(value: BigDecimal, precision: u32) -> BigDecimal {
    let digits = NonZeroU64::new(precision.max(1) as u64).unwrap();
    value.with_precision_round(digits, RoundingMode::HalfEven)
}

/// Truncated decimal expansion of `num/den` carrying at least `digits`
/// significant digits. Exact when the quotient terminates within range.
fn div_bigint_at(num: &BigInt, den: &BigInt, digits: u32) -> BigDecimal {
    assert!(!den.is_zero(), "division by zero");
    if num.is_zero() {
        return BigDecimal::zero();
    }
    let num_digits = (num.bits() as f64 * 0.30103) as i64;
    let den_digits = (den.bits() as f64 * 0.30103) as i64;
    let shift = (digits as i64 + den_digits - num_digits + 2).max(0) as u64;
    let scaled = num * BigInt::from(10u32).pow(shift as u32);
    let quot = scaled / den;
    BigDecimal::new(to_bd_int(&quot), shift as i64)
}

impl BigFloat {
    pub fn zero(precision: u32) -> Self {
        BigFloat {
            value: BigDecimal::zero(),
            precision,
        }
    }

    pub fn from_bigint(v: &BigInt, precision: u32) -> Self {
        BigFloat {
            value: round_to(BigDecimal::new(to_bd_int(v), 0), precision),
            precision,
        }
    }

    pub fn from_i64(v: i64, precision: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), precision)
    }

    pub fn from_rational(r: &Rational, precision: u32) -> Self {
        let raw = div_bigint_at(r.numer(), r.denom(), precision + GUARD_DIGITS);
        BigFloat {
            value: round_to(raw, precision),
            precision,
        }
    }

    /// Exact power of ten, `10^e`.
    pub fn pow10(e: i64, precision: u32) -> Self {
        BigFloat {
            value: BigDecimal::new(bd_bigint::BigInt::from(1), -e),
            precision,
        }
    }

    pub fn parse(text: &str, precision: u32) -> Option<Self> {
        let value = BigDecimal::from_str(text).ok()?;
        Some(BigFloat { value, precision })
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.value.sign() == bd_bigint::Sign::Minus
    }

    pub fn abs(&self) -> BigFloat {
        BigFloat {
            value: self.value.abs(),
            precision: self.precision,
        }
    }

    pub fn neg(&self) -> BigFloat {
        BigFloat {
            value: -self.value.clone(),
            precision: self.precision,
        }
    }

    /// Re-tags (and rounds) to a new precision.
    pub fn with_precision(&self, precision: u32) -> BigFloat {
        BigFloat {
            value: round_to(self.value.clone(), precision),
            precision,
        }
    }

    fn join(&self, other: &BigFloat) -> u32 {
        self.precision.max(other.precision)
    }

    pub fn add(&self, other: &BigFloat) -> BigFloat {
        let precision = self.join(other);
        BigFloat {
            value: round_to(&self.value + &other.value, precision),
            precision,
        }
    }

    pub fn sub(&self, other: &BigFloat) -> BigFloat {
        let precision = self.join(other);
        BigFloat {
            value: round_to(&self.value - &other.value, precision),
            precision,
        }
    }

    pub fn mul(&self, other: &BigFloat) -> BigFloat {
        let precision = self.join(other);
        BigFloat {
            value: round_to(&self.value * &other.value, precision),
            precision,
        }
    }

    pub fn div(&self, other: &BigFloat) -> BigFloat {
        assert!(!other.is_zero(), "division by zero");
        let precision = self.join(other);
        if self.is_zero() {
            return BigFloat::zero(precision);
        }
        let (an, ae) = self.value.as_bigint_and_exponent();
        let (bn, be) = other.value.as_bigint_and_exponent();
        let an = BigInt::from_signed_bytes_le(&an.to_signed_bytes_le());
        let bn = BigInt::from_signed_bytes_le(&bn.to_signed_bytes_le());
        let raw = div_bigint_at(&an, &bn, precision + GUARD_DIGITS);
        let (qn, qe) = raw.as_bigint_and_exponent();
        let value = round_to(BigDecimal::new(qn, qe + ae - be), precision);
        BigFloat { value, precision }
    }

    pub fn pow_u32(&self, exp: u32) -> BigFloat {
        let work = self.precision + GUARD_DIGITS;
        let mut acc = BigDecimal::from(1u32);
        let mut base = self.value.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = round_to(acc * &base, work);
            }
            e >>= 1;
            if e > 0 {
                base = round_to(&base * &base, work);
            }
        }
        BigFloat {
            value: round_to(acc, self.precision),
            precision: self.precision,
        }
    }

    /// Square root; `None` for negative input.
    pub fn sqrt(&self) -> Option<BigFloat> {
        let ctx = Context::default()
            .with_precision(NonZeroU64::new((self.precision + GUARD_DIGITS) as u64).unwrap());
        let root = self.value.sqrt_with_context(&ctx)?;
        Some(BigFloat {
            value: round_to(root, self.precision),
            precision: self.precision,
        })
    }

    pub fn cbrt(&self) -> BigFloat {
        let ctx = Context::default()
            .with_precision(NonZeroU64::new((self.precision + GUARD_DIGITS) as u64).unwrap());
        BigFloat {
            value: round_to(self.value.cbrt_with_context(&ctx), self.precision),
            precision: self.precision,
        }
    }

    /// k-th real root via an integer root on the scaled mantissa. `None`
    /// for even k on negative input.
    pub fn nth_root(&self, k: u32) -> Option<BigFloat> {
        assert!(k >= 1);
        if self.is_negative() && k % 2 == 0 {
            return None;
        }
        match k {
            1 => return Some(self.clone()),
            2 => return self.sqrt(),
            3 => return Some(self.cbrt()),
            _ => {}
        }
        if self.is_zero() {
            return Some(BigFloat::zero(self.precision));
        }
        let digits = (self.precision + GUARD_DIGITS) as i64;
        // self = n * 10^(-e); pad n to at least k*digits digits with the
        // padded exponent e + s divisible by k, then take the integer
        // k-th root of the mantissa.
        let (n, e) = self.value.as_bigint_and_exponent();
        let n = BigInt::from_signed_bytes_le(&n.to_signed_bytes_le());
        let n_digits = n.magnitude().to_string().len() as i64;
        let mut s = (k as i64 * digits - n_digits).max(0);
        let rem = (e + s).rem_euclid(k as i64);
        if rem != 0 {
            s += k as i64 - rem;
        }
        let scaled = n * BigInt::from(10u32).pow(s as u32);
        let root = scaled.nth_root(k);
        let out_scale = (e + s) / k as i64;
        let value = BigDecimal::new(to_bd_int(&root), out_scale);
        Some(BigFloat {
            value: round_to(value, self.precision),
            precision: self.precision,
        })
    }

    /// Decimal rendering at the tracked precision, trailing zeros trimmed.
    pub fn to_decimal_string(&self) -> String {
        if self.value.is_zero() {
            return "0.0".to_string();
        }
        let rounded = round_to(self.value.clone(), self.precision).normalized();
        let mut out = rounded.to_plain_string();
        if !out.contains('.') {
            out.push_str(".0");
        }
        out
    }

    /// Nearest f64, for diagnostics only.
    pub fn to_f64_lossy(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for BigFloat {}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}
