//! Dense univariate polynomials over the rationals. Used for determinant
//! conditions in a single parameter and for root isolation support.

use std::fmt;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use super::Rational;

/// Invariant: the last stored coefficient is nonzero (zero polynomial is
/// the empty vector). Index equals power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn constant(value: Rational) -> Self {
        Self::new(vec![value])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `x - root`
    pub fn linear_root(root: &Rational) -> Self {
        Self::new(vec![-root.clone(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, power: usize) -> Rational {
        self.coeffs.get(power).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for i in 0..len {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        RatPoly::new(coeffs)
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RatPoly::new(coeffs)
    }

    pub fn scale(&self, factor: &Rational) -> RatPoly {
        if factor.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(p, c)| c * Rational::from_integer(p.into()))
            .collect();
        RatPoly::new(coeffs)
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn divrem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dlead = divisor.leading().unwrap().clone();
        let ddeg = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return (RatPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - ddeg];
        for top in (ddeg..rem.len()).rev() {
            let factor = &rem[top] / &dlead;
            if factor.is_zero() {
                continue;
            }
            quot[top - ddeg] = factor.clone();
            for (k, dc) in divisor.coeffs.iter().enumerate() {
                let idx = top - ddeg + k;
                let delta = dc * &factor;
                rem[idx] -= delta;
            }
        }
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    /// Some(quotient) when the division is exact.
    pub fn div_exact(&self, divisor: &RatPoly) -> Option<RatPoly> {
        let (q, r) = self.divrem(divisor);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic greatest common divisor (1 for coprime inputs, 0 only when
    /// both inputs are 0). Remainders are made primitive at each step to
    /// keep coefficient growth in check.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone().into_primitive();
        let mut b = other.clone().into_primitive();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.into_primitive();
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading().unwrap().clone();
        a.scale(&lead.recip())
    }

    /// Same roots, all simple: `self / gcd(self, self')`.
    pub fn square_free_part(&self) -> RatPoly {
        if self.degree().unwrap_or(0) <= 1 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.div_exact(&g)
            .expect("gcd divides the polynomial")
            .into_primitive()
    }

    fn into_primitive(self) -> RatPoly {
        match self.primitive_integer() {
            Some(ints) => RatPoly::new(ints.into_iter().map(Rational::from_integer).collect()),
            None => self,
        }
    }

    /// Integer coefficient vector after clearing denominators and dividing
    /// by the content. The sign of the leading coefficient is preserved.
    /// `None` for the zero polynomial.
    pub fn primitive_integer(&self) -> Option<Vec<BigInt>> {
        if self.is_zero() {
            return None;
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        Some(ints.into_iter().map(|v| v / &content).collect())
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for power in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[power];
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            let body = match (power, abs.is_one()) {
                (0, _) => abs.to_string(),
                (1, true) => "x".to_string(),
                (1, false) => format!("{abs}*x"),
                (p, true) => format!("x^{p}"),
                (p, false) => format!("{abs}*x^{p}"),
            };
            if first {
                write!(f, "{}{body}", if c.is_negative() { "-" } else { "" })?;
                first = false;
            } else {
                write!(f, " {} {body}", if c.is_negative() { "-" } else { "+" })?;
            }
        }
        Ok(())
    }
}
