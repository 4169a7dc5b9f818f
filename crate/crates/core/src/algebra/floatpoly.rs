//! Dense univariate polynomials with tracked-precision float coefficients.
//! Used for solutions and residuals along numeric parameter candidates.

use std::fmt;

use super::bigfloat::BigFloat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloatPoly {
    coeffs: Vec<BigFloat>,
    precision: u32,
}

impl FloatPoly {
    /// Exact zero coefficients at the top are trimmed; tiny nonzero ones
    /// are kept, degree decisions belong to the caller's tolerance.
    pub fn new(mut coeffs: Vec<BigFloat>, precision: u32) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        FloatPoly { coeffs, precision }
    }

    pub fn zero(precision: u32) -> Self {
        FloatPoly {
            coeffs: Vec::new(),
            precision,
        }
    }

    pub fn precision(&self) -> u32 {
        self.precision
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

    pub fn coeff(&self, power: usize) -> BigFloat {
        self.coeffs
            .get(power)
            .cloned()
            .unwrap_or_else(|| BigFloat::zero(self.precision))
    }

    pub fn coeffs(&self) -> &[BigFloat] {
        &self.coeffs
    }

    pub fn add(&self, other: &FloatPoly) -> FloatPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for i in 0..len {
            coeffs.push(self.coeff(i).add(&other.coeff(i)));
        }
        FloatPoly::new(coeffs, self.precision.max(other.precision))
    }

    pub fn mul(&self, other: &FloatPoly) -> FloatPoly {
        if self.is_zero() || other.is_zero() {
            return FloatPoly::zero(self.precision.max(other.precision));
        }
        let precision = self.precision.max(other.precision);
        let mut coeffs = vec![BigFloat::zero(precision); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        FloatPoly::new(coeffs, precision)
    }

    pub fn scale(&self, factor: &BigFloat) -> FloatPoly {
        FloatPoly::new(
            self.coeffs.iter().map(|c| c.mul(factor)).collect(),
            self.precision,
        )
    }

    pub fn derivative(&self, times: u32) -> FloatPoly {
        let mut current = self.clone();
        for _ in 0..times {
            if current.coeffs.len() <= 1 {
                return FloatPoly::zero(self.precision);
            }
            let coeffs = current
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(p, c)| c.mul(&BigFloat::from_i64(p as i64, self.precision)))
                .collect();
            current = FloatPoly::new(coeffs, self.precision);
        }
        current
    }

    /// Largest coefficient magnitude, zero for the zero polynomial.
    pub fn max_abs(&self) -> BigFloat {
        let mut best = BigFloat::zero(self.precision);
        for c in &self.coeffs {
            let a = c.abs();
            if a > best {
                best = a;
            }
        }
        best
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> FloatPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.clone();
                FloatPoly::new(
                    self.coeffs.iter().map(|c| c.div(&inv)).collect(),
                    self.precision,
                )
            }
        }
    }
}

impl fmt::Display for FloatPoly {
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
            let body = match power {
                0 => c.abs().to_decimal_string(),
                1 => format!("{}*x", c.abs().to_decimal_string()),
                p => format!("{}*x^{p}", c.abs().to_decimal_string()),
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
