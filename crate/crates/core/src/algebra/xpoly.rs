//! Polynomials in the independent variable `x` whose coefficients are
//! [`ParamScalar`]s.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Signed};

use super::param::{ParamScalar, ParamSet, Symbol};
use super::Rational;

/// Degree with a dedicated value for the zero polynomial, so that
/// `deg(p*q) = deg p + deg q` holds without exceptions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl std::ops::Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Dense polynomial in `x`. Invariant: the last stored coefficient is
/// nonzero; the zero polynomial stores nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XPoly {
    set: ParamSet,
    coeffs: Vec<ParamScalar>,
}

impl XPoly {
    pub fn new(set: &ParamSet, mut coeffs: Vec<ParamScalar>) -> Self {
        for c in &coeffs {
            assert!(c.set() == set, "coefficient from a different parameter set");
        }
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        XPoly {
            set: set.clone(),
            coeffs,
        }
    }

    pub fn zero(set: &ParamSet) -> Self {
        XPoly {
            set: set.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(set: &ParamSet, value: ParamScalar) -> Self {
        Self::new(set, vec![value])
    }

    pub fn rational(set: &ParamSet, value: Rational) -> Self {
        Self::constant(set, ParamScalar::constant(set, value))
    }

    /// The monomial `value * x^power`.
    pub fn monomial(set: &ParamSet, value: ParamScalar, power: usize) -> Self {
        let mut coeffs = vec![ParamScalar::zero(set); power];
        coeffs.push(value);
        Self::new(set, coeffs)
    }

    pub fn x(set: &ParamSet) -> Self {
        Self::monomial(set, ParamScalar::one(set), 1)
    }

    pub fn set(&self) -> &ParamSet {
        &self.set
    }

    pub fn degree(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::NegInf
        } else {
            Degree::Finite(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^power`, zero beyond the stored range.
    pub fn coeff(&self, power: usize) -> ParamScalar {
        self.coeffs
            .get(power)
            .cloned()
            .unwrap_or_else(|| ParamScalar::zero(&self.set))
    }

    pub fn coeffs(&self) -> &[ParamScalar] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&ParamScalar> {
        self.coeffs.last()
    }

    fn assert_same_set(&self, other: &XPoly) {
        assert!(self.set == other.set, "polynomials over different sets");
    }

    pub fn add(&self, other: &XPoly) -> XPoly {
        self.assert_same_set(other);
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for i in 0..len {
            coeffs.push(self.coeff(i).add(&other.coeff(i)));
        }
        XPoly::new(&self.set, coeffs)
    }

    pub fn neg(&self) -> XPoly {
        XPoly {
            set: self.set.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &XPoly) -> XPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &XPoly) -> XPoly {
        self.assert_same_set(other);
        if self.is_zero() || other.is_zero() {
            return XPoly::zero(&self.set);
        }
        let mut coeffs =
            vec![ParamScalar::zero(&self.set); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        XPoly::new(&self.set, coeffs)
    }

    pub fn scale(&self, factor: &ParamScalar) -> XPoly {
        let coeffs = self.coeffs.iter().map(|c| c.mul(factor)).collect();
        XPoly::new(&self.set, coeffs)
    }

    pub fn scale_rational(&self, factor: &Rational) -> XPoly {
        let coeffs = self.coeffs.iter().map(|c| c.mul_rational(factor)).collect();
        XPoly::new(&self.set, coeffs)
    }

    pub fn pow(&self, exp: u32) -> XPoly {
        let mut acc = XPoly::rational(&self.set, Rational::one());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// `times`-fold derivative with respect to `x`.
    pub fn derivative(&self, times: u32) -> XPoly {
        let mut current = self.clone();
        for _ in 0..times {
            if current.coeffs.len() <= 1 {
                return XPoly::zero(&self.set);
            }
            let mut coeffs = Vec::with_capacity(current.coeffs.len() - 1);
            for (power, c) in current.coeffs.iter().enumerate().skip(1) {
                coeffs.push(c.mul_rational(&Rational::from_integer(power.into())));
            }
            current = XPoly::new(&self.set, coeffs);
        }
        current
    }

    /// Binds parameters in every coefficient.
    pub fn bind(&self, bindings: &BTreeMap<Symbol, Rational>) -> XPoly {
        let coeffs = self.coeffs.iter().map(|c| c.bind(bindings)).collect();
        XPoly::new(&self.set, coeffs)
    }

    pub fn free_symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for c in &self.coeffs {
            out.extend(c.free_symbols());
        }
        out
    }

    /// Constant coefficients as plain rationals, highest degree last.
    /// `None` if any coefficient still involves a parameter.
    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_rational()).collect()
    }

    fn render_coeff_power(&self, coeff: &ParamScalar, power: usize) -> (bool, String) {
        // Returns (negative, body) with the sign stripped when the
        // coefficient is a plain rational or x carries the value alone.
        let power_part = match power {
            0 => None,
            1 => Some("x".to_string()),
            p => Some(format!("x^{p}")),
        };
        if let Some(r) = coeff.as_rational() {
            let negative = r.is_negative();
            let abs = r.abs();
            let body = match (&power_part, abs.is_one()) {
                (Some(p), true) => p.clone(),
                (Some(p), false) => format!("{abs}*{p}"),
                (None, _) => abs.to_string(),
            };
            (negative, body)
        } else {
            let rendered = coeff.to_string();
            let compound = rendered.contains(" + ") || rendered.contains(" - ");
            let wrapped = if compound {
                format!("({rendered})")
            } else if let Some(stripped) = rendered.strip_prefix('-') {
                // single negative term: pull the sign out
                return match power_part {
                    Some(p) => (true, format!("{stripped}*{p}")),
                    None => (true, stripped.to_string()),
                };
            } else {
                rendered
            };
            match power_part {
                Some(p) => (false, format!("{wrapped}*{p}")),
                None => (false, wrapped),
            }
        }
    }
}

impl fmt::Display for XPoly {
    /// Renders in the expression grammar, highest power first, so the
    /// output parses back to the same polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for power in (0..self.coeffs.len()).rev() {
            let coeff = &self.coeffs[power];
            if coeff.is_zero() {
                continue;
            }
            let (negative, body) = self.render_coeff_power(coeff, power);
            if first {
                if negative {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else if negative {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}
