//! Multivariate polynomial scalars over a fixed set of named parameters.
//!
//! A [`ParamSet`] fixes the parameter names for a whole problem; every
//! [`ParamScalar`] carries its set and mixing scalars from different sets is
//! a programming error (checked, panics). Scalars are sparse maps from
//! exponent vectors to nonzero rational coefficients, so equality is
//! structural equality of canonical forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use super::bigfloat::BigFloat;
use super::ratpoly::RatPoly;
use super::Rational;

/// Immutable, cheaply clonable list of parameter names.
#[derive(Clone, Debug)]
pub struct ParamSet {
    names: Arc<Vec<String>>,
}

/// Index of a parameter within its [`ParamSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub(crate) usize);

impl ParamSet {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        ParamSet {
            names: Arc::new(names),
        }
    }

    /// The empty set; scalars over it are plain rationals.
    pub fn empty() -> Self {
        ParamSet {
            names: Arc::new(Vec::new()),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.names.iter().position(|n| n == name).map(Symbol)
    }

    pub fn name(&self, sym: Symbol) -> &str {
        &self.names[sym.0]
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.names.len()).map(Symbol)
    }
}

impl PartialEq for ParamSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl Eq for ParamSet {}

/// Polynomial in the parameters with rational coefficients.
///
/// Invariant: no stored coefficient is zero and every exponent vector has
/// length `set.len()`. The zero scalar is the empty map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamScalar {
    set: ParamSet,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl ParamScalar {
    pub fn zero(set: &ParamSet) -> Self {
        ParamScalar {
            set: set.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(set: &ParamSet) -> Self {
        Self::constant(set, Rational::one())
    }

    pub fn constant(set: &ParamSet, value: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(vec![0; set.len()], value);
        }
        ParamScalar {
            set: set.clone(),
            terms,
        }
    }

    pub fn symbol(set: &ParamSet, sym: Symbol) -> Self {
        assert!(sym.0 < set.len(), "symbol out of range for set");
        let mut exps = vec![0; set.len()];
        exps[sym.0] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, Rational::one());
        ParamScalar {
            set: set.clone(),
            terms,
        }
    }

    pub fn set(&self) -> &ParamSet {
        &self.set
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|r| r.is_one()).unwrap_or(false)
    }

    /// Some(value) when no parameter occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let (exps, coeff) = self.terms.iter().next().unwrap();
            if exps.iter().all(|&e| e == 0) {
                return Some(coeff.clone());
            }
        }
        None
    }

    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn free_symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for exps in self.terms.keys() {
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    out.insert(Symbol(i));
                }
            }
        }
        out
    }

    /// Largest exponent of `sym` over all terms.
    pub fn degree_in(&self, sym: Symbol) -> u32 {
        self.terms
            .keys()
            .map(|exps| exps[sym.0])
            .max()
            .unwrap_or(0)
    }

    fn assert_same_set(&self, other: &ParamScalar) {
        assert!(
            self.set == other.set,
            "parameter scalars from different sets"
        );
    }

    fn insert_term(terms: &mut BTreeMap<Vec<u32>, Rational>, exps: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(exps) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + coeff;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &ParamScalar) -> ParamScalar {
        self.assert_same_set(other);
        let mut terms = self.terms.clone();
        for (exps, coeff) in &other.terms {
            Self::insert_term(&mut terms, exps.clone(), coeff.clone());
        }
        ParamScalar {
            set: self.set.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> ParamScalar {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), -c.clone()))
            .collect();
        ParamScalar {
            set: self.set.clone(),
            terms,
        }
    }

    pub fn sub(&self, other: &ParamScalar) -> ParamScalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ParamScalar) -> ParamScalar {
        self.assert_same_set(other);
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                Self::insert_term(&mut terms, exps, ca * cb);
            }
        }
        ParamScalar {
            set: self.set.clone(),
            terms,
        }
    }

    pub fn mul_rational(&self, factor: &Rational) -> ParamScalar {
        if factor.is_zero() {
            return ParamScalar::zero(&self.set);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c * factor))
            .collect();
        ParamScalar {
            set: self.set.clone(),
            terms,
        }
    }

    pub fn pow(&self, exp: u32) -> ParamScalar {
        let mut acc = ParamScalar::one(&self.set);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes rational values for a subset of the parameters. Unbound
    /// parameters stay symbolic, so binding is a ring homomorphism.
    pub fn bind(&self, bindings: &BTreeMap<Symbol, Rational>) -> ParamScalar {
        if bindings.is_empty() || self.terms.is_empty() {
            return self.clone();
        }
        let mut terms = BTreeMap::new();
        for (exps, coeff) in &self.terms {
            let mut value = coeff.clone();
            let mut residual = exps.clone();
            for (sym, binding) in bindings {
                let e = exps[sym.0];
                if e > 0 {
                    value *= pow_rational(binding, e);
                    residual[sym.0] = 0;
                }
            }
            Self::insert_term(&mut terms, residual, value);
        }
        ParamScalar {
            set: self.set.clone(),
            terms,
        }
    }

    /// Evaluates with every free symbol bound to a float. Errors with the
    /// offending names if a symbol is missing from the map.
    pub fn eval_float(
        &self,
        bindings: &BTreeMap<Symbol, BigFloat>,
        precision: u32,
    ) -> Result<BigFloat, Vec<String>> {
        let missing: Vec<String> = self
            .free_symbols()
            .into_iter()
            .filter(|s| !bindings.contains_key(s))
            .map(|s| self.set.name(s).to_string())
            .collect();
        if !missing.is_empty() {
            return Err(missing);
        }
        let mut acc = BigFloat::zero(precision);
        for (exps, coeff) in &self.terms {
            let mut term = BigFloat::from_rational(coeff, precision);
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&bindings[&Symbol(i)].pow_u32(e));
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Views the scalar as a univariate polynomial in `sym`. Errors with the
    /// names of any other parameters that occur.
    pub fn univariate_in(&self, sym: Symbol) -> Result<RatPoly, Vec<String>> {
        let extra: Vec<String> = self
            .free_symbols()
            .into_iter()
            .filter(|&s| s != sym)
            .map(|s| self.set.name(s).to_string())
            .collect();
        if !extra.is_empty() {
            return Err(extra);
        }
        let mut coeffs = vec![Rational::zero(); self.degree_in(sym) as usize + 1];
        for (exps, coeff) in &self.terms {
            coeffs[exps[sym.0] as usize] += coeff;
        }
        Ok(RatPoly::new(coeffs))
    }

    fn render_term(&self, exps: &[u32], coeff: &Rational) -> String {
        let mut parts = Vec::new();
        let abs = coeff.abs();
        let symbolic = exps.iter().any(|&e| e > 0);
        if !abs.is_one() || !symbolic {
            parts.push(abs.to_string());
        }
        for (i, &e) in exps.iter().enumerate() {
            if e == 1 {
                parts.push(self.set.name(Symbol(i)).to_string());
            } else if e > 1 {
                parts.push(format!("{}^{}", self.set.name(Symbol(i)), e));
            }
        }
        parts.join("*")
    }
}

fn pow_rational(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

impl fmt::Display for ParamScalar {
    /// Renders in the expression grammar: terms in a fixed canonical order,
    /// joined with explicit signs, `*` between factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, coeff) in self.terms.iter().rev() {
            let body = self.render_term(exps, coeff);
            if first {
                if coeff.is_negative() {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else if coeff.is_negative() {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}
