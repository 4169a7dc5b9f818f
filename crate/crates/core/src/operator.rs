//! Differential operators with polynomial coefficients and their matrix
//! action on polynomial spaces.
//!
//! For `L = sum_k p_k(x) D^k` the shift order `m` is the smallest number of
//! extra derivatives that makes the operator drop degrees: substituting
//! `y = z^(m)` produces `H = sum_k a_k(x) D^k` with `deg a_k <= k`, whose
//! matrix on polynomials of bounded degree is upper triangular. Solutions of
//! degree exactly `n` then correspond to kernel vectors of that matrix with
//! a nonzero trailing coordinate.

use std::collections::BTreeSet;
use std::fmt;

use num::bigint::BigInt;

use crate::algebra::param::{ParamScalar, ParamSet, Symbol};
use crate::algebra::xpoly::{Degree, XPoly};
use crate::algebra::{ff, Rational};
use crate::linalg::ParamMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorError {
    NoCoefficients,
    ZeroLeadingCoefficient { order: usize },
}

impl fmt::Display for OperatorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorError::NoCoefficients => write!(f, "operator needs at least one coefficient"),
            OperatorError::ZeroLeadingCoefficient { order } => {
                write!(f, "leading coefficient p[{order}] is zero")
            }
        }
    }
}

impl std::error::Error for OperatorError {}

/// `L = p_0 + p_1 D + ... + p_N D^N` with `p_N` nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    set: ParamSet,
    coeffs: Vec<XPoly>,
}

impl DiffOperator {
    /// `coeffs[k]` multiplies the k-th derivative. The top coefficient must
    /// be nonzero so the order is meaningful.
    pub fn new(set: &ParamSet, coeffs: Vec<XPoly>) -> Result<Self, OperatorError> {
        if coeffs.is_empty() {
            return Err(OperatorError::NoCoefficients);
        }
        for c in &coeffs {
            assert!(c.set() == set, "coefficient over a different parameter set");
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(OperatorError::ZeroLeadingCoefficient {
                order: coeffs.len() - 1,
            });
        }
        Ok(DiffOperator {
            set: set.clone(),
            coeffs,
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn set(&self) -> &ParamSet {
        &self.set
    }

    pub fn coeff(&self, k: usize) -> XPoly {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| XPoly::zero(&self.set))
    }

    pub fn coeffs(&self) -> &[XPoly] {
        &self.coeffs
    }

    pub fn free_symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for c in &self.coeffs {
            out.extend(c.free_symbols());
        }
        out
    }

    /// `L y`, expanded exactly.
    pub fn apply(&self, y: &XPoly) -> XPoly {
        let mut acc = XPoly::zero(&self.set);
        for (k, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let dy = y.derivative(k as u32);
            if dy.is_zero() {
                continue;
            }
            acc = acc.add(&p.mul(&dy));
        }
        acc
    }

    /// Smallest `m >= 0` with `deg p_k <= k + m` for every k. Guarantees
    /// the lifted operator maps degree-d polynomials into degree <= d.
    pub fn shift_order(&self) -> usize {
        let mut m = 0isize;
        for (k, p) in self.coeffs.iter().enumerate() {
            if let Degree::Finite(d) = p.degree() {
                m = m.max(d as isize - k as isize);
            }
        }
        m.max(0) as usize
    }

    /// Substitutes `y = z^(m)`: coefficient of `D^k` in the lifted operator
    /// is `p_{k-m}` (zero for `k < m`).
    pub fn lift(&self) -> LiftedOperator {
        let m = self.shift_order();
        let mut coeffs = vec![XPoly::zero(&self.set); m];
        coeffs.extend(self.coeffs.iter().cloned());
        LiftedOperator {
            set: self.set.clone(),
            shift: m,
            source_order: self.order(),
            coeffs,
        }
    }
}

/// The shifted operator `H = sum_k a_k D^k`, `deg a_k <= k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedOperator {
    set: ParamSet,
    shift: usize,
    source_order: usize,
    coeffs: Vec<XPoly>,
}

impl LiftedOperator {
    pub fn set(&self) -> &ParamSet {
        &self.set
    }

    /// The shift order m of the source operator.
    pub fn shift(&self) -> usize {
        self.shift
    }

    /// Order of the source operator (N).
    pub fn source_order(&self) -> usize {
        self.source_order
    }

    /// Highest derivative order, m + N.
    pub fn max_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn a(&self, k: usize) -> XPoly {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| XPoly::zero(&self.set))
    }

    /// View as a plain operator acting on z; useful for definitional
    /// cross-checks of the matrix columns.
    pub fn to_operator(&self) -> DiffOperator {
        DiffOperator::new(&self.set, self.coeffs.clone())
            .expect("lifted operator keeps the nonzero top coefficient")
    }

    /// Diagonal symbol of the triangular action:
    /// `lambda_n = sum_k a_{k,k} (n)(n-1)...(n-k+1)`.
    pub fn eigenvalue_lambda(&self, n: usize) -> ParamScalar {
        let mut acc = ParamScalar::zero(&self.set);
        for (k, a) in self.coeffs.iter().enumerate() {
            let diag = a.coeff(k);
            if diag.is_zero() {
                continue;
            }
            let fall = ff(n as i64, k as u32);
            acc = acc.add(&diag.mul_rational(&Rational::from_integer(fall)));
        }
        acc
    }

    /// Matrix of the lifted operator on polynomials of degree <= n, in the
    /// monomial basis: column j holds the coefficients of `H(x^j)`.
    pub fn build_a(&self, n: usize) -> TriMatrix {
        let dim = n + 1;
        let matrix = ParamMatrix::from_fn(&self.set, dim, dim, |i, j| {
            if i > j {
                return ParamScalar::zero(&self.set);
            }
            let mut acc = ParamScalar::zero(&self.set);
            for (k, a) in self.coeffs.iter().enumerate() {
                if k > j {
                    break;
                }
                // D^k x^j = (j)_k x^{j-k}; the x^i coefficient of a_k x^{j-k}
                // needs the x^{k+i-j} coefficient of a_k.
                if k + i < j {
                    continue;
                }
                let c = a.coeff(k + i - j);
                if c.is_zero() {
                    continue;
                }
                let fall = ff(j as i64, k as u32);
                acc = acc.add(&c.mul_rational(&Rational::from_integer(fall)));
            }
            acc
        });
        TriMatrix {
            shift: self.shift,
            matrix,
        }
    }
}

/// Upper-triangular action matrix `A_n` of a lifted operator. The first
/// `shift` columns are zero and the diagonal entries are the eigenvalues
/// `lambda_0 .. lambda_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriMatrix {
    shift: usize,
    matrix: ParamMatrix,
}

impl TriMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn entry(&self, i: usize, j: usize) -> &ParamScalar {
        self.matrix.entry(i, j)
    }

    pub fn matrix(&self) -> &ParamMatrix {
        &self.matrix
    }

    /// Drops the `shift` guaranteed-zero leading columns, giving the
    /// rectangular existence matrix `M_n` for degree `n = dim - 1 - shift`.
    pub fn drop_zero_columns(&self) -> ParamMatrix {
        let rows = self.matrix.rows();
        let cols = self.matrix.cols() - self.shift;
        ParamMatrix::from_fn(self.matrix.set(), rows, cols, |i, j| {
            self.matrix.entry(i, j + self.shift).clone()
        })
    }
}

/// The rank-condition pair for degree `n`: `M_n` is `(n+m+1) x (n+1)` and
/// `M'_n` is `M_n` without its last column. A solution of degree exactly
/// `n` exists iff both have the same rank.
pub fn build_m(op: &DiffOperator, n: usize) -> (ParamMatrix, ParamMatrix) {
    let m = op.shift_order();
    let set = op.set().clone();
    let rows = n + m + 1;
    let cols = n + 1;
    let matrix = ParamMatrix::from_fn(&set, rows, cols, |i, j| {
        let mut acc = ParamScalar::zero(&set);
        for t in 0..=op.order().min(j) {
            // x^i coefficient of p_t * D^{t+m} x^{j+m}
            if t + i < j {
                continue;
            }
            let h = t + i - j;
            let c = op.coeff(t).coeff(h);
            if c.is_zero() {
                continue;
            }
            let fall = ff((j + m) as i64, (t + m) as u32);
            if num::Zero::is_zero(&fall) {
                continue;
            }
            acc = acc.add(&c.mul_rational(&Rational::from_integer(fall)));
        }
        acc
    });
    let prime = matrix.delete_last_col();
    (matrix, prime)
}

/// Falling-factorial helper re-exported for tests of the matrix entries.
pub fn falling(a: i64, k: u32) -> BigInt {
    ff(a, k)
}
