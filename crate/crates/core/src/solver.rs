//! Existence checks, solution extraction and the staged parameter search.
//!
//! Everything here works on a symbolic operator plus a binding map, so
//! candidate parameter values never have to be rebuilt into a new operator:
//! matrices are built once symbolically and bound per candidate.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{Signed, Zero};

use crate::algebra::bigfloat::BigFloat;
use crate::algebra::floatpoly::FloatPoly;
use crate::algebra::param::{ParamScalar, Symbol};
use crate::algebra::ratpoly::RatPoly;
use crate::algebra::xpoly::XPoly;
use crate::algebra::{ff, Rational};
use crate::linalg::{
    self, det_univariate, rank_profile, rank_profile_numeric, LinalgError, ParamMatrix,
};
use crate::operator::{build_m, DiffOperator};
use crate::roots::{real_roots, RootError, RootSet};

/// A parameter value: exact rational or tracked-precision float.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundValue {
    Exact(Rational),
    Numeric(BigFloat),
}

impl BoundValue {
    pub fn is_exact(&self) -> bool {
        matches!(self, BoundValue::Exact(_))
    }

    pub fn to_float(&self, precision: u32) -> BigFloat {
        match self {
            BoundValue::Exact(r) => BigFloat::from_rational(r, precision),
            BoundValue::Numeric(f) => f.clone(),
        }
    }

    /// Total order: by value, exact before numeric on ties.
    pub fn order(&self, other: &BoundValue) -> Ordering {
        match (self, other) {
            (BoundValue::Exact(a), BoundValue::Exact(b)) => a.cmp(b),
            (BoundValue::Numeric(a), BoundValue::Numeric(b)) => a.cmp(b),
            (BoundValue::Exact(a), BoundValue::Numeric(b)) => {
                let af = BigFloat::from_rational(a, b.precision());
                af.cmp(b).then(Ordering::Less)
            }
            (BoundValue::Numeric(a), BoundValue::Exact(b)) => {
                let bf = BigFloat::from_rational(b, a.precision());
                a.cmp(&bf).then(Ordering::Greater)
            }
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(r) => write!(f, "{r}"),
            BoundValue::Numeric(v) => write!(f, "{v}"),
        }
    }
}

pub type Bindings = BTreeMap<Symbol, BoundValue>;

/// Convenience constructor for all-exact binding maps.
pub fn exact_bindings(pairs: &[(Symbol, Rational)]) -> Bindings {
    pairs
        .iter()
        .map(|(s, r)| (*s, BoundValue::Exact(r.clone())))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverError {
    UnboundParameters { names: Vec<String> },
    NoSolution { degree: usize },
    EliminationOrder { first: String, blocking: Vec<String> },
    Underdetermined { stage: u8 },
    TooManyUnknowns { got: usize },
    UnknownAlreadyBound { name: String },
    DuplicateUnknown { name: String },
    NoUnknowns,
    Linalg(LinalgError),
    Root(RootError),
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::UnboundParameters { names } => {
                write!(f, "unbound parameters: {}", names.join(", "))
            }
            SolverError::NoSolution { degree } => {
                write!(f, "no polynomial solution of degree {degree}")
            }
            SolverError::EliminationOrder { first, blocking } => write!(
                f,
                "cannot eliminate `{first}` first: the eigenvalue condition also involves {}",
                blocking.join(", ")
            ),
            SolverError::Underdetermined { stage } => {
                write!(f, "stage {stage} condition vanishes identically; the parameter is unconstrained")
            }
            SolverError::TooManyUnknowns { got } => {
                write!(f, "at most two unknowns are supported, got {got}")
            }
            SolverError::UnknownAlreadyBound { name } => {
                write!(f, "unknown `{name}` already has a bound value")
            }
            SolverError::DuplicateUnknown { name } => {
                write!(f, "unknown `{name}` listed twice")
            }
            SolverError::NoUnknowns => write!(f, "no unknowns to solve for"),
            SolverError::Linalg(e) => write!(f, "{e}"),
            SolverError::Root(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SolverError {}

impl From<LinalgError> for SolverError {
    fn from(e: LinalgError) -> Self {
        SolverError::Linalg(e)
    }
}

impl From<RootError> for SolverError {
    fn from(e: RootError) -> Self {
        SolverError::Root(e)
    }
}

/// How returned solutions are scaled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Leading coefficient 1.
    Monic,
    /// Integer coefficients with content 1 and positive leading
    /// coefficient. Numeric solutions fall back to monic.
    Primitive,
}

/// One polynomial solution, exact or numeric depending on the bindings it
/// was computed under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionPoly {
    Exact(XPoly),
    Numeric(FloatPoly),
}

impl SolutionPoly {
    pub fn degree(&self) -> Option<usize> {
        match self {
            SolutionPoly::Exact(p) => p.degree().finite(),
            SolutionPoly::Numeric(p) => p.degree(),
        }
    }
}

impl fmt::Display for SolutionPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionPoly::Exact(p) => write!(f, "{p}"),
            SolutionPoly::Numeric(p) => write!(f, "{p}"),
        }
    }
}

/// Outcome of the rank test for one degree.
#[derive(Clone, Debug)]
pub struct ExistenceReport {
    pub degree: usize,
    pub shift: usize,
    pub rank_m: usize,
    pub rank_m_prime: usize,
    pub exists: bool,
    /// The eigenvalue `lambda_{n+m}` at the given bindings; zero whenever
    /// a solution exists.
    pub lambda: BoundValue,
}

/// Relative tolerance used by every numeric rank and residual decision:
/// half the working digits.
pub fn default_tolerance(precision: u32) -> BigFloat {
    BigFloat::pow10(-((precision / 2) as i64), precision)
}

fn missing_names(op: &DiffOperator, bindings: &Bindings) -> Vec<String> {
    op.free_symbols()
        .into_iter()
        .filter(|s| !bindings.contains_key(s))
        .map(|s| op.set().name(s).to_string())
        .collect()
}

fn as_exact_map(op: &DiffOperator, bindings: &Bindings) -> Option<BTreeMap<Symbol, Rational>> {
    let mut out = BTreeMap::new();
    for sym in op.free_symbols() {
        match bindings.get(&sym) {
            Some(BoundValue::Exact(r)) => {
                out.insert(sym, r.clone());
            }
            _ => return None,
        }
    }
    Some(out)
}

fn as_float_map(bindings: &Bindings, precision: u32) -> BTreeMap<Symbol, BigFloat> {
    bindings
        .iter()
        .map(|(s, v)| (*s, v.to_float(precision)))
        .collect()
}

/// Rank test for a polynomial solution of degree exactly `n`: builds the
/// `(n+m+1) x (n+1)` existence matrix and compares its rank with and
/// without the last column.
pub fn exists_solution(
    op: &DiffOperator,
    bindings: &Bindings,
    n: usize,
    precision: u32,
) -> Result<ExistenceReport, SolverError> {
    let missing = missing_names(op, bindings);
    if !missing.is_empty() {
        return Err(SolverError::UnboundParameters { names: missing });
    }
    let m = op.shift_order();
    let (big_m, _) = build_m(op, n);
    let lambda_scalar = op.lift().eigenvalue_lambda(n + m);
    if let Some(exact) = as_exact_map(op, bindings) {
        let rm = big_m.to_rational(&exact)?;
        let prof = rank_profile(&rm);
        let rank_m = prof.rank;
        let rank_m_prime = prof.prefix_rank(n);
        let lambda = lambda_scalar
            .bind(&exact)
            .as_rational()
            .expect("all parameters bound");
        let exists = rank_m == rank_m_prime;
        debug_assert!(!exists || lambda.is_zero());
        Ok(ExistenceReport {
            degree: n,
            shift: m,
            rank_m,
            rank_m_prime,
            exists,
            lambda: BoundValue::Exact(lambda),
        })
    } else {
        let floats = as_float_map(bindings, precision);
        let fm = big_m.to_float(&floats, precision)?;
        let tol = default_tolerance(precision).mul(&fm.max_abs());
        let prof = rank_profile_numeric(&fm, &tol);
        let rank_m = prof.rank;
        let rank_m_prime = prof.prefix_rank(n);
        let lambda = lambda_scalar
            .eval_float(&floats, precision)
            .expect("all parameters bound");
        Ok(ExistenceReport {
            degree: n,
            shift: m,
            rank_m,
            rank_m_prime,
            exists: rank_m == rank_m_prime,
            lambda: BoundValue::Numeric(lambda),
        })
    }
}

/// Converts a kernel vector of the lifted action matrix (coefficients of
/// z) into the solution `y = z^(m)`.
fn z_to_y_exact(z: &[Rational], m: usize) -> Vec<Rational> {
    if z.len() <= m {
        return Vec::new();
    }
    (m..z.len())
        .map(|i| &z[i] * Rational::from_integer(ff(i as i64, m as u32)))
        .collect()
}

fn z_to_y_float(z: &[BigFloat], m: usize, precision: u32) -> Vec<BigFloat> {
    if z.len() <= m {
        return Vec::new();
    }
    (m..z.len())
        .map(|i| {
            z[i].mul(&BigFloat::from_bigint(
                &ff(i as i64, m as u32),
                precision,
            ))
        })
        .collect()
}

fn normalize_exact(coeffs: Vec<Rational>, normalization: Normalization) -> Vec<Rational> {
    let Some(lead) = coeffs.last().cloned() else {
        return coeffs;
    };
    match normalization {
        Normalization::Monic => coeffs.into_iter().map(|c| c / &lead).collect(),
        Normalization::Primitive => {
            let as_poly = RatPoly::new(coeffs);
            let mut ints = as_poly.primitive_integer().expect("nonzero solution");
            if ints.last().unwrap().is_negative() {
                for v in &mut ints {
                    *v = -v.clone();
                }
            }
            ints.into_iter().map(Rational::from_integer).collect()
        }
    }
}

fn exact_solution(set: &crate::algebra::param::ParamSet, coeffs: Vec<Rational>) -> SolutionPoly {
    let ps: Vec<ParamScalar> = coeffs
        .into_iter()
        .map(|r| ParamScalar::constant(set, r))
        .collect();
    SolutionPoly::Exact(XPoly::new(set, ps))
}

/// The canonical solution of degree exactly `n`: the kernel vector of the
/// shifted action matrix whose trailing coordinate sits at degree `n+m`,
/// with all lower non-pivot coordinates zero. Errors when no such vector
/// exists (equivalently, when [`exists_solution`] reports false).
pub fn solutions(
    op: &DiffOperator,
    bindings: &Bindings,
    n: usize,
    normalization: Normalization,
    precision: u32,
) -> Result<Vec<SolutionPoly>, SolverError> {
    let by_degree = kernel_by_degree(op, bindings, n, normalization, precision)?;
    match by_degree.get(&n) {
        Some(sols) if !sols.is_empty() => Ok(sols.clone()),
        _ => Err(SolverError::NoSolution { degree: n }),
    }
}

/// Solutions of every degree `0..=n_max`, keyed by exact degree. Degrees
/// without solutions map to empty vectors. One elimination serves all
/// degrees: the action matrix of degree `n_max` contains each smaller one
/// as a leading block.
pub fn scan_degrees(
    op: &DiffOperator,
    bindings: &Bindings,
    n_max: usize,
    normalization: Normalization,
    precision: u32,
) -> Result<BTreeMap<usize, Vec<SolutionPoly>>, SolverError> {
    kernel_by_degree(op, bindings, n_max, normalization, precision)
}

fn kernel_by_degree(
    op: &DiffOperator,
    bindings: &Bindings,
    n_max: usize,
    normalization: Normalization,
    precision: u32,
) -> Result<BTreeMap<usize, Vec<SolutionPoly>>, SolverError> {
    let missing = missing_names(op, bindings);
    if !missing.is_empty() {
        return Err(SolverError::UnboundParameters { names: missing });
    }
    let m = op.shift_order();
    let a = op.lift().build_a(n_max + m);
    let mut out: BTreeMap<usize, Vec<SolutionPoly>> = BTreeMap::new();
    for n in 0..=n_max {
        out.insert(n, Vec::new());
    }
    if let Some(exact) = as_exact_map(op, bindings) {
        let rm = a.matrix().to_rational(&exact)?;
        for z in linalg::nullspace(&rm) {
            let trailing = z.iter().rposition(|c| !c.is_zero()).expect("kernel basis vector");
            if trailing < m {
                // z is a polynomial killed by the m-fold derivative: no solution
                continue;
            }
            let y = normalize_exact(z_to_y_exact(&z[..=trailing], m), normalization);
            out.get_mut(&(trailing - m))
                .expect("trailing degree within range")
                .push(exact_solution(op.set(), y));
        }
    } else {
        let floats = as_float_map(bindings, precision);
        let fm = a.matrix().to_float(&floats, precision)?;
        let tol = default_tolerance(precision).mul(&fm.max_abs());
        for z in linalg::nullspace_numeric(&fm, &tol) {
            let trailing = z.iter().rposition(|c| !c.is_zero()).expect("kernel basis vector");
            if trailing < m {
                continue;
            }
            let y = FloatPoly::new(z_to_y_float(&z[..=trailing], m, precision), precision);
            out.get_mut(&(trailing - m))
                .expect("trailing degree within range")
                .push(SolutionPoly::Numeric(y.monic()));
        }
    }
    Ok(out)
}

/// Substitution check. Exact inputs give an exact residual polynomial;
/// anything numeric gives a relative residual (largest residual
/// coefficient over the largest term coefficient).
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub exact: bool,
    pub is_zero: bool,
    pub residual_poly: Option<XPoly>,
    pub relative_residual: Option<BigFloat>,
}

pub fn verify(
    op: &DiffOperator,
    bindings: &Bindings,
    solution: &SolutionPoly,
    precision: u32,
) -> Result<VerifyReport, SolverError> {
    let missing = missing_names(op, bindings);
    if !missing.is_empty() {
        return Err(SolverError::UnboundParameters { names: missing });
    }
    let exact_map = as_exact_map(op, bindings);
    match (solution, exact_map) {
        (SolutionPoly::Exact(y), Some(exact)) => {
            let residual = op.apply(y).bind(&exact);
            Ok(VerifyReport {
                exact: true,
                is_zero: residual.is_zero(),
                residual_poly: Some(residual),
                relative_residual: None,
            })
        }
        (sol, _) => {
            let floats = as_float_map(bindings, precision);
            let y = match sol {
                SolutionPoly::Numeric(p) => p.clone(),
                SolutionPoly::Exact(p) => {
                    let coeffs: Result<Vec<BigFloat>, _> = p
                        .coeffs()
                        .iter()
                        .map(|c| c.eval_float(&BTreeMap::new(), precision))
                        .collect();
                    FloatPoly::new(
                        coeffs.map_err(|names| SolverError::UnboundParameters { names })?,
                        precision,
                    )
                }
            };
            let mut scale = BigFloat::zero(precision);
            let mut residual = FloatPoly::zero(precision);
            for k in 0..=op.order() {
                let pk = op.coeff(k);
                if pk.is_zero() {
                    continue;
                }
                let pk_coeffs: Result<Vec<BigFloat>, _> = pk
                    .coeffs()
                    .iter()
                    .map(|c| c.eval_float(&floats, precision))
                    .collect();
                let pk_float = FloatPoly::new(
                    pk_coeffs.map_err(|names| SolverError::UnboundParameters { names })?,
                    precision,
                );
                let term = pk_float.mul(&y.derivative(k as u32));
                let t_max = term.max_abs();
                if t_max > scale {
                    scale = t_max;
                }
                residual = residual.add(&term);
            }
            let rel = if scale.is_zero() {
                BigFloat::zero(precision)
            } else {
                residual.max_abs().div(&scale)
            };
            let is_zero = rel <= default_tolerance(precision);
            Ok(VerifyReport {
                exact: false,
                is_zero,
                residual_poly: None,
                relative_residual: Some(rel),
            })
        }
    }
}

/// One value assignment for the unknowns, with everything learned about it.
#[derive(Clone, Debug)]
pub struct ParamCandidate {
    /// Values in the order the unknowns were given.
    pub values: Vec<(Symbol, BoundValue)>,
    /// Full binding map (given bindings plus the unknown values).
    pub bindings: Bindings,
    pub exact: bool,
    pub existence: ExistenceReport,
    pub solutions: Vec<SolutionPoly>,
    /// Relative residual for numeric candidates; exact candidates verify
    /// to an identically zero polynomial instead.
    pub residual: Option<BigFloat>,
    pub verified: bool,
}

/// The univariate condition that pinned down the second unknown for one
/// value of the first.
#[derive(Clone, Debug)]
pub struct Stage2Record {
    pub stage1_value: BoundValue,
    /// Determinant (or gcd of maximal minors) as a polynomial in the
    /// second unknown; identically zero when the whole matrix vanished.
    pub condition: RatPoly,
    pub roots: Option<RootSet>,
}

#[derive(Clone, Debug)]
pub struct ParamSolveReport {
    pub degree: usize,
    pub shift: usize,
    pub unknowns: Vec<Symbol>,
    /// Working precision the pipeline ran at.
    pub precision: u32,
    /// The eigenvalue `lambda_{n+m}` with the given bindings applied,
    /// still symbolic in the unknowns.
    pub lambda: ParamScalar,
    /// Stage-1 condition polynomial in the first unknown.
    pub lambda_condition: RatPoly,
    pub stage1_roots: RootSet,
    pub stage2: Vec<Stage2Record>,
    /// Rank-checked and residual-verified candidates, sorted by value.
    pub candidates: Vec<ParamCandidate>,
    /// Candidates that failed the rank check or the residual check.
    pub rejected: Vec<ParamCandidate>,
    pub notes: Vec<String>,
}

fn candidate_order(a: &ParamCandidate, b: &ParamCandidate) -> Ordering {
    for ((_, va), (_, vb)) in a.values.iter().zip(&b.values) {
        let ord = va.order(vb);
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

fn index_combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let needed = k - current.len();
        for i in start..=(n - needed) {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut current, &mut out);
    }
    out
}

/// Pins down one or two unknown parameters so a solution of degree
/// exactly `n` exists, then rank-checks and verifies every candidate.
///
/// Stage 1: the eigenvalue `lambda_{n+m}` must vanish; it may only involve
/// the first unknown. Stage 2 (two unknowns): for each stage-1 root, the
/// existence matrix loses its identically zero rows; the determinant of
/// the resulting square matrix (or the gcd of its maximal minors when it
/// stays rectangular) is a univariate condition on the second unknown.
/// Stage 3 runs the rank test on every full assignment, stage 4 extracts
/// solutions and verifies them by substitution.
pub fn solve_parameters(
    op: &DiffOperator,
    bindings: &Bindings,
    n: usize,
    unknowns: &[Symbol],
    normalization: Normalization,
    precision: u32,
) -> Result<ParamSolveReport, SolverError> {
    if unknowns.is_empty() {
        return Err(SolverError::NoUnknowns);
    }
    if unknowns.len() > 2 {
        return Err(SolverError::TooManyUnknowns {
            got: unknowns.len(),
        });
    }
    if unknowns.len() == 2 && unknowns[0] == unknowns[1] {
        return Err(SolverError::DuplicateUnknown {
            name: op.set().name(unknowns[0]).to_string(),
        });
    }
    for u in unknowns {
        if bindings.contains_key(u) {
            return Err(SolverError::UnknownAlreadyBound {
                name: op.set().name(*u).to_string(),
            });
        }
    }
    // every free symbol that is not an unknown must be bound exactly
    let mut exact_given: BTreeMap<Symbol, Rational> = BTreeMap::new();
    let mut missing = Vec::new();
    for sym in op.free_symbols() {
        if unknowns.contains(&sym) {
            continue;
        }
        match bindings.get(&sym) {
            Some(BoundValue::Exact(r)) => {
                exact_given.insert(sym, r.clone());
            }
            _ => missing.push(op.set().name(sym).to_string()),
        }
    }
    if !missing.is_empty() {
        return Err(SolverError::UnboundParameters { names: missing });
    }

    let m = op.shift_order();
    let lifted = op.lift();
    let lambda = lifted.eigenvalue_lambda(n + m).bind(&exact_given);

    // Stage 1
    let first = unknowns[0];
    let lambda_condition = lambda.univariate_in(first).map_err(|blocking| {
        SolverError::EliminationOrder {
            first: op.set().name(first).to_string(),
            blocking,
        }
    })?;
    if lambda_condition.is_zero() {
        return Err(SolverError::Underdetermined { stage: 1 });
    }
    let stage1_roots = if lambda_condition.degree() == Some(0) {
        RootSet {
            rational_roots: Vec::new(),
            real_roots: Vec::new(),
        }
    } else {
        real_roots(&lambda_condition, precision)?
    };

    let mut notes: Vec<String> = Vec::new();
    let mut stage2: Vec<Stage2Record> = Vec::new();
    // (value assignments per unknown, in order)
    let mut assignments: Vec<Vec<(Symbol, BoundValue)>> = Vec::new();

    let a_matrix = lifted.build_a(n + m);

    for root in &stage1_roots.real_roots {
        let value = match &root.exact {
            Some(r) => BoundValue::Exact(r.clone()),
            None => BoundValue::Numeric(root.to_float(precision)),
        };
        if unknowns.len() == 1 {
            assignments.push(vec![(first, value)]);
            continue;
        }
        let second = unknowns[1];
        let exact_root = match &value {
            BoundValue::Exact(r) => r.clone(),
            BoundValue::Numeric(v) => {
                notes.push(format!(
                    "stage 2 skipped for irrational stage-1 root {} of {}: \
                     the determinant condition needs an exact value",
                    v,
                    op.set().name(first)
                ));
                continue;
            }
        };
        let mut stage1_binding = exact_given.clone();
        stage1_binding.insert(first, exact_root);
        let bound = a_matrix.drop_zero_columns().bind(&stage1_binding);
        let keep_rows: Vec<usize> =
            (0..bound.rows()).filter(|&i| !bound.row_is_zero(i)).collect();
        let keep_cols: Vec<usize> =
            (0..bound.cols()).filter(|&j| !bound.col_is_zero(j)).collect();
        let trimmed = bound.select_rows(&keep_rows).select_cols(&keep_cols);
        let record_roots;
        let condition: RatPoly;
        if trimmed.cols() == 0 {
            // the whole matrix vanished at this root
            condition = RatPoly::zero();
        } else if trimmed.rows() == trimmed.cols() {
            condition = det_univariate(&trimmed, second)?;
        } else {
            // non-square after trimming: every maximal square minor must
            // vanish, so the candidates are roots of the minors' gcd
            let minors: Vec<ParamMatrix> = if trimmed.rows() > trimmed.cols() {
                index_combinations(trimmed.rows(), trimmed.cols())
                    .into_iter()
                    .map(|rows| trimmed.select_rows(&rows))
                    .collect()
            } else {
                index_combinations(trimmed.cols(), trimmed.rows())
                    .into_iter()
                    .map(|cols| trimmed.select_cols(&cols))
                    .collect()
            };
            let mut acc = RatPoly::zero();
            for minor in minors {
                let det = det_univariate(&minor, second)?;
                acc = acc.gcd(&det);
                if acc.degree() == Some(0) {
                    break;
                }
            }
            condition = acc;
        }
        if condition.is_zero() {
            notes.push(format!(
                "stage 2 underdetermined at {} = {}: determinant condition \
                 vanishes identically",
                op.set().name(first),
                value
            ));
            record_roots = None;
        } else if condition.degree() == Some(0) {
            record_roots = Some(RootSet {
                rational_roots: Vec::new(),
                real_roots: Vec::new(),
            });
        } else {
            let roots2 = real_roots(&condition, precision)?;
            for r2 in &roots2.real_roots {
                let v2 = match &r2.exact {
                    Some(r) => BoundValue::Exact(r.clone()),
                    None => BoundValue::Numeric(r2.to_float(precision)),
                };
                assignments.push(vec![(first, value.clone()), (second, v2)]);
            }
            record_roots = Some(roots2);
        }
        stage2.push(Stage2Record {
            stage1_value: value,
            condition,
            roots: record_roots,
        });
    }

    // Stages 3 and 4
    let mut candidates = Vec::new();
    let mut rejected = Vec::new();
    for values in assignments {
        let mut full = bindings.clone();
        for (sym, v) in &values {
            full.insert(*sym, v.clone());
        }
        let exact = values.iter().all(|(_, v)| v.is_exact());
        let existence = exists_solution(op, &full, n, precision)?;
        if !existence.exists {
            rejected.push(ParamCandidate {
                values,
                bindings: full,
                exact,
                existence,
                solutions: Vec::new(),
                residual: None,
                verified: false,
            });
            continue;
        }
        let sols = match solutions(op, &full, n, normalization, precision) {
            Ok(s) => s,
            Err(SolverError::NoSolution { .. }) => {
                rejected.push(ParamCandidate {
                    values,
                    bindings: full,
                    exact,
                    existence,
                    solutions: Vec::new(),
                    residual: None,
                    verified: false,
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut worst: Option<BigFloat> = None;
        let mut all_zero = true;
        for s in &sols {
            let report = verify(op, &full, s, precision)?;
            if !report.is_zero {
                all_zero = false;
            }
            if let Some(r) = report.relative_residual {
                worst = Some(match worst {
                    Some(w) if w > r => w,
                    _ => r,
                });
            }
        }
        let candidate = ParamCandidate {
            values,
            bindings: full,
            exact,
            existence,
            solutions: sols,
            residual: worst,
            verified: all_zero,
        };
        if candidate.verified {
            candidates.push(candidate);
        } else {
            rejected.push(candidate);
        }
    }
    candidates.sort_by(candidate_order);
    rejected.sort_by(candidate_order);

    Ok(ParamSolveReport {
        degree: n,
        shift: m,
        unknowns: unknowns.to_vec(),
        precision,
        lambda,
        lambda_condition,
        stage1_roots,
        stage2,
        candidates,
        rejected,
        notes,
    })
}
