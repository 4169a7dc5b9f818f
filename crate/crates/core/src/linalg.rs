//! Exact and tracked-precision linear algebra: rank, nullspace and
//! determinants. The exact routines clear denominators and run fraction-free
//! (Bareiss) elimination over the integers, so no intermediate rounding or
//! coefficient swell beyond minor size can occur.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::{One, Zero};

use crate::algebra::bigfloat::BigFloat;
use crate::algebra::param::{ParamScalar, ParamSet, Symbol};
use crate::algebra::ratpoly::RatPoly;
use crate::algebra::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    NotSquare { rows: usize, cols: usize },
    MultivariateEntry { symbols: Vec<String> },
    UnboundEntry { symbols: Vec<String> },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::NotSquare { rows, cols } => {
                write!(f, "matrix is {rows}x{cols}, expected square")
            }
            LinalgError::MultivariateEntry { symbols } => {
                write!(
                    f,
                    "matrix entry involves extra parameters: {}",
                    symbols.join(", ")
                )
            }
            LinalgError::UnboundEntry { symbols } => {
                write!(f, "matrix entry has unbound parameters: {}", symbols.join(", "))
            }
        }
    }
}

impl std::error::Error for LinalgError {}

/// Dense matrix of exact rationals, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn from_fn<F: FnMut(usize, usize) -> Rational>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn delete_last_col(&self) -> RatMatrix {
        assert!(self.cols > 0);
        RatMatrix::from_fn(self.rows, self.cols - 1, |i, j| self.get(i, j).clone())
    }

    /// Integer matrix with the same row space and kernel: each row is
    /// multiplied by the (positive) lcm of its denominators. The scales
    /// are returned for determinant correction.
    fn clear_denominators(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        use num::Integer;
        let mut out = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut lcm = BigInt::one();
            for j in 0..self.cols {
                lcm = lcm.lcm(self.get(i, j).denom());
            }
            let row: Vec<BigInt> = (0..self.cols)
                .map(|j| {
                    let c = self.get(i, j);
                    c.numer() * (&lcm / c.denom())
                })
                .collect();
            out.push(row);
            scales.push(lcm);
        }
        (out, scales)
    }
}

/// Row echelon data from fraction-free elimination.
struct IntEchelon {
    mat: Vec<Vec<BigInt>>,
    /// (row, col) per pivot, in elimination order.
    pivots: Vec<(usize, usize)>,
    sign: i8,
}

/// Fraction-free Gaussian elimination (Bareiss). Pivot choice is the first
/// row with a nonzero entry in the current column, so runs are
/// deterministic. Entries after step k are k+1 minors of the input, which
/// keeps every division exact.
fn bareiss_echelon(mut mat: Vec<Vec<BigInt>>) -> IntEchelon {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        if pr != r {
            mat.swap(pr, r);
            sign = -sign;
        }
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                if mat[i][j].is_zero() && mat[i][c].is_zero() {
                    continue;
                }
                let num = &mat[r][c] * &mat[i][j] - &mat[i][c] * &mat[r][j];
                mat[i][j] = num / &prev;
            }
            mat[i][c] = BigInt::zero();
        }
        prev = mat[r][c].clone();
        pivots.push((r, c));
        r += 1;
    }
    IntEchelon { mat, pivots, sign }
}

/// Rank together with the ordered list of pivot columns. Because columns
/// are processed left to right, the rank of every column prefix can be read
/// off as the number of pivots inside the prefix.
pub struct RankProfile {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

impl RankProfile {
    /// Rank of the submatrix formed by the first `cols` columns.
    pub fn prefix_rank(&self, cols: usize) -> usize {
        self.pivot_cols.iter().take_while(|&&c| c < cols).count()
    }
}

pub fn rank_profile(m: &RatMatrix) -> RankProfile {
    let (ints, _) = m.clear_denominators();
    let ech = bareiss_echelon(ints);
    RankProfile {
        rank: ech.pivots.len(),
        pivot_cols: ech.pivots.iter().map(|&(_, c)| c).collect(),
    }
}

pub fn rank_exact(m: &RatMatrix) -> usize {
    rank_profile(m).rank
}

/// Exact determinant of a square matrix.
pub fn det_exact(m: &RatMatrix) -> Rational {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    if m.rows == 0 {
        return Rational::one();
    }
    let (ints, scales) = m.clear_denominators();
    let ech = bareiss_echelon(ints);
    if ech.pivots.len() < m.rows {
        return Rational::zero();
    }
    // After a full-rank Bareiss run the last pivot equals the determinant
    // of the row-permuted integer matrix.
    let (r, c) = *ech.pivots.last().unwrap();
    let mut det = Rational::from_integer(ech.mat[r][c].clone());
    if ech.sign < 0 {
        det = -det;
    }
    let mut scale = BigInt::one();
    for s in scales {
        scale *= s;
    }
    det / Rational::from_integer(scale)
}

/// Basis of the right kernel. One vector per non-pivot column `f`, with 1
/// at `f`, zeros at the other free columns and at every pivot column right
/// of `f`. The trailing nonzero coordinate of each vector is therefore its
/// own free column, which callers use to read off degrees.
pub fn nullspace(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let (ints, _) = m.clear_denominators();
    let ech = bareiss_echelon(ints);
    let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for f in 0..m.cols {
        if pivot_cols.contains(&f) {
            continue;
        }
        let mut v = vec![Rational::zero(); m.cols];
        v[f] = Rational::one();
        for &(pr, pc) in ech.pivots.iter().rev() {
            if pc > f {
                continue;
            }
            let mut acc = Rational::zero();
            for j in (pc + 1)..=f {
                if ech.mat[pr][j].is_zero() || v[j].is_zero() {
                    continue;
                }
                acc += Rational::from_integer(ech.mat[pr][j].clone()) * &v[j];
            }
            v[pc] = -acc / Rational::from_integer(ech.mat[pr][pc].clone());
        }
        basis.push(v);
    }
    basis
}

/// Dense matrix of tracked-precision floats.
#[derive(Clone, Debug)]
pub struct FloatMatrix {
    rows: usize,
    cols: usize,
    precision: u32,
    data: Vec<BigFloat>,
}

impl FloatMatrix {
    pub fn from_fn<F: FnMut(usize, usize) -> BigFloat>(
        rows: usize,
        cols: usize,
        precision: u32,
        mut f: F,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FloatMatrix {
            rows,
            cols,
            precision,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn get(&self, i: usize, j: usize) -> &BigFloat {
        &self.data[i * self.cols + j]
    }

    /// Largest entry magnitude; the natural scale for rank tolerances.
    pub fn max_abs(&self) -> BigFloat {
        let mut best = BigFloat::zero(self.precision);
        for v in &self.data {
            let a = v.abs();
            if a > best {
                best = a;
            }
        }
        best
    }
}

fn float_echelon(m: &FloatMatrix, tol: &BigFloat) -> (Vec<Vec<BigFloat>>, Vec<(usize, usize)>) {
    let mut mat: Vec<Vec<BigFloat>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let mut best = r;
        for i in (r + 1)..m.rows {
            if mat[i][c].abs() > mat[best][c].abs() {
                best = i;
            }
        }
        if mat[best][c].abs() <= *tol {
            // everything in this column is noise: zero it so later
            // back-substitution never divides by it
            for row in mat.iter_mut().skip(r) {
                row[c] = BigFloat::zero(m.precision);
            }
            continue;
        }
        mat.swap(best, r);
        for i in (r + 1)..m.rows {
            if mat[i][c].is_zero() {
                continue;
            }
            let factor = mat[i][c].div(&mat[r][c]);
            for j in (c + 1)..m.cols {
                if mat[r][j].is_zero() {
                    continue;
                }
                let delta = factor.mul(&mat[r][j]);
                mat[i][j] = mat[i][j].sub(&delta);
            }
            mat[i][c] = BigFloat::zero(m.precision);
        }
        pivots.push((r, c));
        r += 1;
    }
    (mat, pivots)
}

/// Rank under elimination with per-column max-magnitude pivoting. A pivot
/// counts when its magnitude exceeds `tol` (an absolute threshold; scale it
/// by `max_abs` for a relative test).
pub fn rank_numeric(m: &FloatMatrix, tol: &BigFloat) -> usize {
    float_echelon(m, tol).1.len()
}

pub fn rank_profile_numeric(m: &FloatMatrix, tol: &BigFloat) -> RankProfile {
    let (_, pivots) = float_echelon(m, tol);
    RankProfile {
        rank: pivots.len(),
        pivot_cols: pivots.iter().map(|&(_, c)| c).collect(),
    }
}

/// Approximate kernel basis, same column layout as the exact [`nullspace`].
pub fn nullspace_numeric(m: &FloatMatrix, tol: &BigFloat) -> Vec<Vec<BigFloat>> {
    let (mat, pivots) = float_echelon(m, tol);
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for f in 0..m.cols {
        if pivot_cols.contains(&f) {
            continue;
        }
        let mut v = vec![BigFloat::zero(m.precision); m.cols];
        v[f] = BigFloat::from_i64(1, m.precision);
        for &(pr, pc) in pivots.iter().rev() {
            if pc > f {
                continue;
            }
            let mut acc = BigFloat::zero(m.precision);
            for j in (pc + 1)..=f {
                if mat[pr][j].is_zero() || v[j].is_zero() {
                    continue;
                }
                acc = acc.add(&mat[pr][j].mul(&v[j]));
            }
            v[pc] = acc.neg().div(&mat[pr][pc]);
        }
        basis.push(v);
    }
    basis
}

/// Dense matrix of parameter scalars; the symbolic form of the operator
/// matrices before binding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamMatrix {
    set: ParamSet,
    rows: usize,
    cols: usize,
    data: Vec<ParamScalar>,
}

impl ParamMatrix {
    pub fn from_fn<F: FnMut(usize, usize) -> ParamScalar>(
        set: &ParamSet,
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert!(e.set() == set, "entry from a different parameter set");
                data.push(e);
            }
        }
        ParamMatrix {
            set: set.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn set(&self) -> &ParamSet {
        &self.set
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &ParamScalar {
        &self.data[i * self.cols + j]
    }

    pub fn bind(&self, bindings: &BTreeMap<Symbol, Rational>) -> ParamMatrix {
        ParamMatrix::from_fn(&self.set, self.rows, self.cols, |i, j| {
            self.entry(i, j).bind(bindings)
        })
    }

    pub fn delete_last_col(&self) -> ParamMatrix {
        assert!(self.cols > 0);
        ParamMatrix::from_fn(&self.set, self.rows, self.cols - 1, |i, j| {
            self.entry(i, j).clone()
        })
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        (0..self.cols).all(|j| self.entry(i, j).is_zero())
    }

    pub fn col_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.entry(i, j).is_zero())
    }

    pub fn select_rows(&self, keep: &[usize]) -> ParamMatrix {
        ParamMatrix::from_fn(&self.set, keep.len(), self.cols, |i, j| {
            self.entry(keep[i], j).clone()
        })
    }

    pub fn select_cols(&self, keep: &[usize]) -> ParamMatrix {
        ParamMatrix::from_fn(&self.set, self.rows, keep.len(), |i, j| {
            self.entry(i, keep[j]).clone()
        })
    }

    /// Fails with the unbound names if any entry stays symbolic.
    pub fn to_rational(
        &self,
        bindings: &BTreeMap<Symbol, Rational>,
    ) -> Result<RatMatrix, LinalgError> {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for e in &self.data {
            let bound = e.bind(bindings);
            match bound.as_rational() {
                Some(r) => data.push(r),
                None => {
                    let symbols = bound
                        .free_symbols()
                        .into_iter()
                        .map(|s| self.set.name(s).to_string())
                        .collect();
                    return Err(LinalgError::UnboundEntry { symbols });
                }
            }
        }
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Evaluates every entry with mixed exact/float bindings.
    pub fn to_float(
        &self,
        bindings: &BTreeMap<Symbol, BigFloat>,
        precision: u32,
    ) -> Result<FloatMatrix, LinalgError> {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for e in &self.data {
            match e.eval_float(bindings, precision) {
                Ok(v) => data.push(v),
                Err(symbols) => return Err(LinalgError::UnboundEntry { symbols }),
            }
        }
        Ok(FloatMatrix {
            rows: self.rows,
            cols: self.cols,
            precision,
            data,
        })
    }

    fn to_ratpoly_grid(&self, s: Symbol) -> Result<Vec<Vec<RatPoly>>, LinalgError> {
        let mut grid = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                match self.entry(i, j).univariate_in(s) {
                    Ok(p) => row.push(p),
                    Err(symbols) => return Err(LinalgError::MultivariateEntry { symbols }),
                }
            }
            grid.push(row);
        }
        Ok(grid)
    }
}

/// Newton interpolation through distinct nodes.
fn interpolate(nodes: &[Rational], values: &[Rational]) -> RatPoly {
    assert_eq!(nodes.len(), values.len());
    let n = nodes.len();
    let mut coef: Vec<Rational> = values.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = &nodes[i] - &nodes[i - j];
            coef[i] = num / den;
        }
    }
    let mut poly = RatPoly::zero();
    let mut basis = RatPoly::one();
    for i in 0..n {
        poly = poly.add(&basis.scale(&coef[i]));
        if i + 1 < n {
            basis = basis.mul(&RatPoly::linear_root(&nodes[i]));
        }
    }
    poly
}

/// Interpolation nodes 0, 1, -1, 2, -2, ...
fn node(i: usize) -> Rational {
    let k = (i + 1) / 2;
    let v = if i % 2 == 1 { k as i64 } else { -(k as i64) };
    Rational::from_integer(BigInt::from(v))
}

/// Exact determinant of a square matrix whose entries are univariate in
/// `s`, by evaluation at enough points and interpolation. All parameters
/// other than `s` must already be bound away.
pub fn det_univariate(m: &ParamMatrix, s: Symbol) -> Result<RatPoly, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let grid = m.to_ratpoly_grid(s)?;
    if m.rows == 0 {
        return Ok(RatPoly::one());
    }
    // row-wise degree bound on the determinant
    let mut bound = 0usize;
    for row in &grid {
        let row_deg = row.iter().filter_map(|p| p.degree()).max();
        match row_deg {
            Some(d) => bound += d,
            None => return Ok(RatPoly::zero()),
        }
    }
    let mut nodes = Vec::with_capacity(bound + 1);
    let mut values = Vec::with_capacity(bound + 1);
    for i in 0..=bound {
        let at = node(i);
        let evaluated = RatMatrix::from_fn(m.rows, m.cols, |r, c| grid[r][c].eval(&at));
        nodes.push(at);
        values.push(det_exact(&evaluated));
    }
    Ok(interpolate(&nodes, &values))
}

/// Reference determinant for the same input: fraction-free elimination
/// directly over the polynomial ring. Slower, kept as an independent check
/// against the interpolation path.
pub fn det_univariate_bareiss(m: &ParamMatrix, s: Symbol) -> Result<RatPoly, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let mut mat = m.to_ratpoly_grid(s)?;
    let n = m.rows;
    if n == 0 {
        return Ok(RatPoly::one());
    }
    let mut prev = RatPoly::one();
    let mut sign = 1i8;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !mat[i][c].is_zero()) else {
            return Ok(RatPoly::zero());
        };
        if pr != c {
            mat.swap(pr, c);
            sign = -sign;
        }
        for i in (c + 1)..n {
            for j in (c + 1)..n {
                if mat[i][j].is_zero() && mat[i][c].is_zero() {
                    continue;
                }
                let num = mat[c][c].mul(&mat[i][j]).sub(&mat[i][c].mul(&mat[c][j]));
                mat[i][j] = num
                    .div_exact(&prev)
                    .expect("fraction-free update divides exactly");
            }
            mat[i][c] = RatPoly::zero();
        }
        prev = mat[c][c].clone();
    }
    let mut det = mat[n - 1][n - 1].clone();
    if sign < 0 {
        det = det.neg();
    }
    Ok(det)
}
