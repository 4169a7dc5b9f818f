//! Exact search for polynomial solutions of linear ODEs with polynomial
//! coefficients.
//!
//! The equation `sum_k p_k(x) y^(k) = 0` is turned into a finite linear
//! system on the coefficient space of candidate polynomials. A derivative
//! shift makes the operator matrix upper triangular, so existence of a
//! degree-n solution reduces to a rank condition on a small exact matrix,
//! and unknown parameters in the coefficients are pinned down by eigenvalue
//! and determinant conditions before any rank check runs.
//!
//! All core arithmetic is exact (arbitrary-precision rationals). Irrational
//! parameter values are handled by isolating real roots of integer
//! polynomials and carrying high-precision decimal approximations whose
//! error is tracked explicitly.

pub mod algebra;
pub mod linalg;
pub mod operator;
pub mod roots;
pub mod solver;

pub use algebra::bigfloat::BigFloat;
pub use algebra::param::{ParamScalar, ParamSet, Symbol};
pub use algebra::xpoly::{Degree, XPoly};
pub use algebra::Rational;
pub use operator::DiffOperator;
pub use solver::{
    exists_solution, scan_degrees, solutions, solve_parameters, verify, Bindings, BoundValue,
    ExistenceReport, Normalization, ParamSolveReport, SolutionPoly, SolverError,
};
