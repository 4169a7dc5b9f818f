//! One function per subcommand. Exit code 0 means results were found,
//! 1 means the computation succeeded but found nothing (nonexistence,
//! empty candidate list, failed verification), 2 means the input was bad.

use polyode_core::solver::{
    exists_solution, scan_degrees, solutions, solve_parameters, verify, SolutionPoly, SolverError,
};

use crate::expr::parse_expression;
use crate::output::{
    render_exists, render_params, render_scan, render_solutions, render_verify, Format,
};
use crate::problem::Problem;

pub struct RunResult {
    pub exit: i32,
    pub out: String,
    pub err: Option<String>,
}

fn ok(exit: i32, out: String) -> RunResult {
    RunResult {
        exit,
        out,
        err: None,
    }
}

fn input_error(message: impl Into<String>) -> RunResult {
    RunResult {
        exit: 2,
        out: String::new(),
        err: Some(message.into()),
    }
}

fn solver_error(e: SolverError) -> RunResult {
    input_error(e.to_string())
}

fn require_degree(p: &Problem) -> Result<usize, RunResult> {
    match p.degree {
        Some(n) => Ok(n),
        None => Err(input_error(
            "a target degree is required (`degree:` in the file or --degree)",
        )),
    }
}

pub fn cmd_exists(p: &Problem, format: Format) -> RunResult {
    let n = match require_degree(p) {
        Ok(n) => n,
        Err(r) => return r,
    };
    match exists_solution(&p.operator, &p.bindings, n, p.precision) {
        Ok(rep) => {
            let exit = if rep.exists { 0 } else { 1 };
            ok(exit, render_exists(&rep, format))
        }
        Err(e) => solver_error(e),
    }
}

pub fn cmd_solve(p: &Problem, format: Format) -> RunResult {
    let n = match require_degree(p) {
        Ok(n) => n,
        Err(r) => return r,
    };
    let shift = p.operator.shift_order();
    match solutions(&p.operator, &p.bindings, n, p.normalize, p.precision) {
        Ok(sols) => ok(0, render_solutions(n, shift, &sols, format)),
        Err(SolverError::NoSolution { degree }) => {
            ok(1, render_solutions(degree, shift, &[], format))
        }
        Err(e) => solver_error(e),
    }
}

pub fn cmd_scan(p: &Problem, format: Format) -> RunResult {
    let (lo, hi) = match (p.degrees, p.degree) {
        (Some(r), _) => r,
        (None, Some(n)) => (0, n),
        (None, None) => {
            return input_error(
                "a degree range is required (`degrees:` in the file or --degrees)",
            )
        }
    };
    match scan_degrees(&p.operator, &p.bindings, hi, p.normalize, p.precision) {
        Ok(mut by_degree) => {
            by_degree.retain(|n, sols| *n >= lo && !sols.is_empty());
            let exit = if by_degree.is_empty() { 1 } else { 0 };
            ok(exit, render_scan(lo, hi, &by_degree, format))
        }
        Err(e) => solver_error(e),
    }
}

pub fn cmd_params(p: &Problem, format: Format) -> RunResult {
    let n = match require_degree(p) {
        Ok(n) => n,
        Err(r) => return r,
    };
    if p.unknowns.is_empty() {
        return input_error(
            "params needs at least one unknown (`unknown` in the file or --unknowns)",
        );
    }
    match solve_parameters(
        &p.operator,
        &p.bindings,
        n,
        &p.unknowns,
        p.normalize,
        p.precision,
    ) {
        Ok(rep) => {
            let exit = if rep.candidates.is_empty() { 1 } else { 0 };
            ok(exit, render_params(&p.set, &rep, format))
        }
        Err(e) => solver_error(e),
    }
}

pub fn cmd_verify(p: &Problem, solution_text: &str, format: Format) -> RunResult {
    let poly = match parse_expression(solution_text, &p.set) {
        Ok(poly) => poly,
        Err(e) => return input_error(format!("in --solution: {e}")),
    };
    let unbound: Vec<&str> = poly
        .free_symbols()
        .into_iter()
        .filter(|s| !p.bindings.contains_key(s))
        .map(|s| p.set.name(s))
        .collect();
    if !unbound.is_empty() {
        return input_error(format!(
            "the solution uses unbound symbols: {}",
            unbound.join(", ")
        ));
    }
    let sol = SolutionPoly::Exact(poly);
    match verify(&p.operator, &p.bindings, &sol, p.precision) {
        Ok(rep) => {
            let exit = if rep.is_zero { 0 } else { 1 };
            ok(exit, render_verify(&rep, format))
        }
        Err(e) => solver_error(e),
    }
}
