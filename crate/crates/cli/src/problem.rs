//! Problem files: a line-oriented description of one equation.
//!
//! ```text
//! order: 2
//! p[2]: x^3                      # coefficient of y''
//! p[1]: alpha*(x^2 - 1)
//! p[0]: beta*x + g
//! let alpha = -15/2
//! unknown beta                   # order of unknown lines = elimination order
//! unknown g
//! degree: 6                      # or: degrees: 0..8
//! precision: 100                 # optional
//! normalize: monic               # optional: monic | primitive
//! ```

use std::fmt;

use polyode_core::algebra::param::{ParamSet, Symbol};
use polyode_core::algebra::parse_rational;
use polyode_core::solver::{Bindings, BoundValue, Normalization};
use polyode_core::{DiffOperator, XPoly};

use crate::expr::parse_expression;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ProblemError {}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, ProblemError> {
    Err(ProblemError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub set: ParamSet,
    pub operator: DiffOperator,
    pub bindings: Bindings,
    pub unknowns: Vec<Symbol>,
    pub degree: Option<usize>,
    pub degrees: Option<(usize, usize)>,
    pub precision: u32,
    pub normalize: Normalization,
}

fn valid_ident(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    let mut order: Option<(usize, usize)> = None; // (value, line)
    let mut coeff_lines: Vec<(usize, String, usize)> = Vec::new(); // (k, text, line)
    let mut lets: Vec<(String, String, usize)> = Vec::new(); // (name, value, line)
    let mut unknown_lines: Vec<(String, usize)> = Vec::new();
    let mut degree: Option<(usize, usize)> = None;
    let mut degrees: Option<((usize, usize), usize)> = None;
    let mut precision: Option<(u32, usize)> = None;
    let mut normalize: Option<(Normalization, usize)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p[") {
            let Some(close) = rest.find(']') else {
                return fail(line_no, "expected `]` in coefficient key");
            };
            let k: usize = match rest[..close].trim().parse() {
                Ok(k) => k,
                Err(_) => return fail(line_no, "coefficient index must be a nonnegative integer"),
            };
            let tail = rest[close + 1..].trim_start();
            let Some(exprtext) = tail.strip_prefix(':') else {
                return fail(line_no, "expected `:` after coefficient key");
            };
            if coeff_lines.iter().any(|(k2, _, _)| *k2 == k) {
                return fail(line_no, format!("duplicate key p[{k}]"));
            }
            coeff_lines.push((k, exprtext.trim().to_string(), line_no));
        } else if let Some(rest) = line.strip_prefix("let ") {
            let Some((name, value)) = rest.split_once('=') else {
                return fail(line_no, "expected `let <symbol> = <rational>`");
            };
            let name = name.trim();
            if !valid_ident(name) {
                return fail(line_no, format!("invalid symbol name `{name}`"));
            }
            if name == "x" {
                return fail(line_no, "`x` is the independent variable and cannot be bound");
            }
            if lets.iter().any(|(n, _, _)| n == name) {
                return fail(line_no, format!("symbol `{name}` bound twice"));
            }
            lets.push((name.to_string(), value.trim().to_string(), line_no));
        } else if let Some(rest) = line.strip_prefix("unknown ") {
            let name = rest.trim();
            if !valid_ident(name) {
                return fail(line_no, format!("invalid symbol name `{name}`"));
            }
            if name == "x" {
                return fail(line_no, "`x` is the independent variable and cannot be unknown");
            }
            if unknown_lines.iter().any(|(n, _)| n == name) {
                return fail(line_no, format!("symbol `{name}` declared unknown twice"));
            }
            unknown_lines.push((name.to_string(), line_no));
        } else if let Some((key, value)) = line.split_once(':') {
            let key = key.trim();
            let value = value.trim();
            match key {
                "order" => {
                    if order.is_some() {
                        return fail(line_no, "duplicate key `order`");
                    }
                    match value.parse() {
                        Ok(n) => order = Some((n, line_no)),
                        Err(_) => return fail(line_no, "order must be a nonnegative integer"),
                    }
                }
                "degree" => {
                    if degree.is_some() {
                        return fail(line_no, "duplicate key `degree`");
                    }
                    match value.parse() {
                        Ok(n) => degree = Some((n, line_no)),
                        Err(_) => return fail(line_no, "degree must be a nonnegative integer"),
                    }
                }
                "degrees" => {
                    if degrees.is_some() {
                        return fail(line_no, "duplicate key `degrees`");
                    }
                    let Some((lo, hi)) = value.split_once("..") else {
                        return fail(line_no, "expected `degrees: <lo>..<hi>`");
                    };
                    let (Ok(lo), Ok(hi)) = (lo.trim().parse(), hi.trim().parse()) else {
                        return fail(line_no, "degree bounds must be nonnegative integers");
                    };
                    if lo > hi {
                        return fail(line_no, "empty degree range");
                    }
                    degrees = Some(((lo, hi), line_no));
                }
                "precision" => {
                    if precision.is_some() {
                        return fail(line_no, "duplicate key `precision`");
                    }
                    match value.parse() {
                        Ok(d) if d >= 1 => precision = Some((d, line_no)),
                        _ => return fail(line_no, "precision must be a positive integer"),
                    }
                }
                "normalize" => {
                    if normalize.is_some() {
                        return fail(line_no, "duplicate key `normalize`");
                    }
                    let mode = match value {
                        "monic" => Normalization::Monic,
                        "primitive" => Normalization::Primitive,
                        other => {
                            return fail(
                                line_no,
                                format!("unknown normalization `{other}` (monic | primitive)"),
                            )
                        }
                    };
                    normalize = Some((mode, line_no));
                }
                other => return fail(line_no, format!("unrecognized key `{other}`")),
            }
        } else {
            return fail(line_no, "unrecognized line");
        }
    }

    let Some((order, _)) = order else {
        return fail(0, "missing `order:` line");
    };
    if degree.is_some() && degrees.is_some() {
        return fail(
            degrees.unwrap().1,
            "`degree` and `degrees` cannot both be given",
        );
    }
    for (k, _, line_no) in &coeff_lines {
        if *k > order {
            return fail(*line_no, format!("p[{k}] exceeds order {order}"));
        }
    }
    if !coeff_lines.iter().any(|(k, _, _)| *k == order) {
        return fail(0, format!("missing p[{order}] (the leading coefficient)"));
    }

    // declarations, in file order
    let mut names: Vec<(String, usize)> = Vec::new();
    for (n, _, line_no) in &lets {
        names.push((n.clone(), *line_no));
    }
    for (n, line_no) in &unknown_lines {
        if lets.iter().any(|(b, _, _)| b == n) {
            return fail(*line_no, format!("symbol `{n}` is both bound and unknown"));
        }
        names.push((n.clone(), *line_no));
    }
    let set = ParamSet::new(names.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>());

    let mut bindings = Bindings::new();
    for (name, value, line_no) in &lets {
        let r = match parse_rational(value) {
            Ok(r) => r,
            Err(e) => return fail(*line_no, e),
        };
        bindings.insert(set.symbol(name).unwrap(), BoundValue::Exact(r));
    }
    let unknowns: Vec<Symbol> = unknown_lines
        .iter()
        .map(|(n, _)| set.symbol(n).unwrap())
        .collect();

    let mut coeffs: Vec<XPoly> = vec![XPoly::zero(&set); order + 1];
    for (k, text, line_no) in &coeff_lines {
        match parse_expression(text, &set) {
            Ok(p) => coeffs[*k] = p,
            Err(e) => return fail(*line_no, format!("in p[{k}]: {e}")),
        }
    }
    let operator = match DiffOperator::new(&set, coeffs) {
        Ok(op) => op,
        Err(e) => return fail(0, e.to_string()),
    };

    Ok(Problem {
        set,
        operator,
        bindings,
        unknowns,
        degree: degree.map(|(n, _)| n),
        degrees: degrees.map(|(r, _)| r),
        precision: precision.map(|(d, _)| d).unwrap_or(100),
        normalize: normalize.map(|(m, _)| m).unwrap_or(Normalization::Monic),
    })
}

/// Command-line overrides. `--unknowns` replaces the file's unknown list;
/// a `let` binding for a symbol named there is dropped so the same file
/// can serve both `solve` (bound) and `params` (searched).
pub struct Overrides {
    pub degree: Option<usize>,
    pub degrees: Option<(usize, usize)>,
    pub precision: Option<u32>,
    pub normalize: Option<Normalization>,
    pub unknowns: Option<Vec<String>>,
}

pub fn apply_overrides(problem: &mut Problem, over: &Overrides) -> Result<(), String> {
    if let Some(n) = over.degree {
        problem.degree = Some(n);
        problem.degrees = None;
    }
    if let Some((lo, hi)) = over.degrees {
        if lo > hi {
            return Err("empty degree range".to_string());
        }
        problem.degrees = Some((lo, hi));
        if over.degree.is_none() {
            problem.degree = None;
        }
    }
    if let Some(d) = over.precision {
        problem.precision = d;
    }
    if let Some(m) = over.normalize {
        problem.normalize = m;
    }
    if let Some(list) = &over.unknowns {
        let mut symbols = Vec::new();
        for name in list {
            let Some(sym) = problem.set.symbol(name) else {
                return Err(format!(
                    "unknown `{name}` is not declared in the problem file"
                ));
            };
            if symbols.contains(&sym) {
                return Err(format!("unknown `{name}` listed twice"));
            }
            symbols.push(sym);
        }
        for sym in &symbols {
            problem.bindings.remove(sym);
        }
        problem.unknowns = symbols;
    }
    Ok(())
}

/// Canonical file text: reparsing it gives back an equal `Problem`.
pub fn render_problem(p: &Problem) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "order: {}", p.operator.order());
    for k in (0..=p.operator.order()).rev() {
        let c = p.operator.coeff(k);
        if !c.is_zero() {
            let _ = writeln!(out, "p[{k}]: {c}");
        }
    }
    for (sym, v) in &p.bindings {
        let _ = writeln!(out, "let {} = {}", p.set.name(*sym), v);
    }
    for sym in &p.unknowns {
        let _ = writeln!(out, "unknown {}", p.set.name(*sym));
    }
    if let Some(n) = p.degree {
        let _ = writeln!(out, "degree: {n}");
    }
    if let Some((lo, hi)) = p.degrees {
        let _ = writeln!(out, "degrees: {lo}..{hi}");
    }
    let _ = writeln!(out, "precision: {}", p.precision);
    let mode = match p.normalize {
        Normalization::Monic => "monic",
        Normalization::Primitive => "primitive",
    };
    let _ = writeln!(out, "normalize: {mode}");
    out
}

impl PartialEq for Problem {
    fn eq(&self, other: &Self) -> bool {
        self.set == other.set
            && self.operator == other.operator
            && self.bindings == other.bindings
            && self.unknowns == other.unknowns
            && self.degree == other.degree
            && self.degrees == other.degrees
            && self.precision == other.precision
            && self.normalize == other.normalize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use polyode_core::algebra::rat;

    const EX1: &str = "\
# second order equation
order: 2
p[2]: x^3
p[1]: alpha*(x^2 - 1)
p[0]: beta*x + g
let alpha = -15/2
unknown beta
unknown g
degree: 6
";

    #[test]
    fn parses_a_full_file() {
        let p = parse_problem(EX1).unwrap();
        assert_eq!(p.operator.order(), 2);
        assert_eq!(p.degree, Some(6));
        assert_eq!(p.precision, 100);
        assert_eq!(p.normalize, Normalization::Monic);
        assert_eq!(p.unknowns.len(), 2);
        assert_eq!(p.set.name(p.unknowns[0]), "beta");
        assert_eq!(p.set.name(p.unknowns[1]), "g");
        let alpha = p.set.symbol("alpha").unwrap();
        assert_eq!(p.bindings.get(&alpha), Some(&BoundValue::Exact(rat(-15, 2))));
    }

    #[test]
    fn trivial_file_is_valid() {
        let p = parse_problem("order: 0\np[0]: 1\n").unwrap();
        assert_eq!(p.operator.order(), 0);
        assert!(p.degree.is_none());
    }

    #[test]
    fn omitted_coefficients_are_zero() {
        let p = parse_problem("order: 2\np[2]: 1\ndegree: 3\n").unwrap();
        assert!(p.operator.coeff(0).is_zero());
        assert!(p.operator.coeff(1).is_zero());
    }

    #[test]
    fn error_cases() {
        let dup = parse_problem("order: 2\norder: 3\np[2]: 1\n").unwrap_err();
        assert_eq!(dup.line, 2);
        assert!(dup.message.contains("duplicate"));

        let high = parse_problem("order: 1\np[1]: 1\np[2]: x\n").unwrap_err();
        assert!(high.message.contains("exceeds order"));

        let missing = parse_problem("order: 2\np[0]: 1\n").unwrap_err();
        assert!(missing.message.contains("missing p[2]"));

        let both = parse_problem(
            "order: 1\np[1]: 1\nlet a = 2\nunknown a\n",
        )
        .unwrap_err();
        assert!(both.message.contains("both bound and unknown"));

        let zero_lead = parse_problem("order: 1\np[1]: x - x\n").unwrap_err();
        assert!(zero_lead.message.contains("zero"));

        let bad_range = parse_problem("order: 1\np[1]: 1\ndegrees: 5..2\n").unwrap_err();
        assert!(bad_range.message.contains("empty degree range"));

        let both_deg =
            parse_problem("order: 1\np[1]: 1\ndegree: 2\ndegrees: 0..4\n").unwrap_err();
        assert!(both_deg.message.contains("cannot both"));
    }

    #[test]
    fn canonical_rendering_round_trips() {
        let corpus = [
            EX1,
            "order: 0\np[0]: 1\n",
            "order: 2\np[2]: 1\np[1]: p - 2*x^2\np[0]: delta*x + alpha\nlet alpha = 0\nunknown delta\nunknown p\ndegrees: 0..9\nprecision: 60\nnormalize: primitive\n",
            "order: 3\np[3]: x^2\np[0]: -1/3\ndegree: 4\n",
        ];
        for text in corpus {
            let once = parse_problem(text).unwrap();
            let again = parse_problem(&render_problem(&once)).unwrap();
            assert_eq!(once, again, "file:\n{text}");
        }
    }

    #[test]
    fn unknown_override_drops_binding() {
        let mut p = parse_problem(
            "order: 2\np[2]: x\np[1]: -2*x^2 + 2*mu + 2\np[0]: (eps - 2*mu - 3)*x\nlet mu = 1\nlet eps = 9\ndegree: 2\n",
        )
        .unwrap();
        let over = Overrides {
            degree: None,
            degrees: None,
            precision: None,
            normalize: None,
            unknowns: Some(vec!["eps".to_string()]),
        };
        apply_overrides(&mut p, &over).unwrap();
        let eps = p.set.symbol("eps").unwrap();
        assert_eq!(p.unknowns, vec![eps]);
        assert!(!p.bindings.contains_key(&eps));
        assert!(p.bindings.contains_key(&p.set.symbol("mu").unwrap()));

        let bad = Overrides {
            degree: None,
            degrees: None,
            precision: None,
            normalize: None,
            unknowns: Some(vec!["nope".to_string()]),
        };
        assert!(apply_overrides(&mut p, &bad).is_err());
    }
}
