//! Rendering of results in the three output formats.
//!
//! Structured output is flat `key = value` text. Exact numbers print as
//! fractions, numeric ones as decimal strings (always containing a `.`)
//! with a companion `<key>.precision` line, so the document can be parsed
//! back without guessing.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::{One, Signed, Zero};
use polyode_core::algebra::floatpoly::FloatPoly;
use polyode_core::algebra::ratpoly::RatPoly;
use polyode_core::roots::RootSet;
use polyode_core::solver::{
    BoundValue, ExistenceReport, ParamSolveReport, SolutionPoly, VerifyReport,
};
use polyode_core::{BigFloat, ParamSet, Rational, XPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Plain,
    Structured,
    Latex,
}

fn kv(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key} = {value}");
}

/// Structured rendering of one value: fractions stay as they are, floats
/// get a `.precision` companion so they parse back at the same precision.
fn kv_value(out: &mut String, key: &str, v: &BoundValue) {
    match v {
        BoundValue::Exact(r) => kv(out, key, r),
        BoundValue::Numeric(f) => {
            kv(out, key, f.to_decimal_string());
            kv(out, &format!("{key}.precision"), f.precision());
        }
    }
}

fn kv_float(out: &mut String, key: &str, f: &BigFloat) {
    kv(out, key, f.to_decimal_string());
    kv(out, &format!("{key}.precision"), f.precision());
}

/// Short human form of a float: scientific when small, trimmed otherwise.
fn short_float(f: &BigFloat) -> String {
    let v = f.to_f64_lossy();
    if v == 0.0 {
        return "0".to_string();
    }
    if v.abs() >= 1e-3 && v.abs() < 1e12 {
        let s = f.to_decimal_string();
        if s.len() <= 20 {
            s
        } else {
            format!("{}...", &s[..20])
        }
    } else {
        format!("{v:.6e}")
    }
}

fn plain_value(v: &BoundValue) -> String {
    match v {
        BoundValue::Exact(r) => r.to_string(),
        BoundValue::Numeric(f) => short_float(f),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// `p` rendered in the expression grammar with `var` as the indeterminate.
fn ratpoly_str(p: &RatPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for power in (0..p.coeffs().len()).rev() {
        let c = p.coeff(power);
        if c.is_zero() {
            continue;
        }
        let abs = c.abs();
        let body = match (power, abs.is_one()) {
            (0, _) => abs.to_string(),
            (1, true) => var.to_string(),
            (1, false) => format!("{abs}*{var}"),
            (k, true) => format!("{var}^{k}"),
            (k, false) => format!("{abs}*{var}^{k}"),
        };
        if first {
            let _ = write!(out, "{}{body}", if c.is_negative() { "-" } else { "" });
            first = false;
        } else {
            let _ = write!(out, " {} {body}", if c.is_negative() { "-" } else { "+" });
        }
    }
    out
}

fn roots_plain(var: &str, roots: &RootSet) -> String {
    if roots.real_roots.is_empty() {
        return "none real".to_string();
    }
    let parts: Vec<String> = roots
        .real_roots
        .iter()
        .map(|r| match &r.exact {
            Some(q) => format!("{var} = {q}"),
            None => format!("{var} ~= {}", short_float(&r.to_float(40))),
        })
        .collect();
    parts.join(", ")
}

// --- LaTeX helpers ---

const GREEK: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa",
    "lambda", "mu", "nu", "xi", "pi", "rho", "sigma", "tau", "phi", "chi", "psi", "omega",
];

fn latex_symbol(name: &str) -> String {
    if GREEK.contains(&name) {
        format!("\\{name}")
    } else if name == "eps" {
        "\\epsilon".to_string()
    } else if name.len() == 1 {
        name.to_string()
    } else {
        format!("\\mathit{{{name}}}")
    }
}

fn latex_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        let abs = r.abs();
        format!("{sign}\\frac{{{}}}{{{}}}", abs.numer(), abs.denom())
    }
}

fn latex_power(power: usize) -> String {
    match power {
        0 => String::new(),
        1 => "x".to_string(),
        k => format!("x^{{{k}}}"),
    }
}

/// Descending powers; rational coefficients as \frac.
pub fn latex_xpoly(p: &XPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let deg = p.degree().finite().unwrap();
    let mut out = String::new();
    let mut first = true;
    for power in (0..=deg).rev() {
        let c = p.coeff(power);
        if c.is_zero() {
            continue;
        }
        let (sign, body) = match c.as_rational() {
            Some(r) => {
                let sign = if r.is_negative() { "-" } else { "+" };
                let abs = r.abs();
                let body = if abs.is_one() && power > 0 {
                    latex_power(power)
                } else if power == 0 {
                    latex_rational(&abs)
                } else {
                    format!("{} {}", latex_rational(&abs), latex_power(power))
                };
                (sign, body)
            }
            // symbolic coefficient: fall back to the plain form in parens
            None => ("+", format!("\\left({c}\\right) {}", latex_power(power))),
        };
        if first {
            if sign == "-" {
                out.push('-');
            }
            out.push_str(&body);
            first = false;
        } else {
            let _ = write!(out, " {sign} {body}");
        }
    }
    out
}

fn latex_floatpoly(p: &FloatPoly) -> String {
    let coeffs = p.coeffs();
    if coeffs.iter().all(|c| c.is_zero()) {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for power in (0..coeffs.len()).rev() {
        let c = &coeffs[power];
        if c.is_zero() {
            continue;
        }
        let neg = c.to_f64_lossy() < 0.0;
        let abs = c.abs();
        let body = if power == 0 {
            short_float(&abs)
        } else {
            format!("{} {}", short_float(&abs), latex_power(power))
        };
        if first {
            if neg {
                out.push('-');
            }
            out.push_str(&body);
            first = false;
        } else {
            let _ = write!(out, " {} {body}", if neg { "-" } else { "+" });
        }
    }
    out
}

pub fn latex_solution(s: &SolutionPoly) -> String {
    match s {
        SolutionPoly::Exact(p) => latex_xpoly(p),
        SolutionPoly::Numeric(p) => latex_floatpoly(p),
    }
}

/// Every coefficient 0..=degree, so the list parses back completely.
fn solution_coeffs(out: &mut String, prefix: &str, s: &SolutionPoly) {
    match s {
        SolutionPoly::Exact(p) => {
            let deg = p.degree().finite().unwrap_or(0);
            kv(out, &format!("{prefix}.degree"), deg);
            for j in 0..=deg {
                let c = p.coeff(j);
                match c.as_rational() {
                    Some(r) => kv(out, &format!("{prefix}.coeff.{j}"), r),
                    None => kv(out, &format!("{prefix}.coeff.{j}"), c),
                }
            }
        }
        SolutionPoly::Numeric(p) => {
            let deg = p.coeffs().len().saturating_sub(1);
            kv(out, &format!("{prefix}.degree"), deg);
            for j in 0..=deg {
                kv_float(out, &format!("{prefix}.coeff.{j}"), &p.coeff(j));
            }
        }
    }
}

pub fn render_exists(r: &ExistenceReport, format: Format) -> String {
    match format {
        Format::Plain => {
            let mut out = String::new();
            let _ = writeln!(out, "degree: {}", r.degree);
            let _ = writeln!(out, "shift: {}", r.shift);
            let _ = writeln!(out, "rank(M) = {}", r.rank_m);
            let _ = writeln!(out, "rank(M') = {}", r.rank_m_prime);
            let _ = writeln!(out, "lambda = {}", plain_value(&r.lambda));
            let _ = writeln!(out, "exists: {}", yes_no(r.exists));
            out
        }
        Format::Structured => {
            let mut out = String::new();
            kv(&mut out, "command", "exists");
            kv(&mut out, "degree", r.degree);
            kv(&mut out, "shift", r.shift);
            kv(&mut out, "rank_M", r.rank_m);
            kv(&mut out, "rank_M_prime", r.rank_m_prime);
            kv_value(&mut out, "lambda", &r.lambda);
            kv(&mut out, "exists", r.exists);
            out
        }
        Format::Latex => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "\\operatorname{{rank}} M_{{{n}}} = {rm}, \\quad \\operatorname{{rank}} M'_{{{n}}} = {rp}, \\quad \\lambda = {l}",
                n = r.degree,
                rm = r.rank_m,
                rp = r.rank_m_prime,
                l = plain_value(&r.lambda),
            );
            let _ = writeln!(
                out,
                "\\text{{degree-{} solution: {}}}",
                r.degree,
                yes_no(r.exists)
            );
            out
        }
    }
}

pub fn render_solutions(
    degree: usize,
    shift: usize,
    sols: &[SolutionPoly],
    format: Format,
) -> String {
    match format {
        Format::Plain => {
            let mut out = String::new();
            let _ = writeln!(out, "degree: {degree}");
            for s in sols {
                let _ = writeln!(out, "y = {s}");
            }
            out
        }
        Format::Structured => {
            let mut out = String::new();
            kv(&mut out, "command", "solve");
            kv(&mut out, "degree", degree);
            kv(&mut out, "shift", shift);
            kv(&mut out, "count", sols.len());
            for (i, s) in sols.iter().enumerate() {
                solution_coeffs(&mut out, &format!("solution.{i}"), s);
            }
            out
        }
        Format::Latex => {
            let mut out = String::new();
            for (i, s) in sols.iter().enumerate() {
                let _ = writeln!(out, "y_{{{i}}}(x) = {}", latex_solution(s));
            }
            out
        }
    }
}

pub fn render_scan(
    lo: usize,
    hi: usize,
    found: &BTreeMap<usize, Vec<SolutionPoly>>,
    format: Format,
) -> String {
    match format {
        Format::Plain => {
            let mut out = String::new();
            let _ = writeln!(out, "degrees: {lo}..{hi}");
            if found.is_empty() {
                let _ = writeln!(out, "no polynomial solutions in range");
            }
            for (n, sols) in found {
                for s in sols {
                    let _ = writeln!(out, "degree {n}: y = {s}");
                }
            }
            out
        }
        Format::Structured => {
            let mut out = String::new();
            kv(&mut out, "command", "scan");
            kv(&mut out, "degrees", format!("{lo}..{hi}"));
            let total: usize = found.values().map(Vec::len).sum();
            kv(&mut out, "count", total);
            let mut i = 0;
            for sols in found.values() {
                for s in sols {
                    solution_coeffs(&mut out, &format!("solution.{i}"), s);
                    i += 1;
                }
            }
            out
        }
        Format::Latex => {
            let mut out = String::new();
            for (n, sols) in found {
                for s in sols {
                    let _ = writeln!(out, "y(x) = {} \\quad (n = {n})", latex_solution(s));
                }
            }
            out
        }
    }
}

pub fn render_params(set: &ParamSet, r: &ParamSolveReport, format: Format) -> String {
    let first = set.name(r.unknowns[0]);
    let second = r.unknowns.get(1).map(|s| set.name(*s));
    match format {
        Format::Plain => {
            let mut out = String::new();
            let _ = writeln!(out, "degree: {}", r.degree);
            let names: Vec<&str> = r.unknowns.iter().map(|s| set.name(*s)).collect();
            let _ = writeln!(out, "unknowns: {}", names.join(", "));
            let _ = writeln!(out, "lambda = {}", r.lambda);
            let _ = writeln!(
                out,
                "stage 1: {} = 0 has roots: {}",
                ratpoly_str(&r.lambda_condition, first),
                roots_plain(first, &r.stage1_roots)
            );
            for rec in &r.stage2 {
                let var = second.unwrap_or("?");
                let _ = write!(
                    out,
                    "stage 2 at {first} = {}: {} = 0",
                    plain_value(&rec.stage1_value),
                    ratpoly_str(&rec.condition, var),
                );
                match &rec.roots {
                    Some(roots) => {
                        let _ = writeln!(out, " has roots: {}", roots_plain(var, roots));
                    }
                    None => {
                        let _ = writeln!(out, " (unconstrained)");
                    }
                }
            }
            for (i, c) in r.candidates.iter().enumerate() {
                let vals: Vec<String> = c
                    .values
                    .iter()
                    .map(|(s, v)| format!("{} = {}", set.name(*s), plain_value(v)))
                    .collect();
                let tag = if c.exact { "exact" } else { "numeric" };
                let _ = writeln!(out, "candidate {i}: {} ({tag}, verified)", vals.join(", "));
                for s in &c.solutions {
                    let _ = writeln!(out, "  y = {s}");
                }
            }
            for (i, c) in r.rejected.iter().enumerate() {
                let vals: Vec<String> = c
                    .values
                    .iter()
                    .map(|(s, v)| format!("{} = {}", set.name(*s), plain_value(v)))
                    .collect();
                let why = if c.existence.exists {
                    "residual too large"
                } else {
                    "rank check failed"
                };
                let _ = writeln!(out, "rejected {i}: {} ({why})", vals.join(", "));
            }
            for note in &r.notes {
                let _ = writeln!(out, "note: {note}");
            }
            if r.candidates.is_empty() {
                let _ = writeln!(out, "no verified candidates");
            }
            out
        }
        Format::Structured => {
            let mut out = String::new();
            kv(&mut out, "command", "params");
            kv(&mut out, "degree", r.degree);
            kv(&mut out, "shift", r.shift);
            let names: Vec<&str> = r.unknowns.iter().map(|s| set.name(*s)).collect();
            kv(&mut out, "unknowns", names.join(","));
            kv(&mut out, "lambda", &r.lambda);
            kv(
                &mut out,
                "stage1.condition",
                ratpoly_str(&r.lambda_condition, first),
            );
            for (i, root) in r.stage1_roots.real_roots.iter().enumerate() {
                match &root.exact {
                    Some(q) => kv(&mut out, &format!("stage1.root.{i}"), q),
                    None => kv_float(&mut out, &format!("stage1.root.{i}"), &root.to_float(r.precision)),
                }
            }
            for (i, rec) in r.stage2.iter().enumerate() {
                kv_value(&mut out, &format!("stage2.{i}.value"), &rec.stage1_value);
                kv(
                    &mut out,
                    &format!("stage2.{i}.condition"),
                    ratpoly_str(&rec.condition, second.unwrap_or("?")),
                );
                if let Some(roots) = &rec.roots {
                    for (j, root) in roots.real_roots.iter().enumerate() {
                        match &root.exact {
                            Some(q) => kv(&mut out, &format!("stage2.{i}.root.{j}"), q),
                            None => kv_float(
                                &mut out,
                                &format!("stage2.{i}.root.{j}"),
                                &root.to_float(r.precision),
                            ),
                        }
                    }
                }
            }
            kv(&mut out, "candidates", r.candidates.len());
            for (i, c) in r.candidates.iter().enumerate() {
                for (s, v) in &c.values {
                    kv_value(&mut out, &format!("candidate.{i}.{}", set.name(*s)), v);
                }
                kv(&mut out, &format!("candidate.{i}.exact"), c.exact);
                kv(
                    &mut out,
                    &format!("candidate.{i}.rank_M"),
                    c.existence.rank_m,
                );
                kv(
                    &mut out,
                    &format!("candidate.{i}.rank_M_prime"),
                    c.existence.rank_m_prime,
                );
                match &c.residual {
                    Some(f) => kv_float(&mut out, &format!("candidate.{i}.residual"), f),
                    None => kv(&mut out, &format!("candidate.{i}.residual"), 0),
                }
                kv(
                    &mut out,
                    &format!("candidate.{i}.solutions"),
                    c.solutions.len(),
                );
                for (k, s) in c.solutions.iter().enumerate() {
                    solution_coeffs(&mut out, &format!("candidate.{i}.solution.{k}"), s);
                }
            }
            kv(&mut out, "rejected", r.rejected.len());
            for (i, c) in r.rejected.iter().enumerate() {
                for (s, v) in &c.values {
                    kv_value(&mut out, &format!("rejected.{i}.{}", set.name(*s)), v);
                }
                kv(
                    &mut out,
                    &format!("rejected.{i}.exists"),
                    c.existence.exists,
                );
            }
            for (i, note) in r.notes.iter().enumerate() {
                kv(&mut out, &format!("note.{i}"), note);
            }
            out
        }
        Format::Latex => {
            let mut out = String::new();
            for c in &r.candidates {
                let vals: Vec<String> = c
                    .values
                    .iter()
                    .map(|(s, v)| {
                        format!(
                            "{} = {}",
                            latex_symbol(set.name(*s)),
                            match v {
                                BoundValue::Exact(q) => latex_rational(q),
                                BoundValue::Numeric(f) => short_float(f),
                            }
                        )
                    })
                    .collect();
                let _ = write!(out, "{}", vals.join(",\\ "));
                for s in &c.solutions {
                    let _ = write!(out, ":\\quad y(x) = {}", latex_solution(s));
                }
                let _ = writeln!(out, " \\\\");
            }
            out
        }
    }
}

pub fn render_verify(r: &VerifyReport, format: Format) -> String {
    match format {
        Format::Plain => {
            let mut out = String::new();
            let _ = writeln!(out, "exact: {}", yes_no(r.exact));
            match &r.relative_residual {
                Some(f) => {
                    let _ = writeln!(out, "relative residual: {}", short_float(f));
                }
                None => {
                    let _ = writeln!(
                        out,
                        "residual: {}",
                        if r.is_zero { "identically zero" } else { "nonzero" }
                    );
                }
            }
            let _ = writeln!(out, "verified: {}", yes_no(r.is_zero));
            out
        }
        Format::Structured => {
            let mut out = String::new();
            kv(&mut out, "command", "verify");
            kv(&mut out, "exact", r.exact);
            match &r.relative_residual {
                Some(f) => kv_float(&mut out, "residual", f),
                None => kv(&mut out, "residual", 0),
            }
            kv(&mut out, "verified", r.is_zero);
            out
        }
        Format::Latex => {
            let mut out = String::new();
            let res = match &r.relative_residual {
                Some(f) => short_float(f),
                None => "0".to_string(),
            };
            let _ = writeln!(
                out,
                "\\|L y\\| / \\|L\\|\\|y\\| = {res}, \\quad \\text{{verified: {}}}",
                yes_no(r.is_zero)
            );
            out
        }
    }
}

/// Parses structured output back into a key/value map. Splits each line at
/// the first ` = `, so values may themselves contain equals signs.
pub fn parse_structured(text: &str) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    for line in text.lines() {
        if let Some((k, v)) = line.split_once(" = ") {
            map.insert(k.trim().to_string(), v.to_string());
        }
    }
    map
}
