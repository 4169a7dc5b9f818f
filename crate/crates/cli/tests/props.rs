use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::Reason;

use polyode_cli::expr::parse_expression;
use polyode_cli::output::{parse_structured, render_solutions, Format};
use polyode_cli::problem::{parse_problem, render_problem};
use polyode_core::algebra::rat;
use polyode_core::solver::{exact_bindings, solutions, Normalization, SolutionPoly, SolverError};
use polyode_core::{ParamScalar, ParamSet, Rational, XPoly};

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn scalar(set: ParamSet) -> impl Strategy<Value = ParamScalar> {
    let names: Vec<_> = set.symbols().collect();
    let leaf_set = set.clone();
    let leaf = prop_oneof![
        rational().prop_map(move |r| ParamScalar::constant(&leaf_set, r)),
        (0..names.len()).prop_map(move |i| ParamScalar::symbol(&set, names[i])),
    ];
    leaf.prop_recursive(3, 16, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
            inner.prop_map(|a| a.neg()),
        ]
    })
}

fn xpoly(set: ParamSet) -> impl Strategy<Value = XPoly> {
    let coeff_set = set.clone();
    prop::collection::vec(scalar(coeff_set), 0..=6)
        .prop_map(move |cs| XPoly::new(&set, cs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // printing a polynomial and parsing it back is the identity
    #[test]
    fn rendered_polynomials_parse_back(p in xpoly(ParamSet::new(vec!["alpha", "beta"]))) {
        let text = p.to_string();
        let set = ParamSet::new(vec!["alpha", "beta"]);
        let parsed = parse_expression(&text, &set).unwrap();
        prop_assert_eq!(parsed.to_string(), p.to_string());
    }

    #[test]
    fn rendered_scalars_parse_back(s in scalar(ParamSet::new(vec!["mu", "K"]))) {
        let set = ParamSet::new(vec!["mu", "K"]);
        let p = XPoly::constant(&set, s);
        let parsed = parse_expression(&p.to_string(), &set).unwrap();
        prop_assert_eq!(parsed.to_string(), p.to_string());
    }
}

#[derive(Debug, Clone)]
struct TermSpec {
    coeff: Rational,
    power: usize,
    symbol: Option<usize>,
}

#[derive(Debug, Clone)]
struct ProblemSpec {
    order: usize,
    coeffs: Vec<Option<Vec<TermSpec>>>,
    lets: Vec<(usize, Rational)>,
    unknowns: Vec<usize>,
    degree: Option<usize>,
    degrees: Option<(usize, usize)>,
    precision: Option<u32>,
    primitive: bool,
}

const NAME_POOL: &[&str] = &["alpha", "beta", "mu", "K", "Z", "w2"];

fn term_text(t: &TermSpec, declared: &[usize]) -> String {
    let mut parts: Vec<String> = Vec::new();
    if t.coeff != rat(1, 1) || (t.power == 0 && t.symbol.is_none()) {
        parts.push(t.coeff.to_string());
    }
    if let Some(i) = t.symbol {
        parts.push(NAME_POOL[declared[i % declared.len()]].to_string());
    }
    match t.power {
        0 => {}
        1 => parts.push("x".to_string()),
        p => parts.push(format!("x^{p}")),
    }
    if parts.is_empty() {
        parts.push("1".to_string());
    }
    parts.join("*")
}

fn problem_text(spec: &ProblemSpec) -> String {
    let mut declared: Vec<usize> = Vec::new();
    for (i, _) in &spec.lets {
        declared.push(*i);
    }
    declared.extend(spec.unknowns.iter().copied());
    let mut out = String::new();
    out.push_str("# generated\n");
    out.push_str(&format!("order: {}\n", spec.order));
    for (i, v) in &spec.lets {
        out.push_str(&format!("let {} = {}\n", NAME_POOL[*i], v));
    }
    for i in &spec.unknowns {
        out.push_str(&format!("unknown {}\n", NAME_POOL[*i]));
    }
    for (k, c) in spec.coeffs.iter().enumerate() {
        let Some(terms) = c else { continue };
        let body: Vec<String> = terms
            .iter()
            .map(|t| {
                if declared.is_empty() && t.symbol.is_some() {
                    let mut t2 = t.clone();
                    t2.symbol = None;
                    term_text(&t2, &declared)
                } else {
                    term_text(t, &declared)
                }
            })
            .collect();
        out.push_str(&format!("p[{}]: {}\n", k, body.join(" + ")));
    }
    if let Some(n) = spec.degree {
        out.push_str(&format!("degree: {n}\n"));
    }
    if let Some((lo, hi)) = spec.degrees {
        out.push_str(&format!("degrees: {lo}..{hi}\n"));
    }
    if let Some(p) = spec.precision {
        out.push_str(&format!("precision: {p}\n"));
    }
    if spec.primitive {
        out.push_str("normalize: primitive\n");
    }
    out
}

fn terms() -> impl Strategy<Value = Vec<TermSpec>> {
    prop::collection::btree_map(
        0usize..=4,
        (
            (-30i64..=30).prop_filter("nonzero", |n| *n != 0),
            1i64..=6,
            prop::option::of(0usize..4),
        ),
        1..=3,
    )
    .prop_map(|m| {
        m.into_iter()
            .map(|(power, (n, d, symbol))| TermSpec {
                coeff: rat(n, d),
                power,
                symbol,
            })
            .collect()
    })
}

fn problem_spec() -> impl Strategy<Value = ProblemSpec> {
    (
        1usize..=3,
        prop::collection::vec(prop::option::of(terms()), 4),
        prop::collection::btree_map(0usize..NAME_POOL.len(), rational(), 0..=3),
        prop::collection::btree_set(0usize..NAME_POOL.len(), 0..=2),
        prop::option::of(0usize..=8),
        prop::option::of((0usize..=3, 0usize..=5)),
        prop::option::of(20u32..=120),
        any::<bool>(),
    )
        .prop_map(
            |(order, mut coeffs, lets, unk, degree, degrees, precision, primitive)| {
                let lets: Vec<(usize, Rational)> = lets
                    .into_iter()
                    .filter(|(i, _)| !unk.contains(i))
                    .collect();
                let unknowns: Vec<usize> = unk.into_iter().collect();
                coeffs.truncate(order + 1);
                if coeffs[order].is_none() {
                    coeffs[order] = Some(vec![TermSpec {
                        coeff: rat(1, 1),
                        power: 1,
                        symbol: None,
                    }]);
                }
                let degrees = degrees.map(|(lo, span)| (lo, lo + span));
                let degree = if degrees.is_some() { None } else { degree };
                ProblemSpec {
                    order,
                    coeffs,
                    lets,
                    unknowns,
                    degree,
                    degrees,
                    precision,
                    primitive,
                }
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    // parse -> render -> parse is the identity on problems, and render is
    // idempotent on already-canonical text
    #[test]
    fn problem_rendering_round_trips(spec in problem_spec()) {
        let text = problem_text(&spec);
        let first = match parse_problem(&text) {
            Ok(p) => p,
            // cancellation inside a generated coefficient never happens
            // (distinct powers), so any parse error is a real bug
            Err(e) => return Err(TestCaseError::fail(format!("{e}\n{text}"))),
        };
        let canonical = render_problem(&first);
        let second = parse_problem(&canonical)
            .map_err(|e| TestCaseError::fail(format!("{e}\n{canonical}")))?;
        prop_assert_eq!(&first, &second, "canonical text:\n{}", canonical);
        prop_assert_eq!(render_problem(&second), canonical);
    }

    // structured solve output carries exact coefficients losslessly
    #[test]
    fn structured_solutions_round_trip(
        mu_n in -12i64..=12,
        mu_d in 1i64..=4,
        half_n in 0usize..=3,
        primitive in any::<bool>(),
    ) {
        let n = 2 * half_n;
        let mu = rat(mu_n, mu_d);
        let eps = rat(2, 1) * &mu + rat(2 * n as i64 + 3, 1);
        let text = format!(
            "order: 2\nlet mu = {mu}\nlet eps = {eps}\n\
             p[2]: x\np[1]: -2*x^2 + 2*mu + 2\np[0]: -(2*mu + 3 - eps)*x\n\
             degree: {n}\n"
        );
        let problem = parse_problem(&text).unwrap();
        let norm = if primitive { Normalization::Primitive } else { Normalization::Monic };
        let mu_sym = problem.set.symbol("mu").unwrap();
        let eps_sym = problem.set.symbol("eps").unwrap();
        let bindings = exact_bindings(&[(mu_sym, mu), (eps_sym, eps)]);
        let sols = match solutions(&problem.operator, &bindings, n, norm, 60) {
            Ok(s) => s,
            Err(SolverError::NoSolution { .. }) => {
                return Err(TestCaseError::fail(Reason::from("family member missing")))
            }
            Err(e) => return Err(TestCaseError::fail(Reason::from(e.to_string()))),
        };
        let rendered = render_solutions(n, problem.operator.shift_order(), &sols, Format::Structured);
        let map = parse_structured(&rendered);
        let count = sols.len().to_string();
        prop_assert_eq!(map.get("count"), Some(&count));
        for (i, s) in sols.iter().enumerate() {
            let SolutionPoly::Exact(p) = s else {
                return Err(TestCaseError::fail(Reason::from("exact bindings gave numeric solution")));
            };
            let coeffs = p.rational_coeffs().unwrap();
            let deg: usize = map[&format!("solution.{i}.degree")].parse().unwrap();
            prop_assert_eq!(deg + 1, coeffs.len());
            for (j, c) in coeffs.iter().enumerate() {
                let got: Rational = map[&format!("solution.{i}.coeff.{j}")].parse().unwrap();
                prop_assert_eq!(&got, c);
            }
        }
    }
}

#[test]
fn name_pool_is_consistent() {
    let distinct: BTreeSet<_> = NAME_POOL.iter().collect();
    assert_eq!(distinct.len(), NAME_POOL.len());
}
