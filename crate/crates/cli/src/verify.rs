//! The reproduction suite behind `indpoly verify`.

use indpoly::checks::{check_log_concave, check_unimodal};
use indpoly::engine::{independence_polynomial_general, independence_polynomial_tree};
use indpoly::families::{
    build_family_tree, build_named_graph, first_violating_k, threshold_crossover,
    top_coefficients_closed_form, Base, NamedTree, Structure, TopCoefficients,
};
use indpoly::{Graph, Polynomial, Tree};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Replacement inputs, used to check that the suite notices bad data.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub ex28: Option<Graph>,
}

/// Published thresholds and first violating `k` for each closed form.
pub const THRESHOLDS: [(&str, f64, u32); 5] = [
    ("3kk1", 3.2329, 4),
    ("3kk2", 3.61719, 4),
    ("3skk2", 2.83611, 3),
    ("3skk3", 3.76626, 4),
    ("3skk", 3.31871, 4),
];

const FAMILY_K_MAX: u32 = 12;

struct Expected {
    tree: NamedTree,
    k: usize,
    offset: usize,
    lhs: u64,
    rhs: u64,
}

const NAMED: [Expected; 4] = [
    Expected {
        tree: NamedTree::T1,
        k: 13,
        offset: 1,
        lhs: 2601,
        rhs: 2979,
    },
    Expected {
        tree: NamedTree::T2,
        k: 13,
        offset: 1,
        lhs: 2304,
        rhs: 2372,
    },
    Expected {
        tree: NamedTree::Ex28,
        k: 14,
        offset: 1,
        lhs: 3025,
        rhs: 3139,
    },
    Expected {
        tree: NamedTree::Ex35,
        k: 17,
        offset: 2,
        lhs: 3956121,
        rhs: 4314883,
    },
];

fn named_checks(e: &Expected, g: &Graph) -> Vec<Outcome> {
    let name = e.tree.name();
    let published = e.tree.published_polynomial();
    let general = independence_polynomial_general(g);
    let via_tree = Tree::from_graph(g, 0).map(|t| independence_polynomial_tree(&t));
    let mut out = vec![Outcome::new(
        format!("{name}: polynomial"),
        general == published && via_tree.as_ref() == Ok(&published),
        format!("{} vertices, computed {general}", g.order()),
    )];
    let report = check_log_concave(&general);
    let witness = report.violations.iter().find(|v| v.k == e.k);
    let ok = witness.is_some_and(|v| {
        v.offset == e.offset && v.lhs() == e.lhs.into() && v.rhs() == e.rhs.into()
    });
    let detail = match witness {
        Some(v) => format!(
            "k = {}, offset {}: {} < {}",
            v.k,
            v.offset,
            v.lhs(),
            v.rhs()
        ),
        None => format!("no violation at k = {}", e.k),
    };
    out.push(Outcome::new(format!("{name}: violation"), ok, detail));
    out
}

fn family_poly(structure: Structure, k: u32) -> Polynomial {
    independence_polynomial_tree(&build_family_tree(structure.with_k(k)).expect("k >= 1"))
}

/// Violation at the second-highest exponent, the index the families target.
fn violates_below_top(p: &Polynomial) -> bool {
    TopCoefficients::of(p).is_some_and(|t| t.violates())
}

pub fn run_suite(overrides: &Overrides) -> Vec<Outcome> {
    let mut out = Vec::new();

    for e in &NAMED {
        let g = match (e.tree, &overrides.ex28) {
            (NamedTree::Ex28, Some(g)) => g.clone(),
            _ => build_named_graph(e.tree),
        };
        out.extend(named_checks(e, &g));
    }

    let t1 = family_poly(Structure::new(Base::Plain3, 0), 4);
    out.push(Outcome::new(
        "3kk at k = 4 has the t1 polynomial",
        t1 == NamedTree::T1.published_polynomial(),
        t1.to_string(),
    ));
    let t2 = family_poly(Structure::new(Base::Star3, 1), 3);
    out.push(Outcome::new(
        "3skk1 at k = 3 has the t2 polynomial",
        t2 == NamedTree::T2.published_polynomial(),
        t2.to_string(),
    ));
    let u = check_unimodal(&NamedTree::T1.published_polynomial());
    out.push(Outcome::new(
        "t1: unimodal with mode 8",
        u.is_unimodal && u.mode_low == Some(8) && u.mode_high == Some(8),
        format!("mode {:?}..{:?}", u.mode_low, u.mode_high),
    ));

    for s in Structure::COVERED {
        let mismatches: Vec<u32> = (1..=FAMILY_K_MAX)
            .filter(|&k| {
                TopCoefficients::of(&family_poly(s, k)) != top_coefficients_closed_form(s.with_k(k))
            })
            .collect();
        out.push(Outcome::new(
            format!("{s}: closed-form top coefficients, k = 1..={FAMILY_K_MAX}"),
            mismatches.is_empty(),
            if mismatches.is_empty() {
                "all equal".to_string()
            } else {
                format!("differ at k = {mismatches:?}")
            },
        ));
    }

    for (name, published, first) in THRESHOLDS {
        let s: Structure = name.parse().expect("known structure");
        let root = threshold_crossover(s);
        let ok = root.as_ref().is_ok_and(|r| (r - published).abs() < 1e-3);
        out.push(Outcome::new(
            format!("{s}: threshold near {published}"),
            ok,
            match &root {
                Ok(r) => format!("{r:.6}"),
                Err(e) => e.to_string(),
            },
        ));
        let closed_first = first_violating_k(s, FAMILY_K_MAX).ok().flatten();
        let computed: Vec<bool> = (1..=FAMILY_K_MAX)
            .map(|k| violates_below_top(&family_poly(s, k)))
            .collect();
        let pattern_ok = computed
            .iter()
            .enumerate()
            .all(|(i, &v)| v == (i as u32 + 1 >= first));
        out.push(Outcome::new(
            format!("{s}: violation exactly for k >= {first}"),
            closed_first == Some(first) && pattern_ok,
            format!("closed form first k = {closed_first:?}"),
        ));
    }

    for (name, from) in [("3kk", 4u32), ("3skk1", 3u32)] {
        let s: Structure = name.parse().expect("known structure");
        let failing: Vec<u32> = (from..=FAMILY_K_MAX)
            .filter(|&k| check_log_concave(&family_poly(s, k)).is_log_concave)
            .collect();
        out.push(Outcome::new(
            format!("{s}: not log-concave for k = {from}..={FAMILY_K_MAX}"),
            failing.is_empty(),
            if failing.is_empty() {
                "confirmed".to_string()
            } else {
                format!("log-concave at k = {failing:?}")
            },
        ));
    }
    out
}
