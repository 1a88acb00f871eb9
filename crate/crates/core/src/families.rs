//! The counterexample tree families and a few individual trees.
//!
//! Every family tree has a center `v0` with three children `v1`, `v2`, `v3`.
//! `v1` carries three pendant `K2`s (plain base) or one pendant `P4` and two
//! pendant `K2`s (star base); `v2` carries `k` pendant `K2`s and `v3` carries
//! `k + j`. A pendant `K2` is an edge `a-b` with `a` joined to its carrier.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::graph::{Graph, Tree};
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("k must be at least 1, got {0}")]
    KOutOfRange(u32),
    #[error("unknown structure {0:?}")]
    UnknownStructure(String),
    #[error("unknown named tree {0:?}")]
    UnknownTree(String),
    #[error("no closed form for structure {0}")]
    NotCovered(Structure),
    #[error("no sign change of c1^2 - c0*c2 on [{lo}, {hi}] for structure {structure}")]
    NoSignChange {
        structure: Structure,
        lo: f64,
        hi: f64,
    },
    #[error("{count} sign changes of c1^2 - c0*c2 on [{lo}, {hi}] for structure {structure}")]
    MultipleSignChanges {
        structure: Structure,
        count: usize,
        lo: f64,
        hi: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    /// `v1` carries `K2 ∪ K2 ∪ K2`.
    Plain3,
    /// `v1` carries `P4 ∪ K2 ∪ K2`.
    Star3,
}

/// A family without its size parameter: base plus the offset `j` of the
/// third cluster.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    pub base: Base,
    pub j: u32,
}

impl Structure {
    pub const ALL: [Structure; 7] = [
        Structure::new(Base::Plain3, 0),
        Structure::new(Base::Plain3, 1),
        Structure::new(Base::Plain3, 2),
        Structure::new(Base::Star3, 0),
        Structure::new(Base::Star3, 1),
        Structure::new(Base::Star3, 2),
        Structure::new(Base::Star3, 3),
    ];

    /// Structures with a closed form for their top three coefficients.
    pub const COVERED: [Structure; 5] = [
        Structure::new(Base::Plain3, 1),
        Structure::new(Base::Plain3, 2),
        Structure::new(Base::Star3, 2),
        Structure::new(Base::Star3, 3),
        Structure::new(Base::Star3, 0),
    ];

    pub const fn new(base: Base, j: u32) -> Self {
        Structure { base, j }
    }

    pub fn with_k(self, k: u32) -> FamilySpec {
        FamilySpec {
            base: self.base,
            k,
            j: self.j,
        }
    }

    pub fn is_covered(self) -> bool {
        Self::COVERED.contains(&self)
    }

    /// CLI name such as `3kk1` or `3skk`.
    pub fn name(self) -> String {
        let star = match self.base {
            Base::Plain3 => "",
            Base::Star3 => "s",
        };
        match self.j {
            0 => format!("3{star}kk"),
            j => format!("3{star}kk{j}"),
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Structure {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Structure::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| FamilyError::UnknownStructure(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub base: Base,
    pub k: u32,
    pub j: u32,
}

impl FamilySpec {
    pub fn structure(self) -> Structure {
        Structure::new(self.base, self.j)
    }

    pub fn vertex_count(self) -> usize {
        let base = match self.base {
            Base::Plain3 => 10,
            Base::Star3 => 12,
        };
        base + 4 * self.k as usize + 2 * self.j as usize
    }
}

/// Builds the family tree rooted at `v0`.
///
/// Numbering: `v0 = 0`, `v1 = 1`, `v2 = 2`, `v3 = 3`, then the clusters of
/// `v1`, `v2`, `v3` in that order. A pendant `K2` takes two consecutive ids
/// (attachment vertex, then leaf); the pendant `P4` of the star base comes
/// first in `v1`'s cluster, attached by its first vertex.
pub fn build_family_tree(spec: FamilySpec) -> Result<Tree, FamilyError> {
    if spec.k < 1 {
        return Err(FamilyError::KOutOfRange(spec.k));
    }
    let mut parent: Vec<Option<usize>> = vec![None, Some(0), Some(0), Some(0)];
    let pendant_path = |parent: &mut Vec<Option<usize>>, carrier: usize, len: usize| {
        let mut prev = carrier;
        for _ in 0..len {
            parent.push(Some(prev));
            prev = parent.len() - 1;
        }
    };
    let v1_k2 = match spec.base {
        Base::Plain3 => 3,
        Base::Star3 => {
            pendant_path(&mut parent, 1, 4);
            2
        }
    };
    let clusters = [(1, v1_k2), (2, spec.k), (3, spec.k + spec.j)];
    for (carrier, copies) in clusters {
        for _ in 0..copies {
            pendant_path(&mut parent, carrier, 2);
        }
    }
    debug_assert_eq!(parent.len(), spec.vertex_count());
    Ok(Tree::from_parents(parent).expect("family construction yields a tree"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedTree {
    /// 26 vertices; the plain family at `k = 4, j = 0`.
    T1,
    /// 26 vertices; the star family at `k = 3, j = 1`.
    T2,
    /// 28 vertices; outside all the families. `v1` carries `P6 ∪ K2 ∪ K2`,
    /// `v2` three `K2`s and `v3` four.
    Ex28,
    /// 35 vertices; violation two below the top coefficient.
    Ex35,
}

// Edge lists keep the vertex ids of the original drawings; they are
// relabelled compactly in increasing id order.
const T1_EDGES: &[(usize, usize)] = &[
    (3, 0),
    (4, 1),
    (5, 2),
    (6, 5),
    (6, 4),
    (6, 3),
    (10, 7),
    (11, 8),
    (12, 9),
    (13, 12),
    (13, 11),
    (13, 10),
    (20, 17),
    (20, 18),
    (20, 19),
    (17, 14),
    (18, 15),
    (19, 16),
    (21, 20),
    (21, 13),
    (21, 6),
    (20, 25),
    (25, 24),
    (13, 27),
    (27, 26),
];

const T2_EDGES: &[(usize, usize)] = &[
    (3, 0),
    (4, 1),
    (5, 2),
    (6, 5),
    (6, 4),
    (6, 3),
    (10, 7),
    (11, 8),
    (12, 9),
    (13, 12),
    (13, 11),
    (13, 10),
    (20, 17),
    (20, 18),
    (20, 19),
    (17, 14),
    (18, 15),
    (19, 16),
    (21, 20),
    (21, 13),
    (21, 6),
    (0, 22),
    (22, 23),
    (20, 25),
    (25, 24),
];

// Hanging 26-27 from vertex 1 gives s_14 = 56. Hanging it from 23 (so `v1`
// carries a pendant P6) gives the expected polynomial.
const EX28_EXTRA: &[(usize, usize)] = &[(23, 26), (27, 26)];

const EX35_EXTRA: &[(usize, usize)] = &[
    (28, 29),
    (30, 31),
    (32, 33),
    (34, 35),
    (36, 29),
    (36, 31),
    (36, 33),
    (36, 35),
    (36, 21),
];

// Published coefficients, ascending.
const T1_POLY: &[u64] = &[
    1, 26, 300, 2040, 9142, 28551, 63933, 103736, 121376, 100144, 55499, 18683, 2979, 51, 1,
];
const T2_POLY: &[u64] = &[
    1, 26, 300, 2037, 9089, 28147, 62183, 98968, 112870, 90178, 48086, 15498, 2372, 48, 1,
];
const EX28_POLY: &[u64] = &[
    1, 28, 351, 2613, 12910, 44772, 112284, 206422, 278417, 272268, 187731, 86526, 24020, 3139, 55,
    1,
];
const EX35_POLY: &[u64] = &[
    1, 35, 561, 5480, 36596, 177534, 648445, 1822331, 3989058, 6835096, 9151478, 9489531, 7485954,
    4355940, 1773294, 458294, 60773, 1989, 71, 1,
];

impl NamedTree {
    pub const ALL: [NamedTree; 4] = [
        NamedTree::T1,
        NamedTree::T2,
        NamedTree::Ex28,
        NamedTree::Ex35,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedTree::T1 => "t1",
            NamedTree::T2 => "t2",
            NamedTree::Ex28 => "ex28",
            NamedTree::Ex35 => "ex35",
        }
    }

    /// Edge list in the original, sparse vertex ids.
    pub fn raw_edges(self) -> Vec<(usize, usize)> {
        match self {
            NamedTree::T1 => T1_EDGES.to_vec(),
            NamedTree::T2 => T2_EDGES.to_vec(),
            NamedTree::Ex28 => [T2_EDGES, EX28_EXTRA].concat(),
            NamedTree::Ex35 => [T1_EDGES, EX35_EXTRA].concat(),
        }
    }

    /// The published independence polynomial.
    pub fn published_polynomial(self) -> Polynomial {
        Polynomial::from_u64s(match self {
            NamedTree::T1 => T1_POLY,
            NamedTree::T2 => T2_POLY,
            NamedTree::Ex28 => EX28_POLY,
            NamedTree::Ex35 => EX35_POLY,
        })
    }
}

impl fmt::Display for NamedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedTree {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NamedTree::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| FamilyError::UnknownTree(s.to_string()))
    }
}

/// Relabels arbitrary vertex ids to `0..n` in increasing order.
pub fn graph_from_sparse_edges(edges: &[(usize, usize)]) -> Graph {
    let mut ids: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let index = |x: usize| ids.binary_search(&x).expect("id collected above");
    Graph::from_edges(ids.len(), edges.iter().map(|&(u, v)| (index(u), index(v))))
        .expect("relabelled edges are in range")
}

pub fn build_named_graph(name: NamedTree) -> Graph {
    graph_from_sparse_edges(&name.raw_edges())
}

pub fn build_named_tree(name: NamedTree) -> Tree {
    Tree::from_graph(&build_named_graph(name), 0).expect("named trees are trees")
}

/// Leading coefficient `c0` and the two below it, `c1` at `top_exponent - 1`
/// and `c2` at `top_exponent - 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopCoefficients {
    pub top_exponent: usize,
    pub c0: BigUint,
    pub c1: BigUint,
    pub c2: BigUint,
}

impl TopCoefficients {
    /// Reads the top three coefficients off a polynomial of degree ≥ 2.
    pub fn of(p: &Polynomial) -> Option<TopCoefficients> {
        let d = p.degree().filter(|&d| d >= 2)?;
        Some(TopCoefficients {
            top_exponent: d,
            c0: p.coeff(d),
            c1: p.coeff(d - 1),
            c2: p.coeff(d - 2),
        })
    }

    /// `c1^2 < c0 * c2`: log-concavity fails at `top_exponent - 1`.
    pub fn violates(&self) -> bool {
        &self.c1 * &self.c1 < &self.c0 * &self.c2
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn pow2(e: u32) -> BigUint {
    BigUint::one() << e
}

fn halve_exact(x: BigUint, structure: Structure, k: u32) -> BigUint {
    assert!(
        !x.bit(0),
        "closed form for {structure} at k = {k} should be even before halving"
    );
    x >> 1u32
}

/// Exact top three coefficients from the closed forms, or `None` for
/// structures without one (`3kk`, `3skk1`) and for `k = 0`.
pub fn top_coefficients_closed_form(spec: FamilySpec) -> Option<TopCoefficients> {
    let structure = spec.structure();
    if !structure.is_covered() || spec.k < 1 {
        return None;
    }
    let k = spec.k;
    let kb = big(u64::from(k));
    let (top, c1, c2) = match (spec.base, spec.j) {
        (Base::Plain3, 1) => (
            2 * k + 7,
            big(3) * pow2(k) + big(2) * &kb + big(12),
            big(2) * &kb * &kb
                + big(23) * &kb
                + big(9) * pow2(2 * k + 1)
                + pow2(k - 1) * (big(9) * &kb + big(70))
                + big(26),
        ),
        (Base::Plain3, 2) => (
            2 * k + 8,
            big(5) * pow2(k) + big(2) * &kb + big(13),
            halve_exact(
                big(2) * (big(61) * pow2(k) + big(9) * pow2(2 * k + 2) + big(38))
                    + &kb * (big(4) * &kb + big(15) * pow2(k) + big(50)),
                structure,
                k,
            ),
        ),
        (Base::Star3, 2) => (
            2 * k + 9,
            big(2) * &kb + pow2(k) + pow2(k + 2) + big(19),
            halve_exact(
                big(4) * &kb * &kb
                    + big(15) * &kb * pow2(k)
                    + big(74) * &kb
                    + big(91) * pow2(k + 1)
                    + big(13) * pow2(2 * k + 3)
                    + big(142),
                structure,
                k,
            ),
        ),
        (Base::Star3, 3) => (
            2 * k + 10,
            big(2) * &kb + big(9) * pow2(k) + big(20),
            halve_exact(
                &kb * (big(4) * &kb + big(27) * pow2(k) + big(78))
                    + big(13) * pow2(2 * k + 4)
                    + big(21) * pow2(k + 4)
                    + big(180),
                structure,
                k,
            ),
        ),
        (Base::Star3, 0) => (
            2 * k + 7,
            big(2) * &kb + pow2(k + 1) + big(17),
            big(2) * &kb * &kb
                + big(33) * &kb
                + big(13) * pow2(2 * k)
                + pow2(k) * (big(3) * &kb + big(34))
                + big(36),
        ),
        _ => unreachable!("covered structures are matched above"),
    };
    Some(TopCoefficients {
        top_exponent: top as usize,
        c0: BigUint::one(),
        c1,
        c2,
    })
}

/// The closed forms continued to real `k`, as `(c1, c2)`.
fn closed_form_real(structure: Structure, k: f64) -> Option<(f64, f64)> {
    let p2 = |e: f64| e.exp2();
    let v = match (structure.base, structure.j) {
        (Base::Plain3, 1) => (
            3.0 * p2(k) + 2.0 * k + 12.0,
            2.0 * k * k
                + 23.0 * k
                + 9.0 * p2(2.0 * k + 1.0)
                + p2(k - 1.0) * (9.0 * k + 70.0)
                + 26.0,
        ),
        (Base::Plain3, 2) => (
            5.0 * p2(k) + 2.0 * k + 13.0,
            (2.0 * (61.0 * p2(k) + 9.0 * p2(2.0 * k + 2.0) + 38.0)
                + k * (4.0 * k + 15.0 * p2(k) + 50.0))
                / 2.0,
        ),
        (Base::Star3, 2) => (
            2.0 * k + p2(k) + p2(k + 2.0) + 19.0,
            (4.0 * k * k
                + 15.0 * k * p2(k)
                + 74.0 * k
                + 91.0 * p2(k + 1.0)
                + 13.0 * p2(2.0 * k + 3.0)
                + 142.0)
                / 2.0,
        ),
        (Base::Star3, 3) => (
            2.0 * k + 9.0 * p2(k) + 20.0,
            (k * (4.0 * k + 27.0 * p2(k) + 78.0)
                + 13.0 * p2(2.0 * k + 4.0)
                + 21.0 * p2(k + 4.0)
                + 180.0)
                / 2.0,
        ),
        (Base::Star3, 0) => (
            2.0 * k + p2(k + 1.0) + 17.0,
            2.0 * k * k + 33.0 * k + 13.0 * p2(2.0 * k) + p2(k) * (3.0 * k + 34.0) + 36.0,
        ),
        _ => return None,
    };
    Some(v)
}

pub const THRESHOLD_SEARCH_INTERVAL: (f64, f64) = (1.0, 16.0);
pub const THRESHOLD_TOLERANCE: f64 = 1e-6;
const SIGN_SCAN_STEPS: usize = 1500;

/// The real `k` in `[1, 16]` where `c1(k)^2 = c0 * c2(k)`, by bisection.
///
/// The interval is scanned first and exactly one sign change of
/// `c1^2 - c2` is required.
pub fn threshold_crossover(structure: Structure) -> Result<f64, FamilyError> {
    let f = |k: f64| {
        closed_form_real(structure, k)
            .map(|(c1, c2)| c1 * c1 - c2)
            .ok_or(FamilyError::NotCovered(structure))
    };
    let (lo, hi) = THRESHOLD_SEARCH_INTERVAL;
    let mut changes = 0;
    let mut bracket = None;
    let mut prev_k = lo;
    let mut prev = f(lo)?;
    for i in 1..=SIGN_SCAN_STEPS {
        let k = lo + (hi - lo) * i as f64 / SIGN_SCAN_STEPS as f64;
        let cur = f(k)?;
        if (prev > 0.0) != (cur > 0.0) {
            changes += 1;
            bracket = Some((prev_k, k));
        }
        prev_k = k;
        prev = cur;
    }
    let (mut a, mut b) = match (changes, bracket) {
        (1, Some(br)) => br,
        (0, _) => return Err(FamilyError::NoSignChange { structure, lo, hi }),
        (count, _) => {
            return Err(FamilyError::MultipleSignChanges {
                structure,
                count,
                lo,
                hi,
            })
        }
    };
    let fa_positive = f(a)? > 0.0;
    while b - a > THRESHOLD_TOLERANCE {
        let mid = 0.5 * (a + b);
        if (f(mid)? > 0.0) == fa_positive {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Smallest integer `k` in `1..=max_k` whose closed-form coefficients violate
/// log-concavity at the second-highest exponent.
pub fn first_violating_k(structure: Structure, max_k: u32) -> Result<Option<u32>, FamilyError> {
    if !structure.is_covered() {
        return Err(FamilyError::NotCovered(structure));
    }
    Ok((1..=max_k).find(|&k| {
        top_coefficients_closed_form(structure.with_k(k))
            .expect("covered")
            .violates()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{independence_polynomial_general, independence_polynomial_tree};

    #[test]
    fn structure_names_round_trip() {
        for s in Structure::ALL {
            assert_eq!(s.name().parse::<Structure>().unwrap(), s);
        }
        assert!("3kk4".parse::<Structure>().is_err());
        assert_eq!(
            "3skk2".parse::<Structure>().unwrap(),
            Structure::new(Base::Star3, 2)
        );
    }

    #[test]
    fn vertex_counts_and_degrees() {
        let spec = Structure::new(Base::Plain3, 0).with_k(1);
        let t = build_family_tree(spec).unwrap();
        assert_eq!(t.order(), 14);
        for s in Structure::ALL {
            for k in 1..6 {
                let spec = s.with_k(k);
                let g = build_family_tree(spec).unwrap().to_graph();
                assert_eq!(g.order(), spec.vertex_count());
                assert!(g.is_tree());
                assert_eq!(g.degree(0), 3);
                assert_eq!(g.degree(2), k as usize + 1);
                assert_eq!(g.degree(3), (k + s.j) as usize + 1);
            }
        }
        assert_eq!(
            build_family_tree(Structure::new(Base::Star3, 1).with_k(0)),
            Err(FamilyError::KOutOfRange(0))
        );
    }

    #[test]
    fn t1_and_t2_are_family_members() {
        let t1 = build_family_tree(Structure::new(Base::Plain3, 0).with_k(4)).unwrap();
        let t2 = build_family_tree(Structure::new(Base::Star3, 1).with_k(3)).unwrap();
        assert_eq!(
            independence_polynomial_tree(&t1),
            NamedTree::T1.published_polynomial()
        );
        assert_eq!(
            independence_polynomial_tree(&t2),
            NamedTree::T2.published_polynomial()
        );
    }

    #[test]
    fn named_trees_match_published_polynomials() {
        for (name, n) in [
            (NamedTree::T1, 26),
            (NamedTree::T2, 26),
            (NamedTree::Ex28, 28),
            (NamedTree::Ex35, 35),
        ] {
            let g = build_named_graph(name);
            assert_eq!(g.order(), n, "{name}");
            let t = build_named_tree(name);
            assert_eq!(
                independence_polynomial_tree(&t),
                name.published_polynomial(),
                "{name}"
            );
        }
        assert_eq!(
            independence_polynomial_general(&build_named_graph(NamedTree::Ex28)),
            NamedTree::Ex28.published_polynomial()
        );
    }

    #[test]
    fn closed_form_spot_values() {
        let tc = top_coefficients_closed_form(Structure::new(Base::Plain3, 1).with_k(4)).unwrap();
        assert_eq!(tc.c1, big(68));
        assert_eq!(tc.c2, big(5606));
        assert_eq!(tc.top_exponent, 15);
        let tc = top_coefficients_closed_form(Structure::new(Base::Star3, 0).with_k(3)).unwrap();
        assert_eq!(tc.c1, big(39));
        assert!(top_coefficients_closed_form(Structure::new(Base::Plain3, 0).with_k(4)).is_none());
        assert!(top_coefficients_closed_form(Structure::new(Base::Star3, 1).with_k(4)).is_none());
    }

    #[test]
    fn closed_forms_agree_with_tree_pass() {
        for s in Structure::COVERED {
            for k in 1..=8 {
                let spec = s.with_k(k);
                let poly = independence_polynomial_tree(&build_family_tree(spec).unwrap());
                let closed = top_coefficients_closed_form(spec).unwrap();
                assert_eq!(TopCoefficients::of(&poly).unwrap(), closed, "{s} k={k}");
            }
        }
    }

    #[test]
    fn thresholds() {
        let expect = [
            (Structure::new(Base::Plain3, 1), 3.2329, 4),
            (Structure::new(Base::Plain3, 2), 3.61719, 4),
            (Structure::new(Base::Star3, 2), 2.83611, 3),
            (Structure::new(Base::Star3, 3), 3.76626, 4),
            (Structure::new(Base::Star3, 0), 3.31871, 4),
        ];
        for (s, root, first) in expect {
            let r = threshold_crossover(s).unwrap();
            assert!((r - root).abs() < 1e-3, "{s}: {r}");
            assert_eq!(first_violating_k(s, 12).unwrap(), Some(first));
        }
        assert!(matches!(
            threshold_crossover(Structure::new(Base::Plain3, 0)),
            Err(FamilyError::NotCovered(_))
        ));
    }
}
