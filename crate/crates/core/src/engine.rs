//! Independence polynomial algorithms.
//!
//! Three independent routes to the same polynomial:
//! - [`independence_polynomial_general`]: vertex-deletion recursion with
//!   component splitting, valid for any simple graph;
//! - [`independence_polynomial_tree`]: a two-state bottom-up pass over a tree;
//! - [`independence_polynomial_bruteforce`]: counting every independent subset
//!   directly, used as the oracle for the other two.

use num_bigint::BigUint;
use thiserror::Error;

use crate::graph::{Graph, Tree};
use crate::poly::Polynomial;

/// Largest order accepted by the subset brute force.
pub const BRUTE_FORCE_MAX_ORDER: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("brute force supports at most {max} vertices, got {n}")]
    TooLargeForBruteForce { n: usize, max: usize },
}

/// Partial results for a rooted subtree: independent sets that avoid the
/// subtree root, and those that contain it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDpState {
    pub excluded: Polynomial,
    pub included: Polynomial,
}

impl TreeDpState {
    pub fn leaf() -> Self {
        TreeDpState {
            excluded: Polynomial::one(),
            included: Polynomial::from_u64s(&[0, 1]),
        }
    }

    /// Combines the states of a vertex's children into the vertex's state.
    pub fn from_children<'a, I>(children: I) -> Self
    where
        I: IntoIterator<Item = &'a TreeDpState>,
    {
        let mut children = children.into_iter();
        let Some(first) = children.next() else {
            return Self::leaf();
        };
        let mut excluded = first.total();
        let mut included = first.excluded.clone();
        for child in children {
            excluded = &excluded * &child.total();
            included = &included * &child.excluded;
        }
        TreeDpState {
            excluded,
            included: included.shift(),
        }
    }

    pub fn total(&self) -> Polynomial {
        &self.excluded + &self.included
    }
}

/// `I(G) = I(G - v) + x·I(G - N[v])`, applied to a maximum-degree vertex of
/// each connected component; disconnected graphs factor into the product of
/// their components.
pub fn independence_polynomial_general(g: &Graph) -> Polynomial {
    if g.order() == 0 {
        return Polynomial::one();
    }
    let components = g.connected_components();
    if components.len() > 1 {
        return components.iter().fold(Polynomial::one(), |acc, (c, _)| {
            &acc * &connected_polynomial(c)
        });
    }
    connected_polynomial(g)
}

fn connected_polynomial(g: &Graph) -> Polynomial {
    match g.order() {
        0 => return Polynomial::one(),
        1 => return Polynomial::one_plus_x(),
        _ => {}
    }
    let n = g.order() as u64;
    // complete graph: only singletons
    if g.size() as u64 == n * (n - 1) / 2 {
        return Polynomial::from_u64s(&[1, n]);
    }
    let pivot = (0..g.order())
        .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
        .expect("nonempty graph");
    let without = independence_polynomial_general(&g.delete_vertices(&[pivot]));
    let closed = g.closed_neighborhood(pivot).expect("pivot is in range");
    let without_closed = independence_polynomial_general(&g.delete_vertices(&closed));
    &without + &without_closed.shift()
}

/// Bottom-up evaluation over a rooted tree in post-order (no call recursion).
pub fn independence_polynomial_tree(t: &Tree) -> Polynomial {
    tree_dp_state(t).total()
}

/// The root's [`TreeDpState`].
pub fn tree_dp_state(t: &Tree) -> TreeDpState {
    let children = t.children();
    let mut states: Vec<Option<TreeDpState>> = vec![None; t.order()];
    for v in t.postorder() {
        let state = if children[v].is_empty() {
            TreeDpState::leaf()
        } else {
            let kids: Vec<TreeDpState> = children[v]
                .iter()
                .map(|&c| states[c].take().expect("children precede parents"))
                .collect();
            TreeDpState::from_children(&kids)
        };
        states[v] = Some(state);
    }
    states[t.root()].take().expect("root is visited last")
}

/// Counts independent sets of each size by testing all `2^n` vertex subsets.
pub fn independence_polynomial_bruteforce(g: &Graph) -> Result<Polynomial, EngineError> {
    let n = g.order();
    if n > BRUTE_FORCE_MAX_ORDER {
        return Err(EngineError::TooLargeForBruteForce {
            n,
            max: BRUTE_FORCE_MAX_ORDER,
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let mut counts = vec![0u64; n + 1];
    for set in 0u32..(1u32 << n) {
        let mut rest = set;
        let mut independent = true;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            if adj[v] & set != 0 {
                independent = false;
                break;
            }
            rest &= rest - 1;
        }
        if independent {
            counts[set.count_ones() as usize] += 1;
        }
    }
    Ok(Polynomial::from_coeffs(
        counts.into_iter().map(BigUint::from).collect(),
    ))
}

/// Size of a largest independent set, routed through the tree pass when `g`
/// is a tree.
pub fn independence_number(g: &Graph) -> usize {
    independence_polynomial_auto(g)
        .degree()
        .expect("independence polynomials are nonzero")
}

/// Tree pass for trees, deletion recursion otherwise.
pub fn independence_polynomial_auto(g: &Graph) -> Polynomial {
    match Tree::from_graph(g, 0) {
        Ok(t) => independence_polynomial_tree(&t),
        Err(_) => independence_polynomial_general(g),
    }
}
