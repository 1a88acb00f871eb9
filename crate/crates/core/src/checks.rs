//! Log-concavity and unimodality verdicts for coefficient sequences.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::poly::Polynomial;

/// A failure of `s_k^2 >= s_{k-1} * s_{k+1}` at an interior index `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub k: usize,
    pub prev: BigUint,
    pub cur: BigUint,
    pub next: BigUint,
    /// `alpha - k`, where `alpha` is the degree of the polynomial.
    pub offset: usize,
}

impl Violation {
    /// `s_k^2`.
    pub fn lhs(&self) -> BigUint {
        &self.cur * &self.cur
    }

    /// `s_{k-1} * s_{k+1}`.
    pub fn rhs(&self) -> BigUint {
        &self.prev * &self.next
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcavityReport {
    pub is_log_concave: bool,
    pub alpha: usize,
    /// Ascending in `k`.
    pub violations: Vec<Violation>,
}

impl ConcavityReport {
    /// Smallest `alpha - k` over all violations.
    pub fn min_offset(&self) -> Option<usize> {
        self.violations.iter().map(|v| v.offset).min()
    }
}

/// Wire shape of one violation: `{"k", "offset", "lhs", "rhs"}` with the two
/// sides as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationJson {
    pub k: usize,
    pub offset: usize,
    pub lhs: String,
    pub rhs: String,
}

impl From<&Violation> for ViolationJson {
    fn from(v: &Violation) -> Self {
        ViolationJson {
            k: v.k,
            offset: v.offset,
            lhs: v.lhs().to_string(),
            rhs: v.rhs().to_string(),
        }
    }
}

#[derive(Serialize)]
struct ConcavityReportJson {
    log_concave: bool,
    alpha: usize,
    violations: Vec<ViolationJson>,
}

impl Serialize for ConcavityReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ConcavityReportJson {
            log_concave: self.is_log_concave,
            alpha: self.alpha,
            violations: self.violations.iter().map(ViolationJson::from).collect(),
        }
        .serialize(serializer)
    }
}

/// Tests every interior index `1 <= k <= degree - 1`. A zero `s_k` between
/// positive neighbours counts as a violation.
pub fn check_log_concave(p: &Polynomial) -> ConcavityReport {
    let c = p.coeffs();
    let alpha = p.degree().unwrap_or(0);
    let violations: Vec<Violation> = c
        .windows(3)
        .enumerate()
        .filter(|(_, w)| &w[1] * &w[1] < &w[0] * &w[2])
        .map(|(i, w)| Violation {
            k: i + 1,
            prev: w[0].clone(),
            cur: w[1].clone(),
            next: w[2].clone(),
            offset: alpha - (i + 1),
        })
        .collect();
    ConcavityReport {
        is_log_concave: violations.is_empty(),
        alpha,
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnimodalReport {
    pub is_unimodal: bool,
    /// First and last index of the maximal plateau, when unimodal and nonzero.
    pub mode_low: Option<usize>,
    pub mode_high: Option<usize>,
    /// An index `i` with `s_i < s_{i+1}` that follows a strict descent.
    pub first_descent_then_ascent: Option<usize>,
}

impl UnimodalReport {
    /// Unimodal with a single peak strictly above both neighbours.
    pub fn has_unique_mode(&self) -> bool {
        self.is_unimodal && self.mode_low.is_some() && self.mode_low == self.mode_high
    }
}

/// Unimodal means no strict descent is ever followed by a strict ascent.
/// Plateaus at the peak are allowed.
pub fn check_unimodal(p: &Polynomial) -> UnimodalReport {
    let c = p.coeffs();
    let mut descended = false;
    let mut witness = None;
    for (i, w) in c.windows(2).enumerate() {
        if w[1] < w[0] {
            descended = true;
        } else if w[1] > w[0] && descended {
            witness = Some(i);
            break;
        }
    }
    if witness.is_some() {
        return UnimodalReport {
            is_unimodal: false,
            mode_low: None,
            mode_high: None,
            first_descent_then_ascent: witness,
        };
    }
    let max = c.iter().max();
    let (mode_low, mode_high) = match max {
        Some(m) => (
            c.iter().position(|x| x == m),
            c.iter().rposition(|x| x == m),
        ),
        None => (None, None),
    };
    UnimodalReport {
        is_unimodal: true,
        mode_low,
        mode_high,
        first_descent_then_ascent: None,
    }
}

/// True when every coefficient is positive.
pub fn all_positive(p: &Polynomial) -> bool {
    p.coeffs().iter().all(|c| !c.is_zero())
}
