//! Dense polynomials with arbitrary-precision nonnegative integer coefficients.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Coefficients in ascending order of exponent, with no trailing zeros.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<BigUint>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial {
            coeffs: vec![BigUint::one()],
        }
    }

    /// `1 + x`, the independence polynomial of a single vertex.
    pub fn one_plus_x() -> Self {
        Polynomial {
            coeffs: vec![BigUint::one(), BigUint::one()],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_u64s(coeffs: &[u64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Parses ascending decimal coefficients, as produced by [`Self::to_decimal_strings`].
    pub fn from_decimal_strings<S: AsRef<str>>(coeffs: &[S]) -> Result<Self, String> {
        coeffs
            .iter()
            .map(|s| {
                s.as_ref()
                    .parse::<BigUint>()
                    .map_err(|e| format!("bad coefficient {:?}: {e}", s.as_ref()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_coeffs)
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigUint> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k`; zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigUint {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Multiplication by `x`.
    pub fn shift(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigUint::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    /// Exact value at a nonnegative integer, by Horner's rule.
    pub fn eval(&self, t: u64) -> BigUint {
        let t = BigUint::from(t);
        self.coeffs
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, c| acc * &t + c)
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }

    pub(crate) fn add_assign_ref(&mut self, other: &Polynomial) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), BigUint::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        // Nonnegative coefficients cannot cancel, so canonical form is kept
        // unless both inputs were zero-padded, which never happens.
        debug_assert!(self.coeffs.last().is_none_or(|c| !c.is_zero()));
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = long.clone();
        out.add_assign_ref(short);
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    /// Schoolbook convolution.
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![BigUint::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial { coeffs }
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

/// Renders ascending terms, e.g. `1 + 26x + 300x^2`. Unit coefficients on
/// `x^k` (k ≥ 1) are omitted, as are zero terms.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (k, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{c}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{c}x^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    coeffs: Vec<String>,
}

/// Serializes as `{"coeffs": ["1", "26", ...]}`; decimal strings keep the
/// values exact for consumers that read JSON numbers as doubles.
impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolynomialRepr {
            coeffs: self.to_decimal_strings(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PolynomialRepr::deserialize(deserializer)?;
        Polynomial::from_decimal_strings(&repr.coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[u64]) -> Polynomial {
        Polynomial::from_u64s(c)
    }

    #[test]
    fn identities() {
        assert_eq!(Polynomial::one(), p(&[1]));
        assert_eq!(Polynomial::one().degree(), Some(0));
        assert_eq!(Polynomial::zero().degree(), None);
        assert_eq!(&Polynomial::one() * &p(&[3, 0, 2]), p(&[3, 0, 2]));
        assert_eq!(&p(&[3, 0, 2]) * &Polynomial::one(), p(&[3, 0, 2]));
    }

    #[test]
    fn addition() {
        assert_eq!(&p(&[1, 2]) + &p(&[1]), p(&[2, 2]));
        assert_eq!(&p(&[1, 4, 3]) + &Polynomial::zero(), p(&[1, 4, 3]));
        assert_eq!(&p(&[1, 4, 3]) + &p(&[0, 0, 1]), p(&[1, 4, 4]));
    }

    #[test]
    fn multiplication() {
        let k2 = p(&[1, 2]);
        assert_eq!(&k2 * &k2, p(&[1, 4, 4]));
        assert_eq!(k2.pow(3), p(&[1, 6, 12, 8]));
        assert_eq!(&k2 * &k2 * k2.clone(), p(&[1, 6, 12, 8]));
    }

    #[test]
    fn shifting() {
        assert_eq!(Polynomial::one().shift(), p(&[0, 1]));
        assert_eq!(p(&[1, 2]).shift(), p(&[0, 1, 2]));
        assert_eq!(p(&[1, 2]).shift().degree(), Some(2));
        assert_eq!(Polynomial::zero().shift(), Polynomial::zero());
    }

    #[test]
    fn evaluation() {
        assert_eq!(p(&[1, 2]).eval(1), BigUint::from(3u32));
        assert_eq!(p(&[1, 4, 3]).eval(1), BigUint::from(8u32));
        assert_eq!(p(&[1, 4, 3]).eval(0), BigUint::one());
        assert_eq!(p(&[1, 4, 3]).eval(10), BigUint::from(341u32));
    }

    #[test]
    fn canonical_trimming() {
        assert_eq!(p(&[1, 0, 0]), p(&[1]));
        assert_eq!(p(&[0, 0]), Polynomial::zero());
    }

    #[test]
    fn text_rendering() {
        assert_eq!(p(&[1, 26, 300]).to_string(), "1 + 26x + 300x^2");
        assert_eq!(p(&[1, 1, 0, 1]).to_string(), "1 + x + x^3");
        assert_eq!(p(&[0, 2]).to_string(), "2x");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }

    #[test]
    fn json_rendering() {
        let poly = p(&[1, 26, 300]);
        let json = serde_json::to_string(&poly).unwrap();
        assert_eq!(json, r#"{"coeffs":["1","26","300"]}"#);
        let back: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, poly);
        assert!(serde_json::from_str::<Polynomial>(r#"{"coeffs":["-1"]}"#).is_err());
    }

    #[test]
    fn big_coefficients_stay_exact() {
        let big = p(&[1, 2]).pow(100);
        assert_eq!(big.coeff(100), BigUint::one() << 100);
        assert_eq!(big.eval(1), BigUint::from(3u32).pow(100));
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(any::<u64>(), 0..8).prop_map(|c| p(&c))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &Polynomial::zero(), a.clone());
            prop_assert_eq!(&a * &Polynomial::one(), a.clone());
        }

        #[test]
        fn degree_and_canonical_form(a in arb_poly(), b in arb_poly()) {
            let prod = &a * &b;
            let sum = &a + &b;
            for q in [&prod, &sum, &a.shift()] {
                prop_assert!(q.coeffs().last().is_none_or(|c| !c.is_zero()));
            }
            if let (Some(da), Some(db)) = (a.degree(), b.degree()) {
                prop_assert_eq!(prod.degree(), Some(da + db));
            }
            prop_assert_eq!(prod.eval(1), a.eval(1) * b.eval(1));
        }
    }
}
