//! Dense univariate polynomials with integer coefficients.
//!
//! Characteristic polynomials of the arrangements in this crate always
//! have integer coefficients, so a thin exact type is enough; no general
//! polynomial arithmetic is needed.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

/// Polynomial in one variable `t`, coefficients indexed by degree.
///
/// The coefficient vector never has trailing zeros; the zero polynomial
/// is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Deserialize)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial { coeffs: vec![1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    /// The monomial `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        IntPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn eval(&self, t: i128) -> i128 {
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c as i128;
        }
        acc
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect();
        IntPolynomial::from_coeffs(coeffs)
    }

    pub fn add_scaled_monomial(&mut self, k: usize, c: i64) {
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, 0);
        }
        self.coeffs[k] += c;
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(coeffs)
    }

    /// Multiplies by the linear factor `t - root`.
    pub fn mul_linear(&self, root: i64) -> IntPolynomial {
        self.mul(&IntPolynomial::from_coeffs(vec![-root, 1]))
    }

    /// Exact division by `t - root`; `None` when `root` is not a root.
    pub fn div_linear(&self, root: i64) -> Option<IntPolynomial> {
        if self.is_zero() {
            return Some(IntPolynomial::zero());
        }
        let mut quotient = vec![0i64; self.coeffs.len() - 1];
        let mut carry: i64 = 0;
        for k in (0..self.coeffs.len()).rev() {
            let value = self.coeffs[k] + carry;
            if k == 0 {
                if value != 0 {
                    return None;
                }
            } else {
                quotient[k - 1] = value;
                carry = value * root;
            }
        }
        Some(IntPolynomial::from_coeffs(quotient))
    }

    /// Product of `t - b` over the given multiset of roots.
    pub fn from_roots(roots: &[i64]) -> IntPolynomial {
        roots
            .iter()
            .fold(IntPolynomial::one(), |acc, &b| acc.mul_linear(b))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[k];
            if c == 0 {
                continue;
            }
            let magnitude = c.unsigned_abs();
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
                first = false;
            } else if c < 0 {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let needs_coeff = magnitude != 1 || k == 0;
            if needs_coeff {
                write!(f, "{}", magnitude)?;
            }
            match k {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{}", k)?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
