//! Hyperplane arrangements built from weighted graphs, and the coning
//! construction that centralizes an affine arrangement.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::psi_graph::PsiGraph;
use crate::rational::{format_rational, Rational};

/// A single hyperplane `sum coeffs[i] * x_i = rhs`, stored with its
/// first nonzero coefficient scaled to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HyperplaneError {
    #[error("all coefficients are zero")]
    Degenerate,
}

impl Hyperplane {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Result<Self, HyperplaneError> {
        let lead = coeffs
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(HyperplaneError::Degenerate)?;
        let inv = lead.recip();
        Ok(Hyperplane {
            coeffs: coeffs.iter().map(|c| c * inv).collect(),
            rhs: rhs * inv,
        })
    }

    /// The hyperplane `x_a = x_b` in `dim` coordinates.
    pub fn coordinate_difference(dim: usize, a: usize, b: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); dim];
        coeffs[a.min(b)] = Rational::from_integer(1);
        coeffs[a.max(b)] = Rational::from_integer(-1);
        Hyperplane { coeffs, rhs: Rational::zero() }
    }

    /// The hyperplane `x_v = value` in `dim` coordinates.
    pub fn coordinate_value(dim: usize, v: usize, value: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); dim];
        coeffs[v] = Rational::from_integer(1);
        Hyperplane { coeffs, rhs: value }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn rhs(&self) -> &Rational {
        &self.rhs
    }

    pub fn dimension(&self) -> usize {
        self.coeffs.len()
    }

    /// The equation as a linear-algebra row `[coeffs.., rhs]`.
    pub(crate) fn row(&self) -> Vec<Rational> {
        let mut row = self.coeffs.clone();
        row.push(self.rhs);
        row
    }

    /// Indices of coordinates with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Renders the equation using the given coordinate names.
    pub fn display(&self, coords: &[String]) -> String {
        let mut lhs = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if *c < Rational::zero() {
                if lhs.is_empty() { "-" } else { " - " }
            } else if lhs.is_empty() {
                ""
            } else {
                " + "
            };
            lhs.push_str(sign);
            let mag = c.abs();
            if mag != Rational::from_integer(1) {
                lhs.push_str(&format_rational(&mag));
            }
            lhs.push_str(&coords[i]);
        }
        format!("{} = {}", lhs, format_rational(&self.rhs))
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = (1..=self.coeffs.len()).map(|i| format!("x{}", i)).collect();
        f.write_str(&self.display(&coords))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrangementKind {
    /// Hyperplanes may have nonzero right-hand sides.
    Affine,
    /// Central arrangement obtained by coning: an extra last coordinate
    /// `y`, homogenized equations, and the extra hyperplane `y = 0`.
    Coned,
}

/// A finite list of distinct hyperplanes in a fixed dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    dimension: usize,
    kind: ArrangementKind,
    hyperplanes: Vec<Hyperplane>,
    /// The graph this arrangement was built from, when there is one.
    origin: Option<PsiGraph>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("hyperplane {0} has dimension {1}, arrangement has {2}")]
    DimensionMismatch(usize, usize, usize),
    #[error("hyperplanes {0} and {1} coincide")]
    Duplicate(usize, usize),
    #[error("arrangement is already coned")]
    AlreadyConed,
}

impl Arrangement {
    pub fn new(
        dimension: usize,
        hyperplanes: Vec<Hyperplane>,
        kind: ArrangementKind,
    ) -> Result<Self, ArrangementError> {
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.dimension() != dimension {
                return Err(ArrangementError::DimensionMismatch(i, h.dimension(), dimension));
            }
            if let Some(j) = hyperplanes[..i].iter().position(|g| g == h) {
                return Err(ArrangementError::Duplicate(j, i));
            }
        }
        Ok(Arrangement { dimension, kind, hyperplanes, origin: None })
    }

    /// The arrangement of a weighted graph: one hyperplane `x_a = x_b`
    /// per edge, one `x_v = value` per weight, in that order.
    pub fn build_affine(g: &PsiGraph) -> Arrangement {
        let n = g.n();
        let mut hyperplanes = Vec::with_capacity(g.hyperplane_count());
        for &(a, b) in g.edges() {
            hyperplanes.push(Hyperplane::coordinate_difference(n, a, b));
        }
        for v in 0..n {
            for value in g.psi(v) {
                hyperplanes.push(Hyperplane::coordinate_value(n, v, *value));
            }
        }
        Arrangement {
            dimension: n,
            kind: ArrangementKind::Affine,
            hyperplanes,
            origin: Some(g.clone()),
        }
    }

    /// Homogenizes with a new last coordinate `y`: each `sum c x = b`
    /// becomes `sum c x - b y = 0`, and `y = 0` is appended.
    pub fn cone(&self) -> Result<Arrangement, ArrangementError> {
        if self.kind == ArrangementKind::Coned {
            return Err(ArrangementError::AlreadyConed);
        }
        let dim = self.dimension + 1;
        let mut hyperplanes: Vec<Hyperplane> = self
            .hyperplanes
            .iter()
            .map(|h| {
                let mut coeffs = h.coeffs.clone();
                coeffs.push(-h.rhs);
                // The leading coefficient is untouched, so the result is
                // already in canonical form.
                Hyperplane { coeffs, rhs: Rational::zero() }
            })
            .collect();
        let mut y_coeffs = vec![Rational::zero(); dim];
        y_coeffs[dim - 1] = Rational::from_integer(1);
        hyperplanes.push(Hyperplane { coeffs: y_coeffs, rhs: Rational::zero() });
        Ok(Arrangement {
            dimension: dim,
            kind: ArrangementKind::Coned,
            hyperplanes,
            origin: self.origin.clone(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn kind(&self) -> ArrangementKind {
        self.kind
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn origin(&self) -> Option<&PsiGraph> {
        self.origin.as_ref()
    }

    /// Coordinate names: `x1..xn` plus `y` for the cone coordinate.
    pub fn coordinate_names(&self) -> Vec<String> {
        match self.kind {
            ArrangementKind::Affine => {
                (1..=self.dimension).map(|i| format!("x{}", i)).collect()
            }
            ArrangementKind::Coned => {
                let mut names: Vec<String> =
                    (1..self.dimension).map(|i| format!("x{}", i)).collect();
                names.push("y".to_owned());
                names
            }
        }
    }
}
