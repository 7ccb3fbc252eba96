//! Exact rational scalars used for hyperplane coefficients and weights.

use std::fmt;

use thiserror::Error;

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = num_rational::Rational64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in rational literal {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"p"` or `"p/q"` with optional sign into a [`Rational`].
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let malformed = || ParseRationalError::Malformed(text.to_owned());
    match trimmed.split_once('/') {
        None => {
            let n: i64 = trimmed.parse().map_err(|_| malformed())?;
            Ok(Rational::from_integer(n))
        }
        Some((num, den)) => {
            let n: i64 = num.trim().parse().map_err(|_| malformed())?;
            let d: i64 = den.trim().parse().map_err(|_| malformed())?;
            if d == 0 {
                return Err(ParseRationalError::ZeroDenominator(text.to_owned()));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Formats a rational as `"p"` or `"p/q"`, the inverse of [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Helper wrapper so rationals render as `p/q` inside format strings.
pub struct DisplayRational<'a>(pub &'a Rational);

impl fmt::Display for DisplayRational<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(self.0))
    }
}
