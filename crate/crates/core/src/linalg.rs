//! Incremental reduced row echelon form over exact rationals.
//!
//! An [`Echelon`] holds the canonical equation system of an affine
//! subspace: rows `[c_1, .., c_d, b]` encode `sum c_i x_i = b`, pivots
//! are 1, pivot columns strictly increase down the rows, and every
//! pivot column is eliminated from all other rows.  Canonicity makes
//! subspace equality a plain row-list comparison.

use num_traits::Zero;

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Echelon {
    vars: usize,
    rows: Vec<Vec<Rational>>,
}

impl Echelon {
    /// The full ambient space: no equations.
    pub fn ambient(vars: usize) -> Self {
        Echelon { vars, rows: Vec::new() }
    }

    pub fn from_rows(vars: usize, rows: impl IntoIterator<Item = Vec<Rational>>) -> Option<Self> {
        let mut system = Echelon::ambient(vars);
        for row in rows {
            if !system.adjoin_row(row)? {
                continue;
            }
        }
        Some(system)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Codimension of the solution set.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Eliminates all pivots of `self` from `row`.
    pub fn reduce(&self, mut row: Vec<Rational>) -> Vec<Rational> {
        debug_assert_eq!(row.len(), self.vars + 1);
        for r in &self.rows {
            let p = pivot(r).expect("echelon rows are nonzero");
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p];
            for (a, b) in row.iter_mut().zip(r.iter()) {
                *a -= factor * b;
            }
        }
        row
    }

    /// Whether the equation `row` holds on the whole solution set.
    pub fn implies(&self, row: Vec<Rational>) -> bool {
        self.reduce(row).iter().all(Rational::is_zero)
    }

    /// Adds one equation.  Returns `Some(true)` if the rank grew,
    /// `Some(false)` if the equation was already implied, and `None`
    /// if the system became inconsistent.
    pub fn adjoin_row(&mut self, row: Vec<Rational>) -> Option<bool> {
        let mut row = self.reduce(row);
        let Some(p) = pivot_in_vars(&row, self.vars) else {
            // No variable part left: either trivial or contradictory.
            return if row[self.vars].is_zero() { Some(false) } else { None };
        };
        let inv = row[p].recip();
        for a in row.iter_mut() {
            *a *= inv;
        }
        for r in self.rows.iter_mut() {
            if r[p].is_zero() {
                continue;
            }
            let factor = r[p];
            for (a, b) in r.iter_mut().zip(row.iter()) {
                *a -= factor * b;
            }
        }
        let at = self
            .rows
            .partition_point(|r| pivot(r).expect("nonzero row") < p);
        self.rows.insert(at, row);
        Some(true)
    }
}

fn pivot(row: &[Rational]) -> Option<usize> {
    row.iter().position(|c| !c.is_zero())
}

fn pivot_in_vars(row: &[Rational], vars: usize) -> Option<usize> {
    row[..vars].iter().position(|c| !c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn row(entries: &[i64]) -> Vec<Rational> {
        entries.iter().map(|&n| q(n)).collect()
    }

    #[test]
    fn canonical_form_is_independent_of_row_order() {
        // x - y = 0 and y - z = 0 in three variables.
        let a = Echelon::from_rows(3, vec![row(&[1, -1, 0, 0]), row(&[0, 1, -1, 0])]).unwrap();
        let b = Echelon::from_rows(3, vec![row(&[0, 1, -1, 0]), row(&[-2, 2, 0, 0])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rank(), 2);
        // Both rows now express x and y in terms of z.
        assert_eq!(a.rows()[0], row(&[1, 0, -1, 0]));
        assert_eq!(a.rows()[1], row(&[0, 1, -1, 0]));
    }

    #[test]
    fn detects_inconsistency() {
        // x = 1 and x = 2.
        let rows = vec![row(&[1, 1]), row(&[1, 2])];
        assert_eq!(Echelon::from_rows(1, rows), None);
    }

    #[test]
    fn implied_rows_do_not_grow_rank() {
        let mut e = Echelon::from_rows(2, vec![row(&[1, -1, 0])]).unwrap();
        assert_eq!(e.adjoin_row(row(&[2, -2, 0])), Some(false));
        assert_eq!(e.rank(), 1);
        assert!(e.implies(row(&[-3, 3, 0])));
        assert!(!e.implies(row(&[1, 0, 0])));
    }

    #[test]
    fn affine_systems_keep_constants() {
        // x = 2 intersected with x - y = 0 forces y = 2.
        let e = Echelon::from_rows(2, vec![row(&[1, 0, 2]), row(&[1, -1, 0])]).unwrap();
        assert_eq!(e.rank(), 2);
        assert!(e.implies(row(&[0, 1, 2])));
    }
}
