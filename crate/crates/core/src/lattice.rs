//! Intersection posets of arrangements: flats, rank, Mobius function,
//! characteristic polynomial, modular elements, and the modular-chain
//! search that decides supersolvability of central arrangements.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementKind};
use crate::linalg::Echelon;
use crate::polynomial::IntPolynomial;
use crate::rational::{format_rational, Rational};

/// Flats are refused beyond this count unless a custom limit is given.
pub const DEFAULT_FLAT_LIMIT: usize = 100_000;

/// A nonempty intersection of hyperplanes, identified by the canonical
/// echelon form of its equation system.  Rank equals codimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flat {
    system: Echelon,
}

impl Flat {
    pub fn rank(&self) -> usize {
        self.system.rank()
    }

    pub fn dim(&self) -> usize {
        self.system.vars() - self.system.rank()
    }

    /// Canonical equation rows `[c_1, .., c_d, rhs]`.
    pub fn equations(&self) -> &[Vec<Rational>] {
        self.system.rows()
    }

    /// Whether the equation `sum coeffs x = rhs` holds on the flat.
    pub fn implies(&self, coeffs: &[Rational], rhs: Rational) -> bool {
        let mut row = coeffs.to_vec();
        row.push(rhs);
        self.system.implies(row)
    }

    /// Residual of a single coordinate after reduction: expresses `x_i`
    /// minus a combination of the flat's equations.  Two coordinates are
    /// forced equal on the flat exactly when their residuals agree.
    fn coordinate_residual(&self, i: usize) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); self.system.vars() + 1];
        row[i] = Rational::from_integer(1);
        self.system.reduce(row)
    }

    fn rows_key(&self) -> Vec<Vec<Rational>> {
        self.system.rows().to_vec()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("arrangement has more than {limit} flats; refusing to enumerate")]
    FlatLimitExceeded { limit: usize },
    #[error("operation requires a central arrangement (all right-hand sides zero)")]
    NotCentral,
    #[error("operation requires a coned arrangement")]
    NotConed,
    #[error("order must be a permutation of the base coordinates")]
    BadOrder,
}

/// Dense bitset sized for one flat per bit.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn first_common(&self, other: &Bits) -> Option<usize> {
        self.0
            .iter()
            .zip(&other.0)
            .enumerate()
            .find_map(|(w, (a, b))| {
                let word = a & b;
                (word != 0).then(|| w * 64 + word.trailing_zeros() as usize)
            })
    }

    fn last_common(&self, other: &Bits) -> Option<usize> {
        self.0
            .iter()
            .zip(&other.0)
            .enumerate()
            .rev()
            .find_map(|(w, (a, b))| {
                let word = a & b;
                (word != 0).then(|| w * 64 + 63 - word.leading_zeros() as usize)
            })
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

/// The poset of all nonempty hyperplane intersections, ordered by
/// reverse inclusion; a geometric lattice for central arrangements.
#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    arrangement: Arrangement,
    flats: Vec<Flat>,
    index: HashMap<Vec<Vec<Rational>>, usize>,
    rank: Vec<usize>,
    /// `atom_of[h]` is the flat of hyperplane `h`.
    atom_of: Vec<usize>,
    /// `lower[i]` holds the j with `j <= i` (flats containing flat i).
    lower: Vec<Bits>,
    /// `upper[i]` holds the j with `j >= i`.
    upper: Vec<Bits>,
    covers_up: Vec<Vec<usize>>,
    covers_down: Vec<Vec<usize>>,
    top: Option<usize>,
    central: bool,
}

impl IntersectionLattice {
    pub fn build(arrangement: &Arrangement) -> Result<Self, LatticeError> {
        Self::build_with_limit(arrangement, DEFAULT_FLAT_LIMIT)
    }

    /// Enumerates all flats by closing the ambient space under
    /// intersection with single hyperplanes, then derives order, covers
    /// and ranks.  Fails once more than `limit` flats appear.
    pub fn build_with_limit(
        arrangement: &Arrangement,
        limit: usize,
    ) -> Result<Self, LatticeError> {
        let dim = arrangement.dimension();
        let atom_rows: Vec<Vec<Rational>> =
            arrangement.hyperplanes().iter().map(|h| h.row()).collect();

        let mut systems: Vec<Echelon> = vec![Echelon::ambient(dim)];
        let mut seen: HashMap<Vec<Vec<Rational>>, usize> = HashMap::new();
        seen.insert(Vec::new(), 0);
        let mut next = 0;
        while next < systems.len() {
            let current = systems[next].clone();
            next += 1;
            for row in &atom_rows {
                let mut extended = current.clone();
                match extended.adjoin_row(row.clone()) {
                    None | Some(false) => continue,
                    Some(true) => {
                        let key = extended.rows().to_vec();
                        if !seen.contains_key(&key) {
                            if systems.len() >= limit {
                                return Err(LatticeError::FlatLimitExceeded { limit });
                            }
                            seen.insert(key, systems.len());
                            systems.push(extended);
                        }
                    }
                }
            }
        }

        // Canonical indexing: ascending rank, ties broken by equations.
        let mut order: Vec<usize> = (0..systems.len()).collect();
        order.sort_by(|&a, &b| {
            (systems[a].rank(), systems[a].rows()).cmp(&(systems[b].rank(), systems[b].rows()))
        });
        let flats: Vec<Flat> = order
            .iter()
            .map(|&i| Flat { system: systems[i].clone() })
            .collect();
        let count = flats.len();
        let index: HashMap<Vec<Vec<Rational>>, usize> = flats
            .iter()
            .enumerate()
            .map(|(i, f)| (f.rows_key(), i))
            .collect();
        let rank: Vec<usize> = flats.iter().map(Flat::rank).collect();

        let atom_of = atom_rows
            .iter()
            .map(|row| {
                let single = Echelon::from_rows(dim, vec![row.clone()])
                    .expect("a single hyperplane is consistent");
                index[&single.rows().to_vec()]
            })
            .collect();

        // j <= i iff every equation of flat j holds on flat i.
        let mut lower: Vec<Bits> = (0..count).map(|_| Bits::empty(count)).collect();
        let mut upper: Vec<Bits> = (0..count).map(|_| Bits::empty(count)).collect();
        for i in 0..count {
            for j in 0..count {
                if rank[j] > rank[i] {
                    continue;
                }
                let below = i == j
                    || flats[j]
                        .equations()
                        .iter()
                        .all(|row| flats[i].system.implies(row.clone()));
                if below {
                    lower[i].set(j);
                    upper[j].set(i);
                }
            }
        }

        let mut covers_up: Vec<Vec<usize>> = vec![Vec::new(); count];
        let mut covers_down: Vec<Vec<usize>> = vec![Vec::new(); count];
        for i in 0..count {
            for j in lower[i].ones() {
                if rank[j] + 1 == rank[i] {
                    covers_up[j].push(i);
                    covers_down[i].push(j);
                }
            }
        }

        let top = (0..count).find(|&t| (0..count).all(|x| lower[t].get(x)));
        let central = arrangement
            .hyperplanes()
            .iter()
            .all(|h| h.rhs().is_zero());

        Ok(IntersectionLattice {
            arrangement: arrangement.clone(),
            flats,
            index,
            rank,
            atom_of,
            lower,
            upper,
            covers_up,
            covers_down,
            top,
            central,
        })
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn flat(&self, i: usize) -> &Flat {
        &self.flats[i]
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub fn bottom(&self) -> usize {
        0
    }

    /// Unique maximal element, if the poset has one (always for central
    /// arrangements).
    pub fn top(&self) -> Option<usize> {
        self.top
    }

    /// Whether the arrangement is central, making the poset a lattice.
    pub fn is_lattice(&self) -> bool {
        self.central
    }

    pub fn atom_of_hyperplane(&self, h: usize) -> usize {
        self.atom_of[h]
    }

    pub fn atoms(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.rank[i] == 1).collect()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.lower[b].get(a)
    }

    pub fn covers_up(&self, i: usize) -> &[usize] {
        &self.covers_up[i]
    }

    pub fn covers_down(&self, i: usize) -> &[usize] {
        &self.covers_down[i]
    }

    /// Elements covered by the top; empty when there is no top.
    pub fn coatoms(&self) -> Vec<usize> {
        self.top.map(|t| self.covers_down[t].clone()).unwrap_or_default()
    }

    pub fn flat_index(&self, f: &Flat) -> Option<usize> {
        self.index.get(&f.rows_key()).copied()
    }

    /// Index of the flat cut out by an explicit equation system, if
    /// that solution set is a flat of this arrangement.  Rows are
    /// `[c_1, .., c_d, rhs]` in any order or scaling.
    pub fn flat_with_equations(&self, equations: Vec<Vec<Rational>>) -> Option<usize> {
        let system = Echelon::from_rows(self.arrangement.dimension(), equations)?;
        self.index.get(&system.rows().to_vec()).copied()
    }

    /// The flat cut out by a set of hyperplanes; `None` if their
    /// intersection is empty.
    pub fn closure_of_hyperplanes(&self, hyperplanes: &[usize]) -> Option<usize> {
        let rows: Vec<Vec<Rational>> = hyperplanes
            .iter()
            .map(|&h| self.arrangement.hyperplanes()[h].row())
            .collect();
        let system = Echelon::from_rows(self.arrangement.dimension(), rows)?;
        Some(self.index[&system.rows().to_vec()])
    }

    /// Largest flat below both arguments (their common coarsening).
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.lower[a]
            .last_common(&self.lower[b])
            .expect("the bottom flat is below everything")
    }

    /// Smallest flat above both arguments; `None` when the two have an
    /// empty intersection (possible only for affine arrangements).
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        self.upper[a].first_common(&self.upper[b])
    }

    /// Mobius function from the bottom element, by rank recursion.
    pub fn mobius(&self) -> Vec<i64> {
        let mut mu = vec![0i64; self.len()];
        for x in 0..self.len() {
            let below: i64 = self.lower[x].ones().filter(|&y| y != x).map(|y| mu[y]).sum();
            mu[x] = if x == 0 { 1 } else { -below };
        }
        mu
    }

    /// `sum_x mu(0, x) t^{dim x}`.
    pub fn characteristic_polynomial(&self) -> IntPolynomial {
        let mu = self.mobius();
        let mut p = IntPolynomial::zero();
        for (x, &m) in mu.iter().enumerate() {
            if m != 0 {
                p.add_scaled_monomial(self.flats[x].dim(), m);
            }
        }
        p
    }

    fn require_lattice(&self) -> Result<(), LatticeError> {
        if self.central {
            Ok(())
        } else {
            Err(LatticeError::NotCentral)
        }
    }

    /// Whether `rk(x) + rk(y) = rk(meet) + rk(join)` for every `y`.
    pub fn is_modular(&self, x: usize) -> Result<bool, LatticeError> {
        self.require_lattice()?;
        Ok(self.is_modular_within(x, None))
    }

    /// Modularity tested inside the interval `[bottom, restrict]`; with
    /// `None`, inside the whole lattice.  Meets and joins of elements of
    /// an interval stay in the interval, so the global tables serve.
    fn is_modular_within(&self, x: usize, restrict: Option<usize>) -> bool {
        let candidates: Vec<usize> = match restrict {
            None => (0..self.len()).collect(),
            Some(t) => self.lower[t].ones().collect(),
        };
        candidates.into_iter().all(|y| {
            let join = self.join(x, y).expect("central arrangements have all joins");
            self.rank[x] + self.rank[y] == self.rank[self.meet(x, y)] + self.rank[join]
        })
    }

    pub fn modular_elements(&self) -> Result<Vec<bool>, LatticeError> {
        self.require_lattice()?;
        Ok((0..self.len()).map(|x| self.is_modular_within(x, None)).collect())
    }

    /// Searches for a maximal chain of modular elements by recursing on
    /// modular coatoms of shrinking intervals.  Returns the chain from
    /// bottom to top when the lattice is supersolvable.
    pub fn modular_maximal_chain(&self) -> Result<Option<Vec<usize>>, LatticeError> {
        self.require_lattice()?;
        let top = self.top.expect("central arrangements have a top flat");
        Ok(self.chain_down_from(top))
    }

    fn chain_down_from(&self, t: usize) -> Option<Vec<usize>> {
        if t == 0 {
            return Some(vec![0]);
        }
        for &c in &self.covers_down[t] {
            if self.is_modular_within(c, Some(t)) {
                if let Some(mut chain) = self.chain_down_from(c) {
                    chain.push(t);
                    return Some(chain);
                }
            }
        }
        None
    }

    /// Independent oracle: walks every maximal chain through globally
    /// modular elements.  Slower, used to cross-check the interval
    /// recursion.
    pub fn modular_maximal_chain_exhaustive(
        &self,
    ) -> Result<Option<Vec<usize>>, LatticeError> {
        let modular = self.modular_elements()?;
        let top = self.top.expect("central arrangements have a top flat");
        let mut chain = vec![0usize];
        if self.extend_chain(&mut chain, top, &modular) {
            Ok(Some(chain))
        } else {
            Ok(None)
        }
    }

    fn extend_chain(&self, chain: &mut Vec<usize>, top: usize, modular: &[bool]) -> bool {
        let last = *chain.last().unwrap();
        if last == top {
            return true;
        }
        for &next in &self.covers_up[last] {
            if !modular[next] {
                continue;
            }
            chain.push(next);
            if self.extend_chain(chain, top, modular) {
                return true;
            }
            chain.pop();
        }
        false
    }

    pub fn is_supersolvable(&self) -> Result<bool, LatticeError> {
        Ok(self.modular_maximal_chain()?.is_some())
    }

    /// The chain of flats induced by a vertex elimination order on a
    /// coned arrangement: the i-th element is the intersection of `y = 0`
    /// with every hyperplane supported on the first i base coordinates.
    /// Consecutive duplicates are removed; the result runs from the
    /// bottom flat to the top.
    pub fn elimination_chain(&self, order: &[usize]) -> Result<Vec<usize>, LatticeError> {
        if self.arrangement.kind() != ArrangementKind::Coned {
            return Err(LatticeError::NotConed);
        }
        let base = self.arrangement.dimension() - 1;
        let mut seen = vec![false; base];
        for &v in order {
            if v >= base || seen[v] {
                return Err(LatticeError::BadOrder);
            }
            seen[v] = true;
        }
        if !seen.iter().all(|&s| s) {
            return Err(LatticeError::BadOrder);
        }

        let supports: Vec<Vec<usize>> = self
            .arrangement
            .hyperplanes()
            .iter()
            .map(|h| h.support())
            .collect();
        let mut in_prefix = vec![false; base + 1];
        in_prefix[base] = true; // the cone coordinate is always allowed
        let mut chain = vec![self.bottom()];
        for step in 0..=order.len() {
            if step > 0 {
                in_prefix[order[step - 1]] = true;
            }
            let hyperplanes: Vec<usize> = (0..supports.len())
                .filter(|&h| supports[h].iter().all(|&c| in_prefix[c]))
                .collect();
            let flat = self
                .closure_of_hyperplanes(&hyperplanes)
                .expect("central intersections are nonempty");
            if *chain.last().unwrap() != flat {
                chain.push(flat);
            }
        }
        Ok(chain)
    }

    /// Whether the chain visits every rank from bottom to top exactly once.
    pub fn chain_is_maximal(&self, chain: &[usize]) -> bool {
        let Some(top) = self.top else { return false };
        chain.first() == Some(&self.bottom())
            && chain.last() == Some(&top)
            && chain.iter().enumerate().all(|(i, &x)| self.rank[x] == i)
            && chain.len() == self.rank[top] + 1
    }

    /// Partition of the base coordinates of a coned arrangement into
    /// classes forced equal on the flat, with each class's pin.
    pub fn vertex_blocks(&self, flat: usize) -> Result<FlatBlocks, LatticeError> {
        if self.arrangement.kind() != ArrangementKind::Coned {
            return Err(LatticeError::NotConed);
        }
        let f = &self.flats[flat];
        let base = self.arrangement.dimension() - 1;
        let y_residual = f.coordinate_residual(base);
        let y_is_zero = y_residual.iter().all(Rational::is_zero);
        let mut blocks: Vec<(Vec<usize>, Vec<Rational>)> = Vec::new();
        for v in 0..base {
            let residual = f.coordinate_residual(v);
            match blocks.iter_mut().find(|(_, r)| *r == residual) {
                Some((members, _)) => members.push(v),
                None => blocks.push((vec![v], residual)),
            }
        }
        let described = blocks
            .into_iter()
            .map(|(members, residual)| {
                let pin = if residual.iter().all(Rational::is_zero) {
                    BlockPin::Zero
                } else if !y_is_zero {
                    proportionality(&residual, &y_residual)
                        .map(BlockPin::YMultiple)
                        .unwrap_or(BlockPin::Free)
                } else {
                    BlockPin::Free
                };
                (members, pin)
            })
            .collect();
        Ok(FlatBlocks { y_is_zero, blocks: described })
    }

    /// Human-readable description: the flat's equations in coordinates.
    pub fn describe(&self, flat: usize) -> String {
        let coords = self.arrangement.coordinate_names();
        let f = &self.flats[flat];
        if f.rank() == 0 {
            return "(ambient)".to_owned();
        }
        f.equations()
            .iter()
            .map(|row| render_equation(row, &coords))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Hasse diagram in DOT format; cover edges point upward in rank.
    /// For central arrangements each node notes whether it is modular.
    pub fn to_dot(&self) -> String {
        let modular = if self.central {
            self.modular_elements().ok()
        } else {
            None
        };
        let mut out = String::from("digraph intersection_lattice {\n  rankdir=BT;\n  node [shape=box];\n");
        for i in 0..self.len() {
            let mut label = format!("rank {}\\n{}", self.rank[i], self.describe(i));
            if let Some(list) = &modular {
                label.push_str(if list[i] { "\\nmodular" } else { "\\nnot modular" });
            }
            out.push_str(&format!("  f{} [label=\"{}\"];\n", i, label));
        }
        for (low, ups) in self.covers_up.iter().enumerate() {
            for &up in ups {
                out.push_str(&format!("  f{} -> f{};\n", low, up));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Convenience wrapper: build the poset and read off the polynomial.
pub fn characteristic_polynomial(
    arrangement: &Arrangement,
    limit: usize,
) -> Result<IntPolynomial, LatticeError> {
    Ok(IntersectionLattice::build_with_limit(arrangement, limit)?
        .characteristic_polynomial())
}

/// How a block of coordinates is constrained on a flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockPin {
    /// The class value is a free parameter.
    Free,
    /// The class is forced to zero.
    Zero,
    /// The class equals this multiple of the cone coordinate.
    YMultiple(Rational),
}

/// Equality classes of base coordinates on a flat of a coned arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatBlocks {
    pub y_is_zero: bool,
    /// Classes in order of their smallest member, covering all vertices.
    pub blocks: Vec<(Vec<usize>, BlockPin)>,
}

impl FlatBlocks {
    /// Sizes of the vertex classes, largest first.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().map(|(m, _)| m.len()).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

/// If `a = c * b` for a scalar `c`, returns `c`.
fn proportionality(a: &[Rational], b: &[Rational]) -> Option<Rational> {
    let lead = b.iter().position(|x| !x.is_zero())?;
    if a[lead].is_zero() {
        return None;
    }
    let c = a[lead] / b[lead];
    a.iter()
        .zip(b)
        .all(|(x, y)| *x == c * y)
        .then_some(c)
}

/// Renders `[c_1.., rhs]` as `name_p = <rest>` solved for the pivot.
fn render_equation(row: &[Rational], coords: &[String]) -> String {
    let vars = coords.len();
    let pivot = row[..vars]
        .iter()
        .position(|c| !c.is_zero())
        .expect("equation rows are nonzero");
    let mut rhs_terms: Vec<String> = Vec::new();
    for i in pivot + 1..vars {
        let c = -row[i];
        if c.is_zero() {
            continue;
        }
        let sign = if c < Rational::zero() {
            if rhs_terms.is_empty() { "-" } else { " - " }
        } else if rhs_terms.is_empty() {
            ""
        } else {
            " + "
        };
        let mag = c.abs();
        let coeff = if mag == Rational::from_integer(1) {
            String::new()
        } else {
            format_rational(&mag)
        };
        rhs_terms.push(format!("{}{}{}", sign, coeff, coords[i]));
    }
    let constant = row[vars];
    if rhs_terms.is_empty() {
        return format!("{} = {}", coords[pivot], format_rational(&constant));
    }
    if !constant.is_zero() {
        let sign = if constant < Rational::zero() { " - " } else { " + " };
        rhs_terms.push(format!("{}{}", sign, format_rational(&constant.abs())));
    }
    format!("{} = {}", coords[pivot], rhs_terms.concat())
}
