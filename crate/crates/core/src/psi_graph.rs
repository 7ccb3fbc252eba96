//! Simple graphs whose vertices carry finite sets of rational weights,
//! together with the combinatorial side of the supersolvability story:
//! simplicial vertices, chordality, and the greedy weight-compatible
//! elimination order whose existence characterizes supersolvability of
//! the associated coned arrangement.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::rational::{format_rational, Rational};

/// A simple undirected graph with a weight set `psi(v)` at each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiGraph {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    psi: Vec<BTreeSet<Rational>>,
    neighbors: Vec<BTreeSet<usize>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) out of range for {2} vertices")]
    EdgeOutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("weight list for vertex {vertex} repeats value {value}")]
    DuplicateWeight { vertex: usize, value: String },
    #[error("expected {expected} weight lists, got {got}")]
    WeightListCount { expected: usize, got: usize },
    #[error("expected {expected} vertex names, got {got}")]
    NameCount { expected: usize, got: usize },
}

impl PsiGraph {
    /// Builds a graph on `n` vertices named `v1..vn`.
    pub fn new(
        n: usize,
        edges: &[(usize, usize)],
        psi: Vec<Vec<Rational>>,
    ) -> Result<Self, GraphError> {
        let names = (1..=n).map(|i| format!("v{}", i)).collect();
        Self::with_names(names, edges, psi)
    }

    pub fn with_names(
        names: Vec<String>,
        edges: &[(usize, usize)],
        psi: Vec<Vec<Rational>>,
    ) -> Result<Self, GraphError> {
        let n = names.len();
        if psi.len() != n {
            return Err(GraphError::WeightListCount { expected: n, got: psi.len() });
        }
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::EdgeOutOfRange(a, b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut weight_sets = Vec::with_capacity(n);
        for (vertex, list) in psi.into_iter().enumerate() {
            let mut set = BTreeSet::new();
            for value in list {
                if !set.insert(value) {
                    return Err(GraphError::DuplicateWeight {
                        vertex,
                        value: format_rational(&value),
                    });
                }
            }
            weight_sets.push(set);
        }
        let mut neighbors = vec![BTreeSet::new(); n];
        for &(a, b) in &normalized {
            neighbors[a].insert(b);
            neighbors[b].insert(a);
        }
        Ok(PsiGraph { names, edges: normalized, psi: weight_sets, neighbors })
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    /// Edges as sorted `(min, max)` pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn psi(&self, v: usize) -> &BTreeSet<Rational> {
        &self.psi[v]
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.neighbors[v]
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.neighbors[a].contains(&b)
    }

    /// Total number of hyperplanes of the attached affine arrangement.
    pub fn hyperplane_count(&self) -> usize {
        self.edges.len() + self.psi.iter().map(|s| s.len()).sum::<usize>()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &self.neighbors[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    /// The graph with vertex `v` deleted and the rest reindexed.
    pub fn without_vertex(&self, v: usize) -> PsiGraph {
        assert!(v < self.n());
        let keep: Vec<usize> = (0..self.n()).filter(|&u| u != v).collect();
        let index_of = |u: usize| keep.iter().position(|&k| k == u).unwrap();
        let names = keep.iter().map(|&u| self.names[u].clone()).collect();
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(a, b)| a != v && b != v)
            .map(|&(a, b)| (index_of(a), index_of(b)))
            .collect();
        let psi = keep
            .iter()
            .map(|&u| self.psi[u].iter().cloned().collect())
            .collect();
        PsiGraph::with_names(names, &edges, psi).expect("deleting a vertex keeps the graph valid")
    }

    fn is_simplicial_within(&self, v: usize, alive: &[bool]) -> bool {
        let nbrs: Vec<usize> = self.neighbors[v]
            .iter()
            .copied()
            .filter(|&u| alive[u])
            .collect();
        nbrs.iter()
            .enumerate()
            .all(|(i, &a)| nbrs[i + 1..].iter().all(|&b| self.is_edge(a, b)))
    }

    /// Vertices whose neighborhood is a clique (degree <= 1 included).
    pub fn simplicial_vertices(&self) -> Vec<usize> {
        let alive = vec![true; self.n()];
        (0..self.n())
            .filter(|&v| self.is_simplicial_within(v, &alive))
            .collect()
    }

    /// Decides chordality by repeatedly deleting simplicial vertices.
    ///
    /// `Chordal` carries an order `v1..vn` in which every vertex is
    /// simplicial in the subgraph induced on itself and the earlier
    /// vertices; `NotChordal` carries an induced cycle of length >= 4
    /// from the stalled remainder.
    pub fn chordality(&self) -> Chordality {
        let mut alive = vec![true; self.n()];
        let mut removed = Vec::new();
        loop {
            if removed.len() == self.n() {
                removed.reverse();
                return Chordality::Chordal(removed);
            }
            let pick = (0..self.n())
                .find(|&v| alive[v] && self.is_simplicial_within(v, &alive));
            match pick {
                Some(v) => {
                    alive[v] = false;
                    removed.push(v);
                }
                None => {
                    return Chordality::NotChordal(
                        self.chordless_cycle(&alive)
                            .expect("a stalled graph contains an induced long cycle"),
                    )
                }
            }
        }
    }

    /// Shortest induced cycle of length >= 4 within the `alive` subgraph.
    fn chordless_cycle(&self, alive: &[bool]) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        for v in 0..self.n() {
            if !alive[v] {
                continue;
            }
            let nbrs: Vec<usize> = self.neighbors[v]
                .iter()
                .copied()
                .filter(|&u| alive[u])
                .collect();
            for (i, &u) in nbrs.iter().enumerate() {
                for &w in &nbrs[i + 1..] {
                    if self.is_edge(u, w) {
                        continue;
                    }
                    // A shortest u-w path avoiding v and its other
                    // neighbors closes into a chordless cycle through v.
                    let mut allowed = alive.to_vec();
                    allowed[v] = false;
                    for &x in &nbrs {
                        if x != u && x != w {
                            allowed[x] = false;
                        }
                    }
                    if let Some(path) = self.shortest_path(u, w, &allowed) {
                        let mut cycle = vec![v];
                        cycle.extend(path);
                        if best.as_ref().map_or(true, |b| cycle.len() < b.len()) {
                            best = Some(cycle);
                        }
                    }
                }
            }
        }
        best
    }

    fn shortest_path(&self, from: usize, to: usize, allowed: &[bool]) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.n()];
        let mut queue = std::collections::VecDeque::from([from]);
        prev[from] = from;
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &u in &self.neighbors[v] {
                if allowed[u] && prev[u] == usize::MAX {
                    prev[u] = v;
                    queue.push_back(u);
                }
            }
        }
        None
    }

    /// Greedy elimination: repeatedly delete the lowest-index vertex that
    /// is simplicial in the remaining graph and whose weight set is
    /// contained in the weight set of every remaining neighbor.  The
    /// coned arrangement is supersolvable exactly when this empties the
    /// graph; the reversed deletion sequence is returned as the order.
    pub fn psi_elimination_order(&self) -> Option<EliminationCertificate> {
        self.try_psi_elimination_order().ok()
    }

    /// Like [`psi_elimination_order`](Self::psi_elimination_order) but
    /// reports why the procedure stalled.
    pub fn try_psi_elimination_order(
        &self,
    ) -> Result<EliminationCertificate, EliminationBlocked> {
        let mut alive = vec![true; self.n()];
        let mut removed = Vec::new();
        while removed.len() < self.n() {
            let eligible = (0..self.n()).find(|&v| {
                alive[v]
                    && self.is_simplicial_within(v, &alive)
                    && self
                        .neighbors[v]
                        .iter()
                        .filter(|&&u| alive[u])
                        .all(|&u| self.psi[v].is_subset(&self.psi[u]))
            });
            match eligible {
                Some(v) => {
                    alive[v] = false;
                    removed.push(v);
                }
                None => return Err(self.blocked_report(&alive)),
            }
        }
        removed.reverse();
        let order = removed;
        let steps = order
            .iter()
            .enumerate()
            .map(|(i, &v)| EliminationStep {
                vertex: v,
                earlier_neighbors: order[..i]
                    .iter()
                    .copied()
                    .filter(|&u| self.is_edge(u, v))
                    .collect(),
            })
            .collect();
        Ok(EliminationCertificate { order, steps })
    }

    fn blocked_report(&self, alive: &[bool]) -> EliminationBlocked {
        let remaining: Vec<usize> = (0..self.n()).filter(|&v| alive[v]).collect();
        let mut weight_blocked = Vec::new();
        for &v in &remaining {
            if !self.is_simplicial_within(v, alive) {
                continue;
            }
            if let Some(&u) = self
                .neighbors[v]
                .iter()
                .filter(|&&u| alive[u])
                .find(|&&u| !self.psi[v].is_subset(&self.psi[u]))
            {
                weight_blocked.push(BlockedVertex { vertex: v, blocking_neighbor: u });
            }
        }
        EliminationBlocked { remaining, weight_blocked }
    }

    /// An edge whose two weight sets are incomparable under inclusion.
    /// Any such edge rules out freeness of the arrangement.
    pub fn nonfree_edge_witness(&self) -> Option<(usize, usize)> {
        self.edges
            .iter()
            .copied()
            .find(|&(a, b)| !self.psi[a].is_subset(&self.psi[b]) && !self.psi[b].is_subset(&self.psi[a]))
    }
}

/// Result of the simplicial-deletion chordality test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chordality {
    /// Order in which each vertex is simplicial among itself and its
    /// predecessors.
    Chordal(Vec<usize>),
    /// An induced cycle of length at least four.
    NotChordal(Vec<usize>),
}

impl Chordality {
    pub fn is_chordal(&self) -> bool {
        matches!(self, Chordality::Chordal(_))
    }
}

/// Witness that the greedy weight-compatible elimination succeeded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationCertificate {
    /// The vertices as `v1..vn`; the greedy procedure deleted them in
    /// reverse.
    pub order: Vec<usize>,
    pub steps: Vec<EliminationStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationStep {
    pub vertex: usize,
    /// Neighbors of `vertex` that appear earlier in the order; always a
    /// clique, each with a weight set containing the vertex's own.
    pub earlier_neighbors: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("order is not a permutation of the vertices")]
    NotAPermutation,
    #[error("step list does not match the order")]
    StepMismatch,
    #[error("earlier neighbors of step {step} recorded incorrectly")]
    WrongNeighbors { step: usize },
    #[error("earlier neighbors {a} and {b} of step {step} are not adjacent")]
    NotAClique { step: usize, a: usize, b: usize },
    #[error("weight set of vertex {vertex} not contained in weight set of earlier neighbor {neighbor}")]
    WeightNotContained { vertex: usize, neighbor: usize },
}

impl EliminationCertificate {
    /// Re-checks the certificate against the graph from scratch: the
    /// order must be a permutation, every vertex must meet its earlier
    /// neighbors in a clique, and weight sets must shrink (weakly) along
    /// each edge in order.
    pub fn verify(&self, g: &PsiGraph) -> Result<(), CertificateError> {
        let n = g.n();
        if self.order.len() != n {
            return Err(CertificateError::NotAPermutation);
        }
        let mut seen = vec![false; n];
        for &v in &self.order {
            if v >= n || seen[v] {
                return Err(CertificateError::NotAPermutation);
            }
            seen[v] = true;
        }
        if self.steps.len() != n {
            return Err(CertificateError::StepMismatch);
        }
        for (i, step) in self.steps.iter().enumerate() {
            if step.vertex != self.order[i] {
                return Err(CertificateError::StepMismatch);
            }
            let expected: Vec<usize> = self.order[..i]
                .iter()
                .copied()
                .filter(|&u| g.is_edge(u, step.vertex))
                .collect();
            if step.earlier_neighbors != expected {
                return Err(CertificateError::WrongNeighbors { step: i });
            }
            for (j, &a) in expected.iter().enumerate() {
                for &b in &expected[j + 1..] {
                    if !g.is_edge(a, b) {
                        return Err(CertificateError::NotAClique { step: i, a, b });
                    }
                }
            }
            for &u in &expected {
                if !g.psi(step.vertex).is_subset(g.psi(u)) {
                    return Err(CertificateError::WeightNotContained {
                        vertex: step.vertex,
                        neighbor: u,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Diagnostic for a stalled greedy elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationBlocked {
    pub remaining: Vec<usize>,
    /// Simplicial-but-ineligible vertices with one offending neighbor.
    pub weight_blocked: Vec<BlockedVertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockedVertex {
    pub vertex: usize,
    pub blocking_neighbor: usize,
}
