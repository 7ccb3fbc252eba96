//! Shared fixtures for the integration suites: exhaustive instance
//! corpora and independently implemented counting oracles.  The
//! counting oracles deliberately avoid the library's lattice machinery
//! so that the values they produce are genuinely independent checks.
#![allow(dead_code)]

use std::sync::OnceLock;

use num_traits::Zero;
use psi_arrangements::{
    Arrangement, EliminationCertificate, IntPolynomial, IntersectionLattice, PsiGraph, Rational,
};

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// The weighted three-vertex path used as a running example: weights
/// {1,2}, {1}, {} down the path.
pub fn weighted_path() -> PsiGraph {
    PsiGraph::new(
        3,
        &[(0, 1), (1, 2)],
        vec![vec![q(1), q(2)], vec![q(1)], vec![]],
    )
    .unwrap()
}

/// Single edge whose endpoint weight sets are incomparable.
pub fn incomparable_pair() -> PsiGraph {
    PsiGraph::new(2, &[(0, 1)], vec![vec![q(1)], vec![q(2)]]).unwrap()
}

pub fn triangle() -> PsiGraph {
    PsiGraph::new(3, &[(0, 1), (0, 2), (1, 2)], vec![vec![]; 3]).unwrap()
}

/// One fully analyzed instance of the exhaustive corpus.
pub struct Entry {
    pub graph: PsiGraph,
    /// Result of the greedy elimination search.
    pub greedy: Option<EliminationCertificate>,
    /// Result of the modular-chain search on the cone lattice.
    pub oracle_supersolvable: bool,
    pub chi: IntPolynomial,
    pub chi_cone: IntPolynomial,
}

/// The exhaustive corpus plus aggregates computed while each cone
/// lattice was in memory.  Building every lattice is the expensive part
/// of the suite, so the chain validation and the geometric-lattice
/// sweeps happen in the same pass; their per-instance failures are
/// collected here and asserted by the individual tests.
pub struct Corpus {
    pub entries: Vec<Entry>,
    /// Instances whose induced chain was compared flat-by-flat against
    /// the pinned-prefix form (possible whenever some weight exists).
    pub chain_literal: usize,
    /// Weightless instances, where the chain merges ranks instead.
    pub chain_merged: usize,
    pub chain_problems: Vec<String>,
    pub semimodular_pairs_checked: u64,
    pub atomic_flats_checked: u64,
    pub partition_intervals_checked: usize,
    pub geometric_problems: Vec<String>,
}

/// Every connected labeled graph with at most four vertices, combined
/// with every weight map drawing values from {1, 2}.  Built once per
/// test binary and shared across tests.
pub fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut corpus = Corpus {
            entries: Vec::new(),
            chain_literal: 0,
            chain_merged: 0,
            chain_problems: Vec::new(),
            semimodular_pairs_checked: 0,
            atomic_flats_checked: 0,
            partition_intervals_checked: 0,
            geometric_problems: Vec::new(),
        };
        for n in 1..=4 {
            for edges in labeled_graphs(n, true) {
                for psi in weight_assignments(n) {
                    analyze(n, &edges, psi, &mut corpus);
                }
            }
        }
        corpus
    })
}

fn analyze(n: usize, edges: &[(usize, usize)], psi: Vec<Vec<Rational>>, corpus: &mut Corpus) {
    let graph = PsiGraph::new(n, edges, psi).expect("enumerated instances are valid");
    let affine = Arrangement::build_affine(&graph);
    let cone = affine.cone().expect("fresh affine arrangements cone");
    let affine_lattice = IntersectionLattice::build(&affine).expect("small instance");
    let cone_lattice = IntersectionLattice::build(&cone).expect("small instance");
    let greedy = graph.psi_elimination_order();
    if let Some(certificate) = &greedy {
        validate_chain(&graph, &cone_lattice, certificate, corpus);
    }
    geometric_checks(&graph, &cone_lattice, corpus);
    corpus.entries.push(Entry {
        greedy,
        oracle_supersolvable: cone_lattice
            .modular_maximal_chain()
            .expect("cone lattices are central")
            .is_some(),
        chi: affine_lattice.characteristic_polynomial(),
        chi_cone: cone_lattice.characteristic_polynomial(),
        graph,
    });
}

fn instance_tag(graph: &PsiGraph) -> String {
    format!(
        "n={} edges={:?} psi={:?}",
        graph.n(),
        graph.edges(),
        (0..graph.n())
            .map(|v| graph.psi(v).iter().map(|w| w.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    )
}

fn unit_row(dimension: usize, coordinate: usize) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); dimension + 1];
    row[coordinate] = Rational::from_integer(1);
    row
}

/// Checks that the elimination order's chain of flats is a modular
/// maximal chain, and — whenever any weight is present, which forces
/// every prefix to be pinned to zero on the cone plane — that the i-th
/// flat literally equals {x_{v_1} = .. = x_{v_{i-1}} = y = 0}.
fn validate_chain(
    graph: &PsiGraph,
    lattice: &IntersectionLattice,
    certificate: &EliminationCertificate,
    corpus: &mut Corpus,
) {
    let tag = instance_tag(graph);
    let n = graph.n();
    let chain = match lattice.elimination_chain(&certificate.order) {
        Ok(chain) => chain,
        Err(e) => {
            corpus.chain_problems.push(format!("{tag}: chain build failed: {e}"));
            return;
        }
    };
    if !lattice.chain_is_maximal(&chain) {
        corpus.chain_problems.push(format!("{tag}: chain is not maximal"));
        return;
    }
    for &flat in &chain {
        if !lattice.is_modular(flat).expect("cone lattices are central") {
            corpus.chain_problems.push(format!(
                "{tag}: chain flat {} is not modular",
                lattice.describe(flat)
            ));
            return;
        }
    }
    let weightless = (0..n).all(|v| graph.psi(v).is_empty());
    if weightless {
        corpus.chain_merged += 1;
        return;
    }
    // Some weight exists, so the pinned-prefix flats are all distinct
    // and the chain must consist of exactly them.
    let dimension = n + 1;
    if chain.len() != n + 2 {
        corpus
            .chain_problems
            .push(format!("{tag}: expected {} chain flats, got {}", n + 2, chain.len()));
        return;
    }
    for i in 1..=n + 1 {
        let mut rows = vec![unit_row(dimension, dimension - 1)];
        for &v in &certificate.order[..i - 1] {
            rows.push(unit_row(dimension, v));
        }
        match lattice.flat_with_equations(rows) {
            Some(idx) if idx == chain[i] => {}
            other => {
                corpus.chain_problems.push(format!(
                    "{tag}: chain position {i} is {} but the pinned-prefix flat is {:?}",
                    lattice.describe(chain[i]),
                    other
                ));
                return;
            }
        }
    }
    corpus.chain_literal += 1;
}

/// Geometric-lattice sweep: rank semimodularity on all pairs, every
/// flat the join of the atoms below it, and the interval below the join
/// of the edge atoms isomorphic to the poset of partitions of the
/// vertices into connected blocks, ordered by refinement.
fn geometric_checks(graph: &PsiGraph, lattice: &IntersectionLattice, corpus: &mut Corpus) {
    let tag = instance_tag(graph);
    let count = lattice.len();
    for x in 0..count {
        for y in x..count {
            let join = lattice.join(x, y).expect("cone lattices are central");
            let meet = lattice.meet(x, y);
            if lattice.rank(meet) + lattice.rank(join) > lattice.rank(x) + lattice.rank(y) {
                corpus.geometric_problems.push(format!(
                    "{tag}: semimodularity fails on flats {x}, {y}"
                ));
            }
            corpus.semimodular_pairs_checked += 1;
        }
    }

    let atoms = lattice.atoms();
    for f in 0..count {
        let mut generated = lattice.bottom();
        for &a in &atoms {
            if lattice.leq(a, f) {
                generated = lattice.join(generated, a).expect("central");
            }
        }
        if generated != f {
            corpus.geometric_problems.push(format!(
                "{tag}: flat {} is not the join of its atoms",
                lattice.describe(f)
            ));
        }
        corpus.atomic_flats_checked += 1;
    }

    // Interval below the join of the edge atoms.
    let mut top_g = lattice.bottom();
    for h in 0..graph.edges().len() {
        let atom = lattice.atom_of_hyperplane(h);
        top_g = lattice.join(top_g, atom).expect("central");
    }
    let interval: Vec<usize> = (0..count).filter(|&i| lattice.leq(i, top_g)).collect();
    let mut actual: Vec<Vec<Vec<usize>>> = interval
        .iter()
        .map(|&i| {
            let blocks = lattice.vertex_blocks(i).expect("cone lattice");
            let mut members: Vec<Vec<usize>> =
                blocks.blocks.into_iter().map(|(m, _)| m).collect();
            members.sort();
            members
        })
        .collect();
    let expected = connected_partitions(graph);
    let mut sorted = actual.clone();
    sorted.sort();
    let before = sorted.len();
    sorted.dedup();
    if sorted.len() != before {
        corpus
            .geometric_problems
            .push(format!("{tag}: two interval flats give the same partition"));
    }
    if sorted != expected {
        corpus.geometric_problems.push(format!(
            "{tag}: interval partitions do not match the connected partitions"
        ));
    }
    // Order isomorphism, both directions.
    for (ii, &i) in interval.iter().enumerate() {
        for (jj, &j) in interval.iter().enumerate() {
            if lattice.leq(i, j) != refines(&actual[ii], &actual[jj]) {
                corpus.geometric_problems.push(format!(
                    "{tag}: interval order disagrees with refinement on {ii}, {jj}"
                ));
            }
        }
    }
    corpus.partition_intervals_checked += 1;
    let _ = &mut actual;
}

/// Whether every block of `finer` is contained in one block of
/// `coarser`.
pub fn refines(finer: &[Vec<usize>], coarser: &[Vec<usize>]) -> bool {
    let mut block_of = std::collections::HashMap::new();
    for (b, block) in coarser.iter().enumerate() {
        for &v in block {
            block_of.insert(v, b);
        }
    }
    finer.iter().all(|block| {
        let Some(&first) = block.first() else { return true };
        let Some(&target) = block_of.get(&first) else { return false };
        block.iter().all(|v| block_of.get(v) == Some(&target))
    })
}

/// Edge sets of all labeled graphs on `n` vertices, connected ones only
/// when `connected` is set.  Connectivity is decided by a union-find
/// written here, not by the library.
pub fn labeled_graphs(n: usize, connected: bool) -> Vec<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        if !connected || is_connected_union_find(n, &edges) {
            out.push(edges);
        }
    }
    out
}

fn is_connected_union_find(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return true;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components == 1
}

/// All weight maps with per-vertex values drawn from {1, 2}.
pub fn weight_assignments(n: usize) -> Vec<Vec<Vec<Rational>>> {
    let choices: [&[i64]; 4] = [&[], &[1], &[2], &[1, 2]];
    let mut out = Vec::new();
    let mut pick = vec![0usize; n];
    loop {
        out.push(
            pick.iter()
                .map(|&c| choices[c].iter().map(|&v| q(v)).collect())
                .collect(),
        );
        let mut pos = 0;
        while pos < n {
            pick[pos] += 1;
            if pick[pos] < choices.len() {
                break;
            }
            pick[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    out
}

/// Number of colorings `V -> F_q` that are proper on every edge and
/// avoid each vertex's weight values (reduced mod q).
///
/// Counted combinatorially: every such coloring induces a partition of
/// the vertices into color classes, which must be independent sets with
/// pairwise distinct class values avoiding the union of the class's
/// forbidden residues.  The per-partition count is an inclusion-
/// exclusion over which classes take a forbidden value.  No linear
/// algebra or poset machinery is involved.
pub fn count_avoiding_colorings(graph: &PsiGraph, modulus: u64) -> u64 {
    let n = graph.n();
    if n == 0 {
        return 1;
    }
    let forbidden_per_vertex: Vec<Vec<u64>> = (0..n)
        .map(|v| {
            let mut r: Vec<u64> = graph
                .psi(v)
                .iter()
                .map(|w| rational_residue(w, modulus))
                .collect();
            r.sort_unstable();
            r.dedup();
            r
        })
        .collect();

    let mut total: i128 = 0;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    partition_recurse(graph, &forbidden_per_vertex, modulus, 0, &mut blocks, &mut total);
    u64::try_from(total).expect("coloring counts are nonnegative")
}

fn partition_recurse(
    graph: &PsiGraph,
    forbidden: &[Vec<u64>],
    modulus: u64,
    vertex: usize,
    blocks: &mut Vec<Vec<usize>>,
    total: &mut i128,
) {
    if vertex == graph.n() {
        let class_forbidden: Vec<Vec<u64>> = blocks
            .iter()
            .map(|block| {
                let mut r: Vec<u64> = block
                    .iter()
                    .flat_map(|&v| forbidden[v].iter().copied())
                    .collect();
                r.sort_unstable();
                r.dedup();
                r
            })
            .collect();
        *total += injective_assignments(modulus, &class_forbidden);
        return;
    }
    for b in 0..=blocks.len() {
        let is_new = b == blocks.len();
        if is_new {
            blocks.push(vec![vertex]);
        } else {
            // Color classes must be independent sets.
            if blocks[b].iter().any(|&u| graph.is_edge(u, vertex)) {
                continue;
            }
            blocks[b].push(vertex);
        }
        partition_recurse(graph, forbidden, modulus, vertex + 1, blocks, total);
        if is_new {
            blocks.pop();
        } else {
            blocks[b].pop();
        }
    }
}

/// Signed count of injective value assignments to `k` classes, where
/// class `i` must avoid `forbidden[i]`: inclusion-exclusion over the
/// classes pinned to one of their forbidden values.
fn injective_assignments(modulus: u64, forbidden: &[Vec<u64>]) -> i128 {
    fn rec(modulus: u64, forbidden: &[Vec<u64>], i: usize, used: &mut Vec<u64>) -> i128 {
        if i == forbidden.len() {
            let s = used.len() as u64;
            let remaining = forbidden.len() as u64 - s;
            let sign = if s % 2 == 0 { 1 } else { -1 };
            return sign * falling(modulus - s, remaining);
        }
        let mut sum = rec(modulus, forbidden, i + 1, used);
        for &value in &forbidden[i] {
            if used.contains(&value) {
                continue;
            }
            used.push(value);
            sum += rec(modulus, forbidden, i + 1, used);
            used.pop();
        }
        sum
    }
    rec(modulus, forbidden, 0, &mut Vec::new())
}

fn falling(from: u64, count: u64) -> i128 {
    let mut product: i128 = 1;
    for k in 0..count {
        product *= (from - k) as i128;
    }
    product
}

/// Value of a rational in F_q; the denominator must be a unit.
pub fn rational_residue(value: &Rational, modulus: u64) -> u64 {
    let m = modulus as i64;
    let numer = value.numer().rem_euclid(m) as u64;
    let denom = value.denom().rem_euclid(m) as u64;
    assert!(denom != 0, "denominator vanishes mod {modulus}");
    numer * mod_inverse(denom, modulus) % modulus
}

fn mod_inverse(a: u64, modulus: u64) -> u64 {
    // Fermat: a^(q-2) mod q for prime q.
    let mut base = a % modulus;
    let mut exp = modulus - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// Literal point count over F_q by iterating all q^n colorings.  Only
/// usable for tiny instances; exists to validate the partition counter.
pub fn brute_force_count(graph: &PsiGraph, modulus: u64) -> u64 {
    let n = graph.n();
    let forbidden: Vec<Vec<u64>> = (0..n)
        .map(|v| {
            graph
                .psi(v)
                .iter()
                .map(|w| rational_residue(w, modulus))
                .collect()
        })
        .collect();
    let mut count = 0;
    let mut coloring = vec![0u64; n];
    loop {
        let proper = graph
            .edges()
            .iter()
            .all(|&(a, b)| coloring[a] != coloring[b])
            && (0..n).all(|v| !forbidden[v].contains(&coloring[v]));
        if proper {
            count += 1;
        }
        let mut pos = 0;
        while pos < n {
            coloring[pos] += 1;
            if coloring[pos] < modulus {
                break;
            }
            coloring[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    count
}

/// Chromatic polynomial by deletion-contraction, for cross-checking
/// unweighted instances.  Multi-edges are deduplicated; a loop would
/// mean a contracted proper edge, which the recursion never creates
/// from a simple graph because contraction drops the merged pair.
pub fn chromatic_polynomial(n: usize, edges: &[(usize, usize)]) -> IntPolynomial {
    let mut sorted: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    sorted.sort_unstable();
    sorted.dedup();
    let Some(&(a, b)) = sorted.first() else {
        return IntPolynomial::monomial(n);
    };
    let rest: Vec<(usize, usize)> = sorted[1..].to_vec();
    let deleted = chromatic_polynomial(n, &rest);
    // Contract b into a, relabeling the last vertex down into b's slot.
    let contracted_edges: Vec<(usize, usize)> = rest
        .iter()
        .filter_map(|&(u, v)| {
            let mut map = |x: usize| if x == b { a } else { x };
            let (mut u, mut v) = (map(u), map(v));
            if u == v {
                return None;
            }
            // Reindex to keep vertices 0..n-1 contiguous.
            let shrink = |x: usize| if x == n - 1 { b } else { x };
            if b != n - 1 {
                u = shrink(u);
                v = shrink(v);
            }
            Some((u.min(v), u.max(v)))
        })
        .collect();
    let contracted = chromatic_polynomial(n - 1, &contracted_edges);
    deleted.add(&contracted.mul(&IntPolynomial::from_coeffs(vec![-1])))
}

/// All partitions of the vertex set whose blocks induce connected
/// subgraphs, as sorted block lists.
pub fn connected_partitions(graph: &PsiGraph) -> Vec<Vec<Vec<usize>>> {
    let mut result = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn recurse(
        graph: &PsiGraph,
        vertex: usize,
        blocks: &mut Vec<Vec<usize>>,
        result: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if vertex == graph.n() {
            if blocks.iter().all(|block| block_connected(graph, block)) {
                let mut sorted = blocks.clone();
                sorted.sort();
                result.push(sorted);
            }
            return;
        }
        for b in 0..=blocks.len() {
            let is_new = b == blocks.len();
            if is_new {
                blocks.push(vec![vertex]);
            } else {
                blocks[b].push(vertex);
            }
            recurse(graph, vertex + 1, blocks, result);
            if is_new {
                blocks.pop();
            } else {
                blocks[b].pop();
            }
        }
    }
    recurse(graph, 0, &mut blocks, &mut result);
    result.sort();
    result
}

fn block_connected(graph: &PsiGraph, block: &[usize]) -> bool {
    if block.is_empty() {
        return true;
    }
    let mut seen = vec![false; graph.n()];
    let mut queue = vec![block[0]];
    seen[block[0]] = true;
    let mut reached = 1;
    while let Some(v) = queue.pop() {
        for &u in block {
            if !seen[u] && graph.is_edge(v, u) {
                seen[u] = true;
                reached += 1;
                queue.push(u);
            }
        }
    }
    reached == block.len()
}
