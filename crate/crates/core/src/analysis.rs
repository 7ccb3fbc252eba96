//! End-to-end classification of weighted graphs: supersolvability by
//! two independent routes, characteristic polynomials, exponents, and
//! the freeness filters, plus an enumeration scan over small instances.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::Arrangement;
use crate::lattice::{IntersectionLattice, LatticeError, DEFAULT_FLAT_LIMIT};
use crate::polynomial::IntPolynomial;
use crate::psi_graph::{Chordality, EliminationCertificate, PsiGraph};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("the elimination search and the lattice chain search disagree: greedy={greedy}, lattice={lattice}")]
    OracleDisagreement { greedy: bool, lattice: bool },
    #[error("internal error: elimination certificate failed verification: {0}")]
    CertificateInvalid(String),
    #[error("exponents {exponents:?} do not multiply out to the characteristic polynomial {polynomial}")]
    ExponentMismatch {
        exponents: Vec<u64>,
        polynomial: IntPolynomial,
    },
    #[error("the chain induced by the elimination order is not a modular maximal chain")]
    ChainValidationFailed,
    #[error("scan weight pool entry {0:?} is not a rational number")]
    BadPoolEntry(String),
}

/// Freeness status as far as the implemented criteria can tell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreenessVerdict {
    /// Supersolvable arrangements are inductively free.
    SupersolvableHenceFree,
    /// An edge whose endpoint weight sets are incomparable rules
    /// freeness out.
    NotFreeIncomparableEdge,
    /// The characteristic polynomial has a non-integer root, which a
    /// free arrangement cannot have.
    NotFreeFactorization,
    /// Not supersolvable, yet no implemented obstruction applies.  If
    /// such an instance were free it would decide the open implication.
    Undetermined,
}

impl FreenessVerdict {
    /// The snake_case tag this verdict serializes to.
    pub fn tag(self) -> &'static str {
        match self {
            FreenessVerdict::SupersolvableHenceFree => "supersolvable_hence_free",
            FreenessVerdict::NotFreeIncomparableEdge => "not_free_incomparable_edge",
            FreenessVerdict::NotFreeFactorization => "not_free_factorization",
            FreenessVerdict::Undetermined => "undetermined",
        }
    }
}

impl std::fmt::Display for FreenessVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let text = match self {
            FreenessVerdict::SupersolvableHenceFree => "supersolvable (free)",
            FreenessVerdict::NotFreeIncomparableEdge => "not free (incomparable edge weights)",
            FreenessVerdict::NotFreeFactorization => "not free (polynomial does not split)",
            FreenessVerdict::Undetermined => "undetermined",
        };
        f.write_str(text)
    }
}

/// Everything `classify` establishes about one weighted graph.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub psi: Vec<Vec<String>>,
    pub hyperplanes: Vec<String>,
    pub chordal: bool,
    pub chordless_cycle: Option<Vec<usize>>,
    /// Vertex order certifying supersolvability, when one exists.
    pub elimination_order: Option<Vec<usize>>,
    /// Vertices left when the greedy elimination got stuck, with the
    /// neighbor whose weights blocked each stuck-but-simplicial vertex.
    pub blocked_vertices: Option<Vec<(usize, usize)>>,
    pub supersolvable: bool,
    /// The modular maximal chain found by the lattice search, rendered
    /// as equation lists from bottom to top.
    pub oracle_chain: Option<Vec<String>>,
    pub affine_flats: usize,
    pub cone_flats: usize,
    pub characteristic_polynomial: IntPolynomial,
    pub cone_characteristic_polynomial: IntPolynomial,
    /// `|psi(v_i)|` plus the number of earlier neighbors, per position
    /// of the elimination order.
    pub exponents: Option<Vec<u64>>,
    /// Roots of the characteristic polynomial when it splits over the
    /// integers, as a sorted multiset.
    pub integer_roots: Option<Vec<i64>>,
    pub factored: Option<String>,
    /// An edge with inclusion-incomparable endpoint weight sets.
    pub nonfree_edge: Option<(usize, usize)>,
    pub verdict: FreenessVerdict,
}

/// Positional exponents of a valid elimination order: the i-th entry is
/// the weight count of the i-th vertex plus its earlier neighbors.
pub fn exponents(
    graph: &PsiGraph,
    certificate: &EliminationCertificate,
) -> Result<Vec<u64>, AnalysisError> {
    certificate
        .verify(graph)
        .map_err(|e| AnalysisError::CertificateInvalid(e.to_string()))?;
    Ok(certificate
        .steps
        .iter()
        .map(|step| (graph.psi(step.vertex).len() + step.earlier_neighbors.len()) as u64)
        .collect())
}

/// Splits a monic polynomial into linear factors over the integers.
/// Returns the sorted root multiset, or `None` if some root is not an
/// integer.  Roots are found among zero and the divisors of the
/// trailing nonzero coefficient.
pub fn integer_root_factorization(p: &IntPolynomial) -> Option<Vec<i64>> {
    if p.is_zero() || !p.is_monic() {
        return None;
    }
    let mut rest = p.clone();
    let mut roots = Vec::new();
    while let Some(quotient) = rest.div_linear(0) {
        roots.push(0);
        rest = quotient;
    }
    let constant = rest.coeff(0).unsigned_abs();
    for root in divisors_signed(constant) {
        while let Some(quotient) = rest.div_linear(root) {
            roots.push(root);
            rest = quotient;
        }
    }
    if rest.degree() == Some(0) {
        roots.sort_unstable();
        Some(roots)
    } else {
        None
    }
}

/// Divisors of `n` in both signs, ordered negatives-descending then
/// positives-ascending so root extraction output stays deterministic.
fn divisors_signed(n: u64) -> Vec<i64> {
    let mut positive = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            positive.push(d as i64);
            let other = (n / d) as i64;
            if other != d as i64 {
                positive.push(other);
            }
        }
        d += 1;
    }
    positive.sort_unstable();
    let mut all: Vec<i64> = positive.iter().map(|&p| -p).collect();
    all.extend(positive);
    all
}

/// Renders a root multiset as a product of linear factors, e.g.
/// `t(t-1)^2(t-2)`.
pub fn factored_string(roots: &[i64]) -> String {
    if roots.is_empty() {
        return "1".to_owned();
    }
    let mut sorted = roots.to_vec();
    sorted.sort_unstable();
    let mut out = String::new();
    let mut i = 0;
    while i < sorted.len() {
        let root = sorted[i];
        let run = sorted[i..].iter().take_while(|&&r| r == root).count();
        let base = match root.cmp(&0) {
            std::cmp::Ordering::Equal => "t".to_owned(),
            std::cmp::Ordering::Greater => format!("(t-{root})"),
            std::cmp::Ordering::Less => format!("(t+{})", -root),
        };
        out.push_str(&base);
        if run > 1 {
            out.push_str(&format!("^{run}"));
        }
        i += run;
    }
    out
}

/// Runs the full pipeline on one weighted graph.  Both supersolvability
/// decisions always run; any disagreement between them, or between the
/// exponents and the polynomial, is reported as an error rather than
/// papered over.
pub fn classify(graph: &PsiGraph, flat_limit: usize) -> Result<ClassifyReport, AnalysisError> {
    let affine = Arrangement::build_affine(graph);
    let coned = affine.cone().expect("fresh affine arrangements cone");
    let affine_lattice = IntersectionLattice::build_with_limit(&affine, flat_limit)?;
    let cone_lattice = IntersectionLattice::build_with_limit(&coned, flat_limit)?;

    let chi = affine_lattice.characteristic_polynomial();
    let cone_chi = cone_lattice.characteristic_polynomial();

    let elimination = graph.try_psi_elimination_order();
    let oracle_chain = cone_lattice.modular_maximal_chain()?;

    let greedy_supersolvable = elimination.is_ok();
    let lattice_supersolvable = oracle_chain.is_some();
    if greedy_supersolvable != lattice_supersolvable {
        return Err(AnalysisError::OracleDisagreement {
            greedy: greedy_supersolvable,
            lattice: lattice_supersolvable,
        });
    }

    let chordality = graph.chordality();
    let mut report = ClassifyReport {
        vertices: graph.names().to_vec(),
        edges: graph.edges().to_vec(),
        psi: (0..graph.n())
            .map(|v| graph.psi(v).iter().map(format_rational).collect())
            .collect(),
        hyperplanes: affine
            .hyperplanes()
            .iter()
            .map(|h| h.display(&affine.coordinate_names()))
            .collect(),
        chordal: chordality.is_chordal(),
        chordless_cycle: match chordality {
            Chordality::NotChordal(cycle) => Some(cycle),
            Chordality::Chordal(_) => None,
        },
        elimination_order: None,
        blocked_vertices: None,
        supersolvable: lattice_supersolvable,
        oracle_chain: oracle_chain.as_ref().map(|chain| {
            chain.iter().map(|&f| cone_lattice.describe(f)).collect()
        }),
        affine_flats: affine_lattice.len(),
        cone_flats: cone_lattice.len(),
        characteristic_polynomial: chi.clone(),
        cone_characteristic_polynomial: cone_chi.clone(),
        exponents: None,
        integer_roots: None,
        factored: None,
        nonfree_edge: graph.nonfree_edge_witness(),
        verdict: FreenessVerdict::Undetermined,
    };

    match elimination {
        Ok(certificate) => {
            let exps = exponents(graph, &certificate)?;
            let product =
                IntPolynomial::from_roots(&exps.iter().map(|&b| b as i64).collect::<Vec<_>>());
            if product != chi {
                return Err(AnalysisError::ExponentMismatch {
                    exponents: exps,
                    polynomial: chi,
                });
            }
            let chain = cone_lattice.elimination_chain(&certificate.order)?;
            let modular = cone_lattice.modular_elements()?;
            if !cone_lattice.chain_is_maximal(&chain) || chain.iter().any(|&x| !modular[x]) {
                return Err(AnalysisError::ChainValidationFailed);
            }
            report.elimination_order = Some(certificate.order.clone());
            report.exponents = Some(exps);
        }
        Err(blocked) => {
            report.blocked_vertices = Some(
                blocked
                    .weight_blocked
                    .iter()
                    .map(|b| (b.vertex, b.blocking_neighbor))
                    .collect(),
            );
        }
    }

    report.integer_roots = integer_root_factorization(&chi);
    report.factored = report.integer_roots.as_deref().map(factored_string);

    report.verdict = if report.supersolvable {
        FreenessVerdict::SupersolvableHenceFree
    } else if report.nonfree_edge.is_some() {
        FreenessVerdict::NotFreeIncomparableEdge
    } else if report.integer_roots.is_none() {
        FreenessVerdict::NotFreeFactorization
    } else {
        FreenessVerdict::Undetermined
    };
    Ok(report)
}

/// Parameters for the enumeration scan.
#[derive(Clone, Debug)]
pub struct ScanParams {
    /// Largest vertex count; every connected graph up to this size runs.
    pub max_n: usize,
    /// Weight values drawn from, as exact rationals.
    pub pool: Vec<Rational>,
    /// Largest number of weights any one vertex may carry.
    pub max_psi: usize,
    pub flat_limit: usize,
    pub parallel: bool,
}

impl ScanParams {
    pub fn new(max_n: usize, pool: Vec<Rational>, max_psi: usize) -> Self {
        ScanParams {
            max_n,
            pool,
            max_psi,
            flat_limit: DEFAULT_FLAT_LIMIT,
            parallel: true,
        }
    }

    /// Parses a comma-separated weight pool such as `1,2,1/2`.
    pub fn parse_pool(text: &str) -> Result<Vec<Rational>, AnalysisError> {
        let mut pool = Vec::new();
        for part in text.split(',').filter(|p| !p.trim().is_empty()) {
            let value = parse_rational(part)
                .map_err(|_| AnalysisError::BadPoolEntry(part.trim().to_owned()))?;
            if !pool.contains(&value) {
                pool.push(value);
            }
        }
        Ok(pool)
    }
}

/// One scanned instance, in enumeration order.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRecord {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub psi: Vec<Vec<String>>,
    pub supersolvable: bool,
    pub chordal: bool,
    pub characteristic_polynomial: IntPolynomial,
    pub exponents: Option<Vec<u64>>,
    pub factored: Option<String>,
    pub verdict: FreenessVerdict,
}

/// Outcome of a scan: per-verdict counts and every record, with the
/// undetermined ones (the interesting residue) called out separately.
#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub max_n: usize,
    pub pool: Vec<String>,
    pub max_psi: usize,
    pub instances: usize,
    pub counts: BTreeMap<String, usize>,
    pub undetermined: Vec<usize>,
    pub records: Vec<ScanRecord>,
}

/// Classifies every connected weighted graph within the given bounds,
/// deduplicated up to weight-preserving isomorphism.  Output order is
/// deterministic and independent of `parallel`.
pub fn scan(params: &ScanParams) -> Result<ScanReport, AnalysisError> {
    let instances = enumerate_instances(params);
    let classify_one = |g: &PsiGraph| -> Result<ScanRecord, AnalysisError> {
        let report = classify(g, params.flat_limit)?;
        Ok(ScanRecord {
            n: g.n(),
            edges: report.edges,
            psi: report.psi,
            supersolvable: report.supersolvable,
            chordal: report.chordal,
            characteristic_polynomial: report.characteristic_polynomial,
            exponents: report.exponents,
            factored: report.factored,
            verdict: report.verdict,
        })
    };
    let records: Vec<ScanRecord> = if params.parallel {
        instances
            .par_iter()
            .map(classify_one)
            .collect::<Result<_, _>>()?
    } else {
        instances.iter().map(classify_one).collect::<Result<_, _>>()?
    };

    let mut counts = BTreeMap::new();
    for record in &records {
        *counts.entry(record.verdict.tag().to_owned()).or_insert(0usize) += 1;
    }
    let undetermined = records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.verdict == FreenessVerdict::Undetermined)
        .map(|(i, _)| i)
        .collect();
    Ok(ScanReport {
        max_n: params.max_n,
        pool: params.pool.iter().map(format_rational).collect(),
        max_psi: params.max_psi,
        instances: records.len(),
        counts,
        undetermined,
        records,
    })
}

/// Plain-text summary table for terminal output.
pub fn render_scan_table(report: &ScanReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "scanned {} instances (n <= {}, pool {{{}}}, at most {} weights per vertex)\n",
        report.instances,
        report.max_n,
        report.pool.join(", "),
        report.max_psi
    ));
    for (verdict, count) in &report.counts {
        out.push_str(&format!("  {verdict:<28} {count}\n"));
    }
    if report.undetermined.is_empty() {
        out.push_str("no undetermined instances\n");
    } else {
        out.push_str("undetermined instances:\n");
        for &i in &report.undetermined {
            let r = &report.records[i];
            out.push_str(&format!(
                "  n={} edges={:?} psi={:?} chi={}\n",
                r.n, r.edges, r.psi, r.characteristic_polynomial
            ));
        }
    }
    out
}

/// All connected labeled graphs on `n` vertices, by edge bitmask.
fn connected_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    let mut graphs = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = PsiGraph::new(n, &edges, vec![vec![]; n]).expect("enumerated edges are valid");
        if g.is_connected() {
            graphs.push(edges);
        }
    }
    graphs
}

/// Weight subsets of the pool with at most `max_psi` elements, sorted.
fn weight_choices(pool: &[Rational], max_psi: usize) -> Vec<Vec<Rational>> {
    let mut choices = Vec::new();
    for mask in 0u32..1 << pool.len() {
        if (mask.count_ones() as usize) > max_psi {
            continue;
        }
        let mut set: Vec<Rational> = pool
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &w)| w)
            .collect();
        set.sort();
        choices.push(set);
    }
    choices.sort();
    choices
}

type InstanceKey = (Vec<(usize, usize)>, Vec<Vec<Rational>>);

fn instance_key(g: &PsiGraph) -> InstanceKey {
    (
        g.edges().to_vec(),
        (0..g.n()).map(|v| g.psi(v).iter().copied().collect()).collect(),
    )
}

/// The lexicographically least relabeling of the instance.
fn canonical_key(g: &PsiGraph) -> InstanceKey {
    let n = g.n();
    let mut best: Option<InstanceKey> = None;
    permute(n, &mut |perm| {
        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        let mut psi: Vec<Vec<Rational>> = vec![Vec::new(); n];
        for v in 0..n {
            psi[perm[v]] = g.psi(v).iter().copied().collect();
        }
        let key = (edges, psi);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    });
    best.expect("at least the identity permutation")
}

fn permute(n: usize, visit: &mut impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    heap_permutations(&mut perm, n, visit);
}

fn heap_permutations(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        visit(perm);
        return;
    }
    for i in 0..k {
        heap_permutations(perm, k - 1, visit);
        if k % 2 == 0 {
            perm.swap(i, k - 1);
        } else {
            perm.swap(0, k - 1);
        }
    }
}

/// Connected instances within bounds whose labeling is already the
/// canonical one — exactly one representative per isomorphism class.
fn enumerate_instances(params: &ScanParams) -> Vec<PsiGraph> {
    let choices = weight_choices(&params.pool, params.max_psi);
    let mut instances = Vec::new();
    for n in 1..=params.max_n {
        for edges in connected_graphs(n) {
            let mut pick = vec![0usize; n];
            loop {
                let psi: Vec<Vec<Rational>> =
                    pick.iter().map(|&c| choices[c].clone()).collect();
                let g = PsiGraph::new(n, &edges, psi).expect("weight choices are distinct");
                if instance_key(&g) == canonical_key(&g) {
                    instances.push(g);
                }
                let mut pos = 0;
                loop {
                    if pos == n {
                        break;
                    }
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
        }
    }
    instances
}
