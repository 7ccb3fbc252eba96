//! Random chordal graphs for stress-testing the elimination machinery.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::psi_graph::PsiGraph;

/// Builds a random chordal graph on `n` vertices with empty weight sets.
///
/// Vertices are inserted in random order, each attached to a random
/// clique among the earlier vertices, so every vertex is simplicial at
/// insertion time and the reverse insertion order is a perfect
/// elimination order.
pub fn random_chordal(n: usize, rng: &mut impl Rng) -> PsiGraph {
    let mut insertion: Vec<usize> = (0..n).collect();
    insertion.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut adjacency = vec![vec![false; n]; n];
    for (i, &v) in insertion.iter().enumerate() {
        if i == 0 {
            continue;
        }
        let want = rng.gen_range(0..=i);
        let mut earlier: Vec<usize> = insertion[..i].to_vec();
        earlier.shuffle(rng);
        let mut clique: Vec<usize> = Vec::new();
        for u in earlier {
            if clique.len() == want {
                break;
            }
            if clique.iter().all(|&c| adjacency[c][u]) {
                clique.push(u);
            }
        }
        for &u in &clique {
            adjacency[v][u] = true;
            adjacency[u][v] = true;
            edges.push((u.min(v), u.max(v)));
        }
    }
    PsiGraph::new(n, &edges, vec![Vec::new(); n]).expect("generator produces a simple graph")
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn generated_graphs_are_chordal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(0..10);
            let g = random_chordal(n, &mut rng);
            assert!(g.chordality().is_chordal(), "not chordal: {:?}", g.edges());
        }
    }

    #[test]
    fn generation_is_deterministic_under_a_fixed_seed() {
        let a = random_chordal(8, &mut ChaCha8Rng::seed_from_u64(11));
        let b = random_chordal(8, &mut ChaCha8Rng::seed_from_u64(11));
        assert_eq!(a, b);
    }
}
