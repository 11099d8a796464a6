//! Uniform random labeled trees from Prüfer sequences.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tree::{Tree, TreeError, Vertex};

/// Decode a Prüfer sequence over `0..seq.len() + 2` into a tree.
pub fn prufer_decode(seq: &[Vertex]) -> Result<Tree, TreeError> {
    let n = seq.len() + 2;
    if let Some(&v) = seq.iter().find(|&&v| v >= n) {
        return Err(TreeError::VertexOutOfRange { vertex: v, n });
    }
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<Vertex>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let Reverse(leaf) = leaves.pop().expect("a leaf always remains");
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.push(Reverse(v));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a, b));
    Tree::new(n, &edges)
}

/// Random labeled tree on `n` vertices, uniform over all `n^(n-2)` labeled
/// trees and deterministic for a fixed `(n, seed)`.
pub fn gen_random_tree(n: usize, seed: u64) -> Result<Tree, TreeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tree(n, &mut rng)
}

pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Tree, TreeError> {
    match n {
        0 => Err(TreeError::Empty),
        1 => Ok(Tree::single_vertex()),
        _ => {
            let seq: Vec<Vertex> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            prufer_decode(&seq)
        }
    }
}

/// The same tree with vertex `v` renamed to `perm[v]`.
pub fn relabel(tree: &Tree, perm: &[Vertex]) -> Result<Tree, TreeError> {
    let edges: Vec<_> = tree
        .edges()
        .iter()
        .map(|&(a, b)| (perm[a], perm[b]))
        .collect();
    Tree::new(tree.len(), &edges)
}

/// Random relabeled copy of `tree`.
pub fn shuffled_copy<R: Rng + ?Sized>(tree: &Tree, rng: &mut R) -> Tree {
    use rand::seq::SliceRandom;
    let mut perm: Vec<Vertex> = (0..tree.len()).collect();
    perm.shuffle(rng);
    relabel(tree, &perm).expect("a permutation preserves tree structure")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn tiny_sizes() {
        assert_eq!(gen_random_tree(0, 1), Err(TreeError::Empty));
        assert_eq!(gen_random_tree(1, 7).unwrap(), Tree::single_vertex());
        for seed in 0..5 {
            assert_eq!(gen_random_tree(2, seed).unwrap().edges(), &[(0, 1)]);
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(gen_random_tree(8, 42), gen_random_tree(8, 42));
    }

    #[test]
    fn decode_known_sequence() {
        // Classic textbook sequence [3, 3, 3, 4] on 6 vertices.
        let t = prufer_decode(&[3, 3, 3, 4]).unwrap();
        assert_eq!(t.edges(), &[(0, 3), (1, 3), (2, 3), (3, 4), (4, 5)]);
    }

    #[test]
    fn uniform_over_sixteen_labeled_trees() {
        let samples = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts: HashMap<Vec<(Vertex, Vertex)>, usize> = HashMap::new();
        for _ in 0..samples {
            let t = random_tree(4, &mut rng).unwrap();
            *counts.entry(t.edges().to_vec()).or_default() += 1;
        }
        assert_eq!(counts.len(), 16);
        let expected = samples as f64 / 16.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // chi-square critical value, 15 degrees of freedom, alpha = 0.001
        assert!(chi2 < 37.697, "chi2 = {chi2}");
    }

    #[test]
    fn relabel_changes_ids_only() {
        let t = Tree::path(3).unwrap();
        let r = relabel(&t, &[2, 0, 1]).unwrap();
        assert_eq!(r.edges(), &[(0, 1), (0, 2)]);
    }
}
