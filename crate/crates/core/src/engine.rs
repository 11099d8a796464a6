//! Hausdorff distance between unrooted trees.
//!
//! The larger-diameter tree is rooted at a central vertex and the other tree
//! at every vertex in turn. For each rooting, the distance between the covers
//! of an optimal top-down amalgam is computed bottom-up: the cost of a vertex
//! pair is the bottleneck of an optimal perfect matching between their child
//! sets, where an unmatched child (paired with a dummy slot) costs its
//! height + 1. The winning rooting's matchings are then filtered into a
//! rooted isomorphism between top-down subtrees.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::matching::{
    solve_optimal_perfect_matching, MatchingError, Slot, WeightedBipartiteInstance,
};
use crate::tree::{RootedTree, Tree, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("child instance requested for a leaf pair ({0}, {1})")]
    LeafPair(Vertex, Vertex),
    #[error("vertex {0} has two candidate partners under the same parent pair")]
    AmbiguousReconstruction(Vertex),
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

/// A set of `(first tree vertex, second tree vertex)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct PairSet {
    pairs: BTreeSet<(Vertex, Vertex)>,
}

impl PairSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: Vertex, w: Vertex) -> bool {
        self.pairs.insert((v, w))
    }

    pub fn contains(&self, v: Vertex, w: Vertex) -> bool {
        self.pairs.contains(&(v, w))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs sorted by first, then second coordinate.
    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.pairs.iter().copied()
    }

    /// Every `w` with `(v, w)` in the set.
    pub fn partners_of(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.pairs.range((v, 0)..=(v, Vertex::MAX)).map(|&(_, w)| w)
    }

    pub fn extend<I: IntoIterator<Item = (Vertex, Vertex)>>(&mut self, iter: I) {
        self.pairs.extend(iter);
    }

    pub fn swapped(&self) -> PairSet {
        self.iter().map(|(v, w)| (w, v)).collect()
    }
}

impl FromIterator<(Vertex, Vertex)> for PairSet {
    fn from_iter<I: IntoIterator<Item = (Vertex, Vertex)>>(iter: I) -> Self {
        PairSet {
            pairs: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HausdorffResult {
    pub distance: u32,
    /// Root of the caller's first tree.
    pub root1: Vertex,
    /// Root of the caller's second tree.
    pub root2: Vertex,
    /// Rooted isomorphism between top-down subtrees, as
    /// `(first tree vertex, second tree vertex)` pairs.
    pub mapping: PairSet,
    /// The trees were exchanged internally so that the first has the larger
    /// diameter. Informational only.
    pub swapped: bool,
}

/// Complete bipartite graph between the children of `v` and of `u`.
///
/// Left slots are `v`'s children, right slots `u`'s; the smaller side is
/// padded with dummies. An edge to a dummy costs the real endpoint's height
/// + 1; real pairs are priced by `child_weight`, called in row-major order.
pub fn build_child_instance<F>(
    rt1: &RootedTree<'_>,
    v: Vertex,
    rt2: &RootedTree<'_>,
    u: Vertex,
    mut child_weight: F,
) -> Result<WeightedBipartiteInstance, EngineError>
where
    F: FnMut(Vertex, Vertex) -> u32,
{
    if rt1.is_leaf(v) || rt2.is_leaf(u) {
        return Err(EngineError::LeafPair(v, u));
    }
    let cv = rt1.children(v);
    let cu = rt2.children(u);
    let p = cv.len().max(cu.len());
    let pad = |c: &[Vertex]| -> Vec<Slot> {
        c.iter()
            .map(|&x| Slot::Vertex(x))
            .chain(std::iter::repeat(Slot::Dummy))
            .take(p)
            .collect()
    };
    let left = pad(cv);
    let right = pad(cu);
    let rows: Vec<Vec<u32>> = left
        .iter()
        .map(|&x| {
            right
                .iter()
                .map(|&y| match (x, y) {
                    (Slot::Dummy, Slot::Vertex(y)) => rt2.height(y) + 1,
                    (Slot::Vertex(x), Slot::Dummy) => rt1.height(x) + 1,
                    (Slot::Vertex(x), Slot::Vertex(y)) => child_weight(x, y),
                    (Slot::Dummy, Slot::Dummy) => unreachable!("dummies pad one side only"),
                })
                .collect()
        })
        .collect();
    Ok(WeightedBipartiteInstance::new(&rows, left, right)?)
}

/// Distance between the covers of an optimal top-down amalgam of the subtree
/// of `rt1` rooted at `v` and the subtree of `rt2` rooted at `u`.
///
/// Every optimal matching solved on the way, minus its dummy edges, is added
/// to `acc`.
pub fn optimal_top_down_common_subtree(
    rt1: &RootedTree<'_>,
    v: Vertex,
    rt2: &RootedTree<'_>,
    u: Vertex,
    acc: &mut PairSet,
) -> Result<u32, EngineError> {
    if rt1.is_leaf(v) || rt2.is_leaf(u) {
        return Ok(rt1.height(v).max(rt2.height(u)));
    }
    let mut failure = None;
    let inst = build_child_instance(
        rt1,
        v,
        rt2,
        u,
        |x, y| match optimal_top_down_common_subtree(rt1, x, rt2, y, acc) {
            Ok(d) => d,
            Err(e) => {
                failure.get_or_insert(e);
                0
            }
        },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let m = solve_optimal_perfect_matching(&inst)?;
    for &(i, j) in &m.pairs {
        if let (Slot::Vertex(x), Slot::Vertex(y)) = (inst.left()[i], inst.right()[j]) {
            acc.insert(x, y);
        }
    }
    Ok(m.bottleneck.unwrap_or(0))
}

/// Filter the accumulated matchings into the rooted isomorphism: starting
/// from the root pair, walk the first tree in preorder and keep `(v, w)` when
/// `(parent(v), parent(w))` is already kept.
pub fn reconstruction_of_mapping(
    rt1: &RootedTree<'_>,
    rt2: &RootedTree<'_>,
    m_prime: &PairSet,
) -> Result<PairSet, EngineError> {
    let n2 = rt2.len();
    // image[v] for v already placed in the mapping
    let mut image: Vec<Option<Vertex>> = vec![None; rt1.len()];
    let mut mapping = PairSet::new();
    image[rt1.root()] = Some(rt2.root());
    mapping.insert(rt1.root(), rt2.root());

    for &v in &rt1.preorder()[1..] {
        let Some(z) = rt1.parent(v).and_then(|p| image[p]) else {
            continue;
        };
        let mut chosen = None;
        for w in m_prime.partners_of(v) {
            if w < n2 && rt2.parent(w) == Some(z) {
                if chosen.is_some() {
                    return Err(EngineError::AmbiguousReconstruction(v));
                }
                chosen = Some(w);
            }
        }
        if let Some(w) = chosen {
            image[v] = Some(w);
            mapping.insert(v, w);
        }
    }
    Ok(mapping)
}

/// Outcome of one fixed rooting of both trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedSolution {
    pub distance: u32,
    pub accumulator: PairSet,
}

pub fn solve_rooted(
    rt1: &RootedTree<'_>,
    rt2: &RootedTree<'_>,
) -> Result<RootedSolution, EngineError> {
    let mut acc = PairSet::new();
    let distance = optimal_top_down_common_subtree(rt1, rt1.root(), rt2, rt2.root(), &mut acc)?;
    Ok(RootedSolution {
        distance,
        accumulator: acc,
    })
}

/// Rooted distance for every candidate root of the smaller-diameter tree,
/// with the larger tree rooted at its smallest central vertex. Indexed by
/// candidate root. Inputs are in internal orientation.
pub fn rooted_distances(big: &Tree, small: &Tree) -> Result<Vec<u32>, EngineError> {
    let r1 = big.metric_summary().center[0];
    let rt1 = RootedTree::at(big, r1);
    (0..small.len())
        .map(|u| solve_rooted(&rt1, &RootedTree::at(small, u)).map(|s| s.distance))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    #[default]
    Sequential,
    /// Candidate roots are evaluated on the current rayon pool.
    Rayon,
}

/// Exact Hausdorff distance and a witnessing mapping.
pub fn hausdorff_distance(t1: &Tree, t2: &Tree) -> HausdorffResult {
    hausdorff_distance_with(t1, t2, Parallelism::Sequential)
}

pub fn hausdorff_distance_with(t1: &Tree, t2: &Tree, mode: Parallelism) -> HausdorffResult {
    try_hausdorff_distance(t1, t2, mode).expect("engine invariant violated")
}

/// Fallible form; an `Err` signals a defect (a broken internal invariant),
/// never bad input.
pub fn try_hausdorff_distance(
    t1: &Tree,
    t2: &Tree,
    mode: Parallelism,
) -> Result<HausdorffResult, EngineError> {
    let swapped = t1.metric_summary().diameter < t2.metric_summary().diameter;
    let (big, small) = if swapped { (t2, t1) } else { (t1, t2) };

    let r1 = big.metric_summary().center[0];
    let rt1 = RootedTree::at(big, r1);
    let run = |u: Vertex| -> Result<(Vertex, RootedSolution), EngineError> {
        let rt2 = RootedTree::at(small, u);
        Ok((u, solve_rooted(&rt1, &rt2)?))
    };

    // Strict improvement keeps the smallest minimizing root.
    let (r2, best) = match mode {
        Parallelism::Sequential => {
            let mut best: Option<(Vertex, RootedSolution)> = None;
            for u in 0..small.len() {
                let (u, sol) = run(u)?;
                if best.as_ref().is_none_or(|(_, b)| sol.distance < b.distance) {
                    best = Some((u, sol));
                }
            }
            best
        }
        Parallelism::Rayon => {
            let all: Vec<_> = (0..small.len())
                .into_par_iter()
                .map(run)
                .collect::<Result<_, _>>()?;
            all.into_iter().min_by_key(|(u, s)| (s.distance, *u))
        }
    }
    .expect("a tree has at least one vertex");

    let rt2 = RootedTree::at(small, r2);
    let mapping = reconstruction_of_mapping(&rt1, &rt2, &best.accumulator)?;

    Ok(if swapped {
        HausdorffResult {
            distance: best.distance,
            root1: r2,
            root2: r1,
            mapping: mapping.swapped(),
            swapped,
        }
    } else {
        HausdorffResult {
            distance: best.distance,
            root1: r1,
            root2: r2,
            mapping,
            swapped,
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverDistanceReport {
    /// The mapping is a rooted isomorphism between top-down subtrees of the
    /// two trees rooted at the result's roots.
    pub valid: bool,
    /// Largest hop distance from any vertex to the mapped part of its own
    /// tree; `None` when nothing is mapped in range.
    pub cover_distance: Option<u32>,
    /// `valid` and `cover_distance == result.distance`.
    pub consistent: bool,
}

/// Independently re-check a result: structural validity of the mapping and
/// the cover distance by multi-source BFS in each tree.
pub fn verify_mapping(t1: &Tree, t2: &Tree, result: &HausdorffResult) -> CoverDistanceReport {
    let in_range = t1.contains(result.root1)
        && t2.contains(result.root2)
        && result
            .mapping
            .iter()
            .all(|(v, w)| t1.contains(v) && t2.contains(w));
    if !in_range {
        return CoverDistanceReport {
            valid: false,
            cover_distance: None,
            consistent: false,
        };
    }

    let rt1 = RootedTree::at(t1, result.root1);
    let rt2 = RootedTree::at(t2, result.root2);
    let mut fwd = vec![None; t1.len()];
    let mut back = vec![None; t2.len()];
    let mut injective = true;
    for (v, w) in result.mapping.iter() {
        injective &= fwd[v].replace(w).is_none();
        injective &= back[w].replace(v).is_none();
    }
    let has_root = result.mapping.contains(result.root1, result.root2);
    let parent_closed = result
        .mapping
        .iter()
        .all(|(v, w)| match (rt1.parent(v), rt2.parent(w)) {
            (None, None) => true,
            (Some(pv), Some(pw)) => result.mapping.contains(pv, pw),
            _ => false,
        });
    let valid = injective && has_root && parent_closed;

    let d1 = t1.multi_source_distances(result.mapping.iter().map(|(v, _)| v));
    let d2 = t2.multi_source_distances(result.mapping.iter().map(|(_, w)| w));
    let cover_distance = d1
        .into_iter()
        .chain(d2)
        .collect::<Option<Vec<u32>>>()
        .map(|d| d.into_iter().max().unwrap_or(0));

    CoverDistanceReport {
        valid,
        cover_distance,
        consistent: valid && cover_distance == Some(result.distance),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig5() -> (Tree, Tree) {
        let t1 = Tree::new(
            11,
            &[
                (0, 1),
                (1, 5),
                (2, 4),
                (3, 4),
                (4, 5),
                (5, 10),
                (6, 7),
                (7, 8),
                (8, 10),
                (9, 10),
            ],
        )
        .unwrap();
        let t2 = Tree::new(8, &[(0, 3), (1, 3), (2, 3), (3, 7), (4, 5), (5, 6), (6, 7)]).unwrap();
        (t1, t2)
    }

    fn rows(inst: &WeightedBipartiteInstance) -> Vec<Vec<u32>> {
        (0..inst.size()).map(|i| inst.row(i).to_vec()).collect()
    }

    #[test]
    fn child_instance_root_pair() {
        let (t1, t2) = fig5();
        let (rt1, rt2) = (t1.root_at(10).unwrap(), t2.root_at(7).unwrap());
        let inst = build_child_instance(&rt1, 10, &rt2, 7, |_, _| 99).unwrap();
        assert_eq!(
            inst.left(),
            &[Slot::Vertex(5), Slot::Vertex(8), Slot::Vertex(9)]
        );
        assert_eq!(
            inst.right(),
            &[Slot::Vertex(3), Slot::Vertex(6), Slot::Dummy]
        );
        let col: Vec<u32> = (0..3).map(|i| inst.weight(i, 2)).collect();
        assert_eq!(col, vec![3, 3, 1]);
    }

    #[test]
    fn child_instance_without_dummies() {
        let t = Tree::star(4).unwrap();
        let rt = t.root_at(0).unwrap();
        let inst = build_child_instance(&rt, 0, &rt, 0, |_, _| 0).unwrap();
        assert_eq!(inst.size(), 3);
        assert_eq!(inst.left_real(), 3);
        assert_eq!(inst.right_real(), 3);
    }

    #[test]
    fn child_instance_rejects_leaves() {
        let (t1, t2) = fig5();
        let (rt1, rt2) = (t1.root_at(10).unwrap(), t2.root_at(7).unwrap());
        assert_eq!(
            build_child_instance(&rt1, 9, &rt2, 7, |_, _| 0),
            Err(EngineError::LeafPair(9, 7))
        );
    }

    #[test]
    fn child_instance_v6_u7() {
        let (t1, t2) = fig5();
        let (rt1, rt2) = (t1.root_at(10).unwrap(), t2.root_at(7).unwrap());
        let mut acc = PairSet::new();
        let inst = build_child_instance(&rt1, 5, &rt2, 6, |x, y| {
            optimal_top_down_common_subtree(&rt1, x, &rt2, y, &mut acc).unwrap()
        })
        .unwrap();
        assert_eq!(rows(&inst), vec![vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn leaf_stop_rule() {
        let path = Tree::path(4).unwrap();
        let single = Tree::single_vertex();
        let rt1 = single.root_at(0).unwrap();
        let rt2 = path.root_at(0).unwrap();
        let mut acc = PairSet::new();
        assert_eq!(
            optimal_top_down_common_subtree(&rt1, 0, &rt2, 0, &mut acc),
            Ok(3)
        );
        assert!(acc.is_empty());
    }

    #[test]
    fn reconstruction_from_worked_accumulator() {
        let (t1, t2) = fig5();
        let (rt1, rt2) = (t1.root_at(10).unwrap(), t2.root_at(7).unwrap());
        // (v1,u5) (v2,u3) (v2,u6) (v3,u5) (v5,u2) (v6,u4) (v7,u5) (v8,u1) (v8,u6) (v9,u7)
        let m_prime: PairSet = [
            (0, 4),
            (1, 2),
            (1, 5),
            (2, 4),
            (4, 1),
            (5, 3),
            (6, 4),
            (7, 0),
            (7, 5),
            (8, 6),
        ]
        .into_iter()
        .collect();
        let m = reconstruction_of_mapping(&rt1, &rt2, &m_prime).unwrap();
        // (v11,u8) (v6,u4) (v2,u3) (v5,u2) (v9,u7) (v8,u6) (v7,u5)
        let expected: PairSet = [(10, 7), (5, 3), (1, 2), (4, 1), (8, 6), (7, 5), (6, 4)]
            .into_iter()
            .collect();
        assert_eq!(m, expected);
    }

    #[test]
    fn reconstruction_edge_cases() {
        let (t1, t2) = fig5();
        let (rt1, rt2) = (t1.root_at(10).unwrap(), t2.root_at(7).unwrap());
        let m = reconstruction_of_mapping(&rt1, &rt2, &PairSet::new()).unwrap();
        assert_eq!(m.iter().collect::<Vec<_>>(), vec![(10, 7)]);

        // (v1,u5) alone: parent pair (v2,u6) is never placed.
        let orphan: PairSet = [(0, 4)].into_iter().collect();
        let m = reconstruction_of_mapping(&rt1, &rt2, &orphan).unwrap();
        assert_eq!(m.len(), 1);

        // two siblings of u4 offered for v6
        let bad: PairSet = [(5, 3), (5, 6)].into_iter().collect();
        assert_eq!(
            reconstruction_of_mapping(&rt1, &rt2, &bad),
            Err(EngineError::AmbiguousReconstruction(5))
        );
    }

    #[test]
    fn fig5_and_fig6_rootings() {
        let (t1, t2) = fig5();
        let rt1 = t1.root_at(10).unwrap();
        assert_eq!(
            solve_rooted(&rt1, &t2.root_at(7).unwrap())
                .unwrap()
                .distance,
            1
        );
        assert_eq!(
            solve_rooted(&rt1, &t2.root_at(6).unwrap())
                .unwrap()
                .distance,
            2
        );
    }

    #[test]
    fn fig5_distance_and_witness() {
        let (t1, t2) = fig5();
        let r = hausdorff_distance(&t1, &t2);
        assert_eq!(r.distance, 1);
        assert!(!r.swapped);
        assert_eq!(r.root1, 10);
        let rep = verify_mapping(&t1, &t2, &r);
        assert!(rep.valid && rep.consistent);
        assert_eq!(rep.cover_distance, Some(1));
    }

    #[test]
    fn swapped_result_is_in_caller_orientation() {
        let (t1, t2) = fig5();
        let r = hausdorff_distance(&t2, &t1);
        assert!(r.swapped);
        assert_eq!(r.distance, 1);
        assert_eq!(r.root2, 10);
        assert!(verify_mapping(&t2, &t1, &r).consistent);
    }

    #[test]
    fn identical_trees() {
        let (t1, _) = fig5();
        let r = hausdorff_distance(&t1, &t1);
        assert_eq!(r.distance, 0);
        assert_eq!(r.mapping.len(), t1.len());
        assert!(verify_mapping(&t1, &t1, &r).consistent);
    }

    #[test]
    fn short_path_vs_longer_path() {
        let r = hausdorff_distance(&Tree::path(2).unwrap(), &Tree::path(4).unwrap());
        assert_eq!(r.distance, 1);
        assert!(r.swapped);
    }

    #[test]
    fn verifier_rejects_broken_mapping() {
        let (t1, t2) = fig5();
        let mut r = hausdorff_distance(&t1, &t2);
        // Drop the pair under the root whose first vertex has mapped children.
        let (v, w) = r
            .mapping
            .iter()
            .find(|&(v, _)| {
                v != r.root1
                    && r.mapping
                        .iter()
                        .any(|(c, _)| t1.root_at(r.root1).unwrap().parent(c) == Some(v))
            })
            .unwrap();
        r.mapping = r.mapping.iter().filter(|&p| p != (v, w)).collect();
        let rep = verify_mapping(&t1, &t2, &r);
        assert!(!rep.valid);
        assert!(!rep.consistent);
    }

    #[test]
    fn parallel_matches_sequential() {
        let (t1, t2) = fig5();
        assert_eq!(
            hausdorff_distance_with(&t1, &t2, Parallelism::Rayon),
            hausdorff_distance(&t1, &t2)
        );
    }
}
