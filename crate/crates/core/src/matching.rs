//! Maximum bipartite matching (Hopcroft-Karp) and the bottleneck perfect
//! matching solver built on top of it.

use std::collections::VecDeque;

use thiserror::Error;

use crate::tree::Vertex;

const NIL: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("weight matrix must be square with {expected} entries per row, row {row} has {found}")]
    NotSquare {
        expected: usize,
        row: usize,
        found: usize,
    },
    #[error("both sides of the instance contain dummy slots")]
    DummiesOnBothSides,
    #[error("slot id list has length {found}, expected {expected}")]
    SlotCount { expected: usize, found: usize },
    #[error("no perfect matching exists even at the largest weight")]
    NoPerfectMatching,
    #[error("brute force is limited to p <= {max}, got p = {p}")]
    TooLarge { p: usize, max: usize },
}

/// What sits in one slot of a bipartite side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Vertex(Vertex),
    Dummy,
}

impl Slot {
    pub fn is_dummy(self) -> bool {
        matches!(self, Slot::Dummy)
    }

    pub fn vertex(self) -> Option<Vertex> {
        match self {
            Slot::Vertex(v) => Some(v),
            Slot::Dummy => None,
        }
    }
}

/// A complete bipartite graph on `p + p` slots with integer edge weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedBipartiteInstance {
    p: usize,
    weights: Vec<u32>,
    left: Vec<Slot>,
    right: Vec<Slot>,
}

impl WeightedBipartiteInstance {
    /// Instance whose slots are all real, labelled by their index.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self, MatchingError> {
        let ids: Vec<Slot> = (0..rows.len()).map(Slot::Vertex).collect();
        Self::new(rows, ids.clone(), ids)
    }

    pub fn new(
        rows: &[Vec<u32>],
        left: Vec<Slot>,
        right: Vec<Slot>,
    ) -> Result<Self, MatchingError> {
        let p = rows.len();
        let mut weights = Vec::with_capacity(p * p);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != p {
                return Err(MatchingError::NotSquare {
                    expected: p,
                    row,
                    found: r.len(),
                });
            }
            weights.extend_from_slice(r);
        }
        for side in [&left, &right] {
            if side.len() != p {
                return Err(MatchingError::SlotCount {
                    expected: p,
                    found: side.len(),
                });
            }
        }
        if left.iter().any(|s| s.is_dummy()) && right.iter().any(|s| s.is_dummy()) {
            return Err(MatchingError::DummiesOnBothSides);
        }
        Ok(WeightedBipartiteInstance {
            p,
            weights,
            left,
            right,
        })
    }

    pub fn size(&self) -> usize {
        self.p
    }

    pub fn weight(&self, i: usize, j: usize) -> u32 {
        self.weights[i * self.p + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.weights[i * self.p..(i + 1) * self.p]
    }

    pub fn left(&self) -> &[Slot] {
        &self.left
    }

    pub fn right(&self) -> &[Slot] {
        &self.right
    }

    pub fn left_real(&self) -> usize {
        self.left.iter().filter(|s| !s.is_dummy()).count()
    }

    pub fn right_real(&self) -> usize {
        self.right.iter().filter(|s| !s.is_dummy()).count()
    }

    /// Adjacency of the spanning subgraph keeping edges of weight `<= threshold`.
    pub fn threshold_graph(&self, threshold: u32) -> Vec<Vec<usize>> {
        (0..self.p)
            .map(|i| {
                (0..self.p)
                    .filter(|&j| self.weight(i, j) <= threshold)
                    .collect()
            })
            .collect()
    }

    /// Distinct weights, ascending.
    pub fn distinct_weights(&self) -> Vec<u32> {
        let mut w = self.weights.clone();
        w.sort_unstable();
        w.dedup();
        w
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    /// `(left slot, right slot)`, sorted by left slot.
    pub pairs: Vec<(usize, usize)>,
    /// Largest matched weight; `None` for unweighted matchings.
    pub bottleneck: Option<u32>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_perfect(&self, p: usize) -> bool {
        self.pairs.len() == p
    }

    /// No slot is used twice on either side.
    pub fn is_valid(&self, p: usize) -> bool {
        let mut left = vec![false; p];
        let mut right = vec![false; p];
        self.pairs.iter().all(|&(i, j)| {
            i < p
                && j < p
                && !std::mem::replace(&mut left[i], true)
                && !std::mem::replace(&mut right[j], true)
        })
    }
}

/// Maximum-cardinality matching of the bipartite graph on `p + p` slots
/// where left slot `i` may be matched to any right slot in `allowed[i]`.
///
/// Left slots and their neighbor lists are scanned in the given order, so the
/// result is deterministic.
pub fn hopcroft_karp(p: usize, allowed: &[Vec<usize>]) -> Matching {
    let mut match_left = vec![NIL; p];
    let mut match_right = vec![NIL; p];
    let mut dist = vec![0usize; p];

    loop {
        // Layer free left slots, then alternate along matched edges.
        let mut queue = VecDeque::new();
        for i in 0..p {
            if match_left[i] == NIL {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = NIL;
            }
        }
        let mut found_free = false;
        while let Some(i) = queue.pop_front() {
            for &j in &allowed[i] {
                let k = match_right[j];
                if k == NIL {
                    found_free = true;
                } else if dist[k] == NIL {
                    dist[k] = dist[i] + 1;
                    queue.push_back(k);
                }
            }
        }
        if !found_free {
            break;
        }
        let mut augmented = false;
        for i in 0..p {
            if match_left[i] == NIL
                && augment(i, allowed, &mut match_left, &mut match_right, &mut dist)
            {
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }

    let pairs = match_left
        .iter()
        .enumerate()
        .filter(|&(_, &j)| j != NIL)
        .map(|(i, &j)| (i, j))
        .collect();
    Matching {
        pairs,
        bottleneck: None,
    }
}

fn augment(
    i: usize,
    allowed: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &j in &allowed[i] {
        let k = match_right[j];
        let ok = k == NIL
            || (dist[k] == dist[i] + 1 && augment(k, allowed, match_left, match_right, dist));
        if ok {
            match_left[i] = j;
            match_right[j] = i;
            return true;
        }
    }
    dist[i] = NIL;
    false
}

/// Perfect matching minimizing the largest matched weight.
///
/// Binary search over the distinct weights; at each pivot `w` Hopcroft-Karp
/// runs on the subgraph of edges with weight `<= w`. The last perfect matching
/// found is returned.
pub fn solve_optimal_perfect_matching(
    inst: &WeightedBipartiteInstance,
) -> Result<Matching, MatchingError> {
    let p = inst.size();
    if p == 0 {
        return Ok(Matching {
            pairs: Vec::new(),
            bottleneck: Some(0),
        });
    }
    let weights = inst.distinct_weights();
    let (mut lo, mut hi) = (0usize, weights.len());
    let mut best: Option<(u32, Matching)> = None;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let w = weights[mid];
        let m = hopcroft_karp(p, &inst.threshold_graph(w));
        if m.is_perfect(p) {
            best = Some((w, m));
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let (_, mut m) = best.ok_or(MatchingError::NoPerfectMatching)?;
    // The pivot is an upper bound; the attained maximum is the exact value.
    m.bottleneck = m.pairs.iter().map(|&(i, j)| inst.weight(i, j)).max();
    Ok(m)
}

pub const BRUTE_FORCE_MAX_P: usize = 8;

/// Minimum over all `p!` perfect matchings of the largest matched weight.
pub fn brute_force_bottleneck(inst: &WeightedBipartiteInstance) -> Result<u32, MatchingError> {
    let p = inst.size();
    if p > BRUTE_FORCE_MAX_P {
        return Err(MatchingError::TooLarge {
            p,
            max: BRUTE_FORCE_MAX_P,
        });
    }
    let mut used = vec![false; p];
    let mut best = u32::MAX;
    permute(inst, 0, 0, &mut used, &mut best);
    Ok(if p == 0 { 0 } else { best })
}

fn permute(
    inst: &WeightedBipartiteInstance,
    i: usize,
    running: u32,
    used: &mut [bool],
    best: &mut u32,
) {
    if i == inst.size() {
        *best = (*best).min(running);
        return;
    }
    for j in 0..inst.size() {
        if !used[j] {
            used[j] = true;
            permute(inst, i + 1, running.max(inst.weight(i, j)), used, best);
            used[j] = false;
        }
    }
}
